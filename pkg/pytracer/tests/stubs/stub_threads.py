import threading

import stubml

worker = threading.Thread(target=stubml.read, args=("data.csv",))
worker.start()
worker.join()
