import stubml_kw

result = stubml_kw.train("data.csv", epochs=5, rate=0.5)
