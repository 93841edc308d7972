import stubml

first = stubml.read("a.csv")
second = stubml.read("b.csv")
