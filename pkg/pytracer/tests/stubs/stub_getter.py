import stubml

data = stubml.read("data.csv")
model = stubml.fit(data)
value = model.coefficient
