"""Tiny stand-in library for tracer tests."""


class Data:
    def __init__(self, rows):
        self.rows = list(rows)


class Model:
    def __init__(self, coef=0.0):
        self.coef = coef

    def fit(self, data):
        self.coef = sum(data.rows)

    @property
    def coefficient(self):
        return self.coef


def read(path):
    return Data([1.0, 2.0, 3.0])


def transform(data):
    return Data([row * 2.0 for row in data.rows])


def fit(data):
    model = Model()
    model.fit(data)
    return model
