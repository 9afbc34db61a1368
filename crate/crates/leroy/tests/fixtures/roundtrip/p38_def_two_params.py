def add2(a, b):
    return a + b
print(add2(1, 2))
