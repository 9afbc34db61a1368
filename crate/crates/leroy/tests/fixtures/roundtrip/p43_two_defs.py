def f(a):
    return a + 1
def g(a):
    return f(a) + 1
print(g(1))
