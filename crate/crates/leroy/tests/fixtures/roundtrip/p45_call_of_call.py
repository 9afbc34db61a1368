def f(a):
    return a + 1
print(f(f(1)))
