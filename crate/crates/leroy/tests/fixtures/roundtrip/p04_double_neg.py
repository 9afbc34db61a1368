n = --9
print(n)
