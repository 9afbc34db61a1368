a = [1]
b = a
print(a is b)
print(a is [1])
