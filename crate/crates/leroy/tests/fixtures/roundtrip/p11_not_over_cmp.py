b = not 1 == 2
print(b)
