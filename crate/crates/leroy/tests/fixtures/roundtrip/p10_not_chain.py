b = not not True
print(b)
