b = True and False
print(b)
