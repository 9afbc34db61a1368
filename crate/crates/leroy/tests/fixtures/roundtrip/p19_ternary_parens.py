x = (1 if False else 2) + 3
print(x)
