q = 7
print(q + 1)
