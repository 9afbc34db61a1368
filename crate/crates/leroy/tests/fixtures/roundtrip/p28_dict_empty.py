d = {}
d[5] = 6
print(d)
