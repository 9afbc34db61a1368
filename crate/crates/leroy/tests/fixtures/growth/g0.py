u = 1 + 2
v = u + 3 + u
w = v + u + v
print(v + w)
