z = 5
u = 1 + 2
v = u + 3 + u
w = v + u + v
print(w + v + 1)
