x = 2
print(0)
q = [60] + [x if 1 else x] + [7, 8, 9, 10, 11]
print(q[0] + x)
