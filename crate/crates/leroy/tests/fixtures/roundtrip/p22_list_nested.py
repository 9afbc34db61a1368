xs = [1, [2, 3], [True]]
print(xs[1])
