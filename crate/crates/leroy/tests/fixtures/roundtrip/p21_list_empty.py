xs = []
print(xs)
