print(0 or [])
print([1] and {1: 2})
