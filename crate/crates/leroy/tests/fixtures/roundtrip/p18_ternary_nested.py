x = 5
print(1 if x == 5 else 2 if x == 6 else 3)
