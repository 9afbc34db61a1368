a = 1
b = 0
print(5 if a or b else 6)
