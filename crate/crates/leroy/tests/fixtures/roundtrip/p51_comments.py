# leading comment
x = 1  # trailing

print(x)
