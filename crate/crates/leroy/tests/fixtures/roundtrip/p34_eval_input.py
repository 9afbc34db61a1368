x = eval(input())
print(x)
