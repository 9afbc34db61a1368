x = eval(input())
ys = [x, x + 1]
print(ys if x else [0])
