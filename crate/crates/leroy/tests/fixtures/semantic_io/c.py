total = 0
step = eval(input())
total = total + step
big = [1, 2, 3, 4] + [5, 6]
big[0] = total + 7
print(big)
print(big[0] + 1)
