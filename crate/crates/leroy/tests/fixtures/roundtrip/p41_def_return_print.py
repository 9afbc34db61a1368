def shout(a):
    return print(a)
x = shout(7)
print(x)
