def sq(a):
    return a + a
print(sq(3) + sq(4))
