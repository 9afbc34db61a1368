def work(a):
    acc = a + 1
    mix = acc + a + 2
    acc = mix + acc + 3
    return acc + mix
print(work(1))
print(work(5))
