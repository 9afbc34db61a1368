t = 9
acc = 1 + 2
mix = acc + 3
acc = mix + acc
print(acc + mix + 4 + mix + acc)
print(t)
