r = 5
print(r)
acc = 1 + 2
mix = acc + 3
acc = mix + acc
print(acc + mix + 4 + mix + acc)
