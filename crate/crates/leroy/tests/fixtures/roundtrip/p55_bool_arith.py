print(True + True + False)
