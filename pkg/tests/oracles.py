"""Frozen reference values.

Each group says where the numbers came from.  Values marked *independent*
were produced by code that shares nothing with the package (plain Fraction
loops or sympy) and then pasted here.
"""

from fractions import Fraction as F

# published sequences
SOMOS4_UNIT = [1, 1, 1, 1, 2, 3, 7, 23, 59, 314, 1529, 8209, 83313]
VIALLET_TAU_ONES = [2, 5, 29, 1241, 3642581]

# independent: x_{n+k} x_n = sum_j x_{n+k-j} x_{n+j} with Fraction arithmetic
SOMOS5_UNIT = [1, 1, 1, 1, 1, 2, 3, 5, 11, 37, 83, 274, 1217, 6161, 22833, 165713, 1249441, 9434290]
SOMOS6_UNIT = [1, 1, 1, 1, 1, 1, 3, 5, 9, 23, 75, 421, 1103, 5047, 41783, 281527, 2534423, 14161887]
SOMOS7_UNIT = [1, 1, 1, 1, 1, 1, 1, 3, 5, 9, 17, 41, 137, 769, 1925, 7203, 34081, 227321]
SOMOS8_FIRST_NONINTEGER = (17, F(420514, 7))

# independent: family(c) recurrence iterated by hand-written loops
DANA_SCOTT_ONES = [1, 1, 1, 1, 2, 3, 5, 13, 22, 41]
C0_ONES = [1, 1, 1, 1, 2, 3, 4, 9, 14, 19, 43]
DANA_SCOTT_B2_FIRST = [1, 1, 1, 1, 3, 5, 11]
C0_B2_FIRST = [1, 1, 1, 1, 3, 5, 7]

# independent: max-plus recurrence evaluated directly
TROPICAL_C3 = [0, 0, 0, 0, 1, 1, 4, 5, 12, 15, 33, 41, 88, 109, 232, 287, 609]
TROPICAL_C1 = [0, 0, 0, 0, 1, 1, 2, 3, 3, 4, 5, 5, 6, 7, 7, 8, 9]
TROPICAL_C2 = [0, 0, 0, 0, 1, 1, 3, 4, 6, 8, 10, 13, 15, 19, 22, 26, 30]

# golden value from the first symbolic run: generic Somos-8 stops being Laurent here
SOMOS8_SYMBOLIC_FAILURE = 16

# independent: EDS with x1 = 1 and (x2, x3, x4) = (1, -1, 1)
EDS_1_M1_1 = [1, 1, -1, 1, 2, -1, -3, -5, 7, -4, -23, 29]

# hand arithmetic
CHEB_T2_5_2 = F(23, 2)
CHEB_U2_5_2 = F(24)
CHEB_T3_9_2 = F(351)
CHEB_U3_9_2 = F(711)
DS_A = (F(64, 63), F(34, 63), F(20, 63))
DS_B = (F(-4, 9), F(-1, 9), F(1, 9))

# numeric targets
ENTROPY_C3 = 0.48121182505960347
GOLDEN_SQUARED = 2.618033988749895
VIALLET_TAU_RATE = 2.081018996624539  # largest root of g^4 - g^3 - 2g^2 - g + 1
