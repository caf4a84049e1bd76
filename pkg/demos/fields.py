"""Field arithmetic and linear algebra over GF(2^8) and GF(7)."""

from listrec.fqla import rank, row_reduce
from listrec.galois import FieldElement, field

F = field(2, 8)
print(F, "modulus", F.modulus)
a, b = FieldElement(F, 0x57), FieldElement(F, 0x83)
print("0x57 * 0x83 =", hex(int(a * b)))
print("0x53^-1 =", hex(int(FieldElement(F, 0x53).inverse())))

F7 = field(7)
M = [[1, 2, 3], [2, 4, 6], [0, 1, 5]]
R, piv = row_reduce(F7, M)
print("RREF over GF(7):\n", R, "\npivots", piv, "rank", rank(F7, M))
