"""Exact integer lattice arithmetic, step by step.

Run with:  python3 demos/01_exact_lattices.py
"""

from icckit import (
    IntMatrix,
    IntPoly,
    Lattice,
    charpoly,
    cyclotomic_orders,
    cyclotomic_polynomial,
    hnf,
    kernel_lattice,
)

print("=== Hermite normal form ===")
a = IntMatrix.from_rows([[2, 4], [6, 8]])
h, u = hnf(a)
print(f"A = {a}")
print(f"H = {h}   (canonical basis of A's row lattice)")
print(f"U = {u}   with det(U) = {u.det()} and U@A == H: {u @ a == h}")

# The HNF depends only on the row lattice: remixing rows changes nothing.
remix = IntMatrix.from_rows([[8, 12], [6, 8]])  # row ops applied to A
print(f"hnf(remixed).H == H: {hnf(remix)[0] == h}")

print()
print("=== Integer kernels are pure sublattices ===")
m = IntMatrix.from_rows([[1, -1]])
k = kernel_lattice(m)
print(f"kernel of {m} = span{k.basis}")
print(f"(3, 3) in kernel: {(3, 3) in k},  (1, 2) in kernel: {(1, 2) in k}")

print()
print("=== Lattice intersection ===")
l1 = Lattice.from_rows(2, [(2, 0), (0, 1)])
l2 = Lattice.from_rows(2, [(1, 1)])
meet = l1.intersect(l2)
print(f"span{l1.basis} n span{l2.basis} = span{meet.basis}")

print()
print("=== Root-of-unity spectrum via cyclotomic trial division ===")
for rows in ([[0, -1], [1, 0]], [[2, 1], [1, 1]]):
    mat = IntMatrix.from_rows(rows)
    p = charpoly(mat)
    fac = cyclotomic_orders(p, mat.nrows)
    print(f"charpoly{mat} = {p}: cyclotomic orders {set(fac.orders) or '{}'}"
          f", all-cyclotomic = {fac.all_cyclotomic}")

print()
print("First cyclotomic polynomials (generated on demand):")
for n in (1, 2, 3, 4, 6, 12):
    print(f"  Phi_{n} = {cyclotomic_polynomial(n)}")
