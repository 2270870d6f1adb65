"""Derive the walk-count coefficient tables from scratch and verify them.

The de-biasing machinery rests on two coefficient families: the moment
polynomials g(t) that estimate iota' A^t iota from observed moments, and
the diffusion coefficients b_T(t, delta) assembled from them.  Both are
derived here by pure combinatorial enumeration and checked, integer by
integer, against the embedded reference tables.
"""

from centreg import (
    count_even_path_walks,
    derive_b,
    derive_g,
    evaluate_b,
    reference_b,
    reference_g,
)

print("admissible walk counts (length -> {unique edges: count}):")
for t in (2, 4, 6, 8, 10):
    print(f"  t={t:>2}: {count_even_path_walks(t).counts}")

print("\nderived g(t) vs reference:")
for t in range(1, 9):
    g = derive_g(t)
    match = "ok" if g.coeffs == reference_g(t).coeffs else "MISMATCH"
    print(f"  t={t}: {g.coeffs}   [{match}]")

print("\nderived b_T vs reference:")
for T in range(1, 5):
    b = derive_b(T)
    match = "ok" if b.coeffs == reference_b(T).coeffs else "MISMATCH"
    print(f"  T={T}: {len(b.coeffs)} nonzero coefficients  [{match}]")

# evaluating the bias polynomial on a concrete graph: the triangle has
# moments iota' Ahat^t iota = 6, 12, 24, ...
moments = [3.0, 6.0, 12.0, 24.0]
print(f"\nb_1 evaluated on the triangle at delta=0.5: {evaluate_b(reference_b(1), 0.5, moments)}")
print("(= 0.25 * 6, the noise second-moment proxy)")
