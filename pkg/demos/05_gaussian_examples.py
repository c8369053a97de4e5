"""
Gaussian prototype on the two example lattices
==============================================

H0 has kernel exp(-pi (x^2 + y^2)).  Each identifier in a catalog is tried;
the record keeps the best response lower Riesz bound.  The sufficient
conditions from the continuous setting are reported next to the finite
outcome, not asserted.
"""

from opident import experiments as ex

print("variant 1: columns (alpha, 0, 0, 0) and (0, beta, alpha, 0)")
for alpha, beta in [(2, 2), (1.5, 1.5), (0.5, 0.5)]:
    for L in (64, 128, 256):
        rec = ex.run_gaussian_example(1, alpha, beta, L)
        print(f"  ({alpha}, {beta}) L={L:3d} D2={rec.D2:.3f} closes={rec.closes!s:5} "
              f"identifiable={rec.identifiable!s:5} best={rec.identifier:16s} "
              f"{rec.extra['predicates']}")

# the finite model is always rational, so the continuous "irrational" regime is
# only a label here
print("variant 2: columns (alpha, 0, 0, 0) and (0, 0, alpha, beta)")
for alpha, beta in [(2, 2), (2, 2**0.5)]:
    rec = ex.run_gaussian_example(2, alpha, beta, 64)
    print(f"  ({alpha}, {beta:.4f}) identifiable={rec.identifiable} regime={rec.extra['predicates']['regime']}")
