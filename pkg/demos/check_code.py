"""Sample a small random linear code and run every checker on it."""

from fractions import Fraction

from listrec.checkers import (
    check_avg_radius_list_decodable,
    check_avg_radius_list_recoverable,
    check_list_decodable,
    check_list_recoverable,
    check_zero_error_lr,
)
from listrec.codes import min_distance, sample_random_linear_code
from listrec.galois import field

F = field(3)
C = sample_random_linear_code(F, n=6, R=Fraction(1, 3), rng=1)
print("generator (n x k):\n", C.G)
print("min distance", min_distance(C))

for v in [
    check_list_decodable(C, Fraction(1, 3), L=3),
    check_list_recoverable(C, Fraction(1, 2), ell=2, L=3),
    check_zero_error_lr(C, ell=2, L=3),
    check_avg_radius_list_decodable(C, Fraction(1, 3), L=3),
    check_avg_radius_list_recoverable(C, Fraction(3, 4), ell=2, L=3),
]:
    print(f"{v.property:5} holds={v.holds!s:5} statistic={v.statistic} witness={v.witness}")
