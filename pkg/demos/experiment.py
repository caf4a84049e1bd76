"""Failure rates of random linear codes versus uniformly random word lists."""

from fractions import Fraction

from listrec.galois import field
from listrec.harness import ExperimentSpec, compare_random_vs_linear

for prop in ("LD", "ARLD"):
    for L in (2, 3, 4, 5):
        spec = ExperimentSpec(
            field=field(2), n=8, R=Fraction(3, 8), property=prop,
            params={"rho": "1/4", "L": L}, trials=100, master_seed=7,
        )
        out = compare_random_vs_linear(spec)
        row = "  ".join(
            f"{src}: {r.failures}/{r.trials} [{r.wilson95[0]:.2f}, {r.wilson95[1]:.2f}]"
            for src, r in out.items()
        )
        print(f"{prop:4} L={L}  {row}")
