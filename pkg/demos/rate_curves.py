"""Rate lower bounds for average-radius list recovery across eps."""

from listrec.bounds import cor_constantagr_window, eps_grid, rate_curve

for q, ell, zeta in [(2, 1, 0.01), (16, 2, 0.01), (256, 2, 0.05)]:
    lo, hi = cor_constantagr_window(q)
    pts = rate_curve(q, ell, zeta, eps_grid(round(ell / q + 0.01, 2), 0.99, 0.12))
    print(f"q={q} ell={ell} zeta={zeta}  window ({lo:.3f}, {hi:.3f})")
    for p in pts:
        print(f"  eps={p.eps:.2f}  R0={p.R0:+.4f}  R1={p.R1:+.4f}  R={p.R:+.4f}  binding {p.binding}")
