"""End-to-end acceptance suite, one test per criterion.

Each test records a PASS/FAIL line through the `report` fixture; the
lines are printed in the terminal summary.
"""

import itertools
import math
from fractions import Fraction

import numpy as np

from listrec.bounds import (
    entropy_expansion_around_uniform,
    entropy_expansion_large_q,
    entropy_q,
    expansion_radius,
    hamming_volume,
)
from listrec.checkers import (
    check_avg_radius_list_recoverable,
    check_zero_error_lr,
    find_all_bad_witness,
    find_average_bad_witness,
    verify_all_bad,
    verify_average_bad,
)
from listrec.cli import cli
from listrec.codes import enumerate_codewords, min_distance, sample_random_linear_code
from listrec.fqla import WitnessPair, matmul, project_pair, rank
from listrec.galois import field_of_order
from listrec.harness import ExperimentSpec, failure_flags
from listrec.pluralities import (
    average_agreement,
    is_all_bad,
    is_average_bad,
    optimal_center,
    plurality_vector,
)
from listrec.sigma import (
    extract_low_dim_subset,
    extraction_fraction,
    find_subset_dim_le_p,
    is_good_average,
    lemma_subset_hypothesis,
    moment_bound_checks,
    sigma_exact,
    sigma_mc,
)


def random_message_set(rng, F, d, L):
    """L distinct vectors of F^d; half the time most of them lie in a small subspace."""
    q = F.q
    L = min(L, q**d)
    if rng.random() < 0.5:
        s = int(rng.integers(1, d + 1))
        B = rng.integers(0, q, size=(s, d))
        pts = matmul(F, rng.integers(0, q, size=(4 * L, s)), B)
        pts = np.vstack([pts, rng.integers(0, q, size=(L, d))])
    else:
        pts = rng.integers(0, q, size=(4 * L, d))
    _, idx = np.unique(pts, axis=0, return_index=True)
    return pts[np.sort(idx)][:L]


# 1


def test_c1_witness_equivalence(report):
    rng = np.random.default_rng(1)
    eps_grid = [Fraction(1, 4), Fraction(1, 2), Fraction(2, 3), Fraction(3, 4), Fraction(1)]
    codes = mismatches = checks = 0
    for _ in range(200):
        q = int(rng.choice([2, 3, 4]))
        n = int(rng.integers(1, 7))
        k = int(rng.integers(1, min(3, n) + 1))
        C = sample_random_linear_code(field_of_order(q), n, Fraction(k, n), int(rng.integers(2**32)))
        codes += 1
        for ell in (1, 2):
            for L in range(1, 5):
                for eps in eps_grid:
                    direct = check_avg_radius_list_recoverable(C, eps, ell, L).holds
                    w = find_average_bad_witness(C, eps, ell, L, C.k)
                    ok = direct == (w is None) and (w is None or verify_average_bad(C, w, eps, ell, L))
                    mismatches += not ok
                    checks += 1
                z = check_zero_error_lr(C, ell, L).holds
                w = find_all_bad_witness(C, ell, L)
                ok = z == (w is None) and (w is None or verify_all_bad(C, w, ell, L))
                mismatches += not ok
                checks += 1
    passed = codes >= 200 and mismatches == 0
    report(1, "witness-pair verdict equals direct verdict", passed,
           f"{codes} codes, {checks} verdict pairs, {mismatches} mismatches")
    assert passed


# 2


def best_center_bruteforce(F, w, ell):
    cols = w.inner_products().tolist()
    n, L = w.n, w.L
    best = Fraction(-1)
    choices = list(itertools.product(range(F.q), repeat=ell))
    for z in itertools.product(choices, repeat=n):
        hits = sum(cols[i][j] in z[i] for i in range(n) for j in range(L))
        best = max(best, Fraction(hits, L * n))
    return best


def test_c2_optimal_center(report):
    rng = np.random.default_rng(2)
    count = bad = 0
    while count < 150:
        q = int(rng.choice([2, 3, 4]))
        ell = int(rng.integers(1, 3))
        n = int(rng.integers(1, 7))
        if q ** (ell * n) > 2**12 or ell > q:
            continue
        F = field_of_order(q)
        d = int(rng.integers(1, 4))
        w = WitnessPair(F, rng.integers(0, q, size=(n, d)), random_message_set(rng, F, d, int(rng.integers(1, 7))))
        count += 1
        bad += average_agreement(w, optimal_center(w, ell)) != best_center_bruteforce(F, w, ell)
    report(2, "argtop center attains the exhaustive maximum", bad == 0, f"{count} instances, {bad} mismatches")
    assert bad == 0


# 3


def test_c3_projection(report):
    rng = np.random.default_rng(3)
    tables = pls = fullrank = verdicts = implications = 0
    full_cases = 0
    for t in range(1000):
        q = int(rng.choice([2, 3, 5]))
        F = field_of_order(q)
        d = int(rng.integers(1, 6))
        n = int(rng.integers(1, 9))
        X = rng.integers(0, q, size=(n, d))
        if t % 2 == 0 and n >= d:
            X[:d] = np.eye(d, dtype=int)
        w = WitnessPair(F, X, random_message_set(rng, F, d, int(rng.integers(1, 9))))
        w2 = project_pair(w)
        tables += not np.array_equal(w.inner_products(), w2.inner_products())
        full = rank(F, X) == d
        full_cases += full
        if full:
            fullrank += rank(F, w2.X) != w2.d
        for ell in {1, min(2, q)}:
            pls += plurality_vector(w, ell) != plurality_vector(w2, ell)
            for L in (1, 2, 3):
                pairs = [(is_all_bad(w, L, None, ell), is_all_bad(w2, L, None, ell))]
                for eps in (Fraction(1, 2), Fraction(3, 4), 1):
                    pairs.append((is_average_bad(w, L, None, eps, ell), is_average_bad(w2, L, None, eps, ell)))
                for a, b in pairs:
                    if full:
                        verdicts += a != b
                    else:
                        implications += a and not b
    failures = tables + pls + fullrank + verdicts + implications
    report(3, "projection preserves tables, pluralities and verdicts", failures == 0,
           f"1000 pairs ({full_cases} with full-rank X): table {tables}, plurality {pls}, "
           f"full-rank {fullrank}, verdict {verdicts}, implication {implications} failures")
    assert failures == 0


# 4


def extraction_instances(rng, count):
    zetas = [Fraction(z, 20) for z in (1, 2, 4, 5, 10)]
    orders = [2, 3, 4, 5, 7, 8, 9, 16]
    out = []
    while len(out) < count:
        q = int(rng.choice(orders))
        d = int(rng.integers(1, 6))
        while q**d > 10**5:
            d -= 1
        F = field_of_order(q)
        L = int(rng.integers(1, 41))
        if q == 16:
            ell, zeta = 2, Fraction(1, 2)
        else:
            ell, zeta = 1, zetas[int(rng.integers(len(zetas)))]
        out.append((F, d, random_message_set(rng, F, d, L), zeta, ell))
    return out


def largest_premise_T(F, Lam, p):
    """Largest integer T meeting the bounded-dimension subset premise, which fails for every larger T."""
    if not lemma_subset_hypothesis(F, Lam, p, 0):
        return None
    lo, hi = 0, len(Lam)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if lemma_subset_hypothesis(F, Lam, p, mid):
            lo = mid
        else:
            hi = mid - 1
    return lo


def test_c4_extraction_contracts(report):
    rng = np.random.default_rng(4)
    inst = extraction_instances(rng, 520)
    ran = violating = fails_45 = 0
    for F, d, Lam, zeta, ell in inst:
        ran += 1
        ex = extract_low_dim_subset(F, Lam, d, zeta, ell)
        if ex is None:
            continue
        violating += 1
        need = len(Lam) * extraction_fraction(F.q, d, zeta)
        ok = ex.subset.dim <= d * (1 - zeta) and len(ex.subset) >= need and ex.meets_contract
        fails_45 += not ok
    # bounded-dimension subsets: for each (Lam, p) take the largest T meeting its premise
    fails_43 = premises = 0
    for F, d, Lam, _, _ in inst[:300]:
        for p in range(1, d):
            T = largest_premise_T(F, Lam, p)
            if T is None:
                continue
            premises += 1
            s = find_subset_dim_le_p(F, Lam, p, T)
            fails_43 += s is None or s.dim > p or len(s) < T
    passed = ran >= 500 and fails_45 == 0 and fails_43 == 0
    report(4, "extraction contracts", passed,
           f"{ran} instances, {violating} violating sets, {fails_45} extraction failures; "
           f"{premises} subset premises, {fails_43} subset failures")
    assert passed


# 5


def test_c5_moment_bounds(report):
    rng = np.random.default_rng(5)
    good = 0
    viol = {"centered": 0, "raw": 0, "large": 0}
    worst = None
    tries = 0
    while good < 250 and tries < 5000:
        tries += 1
        q = int(rng.choice([2, 3, 4, 5, 7, 8, 9]))
        d = int(rng.integers(1, 5))
        while q**d > 6561:
            d -= 1
        F = field_of_order(q)
        zeta = Fraction(1, 20)
        # small sets first: the smallest good sets are the hardest cases
        L = int(rng.choice([1, 2, 3, 5, 8, 13, 21, 34]))
        Lam = random_message_set(rng, F, d, L)
        if not is_good_average(F, Lam, d, zeta, 1).good:
            continue
        good += 1
        for c in moment_bound_checks(F, Lam, d, zeta, 1):
            if c.kind in viol and not c.holds:
                viol[c.kind] += 1
                if c.kind == "centered" and worst is None:
                    worst = (q, d, Lam.tolist(), c.p, c.value)
    passed = good > 0 and sum(viol.values()) == 0
    detail = f"{good} good sets; violations centered {viol['centered']}, raw {viol['raw']}, large {viol['large']}"
    if worst is not None:
        q, d, lam, p, v = worst
        detail += f"; e.g. q={q} d={d} Lambda={lam} p={p}: E(pl-1/q)^p={v} > (2/q)^p={Fraction(2, q) ** p}"
    report(5, "moment bounds on good sets", passed, detail)
    assert passed, detail


# 6


def test_c6_sigma_mc_calibration(report):
    rng = np.random.default_rng(6)
    within = 0
    for _ in range(100):
        q = int(rng.choice([2, 3, 4, 5]))
        d = int(rng.integers(1, 5))
        F = field_of_order(q)
        Lam = random_message_set(rng, F, d, int(rng.integers(1, 13)))
        p = int(rng.integers(1, 4))
        exact = float(sigma_exact(F, Lam, p))
        est = sigma_mc(F, Lam, p, 10**5, rng)
        within += abs(est.mean - exact) <= 3 * est.stderr + 1e-12
    report(6, "Monte Carlo sigma within 3 standard errors", within >= 99, f"{within}/100 within")
    assert within >= 99


# 7


def test_c7_entropy_numerics(report):
    worst_u = worst_l = worst_v = 0.0
    for q in (2, 3, 4, 5, 8, 16, 256):
        r = expansion_radius(q)
        for x in np.linspace(-r / 2, r / 2, 21):
            worst_u = max(worst_u, abs(entropy_expansion_around_uniform(x, q, 20) - entropy_q(1 - 1 / q - x, q)))
    for q in (2, 3, 4, 16, 256, 1024):
        for y in np.linspace(0.05, 0.95, 19):
            worst_l = max(worst_l, abs(entropy_expansion_large_q(y, q, 20) - entropy_q(y, q)))
    n = 1000
    for q in (2, 4):
        for rho in np.arange(0.1, 1 - 1 / q + 1e-9, 0.05):
            v = hamming_volume(q, n, Fraction(round(rho * 1000), 1000))
            worst_v = max(worst_v, abs(math.log(v, q) / n - entropy_q(rho, q)))
    passed = worst_u <= 1e-6 and worst_l <= 1e-6 and worst_v <= 0.01
    report(7, "entropy expansions and volume exponent", passed,
           f"max errors: uniform {worst_u:.2e}, large-q {worst_l:.2e}, volume {worst_v:.4f}")
    assert passed


# 8


def test_c8_rate_curves(report, tmp_path):
    rows = {}
    for q in (2, 4, 1024):
        out = tmp_path / f"rates_q{q}.csv"
        assert cli(["rates", "--q", str(q), "--zeta", "0.01", "--ell", "1", "--out", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "eps,R0,R1,R,binding"
        rows[q] = [ln.split(",") for ln in lines[1:]]
    min_bad = sum(float(r[3]) != min(float(r[1]), float(r[2])) for v in rows.values() for r in v)
    window = [r for r in rows[2] if 0.51 - 1e-9 <= float(r[0]) <= 0.80 + 1e-9]
    order_bad = sum(not float(r[2]) < float(r[1]) for r in window)
    passed = len(window) == 30 and order_bad == 0 and min_bad == 0
    report(8, "rate curves", passed,
           f"q=2 window points {len(window)}, R1>=R0 at {order_bad}; "
           f"{sum(map(len, rows.values()))} rows for q in (2, 4, 1024), R != min at {min_bad}")
    assert passed


# 9


def test_c9_code_model(report):
    rng = np.random.default_rng(9)
    dist_bad = codes = 0
    for q, k in [(2, 1), (2, 3), (2, 6), (2, 10), (3, 2), (3, 4), (3, 6), (4, 3), (4, 5), (5, 2), (5, 4), (7, 3), (8, 3), (16, 2), (32, 2)]:
        for _ in range(3):
            n = k + int(rng.integers(0, 6))
            C = sample_random_linear_code(field_of_order(q), n, Fraction(k, n), int(rng.integers(2**32)))
            words = enumerate_codewords(C)
            weights = np.count_nonzero(words[1:], axis=1)
            by_weight = Fraction(int(weights.min()), n)
            diff = (words[:, None, :] != words[None, :, :]).sum(axis=2)
            diff[np.arange(len(words)), np.arange(len(words))] = n + 1
            by_pairs = Fraction(int(diff.min()), n)
            dist_bad += not (min_distance(C) == by_weight == by_pairs)
            codes += 1
    F2 = field_of_order(2)
    repro = all(sample_random_linear_code(F2, 12, Fraction(1, 3), s) == sample_random_linear_code(F2, 12, Fraction(1, 3), s)
                for s in range(50))
    full = sum(sample_random_linear_code(F2, 12, Fraction(1, 3), s).dimension() == 4 for s in range(10**4))
    freq = full / 10**4
    need = 1 - 2 * 2.0 ** -(12 - 4)
    passed = dist_bad == 0 and repro and freq >= need
    report(9, "code model", passed,
           f"{codes} codes, {dist_bad} distance mismatches; reproducible {repro}; "
           f"full-rank frequency {freq:.4f} >= {need:.4f}")
    assert passed


# 10


def test_c10_monotonicity(report):
    F = field_of_order(2)
    props = [("LD", {"rho": "3/8"}), ("ARLD", {"rho": "3/8"}), ("LR", {"alpha": "5/8"}), ("ARLR", {"eps": "5/8"})]
    trials = 60
    inversions_L = inversions_R = 0
    for prop, params in props:
        flags = {}
        for k in (2, 3, 4):
            for L in range(1, 7):
                spec = ExperimentSpec(F, 8, Fraction(k, 8), prop, dict(params, L=L), trials, master_seed=10)
                flags[k, L] = failure_flags(spec)
        for k in (2, 3, 4):
            for L in range(2, 7):
                inversions_L += sum(b and not a for a, b in zip(flags[k, L - 1], flags[k, L]))
        for L in range(1, 7):
            for k in (3, 4):
                inversions_R += sum(a and not b for a, b in zip(flags[k - 1, L], flags[k, L]))
    passed = inversions_L == 0 and inversions_R == 0
    report(10, "failure rates monotone in L and R", passed,
           f"{len(props)} properties x 3 rates x 6 list sizes x {trials} paired trials; "
           f"inversions in L {inversions_L}, in R {inversions_R}")
    assert passed
