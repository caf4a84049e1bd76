"""Serialization and seeded Monte Carlo experiments over random codes.

Each trial t of an experiment draws its code from its own generator,
seeded from SeedSequence((master_seed, t)). A trial's code depends only
on the master seed and the trial index, so results do not change with
the worker count or the order in which trials finish.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import checkers
from .codes import (
    LinearCode,
    dimension_for_rate,
    random_generator,
    sample_uniform_words,
)
from .errors import ListRecError
from .fqla import as_array, check_distinct, rank
from .galois import GF
from .rational import as_fraction

CODE_SCHEMA = "listrec.code/1"
LAMBDA_SCHEMA = "listrec.lambda/1"
EXPERIMENT_SCHEMA = "listrec.experiment/1"
RESULT_SCHEMA = "listrec.experiment-result/1"
OUT_DIR_ENV = "LISTREC_OUT_DIR"

PROPERTIES = ("LD", "ARLD", "LR", "ARLR", "ZELR")


# files


def code_to_json(C: LinearCode) -> dict:
    return {
        "schema": CODE_SCHEMA,
        "field": C.field.to_dict(),
        "n": C.n,
        "k": C.k,
        "generator": C.G.tolist(),
        "seed": C.seed,
    }


def code_from_json(d: dict) -> LinearCode:
    _expect_schema(d, CODE_SCHEMA)
    F = GF.from_dict(d["field"])
    G = np.array(d["generator"], dtype=np.int64).reshape(d["n"], d["k"])
    return LinearCode(F, G, d.get("seed"))


def lambda_to_json(F: GF, Lam) -> dict:
    Lam = np.atleast_2d(np.asarray(Lam, dtype=np.int64))
    return {"schema": LAMBDA_SCHEMA, "field": F.to_dict(), "d": Lam.shape[1], "vectors": Lam.tolist()}


def lambda_from_json(d: dict) -> tuple[GF, np.ndarray]:
    _expect_schema(d, LAMBDA_SCHEMA)
    F = GF.from_dict(d["field"])
    Lam = as_array(F, np.array(d["vectors"], dtype=np.int64).reshape(-1, d["d"]))
    check_distinct(Lam)
    return F, Lam


def _expect_schema(d: dict, schema: str) -> None:
    got = d.get("schema", schema)
    if got != schema:
        raise ValueError(f"expected schema {schema!r}, found {got!r}")


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


# experiments


@dataclass
class ExperimentSpec:
    """A batch of random codes checked for one property.

    params holds rho (LD, ARLD), alpha (LR) or eps (ARLR), plus ell and L.
    Rational parameters may be given as strings such as "1/2".
    """

    field: GF
    n: int
    R: object
    property: str
    params: dict
    trials: int
    master_seed: int = 0
    parallelism: int = 1
    condition_on_full_rank: bool = False

    def __post_init__(self):
        if self.property not in PROPERTIES:
            raise ValueError(f"property must be one of {PROPERTIES}")
        if self.trials < 1:
            raise ValueError("trials must be positive")
        self.k = dimension_for_rate(self.n, self.R)

    def to_dict(self) -> dict:
        return {
            "schema": EXPERIMENT_SCHEMA,
            "field": self.field.to_dict(),
            "n": self.n,
            "R": str(self.R),
            "property": self.property,
            "params": {k: str(v) for k, v in self.params.items()},
            "trials": self.trials,
            "master_seed": self.master_seed,
            "parallelism": self.parallelism,
            "condition_on_full_rank": self.condition_on_full_rank,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentSpec":
        _expect_schema(d, EXPERIMENT_SCHEMA)
        return cls(
            field=GF.from_dict(d["field"]),
            n=int(d["n"]),
            R=as_fraction(d["R"]),
            property=d["property"],
            params=dict(d["params"]),
            trials=int(d["trials"]),
            master_seed=int(d.get("master_seed", 0)),
            parallelism=int(d.get("parallelism", 1)),
            condition_on_full_rank=bool(d.get("condition_on_full_rank", False)),
        )


@dataclass
class ExperimentResult:
    spec: dict
    source: str
    failures: int
    trials: int
    wilson95: tuple
    seeds: list
    errors: list = dc_field(default_factory=list)
    wall_time: float = 0.0

    @property
    def failure_rate(self) -> float:
        return self.failures / self.trials

    def to_dict(self) -> dict:
        return {
            "schema": RESULT_SCHEMA,
            "spec": self.spec,
            "source": self.source,
            "failures": self.failures,
            "trials": self.trials,
            "failure_rate": self.failure_rate,
            "wilson95": list(self.wilson95),
            "seeds": self.seeds,
            "errors": self.errors,
            "wall_time": self.wall_time,
        }


def wilson_interval(k: int, n: int, z: float = 1.959963984540054) -> tuple[float, float]:
    """Wilson score interval for k successes in n trials."""
    if n == 0:
        return (0.0, 1.0)
    p = k / n
    den = 1 + z * z / n
    mid = (p + z * z / (2 * n)) / den
    half = z * math.sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / den
    return (max(0.0, mid - half), min(1.0, mid + half))


def trial_seed(master_seed: int, trial: int) -> int:
    """64-bit seed of one trial, a hash of (master_seed, trial)."""
    a, b = np.random.SeedSequence([int(master_seed), int(trial)]).generate_state(2, dtype=np.uint32)
    return int(a) << 32 | int(b)


def run_check(C, prop: str, params: dict) -> checkers.Verdict:
    """Run the checker for `prop` with parameters from `params`."""
    P = params
    L = int(P["L"])
    ell = int(P.get("ell", 1))
    if prop == "LD":
        return checkers.check_list_decodable(C, as_fraction(P["rho"]), L)
    if prop == "ARLD":
        return checkers.check_avg_radius_list_decodable(C, as_fraction(P["rho"]), L)
    if prop == "LR":
        return checkers.check_list_recoverable(C, as_fraction(P["alpha"]), ell, L)
    if prop == "ARLR":
        return checkers.check_avg_radius_list_recoverable(C, as_fraction(P["eps"]), ell, L)
    if prop == "ZELR":
        return checkers.check_zero_error_lr(C, ell, L)
    raise ValueError(f"unknown property {prop!r}")


def sample_trial_code(spec: ExperimentSpec, seed: int, source: str = "linear"):
    rng = np.random.default_rng(seed)
    F = spec.field
    if source == "uniform":
        return sample_uniform_words(F, spec.n, F.q**spec.k, rng)
    while True:
        G = random_generator(F, spec.n, spec.k, rng)
        if not spec.condition_on_full_rank or rank(F, G) == spec.k:
            return LinearCode(F, G, seed)


def _trial(args) -> tuple[int, bool | None, str | None]:
    spec_dict, trial, source = args
    spec = ExperimentSpec.from_dict(spec_dict)
    seed = trial_seed(spec.master_seed, trial)
    try:
        C = sample_trial_code(spec, seed, source)
        return seed, run_check(C, spec.property, spec.params).holds, None
    except ListRecError as e:
        return seed, None, f"{type(e).__name__}: {e}"


def run_experiment(spec: ExperimentSpec, source: str = "linear") -> ExperimentResult:
    """Estimate the probability that a random code violates the property.

    source="linear" samples random linear codes; source="uniform" samples
    q^k iid uniform words. Trials whose checker raises are recorded in
    `errors` and count as neither pass nor failure.
    """
    t0 = time.perf_counter()
    sd = spec.to_dict()
    jobs = [(sd, t, source) for t in range(spec.trials)]
    if spec.parallelism > 1:
        with ProcessPoolExecutor(spec.parallelism) as ex:
            out = list(ex.map(_trial, jobs, chunksize=max(1, spec.trials // (4 * spec.parallelism))))
    else:
        out = [_trial(j) for j in jobs]
    failures = sum(1 for _, holds, _ in out if holds is False)
    done = sum(1 for _, holds, _ in out if holds is not None)
    errors = [{"trial": t, "error": e} for t, (_, _, e) in enumerate(out) if e]
    return ExperimentResult(
        spec=sd,
        source=source,
        failures=failures,
        trials=done,
        wilson95=wilson_interval(failures, done),
        seeds=[s for s, _, _ in out],
        errors=errors,
        wall_time=time.perf_counter() - t0,
    )


def compare_random_vs_linear(spec: ExperimentSpec) -> dict[str, ExperimentResult]:
    """Failure rates of random linear codes and of q^k iid uniform words, same seeds."""
    return {"linear": run_experiment(spec, "linear"), "uniform": run_experiment(spec, "uniform")}


def failure_flags(spec: ExperimentSpec, source: str = "linear") -> list[bool]:
    """Per-trial failure indicators, for paired comparisons across specs."""
    sd = spec.to_dict()
    return [holds is False for _, holds, _ in map(_trial, [(sd, t, source) for t in range(spec.trials)])]
