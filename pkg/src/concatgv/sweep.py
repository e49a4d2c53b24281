"""Experiment runner: seeded ensemble sweeps with CSV/JSON reporting.

Determinism contract: (config, master_seed) fully determines every output
byte.  Per-trial seeds are derived as hash(master_seed, trial_index), so
trials are independent and may run in any order; rows are always reported in
trial order and the aggregate is a deterministic fold.  Wall-clock time is
kept on the in-memory rows for interactive use but never serialized, since
the emitted files must be byte-identical across runs.
"""

from __future__ import annotations

import hashlib
import json
import statistics
import time
from dataclasses import dataclass, field as dc_field, fields as dc_fields
from fractions import Fraction
from typing import List, Optional, Tuple

from .certify import (
    bernoulli_p,
    C_DEFAULT,
    C_TILDE_DEFAULT,
    check_nice,
    d_pmf,
    entropy_hypothesis,
    soft_condition,
)
from .codes import BinaryCode, ConcatCode, OuterCode, min_distance, weight_distribution
from .field import make_field
from .linalg import sample_binary_code, sample_field_code
from .moments import moment_direct, moment_dual
from .rng import derive_seed

SCHEMA = "concatgv-sweep-v1"

EXACT_DISTANCE_LIMIT = 1 << 20  # exact when q^k <= this, else Monte Carlo
EXACT_NICENESS_LIMIT = 1 << 20  # niceness runs only when 2^(n0-k0) <= this


@dataclass(frozen=True)
class Budgets:
    distance: int = EXACT_DISTANCE_LIMIT
    niceness: int = EXACT_NICENESS_LIMIT
    soft: int = 1 << 20
    entropy: int = 1 << 20
    moments: int = 1 << 27
    mc_draws: int = 4000


@dataclass(frozen=True)
class Constants:
    c: float = C_DEFAULT
    c_tilde: float = C_TILDE_DEFAULT
    c_gamma: float = 1.0
    c_eta: float = 1.0
    tau: float = 0.25


@dataclass(frozen=True)
class Toggles:
    run_nice: bool = False
    run_soft: bool = False
    run_entropy: bool = False
    run_moments: bool = False
    r_list: Tuple[int, ...] = (2,)


@dataclass(frozen=True)
class SweepConfig:
    k0: int
    n0: int
    n: int
    k: int
    trials: int
    master_seed: int
    budgets: Budgets = dc_field(default_factory=Budgets)
    constants: Constants = dc_field(default_factory=Constants)
    toggles: Toggles = dc_field(default_factory=Toggles)
    equal_rate: bool = True

    def validate(self) -> None:
        if not 1 <= self.k0 <= self.n0:
            raise ValueError(f"need 1 <= k0 <= n0, got k0={self.k0}, n0={self.n0}")
        if not 1 <= self.k <= self.n:
            raise ValueError(f"need 1 <= k <= n, got k={self.k}, n={self.n}")
        if self.trials < 0:
            raise ValueError("trials must be nonnegative")
        if self.equal_rate and Fraction(self.k0, self.n0) != Fraction(self.k, self.n):
            raise ValueError(
                f"equal_rate requires k0/n0 == k/n, got {self.k0}/{self.n0} != {self.k}/{self.n}"
            )
        if self.toggles.run_nice:
            eps = Fraction(self.k0, self.n0)
            if not 0 < self.constants.tau < eps:
                raise ValueError(f"tau={self.constants.tau} outside (0, {float(eps)})")
            if (1 << (self.n0 - self.k0)) > self.budgets.niceness:
                raise ValueError("niceness check over budget for this config")
        for f in dc_fields(Budgets):
            if getattr(self.budgets, f.name) <= 0:
                raise ValueError(f"budget {f.name} must be positive")

    @property
    def eps(self) -> Fraction:
        return Fraction(self.k, self.n)

    def to_dict(self) -> dict:
        return {
            "k0": self.k0,
            "n0": self.n0,
            "n": self.n,
            "k": self.k,
            "trials": self.trials,
            "master_seed": self.master_seed,
            "budgets": {f.name: getattr(self.budgets, f.name) for f in dc_fields(Budgets)},
            "constants": {f.name: getattr(self.constants, f.name) for f in dc_fields(Constants)},
            "toggles": {
                "run_nice": self.toggles.run_nice,
                "run_soft": self.toggles.run_soft,
                "run_entropy": self.toggles.run_entropy,
                "run_moments": self.toggles.run_moments,
                "r_list": list(self.toggles.r_list),
            },
            "equal_rate": self.equal_rate,
        }


def _from_dict(cls, data: dict, where: str):
    names = {f.name for f in dc_fields(cls)}
    unknown = set(data) - names
    if unknown:
        raise ValueError(f"unknown config key(s) in {where}: {sorted(unknown)}")
    return data


def config_from_dict(data: dict) -> SweepConfig:
    """Build a SweepConfig from a parsed JSON document; unknown keys are errors."""
    top = dict(_from_dict(SweepConfig, data, "config"))
    if "budgets" in top:
        top["budgets"] = Budgets(**_from_dict(Budgets, top["budgets"], "budgets"))
    if "constants" in top:
        top["constants"] = Constants(**_from_dict(Constants, top["constants"], "constants"))
    if "toggles" in top:
        tog = dict(_from_dict(Toggles, top["toggles"], "toggles"))
        if "r_list" in tog:
            tog["r_list"] = tuple(tog["r_list"])
        top["toggles"] = Toggles(**tog)
    cfg = SweepConfig(**top)
    cfg.validate()
    return cfg


def config_hash(config: SweepConfig) -> str:
    canon = json.dumps(config.to_dict(), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode("ascii")).hexdigest()[:16]


@dataclass(frozen=True)
class SweepRow:
    trial: int
    seed_inner: int
    seed_outer: int
    rate: float
    distance: int
    rel_distance: float
    distance_exact: bool
    x_max: Optional[int]
    nice_ok: Optional[bool]
    soft_prob: Optional[float]
    soft_delta: Optional[float]
    soft_exact: Optional[bool]
    entropy_ok: Optional[bool]
    entropy_min: Optional[float]
    moments_equal: Optional[bool]
    gv_ok: bool
    wall_time_s: float  # in-memory only; never serialized


CSV_COLUMNS = [
    "trial",
    "seed_inner",
    "seed_outer",
    "rate",
    "distance",
    "rel_distance",
    "distance_exact",
    "x_max",
    "nice_ok",
    "soft_prob",
    "soft_delta",
    "soft_exact",
    "entropy_ok",
    "entropy_min",
    "moments_equal",
    "gv_ok",
]


def run_trial(config: SweepConfig, trial: int) -> SweepRow:
    t0 = time.perf_counter()
    ctx = make_field(config.k0)
    trial_seed = derive_seed(config.master_seed, trial)
    seed_inner = derive_seed(trial_seed, 0)
    seed_outer = derive_seed(trial_seed, 1)
    seed_mc = derive_seed(trial_seed, 2)
    seed_soft = derive_seed(trial_seed, 3)
    inner = BinaryCode(sample_binary_code(config.n0, config.k0, seed_inner))
    outer = OuterCode(sample_field_code(ctx, config.n, config.k, seed_outer))
    cc = ConcatCode(outer, inner)
    q = ctx.q

    exact = q**config.k <= config.budgets.distance
    if exact:
        d, _ = min_distance(cc, "exact", config.budgets.distance)
        wd = weight_distribution(cc, config.budgets.distance)
        support = [j for j, cnt in enumerate(wd.delta) if cnt and j > 0]
        x_max = max(cc.N - 2 * support[0], 2 * support[-1] - cc.N)
    else:
        d, _ = min_distance(cc, "montecarlo", config.budgets.mc_draws, seed_mc)
        x_max = None

    nice_ok = None
    if config.toggles.run_nice and (1 << (config.n0 - config.k0)) <= config.budgets.niceness:
        nice_ok = check_nice(inner, config.constants.tau, config.budgets.niceness).ok

    soft_prob = soft_delta = None
    soft_exact = None
    if config.toggles.run_soft:
        p = bernoulli_p(config.constants.c_tilde, config.k0 / config.n0)
        pmf = d_pmf(ctx, cc.omega, p)
        mode = "exact" if q ** (config.n - config.k) <= config.budgets.soft else "montecarlo"
        rep = soft_condition(
            outer, pmf, mode,
            config.budgets.soft if mode == "exact" else config.budgets.mc_draws,
            seed_soft,
        )
        soft_prob, soft_delta, soft_exact = rep.prob, rep.delta, rep.is_exact

    entropy_ok = None
    entropy_min = None
    if config.toggles.run_entropy and q**config.k <= config.budgets.entropy:
        rep = entropy_hypothesis(
            outer,
            config.constants.c_gamma,
            config.constants.c_eta,
            config.budgets.entropy,
            n0=config.n0,
        )
        entropy_ok, entropy_min = rep.ok, rep.min_entropy

    moments_equal = None
    if config.toggles.run_moments:
        moments_equal = all(
            moment_direct(cc, r, config.budgets.moments)
            == moment_dual(cc, r, config.budgets.moments)
            for r in config.toggles.r_list
        )

    # GV verdict in exact arithmetic so rate == eps^2 never fails to a float ulp.
    eps = config.eps
    rate = Fraction(cc.K, cc.N)
    gv_ok = rate >= eps * eps and Fraction(d, cc.N) >= Fraction(1, 2) - Fraction(
        config.constants.c
    ) * eps

    return SweepRow(
        trial=trial,
        seed_inner=seed_inner,
        seed_outer=seed_outer,
        rate=float(rate),
        distance=d,
        rel_distance=d / cc.N,
        distance_exact=exact,
        x_max=x_max,
        nice_ok=nice_ok,
        soft_prob=soft_prob,
        soft_delta=soft_delta,
        soft_exact=soft_exact,
        entropy_ok=entropy_ok,
        entropy_min=entropy_min,
        moments_equal=moments_equal,
        gv_ok=gv_ok,
        wall_time_s=time.perf_counter() - t0,
    )


def run_sweep(config: SweepConfig) -> Tuple[List[SweepRow], dict]:
    """All trials in index order, plus the aggregate summary."""
    config.validate()
    rows = [run_trial(config, t) for t in range(config.trials)]
    return rows, aggregate(rows, config)


def aggregate(rows: List[SweepRow], config: SweepConfig) -> dict:
    # under the equal-rate convention eps = k/n = k0/n0; k/n otherwise
    agg = {
        "eps": config.k / config.n,
        "trials": len(rows),
        "vacuous": not rows,
        "min_rel_distance": None,
        "median_rel_distance": None,
        "frac_gv_ok": None,
        "frac_nice": None,
    }
    if not rows:
        return agg
    dists = [r.rel_distance for r in rows]
    nices = [r.nice_ok for r in rows if r.nice_ok is not None]
    agg.update(
        min_rel_distance=min(dists),
        median_rel_distance=statistics.median(dists),
        frac_gv_ok=sum(r.gv_ok for r in rows) / len(rows),
        frac_nice=(sum(nices) / len(nices)) if nices else None,
    )
    return agg


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    return repr(value) if isinstance(value, float) else str(value)


def emit_csv(rows: List[SweepRow], config: SweepConfig) -> str:
    lines = [f"# {SCHEMA} config_hash={config_hash(config)} master_seed={config.master_seed}"]
    lines.append(",".join(CSV_COLUMNS))
    for r in rows:
        lines.append(",".join(_cell(getattr(r, col)) for col in CSV_COLUMNS))
    return "\n".join(lines) + "\n"


def emit_json(rows: List[SweepRow], agg: dict, config: SweepConfig) -> str:
    doc = {
        "schema": SCHEMA,
        "config_hash": config_hash(config),
        "master_seed": config.master_seed,
        "config": config.to_dict(),
        "rows": [{col: getattr(r, col) for col in CSV_COLUMNS} for r in rows],
        "aggregate": agg,
    }
    return reemit_json(doc)


def reemit_json(doc: dict) -> str:
    """Canonical JSON rendering; parse -> reemit is byte-identical."""
    return json.dumps(doc, indent=2, ensure_ascii=True) + "\n"


def report_emit(rows: List[SweepRow], agg: dict, config: SweepConfig, fmt: str, path) -> None:
    if fmt == "csv":
        text = emit_csv(rows, config)
    elif fmt == "json":
        text = emit_json(rows, agg, config)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    try:
        with open(path, "w", encoding="ascii", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write report to {path}: {exc}") from exc
