"""Monte Carlo experiment engine.

An experiment draws ``trials`` matrices at each order n of ``n_grid``,
evaluates every configured statistic on each draw, drops draws whose norm
estimate exceeds ``guard_kappa`` from the aggregates, and compares the
empirical moments with the limiting values from :mod:`nhfluct.theory`.

Trial ``t`` always uses RNG substream ``t`` (at every n), and per-trial
results are merged in trial order, so a report does not depend on how
trials were distributed over worker processes.
"""

from __future__ import annotations

import itertools
import logging
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy import stats

from . import theory
from .ensemble import EnsembleSpec, TruncationPolicy, get_distribution, sample_matrix, truncate
from .errors import (
    ConfigError,
    DegenerateDiagnosticError,
    DegenerateSampleError,
    EmptyAggregateError,
    InsufficientDataError,
)
from .fluctstat import CombinationSpec, stat_f, stat_S, stat_trace_kernel, stat_Y
from .matfun import DEFAULT_KAPPA, parse_function, spectral_norm

log = logging.getLogger(__name__)

ZERO_TEST_SIGMAS = 4.0
MIN_NORMALITY_SAMPLES = 100
ENUMERATION_MAX_N = 8

KINDS = ("Y-entry", "f-entry", "S-combination", "trace-kernel", "norm", "qf-diagnostic")


@dataclass(frozen=True)
class Statistic:
    """One statistic evaluated per trial.

    Entry indices ``i``, ``j`` are 1-based, as in the configuration files.
    ``f`` is a function spec string understood by
    :func:`nhfluct.matfun.parse_function`.
    """

    kind: str
    id: str = ""
    z: Optional[complex] = None
    w: Optional[complex] = None
    i: int = 1
    j: int = 2
    f: Optional[str] = None
    alphas: Optional[Tuple[Tuple[complex, ...], ...]] = None
    betas: Optional[Tuple[Tuple[complex, ...], ...]] = None
    distribution: Optional[str] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ConfigError(f"unknown statistic kind {self.kind!r}; choose from {KINDS}", field="kind")
        if not self.id:
            object.__setattr__(self, "id", self.default_id())

    def default_id(self) -> str:
        k = self.kind
        if k == "Y-entry":
            return f"Y({_fmt(self.z)})[{self.i},{self.j}]"
        if k == "f-entry":
            return f"f[{self.f}][{self.i},{self.j}]"
        if k == "S-combination":
            return f"S({_fmt(self.z)})"
        if k == "trace-kernel":
            return f"trace({_fmt(self.z)},{_fmt(self.w)})"
        if k == "qf-diagnostic":
            return f"qf[{self.distribution}]"
        return "norm"

    @property
    def combination(self) -> CombinationSpec:
        return CombinationSpec(np.array(self.alphas), np.array(self.betas))

    @property
    def function(self):
        """The analytic function whose entry statistic this is (Y and f kinds)."""
        if self.kind == "Y-entry":
            return theory.resolvent_function(self.z)
        if self.kind == "f-entry":
            return parse_function(self.f)
        return None

    @property
    def is_entry(self) -> bool:
        return self.kind in ("Y-entry", "f-entry")


def _fmt(z) -> str:
    z = complex(z)
    if z.imag == 0:
        return repr(z.real)
    return repr(z).strip("()")


@dataclass(frozen=True)
class Check:
    """A pass/fail criterion on report rows.

    ``field`` names a :class:`StatRow` attribute (or ``mean_z``,
    ``guard_reject_rate``, ``cross_z``). A check passes when every selected
    value satisfies the given bounds: ``target`` with ``abs_tol`` and/or
    ``rel_tol``, ``min``, ``max``, and optionally ``trend="nonincreasing"``
    along the n-grid.
    """

    name: str
    statistic: str
    field: str
    target: Optional[complex] = None
    abs_tol: Optional[float] = None
    rel_tol: Optional[float] = None
    min: Optional[float] = None
    max: Optional[float] = None
    trend: Optional[str] = None
    n: Optional[int] = None


@dataclass(frozen=True)
class ExperimentConfig:
    statistics: Tuple[Statistic, ...]
    n_grid: Tuple[int, ...] = (256,)
    trials: int = 100
    distribution: str = "gaussian"
    seed: int = 0
    guard_kappa: float = DEFAULT_KAPPA
    l: int = 2
    truncate: bool = False
    norm_tol: float = 1e-4
    checks: Tuple[Check, ...] = ()

    def validate(self):
        if not self.statistics:
            raise ConfigError("at least one statistic is required", field="statistic")
        if int(self.trials) < 2:
            raise ConfigError(f"trials must be >= 2, got {self.trials}", field="trials")
        if not self.n_grid or min(self.n_grid) < 1:
            raise ConfigError(f"n_grid must be a non-empty list of positive orders, got {self.n_grid}", field="n_grid")
        get_distribution(self.distribution)
        nmin = min(self.n_grid)
        if not 1 <= self.l <= nmin:
            raise ConfigError(f"l={self.l} must lie in [1, min(n_grid)={nmin}]", field="l")
        ids = [s.id for s in self.statistics]
        if len(set(ids)) != len(ids):
            raise ConfigError(f"duplicate statistic ids in {ids}", field="statistic")
        for s in self.statistics:
            if s.kind in ("Y-entry", "f-entry") and not (1 <= s.i <= self.l and 1 <= s.j <= self.l):
                raise ConfigError(f"{s.id}: entry ({s.i},{s.j}) outside the tracked block l={self.l}", field="i")
            if s.kind in ("Y-entry", "S-combination", "trace-kernel") and s.z is None:
                raise ConfigError(f"{s.id}: missing evaluation point z", field="z")
            if s.kind == "trace-kernel" and s.w is None:
                raise ConfigError(f"{s.id}: missing evaluation point w", field="w")
            if s.kind == "f-entry":
                if not s.f:
                    raise ConfigError(f"{s.id}: missing function spec", field="f")
                try:
                    parse_function(s.f)
                except (ValueError, TypeError) as exc:
                    raise ConfigError(f"{s.id}: {exc}", field="f") from None
            if s.kind == "S-combination":
                if s.alphas is None or s.betas is None:
                    raise ConfigError(f"{s.id}: alphas and betas are required", field="alphas")
                if s.combination.l != self.l:
                    raise ConfigError(f"{s.id}: combination is {s.combination.l}x{s.combination.l}, l={self.l}", field="alphas")
            if s.kind == "qf-diagnostic":
                get_distribution(s.distribution or self.distribution)
        known = set(ids)
        for c in self.checks:
            for sid in c.statistic.split(","):
                if sid.strip() not in known:
                    raise ConfigError(f"check {c.name!r} refers to unknown statistic {sid!r}", field="statistic")
        return self


@dataclass
class StatRow:
    n: int
    statistic: str
    kind: str
    trials: int
    accepted: int
    guard_rejects: int
    mean: complex
    variance: Optional[float]
    second_moment: Optional[float]
    stderr: Optional[float]
    var_stderr: Optional[float]
    theory: Optional[complex]
    theory_field: Optional[str]
    abs_dev: Optional[float]
    rel_dev: Optional[float]
    ks_distance: Optional[float] = None
    p_value: Optional[float] = None
    min: Optional[float] = None
    max: Optional[float] = None

    @property
    def guard_reject_rate(self) -> float:
        return self.guard_rejects / self.trials

    @property
    def mean_z(self) -> Optional[float]:
        if not self.stderr:
            return None if self.stderr is None else (0.0 if self.mean == 0 else math.inf)
        return abs(self.mean) / self.stderr


@dataclass
class CrossRow:
    n: int
    a: str
    b: str
    covariance: complex
    stderr: float
    theory: complex

    @property
    def cross_z(self) -> float:
        dev = abs(self.covariance - self.theory)
        if self.stderr == 0:
            return 0.0 if dev == 0 else math.inf
        return dev / self.stderr


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


@dataclass
class Report:
    config: dict
    rows: List[StatRow]
    cross: List[CrossRow]
    checks: List[CheckResult] = field(default_factory=list)
    metadata: dict = field(default_factory=dict)
    # per n: (guard flags, trials x statistics value matrix); only with keep_samples
    samples: Dict[int, Tuple[np.ndarray, np.ndarray]] = field(default_factory=dict, repr=False)

    def values(self, statistic: str, n: Optional[int] = None, accepted_only: bool = True) -> np.ndarray:
        """Per-trial values of one statistic (requires ``keep_samples``)."""
        ids = [s["id"] for s in self.config["statistics"]]
        n = n if n is not None else self.config["n_grid"][0]
        ok, vals = self.samples[n]
        col = vals[:, ids.index(statistic)]
        return col[ok] if accepted_only else col

    def row(self, statistic: str, n: Optional[int] = None) -> StatRow:
        for r in self.rows:
            if r.statistic == statistic and (n is None or r.n == n):
                return r
        raise KeyError((statistic, n))

    def cross_row(self, a: str, b: str, n: Optional[int] = None) -> CrossRow:
        for r in self.cross:
            if {r.a, r.b} == {a, b} and (n is None or r.n == n):
                return r
        raise KeyError((a, b, n))

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)


# ---------------------------------------------------------------- statistics


def normality_test(samples, target_variance: float) -> Tuple[float, float]:
    """KS distance to N(0, target_variance) and its asymptotic p-value.

    The variance is the predicted one, not fitted to the samples.
    """
    x = np.asarray(samples, dtype=float).ravel()
    if x.size < MIN_NORMALITY_SAMPLES:
        raise InsufficientDataError(f"need >= {MIN_NORMALITY_SAMPLES} samples, got {x.size}")
    if np.all(x == x[0]):
        raise DegenerateSampleError("all samples are equal")
    if not target_variance > 0:
        raise ValueError(f"target variance must be positive, got {target_variance}")
    res = stats.kstest(x, "norm", args=(0.0, math.sqrt(target_variance)), method="asymp")
    return float(res.statistic), float(res.pvalue)


def empirical_covariance(a, b=None) -> Tuple[complex, float]:
    """``mean(a conj(b)) - mean(a) conj(mean(b))`` with a jackknife standard error.

    Accepts two sequences, or a single sequence of ``(a, b)`` pairs.
    """
    if b is None:
        pairs = np.asarray(a, dtype=complex)
        if pairs.ndim != 2 or pairs.shape[-1] != 2:
            raise InsufficientDataError("expected a sequence of (a, b) pairs")
        a, b = pairs[:, 0], pairs[:, 1]
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    T = a.size
    if T < 2 or b.size != T:
        raise InsufficientDataError(f"need >= 2 matched pairs, got {T} and {b.size}")
    ab = a * np.conj(b)
    cov = ab.mean() - a.mean() * np.conj(b.mean())
    # leave-one-out estimates in O(T)
    sa, sb, sab = a.sum(), b.sum(), ab.sum()
    ma = (sa - a) / (T - 1)
    mb = (sb - b) / (T - 1)
    loo = (sab - ab) / (T - 1) - ma * np.conj(mb)
    se = math.sqrt((T - 1) / T * float(np.sum(np.abs(loo - loo.mean()) ** 2)))
    return complex(cov), se


def _enumerate_qf(law, n: int) -> Fraction:
    """Exact ``E|x^T x / n - 1|^4`` over the support of x^2."""
    sq = law.square_law()
    vals = list(sq.items())
    total = Fraction(0)
    # distribution of sum x_i^2 via convolution over the x^2 law
    dist: Dict[Fraction, Fraction] = {Fraction(0): Fraction(1)}
    for _ in range(n):
        nxt: Dict[Fraction, Fraction] = {}
        for s, p in dist.items():
            for v, q in vals:
                nxt[s + v] = nxt.get(s + v, Fraction(0)) + p * q
        dist = nxt
    for s, p in dist.items():
        total += p * (s / n - 1) ** 4
    return total


def qf_fourth_moment_exact(distribution, n: int) -> float:
    """Closed form ``[n mu4 + 3 n (n-1) sigma^4] / n^4`` for ``y = x^2 - 1``."""
    law = get_distribution(distribution)
    m2, m4, m6, m8 = (law.moment(k) for k in (2, 4, 6, 8))
    var_y = m4 - 2 * m2 + 1
    mu4_y = m8 - 4 * m6 + 6 * m4 - 4 * m2 + 1
    return (n * mu4_y + 3 * n * (n - 1) * var_y**2) / n**4


def qf_diagnostic(n_grid: Sequence[int], distribution, draws: int = 20000, seed: int = 0) -> List[dict]:
    """Table of ``E|x^T x / n - 1|^4`` along ``n_grid``.

    Discrete laws at ``n <= 8`` are enumerated exactly (rational
    arithmetic); everything else is Monte Carlo with ``draws`` samples.
    Each row carries ``n``, ``value``, ``method``, ``stderr`` and the
    table-wide ``monotone`` flag (nonincreasing along the grid).
    """
    law = get_distribution(distribution)
    if law.discrete and len(set(law.square_law())) == 1:
        raise DegenerateDiagnosticError(f"{law.name}: x^T x is constant, the diagnostic is identically 0")
    rows = []
    for n in n_grid:
        n = int(n)
        if law.discrete and n <= ENUMERATION_MAX_N:
            rows.append({"n": n, "value": float(_enumerate_qf(law, n)), "method": "enumeration", "stderr": 0.0})
            continue
        rng = EnsembleSpec(law.name, n, seed, n).rng()
        vals = np.empty(draws)
        chunk = max(1, min(draws, 2_000_000 // n))
        for start in range(0, draws, chunk):
            k = min(chunk, draws - start)
            x = law.sample(rng, (k, n))
            vals[start : start + k] = (np.einsum("ij,ij->i", x, x) / n - 1.0) ** 4
        rows.append({"n": n, "value": float(vals.mean()), "method": "monte-carlo", "stderr": float(vals.std(ddof=1) / math.sqrt(draws))})
    values = [r["value"] for r in rows]
    monotone = all(b <= a for a, b in zip(values, values[1:]))
    for r in rows:
        r["monotone"] = monotone
    return rows


# ---------------------------------------------------------------- trial loop


def _trial_values(cfg: ExperimentConfig, n: int, trial_id: int):
    spec = EnsembleSpec(cfg.distribution, n, cfg.seed, trial_id)
    M = sample_matrix(spec)
    if cfg.truncate:
        M = truncate(M, spec, TruncationPolicy(l=cfg.l))
    norm = spectral_norm(M / math.sqrt(n), cfg.norm_tol)
    ok = norm <= cfg.guard_kappa
    y_cache: Dict[complex, np.ndarray] = {}
    values = []
    for s in cfg.statistics:
        if s.kind in ("Y-entry", "S-combination"):
            z = complex(s.z)
            if z not in y_cache:
                y_cache[z], _ = stat_Y(M, z, cfg.l, cfg.guard_kappa, norm)
            Y = y_cache[z]
            v = Y[s.i - 1, s.j - 1] if s.kind == "Y-entry" else stat_S(Y, s.combination)
        elif s.kind == "f-entry":
            v, _ = stat_f(M, parse_function(s.f), s.i - 1, s.j - 1, cfg.guard_kappa, norm)
        elif s.kind == "trace-kernel":
            v, _ = stat_trace_kernel(M, s.z, s.w, cfg.guard_kappa, norm)
        elif s.kind == "norm":
            v = norm
        else:
            v = math.nan  # qf-diagnostic is computed per n, not per trial
        values.append(complex(v))
    return trial_id, float(norm), bool(ok), values


def _run_chunk(cfg: ExperimentConfig, n: int, trial_ids: Sequence[int]):
    return [_trial_values(cfg, n, t) for t in trial_ids]


def _chunks(seq, k):
    size = max(1, math.ceil(len(seq) / k))
    return [seq[i : i + size] for i in range(0, len(seq), size)]


def resolve_workers(workers: Optional[int] = None) -> int:
    """Worker count: explicit argument, else ``$NHFLUCT_WORKERS``, else 1."""
    if workers is None:
        workers = int(os.environ.get("NHFLUCT_WORKERS", "1"))
    if workers < 1:
        raise ConfigError(f"worker count must be >= 1, got {workers}", field="workers")
    return workers


def collect_trials(cfg: ExperimentConfig, n: int, workers: int = 1):
    """Per-trial ``(trial_id, norm, guard_ok, values)`` records in trial order."""
    ids = list(range(cfg.trials))
    if workers == 1:
        records = _run_chunk(cfg, n, ids)
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = ex.map(_run_chunk, itertools.repeat(cfg), itertools.repeat(n), _chunks(ids, workers * 4))
            records = list(itertools.chain.from_iterable(parts))
    records.sort(key=lambda r: r[0])
    return records


# ---------------------------------------------------------------- aggregation


def _theory(s: Statistic):
    """``(target, field)`` for a statistic, plus the variance for the normality test."""
    if s.kind == "Y-entry":
        rr, ii, _ = theory.real_kernels(s.z, s.z)
        target = theory.kernel_Y(s.z, s.z).real
        normal = rr.real if rr.real > 0 else ii.real
        return target, "variance", normal, rr.real > 0
    if s.kind == "f-entry":
        f = s.function
        re = theory.entry_variance(f, "re")
        return theory.entry_variance(f), "variance", re if re > 0 else theory.entry_variance(f, "im"), re > 0
    if s.kind == "S-combination":
        c = s.combination
        re = theory.covariance_S(s.z, s.z, CombinationSpec(c.alphas.real, c.betas.real)).real
        im = theory.covariance_S(s.z, s.z, CombinationSpec(c.alphas.imag, c.betas.imag)).real
        return theory.covariance_S(s.z, s.z, c).real, "variance", re if re > 0 else im, re > 0
    if s.kind == "trace-kernel":
        return theory.trace_kernel_limit(s.z, s.w), "mean", None, True
    if s.kind == "norm":
        return 2.0, "mean", None, True
    return None, None, None, True


def _aggregate(n, s: Statistic, values: np.ndarray, ok: np.ndarray) -> StatRow:
    T = values.size
    acc = values[ok]
    if acc.size == 0:
        raise EmptyAggregateError(f"all {T} trials were guard-rejected at n={n}", n=n)
    finite = values[np.isfinite(values)]
    lo = float(finite.real.min()) if finite.size else None
    hi = float(finite.real.max()) if finite.size else None
    mean = complex(acc.mean())
    k = acc.size
    dev2 = np.abs(acc - mean) ** 2
    var = float(dev2.sum() / (k - 1)) if k > 1 else None
    second = float(np.mean(np.abs(acc) ** 2))
    se = math.sqrt(var / k) if var is not None else None
    var_se = float(dev2.std(ddof=1) / math.sqrt(k)) if k > 1 else None
    target, fld, normal_var, use_re = _theory(s)
    abs_dev = rel_dev = None
    if target is not None:
        got = var if fld == "variance" else mean
        if got is not None:
            abs_dev = float(abs(got - target))
            rel_dev = float(abs_dev / abs(target)) if target != 0 else None
    ks = p = None
    if normal_var and normal_var > 0 and k >= MIN_NORMALITY_SAMPLES:
        part = acc.real if use_re else acc.imag
        try:
            ks, p = normality_test(part, normal_var)
        except DegenerateSampleError:
            ks, p = 1.0, 0.0
    return StatRow(
        n=n,
        statistic=s.id,
        kind=s.kind,
        trials=T,
        accepted=k,
        guard_rejects=T - k,
        mean=mean,
        variance=var,
        second_moment=second,
        stderr=se,
        var_stderr=var_se,
        theory=None if target is None else complex(target),
        theory_field=fld,
        abs_dev=abs_dev,
        rel_dev=rel_dev,
        ks_distance=ks,
        p_value=p,
        min=lo,
        max=hi,
    )


def _qf_row(n, s: Statistic, cfg: ExperimentConfig) -> StatRow:
    dist = s.distribution or cfg.distribution
    (r,) = qf_diagnostic([n], dist, draws=cfg.trials, seed=cfg.seed)
    target = qf_fourth_moment_exact(dist, n)
    dev = abs(r["value"] - target)
    return StatRow(
        n=n, statistic=s.id, kind=s.kind, trials=cfg.trials, accepted=cfg.trials, guard_rejects=0,
        mean=complex(r["value"]), variance=None, second_moment=None, stderr=r["stderr"], var_stderr=None,
        theory=complex(target), theory_field="mean", abs_dev=dev, rel_dev=dev / target if target else None,
    )


def _cross_target(a: Statistic, b: Statistic) -> complex:
    if (a.i, a.j) != (b.i, b.j):
        return 0j
    return theory.covariance_Z(a.function, b.function)


def run_experiment(cfg: ExperimentConfig, workers: Optional[int] = None, keep_samples: bool = False) -> Report:
    """Run every trial at every n and return the aggregated :class:`Report`.

    With ``keep_samples`` the per-trial values are kept in ``Report.samples``.
    """
    cfg.validate()
    workers = resolve_workers(workers)
    t0 = time.perf_counter()
    rows: List[StatRow] = []
    cross: List[CrossRow] = []
    samples = {}
    per_trial = [s for s in cfg.statistics if s.kind != "qf-diagnostic"]
    for n in cfg.n_grid:
        if per_trial:
            records = collect_trials(cfg, n, workers)
            ok = np.array([r[2] for r in records])
            vals = np.array([r[3] for r in records], dtype=complex)
            if keep_samples:
                samples[n] = (ok, vals)
        for idx, s in enumerate(cfg.statistics):
            if s.kind == "qf-diagnostic":
                rows.append(_qf_row(n, s, cfg))
            else:
                rows.append(_aggregate(n, s, vals[:, idx], ok))
        entries = [(idx, s) for idx, s in enumerate(cfg.statistics) if s.is_entry]
        for (ia, a), (ib, b) in itertools.combinations(entries, 2):
            cov, se = empirical_covariance(vals[ok, ia], vals[ok, ib])
            cross.append(CrossRow(n, a.id, b.id, cov, se, _cross_target(a, b)))
        log.info("n=%d done (%d trials)", n, cfg.trials)
    report = Report(config=config_to_dict(cfg), rows=rows, cross=cross, samples=samples)
    report.checks = evaluate_checks(report, cfg.checks)
    report.metadata = {"wall_time": time.perf_counter() - t0, "workers": workers}
    return report


def _check_values(report: Report, c: Check):
    if c.field == "cross_z":
        a, b = (x.strip() for x in c.statistic.split(","))
        return [(r.n, r.cross_z) for r in report.cross if {r.a, r.b} == {a, b} and (c.n is None or r.n == c.n)]
    out = []
    for r in report.rows:
        if r.statistic == c.statistic and (c.n is None or r.n == c.n):
            out.append((r.n, getattr(r, c.field)))
    return out


def evaluate_checks(report: Report, checks: Sequence[Check]) -> List[CheckResult]:
    results = []
    for c in checks:
        vals = _check_values(report, c)
        failures = []
        if not vals:
            failures.append("no matching rows")
        for n, v in vals:
            if v is None:
                failures.append(f"n={n}: {c.field} undefined")
                continue
            if c.target is not None:
                dev = abs(v - c.target)
                tol = (c.abs_tol or 0.0) + (c.rel_tol or 0.0) * abs(c.target)
                if dev > tol:
                    failures.append(f"n={n}: |{c.field} - {c.target}| = {dev:.4g} > {tol:.4g}")
            x = complex(v).real
            if c.min is not None and x < c.min:
                failures.append(f"n={n}: {c.field} = {x:.6g} < {c.min}")
            if c.max is not None and x > c.max:
                failures.append(f"n={n}: {c.field} = {x:.6g} > {c.max}")
        if c.trend == "nonincreasing":
            seq = [complex(v).real for _, v in sorted(vals) if v is not None]
            if any(b > a for a, b in zip(seq, seq[1:])):
                failures.append(f"{c.field} not nonincreasing along n: {seq}")
        shown = ", ".join(f"n={n}: {_short(v)}" for n, v in vals)
        results.append(CheckResult(c.name, not failures, "; ".join(failures) if failures else shown))
    return results


def _short(v):
    if v is None:
        return "None"
    v = complex(v)
    return f"{v.real:.6g}" if v.imag == 0 else f"{v:.6g}"


def variance_converges(report: Report, statistic: str, sigmas: float = 2.0) -> bool:
    """``|variance - theory|`` is nonincreasing along the n-grid up to ``sigmas`` standard errors."""
    rows = sorted((r for r in report.rows if r.statistic == statistic), key=lambda r: r.n)
    for a, b in zip(rows, rows[1:]):
        if b.abs_dev > a.abs_dev + sigmas * max(a.var_stderr, b.var_stderr):
            return False
    return True


def config_to_dict(cfg: ExperimentConfig) -> dict:
    d = asdict(cfg)
    d["statistics"] = [{k: _jsonable(v) for k, v in s.items() if v is not None} for s in d["statistics"]]
    d["checks"] = [{k: _jsonable(v) for k, v in c.items() if v is not None} for c in d["checks"]]
    d["n_grid"] = list(d["n_grid"])
    return d


def _jsonable(v):
    if isinstance(v, complex):
        return _fmt(v)
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    return v
