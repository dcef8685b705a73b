"""Limit laws of the number of correct guesses and numerical convergence checks.

Continuous laws are given by their densities; their CDFs are obtained by
adaptive quadrature unless a one-line closed form exists (exponential
families, the normal). Discrete laws expose ``pmf`` and their atoms.

Distances:

* ``tv_distance`` between two pmfs, ``tv_to_law`` between a pmf and a
  discrete limit law (the law's tail beyond the pmf counts as mismatch);
* ``ks_distance``: supremum over all ``x`` of the CDF difference between a
  centred and scaled pmf and a limit law, with left limits checked at every
  jump of either function.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, stats

from .exact_dist import cjn_pmf, x_laws, x_pmf
from .montecarlo import McConfig, simulate_cjn, simulate_x
from .pmf import Pmf
from .shuffle_model import ShuffleParams, identity_probability
from .strategy import build_strategy_table

QUAD_EPSABS = 1e-9
NORMALIZATION_TOL = 1e-6
# n*p* this close below an integer is floored to that integer
FLOOR_EPS = 1e-9

# two-color region classification constants (heuristic, see kpp_region)
REGION_DEGENERATE_RATIO = 0.05
REGION_GEOMETRIC_GAP = 0.05
REGION_EXP_POWER = 0.6
REGION_RAYLEIGH_POWER = 0.4

_SQRT_2_OVER_PI = math.sqrt(2.0 / math.pi)
_SQRT_2PI = math.sqrt(2.0 * math.pi)


# densities and mass functions

def geometric_pmf(rho: float, k: int) -> float:
    if not 0.0 < rho < 1.0:
        raise ValueError(f"rho must lie in (0, 1), got {rho!r}")
    if k < 0:
        return 0.0
    return rho ** k * (1.0 - rho)


def gg_density(x):
    """Maxwell-Boltzmann density ``sqrt(2/pi) 8 x^2 exp(-2 x^2)`` on ``x >= 0``."""
    x = np.asarray(x, dtype=float)
    out = np.where(x >= 0, _SQRT_2_OVER_PI * 8.0 * x * x * np.exp(-2.0 * x * x), 0.0)
    return out[()] if out.ndim == 0 else out


def chi_half_density(x, b: float):
    """``4x/sqrt(2 pi) exp(-2(x^2+b^2)) sinh(4bx)/b``, written without overflow.

    ``exp(-2(x^2+b^2)) sinh(4|b|x) = exp(-2(x-|b|)^2) (1 - exp(-8|b|x)) / 2``.
    Only ``|b|`` enters, so the value is exactly even in ``b``.
    """
    if b == 0:
        raise ValueError("b must be nonzero; the b -> 0 limit is gg_density")
    ab = abs(b)
    x = np.asarray(x, dtype=float)
    xp = np.maximum(x, 0.0)
    val = 2.0 * xp * np.exp(-2.0 * (xp - ab) ** 2) * -np.expm1(-8.0 * ab * xp) / (ab * _SQRT_2PI)
    out = np.where(x >= 0, val, 0.0)
    return out[()] if out.ndim == 0 else out


def shifted_exp_cdf(x, b: float):
    """CDF of ``|b| + Exp(rate 1/(2|b|))``."""
    if b == 0:
        raise ValueError("b must be nonzero")
    ab = abs(b)
    x = np.asarray(x, dtype=float)
    out = np.where(x >= ab, -np.expm1(-(x - ab) / (2.0 * ab)), 0.0)
    return out[()] if out.ndim == 0 else out


def rayleigh_density(x):
    x = np.asarray(x, dtype=float)
    out = np.where(x >= 0, 2.0 * x * np.exp(-x * x), 0.0)
    return out[()] if out.ndim == 0 else out


def linexp_density(x, rho: float):
    if rho < 0:
        raise ValueError("rho must be nonnegative")
    x = np.asarray(x, dtype=float)
    out = np.where(x >= 0, (rho + 2.0 * x) * np.exp(-x * (rho + x)), 0.0)
    return out[()] if out.ndim == 0 else out


def exp_region_density(x):
    x = np.asarray(x, dtype=float)
    out = np.where(x >= 0, np.exp(-x), 0.0)
    return out[()] if out.ndim == 0 else out


def poisson_pmf(lam: float, k: int) -> float:
    if lam <= 0:
        raise ValueError("lambda must be positive")
    if k < 0:
        return 0.0
    return math.exp(k * math.log(lam) - lam - math.lgamma(k + 1))


# laws

def _quad_cdf(density, lo: float, x) -> np.ndarray:
    """``int_lo^x density`` for every entry of ``x``, accumulated over sorted points."""
    xs = np.asarray(x, dtype=float)
    flat = xs.ravel()
    out = np.zeros(flat.size)
    acc, prev = 0.0, lo
    for idx in np.argsort(flat, kind="stable"):
        xi = flat[idx]
        if xi <= lo:
            continue
        if math.isinf(xi):
            out[idx] = 1.0
            continue
        acc += integrate.quad(density, prev, xi, epsabs=QUAD_EPSABS, limit=200)[0]
        prev = xi
        out[idx] = min(acc, 1.0)
    out = out.reshape(xs.shape)
    return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class LimitLaw:
    """Base class. ``discrete`` laws live on the nonnegative integers."""

    discrete = False
    lower = 0.0

    def cdf(self, x):
        raise NotImplementedError

    def cdf_left(self, x):
        """``P(L < x)``."""
        if not self.discrete:
            return self.cdf(x)
        x = np.asarray(x, dtype=float)
        return self.cdf(np.ceil(x) - 1.0)

    @property
    def params(self) -> dict:
        return {}

    @property
    def name(self) -> str:
        return type(self).__name__

    def describe(self) -> str:
        inner = ",".join(f"{k}={v:.6g}" for k, v in self.params.items())
        return f"{self.name}({inner})" if inner else self.name


@dataclass(frozen=True)
class _DensityLaw(LimitLaw):
    """Continuous law defined by a density; normalization is checked on construction."""

    def __post_init__(self):
        total = integrate.quad(self.pdf, self.lower, np.inf, epsabs=QUAD_EPSABS, limit=200)[0]
        if abs(total - 1.0) > NORMALIZATION_TOL:
            raise ValueError(f"{self.describe()} density integrates to {total!r}")

    def pdf(self, x):
        raise NotImplementedError

    def cdf(self, x):
        return _quad_cdf(self.pdf, self.lower, x)


@dataclass(frozen=True)
class MaxwellBoltzmann(_DensityLaw):
    def pdf(self, x):
        return gg_density(x)


@dataclass(frozen=True)
class HalfNoncentralChi3(_DensityLaw):
    b: float = 1.0

    def __post_init__(self):
        if self.b == 0:
            raise ValueError("b must be nonzero; use MaxwellBoltzmann")
        super().__post_init__()

    def pdf(self, x):
        return chi_half_density(x, self.b)

    @property
    def params(self):
        return {"b": self.b}


@dataclass(frozen=True)
class Rayleigh(_DensityLaw):
    def pdf(self, x):
        return rayleigh_density(x)


@dataclass(frozen=True)
class LinExp(_DensityLaw):
    rho: float = 0.0

    def __post_init__(self):
        if self.rho < 0:
            raise ValueError("rho must be nonnegative")
        super().__post_init__()

    def pdf(self, x):
        return linexp_density(x, self.rho)

    @property
    def params(self):
        return {"rho": self.rho}


@dataclass(frozen=True)
class ShiftedExponential(_DensityLaw):
    b: float = 1.0

    def __post_init__(self):
        if self.b == 0:
            raise ValueError("b must be nonzero")
        object.__setattr__(self, "lower", abs(self.b))
        super().__post_init__()

    def pdf(self, x):
        ab = abs(self.b)
        x = np.asarray(x, dtype=float)
        out = np.where(x >= ab, np.exp(-(x - ab) / (2.0 * ab)) / (2.0 * ab), 0.0)
        return out[()] if out.ndim == 0 else out

    def cdf(self, x):
        return shifted_exp_cdf(x, self.b)

    @property
    def params(self):
        return {"b": self.b}


@dataclass(frozen=True)
class Exponential(_DensityLaw):
    """Unit-rate exponential (the two-color game with a large color gap)."""

    def pdf(self, x):
        return exp_region_density(x)

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.where(x >= 0, -np.expm1(-np.maximum(x, 0.0)), 0.0)
        return out[()] if out.ndim == 0 else out


@dataclass(frozen=True)
class StandardNormal(LimitLaw):
    lower = -np.inf

    def pdf(self, x):
        return stats.norm.pdf(x)

    def cdf(self, x):
        return stats.norm.cdf(x)


@dataclass(frozen=True)
class _DiscreteLaw(LimitLaw):
    discrete = True

    def pmf(self, k: int) -> float:
        raise NotImplementedError

    def cdf(self, x):
        x = np.asarray(x, dtype=float)
        out = np.array([self._cdf_int(math.floor(v)) if np.isfinite(v) else float(v > 0)
                        for v in x.ravel()]).reshape(x.shape)
        return out[()] if out.ndim == 0 else out

    def _cdf_int(self, k: int) -> float:
        return math.fsum(self.pmf(i) for i in range(0, k + 1)) if k >= 0 else 0.0

    def atoms(self, hi: float) -> np.ndarray:
        """Atoms in ``[0, hi]``."""
        return np.arange(0, max(0, math.floor(hi)) + 1, dtype=float)

    def masses(self, k_max: int) -> np.ndarray:
        return np.array([self.pmf(k) for k in range(k_max + 1)])


@dataclass(frozen=True)
class Geometric(_DiscreteLaw):
    rho: float = 0.5

    def __post_init__(self):
        if not 0.0 < self.rho < 1.0:
            raise ValueError(f"rho must lie in (0, 1), got {self.rho!r}")

    def pmf(self, k):
        return geometric_pmf(self.rho, k)

    def _cdf_int(self, k):
        return -math.expm1((k + 1) * math.log(self.rho)) if k >= 0 else 0.0

    @property
    def params(self):
        return {"rho": self.rho}


@dataclass(frozen=True)
class Poisson(_DiscreteLaw):
    lam: float = 1.0

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError("lambda must be positive")

    def pmf(self, k):
        return poisson_pmf(self.lam, k)

    def _cdf_int(self, k):
        return float(stats.poisson.cdf(k, self.lam)) if k >= 0 else 0.0

    @property
    def params(self):
        return {"lambda": self.lam}


@dataclass(frozen=True)
class DegenerateAtZero(_DiscreteLaw):
    def pmf(self, k):
        return 1.0 if k == 0 else 0.0

    def _cdf_int(self, k):
        return 1.0 if k >= 0 else 0.0

    def atoms(self, hi):
        return np.zeros(1)


# the two-color game regions

@dataclass(frozen=True)
class KppRegion:
    """Region of ``(m1, m2)`` and the law of ``(C - m1) / scale``."""

    label: str
    law: LimitLaw
    scale: float


def kpp_region(m1: int, m2: int) -> KppRegion:
    """Classify a finite two-color game into one of the five asymptotic regions.

    The regions are asymptotic, so finite pairs are classified heuristically,
    in this order, with ``delta = m1 - m2``:

    * ``m2 < 0.05 m1``: degenerate (``C - m1 -> 0``);
    * ``delta >= 0.05 m1``: geometric with ``rho = m2/m1``;
    * ``delta >= m1**0.6``: exponential, scale ``m1/delta``;
    * ``delta <= m1**0.4``: Rayleigh, scale ``sqrt(m1)``;
    * otherwise LinExp with ``rho = delta/sqrt(m1)``, scale ``sqrt(m1)``.
    """
    if m1 < 1 or m2 < 0:
        raise ValueError("need m1 >= 1 and m2 >= 0")
    if m1 < m2:
        raise ValueError("need m1 >= m2; swap the colors first")
    delta = m1 - m2
    if m2 < REGION_DEGENERATE_RATIO * m1:
        return KppRegion("degenerate", DegenerateAtZero(), 1.0)
    if delta >= REGION_GEOMETRIC_GAP * m1:
        return KppRegion("geometric", Geometric(m2 / m1), 1.0)
    if delta >= m1 ** REGION_EXP_POWER:
        return KppRegion("exponential", Exponential(), m1 / delta)
    if delta <= m1 ** REGION_RAYLEIGH_POWER:
        return KppRegion("rayleigh", Rayleigh(), math.sqrt(m1))
    return KppRegion("linexp", LinExp(delta / math.sqrt(m1)), math.sqrt(m1))


# distances

def tv_distance(a: Pmf, b: Pmf) -> float:
    lo = min(a.offset, b.offset)
    hi = max(a.max_value, b.max_value)
    return float(0.5 * np.abs(a.dense(lo, hi) - b.dense(lo, hi)).sum())


def tv_to_law(pmf: Pmf, law: LimitLaw) -> float:
    """Total variation between ``pmf`` and a discrete law on ``0, 1, 2, ...``."""
    if not law.discrete:
        raise ValueError("total variation needs a discrete law")
    hi = max(pmf.max_value, 0)
    lo = min(pmf.offset, 0)
    ref = np.zeros(hi - lo + 1)
    ref[-lo:] = law.masses(hi)
    diff = np.abs(pmf.dense(lo, hi) - ref).sum()
    tail = max(0.0, 1.0 - float(ref.sum()))
    return float(0.5 * (diff + tail))


def ks_distance(pmf: Pmf, law: LimitLaw, center: float = 0.0, scale: float = 1.0) -> float:
    """``sup_x |P((X - center)/scale <= x) - P(L <= x)|``."""
    if scale <= 0:
        raise ValueError("scale must be positive")
    y = (pmf.support - center) / scale
    cum = np.cumsum(pmf.masses)
    pts = y
    if law.discrete:
        pts = np.union1d(y, law.atoms(y.max() + 1.0))
    # empirical CDF at and just below every candidate point
    right = np.concatenate([[0.0], cum])[np.searchsorted(y, pts, side="right")]
    left = np.concatenate([[0.0], cum])[np.searchsorted(y, pts, side="left")]
    g_right = np.asarray(law.cdf(pts), dtype=float)
    g_left = np.asarray(law.cdf_left(pts), dtype=float)
    return float(max(np.abs(right - g_right).max(), np.abs(left - g_left).max()))


# regimes and convergence experiments

@dataclass(frozen=True)
class RegimeSpec:
    """How ``p`` depends on ``n``: fixed, ``1/2 + b n^-c`` or ``1 - lam n^-c``."""

    family: str
    p: float | None = None
    b: float | None = None
    c: float | None = None
    lam: float | None = None

    def __post_init__(self):
        if self.family == "fixed_p":
            if self.p is None or not 0.0 < self.p < 1.0:
                raise ValueError("fixed_p needs 0 < p < 1")
        elif self.family == "half_plus":
            if self.b is None or self.c is None or self.c <= 0:
                raise ValueError("half_plus needs b and c > 0")
        elif self.family == "one_minus":
            if self.lam is None or self.c is None or self.c <= 0 or self.lam <= 0:
                raise ValueError("one_minus needs lambda > 0 and c > 0")
        else:
            raise ValueError(f"unknown regime family {self.family!r}")

    @classmethod
    def fixed(cls, p: float) -> "RegimeSpec":
        return cls("fixed_p", p=p)

    @classmethod
    def half_plus(cls, b: float, c: float) -> "RegimeSpec":
        return cls("half_plus", b=b, c=c)

    @classmethod
    def one_minus(cls, lam: float, c: float) -> "RegimeSpec":
        return cls("one_minus", lam=lam, c=c)

    def p_at(self, n: int) -> float:
        if self.family == "fixed_p":
            p = self.p
        elif self.family == "half_plus":
            p = 0.5 + self.b * n ** (-self.c)
        else:
            p = 1.0 - self.lam * n ** (-self.c)
        if not 0.0 < p < 1.0:
            raise ValueError(f"p({n}) = {p!r} is outside (0, 1)")
        return p

    def limit_law(self) -> LimitLaw:
        if self.family == "fixed_p":
            if self.p == 0.5:
                return MaxwellBoltzmann()
            p_star = max(self.p, 1.0 - self.p)
            return Geometric((1.0 - p_star) / p_star)
        if self.family == "half_plus":
            if self.b == 0 or self.c > 0.5:
                return MaxwellBoltzmann()
            if self.c == 0.5:
                return HalfNoncentralChi3(self.b)
            return ShiftedExponential(self.b)
        if self.c > 1:
            return DegenerateAtZero()
        if self.c == 1:
            return Poisson(self.lam)
        return StandardNormal()


@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    p: float
    law: str
    metric: str
    distance: float
    extras: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {"n": self.n, "p": self.p, "law": self.law, "metric": self.metric,
                "distance": self.distance, **self.extras}


def _floor_center(n: int, p: float) -> int:
    return math.floor(n * max(p, 1.0 - p) + FLOOR_EPS)


def _row(regime: RegimeSpec, n: int, p: float, pmf: Pmf) -> ConvergenceRow:
    law = regime.limit_law()
    name = law.describe()
    if regime.family == "fixed_p" and law.discrete:
        p_star = max(p, 1.0 - p)
        tv = tv_to_law(pmf.shift(-_floor_center(n, p)), law)
        ks = ks_distance(pmf, law, center=n * p_star)
        return ConvergenceRow(n, p, name, "tv", tv, {"ks_unrounded": ks})
    if regime.family in ("fixed_p", "half_plus"):
        beta = math.sqrt(n)
        if regime.family == "half_plus":
            beta = max(n ** (1.0 - regime.c), beta)
        return ConvergenceRow(n, p, name, "ks", ks_distance(pmf, law, n / 2.0, beta))
    deficit = pmf.reflect(n)
    if law.discrete:
        return ConvergenceRow(n, p, name, "tv", tv_to_law(deficit, law),
                              {"mass_at_zero": deficit[0]})
    mu = regime.lam * n ** (1.0 - regime.c)
    return ConvergenceRow(n, p, name, "ks", ks_distance(deficit, law, mu, math.sqrt(mu)),
                          {"mass_at_zero": deficit[0]})


def _law_at(n: int, p: float, target: str, mode: str, trials: int, seed: int) -> Pmf:
    params = ShuffleParams(n, p)
    if mode == "exact":
        return x_pmf(params) if target == "x" else cjn_pmf(params)
    cfg = McConfig(trials, seed)
    if target == "x":
        return simulate_x(params, build_strategy_table(p, n), cfg)
    return simulate_cjn(params, cfg)


def convergence_report(regime: RegimeSpec, n_list, mode: str = "exact", target: str = "x",
                       trials: int = 10 ** 6, seed: int = 0, workers: int = 1,
                       modes: dict | None = None) -> list[ConvergenceRow]:
    """Distance to the regime's limit law for each ``n`` in ``n_list``.

    ``modes`` optionally overrides ``mode`` per ``n`` (e.g. exact for small
    ``n`` and Monte Carlo for the largest one).
    """
    n_list = [int(n) for n in n_list]
    if not n_list or any(n < 2 for n in n_list) or n_list != sorted(set(n_list)):
        raise ValueError("n_list must be strictly ascending integers >= 2")
    if target not in ("x", "cjn"):
        raise ValueError("target must be 'x' or 'cjn'")
    if target == "cjn" and regime.family == "one_minus":
        raise ValueError("the two-color stage is only reported for fixed_p and half_plus")
    modes = {n: (modes or {}).get(n, mode) for n in n_list}
    if any(m not in ("exact", "montecarlo") for m in modes.values()):
        raise ValueError("mode must be 'exact' or 'montecarlo'")
    ps = {n: regime.p_at(n) for n in n_list}

    laws: dict[int, Pmf] = {}
    sweep = [n for n in n_list if modes[n] == "exact"]
    if regime.family == "fixed_p" and target == "x" and sweep:
        # one pass of the recursion yields every n at once
        wanted = set(sweep)
        for n, masses in x_laws(regime.p, sweep[-1]):
            if n in wanted:
                laws[n] = Pmf(0, masses)
    todo = [n for n in n_list if n not in laws]

    def work(n):
        return n, _law_at(n, ps[n], target, modes[n], trials, seed)

    if workers > 1 and len(todo) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            laws.update(pool.map(work, todo))
    else:
        laws.update(map(work, todo))
    return [_row(regime, n, ps[n], laws[n]) for n in n_list]


@dataclass(frozen=True)
class RifIdRow:
    n: int
    p: float
    value: float
    limit: float


def rif_id_limit(regime: RegimeSpec, n_list) -> list[RifIdRow]:
    """Probability that one shuffle leaves the deck sorted, along ``p(n) = 1 - lam n^-c``."""
    if regime.family != "one_minus":
        raise ValueError("rif_id_limit needs a one_minus regime")
    limit = 1.0 if regime.c > 1 else (math.exp(-regime.lam) if regime.c == 1 else 0.0)
    rows = []
    for n in n_list:
        p = regime.p_at(int(n))
        rows.append(RifIdRow(int(n), p, identity_probability(ShuffleParams(int(n), p)), limit))
    return rows
