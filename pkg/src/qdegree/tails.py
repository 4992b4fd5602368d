"""Concentration checks for low-degree polynomials on the hypercube.

For a mean-zero multilinear polynomial F of degree at most d with
standard deviation sigma, the hypercontractive moment growth
``E[|F|^q] <= (q-1)^(dq/2) sigma^q`` (q >= 2) yields, via Markov at
``q = t^(2/d)/e``, the tail bound

    Pr[|F| >= t*sigma] <= exp(-(d/2e) * t^(2/d))    for t >= (2e)^(d/2).

Everything here is verified by exhaustive expectation over the cube (no
sampling), so inequality checks carry no Monte Carlo error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

import numpy as np

from . import approxdeg, boolfn
from .boolfn import Basis, CapacityError, MultilinearPolynomial, TruthTable

MAX_TAIL_N = 20
GRID_POINTS = 16
_REL_SLACK = 1e-9


def hypothesis_threshold(d: int) -> float:
    """Smallest t for which the tail bound applies: ``(2e)^(d/2)``."""
    return (2.0 * math.e) ** (d / 2.0)


def tail_bound(d: int, t: float) -> float:
    """The concentration bound ``exp(-(d/2e) t^(2/d))`` for degree-d polynomials."""
    if d < 1:
        raise ValueError(f"degree must be >= 1, got {d}")
    if t < hypothesis_threshold(d) - 1e-12:
        raise ValueError(
            f"t={t} below the hypothesis threshold (2e)^(d/2)={hypothesis_threshold(d):.6g}")
    return math.exp(-(d / (2.0 * math.e)) * t ** (2.0 / d))


def _centered_values(p: MultilinearPolynomial) -> np.ndarray:
    if p.n > MAX_TAIL_N:
        raise CapacityError(f"exhaustive tail evaluation supports n <= {MAX_TAIL_N}")
    values = p.evaluate_cube()
    mean = float(values.mean())
    if abs(mean) > 1e-9:
        raise ValueError(f"polynomial has nonzero mean {mean:.3g}; center it first")
    return values


def empirical_tail(p: MultilinearPolynomial, t: float) -> float:
    """Exact ``Pr[|p| >= t * ||p||_2]`` by enumeration over the cube."""
    values = _centered_values(p)
    sigma = math.sqrt(float(np.mean(values * values)))
    count = int(np.count_nonzero(np.abs(values) >= t * sigma))
    return count / values.size


def moment_bound_check(p: MultilinearPolynomial, q: float) -> bool:
    """Is ``E[|p|^q] <= (q-1)^(dq/2) * sigma^q``? (relative slack 1e-9)."""
    if q < 2:
        raise ValueError(f"moment bound requires q >= 2, got {q}")
    values = p.evaluate_cube()
    d = boolfn.degree(p)
    sigma = math.sqrt(float(np.mean(values * values)))
    lhs = float(np.mean(np.abs(values) ** q))
    rhs = (q - 1) ** (d * q / 2.0) * sigma ** q
    return lhs <= rhs * (1 + _REL_SLACK)


def hypercontractive_check(p: MultilinearPolynomial, q: float) -> bool:
    """Is ``||p||_q <= (q-1)^(d/2) * ||p||_2``? (relative slack 1e-9)."""
    if q < 2:
        raise ValueError(f"hypercontractivity check requires q >= 2, got {q}")
    d = boolfn.degree(p)
    lhs = boolfn.p_norm(p, q)
    rhs = (q - 1) ** (d / 2.0) * boolfn.p_norm(p, 2)
    return lhs <= rhs * (1 + _REL_SLACK)


def markov_chain_check(p: MultilinearPolynomial, t: float) -> bool:
    """Verify every link of the moment-to-tail chain at ``q = t^(2/d)/e``.

    empirical <= E|p|^q/(t sigma)^q <= (q-1)^(dq/2)/t^q <= q^(dq/2)/t^q,
    and the last expression equals the tail bound at this q.
    """
    d = boolfn.degree(p)
    if d < 1:
        raise ValueError("chain check needs degree >= 1")
    q = t ** (2.0 / d) / math.e
    if q < 2 - 1e-12:
        raise ValueError(f"t={t} gives q={q:.3g} < 2; raise t to the hypothesis threshold")
    q = max(q, 2.0)
    values = _centered_values(p)
    sigma = math.sqrt(float(np.mean(values * values)))
    emp = empirical_tail(p, t)
    markov = float(np.mean(np.abs(values) ** q)) / (t * sigma) ** q
    moment = (q - 1) ** (d * q / 2.0) / t ** q
    final = q ** (d * q / 2.0) / t ** q
    bound = tail_bound(d, t)
    slack = 1 + _REL_SLACK
    return (emp <= markov * slack
            and markov <= moment * slack
            and moment <= final * slack
            and abs(final - bound) <= bound * 1e-9)


# ---------------------------------------------------------------------------
# Tail reports over the standard grid


@dataclass(frozen=True)
class TailGridPoint:
    t: float
    empirical: float
    bound: float


@dataclass(frozen=True)
class TailReport:
    d: int
    sigma: float
    grid: tuple[TailGridPoint, ...]

    @property
    def ok(self) -> bool:
        return all(g.empirical <= g.bound for g in self.grid)


def default_t_grid(d: int) -> np.ndarray:
    """Geometric grid of 16 points from the hypothesis threshold to 4x it."""
    t0 = hypothesis_threshold(d)
    grid = np.geomspace(t0, 4 * t0, GRID_POINTS)
    grid[0] = t0
    return grid


def make_tail_report(p: MultilinearPolynomial) -> TailReport:
    values = _centered_values(p)
    d = boolfn.degree(p)
    sigma = math.sqrt(float(np.mean(values * values)))
    magnitudes = np.abs(values)
    grid = []
    for t in default_t_grid(d):
        t = float(t)
        empirical = int(np.count_nonzero(magnitudes >= t * sigma)) / values.size
        grid.append(TailGridPoint(t=t, empirical=empirical, bound=tail_bound(d, t)))
    return TailReport(d=d, sigma=sigma, grid=tuple(grid))


def random_centered_polynomial(n: int, d: int, rng: np.random.Generator) -> MultilinearPolynomial:
    """Independent standard-Gaussian coefficients on all nonempty subsets of
    size <= d, normalized to sigma = 1 (the empty coefficient is zero)."""
    if not 1 <= d <= n:
        raise ValueError(f"need 1 <= d <= n, got d={d}, n={n}")
    coeffs = {}
    total = 0.0
    for size in range(1, d + 1):
        for subset in combinations(range(1, n + 1), size):
            c = float(rng.standard_normal())
            coeffs[frozenset(subset)] = c
            total += c * c
    scale = 1.0 / math.sqrt(total)
    return MultilinearPolynomial(n, Basis.FOURIER_PM1,
                                 {s: c * scale for s, c in coeffs.items()})


# ---------------------------------------------------------------------------
# Approximant derivative pipeline


@dataclass(frozen=True)
class PipelineReport:
    """Derivative-variance analysis of an optimal low-degree approximant."""

    eps: float
    approx_degree: int
    poly_degree: int
    norm_sq: float
    derivative_norms_sq: tuple[float, ...]
    derivative_mass: float
    mass_bound_ok: bool
    min_index: int
    min_norm_sq: float
    min_index_influential: bool
    influence_bound_ok: bool | None
    sensitivity: int


def lower_bound_pipeline(tt: TruthTable, eps: float = 1 / 3) -> PipelineReport:
    """Compute the eps-approximant, locate its least-varying derivative, and
    check the influence floor ``Inf_i >= 2^(1-2s)`` for that variable.

    The mass identity guarantees some variable has squared derivative norm
    at most ``deg * ||P||_2^2 / n``; the report returns that variable.
    """
    d_star = approxdeg.approx_degree(tt, eps)
    result = approxdeg.minimax_error(tt, d_star)
    p = result.approximant
    d = boolfn.degree(p)

    norm_sq = sum(v * v for v in p.coeffs.values())
    per_var = []
    for i in range(1, tt.n + 1):
        per_var.append(sum(v * v for s, v in p.coeffs.items() if i in s))
    mass = boolfn.derivative_mass(p)
    mass_ok = mass <= d * norm_sq + 1e-12

    min_index = 1 + min(range(tt.n), key=lambda j: per_var[j])
    s = boolfn.sensitivity(tt)
    inf_min = boolfn.influence(tt, min_index)
    influential = inf_min > 0
    influence_ok: bool | None = None
    if influential:
        influence_ok = inf_min >= Fraction(2, 4 ** s)

    return PipelineReport(
        eps=eps,
        approx_degree=d_star,
        poly_degree=d,
        norm_sq=float(norm_sq),
        derivative_norms_sq=tuple(float(v) for v in per_var),
        derivative_mass=mass,
        mass_bound_ok=mass_ok,
        min_index=min_index,
        min_norm_sq=float(per_var[min_index - 1]),
        min_index_influential=influential,
        influence_bound_ok=influence_ok,
        sensitivity=s,
    )
