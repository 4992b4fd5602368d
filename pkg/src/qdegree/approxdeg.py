"""Approximate degree via minimax linear programming.

The minimax problem — the smallest uniform error achievable when
approximating a Boolean function by a multilinear polynomial of degree
at most d — is solved as an LP over the character coefficients, with a
self-contained dense two-phase simplex over exact rationals.  All
optimality decisions are exact; floats appear only in the returned
convenience fields.

Targets use the 0/1 value convention (the approximant is compared
against ``f(x) in {0,1}``); the approximant itself is parameterized in
the +-1 character basis, where the degree cap is just coefficient
selection.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from types import MappingProxyType
from typing import Mapping, Sequence

from .boolfn import (
    Basis,
    CapacityError,
    MultilinearPolynomial,
    TruthTable,
    subset_mask,
)

MAX_LP_N = 5
EPS_SLACK = 1e-7  # threshold slack for approximate-degree decisions

_ZERO = Fraction(0)
_ONE = Fraction(1)


class SolverError(RuntimeError):
    """Internal LP failure; the minimax program is always feasible and bounded."""


# ---------------------------------------------------------------------------
# Dense two-phase simplex over Fractions (Bland's rule, so it cannot cycle)


def _pivot(tableau: list[list[Fraction]], basis: list[int], row: int, col: int) -> None:
    piv = tableau[row][col]
    tableau[row] = [v / piv for v in tableau[row]]
    prow = tableau[row]
    for i, r in enumerate(tableau):
        if i != row and r[col] != 0:
            factor = r[col]
            tableau[i] = [v - factor * p for v, p in zip(r, prow)]
    basis[row] = col


def _run_simplex(tableau: list[list[Fraction]], basis: list[int],
                 cost: list[Fraction], allowed: Sequence[bool]) -> Fraction:
    """Minimize cost over the current feasible tableau; returns the optimum."""
    m = len(tableau)
    ncols = len(tableau[0]) - 1
    # reduced-cost row: cost minus the basic components
    obj = list(cost) + [_ZERO]
    for i in range(m):
        cb = obj[basis[i]]
        if cb != 0:
            obj = [v - cb * t for v, t in zip(obj, tableau[i])]
    while True:
        enter = next((j for j in range(ncols) if allowed[j] and obj[j] < 0), None)
        if enter is None:
            return -obj[-1]
        leave = None
        best = None
        for i in range(m):
            a = tableau[i][enter]
            if a > 0:
                ratio = tableau[i][-1] / a
                if best is None or ratio < best or (ratio == best and basis[i] < basis[leave]):
                    best = ratio
                    leave = i
        if leave is None:
            raise SolverError("LP unbounded; the minimax program should never be")
        _pivot(tableau, basis, leave, enter)
        factor = obj[enter]
        if factor != 0:
            obj = [v - factor * t for v, t in zip(obj, tableau[leave])]


def _solve_lp_min(c: list[Fraction], rows_a: list[list[Fraction]],
                  rhs: list[Fraction]) -> tuple[Fraction, list[Fraction]]:
    """Minimize ``c . x`` subject to ``A x <= b`` and ``x >= 0``, exactly."""
    m = len(rows_a)
    nvars = len(c)
    neg = [i for i in range(m) if rhs[i] < 0]
    nart = len(neg)
    ncols = nvars + m + nart
    tableau: list[list[Fraction]] = []
    basis: list[int] = []
    art_of = {i: nvars + m + k for k, i in enumerate(neg)}
    for i in range(m):
        flip = rhs[i] < 0
        row = [(-v if flip else v) for v in rows_a[i]]
        row += [_ZERO] * (m + nart + 1)
        row[nvars + i] = -_ONE if flip else _ONE
        row[-1] = -rhs[i] if flip else rhs[i]
        if flip:
            row[art_of[i]] = _ONE
            basis.append(art_of[i])
        else:
            basis.append(nvars + i)
        tableau.append(row)

    if nart:
        phase1 = [_ZERO] * ncols
        for j in art_of.values():
            phase1[j] = _ONE
        value = _run_simplex(tableau, basis, phase1, [True] * ncols)
        if value != 0:
            raise SolverError("phase-1 optimum nonzero; constant approximants "
                              "make this LP feasible, so this is a bug")

    allowed = [j < nvars + m for j in range(ncols)]
    cost = list(c) + [_ZERO] * (m + nart)
    opt = _run_simplex(tableau, basis, cost, allowed)
    solution = [_ZERO] * nvars
    for i, b in enumerate(basis):
        if b < nvars:
            solution[b] = tableau[i][-1]
    return opt, solution


# ---------------------------------------------------------------------------
# Minimax approximation


@dataclass(frozen=True)
class MinimaxResult:
    """Optimal uniform approximation of a Boolean function at a degree cap.

    ``epsilon`` is the certified optimal error; ``epsilon_exact`` and
    ``exact_coefficients`` carry the rational optimum behind the float
    fields.  The approximant is in the FOURIER_PM1 basis.
    """

    degree_bound: int
    epsilon: float
    approximant: MultilinearPolynomial
    epsilon_exact: Fraction
    exact_coefficients: Mapping[frozenset, Fraction]


def _low_degree_subsets(n: int, d: int) -> list[frozenset[int]]:
    subsets: list[frozenset[int]] = []
    for size in range(d + 1):
        subsets.extend(frozenset(c) for c in combinations(range(1, n + 1), size))
    return subsets


def _character_signs(subsets: Sequence[frozenset[int]], n: int) -> list[list[int]]:
    """signs[r][j] = chi_{S_j} at row r."""
    masks = [subset_mask(s, n) for s in subsets]
    return [[-1 if (m & r).bit_count() & 1 else 1 for m in masks]
            for r in range(1 << n)]


def minimax_error(tt: TruthTable, d: int) -> MinimaxResult:
    """Globally optimal uniform error over degree-<=d multilinear approximants.

    Solves ``min eps  s.t.  -eps <= P(x) - f(x) <= eps`` for all x by an
    exact rational LP, so the optimum carries no solver noise.
    """
    if tt.n > MAX_LP_N:
        raise CapacityError(f"minimax LP supports n <= {MAX_LP_N}, got n={tt.n}")
    if not 0 <= d <= tt.n:
        raise ValueError(f"degree bound must be in 0..{tt.n}, got {d}")

    subsets = _low_degree_subsets(tt.n, d)
    signs = _character_signs(subsets, tt.n)
    k = len(subsets)
    size = 1 << tt.n

    # variables: u_1..u_k, v_1..v_k (coefficients split into +/- parts), eps
    nvars = 2 * k + 1
    cost = [_ZERO] * nvars
    cost[-1] = _ONE
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for r in range(size):
        f_r = Fraction(int(tt.values[r]))
        chi = signs[r]
        up = [Fraction(chi[j]) for j in range(k)] + [Fraction(-chi[j]) for j in range(k)]
        up.append(-_ONE)
        rows.append(up)
        rhs.append(f_r)
        rows.append([-v for v in up[:-1]] + [-_ONE])
        rhs.append(-f_r)

    opt, solution = _solve_lp_min(cost, rows, rhs)

    coeffs = {subsets[j]: solution[j] - solution[k + j] for j in range(k)}
    coeffs = {s: c for s, c in coeffs.items() if c != 0}

    # certify primal feasibility/tightness of the reported optimum exactly
    worst = _ZERO
    for r in range(size):
        value = sum(c * (-1 if (subset_mask(s, tt.n) & r).bit_count() & 1 else 1)
                    for s, c in coeffs.items())
        dev = abs(value - int(tt.values[r]))
        if dev > worst:
            worst = dev
    if worst != opt:
        raise SolverError(f"optimum {opt} does not match achieved deviation {worst}")

    approximant = MultilinearPolynomial(
        tt.n, Basis.FOURIER_PM1, {s: float(c) for s, c in coeffs.items()})
    return MinimaxResult(
        degree_bound=d,
        epsilon=float(opt),
        approximant=approximant,
        epsilon_exact=opt,
        exact_coefficients=MappingProxyType(dict(coeffs)),
    )


def approx_degree(tt: TruthTable, eps: float = 1 / 3) -> int:
    """Smallest d whose optimal degree-d uniform error is at most eps.

    The comparison uses ``eps + 1e-7`` slack so boundary optima (exact
    rationals like 1/4 or 1/3) decide stably.
    """
    if not 0 < eps < 0.5:
        raise ValueError(f"eps must lie in (0, 1/2), got {eps}")
    for d in range(tt.n + 1):
        if minimax_error(tt, d).epsilon <= eps + EPS_SLACK:
            return d
    raise SolverError("unreachable: the exact representation has error 0")


def sign_margin_check(p: MultilinearPolynomial, tt: TruthTable, gamma: float) -> bool:
    """Does p sign-represent the +-1 function with margin in [1/n^gamma, 1]?

    True iff at every input the sign of p matches the +-1 encoding of the
    truth table and ``1/n**gamma <= |p| <= 1``.  A zero value anywhere
    fails (no sign).
    """
    if p.basis is not Basis.FOURIER_PM1:
        raise ValueError("sign_margin_check requires the FOURIER_PM1 basis")
    if p.n != tt.n:
        raise ValueError(f"arity mismatch: polynomial n={p.n}, truth table n={tt.n}")
    if gamma < 0:
        raise ValueError(f"gamma must be >= 0, got {gamma}")
    tol = 1e-12
    lower = tt.n ** (-gamma)
    values = p.evaluate_cube()
    target = tt.signed()
    for v, t in zip(values, target):
        if v == 0.0 or (v > 0) != (t > 0):
            return False
        if abs(v) < lower - tol or abs(v) > 1 + tol:
            return False
    return True
