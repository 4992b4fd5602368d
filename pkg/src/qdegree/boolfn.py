"""Exact representation and Fourier analysis of total Boolean functions.

Conventions, fixed package-wide:

* Truth-table row ``r`` encodes the input ``x`` by ``x_i = (r >> (n - i)) & 1``,
  i.e. ``x_1`` is the most significant bit of ``r``.
* The Fourier side uses the encoding ``0 -> +1``, ``1 -> -1``, so the parity
  of a subset S is exactly the character ``chi_S``.
* Influences are exact rationals (a flip count over ``2**n``); all other
  analytics are double precision with a ``1e-9`` coefficient-significance
  threshold and ``1e-12`` identity tolerance.
* Exhaustive operations are capped at ``n <= 24``.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from types import MappingProxyType
from typing import Callable, Iterable, Mapping

import numpy as np

from . import kernels

MAX_EXHAUSTIVE_N = 24
COEFF_THRESHOLD = 1e-9    # significance threshold for degree decisions
IDENTITY_TOL = 1e-12      # tolerance for float identities (Parseval etc.)
_CONVERSION_FLOOR = 1e-13  # coefficients below this are dropped after basis changes


class CapacityError(ValueError):
    """Raised when an exhaustive operation exceeds the desk-scale cap."""


class TruthTableParseError(ValueError):
    """Raised for malformed truth-table text; carries line/column info."""

    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class Basis(Enum):
    MONOMIAL_01 = "monomial01"
    FOURIER_PM1 = "fourier_pm1"


def _check_capacity(n: int) -> None:
    if n > MAX_EXHAUSTIVE_N:
        raise CapacityError(f"n={n} exceeds the exhaustive-evaluation cap {MAX_EXHAUSTIVE_N}")


def subset_mask(subset: Iterable[int], n: int) -> int:
    """Bit mask of a variable subset (variable i sits at bit ``n - i``)."""
    mask = 0
    for i in subset:
        if not 1 <= i <= n:
            raise ValueError(f"variable index {i} out of range 1..{n}")
        mask |= 1 << (n - i)
    return mask


def mask_subset(mask: int, n: int) -> frozenset[int]:
    """Inverse of :func:`subset_mask`."""
    return frozenset(i for i in range(1, n + 1) if (mask >> (n - i)) & 1)


def row_bits(r: int, n: int) -> tuple[int, ...]:
    """Input bits ``(x_1, ..., x_n)`` encoded by row index r."""
    return tuple((r >> (n - i)) & 1 for i in range(1, n + 1))


def bits_row(bits: Iterable[int], n: int) -> int:
    """Row index for input bits ``(x_1, ..., x_n)``."""
    r = 0
    for i, b in enumerate(bits, start=1):
        if b not in (0, 1):
            raise ValueError(f"bit values must be 0/1, got {b!r}")
        r |= b << (n - i)
    return r


@dataclass(frozen=True)
class TruthTable:
    """A total Boolean function on n bits, stored as all ``2**n`` values."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need n >= 1, got {self.n}")
        if self.n > MAX_EXHAUSTIVE_N:
            raise CapacityError(f"truth tables support n <= {MAX_EXHAUSTIVE_N}, got {self.n}")
        vals = np.ascontiguousarray(self.values, dtype=np.uint8)
        if vals.shape != (1 << self.n,):
            raise ValueError(f"expected {1 << self.n} values for n={self.n}, got {vals.shape}")
        if vals.size and int(vals.max()) > 1:
            raise ValueError("truth-table entries must be 0 or 1")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, n: int, fn: Callable[[tuple[int, ...]], int]) -> "TruthTable":
        vals = [fn(row_bits(r, n)) for r in range(1 << n)]
        return cls(n, np.array(vals, dtype=np.uint8))

    def value_at(self, r: int) -> int:
        return int(self.values[r])

    def signed(self) -> np.ndarray:
        """The +-1 encoding (0 -> +1, 1 -> -1) as float64."""
        return 1.0 - 2.0 * self.values.astype(np.float64)

    def signed_int(self) -> np.ndarray:
        return 1 - 2 * self.values.astype(np.int64)

    def flip_row(self, r: int, i: int) -> int:
        if not 1 <= i <= self.n:
            raise ValueError(f"variable index {i} out of range 1..{self.n}")
        return r ^ (1 << (self.n - i))

    def complement(self) -> "TruthTable":
        return TruthTable(self.n, 1 - self.values)


@dataclass(frozen=True)
class MultilinearPolynomial:
    """Real multilinear polynomial, sparse over variable subsets.

    ``basis`` fixes the domain convention: MONOMIAL_01 means monomials
    ``prod_{i in S} x_i`` over ``x in {0,1}^n``; FOURIER_PM1 means
    characters ``chi_S`` over ``{+-1}^n``.  Absent subsets have
    coefficient 0.
    """

    n: int
    basis: Basis
    coeffs: Mapping[frozenset, float]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"need n >= 1, got {self.n}")
        _check_capacity(self.n)
        clean: dict[frozenset, float] = {}
        for subset, value in self.coeffs.items():
            s = frozenset(subset)
            if any(not 1 <= i <= self.n for i in s):
                raise ValueError(f"subset {sorted(s)} out of range for n={self.n}")
            v = float(value)
            if v != 0.0:
                clean[s] = v
        object.__setattr__(self, "coeffs", MappingProxyType(clean))

    @classmethod
    def from_dense(cls, n: int, basis: Basis, vec: np.ndarray,
                   drop_tol: float = 0.0) -> "MultilinearPolynomial":
        coeffs = {}
        for mask in np.flatnonzero(np.abs(vec) > drop_tol):
            coeffs[mask_subset(int(mask), n)] = float(vec[mask])
        return cls(n, basis, coeffs)

    def coeff(self, subset: Iterable[int]) -> float:
        return self.coeffs.get(frozenset(subset), 0.0)

    def dense(self) -> np.ndarray:
        vec = np.zeros(1 << self.n, dtype=np.float64)
        for subset, value in self.coeffs.items():
            vec[subset_mask(subset, self.n)] = value
        return vec

    def evaluate_cube(self) -> np.ndarray:
        """Values on all ``2**n`` rows, in truth-table row order."""
        _check_capacity(self.n)
        vec = self.dense()
        if self.basis is Basis.FOURIER_PM1:
            kernels.fwht_inplace(vec)
        else:
            kernels.zeta_inplace(vec)
        return vec

    def evaluate(self, bits: Iterable[int]) -> float:
        """Value at a single input, given as bits ``(x_1, ..., x_n)``."""
        bits = tuple(bits)
        if len(bits) != self.n:
            raise ValueError(f"expected {self.n} bits, got {len(bits)}")
        total = 0.0
        for subset, value in self.coeffs.items():
            if self.basis is Basis.FOURIER_PM1:
                sign = -1 if sum(bits[i - 1] for i in subset) % 2 else 1
                total += value * sign
            else:
                if all(bits[i - 1] for i in subset):
                    total += value
        return total


@dataclass(frozen=True)
class FunctionStats:
    """Summary analytics of a Boolean function (Fourier side uses +-1 encoding)."""

    expectation: float
    variance: float
    influences: tuple[Fraction, ...]
    sensitivity: int
    degree: int


# ---------------------------------------------------------------------------
# Fourier transform and basis conversion


def fourier_transform(tt: TruthTable) -> MultilinearPolynomial:
    """Fourier expansion of the +-1 encoding of the function.

    ``coeff(S) = 2**-n * sum_x f(x) chi_S(x)``; Parseval gives
    ``sum_S coeff(S)**2 = 1`` for every Boolean function.
    """
    _check_capacity(tt.n)
    vec = tt.signed()
    kernels.fwht_inplace(vec)
    vec /= float(1 << tt.n)
    return MultilinearPolynomial.from_dense(tt.n, Basis.FOURIER_PM1, vec)


def convert_basis(p: MultilinearPolynomial, target: Basis) -> MultilinearPolynomial:
    """Re-express a polynomial in the other domain convention.

    The two forms agree pointwise under the variable map ``x -> 1 - 2x``;
    degree is preserved.
    """
    if p.basis is target:
        return p
    values = p.evaluate_cube()
    if target is Basis.FOURIER_PM1:
        kernels.fwht_inplace(values)
        values /= float(1 << p.n)
    else:
        kernels.mobius_inplace(values)
    return MultilinearPolynomial.from_dense(p.n, target, values, drop_tol=_CONVERSION_FLOOR)


def degree(p: MultilinearPolynomial) -> int:
    """Largest subset size with a coefficient above the significance threshold."""
    return max((len(s) for s, v in p.coeffs.items() if abs(v) > COEFF_THRESHOLD), default=0)


def truth_table_degree(tt: TruthTable) -> int:
    """Exact degree of the multilinear representation (integer arithmetic)."""
    spectrum = tt.signed_int()
    kernels.fwht_inplace(spectrum)
    nz = np.flatnonzero(spectrum)
    if nz.size == 0:
        return 0
    return max(int(m).bit_count() for m in nz)


# ---------------------------------------------------------------------------
# Combinatorial measures


def influence(tt: TruthTable, i: int) -> Fraction:
    """Exact probability that flipping bit i changes the output."""
    if not 1 <= i <= tt.n:
        raise ValueError(f"variable index {i} out of range 1..{tt.n}")
    idx = np.arange(1 << tt.n)
    count = int(np.count_nonzero(tt.values != tt.values[idx ^ (1 << (tt.n - i))]))
    return Fraction(count, 1 << tt.n)


def influences(tt: TruthTable) -> tuple[Fraction, ...]:
    counts = kernels.influence_counts(tt.values, tt.n)
    size = 1 << tt.n
    return tuple(Fraction(int(c), size) for c in counts)


def sensitivity_at(tt: TruthTable, x) -> int:
    """Number of influential variables at one input (row index or bit sequence)."""
    r = x if isinstance(x, (int, np.integer)) else bits_row(x, tt.n)
    r = int(r)
    if not 0 <= r < (1 << tt.n):
        raise ValueError(f"row index {r} out of range")
    v = tt.values[r]
    return sum(1 for i in range(1, tt.n + 1) if tt.values[r ^ (1 << (tt.n - i))] != v)


def sensitivity(tt: TruthTable) -> int:
    """Maximum sensitivity over all inputs."""
    return int(kernels.sensitivity_profile(tt.values, tt.n).max())


def significant_variables(tt: TruthTable) -> frozenset[int]:
    """Variables with nonzero influence."""
    counts = kernels.influence_counts(tt.values, tt.n)
    return frozenset(i for i in range(1, tt.n + 1) if counts[i - 1] > 0)


def stats(tt: TruthTable) -> FunctionStats:
    signed = tt.signed()
    exp = float(signed.mean())
    var = float((signed * signed).mean() - exp * exp)
    return FunctionStats(
        expectation=exp,
        variance=var,
        influences=influences(tt),
        sensitivity=sensitivity(tt),
        degree=truth_table_degree(tt),
    )


# ---------------------------------------------------------------------------
# Derivatives and norms


def discrete_derivative(p: MultilinearPolynomial, i: int) -> MultilinearPolynomial:
    """The polynomial ``x -> (p(x) - p(x with bit i flipped)) / 2``.

    In the Fourier basis this keeps exactly the coefficients of subsets
    containing i, so the result always has expectation 0.
    """
    if p.basis is not Basis.FOURIER_PM1:
        raise ValueError("discrete_derivative requires the FOURIER_PM1 basis")
    if not 1 <= i <= p.n:
        raise ValueError(f"variable index {i} out of range 1..{p.n}")
    return MultilinearPolynomial(p.n, p.basis,
                                 {s: v for s, v in p.coeffs.items() if i in s})


def derivative_mass(p: MultilinearPolynomial) -> float:
    """``sum_S |S| coeff(S)**2``, the total squared 2-norm of all derivatives.

    Always at most ``degree(p)`` times the squared 2-norm of p.
    """
    if p.basis is not Basis.FOURIER_PM1:
        raise ValueError("derivative_mass requires the FOURIER_PM1 basis")
    return float(sum(len(s) * v * v for s, v in p.coeffs.items()))


def expectation(p: MultilinearPolynomial) -> float:
    """Mean over the uniform cube, by exhaustive evaluation."""
    return float(p.evaluate_cube().mean())


def variance(p: MultilinearPolynomial) -> float:
    values = p.evaluate_cube()
    mean = values.mean()
    return float((values * values).mean() - mean * mean)


def p_norm(p: MultilinearPolynomial, q: float) -> float:
    """``E[|p|^q]**(1/q)`` over the uniform cube; non-decreasing in q."""
    if q < 1:
        raise ValueError(f"p_norm requires q >= 1, got {q}")
    values = np.abs(p.evaluate_cube())
    return float(np.mean(values ** q) ** (1.0 / q))


# ---------------------------------------------------------------------------
# Builders


def or_fn(n: int) -> TruthTable:
    vals = np.ones(1 << n, dtype=np.uint8)
    vals[0] = 0
    return TruthTable(n, vals)


def and_fn(n: int) -> TruthTable:
    vals = np.zeros(1 << n, dtype=np.uint8)
    vals[-1] = 1
    return TruthTable(n, vals)


def majority(n: int) -> TruthTable:
    if n % 2 == 0:
        raise ValueError(f"majority needs an odd variable count, got {n}")
    rows = np.arange(1 << n, dtype=np.uint32)
    ones = np.array([int(r).bit_count() for r in rows])
    return TruthTable(n, (ones > n // 2).astype(np.uint8))


def parity(n: int, subset: Iterable[int] | None = None) -> TruthTable:
    """Parity of the bits in ``subset`` (all n variables by default)."""
    mask = (1 << n) - 1 if subset is None else subset_mask(subset, n)
    rows = np.arange(1 << n, dtype=np.uint32)
    vals = np.array([int(r & mask).bit_count() & 1 for r in rows], dtype=np.uint8)
    return TruthTable(n, vals)


def dictator(n: int, i: int) -> TruthTable:
    if not 1 <= i <= n:
        raise ValueError(f"variable index {i} out of range 1..{n}")
    rows = np.arange(1 << n, dtype=np.uint32)
    return TruthTable(n, ((rows >> (n - i)) & 1).astype(np.uint8))


def address_function(k: int) -> TruthTable:
    """Selector on ``k + log2(k)`` bits: the last log2(k) bits, read
    most-significant-first, pick which of the first k bits to output."""
    if k < 2 or (k & (k - 1)) != 0:
        raise ValueError(f"k must be a power of 2 with k >= 2, got {k}")
    s = k.bit_length() - 1
    n = k + s
    _check_capacity(n)
    rows = np.arange(1 << n, dtype=np.uint64)
    addr = rows & ((1 << s) - 1)
    shift = (n - 1 - addr).astype(np.uint64)
    return TruthTable(n, ((rows >> shift) & 1).astype(np.uint8))


# ---------------------------------------------------------------------------
# Exhaustive inequality sweep


@dataclass(frozen=True)
class SweepViolation:
    code: int
    check: str
    variable: int | None
    detail: str


@dataclass(frozen=True)
class SweepResult:
    n: int
    functions: int
    violations: tuple[SweepViolation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def exhaustive_inequality_sweep(n: int) -> SweepResult:
    """Check three exact inequalities over *all* functions on n <= 4 bits.

    For every function and every influential variable i:
    ``Inf_i >= 2**-deg`` and ``Inf_i >= 2**(1 - 2*s)``; and always
    ``sum_i Inf_i <= deg``.  All comparisons are integer-exact
    (influences as counts out of ``2**n``).
    """
    if not 1 <= n <= 4:
        raise CapacityError(f"exhaustive sweep supports 1 <= n <= 4, got {n}")
    deg, sens, inf = kernels.batch_analyze(n)
    size = 1 << n
    influential = inf > 0

    # Inf_i >= 2**-deg  <=>  count_i * 2**deg >= 2**n
    ok_deg = ~influential | (inf * np.left_shift(np.int64(1), deg)[:, None] >= size)
    # sum_i Inf_i <= deg  <=>  sum of counts <= deg * 2**n
    ok_sum = inf.sum(axis=1) <= deg * size
    # Inf_i >= 2**(1-2s)  <=>  count_i * 2**(2s) >= 2**(n+1)
    ok_sens = ~influential | (inf * np.left_shift(np.int64(1), 2 * sens)[:, None] >= 2 * size)

    violations: list[SweepViolation] = []
    for code in np.flatnonzero(~ok_deg.all(axis=1)):
        for i in np.flatnonzero(~ok_deg[code]):
            violations.append(SweepViolation(
                int(code), "influence_vs_degree", int(i) + 1,
                f"count={int(inf[code, i])}/{size}, degree={int(deg[code])}"))
    for code in np.flatnonzero(~ok_sum):
        violations.append(SweepViolation(
            int(code), "influence_sum_vs_degree", None,
            f"sum_counts={int(inf[code].sum())}/{size}, degree={int(deg[code])}"))
    for code in np.flatnonzero(~ok_sens.all(axis=1)):
        for i in np.flatnonzero(~ok_sens[code]):
            violations.append(SweepViolation(
                int(code), "influence_vs_sensitivity", int(i) + 1,
                f"count={int(inf[code, i])}/{size}, sensitivity={int(sens[code])}"))

    return SweepResult(n=n, functions=1 << size, violations=tuple(violations))


def truth_table_from_code(code: int, n: int) -> TruthTable:
    """Decode the integer function encoding used by the sweep (bit r = f(r))."""
    vals = np.array([(code >> r) & 1 for r in range(1 << n)], dtype=np.uint8)
    return TruthTable(n, vals)


# ---------------------------------------------------------------------------
# Truth-table text format: line 1 is n, line 2 is 2**n characters of 0/1


def parse_truth_table_text(text: str) -> TruthTable:
    lines = text.splitlines()
    if not lines:
        raise TruthTableParseError("empty input, expected a variable count", line=1)
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise TruthTableParseError(f"expected an integer variable count, got {lines[0]!r}",
                                   line=1) from None
    if n < 1:
        raise TruthTableParseError(f"variable count must be >= 1, got {n}", line=1)
    if n > MAX_EXHAUSTIVE_N:
        raise TruthTableParseError(f"variable count {n} exceeds the cap {MAX_EXHAUSTIVE_N}",
                                   line=1)
    if len(lines) < 2:
        raise TruthTableParseError(f"expected a second line with {1 << n} bits", line=2)
    bits = lines[1].strip()
    if len(bits) != (1 << n):
        raise TruthTableParseError(
            f"expected exactly {1 << n} characters for n={n}, got {len(bits)}",
            line=2, column=len(bits) + 1)
    for col, ch in enumerate(bits, start=1):
        if ch not in "01":
            raise TruthTableParseError(f"invalid character {ch!r}", line=2, column=col)
    if any(line.strip() for line in lines[2:]):
        raise TruthTableParseError("unexpected trailing content", line=3)
    return TruthTable(n, np.frombuffer(bits.encode(), dtype=np.uint8) - ord("0"))


def format_truth_table(tt: TruthTable) -> str:
    return f"{tt.n}\n{''.join(str(int(v)) for v in tt.values)}\n"
