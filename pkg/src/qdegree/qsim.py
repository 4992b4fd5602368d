"""Exact statevector simulation of the quantum query model, with query counting.

Registers have arbitrary finite dimension (a dimension-m index register is
used directly; padding to qubits would distort inner products).  A
PhaseOracle wraps a hidden bit string and counts every application; views
onto a sub-range share the parent's counter, so composed algorithms account
for all queries on one meter.

All randomness flows through an explicit ``numpy.random.Generator``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

NORM_TOL = 1e-10

#: The planned mismatch-search schedule uses at most this many queries per
#: sqrt(m), for every search-space size m <= 64 at the default failure
#: target 1/3 (verified exactly in the test suite).
GROVER_BUDGET_COEFF = 3.0


def bits_to_string(bits: Iterable[int]) -> str:
    return "".join(str(int(b)) for b in bits)


def string_to_bits(s: str) -> np.ndarray:
    arr = np.frombuffer(s.encode(), dtype=np.uint8) - ord("0")
    if arr.size and int(arr.max()) > 1:
        raise ValueError(f"bit string must contain only 0/1, got {s!r}")
    return arr.astype(np.uint8)


def int_to_bitstring(value: int, width: int) -> str:
    """Most-significant-first binary rendering, fixed width."""
    return format(value, f"0{width}b")


@dataclass(frozen=True)
class StateVector:
    """Complex amplitudes over one or more finite-dimensional registers."""

    dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        if not dims or any(d < 1 for d in dims):
            raise ValueError(f"register dimensions must be positive, got {dims}")
        amps = np.ascontiguousarray(self.amplitudes, dtype=np.complex128)
        total = math.prod(dims)
        if amps.shape != (total,):
            raise ValueError(f"expected {total} amplitudes, got {amps.shape}")
        norm = float(np.sum(np.abs(amps) ** 2))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state not normalized: |amplitudes|^2 sums to {norm}")
        amps.setflags(write=False)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", amps)

    def reshaped(self) -> np.ndarray:
        return self.amplitudes.reshape(self.dims)


def uniform_state(dims: Sequence[int]) -> StateVector:
    total = math.prod(dims)
    return StateVector(tuple(dims), np.full(total, 1.0 / math.sqrt(total), dtype=np.complex128))


def basis_state(dims: Sequence[int], index: int) -> StateVector:
    total = math.prod(dims)
    amps = np.zeros(total, dtype=np.complex128)
    amps[index] = 1.0
    return StateVector(tuple(dims), amps)


class _QueryCounter:
    __slots__ = ("count",)

    def __init__(self):
        self.count = 0


class PhaseOracle:
    """Hidden bit string queried through phases, with a monotone query counter.

    ``restrict(lo, hi)`` exposes a window onto the string as an oracle in
    its own right; the view shares this oracle's counter.  ``bits`` is
    readable for analysis code (exact success probabilities, verification);
    algorithms must touch the string only via ``query_phases`` or
    ``classical_read``, which count.
    """

    def __init__(self, bits, _counter: _QueryCounter | None = None):
        if isinstance(bits, str):
            bits = string_to_bits(bits)
        arr = np.ascontiguousarray(bits, dtype=np.uint8)
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("oracle needs a nonempty 1-d bit string")
        if int(arr.max()) > 1:
            raise ValueError("oracle bits must be 0/1")
        arr.setflags(write=False)
        self._bits = arr
        self._counter = _counter if _counter is not None else _QueryCounter()

    @property
    def m(self) -> int:
        return self._bits.size

    @property
    def bits(self) -> np.ndarray:
        return self._bits

    @property
    def query_count(self) -> int:
        return self._counter.count

    def query_phases(self) -> np.ndarray:
        """The phase vector ``(-1)^{x_j}``; counts one query."""
        self._counter.count += 1
        return 1.0 - 2.0 * self._bits.astype(np.float64)

    def classical_read(self, j: int) -> int:
        """Read one bit classically; counts one query."""
        if not 0 <= j < self.m:
            raise ValueError(f"position {j} out of range 0..{self.m - 1}")
        self._counter.count += 1
        return int(self._bits[j])

    def restrict(self, lo: int, hi: int) -> "PhaseOracle":
        if not 0 <= lo < hi <= self.m:
            raise ValueError(f"invalid window [{lo}, {hi}) for m={self.m}")
        return PhaseOracle(self._bits[lo:hi], _counter=self._counter)


def oracle_query(state: StateVector, oracle: PhaseOracle, register: int = 0) -> StateVector:
    """Multiply the amplitude of register value j by ``(-1)^{x_j}``; one query."""
    if state.dims[register] != oracle.m:
        raise ValueError(
            f"register {register} has dimension {state.dims[register]}, oracle has m={oracle.m}")
    phases = oracle.query_phases()
    shape = [1] * len(state.dims)
    shape[register] = oracle.m
    amps = state.reshaped() * phases.reshape(shape)
    return StateVector(state.dims, amps.reshape(-1))


def distribution(state: StateVector, register: int = 0) -> np.ndarray:
    """Born-rule outcome probabilities on one register."""
    probs = np.abs(state.reshaped()) ** 2
    axes = tuple(a for a in range(len(state.dims)) if a != register)
    if axes:
        probs = probs.sum(axis=axes)
    probs = probs.reshape(-1)
    total = float(probs.sum())
    if abs(total - 1.0) > NORM_TOL:
        raise ValueError(f"distribution sums to {total}, expected 1")
    return probs


def measure(state: StateVector, register: int = 0, rng: np.random.Generator | None = None) -> int:
    """Sample an outcome on one register (the state is not collapsed; all
    algorithms here measure terminally)."""
    if rng is None:
        raise ValueError("measure needs an explicit seeded Generator")
    probs = distribution(state, register)
    probs = np.clip(probs, 0.0, None)
    probs /= probs.sum()
    return int(rng.choice(probs.size, p=probs))


def prepare_psi(oracle: PhaseOracle) -> StateVector:
    """The signed uniform state ``sum_j (-1)^{x_j} |j> / sqrt(m)``; one query."""
    return oracle_query(uniform_state((oracle.m,)), oracle)


def state_overlap(a: StateVector, b: StateVector) -> complex:
    return complex(np.vdot(a.amplitudes, b.amplitudes))


# ---------------------------------------------------------------------------
# Bernstein-Vazirani


def _fwht_complex(a: np.ndarray) -> None:
    from . import kernels

    kernels.fwht_inplace(a)


def bv_final_state(oracle: PhaseOracle) -> StateVector:
    """State after the single-query Bernstein-Vazirani circuit.

    For an oracle string of the inner-product form (bit j equals
    ``z . j mod 2``) the final state is exactly the basis state ``|z>``.
    Consumes exactly one query.
    """
    m = oracle.m
    if m & (m - 1):
        raise ValueError(f"Bernstein-Vazirani needs m = 2^s, got m={m}")
    psi = prepare_psi(oracle)
    amps = np.array(psi.amplitudes, dtype=np.complex128)
    _fwht_complex(amps)
    amps /= math.sqrt(m)
    return StateVector((m,), amps)


def bernstein_vazirani(oracle: PhaseOracle, rng: np.random.Generator) -> str:
    """Measure the Bernstein-Vazirani state; returns an s-bit string.

    Under the inner-product promise the answer is deterministic; otherwise
    the returned string follows the squared Hadamard coefficients of the
    oracle's sign pattern.
    """
    state = bv_final_state(oracle)
    s = oracle.m.bit_length() - 1
    outcome = measure(state, 0, rng)
    return int_to_bitstring(outcome, s) if s else ""


# ---------------------------------------------------------------------------
# Grover search for a mismatch against a known reference string


@dataclass(frozen=True)
class GroverSchedule:
    """Iteration plan for mismatch search with unknown solution count.

    Each round r draws an iteration count uniformly below ``caps[r]``, runs
    that many Grover iterations from the uniform state, measures, and spends
    one more query verifying the candidate.  Worst-case total queries are
    ``sum(caps)``; rounds are appended at planning time until the exact
    failure probability is at most delta for every possible number of
    mismatches >= 1.
    """

    m: int
    delta: float
    caps: tuple[int, ...]

    @property
    def rounds(self) -> int:
        return len(self.caps)

    @property
    def worst_case_queries(self) -> int:
        return int(sum(self.caps))

    @classmethod
    def plan(cls, m: int, delta: float = 1 / 3, growth: float = 1.2,
             max_rounds: int = 500) -> "GroverSchedule":
        if m < 1:
            raise ValueError(f"search space must be nonempty, got m={m}")
        if not 0 < delta < 1:
            raise ValueError(f"delta must lie in (0,1), got {delta}")
        cap_max = max(2, math.ceil(math.pi / 4 * math.sqrt(m)) + 1)
        caps: list[int] = []
        while len(caps) < max_rounds:
            caps.append(min(math.ceil(growth ** len(caps)), cap_max))
            worst = max(_schedule_failure(m, k, caps) for k in range(1, m + 1))
            if worst <= delta:
                schedule = cls(m=m, delta=delta, caps=tuple(caps))
                if m <= 64 and schedule.worst_case_queries > GROVER_BUDGET_COEFF * math.sqrt(m):
                    raise AssertionError(
                        f"planned budget {schedule.worst_case_queries} exceeds "
                        f"{GROVER_BUDGET_COEFF}*sqrt({m})")
                return schedule
        raise RuntimeError(f"schedule did not reach delta={delta} within {max_rounds} rounds")


def _round_success(m: int, k: int, cap: int) -> float:
    """Probability one round measures a marked item, averaged over the
    uniformly drawn iteration count below cap."""
    theta = math.asin(math.sqrt(k / m))
    return sum(math.sin((2 * j + 1) * theta) ** 2 for j in range(cap)) / cap


def _schedule_failure(m: int, k: int, caps: Sequence[int]) -> float:
    fail = 1.0
    for cap in caps:
        fail *= 1.0 - _round_success(m, k, cap)
    return fail


def grover_success_probability(m: int, k: int, schedule: GroverSchedule) -> float:
    """Exact probability the schedule returns a verified mismatch, given k
    mismatching positions (0 for none: the search then always returns None)."""
    if schedule.m != m:
        raise ValueError(f"schedule planned for m={schedule.m}, got m={m}")
    if k == 0:
        return 0.0
    return 1.0 - _schedule_failure(m, k, schedule.caps)


def _grover_iteration(state: StateVector, oracle: PhaseOracle,
                      ref_phases: np.ndarray) -> StateVector:
    """One Grover step: phase-flip positions differing from the reference
    (one query), then reflect about the uniform state."""
    state = oracle_query(state, oracle)
    amps = state.amplitudes * ref_phases
    amps = 2.0 * amps.mean() - amps
    return StateVector(state.dims, amps)


def grover_find_mismatch(oracle: PhaseOracle, reference,
                         schedule: GroverSchedule,
                         rng: np.random.Generator) -> int | None:
    """Search for a position where the oracle string differs from ``reference``.

    Returns a verified mismatching index (never a false positive: every
    candidate is confirmed with one counted classical read), or None if the
    schedule is exhausted — which is certain when the strings are equal.
    """
    if isinstance(reference, str):
        reference = string_to_bits(reference)
    reference = np.ascontiguousarray(reference, dtype=np.uint8)
    if reference.size != oracle.m:
        raise ValueError(f"reference length {reference.size} != oracle m={oracle.m}")
    ref_phases = 1.0 - 2.0 * reference.astype(np.float64)
    start = oracle.query_count
    found = None
    for cap in schedule.caps:
        iters = int(rng.integers(cap))
        state = uniform_state((oracle.m,))
        for _ in range(iters):
            state = _grover_iteration(state, oracle, ref_phases)
        candidate = measure(state, 0, rng)
        if oracle.classical_read(candidate) != int(reference[candidate]):
            found = candidate
            break
    used = oracle.query_count - start
    if used > schedule.worst_case_queries:
        raise AssertionError(f"query accounting bug: used {used} > budget "
                             f"{schedule.worst_case_queries}")
    return found
