"""Quantum addressing schemes and their composition into total functions.

An addressing scheme maps m bits onto an address in [k], every address
being reachable.  Two constructions are provided:

* Scheme 1 — k random codewords with controlled pairwise Hamming
  distances; the address is decoded by discriminating the tensor-powered
  phase states of the codewords, then confirmed by Grover mismatch search
  (a failed confirmation falls back to address 1, the default).
* Scheme 2 — the input is t blocks of 2^s bits; a block holding the
  inner-product codeword of some s-bit z decodes to z with a single query
  (Bernstein-Vazirani).  The concatenated guess is confirmed by one Grover
  mismatch search over all m bits; any discrepancy falls back to the
  all-zeros address.

The composed function on n = k + m bits outputs the addressed bit among
the first k; evaluating it costs the scheme's queries plus one.  Both
sampled runs (with query metering) and exact per-branch output
distributions are available.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Sequence, Union

import numpy as np

from . import boolfn, discrimination, qsim
from .boolfn import TruthTable
from .discrimination import DiscriminationPOVM, GramMatrix
from .qsim import GroverSchedule, PhaseOracle


class ConstructionError(RuntimeError):
    """Codeword sampling failed to satisfy the distance constraints."""


def _as_bits(x, m: int) -> np.ndarray:
    arr = qsim.string_to_bits(x) if isinstance(x, str) else np.ascontiguousarray(x, dtype=np.uint8)
    if arr.shape != (m,):
        raise ValueError(f"expected {m} bits, got shape {arr.shape}")
    return arr


# ---------------------------------------------------------------------------
# Scheme 1: codeword discrimination


def distance_interval(m: int, c: float, t_design: float) -> tuple[int, int]:
    """Admissible pairwise-distance range ``[m/2 - c t sqrt(t log t), ...]``,
    clipped to [1, m-1]: coinciding or complementary codewords would make
    the phase states indistinguishable up to sign, so they are never
    accepted."""
    half = c * t_design * math.sqrt(t_design * math.log2(t_design)) if t_design > 1 else 0.0
    lo = max(1, math.ceil(m / 2 - half))
    hi = min(m - 1, math.floor(m / 2 + half))
    if lo > hi:
        raise ValueError(f"empty distance interval for m={m}, c={c}, t={t_design}")
    return lo, hi


def _max_pairwise_overlap(words: Sequence[np.ndarray], m: int) -> Fraction:
    worst = Fraction(0)
    for i in range(len(words)):
        for j in range(i + 1, len(words)):
            d = discrimination.hamming_distance(words[i], words[j])
            worst = max(worst, Fraction(abs(m - 2 * d), m))
    return worst


def _adaptive_tensor_power(max_overlap: Fraction, k: int) -> int:
    """Smallest t' with ``max_overlap ** t' <= 1/k^2`` (exact rationals)."""
    if max_overlap >= 1:
        raise ValueError("overlap magnitude 1: states identical up to phase")
    target = Fraction(1, k * k)
    if max_overlap == 0:
        return 1
    t_prime, power = 1, max_overlap
    while power > target:
        t_prime += 1
        power *= max_overlap
    return t_prime


@dataclass(frozen=True)
class Scheme1:
    """Codeword-discrimination addressing scheme with all derived machinery."""

    k: int
    m: int
    c: float
    t_design: float
    codewords: tuple[str, ...]
    t_prime: int
    gram: GramMatrix
    povm: DiscriminationPOVM
    schedule: GroverSchedule
    seed: int | None = None

    @property
    def query_budget(self) -> int:
        return self.t_prime + self.schedule.worst_case_queries

    @classmethod
    def from_codewords(cls, codewords: Sequence, c: float = 1.0,
                       t_design: float | None = None, delta: float = 1 / 3,
                       seed: int | None = None) -> "Scheme1":
        k = len(codewords)
        if k < 2:
            raise ValueError(f"need at least 2 codewords, got {k}")
        words = [qsim.string_to_bits(w) if isinstance(w, str)
                 else np.ascontiguousarray(w, dtype=np.uint8) for w in codewords]
        m = words[0].size
        if any(w.size != m for w in words):
            raise ValueError("codewords must share one length")
        t_design = math.sqrt(m) if t_design is None else t_design
        lo, hi = distance_interval(m, c, t_design)
        for i in range(k):
            for j in range(i + 1, k):
                d = discrimination.hamming_distance(words[i], words[j])
                if not lo <= d <= hi:
                    raise ValueError(
                        f"codewords {i + 1},{j + 1} at distance {d} outside [{lo},{hi}]")
        t_prime = _adaptive_tensor_power(_max_pairwise_overlap(words, m), k)
        gram = discrimination.gram_from_codewords(words, t_prime)
        povm = discrimination.build_povm(gram)
        schedule = GroverSchedule.plan(m, delta=delta)
        return cls(k=k, m=m, c=c, t_design=t_design,
                   codewords=tuple(qsim.bits_to_string(w) for w in words),
                   t_prime=t_prime, gram=gram, povm=povm, schedule=schedule, seed=seed)

    def codeword_bits(self, i: int) -> np.ndarray:
        return qsim.string_to_bits(self.codewords[i - 1])

    def to_descriptor(self) -> dict:
        hex_width = (self.m + 3) // 4
        return {
            "scheme": 1,
            "k": self.k,
            "m": self.m,
            "c": self.c,
            "t_design": self.t_design,
            "t_prime": self.t_prime,
            "delta": self.schedule.delta,
            "seed": self.seed,
            "codewords_hex": [format(int(w, 2), f"0{hex_width}x") for w in self.codewords],
        }

    @classmethod
    def from_descriptor(cls, desc: dict) -> "Scheme1":
        m = desc["m"]
        words = [qsim.int_to_bitstring(int(h, 16), m) for h in desc["codewords_hex"]]
        return cls.from_codewords(words, c=desc["c"], t_design=desc["t_design"],
                                  delta=desc["delta"], seed=desc.get("seed"))


def generate_codewords(k: int, m: int, c: float = 1.0,
                       rng: Union[np.random.Generator, int, None] = None,
                       t_design: float | None = None, delta: float = 1 / 3,
                       max_attempts: int = 2000) -> Scheme1:
    """Rejection-sample k length-m codewords with pairwise distances in the
    admissible interval, then assemble the full scheme (adaptive t',
    discrimination POVM, mismatch-search schedule)."""
    seed = rng if isinstance(rng, int) else None
    gen = np.random.default_rng(rng) if not isinstance(rng, np.random.Generator) else rng
    t_design = math.sqrt(m) if t_design is None else t_design
    lo, hi = distance_interval(m, c, t_design)
    for _ in range(max_attempts):
        words = [gen.integers(0, 2, m, dtype=np.uint8) for _ in range(k)]
        ok = True
        for i in range(k):
            for j in range(i + 1, k):
                d = discrimination.hamming_distance(words[i], words[j])
                if not lo <= d <= hi:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            return Scheme1.from_codewords(words, c=c, t_design=t_design,
                                          delta=delta, seed=seed)
    raise ConstructionError(
        f"no admissible codebook in {max_attempts} attempts for k={k}, m={m}, c={c}; "
        "increase m or c")


def scheme1_address(x, scheme: Scheme1) -> int:
    """Classical reference semantics: the index of the matching codeword,
    or 1 when nothing matches."""
    bits = qsim.bits_to_string(_as_bits(x, scheme.m))
    for i, w in enumerate(scheme.codewords, start=1):
        if bits == w:
            return i
    return 1


def scheme1_overlaps(scheme: Scheme1, x) -> np.ndarray:
    """Inner products of the input's tensor-powered phase state with every
    codeword state: ``((m - 2 d_H)/m) ** t'`` per codeword."""
    bits = _as_bits(x, scheme.m)
    return np.array(
        [discrimination.signed_overlap(bits, scheme.codeword_bits(i)) ** scheme.t_prime
         for i in range(1, scheme.k + 1)])


def scheme1_quantum_eval(oracle: PhaseOracle, scheme: Scheme1,
                         rng: np.random.Generator) -> int:
    """One full run: t' state preparations, the discrimination measurement,
    and (for outcomes >= 2) Grover confirmation.  Returns the output
    address; query count is asserted against the scheme budget."""
    if oracle.m != scheme.m:
        raise ValueError(f"oracle has m={oracle.m}, scheme expects {scheme.m}")
    start = oracle.query_count
    for _ in range(scheme.t_prime):
        qsim.prepare_psi(oracle)
    outcome = discrimination.sample_outcome(
        scheme.povm, scheme1_overlaps(scheme, oracle.bits), rng)
    if outcome in (0, 1):
        result = 1
    else:
        mismatch = qsim.grover_find_mismatch(
            oracle, scheme.codeword_bits(outcome), scheme.schedule, rng)
        result = 1 if mismatch is not None else outcome
    used = oracle.query_count - start
    if used > scheme.query_budget:
        raise AssertionError(f"query budget exceeded: {used} > {scheme.query_budget}")
    return result


def scheme1_output_distribution(scheme: Scheme1, x) -> np.ndarray:
    """Exact output-address distribution (index 0 unused), composing the
    measurement statistics with per-branch mismatch-search success."""
    bits = _as_bits(x, scheme.m)
    povm_probs = discrimination.outcome_distribution_from_overlaps(
        scheme.povm, scheme1_overlaps(scheme, bits))
    out = np.zeros(scheme.k + 1, dtype=np.float64)
    out[1] = povm_probs[0] + povm_probs[1]
    for i in range(2, scheme.k + 1):
        mismatches = discrimination.hamming_distance(bits, scheme.codeword_bits(i))
        found = qsim.grover_success_probability(scheme.m, mismatches, scheme.schedule)
        out[1] += povm_probs[i] * found
        out[i] += povm_probs[i] * (1.0 - found)
    return out


def scheme1_exact_success(scheme: Scheme1, x) -> float:
    """Exact probability that a run outputs the classical address of x."""
    return float(scheme1_output_distribution(scheme, x)[scheme1_address(x, scheme)])


# ---------------------------------------------------------------------------
# Scheme 2: Hadamard blocks decoded by Bernstein-Vazirani


def hadamard_codeword(z: str) -> str:
    """The 2^s-bit string whose position j (as an s-bit index, most
    significant bit first) holds the inner product of z and j mod 2."""
    s = len(z)
    value = int(z, 2) if s else 0
    return "".join(str((value & j).bit_count() & 1) for j in range(1 << s))


@lru_cache(maxsize=None)
def _codeword_table(s: int) -> dict:
    return {hadamard_codeword(qsim.int_to_bitstring(z, s)): qsim.int_to_bitstring(z, s)
            for z in range(1 << s)}


@dataclass(frozen=True)
class Scheme2:
    """Block-Hadamard addressing scheme: t blocks of 2^s bits address
    k = 2^(s*t) targets."""

    s: int
    t: int
    schedule: GroverSchedule

    def __post_init__(self):
        if self.s < 1 or self.t < 1:
            raise ValueError(f"need s >= 1 and t >= 1, got s={self.s}, t={self.t}")

    @classmethod
    def create(cls, s: int, t: int, delta: float = 1 / 3) -> "Scheme2":
        return cls(s=s, t=t, schedule=GroverSchedule.plan(t * (1 << s), delta=delta))

    @property
    def block(self) -> int:
        return 1 << self.s

    @property
    def m(self) -> int:
        return self.t * self.block

    @property
    def address_bits(self) -> int:
        return self.s * self.t

    @property
    def k(self) -> int:
        return 1 << self.address_bits

    @property
    def query_budget(self) -> int:
        return self.t + self.schedule.worst_case_queries

    def to_descriptor(self) -> dict:
        return {"scheme": 2, "s": self.s, "t": self.t, "delta": self.schedule.delta}

    @classmethod
    def from_descriptor(cls, desc: dict) -> "Scheme2":
        return cls.create(desc["s"], desc["t"], delta=desc["delta"])


def scheme2_address(x, scheme: Scheme2) -> str:
    """Classical reference semantics: concatenated block decodings when all
    t blocks are inner-product codewords, else the all-zeros address."""
    bits = qsim.bits_to_string(_as_bits(x, scheme.m))
    table = _codeword_table(scheme.s)
    decoded = []
    for j in range(scheme.t):
        block = bits[j * scheme.block:(j + 1) * scheme.block]
        z = table.get(block)
        if z is None:
            return "0" * scheme.address_bits
        decoded.append(z)
    return "".join(decoded)


def address_to_index(address: str) -> int:
    """Map an address string to an index in [k] (all-zeros maps to 1)."""
    return int(address, 2) + 1


def scheme2_quantum_eval(oracle: PhaseOracle, scheme: Scheme2,
                         rng: np.random.Generator) -> str:
    """One full run: one Bernstein-Vazirani query per block, then one Grover
    confirmation of the assembled guess over all m bits."""
    if oracle.m != scheme.m:
        raise ValueError(f"oracle has m={oracle.m}, scheme expects {scheme.m}")
    start = oracle.query_count
    decoded = []
    for j in range(scheme.t):
        view = oracle.restrict(j * scheme.block, (j + 1) * scheme.block)
        decoded.append(qsim.bernstein_vazirani(view, rng))
    guess = "".join(hadamard_codeword(z) for z in decoded)
    mismatch = qsim.grover_find_mismatch(oracle, guess, scheme.schedule, rng)
    used = oracle.query_count - start
    if used > scheme.query_budget:
        raise AssertionError(f"query budget exceeded: {used} > {scheme.query_budget}")
    return "0" * scheme.address_bits if mismatch is not None else "".join(decoded)


def scheme2_block_distributions(scheme: Scheme2, x) -> list[np.ndarray]:
    """Per-block exact Bernstein-Vazirani outcome distributions."""
    from . import kernels

    bits = _as_bits(x, scheme.m)
    dists = []
    for j in range(scheme.t):
        block = bits[j * scheme.block:(j + 1) * scheme.block]
        signed = (1 - 2 * block.astype(np.int64)).astype(np.float64)
        kernels.fwht_inplace(signed)
        dists.append((signed / scheme.block) ** 2)
    return dists


def scheme2_output_distribution(scheme: Scheme2, x) -> dict[str, float]:
    """Exact output-address distribution by enumerating block-decoding
    combinations and composing with mismatch-search success per branch."""
    bits = _as_bits(x, scheme.m)
    dists = scheme2_block_distributions(scheme, bits)
    supports = [np.flatnonzero(d > 0) for d in dists]
    zero_address = "0" * scheme.address_bits
    out: dict[str, float] = {}
    for combo in product(*supports):
        prob = 1.0
        for j, z in enumerate(combo):
            prob *= float(dists[j][z])
        decoded = [qsim.int_to_bitstring(int(z), scheme.s) for z in combo]
        guess = qsim.string_to_bits("".join(hadamard_codeword(z) for z in decoded))
        mismatches = discrimination.hamming_distance(bits, guess)
        found = qsim.grover_success_probability(scheme.m, mismatches, scheme.schedule)
        address = "".join(decoded)
        if mismatches == 0:
            out[address] = out.get(address, 0.0) + prob
        else:
            out[zero_address] = out.get(zero_address, 0.0) + prob * found
            out[address] = out.get(address, 0.0) + prob * (1.0 - found)
    return out


def scheme2_exact_success(scheme: Scheme2, x) -> float:
    """Exact probability that a run outputs the classical address of x."""
    return scheme2_output_distribution(scheme, x).get(scheme2_address(x, scheme), 0.0)


# ---------------------------------------------------------------------------
# Composition into a total Boolean function on n = k + m bits


@dataclass(frozen=True)
class ComposedFunction:
    """``f(x) = x[address(tail)]``: the tail (last m bits) addresses one of
    the first k bits, whose value is the output."""

    scheme: Union[Scheme1, Scheme2]

    @property
    def k(self) -> int:
        return self.scheme.k

    @property
    def m(self) -> int:
        return self.scheme.m

    @property
    def n(self) -> int:
        return self.scheme.k + self.scheme.m

    @property
    def query_budget(self) -> int:
        return self.scheme.query_budget + 1

    def address_index(self, tail) -> int:
        if isinstance(self.scheme, Scheme1):
            return scheme1_address(tail, self.scheme)
        return address_to_index(scheme2_address(tail, self.scheme))

    def classical_value(self, bits) -> int:
        arr = _as_bits(bits, self.n)
        return int(arr[self.address_index(arr[self.k:]) - 1])

    def truth_table(self) -> TruthTable:
        if self.n > boolfn.MAX_EXHAUSTIVE_N:
            raise boolfn.CapacityError(
                f"composed table needs n={self.n} <= {boolfn.MAX_EXHAUSTIVE_N}")
        values = np.empty(1 << self.n, dtype=np.uint8)
        for r in range(1 << self.n):
            values[r] = self.classical_value(boolfn.row_bits(r, self.n))
        return TruthTable(self.n, values)

    def output_index_distribution(self, tail) -> np.ndarray:
        """Exact distribution of the produced address index (1..k)."""
        if isinstance(self.scheme, Scheme1):
            return scheme1_output_distribution(self.scheme, tail)
        dist = scheme2_output_distribution(self.scheme, tail)
        out = np.zeros(self.k + 1, dtype=np.float64)
        for address, prob in dist.items():
            out[address_to_index(address)] += prob
        return out

    def exact_success(self, bits) -> float:
        """Exact probability a quantum evaluation outputs the classical value."""
        arr = _as_bits(bits, self.n)
        truth = self.classical_value(arr)
        dist = self.output_index_distribution(arr[self.k:])
        return float(sum(prob for idx, prob in enumerate(dist)
                         if idx >= 1 and int(arr[idx - 1]) == truth))


def compose(scheme: Union[Scheme1, Scheme2]) -> ComposedFunction:
    return ComposedFunction(scheme)


def evaluate_composed_quantum(composed: ComposedFunction, oracle: PhaseOracle,
                              rng: np.random.Generator) -> int:
    """Evaluate the composed function: run the scheme on the tail window,
    then spend one more query reading the addressed target bit."""
    if oracle.m != composed.n:
        raise ValueError(f"oracle has m={oracle.m}, composed function expects {composed.n}")
    start = oracle.query_count
    tail_view = oracle.restrict(composed.k, composed.n)
    if isinstance(composed.scheme, Scheme1):
        index = scheme1_quantum_eval(tail_view, composed.scheme, rng)
    else:
        index = address_to_index(scheme2_quantum_eval(tail_view, composed.scheme, rng))
    value = oracle.classical_read(index - 1)
    used = oracle.query_count - start
    if used > composed.query_budget:
        raise AssertionError(f"query budget exceeded: {used} > {composed.query_budget}")
    return value


# ---------------------------------------------------------------------------
# Scheme-level checks


def surjectivity_check(scheme: Union[Scheme1, Scheme2]) -> bool:
    """Every address is reachable: codeword i addresses i (scheme 1);
    concatenated codewords hit every address string (scheme 2)."""
    if isinstance(scheme, Scheme1):
        return all(scheme1_address(scheme.codeword_bits(i), scheme) == i
                   for i in range(1, scheme.k + 1))
    for value in range(scheme.k):
        address = qsim.int_to_bitstring(value, scheme.address_bits)
        blocks = [address[j * scheme.s:(j + 1) * scheme.s] for j in range(scheme.t)]
        x = "".join(hadamard_codeword(z) for z in blocks)
        if scheme2_address(x, scheme) != address:
            return False
    return True


def dependence_check(composed: ComposedFunction) -> bool:
    """All k target variables are influential in the composed truth table;
    for scheme 2 every tail variable must be influential as well."""
    tt = composed.truth_table()
    counts = boolfn.influences(tt)
    targets_ok = all(counts[i] > 0 for i in range(composed.k))
    if isinstance(composed.scheme, Scheme2):
        return targets_ok and all(c > 0 for c in counts)
    return targets_ok
