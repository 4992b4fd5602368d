"""Discrimination of nearly-orthogonal pure states via their Gram matrix.

Given k unit states whose pairwise overlaps are at most 1/k^2 in magnitude,
the POVM with elements ``E_i = (2/3) |phi_i><phi_i|`` and
``E_0 = I - sum_i E_i`` identifies the prepared state with probability
exactly 2/3; outcome 0 is an explicit "inconclusive" symbol.  Everything is
computed in the k-dimensional span of the states from the Gram matrix — the
ambient (possibly tensor-power) space never materializes.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

PSD_TOL = 1e-9
_HERMITIAN_TOL = 1e-12
SUCCESS_PROBABILITY = 2 / 3


@dataclass(frozen=True)
class GramMatrix:
    """k x k matrix of pairwise state inner products, unit diagonal, PSD."""

    k: int
    entries: np.ndarray

    def __post_init__(self):
        g = np.ascontiguousarray(self.entries, dtype=np.complex128)
        if g.shape != (self.k, self.k):
            raise ValueError(f"expected a {self.k}x{self.k} matrix, got {g.shape}")
        if not np.allclose(g, g.conj().T, atol=_HERMITIAN_TOL):
            raise ValueError("Gram matrix must be conjugate-symmetric")
        if not np.allclose(np.diag(g), 1.0, atol=_HERMITIAN_TOL):
            raise ValueError("Gram matrix must have unit diagonal")
        if self.k > 1:
            min_eig = float(np.linalg.eigvalsh(g).min())
            if min_eig < -PSD_TOL:
                raise ValueError(f"Gram matrix not PSD: min eigenvalue {min_eig}")
        g.setflags(write=False)
        object.__setattr__(self, "entries", g)

    def max_offdiagonal(self) -> float:
        if self.k == 1:
            return 0.0
        off = np.abs(self.entries - np.eye(self.k))
        return float(off.max())

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.entries)


def hamming_distance(a, b) -> int:
    a = np.asarray(a, dtype=np.uint8)
    b = np.asarray(b, dtype=np.uint8)
    if a.shape != b.shape:
        raise ValueError("length mismatch")
    return int(np.count_nonzero(a != b))


def signed_overlap(a, b) -> float:
    """Inner product of the signed uniform states of two m-bit strings:
    ``(m - 2*d_H(a, b)) / m``."""
    a = np.asarray(a, dtype=np.uint8)
    m = a.size
    return (m - 2 * hamming_distance(a, b)) / m


def gram_from_codewords(codewords: Sequence, t_prime: int) -> GramMatrix:
    """Gram matrix of the t'-fold tensor powers of codeword phase states.

    ``G_ij = ((m - 2 d_H(w_i, w_j)) / m) ** t_prime`` with exact unit
    diagonal.  Duplicate codewords are rejected (their states coincide).
    """
    if t_prime < 1:
        raise ValueError(f"tensor power must be >= 1, got {t_prime}")
    words = [np.ascontiguousarray(np.frombuffer(w.encode(), dtype=np.uint8) - ord("0"))
             if isinstance(w, str) else np.ascontiguousarray(w, dtype=np.uint8)
             for w in codewords]
    k = len(words)
    if k < 1:
        raise ValueError("need at least one codeword")
    m = words[0].size
    if any(w.size != m for w in words):
        raise ValueError("codewords must have equal length")
    g = np.eye(k, dtype=np.complex128)
    for i in range(k):
        for j in range(i + 1, k):
            d = hamming_distance(words[i], words[j])
            if d == 0:
                raise ValueError(f"duplicate codewords at positions {i + 1} and {j + 1}")
            g[i, j] = g[j, i] = ((m - 2 * d) / m) ** t_prime
    return GramMatrix(k=k, entries=g)


@dataclass(frozen=True)
class DiscriminationPOVM:
    """The scaled-projector measurement, held in span coordinates.

    ``coords`` column i holds the state ``phi_i`` in an orthonormal basis
    of the span, so ``coords.conj().T @ coords`` reproduces the Gram
    matrix; all POVM elements are functions of these columns.
    """

    k: int
    gram: GramMatrix
    coords: np.ndarray

    def element(self, i: int) -> np.ndarray:
        """Matrix of E_i on the span (i in 1..k), or E_0 for i = 0."""
        if i == 0:
            total = np.zeros((self.k, self.k), dtype=np.complex128)
            for j in range(1, self.k + 1):
                total += self.element(j)
            return np.eye(self.k) - total
        col = self.coords[:, i - 1]
        return SUCCESS_PROBABILITY * np.outer(col, col.conj())


class HypothesisError(ValueError):
    """The overlap hypothesis ``|G_ij| <= 1/k^2`` fails for some pair."""


def build_povm(gram: GramMatrix) -> DiscriminationPOVM:
    """Construct and verify the discrimination POVM for a Gram matrix.

    Requires ``|G_ij| <= 1/k^2`` off the diagonal.  Verifies that the Gram
    spectrum stays at most 3/2 (equivalently E_0 is PSD) and that every
    element is PSD; failures of those checks are internal errors because the
    hypothesis implies them.
    """
    k = gram.k
    bound = 1.0 / (k * k)
    if k > 1:
        off = np.abs(gram.entries - np.eye(k))
        worst = np.unravel_index(np.argmax(off), off.shape)
        if off[worst] > bound + 1e-12:
            raise HypothesisError(
                f"|G[{worst[0] + 1},{worst[1] + 1}]| = {off[worst]:.6g} exceeds 1/k^2 = {bound:.6g}")

    eigvals, eigvecs = np.linalg.eigh(gram.entries)
    eigvals = np.clip(eigvals, 0.0, None)
    coords = np.sqrt(eigvals)[:, None] * eigvecs.conj().T

    lam_max = float(eigvals.max())
    if lam_max > 1.5 + PSD_TOL:
        raise RuntimeError(
            f"internal error: Gram spectrum reaches {lam_max} > 3/2 despite the hypothesis")
    povm = DiscriminationPOVM(k=k, gram=gram, coords=coords)
    e0_min = float(np.linalg.eigvalsh(povm.element(0)).min())
    if e0_min < -PSD_TOL:
        raise RuntimeError(f"internal error: E_0 has eigenvalue {e0_min} < 0")
    for i in range(1, k + 1):
        ei_min = float(np.linalg.eigvalsh(povm.element(i)).min())
        if ei_min < -PSD_TOL:
            raise RuntimeError(f"internal error: E_{i} has eigenvalue {ei_min} < 0")
    return povm


def outcome_distribution(povm: DiscriminationPOVM, given: int) -> np.ndarray:
    """Outcome probabilities when state ``given`` (1-based) was prepared.

    Index 0 is the inconclusive outcome; ``probs[given] = 2/3`` exactly.
    """
    if not 1 <= given <= povm.k:
        raise ValueError(f"state index {given} out of range 1..{povm.k}")
    overlaps = povm.gram.entries[:, given - 1]
    return outcome_distribution_from_overlaps(povm, overlaps)


def outcome_distribution_from_overlaps(povm: DiscriminationPOVM,
                                       overlaps: np.ndarray) -> np.ndarray:
    """Outcome probabilities for any unit input state, given its inner
    products ``<phi_i|Phi>``.  Valid also for states outside the span
    (E_0 absorbs the orthogonal component)."""
    overlaps = np.asarray(overlaps, dtype=np.complex128)
    if overlaps.shape != (povm.k,):
        raise ValueError(f"expected {povm.k} overlaps, got {overlaps.shape}")
    probs = np.empty(povm.k + 1, dtype=np.float64)
    probs[1:] = SUCCESS_PROBABILITY * np.abs(overlaps) ** 2
    rest = 1.0 - probs[1:].sum()
    if rest < -PSD_TOL:
        raise ValueError(f"overlaps give total mass {probs[1:].sum()} > 1")
    probs[0] = max(rest, 0.0)
    return probs


def sample_outcome(povm: DiscriminationPOVM, overlaps: np.ndarray,
                   rng: np.random.Generator) -> int:
    """Sample a measurement outcome (0 = inconclusive, else 1..k)."""
    probs = outcome_distribution_from_overlaps(povm, overlaps)
    probs = np.clip(probs, 0.0, None)
    probs /= probs.sum()
    return int(rng.choice(probs.size, p=probs))


@dataclass(frozen=True)
class DeltaReport:
    """Per-state drift of the frame operator from the identity."""

    k: int
    norms: tuple[float, ...]
    bound: float
    norms_ok: bool
    eig_min: float
    eig_max: float
    spectrum_ok: bool


def delta_norm_check(gram: GramMatrix) -> DeltaReport:
    """Check ``||A phi_j - phi_j|| <= (k-1)/k^2`` for every j, and that the
    Gram spectrum stays within [1/2, 3/2] (the operator-level statement that
    A moves no unit vector of the span by more than 1/2)."""
    k = gram.k
    g = gram.entries
    shifted = g - np.eye(k)
    norms = []
    for j in range(k):
        c = shifted[:, j]
        norms.append(float(np.sqrt(max(0.0, (c.conj() @ g @ c).real))))
    bound = (k - 1) / (k * k)
    eigs = gram.eigenvalues()
    eig_min, eig_max = float(eigs.min()), float(eigs.max())
    return DeltaReport(
        k=k,
        norms=tuple(norms),
        bound=bound,
        norms_ok=all(v <= bound + PSD_TOL for v in norms),
        eig_min=eig_min,
        eig_max=eig_max,
        spectrum_ok=(0.5 - PSD_TOL <= eig_min and eig_max <= 1.5 + PSD_TOL),
    )


def random_gram(k: int, rng: np.random.Generator) -> GramMatrix:
    """A random Hermitian unit-diagonal matrix with ``|G_ij| <= 1/k^2``.

    Any such matrix is PSD (its spectrum lies within (k-1)/k^2 < 1 of 1),
    hence a valid Gram matrix of unit states.
    """
    g = np.eye(k, dtype=np.complex128)
    bound = 1.0 / (k * k)
    for i in range(k):
        for j in range(i + 1, k):
            mag = rng.uniform(0.0, bound)
            phase = np.exp(2j * np.pi * rng.uniform())
            g[i, j] = mag * phase
            g[j, i] = np.conj(g[i, j])
    return GramMatrix(k=k, entries=g)
