"""Sparse synthesis and recovery over a dictionary.

Orthogonal matching pursuit is the workhorse: greedily pick the atom
most correlated with the residual, re-fit all picked coefficients by
least squares, repeat.  For a dictionary with coherence mu this recovers
any support of size k < (1 + 1/mu)/2 exactly, which is the regime the
experiment harness operates in.  A one-pass thresholding variant is
included as a cheap baseline.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class RecoveryError(Exception):
    """Raised when the selected atoms cannot support a stable fit."""


@dataclass
class SparseRepresentation:
    """A signal written as sum of coefficients[k] * atom(support[k])."""

    support: list
    coefficients: np.ndarray
    residual_norm: float


def synthesize(dictionary, support, coefficients) -> np.ndarray:
    """Linear combination of the chosen atoms."""
    support = list(support)
    coefficients = np.asarray(coefficients, dtype=np.complex128)
    if len(support) != len(coefficients):
        raise ValueError("support and coefficients differ in length")
    n = len(dictionary)
    if any(not 0 <= i < n for i in support):
        raise IndexError("atom index out of range")
    f = np.zeros(dictionary.vectors.shape[1], dtype=np.complex128)
    for i, a in zip(support, coefficients):
        f += a * dictionary.vectors[i]
    return f


def _least_squares(atoms: np.ndarray, f: np.ndarray) -> np.ndarray:
    """Solve min ||A x - f|| for the selected atom rows; refuse
    near-dependent selections."""
    A = atoms.T
    sol, _, rank, sv = np.linalg.lstsq(A, f, rcond=None)
    if rank < A.shape[1] or sv[-1] < 1e-12 * sv[0]:
        raise RecoveryError("ill-conditioned support")
    return sol


def omp(dictionary, f: np.ndarray, max_support: int,
        residual_tol: float = None) -> SparseRepresentation:
    """Orthogonal matching pursuit.

    Stops when the residual norm drops to residual_tol (default
    1e-9 * ||f||) or the support reaches max_support.  Greedy ties break
    toward the lowest atom index.
    """
    if max_support < 1:
        raise ValueError("max_support must be at least 1")
    if len(dictionary) == 0:
        raise ValueError("empty dictionary")
    f = np.asarray(f, dtype=np.complex128)
    V = dictionary.vectors
    norm_f = float(np.linalg.norm(f))
    tol = 1e-9 * norm_f if residual_tol is None else residual_tol
    support = []
    coeffs = np.zeros(0, dtype=np.complex128)
    residual = f.copy()
    while len(support) < max_support and np.linalg.norm(residual) > tol:
        corr = np.abs(V.conj() @ residual)
        corr[support] = 0.0
        best = int(np.argmax(corr))
        if corr[best] <= 1e-14 * max(norm_f, 1.0):
            break
        support.append(best)
        coeffs = _least_squares(V[support], f)
        residual = f - coeffs @ V[support]
    return SparseRepresentation(support, coeffs,
                                float(np.linalg.norm(residual)))


def thresholding(dictionary, f: np.ndarray, max_support: int
                 ) -> SparseRepresentation:
    """One-pass baseline: keep the max_support atoms most correlated
    with f itself, then least-squares fit once."""
    if max_support < 1:
        raise ValueError("max_support must be at least 1")
    f = np.asarray(f, dtype=np.complex128)
    V = dictionary.vectors
    corr = np.abs(V.conj() @ f)
    support = sorted(np.argsort(-corr, kind="stable")[:max_support].tolist())
    coeffs = _least_squares(V[support], f)
    residual = f - coeffs @ V[support]
    return SparseRepresentation(support, coeffs,
                                float(np.linalg.norm(residual)))


@dataclass
class RecoveryReport:
    """Aggregate outcome of repeated synthesize-then-recover trials."""

    prime: int
    kind: str
    sparsity: int
    trials: int
    seed: int
    successes: int
    coef_max_error: float
    coef_median_error: float
    failed_trials: list

    @property
    def success_rate(self) -> float:
        return self.successes / self.trials

    def to_dict(self) -> dict:
        return {
            "prime": self.prime,
            "kind": self.kind,
            "sparsity": self.sparsity,
            "trials": self.trials,
            "seed": self.seed,
            "successes": self.successes,
            "success_rate": self.success_rate,
            "coef_max_error": self.coef_max_error,
            "coef_median_error": self.coef_median_error,
            "failed_trials": self.failed_trials,
        }


def recovery_experiment(dictionary, sparsity: int, trials: int,
                        seed: int = 0, algorithm=omp) -> RecoveryReport:
    """Monte-Carlo exact-recovery harness.

    Each trial draws a uniform support of the requested size and
    unit-magnitude random-phase coefficients (per-trial generator seeded
    by (seed, trial) so trials are independently reproducible), then
    checks the recovered support and coefficients.
    """
    if sparsity < 1:
        raise ValueError("sparsity must be at least 1")
    n = len(dictionary)
    successes = 0
    failed = []
    errors = []
    for t in range(trials):
        rng = np.random.default_rng([seed, t])
        support = rng.choice(n, size=sparsity, replace=False)
        coeffs = np.exp(2j * np.pi * rng.random(sparsity))
        f = synthesize(dictionary, support, coeffs)
        try:
            rep = algorithm(dictionary, f, max_support=sparsity)
        except RecoveryError:
            failed.append(t)
            continue
        if set(rep.support) != set(support.tolist()):
            failed.append(t)
            continue
        recovered = dict(zip(rep.support, rep.coefficients))
        err = max(abs(recovered[i] - c)
                  for i, c in zip(support.tolist(), coeffs))
        errors.append(err)
        successes += 1
    return RecoveryReport(
        prime=dictionary.prime, kind=dictionary.kind, sparsity=sparsity,
        trials=trials, seed=seed, successes=successes,
        coef_max_error=float(max(errors)) if errors else float("nan"),
        coef_median_error=float(np.median(errors)) if errors
        else float("nan"),
        failed_trials=failed,
    )
