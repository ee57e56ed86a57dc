"""The Weil representation of SL_2(F_p) on C^p, as explicit unitaries.

Three building blocks generate everything:

* ``S_a`` — signed scaling, (S_a f)(t) = sigma(a) f(t / a) with sigma the
  Legendre character;
* ``M_u`` — chirp, multiplication by psi(-(u/2) t^2);
* ``F``   — the unitary DFT with kernel psi(w t) / sqrt(p).

An arbitrary g is synthesized through its Bruhat factorization,
rho(g) = M_{u2} S_a (small cell) or M_{u2} S_a F M_{u1} (big cell).
Each block conjugates the Heisenberg operators pi(h) exactly to
pi(g.h), so the composite does too; rho is multiplicative only up to a
unimodular scalar, and everything downstream is phase-invariant, so no
scalar correction is attempted.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import FpElement, FpField
from .heisenberg import HeisenbergElement, pi
from .linalg import phase_table
from .sl2 import BruhatFactorization, SL2Element, bruhat, sp_action


def _chirp_phases(field: FpField, u: int) -> np.ndarray:
    """Diagonal of M_u: psi(-(u/2) t^2) for t = 0..p-1."""
    p = field.p
    t = np.arange(p)
    coeff = (-(u % p) * field.half()) % p
    return phase_table(p)[(coeff * ((t * t) % p)) % p]


def scaling_op(a: FpElement) -> np.ndarray:
    """S_a: the permutation t -> a*t scaled by the sign sigma(a).

    S_a delta_b = sigma(a) delta_{ab}; S_1 is the identity.
    """
    field = a.field
    p = field.p
    a_val = int(a) % p
    if a_val == 0:
        raise ValueError("scaling by zero")
    m = np.zeros((p, p), dtype=np.complex128)
    cols = np.arange(p)
    m[(a_val * cols) % p, cols] = field.legendre(a_val)
    return m


def chirp_op(u: FpElement) -> np.ndarray:
    """M_u = diag(psi(-(u/2) t^2)); M_0 is the identity and M_u M_v = M_{u+v}."""
    return np.diag(_chirp_phases(u.field, int(u)))


def fourier_op(field: FpField) -> np.ndarray:
    """F[w, t] = psi(w t) / sqrt(p), the unitary finite Fourier transform."""
    p = field.p
    grid = np.outer(np.arange(p), np.arange(p)) % p
    return phase_table(p)[grid] / np.sqrt(p)


@dataclass(frozen=True)
class WeilOperator:
    """rho(g) together with how it was synthesized."""

    matrix: np.ndarray
    source: SL2Element
    factorization: BruhatFactorization


def rho(g: SL2Element) -> WeilOperator:
    """The Weil operator of g, composed through its Bruhat cell.

    Assembled in O(p^2): the chirps are diagonal scalings and S_a is a
    signed row permutation, so only F ever contributes a dense block.
    """
    field = g.field
    p = field.p
    fac = bruhat(g)
    sign = field.legendre(fac.a)
    rows = (fac.a * np.arange(p)) % p
    if fac.cell == "small":
        m = np.zeros((p, p), dtype=np.complex128)
        m[rows, np.arange(p)] = sign
    else:
        m = np.empty((p, p), dtype=np.complex128)
        m[rows] = sign * (fourier_op(field) * _chirp_phases(field, fac.u1)[None, :])
    m *= _chirp_phases(field, fac.u2)[:, None]
    return WeilOperator(m, g, fac)


def scalar_defect(left: np.ndarray, right: np.ndarray) -> float:
    """min over unimodular lambda of ||left - lambda*right||_max, with
    lambda read off at right's largest-magnitude entry."""
    idx = np.unravel_index(np.argmax(np.abs(right)), right.shape)
    lam = left[idx] / right[idx]
    mag = abs(lam)
    lam = lam / mag if mag > 1e-12 else 1.0
    return float(np.max(np.abs(left - lam * right)))


def egorov_defect(g: SL2Element, h: HeisenbergElement) -> float:
    """How far rho(g) pi(h) rho(g)^-1 is from pi(g.h), modulo a phase.

    Zero (to rounding) for every g and h: the generator-level exchange
    identities are exact, so conjugation transports pi along the plane
    action of g with scalar 1.
    """
    r = rho(g).matrix
    left = r @ pi(h) @ r.conj().T
    right = pi(sp_action(g, h))
    return scalar_defect(left, right)
