"""Builders for the four low-coherence dictionaries in C^p.

* ``heisenberg_dictionary`` — p+1 orthonormal bases, one per line through
  the origin of the time-frequency plane, each the eigenbasis of a
  Heisenberg operator pi(l0); cross-line coherence is exactly 1/sqrt(p).
* ``split_oscillator`` — one orthonormal system per split torus of
  SL_2(F_p): the Weil translates rho(g) phi_chi of explicit character
  vectors, g running over the representative set R.
* ``nonsplit_oscillator`` — one orthonormal basis per non-split torus,
  obtained by eigendecomposing rho(generator); the spectrum must be
  simple (p one-dimensional eigenspaces) or the build refuses.
* ``extended_dictionary`` — all Heisenberg translates pi(tau, w, 0) of an
  oscillator dictionary, p^2 copies grouped so each translated system
  stays orthonormal.

Atoms are stored atom-major in one contiguous complex array; every atom
is unit norm and phase-normalized, and all orderings (groups, members,
shifts) are fixed, so builds are bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .field import FpField
from .heisenberg import HeisenbergElement, pi
from .linalg import UNIT_NORM_TOL, eig_unitary, phase_normalize_rows, phase_table
from .sl2 import nonsplit_tori, split_representatives
from .weil import rho

KINDS = ("heisenberg", "oscillator_split", "oscillator_nonsplit",
         "oscillator", "extended")

OSCILLATOR_KINDS = ("oscillator_split", "oscillator_nonsplit", "oscillator")


@dataclass(frozen=True)
class Atom:
    """One dictionary element with its provenance.

    group is the line/torus index (for extended atoms, the translated
    group index), member the position within the group (eigenvalue-angle
    rank or character index), shift the Heisenberg translation (tau, w).
    """

    vector: np.ndarray
    group: int
    member: int
    shift: tuple = (0, 0)


class Dictionary:
    """An ordered atom collection partitioned into orthonormal groups.

    vectors is (n_atoms, p) atom-major; group_ids must be nondecreasing
    (builders emit group-major blocks), so a group is a contiguous slice.
    """

    def __init__(self, kind, prime, vectors, group_ids, member_ids,
                 shifts=None):
        if kind not in KINDS:
            raise ValueError(f"unknown dictionary kind {kind!r}")
        self.kind = kind
        self.prime = int(prime)
        self.vectors = np.ascontiguousarray(vectors, dtype=np.complex128)
        self.group_ids = np.asarray(group_ids, dtype=np.int64)
        self.member_ids = np.asarray(member_ids, dtype=np.int64)
        if shifts is None:
            shifts = np.zeros((len(self.vectors), 2), dtype=np.int64)
        self.shifts = np.asarray(shifts, dtype=np.int64)
        n = len(self.vectors)
        if not (len(self.group_ids) == len(self.member_ids)
                == len(self.shifts) == n):
            raise ValueError("provenance arrays out of step with atoms")
        if n and np.any(np.diff(self.group_ids) < 0):
            raise ValueError("group ids must be nondecreasing")
        self.n_groups = int(self.group_ids[-1]) + 1 if n else 0
        # start offset of each group (groups are contiguous, may be empty)
        self._starts = np.searchsorted(self.group_ids,
                                       np.arange(self.n_groups + 1))

    def __len__(self):
        return len(self.vectors)

    def atom(self, i: int) -> Atom:
        return Atom(self.vectors[i], int(self.group_ids[i]),
                    int(self.member_ids[i]), tuple(self.shifts[i]))

    def group_slice(self, g: int) -> slice:
        return slice(int(self._starts[g]), int(self._starts[g + 1]))

    def group_matrix(self, g: int) -> np.ndarray:
        return self.vectors[self.group_slice(g)]

    def __repr__(self):
        return (f"Dictionary(kind={self.kind!r}, p={self.prime}, "
                f"atoms={len(self)}, groups={self.n_groups})")


def expected_size(kind: str, p: int) -> int:
    """Atom count each builder produces at a given prime."""
    n_split = p * (p + 1) // 2 * (p - 2)
    n_nonsplit = p * (p - 1) // 2 * p
    return {
        "heisenberg": p * (p + 1),
        "oscillator_split": n_split,
        "oscillator_nonsplit": n_nonsplit,
        "oscillator": n_split + n_nonsplit,
        "extended": p * p * (n_split + n_nonsplit),
    }[kind]


def line_directions(field: FpField) -> list:
    """The p+1 lines through the origin: (1,0) first, then (s,1)."""
    return [(1, 0)] + [(s, 1) for s in range(field.p)]


def heisenberg_dictionary(field: FpField) -> Dictionary:
    """Eigenbases of pi(l0), one per line: p(p+1) atoms.

    pi(l0) has order p and zero trace, so its spectrum is all p-th roots
    of unity, each simple; atoms within a line are ordered by eigenvalue
    angle.  The (0,1) line gives delta functions, the (1,0) line gives
    normalized characters.
    """
    p = field.p
    blocks, gids, mids = [], [], []
    for g, (tau, w) in enumerate(line_directions(field)):
        dec = eig_unitary(pi(HeisenbergElement(tau, w, 0, field)))
        if dec.multiplicities != [1] * p:
            raise ValueError("unexpected degenerate spectrum for line "
                             f"({tau},{w}) at p={p}")
        blocks.append(dec.vectors().T)
        gids += [g] * p
        mids += list(range(p))
    return Dictionary("heisenberg", p, np.vstack(blocks), gids, mids)


def _standard_basis_matrix(field: FpField) -> np.ndarray:
    """Rows are the character vectors phi_chi of the diagonal torus.

    Row m (m = 0..p-3) is the character with exponent j = m+1:
    phi(t) = zeta^(j * dlog t) / sqrt(p-1) for t != 0 and phi(0) = 0,
    where zeta = exp(2 pi i / (p-1)) and dlog is taken to the smallest
    generator.  Entry t=1 is real positive, so rows are already in the
    canonical phase.
    """
    p = field.p
    dlog = np.array(field.dlog_table())
    zeta = np.exp(2j * np.pi * np.arange(p - 1) / (p - 1))
    B = np.zeros((p - 2, p), dtype=np.complex128)
    for j in range(1, p - 1):
        B[j - 1, 1:] = zeta[(j * dlog[1:]) % (p - 1)] / np.sqrt(p - 1)
    return B


def standard_torus_basis(field: FpField) -> list:
    """The p-2 explicit atoms phi_chi for the diagonal torus."""
    B = _standard_basis_matrix(field)
    return [Atom(B[m], 0, m) for m in range(B.shape[0])]


def iter_split_groups(field: FpField):
    """Yield (group_index, representative, block) for every split torus.

    block rows are the phase-normalized atoms rho(g) phi_chi in character
    order; the identity representative reproduces the standard basis
    exactly.  Streaming keeps peak memory at one group for large p.
    """
    B = _standard_basis_matrix(field)
    for i, g in enumerate(split_representatives(field)):
        block = B @ rho(g).matrix.T
        yield i, g, phase_normalize_rows(block)


def split_oscillator(field: FpField) -> Dictionary:
    """D_O^s: p(p+1)/2 split tori, p-2 atoms each."""
    p = field.p
    blocks, gids, mids = [], [], []
    for i, _, block in iter_split_groups(field):
        blocks.append(block)
        gids += [i] * (p - 2)
        mids += list(range(p - 2))
    return Dictionary("oscillator_split", p, np.vstack(blocks), gids, mids)


def nonsplit_oscillator(field: FpField) -> Dictionary:
    """D_O^ns: one orthonormal eigenbasis of rho(generator) per non-split
    torus; every eigenspace must be one-dimensional."""
    p = field.p
    blocks, gids, mids = [], [], []
    for i, torus in enumerate(nonsplit_tori(field)):
        dec = eig_unitary(rho(torus.generator).matrix)
        if dec.multiplicities != [1] * p:
            raise ValueError("unexpected degenerate spectrum: non-split "
                             f"torus {i} at p={p} has multiplicities "
                             f"{dec.multiplicities}")
        blocks.append(dec.vectors().T)
        gids += [i] * p
        mids += list(range(p))
    return Dictionary("oscillator_nonsplit", p, np.vstack(blocks), gids, mids)


def oscillator_dictionary(field: FpField) -> Dictionary:
    """D_O = D_O^s union D_O^ns, split groups first."""
    ds = split_oscillator(field)
    dn = nonsplit_oscillator(field)
    return Dictionary(
        "oscillator", field.p,
        np.vstack([ds.vectors, dn.vectors]),
        np.concatenate([ds.group_ids, dn.group_ids + ds.n_groups]),
        np.concatenate([ds.member_ids, dn.member_ids]),
    )


def extended_dictionary(base: Dictionary) -> Dictionary:
    """All plane translates pi(tau, w, 0) of an oscillator dictionary.

    Shifts are enumerated (0,0), (0,1), ..., (p-1,p-1), so the first
    slice is the base dictionary itself; group ids refine to (shift,
    base group) pairs, preserving orthonormality within groups.
    """
    if base.kind not in OSCILLATOR_KINDS:
        raise ValueError(f"cannot extend a {base.kind!r} dictionary")
    field = FpField(base.prime)
    p = field.p
    psi = phase_table(p)
    half = field.half()
    t = np.arange(p)
    blocks, gids, mids, shifts = [], [], [], []
    for tau in range(p):
        cols = (t + tau) % p
        shifted = base.vectors[:, cols]
        for w in range(p):
            if tau == 0 and w == 0:
                # pi(0,0,0) is the identity: copy the base bit-exactly
                blocks.append(base.vectors)
                gids.append(base.group_ids)
                mids.append(base.member_ids)
                shifts.append(np.broadcast_to((0, 0), (len(base), 2)))
                continue
            phases = psi[(-half * tau * w + w * cols) % p]
            blocks.append(phase_normalize_rows(shifted * phases[None, :]))
            gids.append(base.group_ids + (tau * p + w) * base.n_groups)
            mids.append(base.member_ids)
            shifts.append(np.broadcast_to((tau, w), (len(base), 2)))
    return Dictionary("extended", p, np.vstack(blocks),
                      np.concatenate(gids), np.concatenate(mids),
                      np.vstack(shifts))


def unit_norm_defect(d: Dictionary) -> float:
    """max |  ||atom|| - 1 | over the dictionary."""
    return float(np.max(np.abs(np.linalg.norm(d.vectors, axis=1) - 1.0)))


def assert_unit_norms(d: Dictionary, tol: float = UNIT_NORM_TOL) -> None:
    defect = unit_norm_defect(d)
    if defect > tol:
        raise ValueError(f"atom norms off unit by {defect:.2e}")
