"""Closed-form equivariant degrees of linear data.

For a self-adjoint isomorphism L = diag(L_0, L_1, ..., L_r) acting block-wise
on a representation R[j_0, 0] + R[j_1, k_1] + ... the gradient degree is a
unit of the tom Dieck ring determined entirely by Morse indices:

    a0  = (-1)^{m(L_0)},    Z_{k_i} coordinate = (-1)^{m(L_0)} * m(L_i)/2.

``deg_id_minus_LA`` specializes this to the loop-space operator Id - L_A of a
nonresonant symmetric matrix A, where the block Morse data collapse to the
eigenvalue counts j_k(A) (eigenvalues above k^2).  ``ind_infinity`` is the
Brouwer index at infinity available in closed form for the built-in
bounded-perturbation class.
"""

import math

from .reps import RepDecomposition
from .spectral import (DEFAULT_TOL, DegenerateSpectrumError, as_symmetric,
                       eigen_sym, morse_index, _j_k_of_spectral,
                       resonant_frequencies)
from .udring import TomDieckElement


class BlockDataError(ValueError):
    """Block Morse data violate the shape forced by the representation."""


class MissingIndexError(ValueError):
    """The index at infinity is needed but neither computable nor supplied."""


class LinearBlockData:
    """Morse indices of the isotypic blocks of a self-adjoint isomorphism.

    rep: RepDecomposition of the ambient space.
    block_morse: tuple aligned with rep.parts, m(L_i) per block.
    Blocks acting on R[j, k] with k >= 1 are complex linear, so their Morse
    index must be even and at most 2j; the k = 0 block is bounded by j.
    """

    __slots__ = ("rep", "block_morse")

    def __init__(self, rep, block_morse):
        if not isinstance(rep, RepDecomposition):
            raise TypeError("rep must be a RepDecomposition")
        morse = tuple(int(m) for m in block_morse)
        if len(morse) != len(rep.parts):
            raise BlockDataError(
                f"expected {len(rep.parts)} Morse indices, got {len(morse)}")
        for (j, k), m in zip(rep.parts, morse):
            dim = j if k == 0 else 2 * j
            if not 0 <= m <= dim:
                raise BlockDataError(
                    f"Morse index {m} outside 0..{dim} for block R[{j},{k}]")
            if k >= 1 and m % 2:
                raise BlockDataError(
                    f"Morse index {m} on block R[{j},{k}] must be even")
        object.__setattr__(self, "rep", rep)
        object.__setattr__(self, "block_morse", morse)

    def __setattr__(self, name, value):
        raise AttributeError("LinearBlockData is immutable")

    def __repr__(self):
        return f"LinearBlockData({self.rep!r}, {self.block_morse!r})"


def minus_id_data(rep):
    """Block data of -Id on a representation: every block is fully negative."""
    morse = tuple(j if k == 0 else 2 * j for j, k in rep.parts)
    return LinearBlockData(rep, morse)


def lin_deg(d):
    """Gradient degree of a block-diagonal self-adjoint isomorphism."""
    m0 = 0
    for (j, k), m in zip(d.rep.parts, d.block_morse):
        if k == 0:
            m0 = m
    a0 = -1 if m0 % 2 else 1
    zk = {}
    for (j, k), m in zip(d.rep.parts, d.block_morse):
        if k >= 1 and m:
            zk[k] = a0 * (m // 2)
    return TomDieckElement(a0, zk)


def deg_id_minus_LA(A, tol=DEFAULT_TOL):
    """Degree of Id - L_A on the loop space for nonresonant symmetric A.

    The per-mode blocks of Id - L_A have Morse index j_k(A) (counted once
    per complex dimension), so the closed form collapses to

        a0 = (-1)^{j_0(A)},    Z_k coordinate = (-1)^{j_0(A)} * j_k(A).

    A matrix with spectrum below every k^2 gives the ring unit.
    """
    s = eigen_sym(A, tol)
    bad = resonant_frequencies(s)
    if bad:
        raise DegenerateSpectrumError(
            f"matrix is resonant: spectrum meets {{k^2}} at k in {sorted(bad)}; "
            "Id - L_A is not an isomorphism")
    j0 = _j_k_of_spectral(s, 0)
    a0 = -1 if j0 % 2 else 1
    top = max((v for v, _ in s.eigenvalues), default=-1.0)
    kmax = math.isqrt(int(max(top, 0.0))) + 1
    zk = {}
    for k in range(1, kmax + 1):
        jk = _j_k_of_spectral(s, k)
        if jk:
            zk[k] = a0 * jk
    return TomDieckElement(a0, zk)


def ind_infinity(A, n=None, builtin_class=True, tol=DEFAULT_TOL):
    """Brouwer index at infinity of -grad V for the built-in potential class.

    For a bounded Kepler-like perturbation of the quadratic form with matrix
    A the index equals (-1)^(n - m(A)) with m the count of strictly negative
    eigenvalues; zero eigenvalues are allowed, the perturbation resolves
    them.  Outside the built-in class there is no formula and the value must
    come from the caller, so builtin_class=False raises.
    """
    A = as_symmetric(A)
    if n is None:
        n = A.n
    elif n != A.n:
        raise ValueError(f"declared dimension {n} does not match matrix size {A.n}")
    if not builtin_class:
        raise MissingIndexError(
            "index at infinity has no closed form outside the built-in "
            "perturbation class; supply the value explicitly")
    m = morse_index(eigen_sym(A, tol))
    return -1 if (n - m) % 2 else 1
