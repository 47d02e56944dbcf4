"""Finite-dimensional SO(2)-representation classes.

A representation class is a direct sum of the planar rotation blocks R[j,k]
(j copies of the plane on which the circle acts by rotation with speed k),
plus a trivial summand R[j,0].  The isotropy subgroup of a nonzero vector is
SO(2) on the trivial summand and the cyclic group Z_g on any vector whose
active frequencies have gcd g, so the achievable isotropy groups of a class
are read off from the gcd-closure of its frequency set.
"""

import math

from .spectral import as_symmetric, eigen_sym

#: Label for the full-group isotropy contributed by a trivial summand.
#: Distinct from every integer label Z_g by construction.
SO2 = "SO(2)"


class RepDecomposition:
    """Sorted list of (multiplicity j, frequency k) pairs with distinct k.

    k = 0 denotes the trivial summand.  The empty decomposition is allowed
    and stands for the zero representation.
    """

    __slots__ = ("parts",)

    def __init__(self, parts=()):
        parts = tuple((int(j), int(k)) for j, k in parts)
        for j, k in parts:
            if j < 1:
                raise ValueError(f"multiplicity must be >= 1, got {j}")
            if k < 0:
                raise ValueError(f"frequency must be >= 0, got {k}")
        freqs = [k for _, k in parts]
        if any(b <= a for a, b in zip(freqs, freqs[1:])):
            raise ValueError(f"frequencies must be strictly increasing, got {freqs}")
        object.__setattr__(self, "parts", parts)

    def __setattr__(self, name, value):
        raise AttributeError("RepDecomposition is immutable")

    @property
    def dimension(self):
        return sum(j if k == 0 else 2 * j for j, k in self.parts)

    @property
    def frequencies(self):
        return frozenset(k for _, k in self.parts)

    @property
    def nonzero_frequencies(self):
        return frozenset(k for _, k in self.parts if k > 0)

    def multiplicity(self, k):
        for j, kk in self.parts:
            if kk == k:
                return j
        return 0

    def __eq__(self, other):
        if not isinstance(other, RepDecomposition):
            return NotImplemented
        return self.parts == other.parts

    def __hash__(self):
        return hash(self.parts)

    def __bool__(self):
        return bool(self.parts)

    def __repr__(self):
        return f"RepDecomposition({list(self.parts)})"

    def to_json(self):
        return [[j, k] for j, k in self.parts]

    @classmethod
    def from_json(cls, obj):
        return cls(tuple((j, k) for j, k in obj))


def gcd_closure(freqs):
    """Closure of a set of positive integers under pairwise gcd.

    Equals {gcd(S) : S a nonempty subset}, without enumerating subsets:
    saturating pairwise gcds reaches the same set because gcd is
    associative and idempotent.
    """
    out = set()
    for f in freqs:
        f = int(f)
        if f < 1:
            raise ValueError(f"gcd closure is over positive integers, got {f}")
        out.add(f)
    while True:
        new = {math.gcd(a, b) for a in out for b in out} | out
        if new == out:
            return frozenset(out)
        out = new


def kernel_rep_at_infinity(A, tol=1e-9):
    """Representation carried by ker(Id - L_A) in the loop space.

    For each k >= 0 with k^2 an eigenvalue of A (within tolerance), the
    kernel contains the mode-k loops in the corresponding eigenspace, one
    R[mu, k] block of multiplicity mu = mu_A(k^2).
    """
    s = eigen_sym(as_symmetric(A), tol)
    top = max((v for v, _ in s.eigenvalues), default=-1.0)
    kmax = 0 if top < 0 else math.isqrt(int(top + s.tol)) + 1
    parts = []
    for k in range(kmax + 1):
        mu = sum(m for v, m in s.eigenvalues if abs(v - k * k) <= s.tol)
        if mu > 0:
            parts.append((mu, k))
    return RepDecomposition(parts)


def isotropy_gcd_set(rep):
    """Achievable isotropy labels: gcd-closure of the nonzero frequencies,
    plus the SO(2) label when a trivial summand is present."""
    labels = set(gcd_closure(rep.nonzero_frequencies))
    if 0 in rep.frequencies:
        labels.add(SO2)
    return frozenset(labels)


def is_consistent(v, w):
    """True iff some nonzero vectors of v and w share an isotropy group."""
    return bool(isotropy_gcd_set(v) & isotropy_gcd_set(w))
