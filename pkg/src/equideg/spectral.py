"""Symmetric eigenanalysis and resonance detection along a parameter interval.

Everything downstream consumes integer spectral invariants of a symmetric
matrix A with respect to the squares {k^2 : k = 0, 1, 2, ...}:

* ``j_k(A)``      -- eigenvalue count strictly above k^2,
* ``morse_index`` -- eigenvalue count strictly below 0,
* resonances      -- parameter values where some eigenvalue hits some k^2.

Tolerances are relative on input (default 1e-9) and converted once into an
absolute tolerance ``tol * (1 + max|eigenvalue|)`` that is carried inside
``SpectralData``; all sign decisions are made against that absolute value
and degenerate cases raise instead of guessing.
"""

import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

DEFAULT_TOL = 1e-9
DEFAULT_GRID = 512


class EigenConvergenceError(RuntimeError):
    """Eigen decomposition failed or did not meet its residual bound."""


class DegenerateSpectrumError(ValueError):
    """An eigenvalue sits within tolerance of a threshold that a caller
    required to be crossed strictly."""


class NonIsolatedResonanceError(RuntimeError):
    """det(A(lambda) - k^2 Id) vanishes on a whole subinterval."""


class TangencyWarning(UserWarning):
    """Determinant touches zero without changing sign between grid nodes."""


class ResolutionWarning(UserWarning):
    """Two resonances of the same frequency fall within one grid cell."""


class SymmetricMatrix:
    """Square real matrix, symmetrized exactly at construction."""

    __slots__ = ("entries",)

    def __init__(self, entries):
        arr = np.array(entries, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("matrix entries must be finite")
        arr = (arr + arr.T) / 2.0
        arr.flags.writeable = False
        object.__setattr__(self, "entries", arr)

    def __setattr__(self, name, value):
        raise AttributeError("SymmetricMatrix is immutable")

    @property
    def n(self):
        return self.entries.shape[0]

    def __repr__(self):
        return f"SymmetricMatrix({self.entries.tolist()})"


def as_symmetric(A):
    return A if isinstance(A, SymmetricMatrix) else SymmetricMatrix(A)


@dataclass(frozen=True)
class SpectralData:
    """Clustered eigenvalues of a symmetric matrix.

    eigenvalues: tuple of (value, multiplicity), values strictly increasing
    with gaps larger than ``tol``.
    tol: the absolute clustering tolerance that was applied.
    """

    eigenvalues: tuple
    tol: float

    @property
    def n(self):
        return sum(m for _, m in self.eigenvalues)

    def values(self):
        return [v for v, _ in self.eigenvalues]

    def multiplicity(self, x):
        """Total multiplicity of eigenvalues within tol of x."""
        return sum(m for v, m in self.eigenvalues if abs(v - x) <= self.tol)

    def positive_spectrum(self):
        """Clusters strictly above the tolerance band around zero."""
        return [(v, m) for v, m in self.eigenvalues if v > self.tol]

    def to_json(self):
        return {"eigenvalues": [[v, m] for v, m in self.eigenvalues], "tol": self.tol}

    @classmethod
    def from_json(cls, obj):
        return cls(tuple((float(v), int(m)) for v, m in obj["eigenvalues"]), float(obj["tol"]))


def eigen_sym(A, tol=DEFAULT_TOL):
    """Eigenvalues of a symmetric matrix, clustered at tol relative.

    The residual ||A v - a v|| of every eigenpair is checked against
    tol_abs = tol * (1 + |A|); failure raises EigenConvergenceError rather
    than returning silently degraded data.
    """
    A = as_symmetric(A)
    if tol <= 0:
        raise ValueError("tol must be positive")
    try:
        vals, vecs = np.linalg.eigh(A.entries)
    except np.linalg.LinAlgError as exc:
        raise EigenConvergenceError(f"eigen decomposition failed: {exc}") from exc
    scale = 1.0 + (abs(vals).max() if len(vals) else 0.0)
    abs_tol = tol * scale
    resid = np.abs(A.entries @ vecs - vecs * vals).max() if len(vals) else 0.0
    if resid > abs_tol:
        raise EigenConvergenceError(
            f"eigenpair residual {resid:.3e} exceeds tolerance {abs_tol:.3e}")
    clusters = []
    for v in vals:
        if clusters and v - clusters[-1][-1] <= abs_tol:
            clusters[-1].append(v)
        else:
            clusters.append([v])
    eigenvalues = tuple((float(np.mean(c)), len(c)) for c in clusters)
    return SpectralData(eigenvalues, float(abs_tol))


def morse_index(s, strict=False):
    """Total multiplicity of eigenvalues below -tol.

    With strict=True an eigenvalue inside the tolerance band around zero is
    an error: the caller needs a definite sign for every eigenvalue.
    """
    if strict:
        for v, _ in s.eigenvalues:
            if abs(v) <= s.tol:
                raise DegenerateSpectrumError(
                    f"eigenvalue {v!r} lies within tolerance {s.tol:.3e} of 0")
    return sum(m for v, m in s.eigenvalues if v < -s.tol)


def resonant_frequencies(s, include_zero=True):
    """Frequencies k with k^2 an eigenvalue within tolerance."""
    out = set()
    top = max((v for v, _ in s.eigenvalues), default=-1.0)
    if top < -s.tol:
        return frozenset()
    kmax = math.isqrt(int(max(top + s.tol, 0.0))) + 1
    for k in range(0 if include_zero else 1, kmax + 1):
        if s.multiplicity(k * k) > 0:
            out.add(k)
    return frozenset(out)


def _j_k_of_spectral(s, k):
    target = float(k * k)
    for v, _ in s.eigenvalues:
        if abs(v - target) <= s.tol:
            raise DegenerateSpectrumError(
                f"eigenvalue {v!r} lies within tolerance {s.tol:.3e} of {k}^2 = {target}")
    return sum(m for v, m in s.eigenvalues if v > target)


def j_k(A, k, tol=DEFAULT_TOL):
    """Count of eigenvalues of A strictly greater than k^2 (with multiplicity).

    Raises DegenerateSpectrumError when some eigenvalue is within tolerance
    of k^2, naming the offending eigenvalue.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    return _j_k_of_spectral(eigen_sym(A, tol), int(k))


def k_set(s_minus, s_plus):
    """Union of the per-endpoint gcd-closures of resonant frequencies k >= 1.

    Empty when neither endpoint spectrum meets a positive square.
    """
    from .reps import gcd_closure

    out = set()
    for s in (s_minus, s_plus):
        freqs = resonant_frequencies(s, include_zero=False)
        if freqs:
            out |= gcd_closure(freqs)
    return frozenset(out)


class MatrixFamily:
    """Symmetric-matrix family A(lambda) with polynomial entries.

    Stored as a coefficient stack C[p] with A(lambda) = sum_p lambda^p C[p];
    each coefficient matrix is symmetrized at construction.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        arr = np.array(coeffs, dtype=float)
        if arr.ndim != 3 or arr.shape[1] != arr.shape[2]:
            raise ValueError(f"expected coefficient stack (degree+1, n, n), got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("family coefficients must be finite")
        arr = (arr + arr.transpose(0, 2, 1)) / 2.0
        arr.flags.writeable = False
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("MatrixFamily is immutable")

    @classmethod
    def constant(cls, A):
        return cls(np.asarray(as_symmetric(A).entries)[None, :, :])

    @classmethod
    def from_entry_polynomials(cls, n, entries):
        """Build from {(i, j): {power: coefficient}} with 1-based indices.

        Missing entries are zero; symmetry of the result comes from the
        constructor, so the caller is responsible for mirroring checks.
        """
        degree = max((p for terms in entries.values() for p in terms), default=0)
        stack = np.zeros((degree + 1, n, n))
        for (i, j), terms in entries.items():
            if not (1 <= i <= n and 1 <= j <= n):
                raise ValueError(f"entry index ({i},{j}) outside 1..{n}")
            for p, c in terms.items():
                if p < 0:
                    raise ValueError(f"negative power {p} in entry ({i},{j})")
                stack[p, i - 1, j - 1] += c
                if i != j:
                    stack[p, j - 1, i - 1] += c
        return cls(stack)

    @classmethod
    def scaled_quadratic(cls, A):
        """The family lambda^2 * A (linearization of a scaled potential)."""
        A = as_symmetric(A).entries
        stack = np.zeros((3,) + A.shape)
        stack[2] = A
        return cls(stack)

    @property
    def n(self):
        return self.coeffs.shape[1]

    @property
    def degree(self):
        return self.coeffs.shape[0] - 1

    def eval(self, lam):
        return SymmetricMatrix(self.eval_array(lam))

    def eval_array(self, lam):
        powers = np.power(float(lam), np.arange(self.coeffs.shape[0]))
        return np.tensordot(powers, self.coeffs, axes=1)

    def eval_many(self, lams):
        lams = np.asarray(lams, dtype=float)
        powers = lams[:, None] ** np.arange(self.coeffs.shape[0])[None, :]
        return np.tensordot(powers, self.coeffs, axes=([1], [0]))


@dataclass(frozen=True)
class ResonancePoint:
    """A parameter value where sigma(A(lambda)) meets {k^2}.

    frequencies: all k >= 0 with k^2 in the spectrum at lambda0.
    kernel_rep: the representation sum of R[mu_A(k^2), k] over frequencies.
    det_nonzero: whether det A(lambda0) is nonzero at tolerance.
    """

    lambda0: float
    frequencies: frozenset
    kernel_rep: object
    det_nonzero: bool

    def __post_init__(self):
        if not self.frequencies:
            raise ValueError("a resonance point must carry at least one frequency")

    def to_json(self):
        return {
            "lambda0": self.lambda0,
            "frequencies": sorted(self.frequencies),
            "kernel_rep": self.kernel_rep.to_json(),
            "det_nonzero": self.det_nonzero,
        }

    @classmethod
    def from_json(cls, obj):
        from .reps import RepDecomposition

        return cls(
            float(obj["lambda0"]),
            frozenset(int(k) for k in obj["frequencies"]),
            RepDecomposition.from_json(obj["kernel_rep"]),
            bool(obj["det_nonzero"]),
        )


def _thread_budget():
    raw = os.environ.get("EQUIDEG_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _scan_one_frequency(family, nodes, k, tol):
    """Roots of det(A(lambda) - k^2 Id) on the node grid for one k.

    Returns (roots, warn_messages).  Node-exact zeros are accepted when
    |det| < tol * scale with scale the largest |det| seen on the grid;
    other zeros must flip the sign of det and are refined by bisection.
    """
    k2 = float(k * k)
    mats = family.eval_many(nodes)
    mats = mats - k2 * np.eye(family.n)[None, :, :]
    dets = np.linalg.det(mats)
    scale = max(float(np.abs(dets).max()), 1e-300)
    thresh = tol * scale
    tiny = np.abs(dets) <= thresh

    run = 0
    for flag in tiny:
        run = run + 1 if flag else 0
        if run >= 3:
            raise NonIsolatedResonanceError(
                f"det(A(lambda) - {k}^2 Id) vanishes on a subinterval of the grid; "
                "resonances are not isolated at this tolerance")

    def det_at(lam):
        m = family.eval_array(lam) - k2 * np.eye(family.n)
        return float(np.linalg.det(m))

    roots = [float(nodes[i]) for i in np.flatnonzero(tiny)]
    warn = []
    for i in range(len(nodes) - 1):
        if tiny[i] or tiny[i + 1]:
            continue
        a, b = float(nodes[i]), float(nodes[i + 1])
        fa, fb = dets[i], dets[i + 1]
        if fa * fb < 0.0:
            while b - a > tol:
                mid = 0.5 * (a + b)
                fm = det_at(mid)
                if fm == 0.0:
                    a = b = mid
                    break
                if fa * fm < 0.0:
                    b, fb = mid, fm
                else:
                    a, fa = mid, fm
            roots.append(0.5 * (a + b))

    # tangential touch: same-sign local minimum of |det| dipping well below
    # the grid scale without an accepted root nearby
    absd = np.abs(dets)
    touch_thresh = math.sqrt(tol) * scale
    cell = float(nodes[1] - nodes[0]) if len(nodes) > 1 else 0.0
    for i in range(1, len(nodes) - 1):
        if tiny[i - 1] or tiny[i] or tiny[i + 1]:
            continue
        if absd[i] < touch_thresh and absd[i] <= absd[i - 1] and absd[i] <= absd[i + 1] \
                and dets[i - 1] * dets[i + 1] > 0.0:
            lam = float(nodes[i])
            if not any(abs(lam - r) <= 2.0 * cell for r in roots):
                warn.append((TangencyWarning,
                             f"det(A(lambda) - {k}^2 Id) touches zero near lambda={lam:.6g} "
                             "without a sign change; tangential resonance not reported as a point"))

    roots = sorted(roots)
    merged = []
    for r in roots:
        if merged and r - merged[-1] <= max(tol, 1e-15):
            continue
        merged.append(r)
    if cell > 0.0:
        for a, b in zip(merged, merged[1:]):
            if b - a < cell:
                warn.append((ResolutionWarning,
                             f"two resonances of frequency {k} fall within one grid cell "
                             f"near lambda={a:.6g}; increase the grid to separate them"))
    return merged, warn


def scan_resonances(family, lo, hi, grid=DEFAULT_GRID, tol=DEFAULT_TOL):
    """All resonance points of a matrix family on [lo, hi].

    For each k in 0..k_max (k_max from the sampled spectral radius) the sign
    of det(A(lambda) - k^2 Id) is tracked over ``grid`` cells and sign
    changes are refined by bisection to |dlambda| < tol.  Roots of different
    frequencies at the same lambda are merged into one point.  Endpoints of
    the interval participate like any other grid node.
    """
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    if grid < 2:
        raise ValueError("grid must be at least 2")
    nodes = np.linspace(float(lo), float(hi), int(grid) + 1)
    all_eigs = np.linalg.eigvalsh(family.eval_many(nodes))
    max_eig = float(all_eigs.max())
    kmax = (math.isqrt(int(max_eig)) + 1 if max_eig > 0 else 0) + 1

    budget = min(_thread_budget(), kmax + 1)
    ks = list(range(kmax + 1))
    if budget > 1:
        with ThreadPoolExecutor(max_workers=budget) as pool:
            per_k = list(pool.map(lambda k: _scan_one_frequency(family, nodes, k, tol), ks))
    else:
        per_k = [_scan_one_frequency(family, nodes, k, tol) for k in ks]

    pairs = []
    for k, (roots, warns) in zip(ks, per_k):
        for cls, msg in warns:
            warnings.warn(msg, cls, stacklevel=2)
        pairs.extend((lam, k) for lam in roots)
    pairs.sort()

    merge_tol = 8.0 * tol * (1.0 + max(abs(lo), abs(hi)))
    points = []
    group = []
    for lam, k in pairs:
        if group and lam - group[-1][0] > merge_tol:
            points.append(_make_point(family, group, tol))
            group = []
        group.append((lam, k))
    if group:
        points.append(_make_point(family, group, tol))
    return points


def _make_point(family, group, tol):
    from .reps import RepDecomposition

    lam0 = float(np.mean([lam for lam, _ in group]))
    s = eigen_sym(family.eval(lam0), tol)
    freqs = set(k for _, k in group) | set(resonant_frequencies(s))
    parts = []
    for k in sorted(freqs):
        mu = s.multiplicity(k * k)
        if mu == 0:
            # the sign change certifies the crossing even when the bisected
            # lambda leaves the eigenvalue just outside the tol band; take
            # the multiplicity of the nearest cluster
            mu = min(s.eigenvalues, key=lambda vm: abs(vm[0] - k * k))[1]
        parts.append((mu, k))
    rep = RepDecomposition(parts)
    return ResonancePoint(lam0, frozenset(freqs), rep, det_nonzero=(0 not in freqs))
