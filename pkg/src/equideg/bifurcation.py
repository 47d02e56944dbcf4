"""Bifurcation-from-infinity analysis over a parameter interval.

The central object is the bifurcation index

    Bif(inf, [lm, lp]) = deg(lp) - deg(lm)

in the tom Dieck ring, where deg() is the gradient degree of the
asymptotic linearization at an interval endpoint.  A nonzero index forces
an unbounded connected set of 2pi-periodic solutions to emanate from
infinity inside the interval.  Three checkable criteria are implemented:

* criterion 1: endpoints may be resonant, needs the Brouwer index at
  infinity; fires on an index flip or a j_k jump away from the K-set;
* criterion 2: exactly one interior resonance lambda0, nonresonant
  endpoints; fires on a (-1)^{j_0} flip or any j_k jump, and localizes the
  branch at (infinity, lambda0);
* criterion 3: scaled potentials V(x, lambda) = lambda^2 V(x); bifurcation
  points are lambda0 = k/sqrt(alpha) over the positive spectrum, each with
  an explicit Z_k jump.

Reports bundle the index, the fired criterion, resonance points, predicted
minimal periods and isotropy-consistency verdicts into one JSON-stable
structure.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .eqdeg import MissingIndexError, deg_id_minus_LA, ind_infinity
from .reps import RepDecomposition, gcd_closure, is_consistent, isotropy_gcd_set
from .spectral import (DEFAULT_GRID, DEFAULT_TOL, MatrixFamily, ResonancePoint,
                       SpectralData, as_symmetric, eigen_sym,
                       _j_k_of_spectral, k_set, resonant_frequencies,
                       scan_resonances)
from .udring import TomDieckElement, add, scalar_mul

FORMAT_VERSION = 1


class PreconditionError(ValueError):
    """A theorem's standing hypotheses fail for the given problem."""


class AccumulationWarning(UserWarning):
    """Positive spectrum close to zero: scaled-family bifurcation points
    lambda0 = k/sqrt(alpha) become unreliable."""


class Perturbation:
    """Bounded perturbation of the asymptotic quadratic part.

    kind "none":    eta = 0.
    kind "kepler":  eta(x, lambda) = -s(lambda)/sqrt(|x|^2 + a), a > 0,
                    with s = 1 ("constant") or s = lambda^2 ("lambda_squared").
    kind "user":    a caller-supplied gradient, optional potential value.
    """

    __slots__ = ("kind", "a", "scale", "_grad", "_value")

    def __init__(self, kind, a=None, scale=None, grad=None, value=None):
        if kind not in ("none", "kepler", "user"):
            raise ValueError(f"unknown perturbation kind {kind!r}")
        if kind == "kepler":
            a = float(a)
            if not a > 0:
                raise ValueError("kepler perturbation needs a > 0")
            if scale not in ("constant", "lambda_squared"):
                raise ValueError(f"unknown kepler scale {scale!r}")
        if kind == "user" and grad is None:
            raise ValueError("user perturbation needs a gradient callable")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "scale", scale)
        object.__setattr__(self, "_grad", grad)
        object.__setattr__(self, "_value", value)

    def __setattr__(self, name, value):
        raise AttributeError("Perturbation is immutable")

    @classmethod
    def none(cls):
        return cls("none")

    @classmethod
    def kepler(cls, a, scale="lambda_squared"):
        return cls("kepler", a=a, scale=scale)

    @classmethod
    def user(cls, grad, value=None):
        return cls("user", grad=grad, value=value)

    def _s(self, lam):
        return 1.0 if self.scale == "constant" else lam * lam

    def gradient_many(self, X, lam):
        """Gradient rows for a stack X of shape (m, n)."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if self.kind == "none":
            return np.zeros_like(X)
        if self.kind == "kepler":
            r2 = (X * X).sum(axis=1) + self.a
            return self._s(lam) * X / (r2 ** 1.5)[:, None]
        return np.array([np.asarray(self._grad(x, lam), dtype=float) for x in X])

    def value_many(self, X, lam):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if self.kind == "none":
            return np.zeros(X.shape[0])
        if self.kind == "kepler":
            r2 = (X * X).sum(axis=1) + self.a
            return -self._s(lam) / np.sqrt(r2)
        if self._value is None:
            raise ValueError("user perturbation has no potential value callable")
        return np.array([float(self._value(x, lam)) for x in X])

    def hessian(self, x, lam):
        """Analytic Hessian (built-in kinds only)."""
        x = np.asarray(x, dtype=float)
        n = x.shape[0]
        if self.kind == "none":
            return np.zeros((n, n))
        if self.kind == "kepler":
            r2 = float(x @ x) + self.a
            return self._s(lam) * (np.eye(n) / r2 ** 1.5
                                   - 3.0 * np.outer(x, x) / r2 ** 2.5)
        raise ValueError("no analytic Hessian for user perturbations")

    def to_json(self):
        obj = {"kind": self.kind}
        if self.kind == "kepler":
            obj["a"] = self.a
            obj["scale"] = self.scale
        return obj


class IndexRule:
    """How ind(-grad V(., lambda), infinity) is obtained.

    "builtin": closed form for the built-in perturbation class;
    "value": caller-supplied integer (constant or function of lambda);
    "unavailable": criteria needing the index raise.
    """

    __slots__ = ("kind", "_value")

    def __init__(self, kind, value=None):
        if kind not in ("builtin", "value", "unavailable"):
            raise ValueError(f"unknown index rule {kind!r}")
        if kind == "value" and value is None:
            raise ValueError("index rule 'value' needs the value")
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "_value", value)

    def __setattr__(self, name, value):
        raise AttributeError("IndexRule is immutable")

    @classmethod
    def builtin(cls):
        return cls("builtin")

    @classmethod
    def value(cls, v):
        return cls("value", v)

    @classmethod
    def unavailable(cls):
        return cls("unavailable")

    @property
    def available(self):
        return self.kind != "unavailable"

    def ind(self, A, lam, tol=DEFAULT_TOL):
        if self.kind == "builtin":
            return ind_infinity(A, tol=tol)
        if self.kind == "value":
            v = self._value
            return int(v(lam)) if callable(v) else int(v)
        raise MissingIndexError(
            "the index at infinity is unavailable for this problem; declare "
            "the built-in class or supply a value")

    def to_json(self):
        obj = {"kind": self.kind}
        if self.kind == "value" and not callable(self._value):
            obj["value"] = int(self._value)
        return obj


class ProblemSpec:
    """Everything the analysis needs about one system u'' = -grad V(u, lambda)."""

    __slots__ = ("n", "family", "perturbation", "index_rule", "scaled")

    def __init__(self, n, family, perturbation=None, index_rule=None, scaled=False):
        if not isinstance(family, MatrixFamily):
            raise TypeError("family must be a MatrixFamily")
        if family.n != n:
            raise ValueError(f"family is {family.n}x{family.n}, declared n = {n}")
        object.__setattr__(self, "n", int(n))
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "perturbation", perturbation or Perturbation.none())
        object.__setattr__(self, "index_rule", index_rule or IndexRule.unavailable())
        object.__setattr__(self, "scaled", bool(scaled))

    def __setattr__(self, name, value):
        raise AttributeError("ProblemSpec is immutable")

    def gradient_many(self, X, lam):
        """grad V(x, lambda) for a stack X of shape (m, n)."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        A = self.family.eval_array(lam)
        return X @ A + self.perturbation.gradient_many(X, lam)

    def potential_many(self, X, lam):
        X = np.atleast_2d(np.asarray(X, dtype=float))
        A = self.family.eval_array(lam)
        quad = 0.5 * np.einsum("mi,ij,mj->m", X, A, X)
        return quad + self.perturbation.value_many(X, lam)

    def hessian(self, x, lam):
        return self.family.eval_array(lam) + self.perturbation.hessian(x, lam)

    def scaled_base_matrix(self):
        """The constant A with family = lambda^2 A (scaled problems only)."""
        if not self.scaled:
            raise ValueError("not a scaled problem")
        c = self.family.coeffs
        if c.shape[0] != 3 or np.any(c[0]) or np.any(c[1]):
            raise ValueError("scaled problem must have family lambda^2 * A")
        return as_symmetric(c[2])


@dataclass(frozen=True)
class CriterionVerdict:
    """Outcome of testing one bifurcation criterion."""

    name: str
    holds: bool
    witness_k: object = None
    lambda0: object = None
    kset: object = None
    message: str = ""

    def to_json(self):
        return {
            "name": self.name,
            "holds": self.holds,
            "witness_k": self.witness_k,
            "lambda0": self.lambda0,
            "kset": sorted(self.kset) if self.kset is not None else None,
            "message": self.message,
        }

    @classmethod
    def from_json(cls, obj):
        kset = obj.get("kset")
        return cls(obj["name"], bool(obj["holds"]), obj.get("witness_k"),
                   obj.get("lambda0"),
                   frozenset(kset) if kset is not None else None,
                   obj.get("message", ""))


@dataclass(frozen=True)
class PeriodSet:
    """Exact set of predicted minimal periods: 2pi/g per divisor g, plus 0
    for constant solutions when the kernel has a trivial summand."""

    divisors: frozenset
    includes_zero: bool = False

    def __post_init__(self):
        for g in self.divisors:
            if not isinstance(g, int) or g < 1:
                raise ValueError(f"period divisor must be a positive integer, got {g!r}")

    def as_floats(self):
        out = [2.0 * math.pi / g for g in sorted(self.divisors)]
        if self.includes_zero:
            out.append(0.0)
        return out

    def labels(self):
        out = []
        for g in sorted(self.divisors):
            out.append("2pi" if g == 1 else ("pi" if g == 2 else f"2pi/{g}"))
        if self.includes_zero:
            out.append("0")
        return out

    def to_json(self):
        return {"divisors": sorted(self.divisors), "includes_zero": self.includes_zero}

    @classmethod
    def from_json(cls, obj):
        return cls(frozenset(int(g) for g in obj["divisors"]), bool(obj["includes_zero"]))


@dataclass(frozen=True)
class Eqcont3Point:
    """One bifurcation point of a scaled family.

    pairs: the (k0, alpha0) combinations producing this lambda0; more than
    one pair means coincident points merged, flagged for review because the
    per-point jump formula assumes a singleton.
    bif_zk0: total Z_{k0} jump, ind * mu_A(alpha0) summed over pairs.
    """

    lambda0: float
    pairs: tuple
    bif_zk0: int

    @property
    def k0(self):
        return self.pairs[0][0]

    @property
    def alpha0(self):
        return self.pairs[0][1]

    @property
    def merged(self):
        return len(self.pairs) > 1

    def to_json(self):
        return {"lambda0": self.lambda0,
                "pairs": [[k, a] for k, a in self.pairs],
                "bif_zk0": self.bif_zk0,
                "merged": self.merged}

    @classmethod
    def from_json(cls, obj):
        return cls(float(obj["lambda0"]),
                   tuple((int(k), float(a)) for k, a in obj["pairs"]),
                   int(obj["bif_zk0"]))


@dataclass(frozen=True)
class ConsistencyVerdict:
    """Whether two kernel representations admit a common isotropy label.

    hypothesis_holds means "not consistent": the symmetry-breaking
    conclusion applies to branches connecting the two kernels.
    """

    consistent: bool
    labels_left: frozenset
    labels_right: frozenset
    shared: frozenset

    @property
    def hypothesis_holds(self):
        return not self.consistent

    def to_json(self):
        def enc(labels):
            return sorted(labels, key=lambda x: (isinstance(x, str), x))

        return {"consistent": self.consistent,
                "labels_left": enc(self.labels_left),
                "labels_right": enc(self.labels_right),
                "shared": enc(self.shared)}


def endpoint_degree(p, lam, tol=DEFAULT_TOL):
    """Asymptotic gradient degree at one endpoint.

    Returns (degree, undefined, spectral): for a nonresonant endpoint the
    closed-form deg(Id - L_A) and undefined = {}; for a resonant endpoint
    the index-at-infinity route, whose Z_k coordinates are only defined for
    nonresonant k (the rest are reported in `undefined`).
    """
    A = p.family.eval(lam)
    s = eigen_sym(A, tol)
    res = resonant_frequencies(s)
    if not res:
        return deg_id_minus_LA(A, tol), frozenset(), s
    ind = p.index_rule.ind(A, lam, tol)
    undefined = frozenset(k for k in res if k >= 1)
    top = max((v for v, _ in s.eigenvalues), default=-1.0)
    kmax = math.isqrt(int(max(top, 0.0))) + 1
    zk = {}
    for k in range(1, kmax + 1):
        if k in undefined:
            continue
        jk = _j_k_of_spectral(s, k)
        if jk:
            zk[k] = ind * jk
    return TomDieckElement(ind, zk), undefined, s


def bif_index_detailed(p, lm, lp, tol=DEFAULT_TOL):
    """(bif, undefined coordinates, spectra at both endpoints)."""
    deg_m, und_m, s_m = endpoint_degree(p, lm, tol)
    deg_p, und_p, s_p = endpoint_degree(p, lp, tol)
    und = und_m | und_p
    bif = add(deg_p, scalar_mul(-1, deg_m))
    if und:
        bif = TomDieckElement(bif.a0, {k: v for k, v in bif.zk.items() if k not in und})
    return bif, und, s_m, s_p


def bif_index(p, lm, lp, tol=DEFAULT_TOL):
    """Bifurcation index of the interval [lm, lp] in the tom Dieck ring."""
    return bif_index_detailed(p, lm, lp, tol)[0]


def bif_index_ls(p, lm, lp, tol=DEFAULT_TOL):
    """Leray-Schauder shadow: the SO(2)-coordinate of the bifurcation index."""
    return bif_index(p, lm, lp, tol).a0


def _kmax_of(*spectra):
    top = max((v for s in spectra for v, _ in s.eigenvalues), default=-1.0)
    return math.isqrt(int(max(top, 0.0))) + 1


def check_eqcont1(p, lm, lp, tol=DEFAULT_TOL):
    """Criterion with possibly resonant endpoints.

    (i) the Brouwer index at infinity differs between endpoints, or
    (ii) the common index is nonzero and some frequency k outside the
    K-set has a j_k jump.  The witness is the smallest such k.
    """
    A_m, A_p = p.family.eval(lm), p.family.eval(lp)
    s_m, s_p = eigen_sym(A_m, tol), eigen_sym(A_p, tol)
    ind_m = p.index_rule.ind(A_m, lm, tol)
    ind_p = p.index_rule.ind(A_p, lp, tol)
    kset = k_set(s_m, s_p)
    if ind_p != ind_m:
        return CriterionVerdict(
            "eqcont1(i)", True, kset=kset,
            message=f"index at infinity flips: {ind_m} at {lm:g}, {ind_p} at {lp:g}; "
                    "an unbounded branch bifurcates from infinity in the interval")
    if ind_p != 0:
        for k in range(1, _kmax_of(s_m, s_p) + 1):
            if k in kset:
                continue
            if _j_k_of_spectral(s_p, k) != _j_k_of_spectral(s_m, k):
                return CriterionVerdict(
                    "eqcont1(ii)", True, witness_k=k, kset=kset,
                    message=f"common index {ind_p} and j_{k} jumps "
                            f"{_j_k_of_spectral(s_m, k)} -> {_j_k_of_spectral(s_p, k)} "
                            f"with {k} outside K; an unbounded branch bifurcates")
    return CriterionVerdict("eqcont1", False, kset=kset,
                            message="no index flip and no j_k jump outside K")


def check_eqcont2(p, lm, lp, tol=DEFAULT_TOL, grid=DEFAULT_GRID):
    """Criterion for a single interior resonance with nonresonant endpoints.

    Fires when (-1)^{j_0} flips between the endpoints, or when any j_k
    jumps.  The branch then meets (infinity, lambda0) at the unique
    interior resonance value.
    """
    s_m = eigen_sym(p.family.eval(lm), tol)
    s_p = eigen_sym(p.family.eval(lp), tol)
    bad = []
    if resonant_frequencies(s_m):
        bad.append(lm)
    if resonant_frequencies(s_p):
        bad.append(lp)
    if bad:
        raise PreconditionError(
            f"endpoints must be nonresonant, but lambda in {bad} meet {{k^2}}")
    points = scan_resonances(p.family, lm, lp, grid=grid, tol=tol)
    if len(points) != 1:
        lams = [round(pt.lambda0, 9) for pt in points]
        raise PreconditionError(
            "the criterion needs exactly one interior resonance, found "
            f"{len(points)} at lambda in {lams}")
    lam0 = points[0].lambda0
    j0_m, j0_p = _j_k_of_spectral(s_m, 0), _j_k_of_spectral(s_p, 0)
    if (-1) ** j0_m != (-1) ** j0_p:
        return CriterionVerdict(
            "eqcont2(i)", True, lambda0=lam0,
            message=f"(-1)^j_0 flips ({j0_m} -> {j0_p}); an unbounded branch "
                    f"meets (infinity, lambda0 = {lam0:.9g})")
    for k in range(1, _kmax_of(s_m, s_p) + 1):
        jm, jp = _j_k_of_spectral(s_m, k), _j_k_of_spectral(s_p, k)
        if jm != jp:
            return CriterionVerdict(
                "eqcont2(ii)", True, witness_k=k, lambda0=lam0,
                message=f"j_{k} jumps {jm} -> {jp}; an unbounded branch meets "
                        f"(infinity, lambda0 = {lam0:.9g})")
    return CriterionVerdict("eqcont2", False, lambda0=lam0,
                            message="no j_k jump across the resonance")


def eqcont3_points(p, window, tol=DEFAULT_TOL):
    """Bifurcation points of a scaled family V(x, lambda) = lambda^2 V(x).

    Every lambda0 = k/sqrt(alpha) with alpha in the positive spectrum of A
    and lambda0 inside the window is a bifurcation point, with Z_{k0} jump
    ind(-grad V, inf) * mu_A(alpha0).  Jumps all carry the sign of the
    index, so distinct contributions can never cancel.
    """
    A = p.scaled_base_matrix()
    lo, hi = float(window[0]), float(window[1])
    if not 0.0 < lo < hi:
        raise ValueError(f"window must sit inside (0, inf), got ({lo}, {hi})")
    s = eigen_sym(A, tol)
    if any(abs(v) <= s.tol for v, _ in s.eigenvalues):
        raise PreconditionError(
            "A has an eigenvalue at 0 (at tolerance); the scaled-family "
            "criterion requires det A != 0")
    ind = p.index_rule.ind(A, 0.0, tol)
    positive = s.positive_spectrum()
    small = [v for v, _ in positive if v <= 1e6 * s.tol]
    if small:
        warnings.warn(
            f"positive eigenvalues {small} are close to 0; bifurcation points "
            "k/sqrt(alpha) in this window are numerically unreliable",
            AccumulationWarning, stacklevel=2)
    found = []
    for alpha, mult in positive:
        root = math.sqrt(alpha)
        for k in range(max(1, math.floor(lo * root)), math.ceil(hi * root) + 1):
            lam0 = k / root
            if lo <= lam0 <= hi:
                found.append((lam0, k, alpha, ind * mult))
    found.sort()
    out = []
    i = 0
    while i < len(found):
        lam0, k, alpha, jump = found[i]
        pairs, total = [(k, alpha)], jump
        j = i + 1
        while j < len(found) and found[j][0] - lam0 <= tol * (1.0 + lam0):
            pairs.append((found[j][1], found[j][2]))
            total += found[j][3]
            j += 1
        out.append(Eqcont3Point(lam0, tuple(pairs), total))
        i = j
    return out


def predict_periods(r):
    """Minimal periods forced by a resonance point's kernel frequencies.

    2pi/g for every g in the gcd-closure of the nonzero frequencies; 0 is
    possible exactly when the frequency 0 participates (constant solutions
    in ker A(lambda0)).
    """
    nonzero = frozenset(k for k in r.frequencies if k >= 1)
    return PeriodSet(gcd_closure(nonzero), includes_zero=(0 in r.frequencies))


def consistency_check(kernel_at_point, kernel_at_infinity):
    """Isotropy comparison powering the symmetry-breaking conclusion."""
    left = isotropy_gcd_set(kernel_at_point)
    right = isotropy_gcd_set(kernel_at_infinity)
    return ConsistencyVerdict(bool(left & right), left, right, left & right)


class BifurcationReport:
    """Full analysis of one interval, JSON-stable."""

    def __init__(self, interval, n, s_minus, s_plus, kset, bif, bif_undefined,
                 bif_ls, criterion, resonances, predicted_periods,
                 eqcont3=(), consistency=(), flags=None):
        self.interval = (float(interval[0]), float(interval[1]))
        self.n = int(n)
        self.s_minus = s_minus
        self.s_plus = s_plus
        self.kset = frozenset(kset)
        self.bif = bif
        self.bif_undefined = frozenset(bif_undefined)
        self.bif_ls = int(bif_ls)
        self.criterion = criterion
        self.resonances = list(resonances)
        self.predicted_periods = list(predicted_periods)
        self.eqcont3 = list(eqcont3)
        self.consistency = list(consistency)
        self.flags = dict(flags or {})

    def to_json(self):
        return {
            "format_version": FORMAT_VERSION,
            "interval": list(self.interval),
            "dimension": self.n,
            "endpoint_spectra": {"minus": self.s_minus.to_json(),
                                 "plus": self.s_plus.to_json()},
            "kset": sorted(self.kset),
            "bif": self.bif.to_json(),
            "bif_undefined": sorted(self.bif_undefined),
            "bif_ls": self.bif_ls,
            "criterion": self.criterion.to_json(),
            "resonances": [r.to_json() for r in self.resonances],
            "predicted_periods": [
                {"lambda0": r.lambda0, **ps.to_json()}
                for r, ps in zip(self.resonances, self.predicted_periods)],
            "eqcont3": [pt.to_json() for pt in self.eqcont3],
            "consistency": list(self.consistency),
            "flags": self.flags,
        }

    @classmethod
    def from_json(cls, obj):
        if obj.get("format_version") != FORMAT_VERSION:
            raise ValueError(f"unsupported format_version {obj.get('format_version')!r}")
        return cls(
            tuple(obj["interval"]), obj["dimension"],
            SpectralData.from_json(obj["endpoint_spectra"]["minus"]),
            SpectralData.from_json(obj["endpoint_spectra"]["plus"]),
            frozenset(obj["kset"]),
            TomDieckElement.from_json(obj["bif"]),
            frozenset(obj["bif_undefined"]), obj["bif_ls"],
            CriterionVerdict.from_json(obj["criterion"]),
            [ResonancePoint.from_json(r) for r in obj["resonances"]],
            [PeriodSet.from_json(pp) for pp in obj["predicted_periods"]],
            [Eqcont3Point.from_json(pt) for pt in obj["eqcont3"]],
            obj["consistency"], obj["flags"])

    def __eq__(self, other):
        if not isinstance(other, BifurcationReport):
            return NotImplemented
        return self.to_json() == other.to_json()


def build_report(p, lm, lp, tol=DEFAULT_TOL, grid=DEFAULT_GRID,
                 critical_points=None, flags=None):
    """Run the full criterion cascade on [lm, lp] and assemble the report.

    Criteria are tried from most to least informative: the scaled-family
    enumeration (when applicable), then the single-resonance criterion,
    then the resonant-endpoint criterion.  Precondition failures fall
    through to the next criterion rather than aborting.
    """
    bif, und, s_m, s_p = bif_index_detailed(p, lm, lp, tol)
    kset = k_set(s_m, s_p)
    resonances = scan_resonances(p.family, lm, lp, grid=grid, tol=tol)
    periods = [predict_periods(r) for r in resonances]

    eq3 = []
    verdict = None
    if p.scaled and lm > 0.0:
        try:
            eq3 = eqcont3_points(p, (lm, lp), tol)
        except (MissingIndexError, PreconditionError, ValueError):
            eq3 = []
        if eq3:
            first = eq3[0]
            verdict = CriterionVerdict(
                "eqcont3", True, witness_k=first.k0, lambda0=first.lambda0,
                message=f"{len(eq3)} bifurcation point(s) lambda0 = k/sqrt(alpha) "
                        "in the window, each with a nonzero Z_k jump")
    if verdict is None:
        try:
            v = check_eqcont2(p, lm, lp, tol, grid)
            if v.holds:
                verdict = v
        except PreconditionError:
            pass
    if verdict is None:
        try:
            v = check_eqcont1(p, lm, lp, tol)
            if v.holds:
                verdict = v
        except MissingIndexError:
            pass
    if verdict is None:
        verdict = CriterionVerdict("none", False,
                                   message="no implemented criterion fired")

    consistency = []
    for name, rep in (critical_points or {}).items():
        for r in resonances:
            cv = consistency_check(rep, r.kernel_rep)
            consistency.append({"critical_point": name, "lambda0": r.lambda0,
                                **cv.to_json()})

    flags = dict(flags or {})
    if p.perturbation.kind in ("none", "kepler"):
        # bounded zero set of the gradient holds for the built-in class
        flags.setdefault("zero_set_bounded", True)

    report = BifurcationReport(
        (lm, lp), p.n, s_m, s_p, kset, bif, und, bif.a0, verdict,
        resonances, periods, eq3, consistency, flags)
    if report.criterion.holds and not report.bif:
        raise AssertionError("criterion fired but the bifurcation index is zero")
    return report
