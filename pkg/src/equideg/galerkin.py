"""Truncated-Fourier verification harness for u'' = -grad V(u, lambda).

A 2pi-periodic candidate is stored by its Fourier coefficients up to order
N.  Plugging the ansatz into the equation and projecting back onto the
retained modes gives the residual

    R_0      = c_0
    R_k^cos  = -k^2 a_k + c_k
    R_k^sin  = -k^2 b_k + s_k

with (c, s) the transform of t -> grad V(u(t), lambda) on M >= 4N+1
equispaced nodes.  A Gauss-Newton iteration on the residual augmented with
a phase condition (and, for continuation, an amplitude pin with lambda
freed) produces branch points whose measured minimal periods and lambda
drift are the numerical evidence the analysis module's predictions are
checked against.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .spectral import DEFAULT_TOL


class NewtonConvergenceError(RuntimeError):
    """Gauss-Newton failed to reach the tolerance in the iteration budget."""


class SingularJacobianError(RuntimeError):
    """Augmented Jacobian is rank deficient."""

    def __init__(self, message, cond):
        super().__init__(f"{message} (condition estimate {cond:.3e})")
        self.cond = cond


class DivergenceWarning(UserWarning):
    """Branch drifts away from the expected resonance value."""


class FourierLoop:
    """Real trigonometric polynomial loop u(t) = a0 + sum_k (acos_k cos kt
    + asin_k sin kt), t in [0, 2pi), with vector coefficients in R^n."""

    __slots__ = ("n", "N", "a0", "acos", "asin")

    def __init__(self, a0, acos, asin):
        a0 = np.array(a0, dtype=float)
        acos = np.array(acos, dtype=float)
        asin = np.array(asin, dtype=float)
        if a0.ndim != 1 or acos.ndim != 2 or acos.shape != asin.shape \
                or acos.shape[1] != a0.shape[0]:
            raise ValueError("coefficient shapes disagree")
        for arr in (a0, acos, asin):
            arr.flags.writeable = False
        object.__setattr__(self, "n", a0.shape[0])
        object.__setattr__(self, "N", acos.shape[0])
        object.__setattr__(self, "a0", a0)
        object.__setattr__(self, "acos", acos)
        object.__setattr__(self, "asin", asin)

    def __setattr__(self, name, value):
        raise AttributeError("FourierLoop is immutable")

    @classmethod
    def zero(cls, n, N):
        return cls(np.zeros(n), np.zeros((N, n)), np.zeros((N, n)))

    @classmethod
    def single_mode(cls, k, vec, N, phase_sin=None):
        """R^n-valued loop vec*cos(kt) (+ optional sin part)."""
        vec = np.asarray(vec, dtype=float)
        loop = cls.zero(vec.shape[0], N)
        acos = loop.acos.copy()
        asin = loop.asin.copy()
        acos[k - 1] = vec
        if phase_sin is not None:
            asin[k - 1] = np.asarray(phase_sin, dtype=float)
        return cls(loop.a0, acos, asin)

    def pack(self):
        return np.concatenate([self.a0,
                               np.stack([self.acos, self.asin], axis=1).ravel()])

    @classmethod
    def unpack(cls, x, n, N):
        a0 = x[:n]
        rest = x[n:].reshape(N, 2, n)
        return cls(a0, rest[:, 0, :], rest[:, 1, :])

    def values(self, M):
        """Sample u on M equispaced nodes, shape (M, n)."""
        t = 2.0 * math.pi * np.arange(M) / M
        k = np.arange(1, self.N + 1)
        C = np.cos(np.outer(t, k))
        S = np.sin(np.outer(t, k))
        return self.a0[None, :] + C @ self.acos + S @ self.asin

    def velocity(self, M):
        t = 2.0 * math.pi * np.arange(M) / M
        k = np.arange(1, self.N + 1)
        C = np.cos(np.outer(t, k))
        S = np.sin(np.outer(t, k))
        return -S @ (k[:, None] * self.acos) + C @ (k[:, None] * self.asin)

    def amplitude(self, M=None):
        """sup_t |u(t)| approximated on the collocation grid."""
        M = M or (4 * self.N + 1)
        return float(np.linalg.norm(self.values(M), axis=1).max())

    def mode_energy(self):
        """Per-mode coefficient energy |acos_k|^2 + |asin_k|^2, k = 1..N."""
        return (self.acos ** 2).sum(axis=1) + (self.asin ** 2).sum(axis=1)

    def shifted(self, s):
        """The loop t -> u(t + s): a rigid rotation of coefficient pairs."""
        k = np.arange(1, self.N + 1)
        c, sn = np.cos(k * s)[:, None], np.sin(k * s)[:, None]
        return FourierLoop(self.a0,
                           c * self.acos + sn * self.asin,
                           -sn * self.acos + c * self.asin)

    def truncated(self, N):
        """Copy with the truncation order changed (pad or drop modes)."""
        acos = np.zeros((N, self.n))
        asin = np.zeros((N, self.n))
        m = min(N, self.N)
        acos[:m] = self.acos[:m]
        asin[:m] = self.asin[:m]
        return FourierLoop(self.a0, acos, asin)


@dataclass(frozen=True)
class ContinuationOptions:
    modes: int = 32
    collocation: int = 0          # 0 means 4*modes + 1
    tol: float = 1e-10
    max_iter: int = 50
    analytic_jacobian: bool = False
    mode_threshold: float = 1e-8  # active-mode energy fraction

    def nodes(self):
        return self.collocation if self.collocation else 4 * self.modes + 1


@dataclass(frozen=True)
class BranchPoint:
    loop: FourierLoop
    lam: float
    amplitude: float
    residual_norm: float
    active_modes: frozenset
    failed: bool = False


def _gradient_coeffs(p, vals, lam, N):
    """(c0, c, s): Fourier coefficients of grad V along a sampled loop."""
    M = vals.shape[0]
    G = np.fft.rfft(p.gradient_many(vals, lam), axis=0)
    c0 = G[0].real / M
    c = 2.0 * G[1:N + 1].real / M
    s = -2.0 * G[1:N + 1].imag / M
    return c0, c, s


def residual(loop, lam, p, M=None):
    """Coefficient-space residual of u'' + grad V(u, lambda) = 0."""
    M = M or (4 * loop.N + 1)
    if M < 2 * loop.N + 2:
        raise ValueError("need at least 2N+2 collocation nodes")
    c0, c, s = _gradient_coeffs(p, loop.values(M), lam, loop.N)
    k2 = (np.arange(1, loop.N + 1) ** 2)[:, None]
    rcos = -k2 * loop.acos + c
    rsin = -k2 * loop.asin + s
    return FourierLoop(c0, rcos, rsin).pack()


def _phase_row_value(ref, loop):
    """Integral of <d/dt u_ref, u> over a period, from coefficients.

    Zero at loop = ref, so a solver seeded at ref satisfies the phase
    condition from the start.
    """
    k = np.arange(1, ref.N + 1)[:, None]
    return math.pi * float(
        (k * (ref.asin * loop.acos - ref.acos * loop.asin)).sum())


def _analytic_jacobian(loop, lam, p, M):
    """Exact residual Jacobian via the potential Hessian at the nodes."""
    n, N = loop.n, loop.N
    vals = loop.values(M)
    H = np.stack([p.hessian(x, lam) for x in vals])  # (M, n, n)
    t = 2.0 * math.pi * np.arange(M) / M
    k = np.arange(1, N + 1)
    C = np.cos(np.outer(t, k))
    S = np.sin(np.outer(t, k))
    dim = n * (2 * N + 1)
    J = np.zeros((dim, dim))
    basis = np.empty((M, dim))
    basis[:, :n] = 1.0
    # columns ordered like pack(): a0 block, then per-k cos block, sin block
    for kk in range(N):
        lo = n + 2 * n * kk
        basis[:, lo:lo + n] = C[:, kk:kk + 1]
        basis[:, lo + n:lo + 2 * n] = S[:, kk:kk + 1]
    for col in range(dim):
        comp = col % n if col < n else (col - n) % n
        dgrad = H[:, :, comp] * basis[:, col][:, None]
        G = np.fft.rfft(dgrad, axis=0)
        dc0 = G[0].real / M
        dc = 2.0 * G[1:N + 1].real / M
        ds = -2.0 * G[1:N + 1].imag / M
        J[:, col] = FourierLoop(dc0, dc, ds).pack()
    k2 = np.repeat(np.arange(1, N + 1) ** 2, 2 * n)
    J[np.arange(n, dim), np.arange(n, dim)] -= k2
    return J


def _fd_jacobian(func, x, f0):
    J = np.empty((f0.shape[0], x.shape[0]))
    for j in range(x.shape[0]):
        h = 1e-7 * (1.0 + abs(x[j]))
        xp = x.copy()
        xp[j] += h
        J[:, j] = (func(xp) - f0) / h
    return J


def _gauss_newton(func, x0, tol, max_iter, jac=None):
    """Least-squares Newton on an overdetermined system.

    Convergence is checked before the first step, so an exact initial
    guess returns without assembling a Jacobian.
    """
    x = x0.copy()
    for it in range(max_iter + 1):
        f = func(x)
        norm = float(np.abs(f).max())
        if norm <= tol:
            return x, norm
        if it == max_iter:
            raise NewtonConvergenceError(
                f"no convergence after {max_iter} iterations "
                f"(residual {norm:.3e}, tolerance {tol:.3e})")
        J = jac(x) if jac is not None else _fd_jacobian(func, x, f)
        sv = np.linalg.svd(J, compute_uv=False)
        if sv[-1] <= 1e-14 * sv[0]:
            raise SingularJacobianError("augmented Jacobian is rank deficient",
                                        cond=float(sv[0] / max(sv[-1], 1e-300)))
        step, *_ = np.linalg.lstsq(J, -f, rcond=None)
        x = x + step
    raise AssertionError("unreachable")


def newton_solve(guess, lam, p, opts=None):
    """Solve the projected system at fixed lambda from a caller's guess.

    The time-shift degeneracy is removed by a phase condition against the
    guess derivative; the system is solved in least-squares sense.
    """
    opts = opts or ContinuationOptions(modes=guess.N)
    N = opts.modes
    loop0 = guess.truncated(N)
    M = max(opts.nodes(), 4 * N + 1)
    n = loop0.n

    def func(x):
        lp = FourierLoop.unpack(x, n, N)
        return np.concatenate([residual(lp, lam, p, M),
                               [_phase_row_value(loop0, lp)]])

    jac = None
    if opts.analytic_jacobian:
        k = np.arange(1, N + 1)[:, None]

        def jac(x):
            lp = FourierLoop.unpack(x, n, N)
            J = _analytic_jacobian(lp, lam, p, M)
            phase = np.concatenate([
                np.zeros(n),
                np.stack([k * loop0.asin, -k * loop0.acos], axis=1).ravel()
            ]) * math.pi
            return np.vstack([J, phase])

    x, _ = _gauss_newton(func, loop0.pack(), opts.tol, opts.max_iter, jac)
    return FourierLoop.unpack(x, n, N)


def _kernel_directions(p, r, tol=DEFAULT_TOL):
    """Unit eigenvectors of A(lambda0) for the eigenvalue k0^2."""
    k0 = min((k for k in r.frequencies if k >= 1), default=None)
    if k0 is None:
        raise ValueError("resonance point has no positive frequency to continue")
    A = p.family.eval_array(r.lambda0)
    vals, vecs = np.linalg.eigh(A)
    sel = np.abs(vals - k0 * k0) <= tol * (1.0 + np.abs(vals).max())
    if not sel.any():
        sel = np.abs(vals - k0 * k0) == np.abs(vals - k0 * k0).min()
    dirs = []
    for v in vecs[:, sel].T:
        lead = np.argmax(np.abs(v))
        dirs.append(v * np.sign(v[lead]))
    return k0, dirs


def continue_to_infinity(p, r, amplitudes, opts=None, direction=0, window=0.5):
    """Follow the branch rooted at a resonance toward large amplitude.

    For each requested amplitude R the augmented system (residual, phase
    condition, mode-k0 coefficient norm = R) is solved for the loop and
    lambda jointly, seeded from R * v * cos(k0 t) at first and from the
    rescaled previous solution afterwards.  A failed solve appends a
    marker point and truncates the branch.
    """
    opts = opts or ContinuationOptions(modes=16)
    N = opts.modes
    M = opts.nodes()
    n = p.n
    k0, dirs = _kernel_directions(p, r)
    if not 0 <= direction < len(dirs):
        raise ValueError(f"direction {direction} out of range; "
                         f"kernel multiplicity is {len(dirs)}")
    vec = dirs[direction]
    lam0 = r.lambda0

    def make_func(ref, R):
        def func(z):
            lp = FourierLoop.unpack(z[:-1], n, N)
            lam = z[-1]
            pin = math.hypot(np.linalg.norm(lp.acos[k0 - 1]),
                             np.linalg.norm(lp.asin[k0 - 1])) - R
            return np.concatenate([residual(lp, lam, p, M),
                                   [_phase_row_value(ref, lp), pin]])
        return func

    branch = []
    prev = None
    prev_lam = lam0
    for R in amplitudes:
        if prev is None:
            seed = FourierLoop.single_mode(k0, R * vec, N)
        else:
            ratio = R / branch[-1].amplitude
            seed = FourierLoop(prev.a0 * ratio, prev.acos * ratio,
                               prev.asin * ratio)
        z0 = np.concatenate([seed.pack(), [prev_lam]])
        func = make_func(seed, float(R))
        try:
            z, norm = _gauss_newton(func, z0, opts.tol, opts.max_iter)
        except (NewtonConvergenceError, SingularJacobianError):
            branch.append(BranchPoint(seed, prev_lam, float(R), math.inf,
                                      frozenset(), failed=True))
            return branch
        loop = FourierLoop.unpack(z[:-1], n, N)
        lam = float(z[-1])
        energy = loop.mode_energy()
        total = float(energy.sum()) or 1.0
        active = frozenset(int(k) for k in np.flatnonzero(
            energy > opts.mode_threshold * total) + 1)
        branch.append(BranchPoint(loop, lam, float(R), norm, active))
        if len(branch) >= 2 and abs(lam - lam0) > abs(branch[-2].lam - lam0) \
                and abs(lam - lam0) > window:
            warnings.warn(
                f"lambda drift grew to {abs(lam - lam0):.3g} at amplitude {R:g}; "
                "the branch may not meet this resonance", DivergenceWarning,
                stacklevel=2)
        prev, prev_lam = loop, lam
    return branch


def minimal_period_divisor(loop, rel_threshold=1e-6):
    """gcd of the active modes; 0 for an (almost) constant loop."""
    energy = loop.mode_energy()
    total = float(energy.sum())
    if total <= 0.0:
        return 0
    active = [k + 1 for k, e in enumerate(energy) if e > rel_threshold * total]
    if not active:
        return 0
    return math.gcd(*active)


def minimal_period(loop, rel_threshold=1e-6):
    """Minimal period of the loop; 0 by convention for constants."""
    g = minimal_period_divisor(loop, rel_threshold)
    return 0.0 if g == 0 else 2.0 * math.pi / g


def energy_drift(loop, lam, p, M=None):
    """max - min of the first integral H = |u'|^2/2 + V(u, lambda) on the grid.

    Zero for exact solutions of the autonomous system; for truncated ones
    this measures how far the computed loop is from conserving energy.
    """
    M = M or (4 * loop.N + 1)
    vals = loop.values(M)
    vel = loop.velocity(M)
    E = 0.5 * (vel * vel).sum(axis=1) + p.potential_many(vals, lam)
    return float(E.max() - E.min())


def write_branch_csv(path, branch, format_version=1):
    """Branch table with 17-significant-digit decimal columns."""
    if not branch:
        raise ValueError("empty branch")
    n, N = branch[0].loop.n, branch[0].loop.N
    cols = ["lambda", "amplitude", "residual_norm", "min_period_divisor"]
    cols += [f"a0_{i + 1}" for i in range(n)]
    for k in range(1, N + 1):
        cols += [f"cos{k}_{i + 1}" for i in range(n)]
        cols += [f"sin{k}_{i + 1}" for i in range(n)]
    with open(path, "w") as fh:
        fh.write(f"# branch of 2pi-periodic solutions, format_version={format_version}, "
                 f"n={n}, modes={N}\n")
        fh.write(",".join(cols) + "\n")
        for bp in branch:
            row = [bp.lam, bp.amplitude, bp.residual_norm,
                   minimal_period_divisor(bp.loop)]
            row.extend(bp.loop.a0)
            for k in range(N):
                row.extend(bp.loop.acos[k])
                row.extend(bp.loop.asin[k])
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")
