"""Built-in example systems and their regression checks.

Three diagonal families with a bounded gravitational-type perturbation,
used throughout the tests and the command line:

* example1: n = 4, A = diag(l^2 - 1, sqrt2 + l, l - sqrt2, sqrt5 + l) on
  [-1, 1], perturbation -l^2/sqrt(|x|^2 + 1).  Resonant endpoints (k = 0),
  one interior resonance at l = 1 - sqrt2 with frequency 1.
* example2: n = 4, A = diag(4 + l, 2, 2, 2) on [-1/2, 1/2], perturbation
  -1/sqrt(|x|^2 + 1).  Nonresonant endpoints, single interior resonance
  at l = 0 with frequency 2.
* example3: n = 5, A = diag(4 + l^2/2, l^3 - sqrt10, 9 + l^2/2,
  l^3 + sqrt10, 25 + l^2/2) on [-1, 1], same perturbation.  Resonance at
  l = 0 with frequencies {2, 3, 5} and a second one near l = 0.9427 where
  the fourth entry reaches 4, so the single-resonance criterion does not
  apply and the analysis falls back to the index-based one.

``verification_rows`` packages the headline invariants as named pass/fail
checks for the command line's verify-examples.
"""

import math
from dataclasses import dataclass
from importlib import resources

from . import spectral
from .bifurcation import (IndexRule, Perturbation, ProblemSpec, bif_index,
                          bif_index_ls, check_eqcont1, check_eqcont2,
                          predict_periods)
from .spectral import MatrixFamily, eigen_sym
from .udring import ZERO

SQRT2 = math.sqrt(2.0)
SQRT5 = math.sqrt(5.0)
SQRT10 = math.sqrt(10.0)


@dataclass(frozen=True)
class BuiltinExample:
    name: str
    problem: ProblemSpec
    lm: float
    lp: float


def example1():
    family = MatrixFamily.from_entry_polynomials(4, {
        (1, 1): {2: 1.0, 0: -1.0},
        (2, 2): {1: 1.0, 0: SQRT2},
        (3, 3): {1: 1.0, 0: -SQRT2},
        (4, 4): {1: 1.0, 0: SQRT5},
    })
    p = ProblemSpec(4, family, Perturbation.kepler(1.0, "lambda_squared"),
                    IndexRule.builtin())
    return BuiltinExample("example1", p, -1.0, 1.0)


def example2():
    family = MatrixFamily.from_entry_polynomials(4, {
        (1, 1): {0: 4.0, 1: 1.0},
        (2, 2): {0: 2.0}, (3, 3): {0: 2.0}, (4, 4): {0: 2.0},
    })
    p = ProblemSpec(4, family, Perturbation.kepler(1.0, "constant"),
                    IndexRule.builtin())
    return BuiltinExample("example2", p, -0.5, 0.5)


def example3():
    family = MatrixFamily.from_entry_polynomials(5, {
        (1, 1): {0: 4.0, 2: 0.5},
        (2, 2): {3: 1.0, 0: -SQRT10},
        (3, 3): {0: 9.0, 2: 0.5},
        (4, 4): {3: 1.0, 0: SQRT10},
        (5, 5): {0: 25.0, 2: 0.5},
    })
    p = ProblemSpec(5, family, Perturbation.kepler(1.0, "constant"),
                    IndexRule.builtin())
    return BuiltinExample("example3", p, -1.0, 1.0)


CATALOG = {"example1": example1, "example2": example2, "example3": example3}


def config_path(name):
    """Filesystem path of a bundled .cfg (example1 / example2 / example3)."""
    if name not in CATALOG:
        raise KeyError(f"no bundled config {name!r}; have {sorted(CATALOG)}")
    return resources.files("equideg").joinpath(f"configs/{name}.cfg")


def _squares_met(A, tol=1e-9):
    return set(spectral.resonant_frequencies(eigen_sym(A, tol)))


def verification_rows():
    """Named regression checks over the built-in examples.

    Returns a list of (name, thunk); each thunk returns (ok, detail).
    Spectral counts go through the spectral module attributes on purpose:
    tampering with spectral.j_k must flip rows to FAIL.
    """
    rows = []

    def row(name):
        def deco(fn):
            rows.append((name, fn))
            return fn
        return deco

    ex1, ex2, ex3 = example1(), example2(), example3()

    @row("example1: j_1 jumps 1 -> 2 across the interval")
    def _():
        jp = spectral.j_k(ex1.problem.family.eval(1.0), 1)
        jm = spectral.j_k(ex1.problem.family.eval(-1.0), 1)
        return (jp, jm) == (2, 1), f"j_1(+1)={jp}, j_1(-1)={jm}"

    @row("example1: index at infinity is -1 at both endpoints")
    def _():
        v = check_eqcont1(ex1.problem, ex1.lm, ex1.lp)
        ok = v.name == "eqcont1(ii)" and v.holds and v.witness_k == 1 \
            and v.kset == frozenset()
        return ok, f"verdict {v.name}, witness {v.witness_k}, K={sorted(v.kset)}"

    @row("example1: interior resonance at 1 - sqrt2, period 2pi")
    def _():
        pts = spectral.scan_resonances(ex1.problem.family, ex1.lm, ex1.lp)
        interior = [p for p in pts if p.det_nonzero]
        if len(interior) != 1:
            return False, f"{len(interior)} interior resonances"
        pt = interior[0]
        periods = predict_periods(pt)
        ok = abs(pt.lambda0 - (1.0 - SQRT2)) < 1e-9 \
            and periods.divisors == {1} and not periods.includes_zero
        return ok, f"lambda0={pt.lambda0!r}, periods={periods.labels()}"

    @row("example2: spectrum of A(0) meets the squares exactly in {4}")
    def _():
        met = _squares_met(ex2.problem.family.eval(0.0))
        return met == {2}, f"k with k^2 in spectrum: {sorted(met)}"

    @row("example2: j_2 jumps 0 -> 1 and the single-resonance criterion fires")
    def _():
        jp = spectral.j_k(ex2.problem.family.eval(0.5), 2)
        jm = spectral.j_k(ex2.problem.family.eval(-0.5), 2)
        v = check_eqcont2(ex2.problem, ex2.lm, ex2.lp)
        ok = (jp, jm) == (1, 0) and v.name == "eqcont2(ii)" and v.holds \
            and v.witness_k == 2 and abs(v.lambda0) < 1e-12
        return ok, f"j_2=({jp},{jm}), verdict {v.name} at lambda0={v.lambda0!r}"

    @row("example2: predicted minimal period pi")
    def _():
        pts = spectral.scan_resonances(ex2.problem.family, ex2.lm, ex2.lp)
        periods = predict_periods(pts[0])
        ok = len(pts) == 1 and periods.divisors == {2} and not periods.includes_zero
        return ok, f"periods={periods.labels()}"

    @row("example3: spectrum of A(0) meets the squares exactly in {4, 9, 25}")
    def _():
        met = _squares_met(ex3.problem.family.eval(0.0))
        return met == {2, 3, 5}, f"k with k^2 in spectrum: {sorted(met)}"

    @row("example3: j_2 jumps 3 -> 4 across the interval")
    def _():
        jp = spectral.j_k(ex3.problem.family.eval(1.0), 2)
        jm = spectral.j_k(ex3.problem.family.eval(-1.0), 2)
        return (jp, jm) == (4, 3), f"j_2(+1)={jp}, j_2(-1)={jm}"

    @row("example3: period set at lambda0 = 0 is {2pi, pi, 2pi/3, 2pi/5}")
    def _():
        pts = spectral.scan_resonances(ex3.problem.family, ex3.lm, ex3.lp)
        at0 = [p for p in pts if abs(p.lambda0) < 1e-9]
        if len(at0) != 1:
            return False, f"{len(at0)} resonances at 0"
        periods = predict_periods(at0[0])
        ok = periods.divisors == {1, 2, 3, 5} and not periods.includes_zero
        return ok, f"periods={periods.labels()}"

    for ex in (ex1, ex2, ex3):
        def check(ex=ex):
            bif = bif_index(ex.problem, ex.lm, ex.lp)
            ls = bif_index_ls(ex.problem, ex.lm, ex.lp)
            return bif != ZERO and ls == 0, f"bif={bif!r}, bif_ls={ls}"
        rows.append((f"{ex.name}: nonzero bifurcation index with zero "
                     "Leray-Schauder shadow", check))

    return rows
