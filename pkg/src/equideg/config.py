"""Declarative problem files.

INI-style sections describe one analysis problem:

    [problem]                      [matrix]
    format_version = 1             1 1 = 2:1 0:-1
    n = 4                          2 2 = 1:1 0:sqrt2
    lambda_minus = -1              ...
    lambda_plus = 1
    scaled = false                 [perturbation]
                                   kind = kepler
    [index]                        a = 1
    rule = builtin                 scale = lambda_squared

    [options]                      [critical_points]
    tol = 1e-9                     origin = 1,2 1,3
    grid = 512
    modes = 16                     [flags]
                                   zero_set_bounded = true

Matrix entries are polynomials in lambda, written as space-separated
``power:coefficient`` terms with 1-based ``i j`` keys; a coefficient is a
decimal literal or an optionally signed named constant (pi, sqrt2, sqrt5,
sqrt10) resolved to full double precision at parse time.  Off-diagonal
entries may be given once and are mirrored; giving both triangles is
allowed only when they agree.
"""

import configparser
import math
from dataclasses import dataclass, field

from .bifurcation import IndexRule, Perturbation, ProblemSpec
from .reps import RepDecomposition
from .spectral import DEFAULT_GRID, DEFAULT_TOL, MatrixFamily

FORMAT_VERSION = 1

NAMED_CONSTANTS = {
    "pi": math.pi,
    "sqrt2": math.sqrt(2.0),
    "sqrt5": math.sqrt(5.0),
    "sqrt10": math.sqrt(10.0),
}


class ConfigError(ValueError):
    """Problem file is malformed; the message names section and key."""


def _coefficient(token, where):
    sign = 1.0
    body = token
    if body and body[0] in "+-":
        sign = -1.0 if body[0] == "-" else 1.0
        body = body[1:]
    if body in NAMED_CONSTANTS:
        # named constants resolve to 17-significant-digit literals
        return sign * float(f"{NAMED_CONSTANTS[body]:.17g}")
    try:
        return sign * float(body)
    except ValueError:
        raise ConfigError(
            f"{where}: coefficient {token!r} is neither a number nor one of "
            f"{sorted(NAMED_CONSTANTS)}") from None


def _entry_terms(value, where):
    terms = {}
    for tok in value.split():
        if ":" not in tok:
            raise ConfigError(f"{where}: term {tok!r} is not power:coefficient")
        ptxt, ctxt = tok.split(":", 1)
        try:
            power = int(ptxt)
        except ValueError:
            raise ConfigError(f"{where}: power {ptxt!r} is not an integer") from None
        if power < 0:
            raise ConfigError(f"{where}: negative power {power}")
        terms[power] = terms.get(power, 0.0) + _coefficient(ctxt, where)
    if not terms:
        raise ConfigError(f"{where}: empty polynomial")
    return terms


@dataclass
class ProblemConfig:
    n: int
    family: MatrixFamily
    perturbation: Perturbation
    index_rule: IndexRule
    scaled: bool
    lambda_minus: float
    lambda_plus: float
    tol: float = DEFAULT_TOL
    grid: int = DEFAULT_GRID
    modes: int = 16
    critical_points: dict = field(default_factory=dict)
    flags: dict = field(default_factory=dict)

    def problem(self):
        return ProblemSpec(self.n, self.family, self.perturbation,
                           self.index_rule, self.scaled)

    @classmethod
    def from_file(cls, path):
        parser = _parser()
        with open(path) as fh:
            parser.read_file(fh, source=str(path))
        return cls._from_parser(parser)

    @classmethod
    def from_string(cls, text):
        parser = _parser()
        parser.read_string(text)
        return cls._from_parser(parser)

    @classmethod
    def _from_parser(cls, parser):
        if not parser.has_section("problem"):
            raise ConfigError("missing [problem] section")
        prob = parser["problem"]
        version = _get_int(prob, "format_version", "problem")
        if version != FORMAT_VERSION:
            raise ConfigError(f"problem.format_version: unsupported value {version}")
        n = _get_int(prob, "n", "problem")
        if n < 1:
            raise ConfigError("problem.n: must be positive")
        lm = _get_float(prob, "lambda_minus", "problem")
        lp = _get_float(prob, "lambda_plus", "problem")
        if not lm < lp:
            raise ConfigError(f"problem: lambda_minus={lm} must be below lambda_plus={lp}")
        scaled = prob.getboolean("scaled", fallback=False)

        family = _matrix_family(parser, n, scaled)
        pert = _perturbation(parser)
        rule = _index_rule(parser)

        opts = parser["options"] if parser.has_section("options") else {}
        tol = float(opts.get("tol", DEFAULT_TOL))
        if tol <= 0:
            raise ConfigError("options.tol: must be positive")
        grid = int(opts.get("grid", DEFAULT_GRID))
        if grid < 2:
            raise ConfigError("options.grid: must be at least 2")
        modes = int(opts.get("modes", 16))
        if modes < 1:
            raise ConfigError("options.modes: must be positive")

        critical = {}
        if parser.has_section("critical_points"):
            for name, value in parser["critical_points"].items():
                critical[name] = _rep(value, f"critical_points.{name}")

        flags = {}
        if parser.has_section("flags"):
            for name, value in parser["flags"].items():
                try:
                    flags[name] = parser["flags"].getboolean(name)
                except ValueError:
                    raise ConfigError(f"flags.{name}: not a boolean") from None

        return cls(n, family, pert, rule, scaled, lm, lp, tol, grid, modes,
                   critical, flags)


def _parser():
    p = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    p.optionxform = str
    return p


def _get_int(section, key, name):
    if key not in section:
        raise ConfigError(f"{name}.{key}: missing")
    try:
        return int(section[key])
    except ValueError:
        raise ConfigError(f"{name}.{key}: {section[key]!r} is not an integer") from None


def _get_float(section, key, name):
    if key not in section:
        raise ConfigError(f"{name}.{key}: missing")
    try:
        return float(section[key])
    except ValueError:
        raise ConfigError(f"{name}.{key}: {section[key]!r} is not a number") from None


def _matrix_family(parser, n, scaled):
    if not parser.has_section("matrix"):
        raise ConfigError("missing [matrix] section")
    entries = {}
    for key, value in parser["matrix"].items():
        parts = key.split()
        if len(parts) != 2:
            raise ConfigError(f"matrix.{key!r}: key must be 'i j'")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise ConfigError(f"matrix.{key!r}: indices must be integers") from None
        if not (1 <= i <= n and 1 <= j <= n):
            raise ConfigError(f"matrix.{key!r}: indices outside 1..{n}")
        terms = _entry_terms(value, f"matrix.{key}")
        canon = (min(i, j), max(i, j))
        if canon in entries and entries[canon] != terms:
            raise ConfigError(
                f"matrix.{key!r}: disagrees with its mirror entry "
                f"{canon[0]} {canon[1]}")
        entries[canon] = terms
    family = MatrixFamily.from_entry_polynomials(n, entries)
    if scaled:
        c = family.coeffs
        if c.shape[0] != 3 or c[0].any() or c[1].any():
            raise ConfigError(
                "matrix: a scaled problem needs every entry to be a pure "
                "2:coefficient term (family lambda^2 * A)")
    return family


def _perturbation(parser):
    if not parser.has_section("perturbation"):
        return Perturbation.none()
    sec = parser["perturbation"]
    kind = sec.get("kind", "none")
    if kind == "none":
        return Perturbation.none()
    if kind == "kepler":
        a = _get_float(sec, "a", "perturbation")
        if a <= 0:
            raise ConfigError("perturbation.a: must be positive")
        scale = sec.get("scale", "constant")
        if scale not in ("constant", "lambda_squared"):
            raise ConfigError(f"perturbation.scale: unknown value {scale!r}")
        return Perturbation.kepler(a, scale)
    raise ConfigError(f"perturbation.kind: unknown value {kind!r}")


def _index_rule(parser):
    if not parser.has_section("index"):
        return IndexRule.unavailable()
    sec = parser["index"]
    rule = sec.get("rule", "unavailable")
    if rule == "builtin":
        return IndexRule.builtin()
    if rule == "unavailable":
        return IndexRule.unavailable()
    if rule == "value":
        return IndexRule.value(_get_int(sec, "value", "index"))
    raise ConfigError(f"index.rule: unknown value {rule!r}")


def _rep(value, where):
    parts = []
    for tok in value.split():
        try:
            j, k = (int(x) for x in tok.split(","))
        except ValueError:
            raise ConfigError(f"{where}: token {tok!r} is not 'mult,freq'") from None
        parts.append((j, k))
    try:
        return RepDecomposition(sorted(parts, key=lambda jk: jk[1]))
    except ValueError as exc:
        raise ConfigError(f"{where}: {exc}") from None
