"""Problem-file parsing."""

import math

import numpy as np
import pytest

from equideg.config import ConfigError, ProblemConfig
from equideg.reps import RepDecomposition

MINIMAL = """\
[problem]
format_version = 1
n = 2
lambda_minus = -1
lambda_plus = 1

[matrix]
1 1 = 0:4
2 2 = 1:1 0:2
"""


def test_minimal_config_and_defaults():
    cfg = ProblemConfig.from_string(MINIMAL)
    assert cfg.n == 2
    assert (cfg.lambda_minus, cfg.lambda_plus) == (-1.0, 1.0)
    assert cfg.scaled is False
    assert cfg.tol == 1e-9
    assert cfg.grid == 512
    assert cfg.modes == 16
    assert cfg.critical_points == {}
    assert cfg.flags == {}
    assert cfg.perturbation.kind == "none"
    assert not cfg.index_rule.available
    A = cfg.family.eval_array(0.5)
    assert np.allclose(A, np.diag([4.0, 2.5]))


def test_problem_method_builds_spec():
    p = ProblemConfig.from_string(MINIMAL).problem()
    assert p.n == 2
    assert np.allclose(p.family.eval_array(-1.0), np.diag([4.0, 1.0]))


def test_named_constants_and_signs():
    text = MINIMAL.replace("1 1 = 0:4", "1 1 = 0:sqrt2 1:-sqrt10 2:+pi")
    cfg = ProblemConfig.from_string(text)
    A = cfg.family.eval_array(1.0)
    assert A[0, 0] == pytest.approx(math.sqrt(2) - math.sqrt(10) + math.pi,
                                    abs=1e-15)


def test_repeated_power_accumulates():
    text = MINIMAL.replace("1 1 = 0:4", "1 1 = 0:1 0:2.5")
    cfg = ProblemConfig.from_string(text)
    assert cfg.family.eval_array(0.0)[0, 0] == 3.5


def test_offdiagonal_mirroring():
    text = MINIMAL + "1 2 = 0:1\n"
    cfg = ProblemConfig.from_string(text)
    A = cfg.family.eval_array(0.0)
    assert A[0, 1] == A[1, 0] == 1.0
    # both triangles may be present when they agree
    both = text + "2 1 = 0:1\n"
    assert ProblemConfig.from_string(both).family.eval_array(0.0)[1, 0] == 1.0


def test_offdiagonal_mirror_conflict():
    text = MINIMAL + "1 2 = 0:1\n2 1 = 0:2\n"
    with pytest.raises(ConfigError, match="mirror"):
        ProblemConfig.from_string(text)


def test_matrix_entry_errors():
    bad_key = MINIMAL.replace("1 1 = 0:4", "1 = 0:4")
    with pytest.raises(ConfigError, match="'i j'"):
        ProblemConfig.from_string(bad_key)
    out_of_range = MINIMAL + "3 1 = 0:1\n"
    with pytest.raises(ConfigError, match="outside"):
        ProblemConfig.from_string(out_of_range)
    bad_term = MINIMAL.replace("0:4", "4")
    with pytest.raises(ConfigError, match="power:coefficient"):
        ProblemConfig.from_string(bad_term)
    bad_power = MINIMAL.replace("0:4", "x:4")
    with pytest.raises(ConfigError, match="power"):
        ProblemConfig.from_string(bad_power)
    neg_power = MINIMAL.replace("0:4", "-1:4")
    with pytest.raises(ConfigError, match="negative power"):
        ProblemConfig.from_string(neg_power)
    bad_coeff = MINIMAL.replace("0:4", "0:sqrte")
    with pytest.raises(ConfigError, match="sqrte"):
        ProblemConfig.from_string(bad_coeff)
    empty = MINIMAL.replace("0:4", "")
    with pytest.raises(ConfigError, match="empty polynomial"):
        ProblemConfig.from_string(empty)


def test_problem_section_errors():
    with pytest.raises(ConfigError, match="missing"):
        ProblemConfig.from_string("[matrix]\n1 1 = 0:1\n")
    with pytest.raises(ConfigError, match="format_version"):
        ProblemConfig.from_string(MINIMAL.replace("format_version = 1",
                                                  "format_version = 7"))
    with pytest.raises(ConfigError, match="format_version"):
        ProblemConfig.from_string(MINIMAL.replace("format_version = 1\n", ""))
    with pytest.raises(ConfigError, match="positive"):
        ProblemConfig.from_string(MINIMAL.replace("n = 2", "n = 0"))
    swapped = MINIMAL.replace("lambda_minus = -1", "lambda_minus = 2")
    with pytest.raises(ConfigError, match="below"):
        ProblemConfig.from_string(swapped)
    with pytest.raises(ConfigError, match="matrix"):
        ProblemConfig.from_string(MINIMAL.split("[matrix]")[0])


def test_scaled_requires_pure_quadratic():
    text = MINIMAL.replace("[problem]", "[problem]\nscaled = true")
    with pytest.raises(ConfigError, match="scaled"):
        ProblemConfig.from_string(text)
    ok = """\
[problem]
format_version = 1
n = 1
lambda_minus = 0.4
lambda_plus = 1.6
scaled = true

[matrix]
1 1 = 2:4
"""
    cfg = ProblemConfig.from_string(ok)
    assert cfg.scaled
    assert cfg.problem().scaled_base_matrix().entries[0, 0] == 4.0


def test_perturbation_parsing():
    text = MINIMAL + "\n[perturbation]\nkind = kepler\na = 2\nscale = lambda_squared\n"
    cfg = ProblemConfig.from_string(text)
    assert cfg.perturbation.kind == "kepler"
    assert cfg.perturbation.a == 2.0
    assert cfg.perturbation.scale == "lambda_squared"
    with pytest.raises(ConfigError, match="positive"):
        ProblemConfig.from_string(text.replace("a = 2", "a = 0"))
    with pytest.raises(ConfigError, match="scale"):
        ProblemConfig.from_string(text.replace("lambda_squared", "cubic"))
    with pytest.raises(ConfigError, match="kind"):
        ProblemConfig.from_string(text.replace("kepler", "magnetic"))


def test_index_rule_parsing():
    builtin = MINIMAL + "\n[index]\nrule = builtin\n"
    assert ProblemConfig.from_string(builtin).index_rule.kind == "builtin"
    value = MINIMAL + "\n[index]\nrule = value\nvalue = -1\n"
    cfg = ProblemConfig.from_string(value)
    assert cfg.index_rule.ind(np.eye(2), 0.0) == -1
    with pytest.raises(ConfigError, match="value"):
        ProblemConfig.from_string(MINIMAL + "\n[index]\nrule = value\n")
    with pytest.raises(ConfigError, match="rule"):
        ProblemConfig.from_string(MINIMAL + "\n[index]\nrule = magic\n")


def test_options_validation():
    with pytest.raises(ConfigError, match="tol"):
        ProblemConfig.from_string(MINIMAL + "\n[options]\ntol = 0\n")
    with pytest.raises(ConfigError, match="grid"):
        ProblemConfig.from_string(MINIMAL + "\n[options]\ngrid = 1\n")
    with pytest.raises(ConfigError, match="modes"):
        ProblemConfig.from_string(MINIMAL + "\n[options]\nmodes = 0\n")
    cfg = ProblemConfig.from_string(
        MINIMAL + "\n[options]\ntol = 1e-8\ngrid = 128\nmodes = 24\n")
    assert (cfg.tol, cfg.grid, cfg.modes) == (1e-8, 128, 24)


def test_critical_points_parsing():
    text = MINIMAL + "\n[critical_points]\nOrigin = 2,1 1,3\nsaddle =\n"
    cfg = ProblemConfig.from_string(text)
    assert set(cfg.critical_points) == {"Origin", "saddle"}  # case preserved
    assert cfg.critical_points["Origin"] == RepDecomposition(((2, 1), (1, 3)))
    assert cfg.critical_points["saddle"] == RepDecomposition(())
    with pytest.raises(ConfigError, match="mult,freq"):
        ProblemConfig.from_string(MINIMAL + "\n[critical_points]\np = 1:2\n")


def test_flags_parsing():
    text = MINIMAL + "\n[flags]\nzero_set_bounded = true\nextra = no\n"
    cfg = ProblemConfig.from_string(text)
    assert cfg.flags == {"zero_set_bounded": True, "extra": False}
    with pytest.raises(ConfigError, match="boolean"):
        ProblemConfig.from_string(MINIMAL + "\n[flags]\nx = maybe\n")


def test_inline_comments_are_stripped():
    text = MINIMAL.replace("1 1 = 0:4", "1 1 = 0:4  # asymptotic block")
    assert ProblemConfig.from_string(text).family.eval_array(0.0)[0, 0] == 4.0


def test_from_file(tmp_path):
    path = tmp_path / "problem.cfg"
    path.write_text(MINIMAL)
    cfg = ProblemConfig.from_file(path)
    assert cfg.n == 2
