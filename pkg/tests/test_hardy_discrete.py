import csv
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from agelab.baker_core import WalshExpansion, koopman_apply, random_expansion
from agelab.errors import AgeUndefinedForEquilibrium, EmptyExpansion, InvalidSubspace
from agelab.hardy_discrete import (
    absorption_time,
    convergence_table,
    minus_norm_after,
    split_by_age,
    verify_forward_stability,
    write_convergence_csv,
)

alpha = WalshExpansion.basis


def test_split_positive_index():
    s = split_by_age(alpha(1))
    assert s.plus == alpha(1) and not s.minus


def test_split_nonpositive_and_constant():
    rho = alpha(-2) + alpha()
    s = split_by_age(rho)
    assert not s.plus and s.minus == rho


def test_split_mixed_set_goes_by_max():
    s = split_by_age(alpha(-1, 2))
    assert s.plus == alpha(-1, 2) and not s.minus


@settings(max_examples=50)
@given(st.integers(0, 2**32 - 1))
def test_split_is_orthogonal_decomposition(seed):
    rho = random_expansion(np.random.default_rng(seed), mean_zero=False)
    s = split_by_age(rho)
    assert s.reconstruct() == rho
    assert s.plus.norm_squared() + s.minus.norm_squared() == rho.norm_squared()


@pytest.mark.parametrize("rho", [alpha(1), alpha(1, 5)])
def test_forward_stability_examples(rho):
    assert verify_forward_stability(rho)


def test_forward_stability_rejects_minus_terms():
    with pytest.raises(InvalidSubspace):
        verify_forward_stability(alpha(0))


def test_minus_norm_examples():
    assert minus_norm_after(alpha(-3), 3) == 1
    assert minus_norm_after(alpha(-3), 4) == 0
    rho = (alpha(0) + alpha(1)) * Fraction(1, 2)
    assert minus_norm_after(rho, 1) == 0
    for n in range(6):
        assert minus_norm_after(alpha(), n) == 1


def test_minus_norm_rejects_negative_n():
    with pytest.raises(ValueError):
        minus_norm_after(alpha(1), -1)


def test_absorption_examples():
    assert absorption_time(alpha(-3)) == 4
    assert absorption_time(alpha(2)) == 0
    with pytest.raises(AgeUndefinedForEquilibrium):
        absorption_time(alpha() + alpha(1))
    with pytest.raises(EmptyExpansion):
        absorption_time(WalshExpansion())


@settings(max_examples=60)
@given(st.integers(0, 2**32 - 1))
def test_absorption_matches_brute_force_scan(seed):
    rho = random_expansion(np.random.default_rng(seed), max_terms=16)
    n_star = absorption_time(rho)
    scan = [split_by_age(koopman_apply(rho, n)).minus.norm_squared() for n in range(n_star + 4)]
    assert all(v == 0 for v in scan[n_star:])
    if n_star >= 1:
        assert scan[n_star - 1] > 0


def test_convergence_table_and_csv(tmp_path):
    rho = alpha(-3, 0) + alpha(-1) * Fraction(1, 2)
    rows = convergence_table(rho, 4)
    assert [r[0] for r in rows] == list(range(5))
    minus = [r[1] for r in rows]
    assert minus == sorted(minus, reverse=True)
    assert minus[-1] == 0
    for _, m, p in rows:
        assert math.isclose(math.hypot(m, p), rho.norm(), rel_tol=1e-15)
    path = write_convergence_csv(tmp_path / "conv.csv", rows)
    with path.open() as fh:
        read = list(csv.reader(fh))
    assert read[0] == ["n", "minus_norm", "plus_norm"]
    assert [float(v) for v in read[1][1:]] == list(rows[0][1:])
