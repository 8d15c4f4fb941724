import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qkolab.errors import InputError
from qkolab.prefix import PrefixCode, shannon_code


def test_half_quarter_quarter():
    code = shannon_code([0.5, 0.25, 0.25])
    assert [c.to_text() for c in code.codewords] == ["0", "10", "11"]
    assert code.kraft_sum() == 1.0
    assert code.is_prefix_free()


def test_single_symbol_degenerates():
    code = shannon_code([1.0])
    assert code.lengths == (0,)
    assert code.kraft_sum() == 1.0


def test_dyadic_lengths_are_exact():
    code = shannon_code([2.0**-k for k in range(1, 8)] + [2.0**-7])
    assert code.lengths == (1, 2, 3, 4, 5, 6, 7, 7)


def test_validation():
    with pytest.raises(InputError):
        shannon_code([])
    with pytest.raises(InputError):
        shannon_code([0.25, 0.5, 0.25])  # not descending
    with pytest.raises(InputError):
        shannon_code([0.5, 0.5, 0.5])  # sums to 1.5
    with pytest.raises(InputError):
        shannon_code([1.0, 0.0])  # zero probability


@st.composite
def distributions(draw):
    weights = draw(st.lists(st.floats(0.01, 1.0), min_size=1, max_size=24))
    total = sum(weights)
    return sorted((w / total for w in weights), reverse=True)


@given(distributions())
def test_fuzzed_distributions_are_prefix_free(p):
    code = shannon_code(p)
    assert code.kraft_sum() <= 1.0 + 1e-12
    assert code.is_prefix_free()
    for prob, length in zip(p, code.lengths):
        assert length <= math.ceil(-math.log2(prob) + 1e-9)


def test_prefix_free_detection():
    from qkolab.bits import BitString

    bad = PrefixCode((BitString("0"), BitString("01")), (1, 2))
    assert not bad.is_prefix_free()
