import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from qkolab.bits import BitString
from qkolab.compressor import HEADER_BITS, METHOD_ID, kcl_upper


def test_empty_string_is_header_only():
    s = kcl_upper(BitString(""))
    assert s.raw_length_bits == 0
    assert s.compressed_length_bits == HEADER_BITS
    assert s.method_id == METHOD_ID


def test_all_zero_kilobit_compresses_hard():
    s = kcl_upper(BitString.zeros(1000))
    assert s.raw_length_bits == 1000
    assert s.compressed_length_bits <= 100


def test_random_kilobit_is_incompressible():
    s = kcl_upper(BitString.random(1000, np.random.default_rng(1)))
    assert s.compressed_length_bits >= 900


def test_deterministic():
    w = BitString.random(4096, np.random.default_rng(2))
    assert kcl_upper(w) == kcl_upper(w)


def test_accepts_raw_bytes():
    assert kcl_upper(b"abc" * 100).raw_length_bits == 2400


@given(st.binary(max_size=2000))
def test_monotone_sanity(data):
    # compressed length is positive and bounded by raw plus format overhead
    s = kcl_upper(data)
    assert s.compressed_length_bits >= HEADER_BITS
    assert s.compressed_length_bits <= s.raw_length_bits + HEADER_BITS + 400
