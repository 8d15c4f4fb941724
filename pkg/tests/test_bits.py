import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qkolab.bitio import BitReader, BitWriter
from qkolab.bits import BitString
from qkolab.errors import DecodeError, InputError

bit_lists = st.lists(st.integers(0, 1), max_size=200)


@given(bit_lists)
def test_text_roundtrip(bits):
    b = BitString(bits)
    assert BitString(b.to_text()) == b
    assert len(b) == len(bits)


@given(bit_lists)
def test_packed_roundtrip(bits):
    b = BitString(bits)
    assert BitString.from_packed(b.packed, len(b)) == b


@given(st.integers(0, 2**30), st.integers(31, 40))
def test_int_roundtrip(value, width):
    assert BitString.from_int(value, width).to_int() == value


@given(bit_lists, bit_lists)
def test_concat_and_xor(a, b):
    sa, sb = BitString(a), BitString(b)
    assert (sa + sb).to_text() == sa.to_text() + sb.to_text()
    if len(a) == len(b):
        assert (sa ^ sb).bits().tolist() == [x ^ y for x, y in zip(a, b)]


def test_padding_bits_do_not_leak():
    assert BitString("101").packed == b"\xa0"
    assert BitString.from_packed(b"\xa0", 3).to_text() == "101"


def test_validation():
    with pytest.raises(InputError):
        BitString("10x")
    with pytest.raises(InputError):
        BitString([0, 2])
    with pytest.raises(InputError):
        BitString.from_packed(b"\x00", 9)
    with pytest.raises(InputError):
        BitString("01") ^ BitString("011")


def test_zeros_random_weight():
    assert BitString.zeros(10).weight() == 0
    r = BitString.random(1000, np.random.default_rng(0))
    assert 400 < r.weight() < 600
    assert BitString.random(64, np.random.default_rng(5)) == BitString.random(
        64, np.random.default_rng(5)
    )


@given(st.lists(st.tuples(st.integers(0, 2**16 - 1), st.integers(17, 24)), max_size=30))
def test_bitio_roundtrip(fields):
    w = BitWriter()
    for value, width in fields:
        w.write_uint(value, width)
    r = BitReader(w.to_bytes())
    for value, width in fields:
        assert r.read_uint(width) == value


def test_bitio_signed_and_align():
    w = BitWriter()
    w.write_int(-5, 8)
    w.write_int(5, 8)
    w.write_uint(1, 1)
    w.align_to_byte()
    w.write_uint(0xAB, 8)
    r = BitReader(w.to_bytes())
    assert r.read_int(8) == -5
    assert r.read_int(8) == 5
    assert r.read_uint(1) == 1
    r.align_to_byte()
    assert r.read_uint(8) == 0xAB


def test_bitio_truncation_reports_offset():
    r = BitReader(b"\xff")
    r.read_uint(6)
    with pytest.raises(DecodeError) as exc:
        r.read_uint(6)
    assert exc.value.offset == 6
