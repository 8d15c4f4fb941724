"""Shannon-style prefix coding over a sorted probability list."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .bits import BitString
from .errors import InputError

_NORM_TOL = 1e-9


@dataclass(frozen=True)
class PrefixCode:
    codewords: tuple[BitString, ...]
    lengths: tuple[int, ...]

    def kraft_sum(self) -> float:
        return sum(2.0**-l for l in self.lengths)

    def is_prefix_free(self) -> bool:
        texts = [c.to_text() for c in self.codewords]
        for i, a in enumerate(texts):
            for j, b in enumerate(texts):
                if i != j and b.startswith(a):
                    return False
        return True


def shannon_code(p: Sequence[float]) -> PrefixCode:
    """Codeword i = first ceil(log2(1/p_i)) bits of the cumulative sum
    before i.

    Requires p sorted descending, strictly positive, summing to 1. The
    ceiling length together with the exclusive cumulative sum makes the
    result provably prefix-free; a single symbol degenerates to the empty
    codeword (length 0, Kraft sum 1).
    """
    if not p:
        raise InputError("probability list is empty")
    probs = [float(v) for v in p]
    if any(v <= 0 for v in probs):
        raise InputError("probabilities must be strictly positive")
    if any(probs[i] < probs[i + 1] for i in range(len(probs) - 1)):
        raise InputError("probabilities must be sorted descending")
    if abs(sum(probs) - 1.0) > _NORM_TOL:
        raise InputError(f"probabilities sum to {sum(probs)}, not 1")

    codewords = []
    lengths = []
    cumulative = 0.0
    for prob in probs:
        # guard against log2(1/2^-k) landing just above an integer
        length = max(0, math.ceil(-math.log2(prob) - 1e-12))
        frac = cumulative
        bits = []
        for _ in range(length):
            frac *= 2
            bit = int(frac)
            bits.append(bit)
            frac -= bit
        codewords.append(BitString(bits))
        lengths.append(length)
        cumulative += prob
    return PrefixCode(tuple(codewords), tuple(lengths))
