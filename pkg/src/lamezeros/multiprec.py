"""Small helpers around gmpy2 binary floating point."""
from __future__ import annotations

import gmpy2
from gmpy2 import mpfr


def working_precision(k: int) -> int:
    """Bits carried for degree-k coefficient work.

    The monomial coefficients of a Stieltjes polynomial span roughly k*log2(k)
    bits of dynamic range in the canonical frame; 64 + 6k bits covers that with
    room for the cancellation in remainder sequences.
    """
    return 64 + 6 * int(k)


def context(precision: int):
    return gmpy2.context(gmpy2.get_context(), precision=int(precision))


def to_mp(values):
    return [mpfr(v) for v in values]


def horner(c, x):
    """Value of sum c[i] x^i (ascending coefficients)."""
    v = c[-1]
    for a in c[-2::-1]:
        v = v * x + a
    return v


def horner2(c, x):
    """Value and first derivative."""
    v = c[-1]
    d = mpfr(0)
    for a in c[-2::-1]:
        d = d * x + v
        v = v * x + a
    return v, d


def sign(v) -> int:
    return (v > 0) - (v < 0)
