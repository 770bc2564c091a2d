# -*- coding: utf-8 -*-
"""
Fixed-point logarithm and exponential

Values are Python integers in 1/2^32 units. Both functions use the
shift-add decomposition over the factors (1 + 2^-i), whose logarithms are
tabulated once at import as integers.
"""

import math
from typing import Tuple

Q32_SHIFT = 32
Q32_ONE = 1 << Q32_SHIFT
Q16_SHIFT = 16
Q16_ONE = 1 << Q16_SHIFT

# ln(1 + 2^-i) rounds to zero in Q32 from i = 34 on
_TABLE_SIZE = 30

LN2_Q32 = round(math.log(2) * Q32_ONE)
# LN_TABLE[i] = ln(1 + 2^-i), entry 0 unused
LN_TABLE: Tuple[int, ...] = (0,) + tuple(
    round(math.log1p(2.0 ** -i) * Q32_ONE) for i in range(1, _TABLE_SIZE + 1)
)


def ln_ratio_q32(num: int, den: int) -> int:
    """ln(num / den) in Q32 for positive integers num and den"""
    if num <= 0 or den <= 0:
        raise ValueError(f"logarithm of a non-positive ratio {num}/{den}")

    # bring the ratio into [1, 2) as num / (den * 2^k)
    k = num.bit_length() - den.bit_length()
    if k >= 0:
        scaled_den = den << k
        scaled_num = num
    else:
        scaled_den = den
        scaled_num = num << -k
    if scaled_num < scaled_den:
        k -= 1
        scaled_num <<= 1
    y = (scaled_num << Q32_SHIFT) // scaled_den

    acc = k * LN2_Q32
    product = Q32_ONE
    for i in range(1, _TABLE_SIZE + 1):
        while True:
            candidate = product + (product >> i)
            if candidate > y or candidate == product:
                break
            product = candidate
            acc += LN_TABLE[i]
    return acc


def exp_q32(x: int) -> int:
    """exp(x) in Q32 for x in Q32 (either sign)"""
    k, r = divmod(x, LN2_Q32)
    product = Q32_ONE
    for i in range(1, _TABLE_SIZE + 1):
        while r >= LN_TABLE[i] > 0:
            r -= LN_TABLE[i]
            product += product >> i
    return product << k if k >= 0 else product >> -k


def half_log_odds_q16(good: int, bad: int) -> int:
    """alpha = 1/2 ln(good / bad), rounded to Q16 and at least one unit"""
    alpha = (ln_ratio_q32(good, bad) + (1 << Q16_SHIFT)) >> (Q32_SHIFT - Q16_SHIFT + 1)
    return max(1, alpha)


def q16_to_q32(value: int) -> int:
    return value << (Q32_SHIFT - Q16_SHIFT)
