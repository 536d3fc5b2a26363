"""Decimal rendering that cuts digits instead of rounding them."""

from __future__ import annotations

import math
from decimal import ROUND_HALF_UP, Decimal
from fractions import Fraction


def trunc_decimals(x: float, places: int) -> str:
    """Fixed point with ``places`` digits, the rest dropped: 0.15291187685 -> '0.1529118768'."""
    q = Fraction(x)
    scale = 10**places
    n = math.floor(abs(q) * scale)
    sign = "-" if q < 0 and n else ""
    if places == 0:
        return f"{sign}{n}"
    return f"{sign}{n // scale}.{n % scale:0{places}d}"


def trunc_sci(x: float, digits: int = 3) -> str:
    """Scientific form like '1.35e-4' with ``digits`` significant figures, cut."""
    if x == 0:
        return "0"
    q = abs(Fraction(x))
    e = math.floor(math.log10(q))
    # log10 can be off by one near powers of ten
    if Fraction(10) ** e > q:
        e -= 1
    elif Fraction(10) ** (e + 1) <= q:
        e += 1
    mant = q / Fraction(10) ** e
    n = math.floor(mant * 10 ** (digits - 1))
    body = str(n) if digits == 1 else f"{n // 10 ** (digits - 1)}.{n % 10 ** (digits - 1):0{digits - 1}d}"
    return f"{'-' if x < 0 else ''}{body}e{e}"


def round_decimals(x: float, places: int) -> str:
    """Fixed point rounded half-up on the exact binary value."""
    q = Decimal(x).quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_UP)
    return f"{q:.{places}f}"


def round_sci(x: float, digits: int = 3) -> str:
    """Like trunc_sci but rounded half-up."""
    if x == 0:
        return "0"
    d = Decimal(x)
    e = d.adjusted()
    mant = (abs(d) / Decimal(10) ** e).quantize(Decimal(1).scaleb(-(digits - 1)), rounding=ROUND_HALF_UP)
    if mant >= 10:
        mant, e = (mant / 10).quantize(Decimal(1).scaleb(-(digits - 1)), rounding=ROUND_HALF_UP), e + 1
    return f"{'-' if x < 0 else ''}{mant}e{e}"


def agrees(x: float, printed: str) -> bool:
    """True when ``printed`` is ``x`` cut or rounded to the digits shown."""
    if "e" in printed:
        digits = len(printed.split("e")[0].lstrip("-").replace(".", ""))
        return printed in (trunc_sci(x, digits), round_sci(x, digits))
    places = len(printed.split(".")[1]) if "." in printed else 0
    return printed in (trunc_decimals(x, places), round_decimals(x, places))
