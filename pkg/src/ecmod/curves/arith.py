"""Group law of short Weierstrass curves over prime fields.

Points are affine and immutable. Field elements are plain ``int`` values
kept in canonical form ``0 <= v < p``; every operation here reduces its
results modulo ``p``.
"""

from functools import lru_cache
from typing import TYPE_CHECKING, Iterable

import attr

from ecmod.errors import PointOffCurve

if TYPE_CHECKING:
    from ecmod.curves.curve import CurveParams

# deterministic for n < 3.3e24, a strong probable-prime test above that
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53)
WINDOW_BITS = 8


@attr.s(frozen=True, slots=True, repr=False)
class CurvePoint:
    """Affine point, or the point at infinity when both coordinates are None.

    Args:
        int x: Affine x coordinate in ``[0, p)``.
        int y: Affine y coordinate in ``[0, p)``.
    """

    x: int | None = attr.ib(default=None)
    y: int | None = attr.ib(default=None)

    @property
    def is_infinity(self) -> bool:
        return self.x is None

    def __repr__(self) -> str:
        if self.is_infinity:
            return "CurvePoint(O)"
        return f"CurvePoint({self.x}, {self.y})"


INFINITY = CurvePoint()


def mod_inv(value: int, p: int) -> int:
    """Inverse of ``value`` modulo ``p`` (extended Euclid)."""
    value %= p
    if value == 0:
        raise ZeroDivisionError("0 has no inverse modulo p")
    return pow(value, -1, p)


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with fixed bases; exact below 3.3e24."""
    if n < 2:
        return False
    for base in _MR_BASES:
        if n % base == 0:
            return n == base
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for base in _MR_BASES:
        x = pow(base, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_on_curve(point: CurvePoint, curve: "CurveParams") -> bool:
    if point.is_infinity:
        return True
    p = curve.p
    if not (0 <= point.x < p and 0 <= point.y < p):
        return False
    x, y = point.x, point.y
    return (y * y - x**3 - curve.a * x - curve.b) % p == 0


def negate(point: CurvePoint, curve: "CurveParams") -> CurvePoint:
    if point.is_infinity:
        return point
    return CurvePoint(point.x, (-point.y) % curve.p)


def point_add(
    P: CurvePoint, Q: CurvePoint, curve: "CurveParams", check: bool = False
) -> CurvePoint:
    """Chord-and-tangent sum of two points.

    Args:
        P: First summand.
        Q: Second summand.
        curve: Curve both points live on.
        check: Verify both inputs satisfy the curve equation first.

    Raises:
        PointOffCurve: ``check`` is set and an input is not on the curve.
    """
    if check:
        for point in (P, Q):
            if not is_on_curve(point, curve):
                raise PointOffCurve(f"{point!r} is not on {curve.name}")
    if P.is_infinity:
        return Q
    if Q.is_infinity:
        return P
    p = curve.p
    if P.x == Q.x:
        if (P.y + Q.y) % p == 0:
            return INFINITY
        lam = (3 * P.x * P.x + curve.a) * mod_inv(2 * P.y, p) % p
    else:
        lam = (Q.y - P.y) * mod_inv(Q.x - P.x, p) % p
    x = (lam * lam - P.x - Q.x) % p
    y = (lam * (P.x - x) - P.y) % p
    return CurvePoint(x, y)


def scalar_mul(k: int, P: CurvePoint, curve: "CurveParams") -> CurvePoint:
    """Left-to-right double-and-add; ``0 * P`` is the point at infinity."""
    if k < 0:
        raise ValueError(f"Scalar must be non-negative, got {k}.")
    result = INFINITY
    for bit in bin(k)[2:]:
        result = point_add(result, result, curve)
        if bit == "1":
            result = point_add(result, P, curve)
    return result


def _jacobian_double(X: int, Y: int, Z: int, a: int, p: int):
    if Z == 0 or Y == 0:
        return 1, 1, 0
    YY = Y * Y % p
    ZZ = Z * Z % p
    W = (3 * X * X + a * ZZ * ZZ) % p
    V = 4 * X * YY % p
    X3 = (W * W - 2 * V) % p
    Y3 = (W * (V - X3) - 8 * YY * YY) % p
    Z3 = 2 * Y * Z % p
    return X3, Y3, Z3


def _jacobian_add_affine(
    X: int, Y: int, Z: int, x: int, y: int, a: int, p: int
):
    if Z == 0:
        return x, y, 1
    ZZ = Z * Z % p
    U = x * ZZ % p
    S = y * Z * ZZ % p
    H = (U - X) % p
    R = (S - Y) % p
    if H == 0:
        if R == 0:
            return _jacobian_double(X, Y, Z, a, p)
        return 1, 1, 0
    HH = H * H % p
    HHH = H * HH % p
    V = X * HH % p
    X3 = (R * R - HHH - 2 * V) % p
    Y3 = (R * (V - X3) - Y * HHH) % p
    Z3 = Z * H % p
    return X3, Y3, Z3


@lru_cache(maxsize=8)
def _base_table(curve: "CurveParams") -> tuple:
    # table[j][d] = d * 2^(8j) * G, affine; entry 0 unused
    size = 1 << WINDOW_BITS
    windows = (curve.n.bit_length() + WINDOW_BITS - 1) // WINDOW_BITS
    table = []
    base = curve.G
    for _ in range(windows):
        row: list[tuple[int, int] | None] = [None]
        multiple = INFINITY
        for _ in range(1, size):
            multiple = point_add(multiple, base, curve)
            if multiple.is_infinity:
                row.append(None)
            else:
                row.append((multiple.x, multiple.y))
        table.append(tuple(row))
        base = point_add(multiple, base, curve)
    return tuple(table)


def multiply_base(k: int, curve: "CurveParams") -> CurvePoint:
    """``k * G`` through a cached fixed-base window table.

    Equivalent to ``scalar_mul(k, curve.G, curve)`` but needs one modular
    inversion per call instead of one per group operation.
    """
    if k < 0:
        raise ValueError(f"Scalar must be non-negative, got {k}.")
    k %= curve.n
    table = _base_table(curve)
    p, a = curve.p, curve.a
    X, Y, Z = 1, 1, 0
    mask = (1 << WINDOW_BITS) - 1
    j = 0
    while k:
        digit = k & mask
        if digit:
            entry = table[j][digit]
            if entry is not None:
                X, Y, Z = _jacobian_add_affine(X, Y, Z, *entry, a, p)
        k >>= WINDOW_BITS
        j += 1
    if Z == 0:
        return INFINITY
    z_inv = mod_inv(Z, p)
    z_inv2 = z_inv * z_inv % p
    return CurvePoint(X * z_inv2 % p, Y * z_inv2 * z_inv % p)


def multiply_base_many(
    scalars: Iterable[int], curve: "CurveParams"
) -> list[CurvePoint]:
    return [multiply_base(k, curve) for k in scalars]
