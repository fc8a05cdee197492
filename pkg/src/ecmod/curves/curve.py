import math

import attr
import numpy as np

from ecmod.curves.arith import (
    INFINITY,
    CurvePoint,
    is_on_curve,
    is_probable_prime,
    scalar_mul,
)
from ecmod.errors import (
    BasePointOffCurve,
    CurveInvalid,
    FieldTooLarge,
    SingularCurve,
    WrongOrder,
)

ENUMERATION_BOUND = 10**6


def _check_coordinate(instance, attribute, value: int) -> None:
    if not 0 <= value < instance.p:
        raise CurveInvalid(
            f"{attribute.name}={value} is not reduced modulo p={instance.p}"
        )


@attr.s(frozen=True, slots=True)
class CurveParams:
    """Parameters of ``y^2 = x^3 + a x + b`` over F_p with base point G.

    Args:
        str name: Identifier used in bank and stream files.
        int p: Field prime.
        int a: Curve coefficient, reduced modulo p.
        int b: Curve coefficient, reduced modulo p.
        int gx: Base point x.
        int gy: Base point y.
        int n: Prime order of the base point.
    """

    name: str = attr.ib()
    p: int = attr.ib()
    a: int = attr.ib(validator=_check_coordinate)
    b: int = attr.ib(validator=_check_coordinate)
    gx: int = attr.ib(validator=_check_coordinate)
    gy: int = attr.ib(validator=_check_coordinate)
    n: int = attr.ib()

    @p.validator
    def _validate_p(self, _attribute, value: int) -> None:
        if value <= 3:
            raise CurveInvalid(f"p must be a prime above 3, got {value}")

    @property
    def G(self) -> CurvePoint:
        return CurvePoint(self.gx, self.gy)

    @property
    def discriminant(self) -> int:
        return (4 * self.a**3 + 27 * self.b**2) % self.p


def validate_curve(
    curve: CurveParams, check_prime: bool = True
) -> CurveParams:
    """Accept a curve iff it is non-singular, G lies on it and n * G = O.

    Args:
        curve: Parameters to check.
        check_prime: Run the probabilistic primality test on p and n; named
            curves may skip it.

    Raises:
        CurveInvalid: p (or n) is not prime.
        SingularCurve: The discriminant vanishes.
        BasePointOffCurve: G does not satisfy the curve equation.
        WrongOrder: n is not a prime with n * G = O.
    """
    if check_prime and not is_probable_prime(curve.p):
        raise CurveInvalid(f"p={curve.p} is not prime")
    if curve.discriminant == 0:
        raise SingularCurve(f"{curve.name}: 4a^3 + 27b^2 = 0 mod p")
    if not is_on_curve(curve.G, curve):
        raise BasePointOffCurve(f"{curve.name}: G is not on the curve")
    if curve.n < 2 or (check_prime and not is_probable_prime(curve.n)):
        raise WrongOrder(f"{curve.name}: n={curve.n} is not prime")
    if not scalar_mul(curve.n, curve.G, curve).is_infinity:
        raise WrongOrder(f"{curve.name}: n * G is not the point at infinity")
    return curve


def _curve_values(p: int, a: int, b: int) -> tuple[np.ndarray, np.ndarray]:
    xs = np.arange(p, dtype=np.int64)
    rhs = (xs * xs % p * xs + a * xs + b) % p
    return xs, rhs


def _square_roots(p: int) -> dict[int, list[int]]:
    ys = np.arange(p, dtype=np.int64)
    squares = ys * ys % p
    order = np.argsort(squares, kind="stable")
    roots: dict[int, list[int]] = {}
    for y in order.tolist():
        roots.setdefault(int(squares[y]), []).append(y)
    return roots


def count_points(p: int, a: int, b: int) -> int:
    """Group order #E (point at infinity included) by an x sweep."""
    if p >= ENUMERATION_BOUND:
        raise FieldTooLarge(f"p={p} exceeds {ENUMERATION_BOUND}")
    _, rhs = _curve_values(p, a, b)
    is_square = np.zeros(p, dtype=bool)
    ys = np.arange(p, dtype=np.int64)
    is_square[ys * ys % p] = True
    zero = rhs == 0
    return 1 + int(zero.sum()) + 2 * int((is_square[rhs] & ~zero).sum())


def enumerate_points(
    curve: CurveParams, bound: int = ENUMERATION_BOUND
) -> list[CurvePoint]:
    """Every affine point of a small curve, followed by the point at infinity.

    Raises:
        FieldTooLarge: p is not below ``bound``.
        SingularCurve: The curve is singular.
    """
    if curve.p >= bound:
        raise FieldTooLarge(f"p={curve.p} exceeds the bound {bound}")
    if curve.discriminant == 0:
        raise SingularCurve(f"{curve.name}: 4a^3 + 27b^2 = 0 mod p")
    xs, rhs = _curve_values(curve.p, curve.a, curve.b)
    roots = _square_roots(curve.p)
    points = [
        CurvePoint(int(x), y)
        for x, value in zip(xs.tolist(), rhs.tolist())
        for y in roots.get(value, ())
    ]
    points.append(INFINITY)
    return points


def hasse_interval(p: int) -> tuple[float, float]:
    spread = 2 * math.sqrt(p)
    return p + 1 - spread, p + 1 + spread


def find_test_curve(p: int, name: str | None = None) -> CurveParams:
    """First (a, b) over F_p, in lexicographic order, with prime group order.

    The generator is the affine point with the smallest x, then smallest y.
    Since the order is prime, any affine point generates the whole group.
    """
    if not is_probable_prime(p) or p <= 3:
        raise CurveInvalid(f"p={p} is not a prime above 3")
    roots = _square_roots(p)
    for a in range(1, p):
        for b in range(1, p):
            if (4 * a**3 + 27 * b**2) % p == 0:
                continue
            order = count_points(p, a, b)
            if not is_probable_prime(order):
                continue
            xs, rhs = _curve_values(p, a, b)
            for x, value in zip(xs.tolist(), rhs.tolist()):
                if value in roots:
                    y = roots[value][0]
                    return CurveParams(
                        name=name or f"test{p}",
                        p=p,
                        a=a,
                        b=b,
                        gx=int(x),
                        gy=y,
                        n=order,
                    )
    raise CurveInvalid(f"no prime-order curve found over F_{p}")
