"""Intersection numbers of invariant divisors with invariant curves and
surfaces, and the second Chern character test built on them.

On a smooth complete toric 4-fold the orbit closure of a 3-dimensional cone
is an invariant curve and that of a 2-dimensional cone an invariant surface.
For a ray w and a cone not containing it, the divisor D_w meets the orbit
closure transversally: the product is the orbit closure of the enlarged cone
when the enlarged set spans a cone, and zero otherwise. When w lies in the
cone, D_w is first replaced by the linearly equivalent divisor

    D_w - sum_j <u, v_j> D_j

where u is a rational functional with <u, v_w> = 1 and <u, v_j> = 0 on the
cone's other generators; the replacement meets the orbit closure properly,
reducing to the transversal case. Any valid u gives the same intersection
numbers.

The second Chern character of the tangent bundle is half the sum of the
squares of the invariant divisors, so its value on an invariant surface is
assembled from divisor-curve numbers. A Fano variety is called 2-Fano when
these values are positive on every surface, and has nef second Chern
character when they are all nonnegative; positivity on the invariant
surfaces settles the question for all surfaces.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .exactlin import dot, solve
from .fan import Cone, Fan, _cone

CurveCycle = dict  # 3-cone -> Fraction, zero coefficients dropped

TWO_FANO = "two_fano"
NEF_NOT_TWO_FANO = "nef_not_two_fano"
NOT_NEF = "not_nef"

UFunction = Callable[[Fan, int, Cone], tuple]


@dataclass
class Ch2Report:
    """Second-Chern-character values on every invariant surface of a fan."""

    values: dict[Cone, Fraction]
    min_value: Fraction
    witness: Cone
    classification: str


def dual_functional(fan: Fan, w: int, cone: Iterable[int]) -> tuple:
    """Rational functional equal to 1 on ray ``w``, 0 on the cone's others.

    The cone must be a face containing ``w``. For cones of fewer than four
    rays the system is underdetermined and the canonical solution is
    returned (free coordinates zero), deterministic but otherwise arbitrary:
    downstream intersection numbers do not depend on the choice.
    """
    cone = _cone(cone)
    if w not in cone:
        raise ValueError(f"ray {w} is not a generator of cone {cone}")
    rows = [fan.ray(j) for j in cone]
    rhs = [1 if j == w else 0 for j in cone]
    sol = solve(rows, rhs)
    if sol is None:
        raise RuntimeError(f"generators of {cone} are dependent; fan is corrupt")
    return sol[0]


def divisor_dot_curve(fan: Fan, w: int, tau: Iterable[int], u_fn: UFunction | None = None) -> Fraction:
    """Intersection number of divisor ``w`` with the curve of 3-cone ``tau``.

    Results for the default functional are memoized on the fan, since each
    pair is revisited by many surface computations. ``u_fn`` overrides the
    functional choice (bypassing the cache), which is useful for checking
    that the choice does not matter.
    """
    tau = _cone(tau)
    if w not in tau:
        return Fraction(1) if fan.is_maxcone(tau + (w,)) else Fraction(0)
    if u_fn is None:
        key = (w, tau)
        cached = fan._curve_num.get(key)
        if cached is not None:
            return cached
        u = dual_functional(fan, w, tau)
    else:
        u = u_fn(fan, w, tau)
    total = Fraction(0)
    for n in range(1, fan.ray_count + 1):
        if n not in tau and fan.is_maxcone(tau + (n,)):
            total -= dot(u, fan.ray(n))
    if u_fn is None:
        fan._curve_num[key] = total
    return total


def divisor_dot_surface(fan: Fan, w: int, sigma: Iterable[int], u_fn: UFunction | None = None) -> CurveCycle:
    """Divisor ``w`` times the surface of 2-cone ``sigma``, as a curve cycle.

    The cycle maps 3-cones to rational coefficients; an empty dict is the
    zero cycle. For ``w`` outside ``sigma`` the product is the enlarged cone
    with coefficient 1 when it spans, zero when it does not.
    """
    sigma = _cone(sigma)
    if w not in sigma:
        enlarged = _cone(sigma + (w,))
        return {enlarged: Fraction(1)} if fan.is_face(enlarged) else {}
    u = dual_functional(fan, w, sigma) if u_fn is None else u_fn(fan, w, sigma)
    cycle: CurveCycle = {}
    for n in range(1, fan.ray_count + 1):
        if n in sigma:
            continue
        enlarged = _cone(sigma + (n,))
        if fan.is_face(enlarged):
            coeff = -Fraction(dot(u, fan.ray(n)))
            if coeff != 0:
                cycle[enlarged] = coeff
    return cycle


def ch2_dot_surface(fan: Fan, sigma: Iterable[int], u_fn: UFunction | None = None) -> Fraction:
    """Value of ch2 of the tangent bundle on the surface of ``sigma``.

    Computed as half the sum over all rays w of D_w . (D_w . V(sigma)),
    pairing the curve cycle of each square against the divisor again.
    Always a half-integer on a smooth fan.
    """
    sigma = _cone(sigma)
    total = Fraction(0)
    for w in range(1, fan.ray_count + 1):
        for tau, coeff in divisor_dot_surface(fan, w, sigma, u_fn).items():
            total += coeff * divisor_dot_curve(fan, w, tau, u_fn)
    return total / 2


def anticanonical_degree(fan: Fan, tau: Iterable[int]) -> Fraction:
    """Degree of the anticanonical divisor on the curve of 3-cone ``tau``.

    The anticanonical class is the sum of all invariant divisors, so this is
    the sum of the divisor-curve numbers; positive on every curve of a Fano
    fan.
    """
    tau = _cone(tau)
    return sum(
        (divisor_dot_curve(fan, w, tau) for w in range(1, fan.ray_count + 1)),
        Fraction(0),
    )


def _classification(min_value: Fraction) -> str:
    if min_value > 0:
        return TWO_FANO
    if min_value == 0:
        return NEF_NOT_TWO_FANO
    return NOT_NEF


def classify(fan: Fan) -> Ch2Report:
    """Evaluate ch2 on every invariant surface and classify the variety.

    The witness is the lexicographically least 2-cone attaining the minimum.
    Expects a validated smooth complete Fano fan.
    """
    values = {sigma: ch2_dot_surface(fan, sigma) for sigma in fan.cones2}
    witness = min(fan.cones2, key=lambda sigma: (values[sigma], sigma))
    min_value = values[witness]
    return Ch2Report(values, min_value, witness, _classification(min_value))
