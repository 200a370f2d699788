"""Shared test machinery: functional perturbations and an independent
divisor-curve oracle built on wall relations only."""

from fractions import Fraction

from toricfano.chern import dual_functional
from toricfano.exactlin import nullspace, solve


def perturbed_functional(fan, w, cone, rng):
    """The canonical functional plus a random null-space element.

    The null space is {x : <x, v_j> = 0 for every generator v_j}, so any
    perturbed functional still satisfies the defining constraints.
    """
    cone = tuple(sorted(cone))
    base = dual_functional(fan, w, cone)
    basis = nullspace([fan.ray(j) for j in cone])
    if not basis:
        return base
    coeffs = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in basis]
    offset = [sum(c * v[k] for c, v in zip(coeffs, basis)) for k in range(4)]
    perturbed = tuple(x + o for x, o in zip(base, offset))
    return perturbed


def override_at(target_w, target_cone, replacement):
    """A functional provider that swaps in `replacement` at one pair."""
    target_cone = tuple(sorted(target_cone))

    def u_fn(fan, w, cone):
        if w == target_w and tuple(sorted(cone)) == target_cone:
            return replacement
        return dual_functional(fan, w, cone)

    return u_fn


def wall_curve_oracle(fan, w, tau):
    """Independent divisor-curve intersection number via the wall relation.

    A 3-cone tau of a complete simplicial fan lies in exactly two maximal
    cones tau+{a} and tau+{b}. With v_a + v_b = sum_j beta_j v_j over the
    generators of tau, the curve of tau meets D_a and D_b once, D_j in
    -beta_j points for j in tau, and every other divisor not at all. No
    linear-equivalence trick is involved, so this is a genuinely separate
    route to the numbers computed by divisor_dot_curve.
    """
    tau = tuple(sorted(tau))
    adjacent = [
        n
        for n in range(1, fan.ray_count + 1)
        if n not in tau and fan.is_maxcone(tuple(sorted(tau + (n,))))
    ]
    assert len(adjacent) == 2, f"wall {tau} is not shared by exactly two cones"
    a, b = adjacent
    if w == a or w == b:
        return Fraction(1)
    if w not in tau:
        return Fraction(0)
    rows = [[fan.ray(j)[r] for j in tau] for r in range(4)]
    rhs = [fan.ray(a)[r] + fan.ray(b)[r] for r in range(4)]
    sol = solve(rows, rhs)
    assert sol is not None and sol[1] == 3
    beta = dict(zip(tau, sol[0]))
    return Fraction(-beta[w])
