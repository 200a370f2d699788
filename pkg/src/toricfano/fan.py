"""Simplicial complete fans in a rank-4 lattice, described combinatorially.

A fan is stored as its ray generators (primitive integer 4-vectors, indexed
from 1) together with its maximal cones, each a set of four ray indices.
Lower-dimensional cones are the subsets of maximal cones.

A *primitive collection* is a minimal set of rays that does not span a cone:
the set is not contained in any cone of the fan, but every proper subset is.
Conversely the fan is recovered from its primitive collections by the rule
that a 4-subset of rays spans a maximal cone exactly when it contains no
primitive collection. The *primitive relation* of a collection P expresses
the sum of its rays over the unique minimal cone containing that sum,

    sum of v_i for i in P  =  c_1 v_{j_1} + ... + c_k v_{j_k},   c_j > 0,

with integral c_j on a smooth fan, and has degree |P| - (c_1 + ... + c_k).
A smooth complete fan is Fano exactly when every primitive relation has
positive degree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .exactlin import det4, dot, solve

LatticePoint = tuple[int, int, int, int]
Cone = tuple[int, ...]

DIM = 4

# Coverage probes for the completeness check: the 8 signed unit vectors plus
# the 16 sign vectors. A complete fan must contain every one of them.
PROBES: tuple[LatticePoint, ...] = tuple(
    tuple(s if j == i else 0 for j in range(DIM)) for i in range(DIM) for s in (1, -1)
) + tuple(itertools.product((1, -1), repeat=DIM))


class FanError(ValueError):
    """Input data does not describe a valid smooth complete fan."""


def _cone(indices: Iterable[int]) -> Cone:
    return tuple(sorted(indices))


class Fan:
    """An indexed ray list plus the set of maximal cones.

    Instances are built by :func:`build_fan` or :func:`build_fan_from_rays`
    and treated as immutable afterwards; all derived structure (faces, walls,
    the 2- and 3-dimensional cones) is precomputed so lookups are cheap.
    """

    def __init__(self, rays: Sequence[LatticePoint], maxcones: Iterable[Cone]):
        self.rays: tuple[LatticePoint, ...] = tuple(tuple(int(x) for x in v) for v in rays)
        self.maxcones: tuple[Cone, ...] = tuple(sorted(_cone(mc) for mc in maxcones))
        self._maxset = frozenset(self.maxcones)
        faces = set()
        for mc in self.maxcones:
            for k in range(DIM + 1):
                faces.update(itertools.combinations(mc, k))
        self._faces = frozenset(faces)
        self.cones3: tuple[Cone, ...] = tuple(sorted(f for f in faces if len(f) == 3))
        self.cones2: tuple[Cone, ...] = tuple(sorted(f for f in faces if len(f) == 2))
        # write-once memo for curve intersection numbers, see chern module
        self._curve_num: dict = {}

    @property
    def ray_count(self) -> int:
        return len(self.rays)

    def ray(self, i: int) -> LatticePoint:
        """Generator of ray ``i`` (1-based, matching the printed tables)."""
        return self.rays[i - 1]

    def is_face(self, indices: Iterable[int]) -> bool:
        return _cone(indices) in self._faces

    def is_maxcone(self, indices: Iterable[int]) -> bool:
        return _cone(indices) in self._maxset

    def __eq__(self, other) -> bool:
        if not isinstance(other, Fan):
            return NotImplemented
        return self.rays == other.rays and self.maxcones == other.maxcones

    def __repr__(self) -> str:
        return f"Fan({self.ray_count} rays, {len(self.maxcones)} maximal cones)"


@dataclass
class PrimitiveRelation:
    """The unique positive expression of ``sum(collection)`` over a cone.

    ``coeffs`` maps generator index to its positive integer coefficient; the
    generator cone is empty when the rays of the collection sum to zero.
    ``degree`` is ``len(collection) - sum(coeffs.values())``.
    """

    collection: Cone
    sigma: Cone
    coeffs: dict[int, int]
    degree: int


@dataclass
class FanReport:
    """Validation outcome, with one message per failed condition."""

    smooth: bool
    complete: bool
    simplicial_ok: bool
    problems: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.smooth and self.complete and self.simplicial_ok


def _check_collections(collections, ray_count) -> list[Cone]:
    out = []
    for coll in collections:
        c = _cone(coll)
        if len(set(c)) != len(c):
            raise FanError(f"collection {tuple(coll)} has duplicate entries")
        if not all(1 <= i <= ray_count for i in c):
            raise FanError(f"collection {c} has indices outside 1..{ray_count}")
        if not 2 <= len(c) <= 5:
            raise FanError(f"collection {c} must have between 2 and 5 members")
        out.append(c)
    return out


def build_fan(rays: Sequence[LatticePoint], collections: Iterable[Iterable[int]]) -> Fan:
    """Build the fan whose non-faces are generated by ``collections``.

    A 4-subset of ray indices spans a maximal cone exactly when it contains
    no collection as a subset. Raises :class:`FanError` for collections with
    duplicate or out-of-range indices.
    """
    rays = tuple(tuple(v) for v in rays)
    colls = [set(c) for c in _check_collections(collections, len(rays))]
    maxcones = [
        mc
        for mc in itertools.combinations(range(1, len(rays) + 1), DIM)
        if not any(p <= set(mc) for p in colls)
    ]
    return Fan(rays, maxcones)


def build_fan_from_rays(rays: Sequence[LatticePoint]) -> Fan:
    """Build the face fan of the polytope spanned by ``rays``.

    A 4-subset spans a maximal cone when its rays lie on a common facet: the
    linear functional taking value 1 on all four rays exists (the rays are
    independent) and takes value strictly below 1 on every other ray. The
    result must validate as smooth and complete, otherwise the rays are not
    the vertex set of a suitable polytope and :class:`FanError` is raised.
    """
    rays = tuple(tuple(v) for v in rays)
    ones = (1,) * DIM
    maxcones = []
    for mc in itertools.combinations(range(1, len(rays) + 1), DIM):
        rows = [rays[i - 1] for i in mc]
        if det4(rows) == 0:
            continue
        u, _ = solve(rows, ones)
        if all(dot(u, rays[j - 1]) < 1 for j in range(1, len(rays) + 1) if j not in mc):
            maxcones.append(mc)
    fan = Fan(rays, maxcones)
    report = validate_fan(fan)
    if not report.ok:
        raise FanError("not a Fano face fan: " + "; ".join(report.problems))
    return fan


def minimal_nonfaces(fan: Fan) -> tuple[Cone, ...]:
    """All minimal non-faces of the fan, i.e. its primitive collections.

    A subset of size 2 to 5 qualifies when it is not a face but every proper
    subset is. Checking the facets of each candidate suffices because faces
    are downward closed.
    """
    found = []
    indices = range(1, fan.ray_count + 1)
    for size in range(2, 6):
        for sub in itertools.combinations(indices, size):
            if fan.is_face(sub):
                continue
            if all(fan.is_face(sub[:k] + sub[k + 1 :]) for k in range(size)):
                found.append(sub)
    return tuple(sorted(found, key=lambda c: (len(c), c)))


def primitive_relation(fan: Fan, collection: Iterable[int]) -> PrimitiveRelation:
    """Express the ray sum of a primitive collection over its minimal cone.

    Scans every maximal cone, solves for the coordinates of the sum in that
    cone's generators, and keeps the strictly positive support whenever all
    coordinates are nonnegative. Every containing cone must yield the same
    support and coefficients; on a smooth fan the coefficients are positive
    integers. The sum of the rays being zero gives the empty cone.
    """
    coll = _cone(collection)
    s = tuple(sum(fan.ray(i)[c] for i in coll) for c in range(DIM))
    if all(x == 0 for x in s):
        return PrimitiveRelation(coll, (), {}, len(coll))

    seen: set[tuple] = set()
    result = None
    for mc in fan.maxcones:
        rows = [[fan.ray(i)[r] for i in mc] for r in range(DIM)]
        sol = solve(rows, s)
        if sol is None:
            continue
        x, _ = sol
        if any(v < 0 for v in x):
            continue
        support = tuple(i for i, v in zip(mc, x) if v > 0)
        coeffs = tuple(v for v in x if v > 0)
        seen.add((support, coeffs))
        result = (support, coeffs)
    if result is None:
        raise FanError(f"no containing cone for the ray sum of {coll}")
    if len(seen) > 1:
        raise FanError(f"ambiguous minimal cone for {coll}: {sorted(seen)}")
    support, coeffs = result
    if any(v.denominator != 1 for v in coeffs):
        raise FanError(f"non-integral coefficients for {coll}: fan is not smooth")
    cmap = {i: int(v) for i, v in zip(support, coeffs)}
    return PrimitiveRelation(coll, support, cmap, len(coll) - sum(cmap.values()))


def _contains_point(fan: Fan, mc: Cone, point: Sequence[int]) -> bool:
    rows = [[fan.ray(i)[r] for i in mc] for r in range(DIM)]
    sol = solve(rows, point)
    return sol is not None and all(v >= 0 for v in sol[0])


def validate_fan(fan: Fan) -> FanReport:
    """Check simpliciality, smoothness and completeness.

    Smooth means every maximal cone's generators form a basis of the lattice
    (determinant +-1). Complete is tested two ways: every 3-dimensional cone
    must be a wall shared by exactly two maximal cones, and each of the 24
    probe directions must lie in at least one maximal cone (by exact
    nonnegative coordinates). Failures are reported, never raised.
    """
    problems = []
    simplicial_ok = True
    smooth = True
    for mc in fan.maxcones:
        d = det4([fan.ray(i) for i in mc])
        if d == 0:
            simplicial_ok = False
            problems.append(f"cone {mc} is degenerate")
        if abs(d) != 1:
            smooth = False
            problems.append(f"cone {mc} has determinant {d}")

    complete = bool(fan.maxcones)
    if not fan.maxcones:
        problems.append("fan has no maximal cones")
    wall_count: dict[Cone, int] = {}
    for mc in fan.maxcones:
        for wall in itertools.combinations(mc, 3):
            wall_count[wall] = wall_count.get(wall, 0) + 1
    for wall, count in sorted(wall_count.items()):
        if count != 2:
            complete = False
            problems.append(f"wall {wall} lies in {count} maximal cone(s)")
    if simplicial_ok and complete:
        for probe in PROBES:
            if not any(_contains_point(fan, mc, probe) for mc in fan.maxcones):
                complete = False
                problems.append(f"direction {probe} not covered by any maximal cone")
    return FanReport(smooth, complete, simplicial_ok, problems)


def is_fano(fan: Fan) -> bool:
    """Whether every primitive relation has positive degree.

    Expects a fan that already validated as smooth and complete; relation
    errors from non-smooth input propagate.
    """
    return all(primitive_relation(fan, p).degree > 0 for p in minimal_nonfaces(fan))


def _relation_pairs(relations) -> list[tuple[Cone, dict[int, int]]]:
    pairs = []
    for rel in relations:
        if isinstance(rel, PrimitiveRelation):
            pairs.append((rel.collection, dict(rel.coeffs)))
        else:
            coll, coeffs = rel
            pairs.append((_cone(coll), {int(i): int(c) for i, c in coeffs.items()}))
    return pairs


def reconstruct_rays(relations, ray_count: int) -> tuple[LatticePoint, ...]:
    """Recover ray generators from a full set of primitive relations.

    ``relations`` is a sequence of ``PrimitiveRelation`` objects or of
    ``(collection, coeffs)`` pairs encoding the exact integer relations.
    The lexicographically first 4-subset containing no collection is seeded
    with the standard basis, and the relations are solved for the remaining
    rays. Raises :class:`FanError` with "underdetermined" when the relations
    do not pin down every ray, or "inconsistent" when they contradict each
    other; the reconstructed fan must validate as smooth and complete.

    The result is one representative: any other valid seed differs from it
    by a lattice automorphism (see :func:`lattice_equivalent`).
    """
    pairs = _relation_pairs(relations)
    collections = [set(coll) for coll, _ in pairs]
    for coll, coeffs in pairs:
        for i in list(coll) + list(coeffs):
            if not 1 <= i <= ray_count:
                raise FanError(f"relation index {i} outside 1..{ray_count}")

    seed = next(
        (
            mc
            for mc in itertools.combinations(range(1, ray_count + 1), DIM)
            if not any(p <= set(mc) for p in collections)
        ),
        None,
    )
    if seed is None:
        raise FanError("underdetermined: no 4-subset is free of the collections")

    unknowns = [i for i in range(1, ray_count + 1) if i not in seed]
    if unknowns and not pairs:
        raise FanError("underdetermined: no relations given")
    coeff_rows = []
    for coll, coeffs in pairs:
        a = {i: 0 for i in range(1, ray_count + 1)}
        for i in coll:
            a[i] += 1
        for j, c in coeffs.items():
            a[j] -= c
        coeff_rows.append(a)

    rays: dict[int, list] = {i: [0] * DIM for i in range(1, ray_count + 1)}
    for pos, i in enumerate(seed):
        rays[i] = [1 if c == pos else 0 for c in range(DIM)]

    if unknowns:
        matrix = [[a[i] for i in unknowns] for a in coeff_rows]
        for c in range(DIM):
            rhs = [-sum(a[s] * rays[s][c] for s in seed) for a in coeff_rows]
            sol = solve(matrix, rhs)
            if sol is None:
                raise FanError("inconsistent: the relations have no common solution")
            x, rank = sol
            if rank < len(unknowns):
                raise FanError("underdetermined: the relations do not fix every ray")
            for i, v in zip(unknowns, x):
                if v.denominator != 1:
                    raise FanError(f"inconsistent: ray {i} has non-integral coordinate {v}")
                rays[i][c] = int(v)

    result = tuple(tuple(rays[i]) for i in range(1, ray_count + 1))
    fan = build_fan(result, [_cone(p) for p in collections])
    report = validate_fan(fan)
    if not report.ok:
        raise FanError("reconstructed rays are invalid: " + "; ".join(report.problems))
    return result


def _column_matrix(vectors) -> list[list]:
    return [[v[r] for v in vectors] for r in range(DIM)]


def _matvec(m, v):
    return tuple(dot(row, v) for row in m)


def _matmul(a, b):
    return [[dot(a[i], [b[r][j] for r in range(DIM)]) for j in range(DIM)] for i in range(DIM)]


def _inverse(matrix):
    cols = []
    for k in range(DIM):
        unit = [1 if r == k else 0 for r in range(DIM)]
        sol = solve(matrix, unit)
        if sol is None or sol[1] < DIM:
            return None
        cols.append(sol[0])
    return _column_matrix(cols)


def lattice_equivalent(fan_a: Fan, fan_b: Fan) -> bool:
    """Whether some lattice automorphism carries one fan onto the other.

    Searches for an integer matrix of determinant +-1 mapping the ray set of
    ``fan_a`` bijectively onto the ray set of ``fan_b`` so that maximal cones
    correspond. Candidates are seeded by matching a fixed maximal cone of
    ``fan_a`` against every ordered maximal cone of ``fan_b``; this is
    exhaustive because any equivalence must match maximal cones.
    """
    if fan_a.ray_count != fan_b.ray_count or len(fan_a.maxcones) != len(fan_b.maxcones):
        return False
    if len(fan_a.cones2) != len(fan_b.cones2) or len(fan_a.cones3) != len(fan_b.cones3):
        return False

    base = fan_a.maxcones[0]
    base_inv = _inverse(_column_matrix([fan_a.ray(i) for i in base]))
    if base_inv is None:
        return False
    ray_index_b = {v: j + 1 for j, v in enumerate(fan_b.rays)}
    maxset_b = set(fan_b.maxcones)

    for target in fan_b.maxcones:
        for perm in itertools.permutations(target):
            g = _matmul(_column_matrix([fan_b.ray(i) for i in perm]), base_inv)
            if any(x.denominator != 1 for row in g for x in row):
                continue
            mapping = {}
            for i in range(1, fan_a.ray_count + 1):
                image = tuple(int(x) for x in _matvec(g, fan_a.ray(i)))
                j = ray_index_b.get(image)
                if j is None:
                    break
                mapping[i] = j
            else:
                if len(set(mapping.values())) == fan_a.ray_count and all(
                    _cone(mapping[i] for i in mc) in maxset_b for mc in fan_a.maxcones
                ):
                    return True
    return False
