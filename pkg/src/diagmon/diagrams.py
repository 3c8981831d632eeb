"""Exact arithmetic of crossingless matchings and their cyclic quotients.

A skeleton is a planar perfect matching of the boundary points of a
rectangle: ``bottom`` points on the lower edge, ``top`` points on the upper
edge, no closed circles.  A diagram is a skeleton together with a count of
closed internal circles, kept either as a free natural number (modulus 0)
or as a residue mod m (modulus m >= 1).  Stacking two diagrams glues the
middle boundary; circles produced by the gluing are added to the count.

Boundary labelling: bottom points 1..bottom left to right, top points
1..top left to right.  For planarity the boundary is traversed bottom left
to right, then top right to left; a matching is planar iff it is
non-crossing in that circular order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache


class BoundaryMismatch(ValueError):
    """Composition of diagrams whose glued boundaries disagree."""


class ModulusMismatch(TypeError):
    """Diagrams over different circle moduli were mixed in one expression."""


def _point_index(label: int, bottom: int) -> int:
    # signed label: +j is bottom j, -i is top i
    if label > 0:
        return label - 1
    return bottom - label - 1


def _point_label(index: int, bottom: int) -> int:
    if index < bottom:
        return index + 1
    return bottom - index - 1


@dataclass(frozen=True, slots=True)
class Skeleton:
    """A planar perfect matching of ``bottom`` + ``top`` boundary points.

    ``partner[x]`` is the matched point of point ``x``; bottom j has index
    j-1, top i has index bottom+i-1.
    """

    bottom: int
    top: int
    partner: tuple[int, ...]

    def __post_init__(self):
        n = self.bottom + self.top
        if len(self.partner) != n:
            raise ValueError("partner table has wrong length")
        for x, y in enumerate(self.partner):
            if not 0 <= y < n or y == x or self.partner[y] != x:
                raise ValueError("pairing is not a fixed-point-free involution")
        if not self._is_planar():
            raise ValueError("matching is not planar")

    def _is_planar(self) -> bool:
        # non-crossing in the circular order: bottom 1..b, then top t..1
        order = list(range(self.bottom)) + list(
            range(self.bottom + self.top - 1, self.bottom - 1, -1)
        )
        stack: list[int] = []
        seen: set[int] = set()
        for x in order:
            if x in seen:
                if not stack or stack[-1] != self.partner[x]:
                    return False
                stack.pop()
            else:
                seen.add(x)
                seen.add(self.partner[x])
                stack.append(x)
        return not stack

    @classmethod
    def from_pairs(cls, bottom: int, top: int, pairs) -> Skeleton:
        """Build a skeleton from signed-label pairs (+j bottom j, -i top i)."""
        partner = [-1] * (bottom + top)
        for p, q in pairs:
            x, y = _point_index(p, bottom), _point_index(q, bottom)
            partner[x], partner[y] = y, x
        return cls(bottom, top, tuple(partner))

    def pairs(self) -> tuple[tuple[int, int], ...]:
        """Signed-label pairs, each ascending, sorted by first element."""
        out = []
        for x, y in enumerate(self.partner):
            if x < y:
                p, q = _point_label(x, self.bottom), _point_label(y, self.bottom)
                out.append((min(p, q), max(p, q)))
        out.sort()
        return tuple(out)

    def through(self) -> int:
        """Number of strands joining a bottom point to a top point."""
        return sum(
            1 for x in range(self.bottom) if self.partner[x] >= self.bottom
        )

    def caps(self) -> int:
        return (self.bottom - self.through()) // 2

    def cups(self) -> int:
        return (self.top - self.through()) // 2

    def sort_key(self) -> tuple:
        # lexicographic on the sorted pair list, bottom 1..b, top b+1..b+t
        out = sorted(
            (x + 1, y + 1) for x, y in enumerate(self.partner) if x < y
        )
        return tuple(out)

    def __repr__(self):
        return f"Skeleton({self.bottom}->{self.top}, {list(self.pairs())})"


def _glue(a: Skeleton, b: Skeleton) -> tuple[Skeleton, int]:
    """Stack a above b, glue the middle, return (outer skeleton, circles)."""
    if a.bottom != b.top:
        raise BoundaryMismatch(
            f"cannot glue {a.bottom} lower points of the top factor onto "
            f"{b.top} upper points of the bottom factor"
        )
    na = a.bottom + a.top
    total = na + b.bottom + b.top
    parent = list(range(total))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[rx] = ry

    for x, y in enumerate(a.partner):
        if x < y:
            union(x, y)
    for x, y in enumerate(b.partner):
        if x < y:
            union(na + x, na + y)
    for j in range(a.bottom):  # a's bottom j <-> b's top j
        union(j, na + b.bottom + j)

    # outer points of the composite: b's bottoms, then a's tops
    outer = [na + j for j in range(b.bottom)]
    outer += [a.bottom + i for i in range(a.top)]
    by_root: dict[int, list[int]] = {}
    for pos, node in enumerate(outer):
        by_root.setdefault(find(node), []).append(pos)
    partner = [-1] * len(outer)
    for members in by_root.values():
        if len(members) != 2:
            raise AssertionError("glued component with odd boundary count")
        x, y = members
        partner[x], partner[y] = y, x

    middle_roots = {find(j) for j in range(a.bottom)}
    circles = len(middle_roots - set(by_root))
    return Skeleton(b.bottom, a.top, tuple(partner)), circles


def glue_circles(a: Skeleton, b: Skeleton) -> int:
    """Number of closed circles created by stacking a above b."""
    return _glue(a, b)[1]


@dataclass(frozen=True, slots=True, eq=False)
class Diagram:
    """A skeleton with an internal-circle count.

    ``modulus`` 0 keeps the count as a free natural number; ``modulus`` m >= 1
    reduces it mod m.  Comparing diagrams over different moduli raises
    :class:`ModulusMismatch` rather than returning False.
    """

    skeleton: Skeleton
    circles: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 0:
            raise ValueError("modulus must be >= 0")
        if self.modulus == 0:
            if self.circles < 0:
                raise ValueError("circle count must be >= 0")
        elif not 0 <= self.circles < self.modulus:
            raise ValueError("circle count out of range for the modulus")

    def __eq__(self, other):
        if not isinstance(other, Diagram):
            return NotImplemented
        if self.modulus != other.modulus:
            raise ModulusMismatch(
                f"comparing diagrams over moduli {self.modulus} and {other.modulus}"
            )
        return self.skeleton == other.skeleton and self.circles == other.circles

    def __hash__(self):
        return hash((self.skeleton, self.circles, self.modulus))

    @property
    def bottom(self) -> int:
        return self.skeleton.bottom

    @property
    def top(self) -> int:
        return self.skeleton.top

    def through(self) -> int:
        return self.skeleton.through()

    def __mul__(self, other: Diagram) -> Diagram:
        return compose(self, other)

    def __repr__(self):
        mod = f" mod {self.modulus}" if self.modulus else ""
        return f"Diagram({self.skeleton!r}, circles={self.circles}{mod})"


def _reduce(circles: int, modulus: int) -> int:
    return circles % modulus if modulus else circles


def identity(n: int, modulus: int = 0) -> Diagram:
    """The identity diagram: n vertical strands, no circles."""
    if n < 0:
        raise ValueError("strand count must be >= 0")
    partner = tuple(list(range(n, 2 * n)) + list(range(n)))
    return Diagram(Skeleton(n, n, partner), 0, modulus)


def circle(n: int, modulus: int = 0) -> Diagram:
    """The identity skeleton carrying one closed circle."""
    base = identity(n, modulus)
    return Diagram(base.skeleton, _reduce(1, modulus), modulus)


def hook(n: int, modulus: int, i: int) -> Diagram:
    """Generator with a cap and a cup joining points i, i+1; 1 <= i <= n-1."""
    if not 1 <= i <= n - 1:
        raise ValueError(f"hook index {i} out of range for {n} strands")
    partner = list(range(n, 2 * n)) + list(range(n))
    partner[i - 1], partner[i] = i, i - 1
    partner[n + i - 1], partner[n + i] = n + i, n + i - 1
    return Diagram(Skeleton(n, n, tuple(partner)), 0, modulus)


def block(n: int, modulus: int, i: int, j: int) -> Diagram:
    """The evaluated hook run u_i u_{i-1} ... u_j; requires 1 <= j <= i < n."""
    if not 1 <= j <= i <= n - 1:
        raise ValueError(f"block indices ({i},{j}) out of range for {n} strands")
    out = hook(n, modulus, i)
    for t in range(i - 1, j - 1, -1):
        out = compose(out, hook(n, modulus, t))
    return out


def compose(a: Diagram, b: Diagram) -> Diagram:
    """Stack a above b (b acts first); circles add, reduced mod the modulus."""
    if a.modulus != b.modulus:
        raise ModulusMismatch(
            f"composing diagrams over moduli {a.modulus} and {b.modulus}"
        )
    skel, circles = _glue(a.skeleton, b.skeleton)
    return Diagram(
        skel, _reduce(a.circles + b.circles + circles, a.modulus), a.modulus
    )


def tensor(a: Diagram, b: Diagram) -> Diagram:
    """Place b to the right of a; circle counts add."""
    if a.modulus != b.modulus:
        raise ModulusMismatch(
            f"tensoring diagrams over moduli {a.modulus} and {b.modulus}"
        )
    sa, sb = a.skeleton, b.skeleton
    pairs = list(sa.pairs())
    for p, q in sb.pairs():
        pairs.append(
            (
                p + sa.bottom if p > 0 else p - sa.top,
                q + sa.bottom if q > 0 else q - sa.top,
            )
        )
    skel = Skeleton.from_pairs(sa.bottom + sb.bottom, sa.top + sb.top, pairs)
    return Diagram(skel, _reduce(a.circles + b.circles, a.modulus), a.modulus)


def involute(a: Diagram) -> Diagram:
    """Reflect top to bottom; an anti-involution for composition."""
    s = a.skeleton
    pairs = [(-p, -q) for p, q in s.pairs()]
    return Diagram(
        Skeleton.from_pairs(s.top, s.bottom, pairs), a.circles, a.modulus
    )


@dataclass(frozen=True, slots=True)
class Factorisation:
    """Unique factorisation through the minimal middle boundary.

    ``top_half`` has no caps, ``bottom_half`` no cups; recomposing
    top_half o (identity with mid_circles) o bottom_half restores the
    original diagram, and ``through`` is its through-strand count.
    """

    top_half: Skeleton
    mid_circles: int
    through: int
    bottom_half: Skeleton


def factorise(a: Diagram) -> Factorisation:
    """Split a diagram into its cup half, circle count and cap half."""
    s = a.skeleton
    bottoms = []  # bottom through points, left to right
    tops = []
    for x in range(s.bottom):
        if s.partner[x] >= s.bottom:
            bottoms.append(x + 1)
            tops.append(s.partner[x] - s.bottom + 1)
    k = len(bottoms)
    top_pairs = [(r + 1, -i) for r, i in enumerate(tops)]
    bot_pairs = [(j, -(r + 1)) for r, j in enumerate(bottoms)]
    for p, q in s.pairs():
        if p < 0 and q < 0:
            top_pairs.append((p, q))
        elif p > 0 and q > 0:
            bot_pairs.append((p, q))
    return Factorisation(
        top_half=Skeleton.from_pairs(k, s.top, top_pairs),
        mid_circles=a.circles,
        through=k,
        bottom_half=Skeleton.from_pairs(s.bottom, k, bot_pairs),
    )


def recompose(f: Factorisation, modulus: int) -> Diagram:
    """Inverse of :func:`factorise`."""
    mid = Diagram(
        identity(f.through, modulus).skeleton,
        _reduce(f.mid_circles, modulus),
        modulus,
    )
    top = Diagram(f.top_half, 0, modulus)
    bot = Diagram(f.bottom_half, 0, modulus)
    return compose(compose(top, mid), bot)


def _noncrossing_matchings(seq: tuple[int, ...]):
    # all non-crossing perfect matchings of a linearly ordered point sequence
    if not seq:
        yield []
        return
    first = seq[0]
    for t in range(1, len(seq), 2):
        for inner in _noncrossing_matchings(seq[1:t]):
            for outer in _noncrossing_matchings(seq[t + 1 :]):
                yield [(first, seq[t])] + inner + outer


@lru_cache(maxsize=None)
def enumerate_skeletons(bottom: int, top: int) -> tuple[Skeleton, ...]:
    """All skeletons bottom -> top in canonical (sorted pair list) order."""
    if (bottom + top) % 2:
        raise ValueError("bottom + top must be even")
    order = tuple(range(bottom)) + tuple(
        range(bottom + top - 1, bottom - 1, -1)
    )
    out = []
    for match in _noncrossing_matchings(order):
        partner = [-1] * (bottom + top)
        for x, y in match:
            partner[x], partner[y] = y, x
        out.append(Skeleton(bottom, top, tuple(partner)))
    out.sort(key=Skeleton.sort_key)
    return tuple(out)


def enumerate_monoid(n: int, modulus: int) -> tuple[Diagram, ...]:
    """All diagrams of the n-strand cyclic monoid, skeleton-major order."""
    if modulus < 1:
        raise ValueError("enumeration needs a cyclic modulus >= 1")
    return tuple(
        Diagram(s, c, modulus)
        for s in enumerate_skeletons(n, n)
        for c in range(modulus)
    )


def catalan(k: int) -> int:
    """Catalan number by the convolution recurrence (kept formula-free)."""
    table = [1]
    for j in range(1, k + 1):
        table.append(sum(table[i] * table[j - 1 - i] for i in range(j)))
    return table[k]


def half_diagrams(n: int, k: int) -> tuple[Skeleton, ...]:
    """Skeletons k -> n without caps, in canonical order."""
    return tuple(
        s for s in enumerate_skeletons(k, n) if s.caps() == 0
    )


def to_json_dict(d: Diagram) -> dict:
    return {
        "n_bottom": d.bottom,
        "n_top": d.top,
        "pairs": [list(p) for p in d.skeleton.pairs()],
        "loops": d.circles,
        "modulus": d.modulus,
    }


def to_json(d: Diagram) -> str:
    return json.dumps(to_json_dict(d), sort_keys=True, separators=(",", ":"))


def from_json_dict(data: dict) -> Diagram:
    skel = Skeleton.from_pairs(data["n_bottom"], data["n_top"], data["pairs"])
    return Diagram(skel, data["loops"], data["modulus"])


def from_json(text: str) -> Diagram:
    return from_json_dict(json.loads(text))
