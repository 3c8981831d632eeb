"""Green's relations and cell structure for finite monoids.

The brute-force route works for any multiplication table: principal left,
right and two-sided ideals give the cell equivalences and the order on
two-sided cells.  For the cyclic diagram monoids the same data also comes
from closed formulas (one cell per through-strand count, each H-cell a
cyclic group), and the two routes are cross-checked in the tests.

Rees truncation keeps the diagrams whose through-strand count lies in a
window, adjoining a fresh identity above and a zero below as needed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from math import comb

import numpy as np

from .diagrams import (
    Diagram,
    Skeleton,
    compose,
    enumerate_monoid,
    glue_circles,
    identity,
)

BRUTE_FORCE_LIMIT = 5000

ADJOINED_IDENTITY = "1"
ADJOINED_ZERO = "0"


@dataclass(frozen=True)
class FiniteMonoid:
    """A finite monoid as an element list and a multiplication table."""

    elements: tuple
    table: tuple[tuple[int, ...], ...]
    identity: int
    zero: int | None = None
    index: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if not self.index:
            self.index.update({x: i for i, x in enumerate(self.elements)})
        e = self.identity
        for i in range(len(self.elements)):
            if self.table[e][i] != i or self.table[i][e] != i:
                raise ValueError("identity laws fail")
        if self.zero is not None:
            z = self.zero
            for i in range(len(self.elements)):
                if self.table[z][i] != z or self.table[i][z] != z:
                    raise ValueError("zero laws fail")

    def __len__(self):
        return len(self.elements)

    @classmethod
    def from_multiplication(cls, elements, mul, identity_elem, zero_elem=None):
        elements = tuple(elements)
        index = {x: i for i, x in enumerate(elements)}
        table = tuple(
            tuple(index[mul(a, b)] for b in elements) for a in elements
        )
        zero = index[zero_elem] if zero_elem is not None else None
        return cls(elements, table, index[identity_elem], zero, index)

    def mul(self, i: int, j: int) -> int:
        return self.table[i][j]

    def is_associative(self) -> bool:
        t = np.array(self.table, dtype=np.int32)
        return bool(np.array_equal(t[t, :], t[:, t].transpose(1, 0, 2)))

    def units(self) -> frozenset[int]:
        e = self.identity
        out = set()
        for i in range(len(self.elements)):
            row = self.table[i]
            for j in range(len(self.elements)):
                if row[j] == e and self.table[j][i] == e:
                    out.add(i)
                    break
        return frozenset(out)


def diagram_monoid(n: int, modulus: int) -> FiniteMonoid:
    """The n-strand cyclic diagram monoid as a multiplication table."""
    elements = enumerate_monoid(n, modulus)
    return FiniteMonoid.from_multiplication(
        elements, compose, identity(n, modulus)
    )


@dataclass(frozen=True)
class CellTable:
    """Green's cells of a finite monoid, with the two-sided cell order.

    Cells are tuples of element indices; ``j_order`` holds the strict
    relations (i, j) meaning j_cells[i] lies strictly below j_cells[j].
    """

    l_cells: tuple[tuple[int, ...], ...]
    r_cells: tuple[tuple[int, ...], ...]
    j_cells: tuple[tuple[int, ...], ...]
    h_cells: tuple[tuple[int, ...], ...]
    j_order: frozenset[tuple[int, int]]
    idempotents: frozenset[int]
    l_of: tuple[int, ...]
    r_of: tuple[int, ...]
    j_of: tuple[int, ...]
    h_of: tuple[int, ...]

    def idempotent_h_cells(self) -> tuple[int, ...]:
        return tuple(
            hi
            for hi, cell in enumerate(self.h_cells)
            if any(x in self.idempotents for x in cell)
        )

    def idempotent_j_cells(self) -> tuple[int, ...]:
        return tuple(
            ji
            for ji, cell in enumerate(self.j_cells)
            if any(x in self.idempotents for x in cell)
        )

    def bottom_j_cell(self) -> int:
        below = {i for i, _ in self.j_order}
        (bottom,) = [
            ji for ji in range(len(self.j_cells)) if ji not in below
        ]
        return bottom

    def top_j_cell(self) -> int:
        above = {j for _, j in self.j_order}
        (top,) = [ji for ji in range(len(self.j_cells)) if ji not in above]
        return top


def _group_by(keys) -> tuple[tuple[int, ...], ...]:
    cells: dict = {}
    for i, key in enumerate(keys):
        cells.setdefault(key, []).append(i)
    return tuple(
        tuple(cell) for cell in sorted(cells.values(), key=lambda c: c[0])
    )


def green_cells_bruteforce(monoid: FiniteMonoid) -> CellTable:
    """Cells from principal ideals; guarded to desk-scale monoids."""
    size = len(monoid)
    if size > BRUTE_FORCE_LIMIT:
        raise ValueError(f"monoid of size {size} exceeds the brute-force guard")
    t = np.array(monoid.table, dtype=np.int32)

    # principal ideals: the left ideal of a is the column of a
    l_keys = [np.unique(t[:, a]).tobytes() for a in range(size)]
    r_keys = [np.unique(t[a, :]).tobytes() for a in range(size)]
    l_cells = _group_by(l_keys)
    r_cells = _group_by(r_keys)

    l_of = [0] * size
    for li, cell in enumerate(l_cells):
        for x in cell:
            l_of[x] = li
    r_of = [0] * size
    for ri, cell in enumerate(r_cells):
        for x in cell:
            r_of[x] = ri

    # two-sided cells: join of the left and right equivalences (finite D = J)
    parent = list(range(size))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for cell in l_cells + r_cells:
        for x in cell[1:]:
            ra, rb = find(cell[0]), find(x)
            if ra != rb:
                parent[ra] = rb
    j_cells = _group_by([find(x) for x in range(size)])
    j_of = [0] * size
    for ji, cell in enumerate(j_cells):
        for x in cell:
            j_of[x] = ji

    # order on two-sided cells from principal two-sided ideals
    ideals = []
    for cell in j_cells:
        a = cell[0]
        ideals.append(frozenset(np.unique(t[:, t[a, :]]).tolist()))
    j_order = set()
    for i, ia in enumerate(ideals):
        for j, ib in enumerate(ideals):
            if i != j and ib < ia:
                j_order.add((i, j))

    h_cells = _group_by([(l_of[x], r_of[x]) for x in range(size)])
    h_of = [0] * size
    for hi, cell in enumerate(h_cells):
        for x in cell:
            h_of[x] = hi

    idempotents = frozenset(
        x for x in range(size) if monoid.table[x][x] == x
    )
    return CellTable(
        l_cells,
        r_cells,
        j_cells,
        h_cells,
        frozenset(j_order),
        idempotents,
        tuple(l_of),
        tuple(r_of),
        tuple(j_of),
        tuple(h_of),
    )


def half_diagram_count(n: int, k: int) -> int:
    """Number of cap-free skeletons k -> n (a ballot number)."""
    if (n - k) % 2 or not 0 <= k <= n:
        raise ValueError("through count must match the strand parity")
    c = (n - k) // 2
    return comb(n, c) - (comb(n, c - 1) if c else 0)


def cell_sizes_structural(n: int, modulus: int, k: int) -> dict:
    """Closed-form L/R/J/H cell sizes at the k-through cell."""
    b = half_diagram_count(n, k)
    return {
        "L_size": modulus * b,
        "R_size": modulus * b,
        "J_size": modulus * b * b,
        "H_size": modulus,
    }


def idempotent_of_skeleton(s: Skeleton, modulus: int) -> Diagram:
    """The idempotent diagram carried by an idempotent skeleton."""
    if modulus < 1:
        raise ValueError("idempotents need a cyclic modulus >= 1")
    if compose(Diagram(s, 0, modulus), Diagram(s, 0, modulus)).skeleton != s:
        raise ValueError("skeleton is not idempotent")
    return Diagram(s, (-glue_circles(s, s)) % modulus, modulus)


def h_cell_generator(e: Diagram) -> Diagram:
    """A generator of the cyclic group structure on an idempotent H-cell."""
    if compose(e, e) != e:
        raise ValueError("expected an idempotent diagram")
    s = e.skeleton
    return Diagram(s, (1 - glue_circles(s, s)) % e.modulus, e.modulus)


def period_index(i: int, monoid: FiniteMonoid) -> tuple[int, int]:
    """Smallest (index, period) with x^index = x^(index+period)."""
    seen = {}
    power = i
    step = 1
    while power not in seen:
        seen[power] = step
        power = monoid.mul(power, i)
        step += 1
    first = seen[power]
    return first, step - first


@dataclass(frozen=True)
class TruncationSpec:
    """Window of through-strand counts kept in a cell subquotient."""

    n: int
    modulus: int
    k_min: int
    l_max: int

    def __post_init__(self):
        low = self.n % 2
        if not low <= self.k_min <= self.l_max <= self.n:
            raise ValueError("truncation window out of range")
        if (self.k_min - self.n) % 2 or (self.l_max - self.n) % 2:
            raise ValueError("window bounds must match the strand parity")


def truncate(spec: TruncationSpec) -> FiniteMonoid:
    """Diagrams with k_min <= through <= l_max, products below k_min to zero.

    A fresh identity is adjoined when l_max < n; a zero when k_min exceeds
    the minimal through count.  The fresh identity is taken as the whole
    group of units of the truncation.
    """
    n, m = spec.n, spec.modulus
    kept = [
        d
        for d in enumerate_monoid(n, m)
        if spec.k_min <= d.through() <= spec.l_max
    ]
    elements: list = list(kept)
    need_identity = spec.l_max < n
    need_zero = spec.k_min > n % 2
    if need_identity:
        elements.append(ADJOINED_IDENTITY)
    if need_zero:
        elements.append(ADJOINED_ZERO)

    def mul(a, b):
        if ADJOINED_ZERO in (a, b):
            return ADJOINED_ZERO
        if a == ADJOINED_IDENTITY:
            return b
        if b == ADJOINED_IDENTITY:
            return a
        prod = compose(a, b)
        if prod.through() < spec.k_min:
            return ADJOINED_ZERO
        return prod

    identity_elem = ADJOINED_IDENTITY if need_identity else identity(n, m)
    zero_elem = ADJOINED_ZERO if need_zero else None
    return FiniteMonoid.from_multiplication(elements, mul, identity_elem, zero_elem)


def connectivity(monoid: FiniteMonoid) -> dict:
    """Left-, right- and null-connectedness of the non-units.

    A product a*b of non-units is identified with b for the left relation
    and with a for the right relation; null-connectedness asks every
    non-unit to be a product of two non-units.  Groups are well-connected
    by convention.
    """
    units = monoid.units()
    nonunits = [i for i in range(len(monoid)) if i not in units]
    if not nonunits:
        return {"left": True, "right": True, "null": True, "well": True}
    pos = {x: t for t, x in enumerate(nonunits)}

    def closure(pick):
        parent = list(range(len(nonunits)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for a in nonunits:
            for b in nonunits:
                p = monoid.mul(a, b)
                x, y = find(pos[p]), find(pos[pick(a, b)])
                if x != y:
                    parent[x] = y
        return len({find(t) for t in range(len(nonunits))}) == 1

    left = closure(lambda a, b: b)
    right = closure(lambda a, b: a)
    products = {
        monoid.mul(a, b) for a in nonunits for b in nonunits
    }
    null = all(x in products for x in nonunits)
    return {
        "left": left,
        "right": right,
        "null": null,
        "well": left and right and null,
    }


def additive_homs(monoid: FiniteMonoid, p: int) -> int:
    """Dimension over F_p of the monoid homomorphisms into (F_p, +)."""
    size = len(monoid)
    seen = set()
    for a in range(size):
        row_a = monoid.table[a]
        for b in range(size):
            c = row_a[b]
            key = (c, a, b) if a <= b else (c, b, a)
            if key in seen:
                continue
            seen.add(key)
    mat = np.zeros((len(seen) + 1, size), dtype=np.int64)
    for r, (c, a, b) in enumerate(sorted(seen)):
        mat[r, c] += 1
        mat[r, a] -= 1
        mat[r, b] -= 1
    mat[len(seen), monoid.identity] = 1
    mat %= p
    rank = _rank_mod_p(mat, p)
    return size - rank


def _rank_mod_p(mat: np.ndarray, p: int) -> int:
    mat = mat % p
    rows, cols = mat.shape
    rank = 0
    for c in range(cols):
        pivots = np.nonzero(mat[rank:, c])[0]
        if pivots.size == 0:
            continue
        r = rank + pivots[0]
        mat[[rank, r]] = mat[[r, rank]]
        inv = pow(int(mat[rank, c]), -1, p)
        mat[rank] = (mat[rank] * inv) % p
        other = np.nonzero(mat[:, c])[0]
        other = other[other != rank]
        if other.size:
            mat[other] = (mat[other] - np.outer(mat[other, c], mat[rank])) % p
        rank += 1
        if rank == rows:
            break
    return rank


def cell_table_json(
    monoid: FiniteMonoid, table: CellTable, label=repr
) -> str:
    """Deterministic JSON export, two-sided cells from top to bottom."""
    # linear extension of the order, maximal cells first
    remaining = set(range(len(table.j_cells)))
    order: list[int] = []
    rel = set(table.j_order)
    while remaining:
        maximal = sorted(
            ji
            for ji in remaining
            if not any((ji, other) in rel for other in remaining)
        )
        order.extend(maximal)
        remaining -= set(maximal)
    labels = [label(x) for x in monoid.elements]

    def cell_labels(cell):
        return [labels[x] for x in cell]

    data = {
        "size": len(monoid),
        "j_cells": [
            {
                "elements": cell_labels(table.j_cells[ji]),
                "l_cells": [
                    cell_labels(c)
                    for c in table.l_cells
                    if table.j_of[c[0]] == ji
                ],
                "r_cells": [
                    cell_labels(c)
                    for c in table.r_cells
                    if table.j_of[c[0]] == ji
                ],
                "h_cells": [
                    cell_labels(c)
                    for c in table.h_cells
                    if table.j_of[c[0]] == ji
                ],
                "idempotent": any(
                    x in table.idempotents for x in table.j_cells[ji]
                ),
                "idempotent_h_cells": [
                    cell_labels(table.h_cells[hi])
                    for hi in table.idempotent_h_cells()
                    if table.j_of[table.h_cells[hi][0]] == ji
                ],
            }
            for ji in order
        ],
    }
    return json.dumps(data, indent=1, sort_keys=True)
