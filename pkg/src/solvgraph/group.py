"""Fully enumerated finite groups with indexed elements and a multiplication table."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import GeneratorFileError, GroupOrderGuardError
from .permutation import Permutation, parse_permutation

DEFAULT_ORDER_GUARD = 2000


@dataclass(frozen=True)
class ElementInfo:
    """Per-element structural data used in reports and divisibility checks."""

    index: int
    order: int
    centralizer_size: int
    class_id: int
    cyclic_subgroup: tuple[int, ...]


class FiniteGroup:
    """A finite group on element indices 0..order-1.

    Index 0 is always the identity.  ``table[i, j]`` is the index of the
    product "element i, then element j" (apply-left-first).  Groups built
    from permutation generators keep the permutations and an exact lookup;
    quotient groups and promoted subgroups are table-only and carry labels
    inherited from their parent.  Instances are immutable after construction;
    private attributes only memoize derived data.
    """

    def __init__(
        self,
        table: np.ndarray,
        *,
        name: str = "G",
        labels: Sequence[str] | None = None,
        generator_indices: Sequence[int] = (),
        permutations: list[Permutation] | None = None,
        generators: list[Permutation] | None = None,
    ):
        table = np.ascontiguousarray(table, dtype=np.int32)
        n = table.shape[0]
        if table.shape != (n, n):
            raise ValueError(f"multiplication table must be square, got {table.shape}")
        if n == 0:
            raise ValueError("a group has at least the identity element")
        if not np.array_equal(table[0], np.arange(n)) or not np.array_equal(
            table[:, 0], np.arange(n)
        ):
            raise ValueError("element 0 must be the identity")
        self.table = table
        self.order = n
        self.identity = 0
        self.name = name
        self.generator_indices = tuple(int(g) for g in generator_indices)
        self.permutations = permutations
        self.generators = generators if generators is not None else []
        self.degree = permutations[0].degree if permutations else None

        inverse = (table == 0).argmax(axis=1).astype(np.int32)
        if not np.array_equal(table[np.arange(n), inverse], np.zeros(n, dtype=np.int32)):
            raise ValueError("table has an element without an inverse")
        self.inverse = inverse

        if permutations is not None:
            self.element_orders = np.array([p.order() for p in permutations], dtype=np.int64)
            self._labels = [p.cycle_string() for p in permutations]
            self._index_of = {p: i for i, p in enumerate(permutations)}
        else:
            self.element_orders = self._orders_from_table()
            self._labels = list(labels) if labels is not None else [str(i) for i in range(n)]
            self._index_of = None
        if len(self._labels) != n:
            raise ValueError("labels length does not match group order")

        self._classes: tuple | None = None
        self._cyclic: dict[int, tuple[int, ...]] = {}
        # shared memo state for subgroup/solvability machinery (see subgroups.py)
        self._subgroup_registry: dict[tuple[int, ...], object] = {}
        self._pair_subgroup: dict[tuple[int, int], tuple[int, ...]] = {}
        self._radical = None
        self._solv_results = None

    # -- element arithmetic ------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverse[a])

    def conjugate(self, g: int, x: int) -> int:
        """g * x * g^-1."""
        return int(self.table[self.table[g, x], self.inverse[g]])

    def power(self, x: int, k: int) -> int:
        o = int(self.element_orders[x])
        k %= o
        cur = self.identity
        for _ in range(k):
            cur = int(self.table[cur, x])
        return cur

    def label(self, i: int) -> str:
        return self._labels[i]

    @property
    def labels(self) -> list[str]:
        return self._labels

    def index_of(self, p: Permutation) -> int:
        if self._index_of is None:
            raise ValueError("group is not backed by permutations")
        return self._index_of[p]

    def cyclic_subgroup(self, x: int) -> tuple[int, ...]:
        """Sorted indices of the powers of x."""
        cached = self._cyclic.get(x)
        if cached is not None:
            return cached
        members = [self.identity]
        cur = int(self.table[self.identity, x])
        while cur != self.identity:
            members.append(cur)
            cur = int(self.table[cur, x])
        result = tuple(sorted(members))
        self._cyclic[x] = result
        return result

    def _orders_from_table(self) -> np.ndarray:
        orders = np.empty(self.order, dtype=np.int64)
        for i in range(self.order):
            k, cur = 1, i
            while cur != 0:
                cur = int(self.table[cur, i])
                k += 1
            orders[i] = k
        return orders

    # -- conjugacy ----------------------------------------------------------

    def conjugacy_classes(self):
        """Partition into conjugacy classes, with a conjugating transversal.

        Returns (classes, class_id, conjugator) where classes is a list of
        sorted index tuples, and conjugator[e] is a g with
        e = g * rep * g^-1 for rep the least element of e's class.
        """
        if self._classes is not None:
            return self._classes
        n = self.order
        class_id = np.full(n, -1, dtype=np.int64)
        conjugator = np.zeros(n, dtype=np.int64)
        classes: list[tuple[int, ...]] = []
        for r in range(n):
            if class_id[r] >= 0:
                continue
            cid = len(classes)
            class_id[r] = cid
            conjugator[r] = self.identity
            orbit = [r]
            queue = [r]
            while queue:
                cur = queue.pop()
                for g in self.generator_indices:
                    nxt = self.conjugate(g, cur)
                    if class_id[nxt] < 0:
                        class_id[nxt] = cid
                        conjugator[nxt] = self.table[g, conjugator[cur]]
                        orbit.append(nxt)
                        queue.append(nxt)
            classes.append(tuple(sorted(orbit)))
        self._classes = (classes, class_id, conjugator)
        return self._classes

    def class_representatives(self) -> list[int]:
        classes, _, _ = self.conjugacy_classes()
        return [cls[0] for cls in classes]

    def centralizer(self, x: int) -> tuple[int, ...]:
        """Sorted indices of all g commuting with x."""
        mask = self.table[x, :] == self.table[:, x]
        return tuple(int(i) for i in np.nonzero(mask)[0])

    def normalizer_of_cyclic(self, x: int) -> tuple[int, ...]:
        """Sorted indices of all g with g<x>g^-1 = <x>."""
        cyc = np.fromiter(self.cyclic_subgroup(x), dtype=np.int64)
        conj_of_x = self.table[self.table[:, x], self.inverse]
        mask = np.isin(conj_of_x, cyc)
        return tuple(int(i) for i in np.nonzero(mask)[0])

    def element_info(self, x: int) -> ElementInfo:
        _, class_id, _ = self.conjugacy_classes()
        return ElementInfo(
            index=x,
            order=int(self.element_orders[x]),
            centralizer_size=len(self.centralizer(x)),
            class_id=int(class_id[x]),
            cyclic_subgroup=self.cyclic_subgroup(x),
        )

    # -- construction -------------------------------------------------------

    @classmethod
    def from_table(
        cls,
        table: np.ndarray,
        *,
        name: str = "G",
        labels: Sequence[str] | None = None,
        generator_indices: Sequence[int] | None = None,
    ) -> "FiniteGroup":
        """Wrap an explicit multiplication table (identity must be index 0)."""
        group = cls(table, name=name, labels=labels, generator_indices=generator_indices or ())
        if generator_indices is None:
            gens = _greedy_generators(group.table)
            group.generator_indices = gens
        return group

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name!r}, order={self.order})"


def _greedy_generators(table: np.ndarray) -> tuple[int, ...]:
    """Small generating set: scan indices, keep those that enlarge the closure."""
    n = table.shape[0]
    gens: list[int] = []
    current = np.array([0], dtype=np.int64)
    for i in range(1, n):
        if current.size == n:
            break
        if i in current:
            continue
        gens.append(i)
        cur = np.unique(np.append(current, i))
        while True:
            nxt = np.unique(table[np.ix_(cur, cur)])
            if nxt.size == cur.size:
                break
            cur = nxt
        current = cur
    return tuple(gens)


def generate_group(
    generators: Sequence[Permutation],
    *,
    degree: int | None = None,
    guard: int = DEFAULT_ORDER_GUARD,
    name: str = "G",
) -> FiniteGroup:
    """Enumerate the group generated by permutations, breadth-first from the identity.

    Element ordering is deterministic given the generator order.  The empty
    generator list yields the trivial group (``degree`` then defaults to 1).
    Raises ``GroupOrderGuardError`` if the enumeration exceeds ``guard``
    elements.
    """
    gens = list(generators)
    if gens:
        degrees = {g.degree for g in gens}
        if len(degrees) != 1:
            raise ValueError(f"generators act on different point counts: {sorted(degrees)}")
        if degree is not None and degree != gens[0].degree:
            raise ValueError(f"degree {degree} does not match generators ({gens[0].degree})")
        degree = gens[0].degree
    else:
        degree = degree if degree is not None else 1

    identity = Permutation.identity(degree)
    elements = [identity]
    index = {identity: 0}
    parent: list[tuple[int, int]] = [(-1, -1)]  # (bfs parent index, generator position)
    head = 0
    while head < len(elements):
        u = elements[head]
        for gpos, g in enumerate(gens):
            v = u * g
            if v not in index:
                if len(elements) >= guard:
                    raise GroupOrderGuardError(guard, len(elements) + 1)
                index[v] = len(elements)
                elements.append(v)
                parent.append((head, gpos))
        head += 1

    n = len(elements)
    table = np.empty((n, n), dtype=np.int32)
    table[:, 0] = np.arange(n, dtype=np.int32)
    # right-multiplication vectors, one per generator
    rmul = []
    for g in gens:
        rmul.append(np.fromiter((index[e * g] for e in elements), dtype=np.int32, count=n))
    # element j arose as elements[k] * gens[gpos], so column j = rmul[gpos][column k]
    for j in range(1, n):
        k, gpos = parent[j]
        table[:, j] = rmul[gpos][table[:, k]]

    gen_indices = []
    for g in gens:
        gi = index[g]
        if gi not in gen_indices:
            gen_indices.append(gi)
    return FiniteGroup(
        table,
        name=name,
        generator_indices=gen_indices,
        permutations=elements,
        generators=gens,
    )


def parse_generator_file(text: str) -> tuple[int, list[Permutation]]:
    """Parse the generator-file format.

    The first effective line is ``degree N``; every following line is one
    permutation in cycle notation.  ``#`` starts a comment, whole-line or
    trailing; blank lines are ignored.
    """
    degree: int | None = None
    perms: list[Permutation] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if degree is None:
            parts = line.split()
            if len(parts) != 2 or parts[0].lower() != "degree":
                raise GeneratorFileError(
                    f"line {lineno}: expected 'degree N' before any permutation"
                )
            try:
                degree = int(parts[1])
            except ValueError:
                raise GeneratorFileError(f"line {lineno}: bad degree {parts[1]!r}") from None
            if degree < 1:
                raise GeneratorFileError(f"line {lineno}: degree must be >= 1")
            continue
        try:
            perms.append(parse_permutation(line, degree))
        except Exception as exc:
            raise GeneratorFileError(f"line {lineno}: {exc}") from exc
    if degree is None:
        raise GeneratorFileError("missing 'degree N' line")
    return degree, perms


def load_generator_file(path) -> tuple[int, list[Permutation]]:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_generator_file(fh.read())
