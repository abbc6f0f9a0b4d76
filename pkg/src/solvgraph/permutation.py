"""Permutations on points 1..degree, stored as 0-based image tuples."""

from __future__ import annotations

import math
import re
from typing import Iterable

from .errors import CycleNotationError

_CYCLE_RE = re.compile(r"\(([^()]*)\)")


class Permutation:
    """A bijection on {1..degree}.

    ``images[i]`` is the 0-based image of the 0-based point ``i``.  The
    product convention is apply-left-first everywhere: ``(a * b)`` sends a
    point through ``a`` and then through ``b``.
    """

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        imgs = tuple(int(i) for i in images)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError(f"not a permutation of 0..{len(imgs) - 1}: {imgs}")
        self.images = imgs

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        if degree < 1:
            raise ValueError(f"degree must be >= 1, got {degree}")
        return cls(range(degree))

    @property
    def degree(self) -> int:
        return len(self.images)

    def __mul__(self, other: "Permutation") -> "Permutation":
        return compose(self, other)

    def __pow__(self, k: int) -> "Permutation":
        if k < 0:
            return self.inverse() ** (-k)
        result = Permutation.identity(self.degree)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for i, img in enumerate(self.images):
            inv[img] = i
        return Permutation(inv)

    def is_identity(self) -> bool:
        return all(img == i for i, img in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        """Nontrivial cycles as 1-based point tuples, each starting at its least point."""
        seen = [False] * self.degree
        out = []
        for start in range(self.degree):
            if seen[start] or self.images[start] == start:
                seen[start] = True
                continue
            cyc = []
            p = start
            while not seen[p]:
                seen[p] = True
                cyc.append(p + 1)
                p = self.images[p]
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        """Least k >= 1 with self**k the identity: the lcm of the cycle lengths."""
        result = 1
        for cyc in self.cycles():
            result = math.lcm(result, len(cyc))
        return result

    def cycle_string(self) -> str:
        cycs = self.cycles()
        if not cycs:
            return "()"
        return "".join("(" + " ".join(str(p) for p in cyc) + ")" for cyc in cycs)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def __repr__(self) -> str:
        return f"Permutation({self.cycle_string()!r}, degree={self.degree})"


def compose(a: Permutation, b: Permutation) -> Permutation:
    """Product applying ``a`` first, then ``b``."""
    if a.degree != b.degree:
        raise ValueError(f"degree mismatch: {a.degree} vs {b.degree}")
    return Permutation(b.images[i] for i in a.images)


def element_order(a: Permutation) -> int:
    return a.order()


def parse_permutation(text: str, degree: int) -> Permutation:
    """Parse disjoint-cycle notation over points 1..degree.

    Accepts ``"(1 2 3)(4 5)"``; points may also be comma-separated.  ``"()"``
    or an empty string is the identity.  Points not mentioned are fixed.
    Raises ``CycleNotationError`` on out-of-range points, repeated points, or
    malformed syntax.
    """
    if degree < 1:
        raise CycleNotationError(f"degree must be >= 1, got {degree}")
    body = text.strip()
    if body in ("", "()"):
        return Permutation.identity(degree)

    consumed = _CYCLE_RE.sub("", body).strip()
    if consumed:
        raise CycleNotationError(f"malformed cycle notation: {text!r}")

    images = list(range(degree))
    seen: set[int] = set()
    for match in _CYCLE_RE.finditer(body):
        raw = match.group(1).replace(",", " ").split()
        if not raw:
            continue
        points = []
        for token in raw:
            try:
                p = int(token)
            except ValueError:
                raise CycleNotationError(f"bad point {token!r} in {text!r}") from None
            if not 1 <= p <= degree:
                raise CycleNotationError(
                    f"point {p} out of range 1..{degree} in {text!r}"
                )
            if p in seen:
                raise CycleNotationError(f"repeated point {p} in {text!r}")
            seen.add(p)
            points.append(p - 1)
        for i, p in enumerate(points):
            images[p] = points[(i + 1) % len(points)]
    return Permutation(images)
