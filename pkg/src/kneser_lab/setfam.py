"""r-sets as bitmasks, colex ranking, uniform families and the text format.

An r-set over [n] is a plain ``int`` mask with bit ``i-1`` set when element
``i`` is present.  For masks of equal popcount, numeric order *is* colex
order, so a sorted tuple of masks is a colex-ordered family.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator

from .combinat import DomainError, binom_exact

MAX_MASK_N = 62


class ParseError(ValueError):
    """Malformed family text; ``line`` is 1-based."""

    def __init__(self, message: str, line: int):
        super().__init__(f"{message}, line {line}")
        self.line = line


@dataclass(frozen=True)
class KneserParams:
    """Ground-set size ``n`` and uniformity ``r`` with the derived counts."""

    n: int
    r: int

    def __post_init__(self):
        if self.n < 0 or self.r < 0 or self.r > self.n:
            raise DomainError(f"invalid (n, r) = ({self.n}, {self.r})")

    @cached_property
    def V(self) -> int:
        return binom_exact(self.n, self.r)

    @cached_property
    def N(self) -> int:
        return binom_exact(self.n - 1, self.r - 1)

    @cached_property
    def M(self) -> int:
        return binom_exact(self.n - self.r - 1, self.r - 1)

    @cached_property
    def R(self) -> int:
        return binom_exact(2 * self.r, self.r)

    def require_kneser_range(self) -> None:
        if self.n <= 2 * self.r:
            raise DomainError(f"need n > 2r, got n={self.n}, r={self.r}")


def mask_of(elements: Iterable[int]) -> int:
    mask = 0
    for x in elements:
        mask |= 1 << (x - 1)
    return mask


def elements_of(mask: int) -> list[int]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def rank(mask: int) -> int:
    """Colex rank of an r-set (combinatorial number system)."""
    total = 0
    i = 0
    pos = 0
    while mask:
        if mask & 1:
            i += 1
            total += binom_exact(pos, i)
        mask >>= 1
        pos += 1
    return total


def unrank(index: int, n: int, r: int) -> int:
    """Inverse of :func:`rank` on [n]^(r)."""
    if not 0 <= index < binom_exact(n, r):
        raise DomainError(f"rank {index} outside [0, C({n},{r}))")
    mask = 0
    c = n - 1
    for k in range(r, 0, -1):
        while binom_exact(c, k) > index:
            c -= 1
        mask |= 1 << c
        index -= binom_exact(c, k)
        c -= 1
    return mask


def all_rsets(n: int, r: int) -> list[int]:
    """Every r-subset of [n] as a mask, in colex order."""
    return sorted(mask_of(c) for c in combinations(range(1, n + 1), r))


class Family:
    """An immutable r-uniform family on [n], kept in colex order."""

    def __init__(self, n: int, r: int, masks: Iterable[int] = ()):
        if n > MAX_MASK_N:
            raise DomainError(f"bitmask families need n <= {MAX_MASK_N}")
        self.params = KneserParams(n, r)
        ordered = sorted(masks)
        limit = 1 << n
        for a, b in zip(ordered, ordered[1:]):
            if a == b:
                raise DomainError(f"duplicate member {elements_of(a)}")
        for m in ordered:
            if m < 0 or m >= limit or m.bit_count() != r:
                raise DomainError(f"mask {m:#x} is not an {r}-subset of [{n}]")
        self.masks: tuple[int, ...] = tuple(ordered)
        self._members = frozenset(ordered)

    @classmethod
    def full(cls, n: int, r: int) -> "Family":
        return cls(n, r, all_rsets(n, r))

    @classmethod
    def star(cls, n: int, r: int, x: int) -> "Family":
        bit = 1 << (x - 1)
        return cls(n, r, [m for m in all_rsets(n, r) if m & bit])

    @classmethod
    def from_sets(cls, n: int, r: int, sets: Iterable[Iterable[int]]) -> "Family":
        return cls(n, r, [mask_of(s) for s in sets])

    @property
    def n(self) -> int:
        return self.params.n

    @property
    def r(self) -> int:
        return self.params.r

    def __len__(self) -> int:
        return len(self.masks)

    def __iter__(self) -> Iterator[int]:
        return iter(self.masks)

    def __contains__(self, mask: object) -> bool:
        return mask in self._members

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Family):
            return NotImplemented
        return self.params == other.params and self.masks == other.masks

    def __hash__(self) -> int:
        return hash((self.params, self.masks))

    def __repr__(self) -> str:
        shown = " ".join("".join(map(str, elements_of(m))) if self.n < 10 else str(elements_of(m))
                         for m in self.masks[:8])
        more = " ..." if len(self) > 8 else ""
        return f"Family(n={self.n}, r={self.r}, size={len(self)}: {shown}{more})"

    @cached_property
    def ranks(self) -> tuple[int, ...]:
        return tuple(rank(m) for m in self.masks)

    @cached_property
    def index(self) -> int:
        """Membership bitmap over rank space: bit i set iff rank i is a member."""
        bitmap = 0
        for i in self.ranks:
            bitmap |= 1 << i
        return bitmap

    def sets(self) -> list[list[int]]:
        return [elements_of(m) for m in self.masks]

    def subset(self, masks: Iterable[int]) -> "Family":
        return Family(self.n, self.r, masks)

    def union(self, masks: Iterable[int]) -> "Family":
        return Family(self.n, self.r, self._members.union(masks))

    def difference(self, masks: Iterable[int]) -> "Family":
        return Family(self.n, self.r, self._members.difference(masks))

    def issubset(self, other: "Family") -> bool:
        return self._members <= other._members


def subfamily_containing(f: Family, x: int) -> Family:
    """Members of ``f`` that contain element ``x``."""
    if not 1 <= x <= f.n:
        raise DomainError(f"element {x} outside [1, {f.n}]")
    bit = 1 << (x - 1)
    return f.subset(m for m in f.masks if m & bit)


def parse_family(text: str) -> Family:
    header = None
    masks: list[int] = []
    seen: set[int] = set()
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            nums = [int(tok) for tok in line.split()]
        except ValueError:
            raise ParseError(f"non-integer token in {line!r}", lineno) from None
        if header is None:
            if len(nums) != 2:
                raise ParseError("header must be 'n r'", lineno)
            n, r = nums
            if not 0 <= r <= n <= MAX_MASK_N:
                raise ParseError(f"unsupported header n={n} r={r}", lineno)
            header = (n, r)
            continue
        n, r = header
        if len(set(nums)) != len(nums):
            raise ParseError("duplicate element", lineno)
        if len(nums) != r:
            raise ParseError(f"expected {r} elements, got {len(nums)}", lineno)
        for x in nums:
            if not 1 <= x <= n:
                raise ParseError(f"element {x} outside [1, {n}]", lineno)
        m = mask_of(nums)
        if m in seen:
            raise ParseError("duplicate set", lineno)
        seen.add(m)
        masks.append(m)
    if header is None:
        raise ParseError("missing header", 1)
    return Family(header[0], header[1], masks)


def serialize_family(f: Family) -> str:
    lines = [f"{f.n} {f.r}"]
    lines.extend(" ".join(map(str, elements_of(m))) for m in f.masks)
    return "\n".join(lines) + "\n"
