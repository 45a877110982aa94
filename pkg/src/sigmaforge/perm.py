"""Permutations on 0..n-1 and the plain-text group format.

Products compose right-to-left like functions: ``(p * q)[i] == p[q[i]]``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from math import lcm
from typing import Iterable, Sequence

from .errors import ParseError


@dataclass(frozen=True, order=True)
class Permutation:
    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a bijection of 0..{len(images) - 1}: {images}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, degree: int) -> Permutation:
        return cls(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int) -> Permutation:
        images = list(range(degree))
        seen = set()
        for cyc in cycles:
            for a in cyc:
                if not 0 <= a < degree:
                    raise ValueError(f"point {a} out of range for degree {degree}")
                if a in seen:
                    raise ValueError(f"point {a} repeated")
                seen.add(a)
            for a, b in zip(cyc, tuple(cyc[1:]) + tuple(cyc[:1])):
                images[a] = b
        return cls(tuple(images))

    @classmethod
    def parse(cls, text: str, degree: int) -> Permutation:
        return cls.from_cycles(_parse_cycles(text), degree)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __len__(self):
        return len(self.images)

    def __getitem__(self, i):
        return self.images[i]

    def __call__(self, i: int) -> int:
        return self.images[i]

    def __mul__(self, other: Permutation) -> Permutation:
        if not isinstance(other, Permutation):
            return NotImplemented
        if other.degree != self.degree:
            raise ValueError("degree mismatch")
        p = self.images
        return Permutation(tuple(p[j] for j in other.images))

    def __pow__(self, k: int) -> Permutation:
        result = Permutation.identity(self.degree)
        base = self if k >= 0 else self.inverse()
        for _ in range(abs(k)):
            result = result * base
        return result

    def inverse(self) -> Permutation:
        inv = [0] * self.degree
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        """Non-trivial cycles, each starting at its smallest point."""
        out, seen = [], set()
        for start in range(self.degree):
            if start in seen or self.images[start] == start:
                continue
            cyc, x = [], start
            while x not in seen:
                seen.add(x)
                cyc.append(x)
                x = self.images[x]
            out.append(tuple(cyc))
        return out

    @property
    def order(self) -> int:
        return lcm(1, *(len(c) for c in self.cycles()))

    def __str__(self):
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc)

    def __repr__(self):
        return f"Permutation({self})"


_CYCLE_RE = re.compile(r"\(([^()]*)\)")


def _parse_cycles(text: str) -> list[tuple[int, ...]]:
    s = text.strip()
    pos, cycles = 0, []
    while pos < len(s):
        if s[pos].isspace():
            pos += 1
            continue
        m = _CYCLE_RE.match(s, pos)
        if m is None:
            raise ParseError(f"expected '(' at {s[pos:pos + 10]!r}", column=pos + 1)
        body = m.group(1).replace(",", " ").split()
        try:
            pts = tuple(int(tok) for tok in body)
        except ValueError:
            raise ParseError(f"non-integer point in {m.group(0)!r}", column=pos + 1) from None
        if pts:
            cycles.append(pts)
        pos = m.end()
    return cycles


def parse_group_text(text: str) -> tuple[int, list[Permutation]]:
    """Parse ``degree N`` followed by one generator per line.

    Blank lines and ``#`` comments are ignored.  Errors carry line/column.
    """
    degree = None
    gens: list[Permutation] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if degree is None:
            parts = line.split()
            if len(parts) != 2 or parts[0].lower() != "degree":
                raise ParseError("first line must be 'degree N'", lineno, 1)
            try:
                degree = int(parts[1])
            except ValueError:
                raise ParseError(f"bad degree {parts[1]!r}", lineno, line.index(parts[1]) + 1) from None
            if degree < 1:
                raise ParseError("degree must be positive", lineno, line.index(parts[1]) + 1)
            continue
        offset = len(line) - len(line.lstrip())
        try:
            cycles = _parse_cycles(line)
        except ParseError as exc:
            raise ParseError(str(exc).split(": ", 1)[-1], lineno, (exc.column or 1) + offset) from None
        seen: dict[int, int] = {}
        for cyc in cycles:
            for a in cyc:
                col = _column_of(line, a, seen.get(a, 0))
                if not 0 <= a < degree:
                    raise ParseError(f"point {a} out of range 0..{degree - 1}", lineno, col)
                if a in seen:
                    raise ParseError(f"point {a} repeated (generator is not a bijection)", lineno, col)
                seen[a] = 1
        gens.append(Permutation.from_cycles(cycles, degree))
    if degree is None:
        raise ParseError("empty group file", 1, 1)
    return degree, gens


def _column_of(line: str, point: int, skip: int = 0) -> int:
    """1-based column of the (skip+1)-th standalone occurrence of ``point``."""
    hits = list(re.finditer(rf"(?<!\d){point}(?!\d)", line))
    if len(hits) > skip:
        return hits[skip].start() + 1
    return hits[0].start() + 1 if hits else 1


def format_group_text(degree: int, generators: Iterable[Permutation]) -> str:
    lines = [f"degree {degree}"]
    lines.extend(str(g) for g in generators)
    return "\n".join(lines) + "\n"
