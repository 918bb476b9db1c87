"""Elements of free commutative monoids on named generators.

The order ``p <= q`` iff ``q = p + r`` for some r is coordinatewise
domination of exponent vectors.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping

_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z_0-9]*")
_TERM_RE = re.compile(r"\s*(?:(\d+)\s*\*?\s*)?([A-Za-z_][A-Za-z_0-9]*)\s*")


def natural_key(name: str) -> tuple:
    """Sort key putting ``e2`` before ``e10``."""
    return tuple(int(t) if t.isdigit() else t for t in re.findall(r"\d+|\D+", name))


@dataclass(frozen=True)
class MonoidElement:
    terms: tuple[tuple[str, int], ...] = ()

    def __post_init__(self) -> None:
        merged: dict[str, int] = {}
        for name, c in self.terms:
            if not _NAME_RE.fullmatch(name):
                raise ValueError(f"bad generator name {name!r}")
            if c < 0:
                raise ValueError(f"negative coefficient for {name}")
            merged[name] = merged.get(name, 0) + c
        canon = tuple(sorted(((k, v) for k, v in merged.items() if v), key=lambda kv: natural_key(kv[0])))
        if canon != self.terms:
            object.__setattr__(self, "terms", canon)

    @classmethod
    def of(cls, coefficients: Mapping[str, int] | None = None, **kw: int) -> MonoidElement:
        items = dict(coefficients or {})
        items.update(kw)
        return cls(tuple(items.items()))

    @classmethod
    def gen(cls, name: str) -> MonoidElement:
        return cls(((name, 1),))

    @classmethod
    def sum_of(cls, names: Iterable[str]) -> MonoidElement:
        out: dict[str, int] = {}
        for name in names:
            out[name] = out.get(name, 0) + 1
        return cls(tuple(out.items()))

    @classmethod
    def parse(cls, text: str) -> MonoidElement:
        """Parse ``0``, ``e1``, ``e1+2e2`` or ``e1 + 2*e2``."""
        s = text.strip()
        if s == "0":
            return ZERO
        terms = []
        for chunk in s.split("+"):
            m = _TERM_RE.fullmatch(chunk)
            if not m:
                raise ValueError(f"bad monoid term {chunk!r} in {text!r}")
            terms.append((m.group(2), int(m.group(1) or 1)))
        return cls(tuple(terms))

    def as_dict(self) -> dict[str, int]:
        return dict(self.terms)

    def coefficient(self, name: str) -> int:
        for k, v in self.terms:
            if k == name:
                return v
        return 0

    @property
    def support(self) -> frozenset[str]:
        return frozenset(k for k, _ in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __add__(self, other: MonoidElement) -> MonoidElement:
        return MonoidElement(self.terms + other.terms)

    def __sub__(self, other: MonoidElement) -> MonoidElement:
        if not other <= self:
            raise ValueError(f"{other} is not <= {self}; difference undefined")
        d = self.as_dict()
        for k, v in other.terms:
            d[k] -= v
        return MonoidElement(tuple(d.items()))

    def __le__(self, other: MonoidElement) -> bool:
        d = other.as_dict()
        return all(d.get(k, 0) >= v for k, v in self.terms)

    def __lt__(self, other: MonoidElement) -> bool:
        return self != other and self <= other

    def __ge__(self, other: MonoidElement) -> bool:
        return other <= self

    def __gt__(self, other: MonoidElement) -> bool:
        return other < self

    def comparable(self, other: MonoidElement) -> bool:
        return self <= other or other <= self

    def apply(self, phi: Mapping[str, MonoidElement]) -> MonoidElement:
        """Image under the homomorphism sending each generator g to ``phi[g]``.

        Generators missing from ``phi`` are sent to themselves.
        """
        out: list[tuple[str, int]] = []
        for k, v in self.terms:
            img = phi.get(k)
            if img is None:
                out.append((k, v))
            else:
                out.extend((name, c * v) for name, c in img.terms)
        return MonoidElement(tuple(out))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        return "+".join(k if v == 1 else f"{v}{k}" for k, v in self.terms)

    def __repr__(self) -> str:
        return f"MonoidElement({str(self)!r})"

    def to_json(self) -> dict[str, int]:
        return self.as_dict()

    @classmethod
    def from_json(cls, data: Mapping[str, int]) -> MonoidElement:
        return cls(tuple((str(k), int(v)) for k, v in data.items()))


ZERO = MonoidElement()
