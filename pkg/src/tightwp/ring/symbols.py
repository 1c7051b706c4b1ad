"""Symbols of the exact polynomial ring.

Every symbol has a deterministic integer id, independent of the order in
which symbols are created.  Monomials pack one exponent field per id, so the
id fixes the bit position used by :mod:`tightwp.ring.mpoly`.

Kinds
-----
``Q``      pi^2, written ``pi2``
``B(i)``   L_i^2, written ``b{i}`` (i >= 1)
``M(k)``   k-th moment, written ``M{k}`` (k >= 0)
``INVM0``  1/M_0, written ``invM0``
``m(k)``   normalized moment M_k/M_0, written ``m{k}`` (k >= 1)
``BETA(k)`` kernel coefficient, written ``beta{k}`` (k >= 0)
``Z(i)``   z_i^{-2}, written ``zinv{i}`` (i >= 1)
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

Q = "Q"
INVM0 = "INVM0"
B = "B"
M = "M"
SMALLM = "m"
BETA = "BETA"
Z = "Z"

# indexed kinds, in the order of their slot inside a block of five ids
_INDEXED = (B, M, SMALLM, BETA, Z)
_MIN_INDEX = {B: 1, M: 0, SMALLM: 1, BETA: 0, Z: 1}
_PREFIX = {B: "b", M: "M", SMALLM: "m", BETA: "beta", Z: "zinv"}
_NAME_RE = re.compile(r"^(b|M|m|beta|zinv)(\d+)$")


@dataclass(frozen=True, slots=True)
class Symbol:
    kind: str
    index: int = 0

    @property
    def id(self) -> int:
        if self.kind == Q:
            return 0
        if self.kind == INVM0:
            return 1
        return 2 + 5 * self.index + _INDEXED.index(self.kind)

    @property
    def name(self) -> str:
        if self.kind == Q:
            return "pi2"
        if self.kind == INVM0:
            return "invM0"
        return f"{_PREFIX[self.kind]}{self.index}"

    def __repr__(self) -> str:
        return self.name

    def __lt__(self, other: "Symbol") -> bool:
        return self.id < other.id

    def text(self, exp: int = 1) -> str:
        """Human readable power, in terms of lengths rather than squares."""
        if self.kind == B:
            return f"L{self.index}^{2 * exp}"
        if self.kind == Q:
            return f"pi^{2 * exp}"
        if self.kind == INVM0:
            return f"M0^-{exp}"
        if self.kind == Z:
            return f"z{self.index}^-{2 * exp}"
        return self.name if exp == 1 else f"{self.name}^{exp}"

    def latex(self, exp: int = 1) -> str:
        def sup(e):
            s = str(e)
            return f"^{s}" if len(s) == 1 else "^{" + s + "}"

        def sub(i):
            s = str(i)
            return f"_{s}" if len(s) == 1 else "_{" + s + "}"

        if self.kind == B:
            return f"L{sub(self.index)}{sup(2 * exp)}"
        if self.kind == Q:
            return f"\\pi{sup(2 * exp)}"
        if self.kind == INVM0:
            return f"M_0{sup(-exp)}"
        if self.kind == Z:
            return f"z{sub(self.index)}{sup(-2 * exp)}"
        base = {M: "M", SMALLM: "m", BETA: "\\beta"}[self.kind] + sub(self.index)
        return base if exp == 1 else base + sup(exp)


@lru_cache(maxsize=None)
def _make(kind: str, index: int) -> Symbol:
    if kind in _MIN_INDEX:
        if not isinstance(index, int) or index < _MIN_INDEX[kind]:
            raise ValueError(f"invalid index {index!r} for symbol kind {kind}")
    return Symbol(kind, index)


PI2 = _make(Q, 0)
INV_M0 = _make(INVM0, 0)


def b(i: int) -> Symbol:
    return _make(B, i)


def moment(k: int) -> Symbol:
    return _make(M, k)


def small_m(k: int) -> Symbol:
    return _make(SMALLM, k)


def beta(k: int) -> Symbol:
    return _make(BETA, k)


def zinv(i: int) -> Symbol:
    return _make(Z, i)


def from_id(sid: int) -> Symbol:
    if sid == 0:
        return PI2
    if sid == 1:
        return INV_M0
    idx, slot = divmod(sid - 2, 5)
    return _make(_INDEXED[slot], idx)


def parse_symbol(name: str) -> Symbol:
    """Inverse of ``Symbol.name``; raises ValueError for unknown names."""
    if name == "pi2":
        return PI2
    if name == "invM0":
        return INV_M0
    mt = _NAME_RE.match(name)
    if not mt:
        raise ValueError(f"unknown symbol {name!r}")
    prefix, idx = mt.group(1), int(mt.group(2))
    kind = {v: k for k, v in _PREFIX.items()}[prefix]
    return _make(kind, idx)
