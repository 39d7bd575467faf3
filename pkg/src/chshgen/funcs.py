"""Boolean truth tables f:{0,1}^2 -> {0,1} and g:{0,1,2}^2 -> {0,1}.

Bits are stored in lexicographic input order, so ``[f(0,0), f(0,1), f(1,0), f(1,1)]``
for two-bit inputs. The integer ``code`` reads the bits MSB first, which makes
``[0,0,0,1]`` (AND) code 1 and ``[0,1,1,0]`` (XOR) code 6.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache


@dataclass(frozen=True, order=True)
class _Table:
    bits: tuple[int, ...]

    arity = 0  # inputs per variable (2 or 3)

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if len(bits) != self.arity**2:
            raise ValueError(
                f"{type(self).__name__} needs {self.arity ** 2} bits, got {len(bits)}"
            )
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"truth table entries must be 0/1: {list(self.bits)}")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def from_code(cls, code: int):
        n = cls.arity**2
        if not 0 <= code < 2**n:
            raise ValueError(f"code {code} out of range for {n}-bit table")
        return cls(tuple((code >> (n - 1 - i)) & 1 for i in range(n)))

    @classmethod
    def parse(cls, text: str):
        """Parse the bracket notation, e.g. ``"[0,1,1,0]"``."""
        try:
            bits = json.loads(text)
        except (TypeError, json.JSONDecodeError) as exc:
            raise ValueError(f"invalid truth table {text!r}") from exc
        if not isinstance(bits, list):
            raise ValueError(f"invalid truth table {text!r}")
        return cls(tuple(bits))

    @property
    def code(self) -> int:
        out = 0
        for b in self.bits:
            out = (out << 1) | b
        return out

    @property
    def is_constant(self) -> bool:
        return len(set(self.bits)) == 1

    def ones(self) -> int:
        return sum(self.bits)

    def complement(self):
        return type(self)(tuple(1 - b for b in self.bits))

    def __call__(self, a: int, b: int) -> int:
        if a not in range(self.arity) or b not in range(self.arity):
            raise ValueError(f"input ({a!r}, {b!r}) outside the {self.arity}-ary domain")
        return self.bits[a * self.arity + b]

    def to_list(self) -> list[int]:
        return list(self.bits)

    def __str__(self):
        return "[" + ",".join(map(str, self.bits)) + "]"


class TruthTable2(_Table):
    arity = 2


class TruthTable3(_Table):
    arity = 3


AND = TruthTable2((0, 0, 0, 1))
OR = TruthTable2((0, 1, 1, 1))
XOR = TruthTable2((0, 1, 1, 0))
XNOR = TruthTable2((1, 0, 0, 1))
PROJ_X = TruthTable2((0, 0, 1, 1))
PROJ_Y = TruthTable2((0, 1, 0, 1))
EMBEDDED_XOR = TruthTable3((0, 1, 1, 1, 0, 1, 1, 1, 0))


@lru_cache(maxsize=None)
def enumerate_f2() -> tuple[TruthTable2, ...]:
    """The 14 non-constant two-bit functions, ascending by code."""
    return tuple(TruthTable2.from_code(c) for c in range(1, 15))


@lru_cache(maxsize=None)
def enumerate_g3() -> tuple[TruthTable3, ...]:
    """The 510 non-constant functions on {0,1,2}^2, ascending by code."""
    return tuple(TruthTable3.from_code(c) for c in range(1, 511))


@lru_cache(maxsize=None)
def all_tables2() -> tuple[TruthTable2, ...]:
    """All 16 two-bit tables including the constants (restrictions may be constant)."""
    return tuple(TruthTable2.from_code(c) for c in range(16))


def restrict_g3(g3: TruthTable3) -> TruthTable2:
    b = g3.bits
    return TruthTable2((b[0], b[1], b[3], b[4]))


def eval2(f: TruthTable2, x: int, y: int) -> int:
    if not isinstance(f, TruthTable2):
        raise TypeError("eval2 expects a TruthTable2")
    return f(x, y)


def eval3(g: TruthTable3, a: int, b: int) -> int:
    if not isinstance(g, TruthTable3):
        raise TypeError("eval3 expects a TruthTable3")
    return g(a, b)


def ones_count(t: _Table) -> int:
    return t.ones()


def table_for_dim(dim: int, bits) -> _Table:
    if dim == 2:
        return TruthTable2(tuple(bits))
    if dim == 3:
        return TruthTable3(tuple(bits))
    raise ValueError(f"unsupported dimension {dim!r}")
