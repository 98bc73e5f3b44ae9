"""Exact symbolic dynamics of the Baker transformation.

A point of the unit square is a pair of finite bit strings::

    x = 0.x1 x2 x3 ...        y = 0.y1 y2 y3 ...

and the Baker map moves the leading x-bit to the front of y. Every bit of
the tape carries an integer *time label*: ``x_k`` has time ``1 - k`` and
``y_k`` has time ``k``. The forward map raises every time label by one, so
the Rademacher function ``alpha_n = U^n alpha_0`` (with ``U^n rho = rho o
B^-n``) is a single read of the bit whose time label is ``n``.

Walsh functions ``alpha_F`` are products of Rademacher functions over a
finite index set ``F``; expansions in this basis carry exact rational
coefficients (see :mod:`agelab.exact`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

import numpy as np

from .errors import (
    AgeUndefinedForEquilibrium,
    DomainError,
    EmptyFuture,
    EmptyPast,
    PrecisionExhausted,
)
from .exact import ExactComplex, format_rational

__all__ = [
    "BitTape",
    "CylinderSpec",
    "WalshIndexSet",
    "WalshExpansion",
    "baker_forward",
    "baker_inverse",
    "baker_real",
    "measure_cylinder",
    "rademacher_eval",
    "walsh_eval",
    "koopman_apply",
    "age_apply",
    "age_commutation_residual",
    "inner_product_walsh",
    "random_tape",
    "random_bit_arrays",
    "walsh_eval_batch",
    "random_expansion",
]


def _bits(seq) -> tuple[int, ...]:
    out = tuple(int(b) for b in seq)
    if any(b not in (0, 1) for b in out):
        raise ValueError(f"bits must be 0 or 1, got {seq!r}")
    return out


def _decode(bits: tuple[int, ...]) -> Fraction:
    value = 0
    for b in bits:
        value = 2 * value + b
    return Fraction(value, 1 << len(bits))


@dataclass(frozen=True)
class BitTape:
    """A dyadic point of the unit square with an explicit bit budget."""

    x_bits: tuple[int, ...]
    y_bits: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "x_bits", _bits(self.x_bits))
        object.__setattr__(self, "y_bits", _bits(self.y_bits))

    @classmethod
    def from_strings(cls, x: str, y: str) -> BitTape:
        """``BitTape.from_strings("01", "1")`` is x = 0.01b, y = 0.1b."""
        return cls(tuple(x), tuple(y))

    @property
    def x(self) -> Fraction:
        return _decode(self.x_bits)

    @property
    def y(self) -> Fraction:
        return _decode(self.y_bits)

    def __len__(self) -> int:
        return len(self.x_bits) + len(self.y_bits)

    @property
    def time_range(self) -> range:
        """Time labels that can be read from this tape."""
        return range(1 - len(self.x_bits), len(self.y_bits) + 1)

    def bit(self, n: int) -> int:
        """The bit with time label ``n``."""
        if n <= 0:
            k = -n
            if k >= len(self.x_bits):
                raise PrecisionExhausted(f"time {n} needs x-bit {k + 1}, tape has {len(self.x_bits)}")
            return self.x_bits[k]
        if n > len(self.y_bits):
            raise PrecisionExhausted(f"time {n} needs y-bit {n}, tape has {len(self.y_bits)}")
        return self.y_bits[n - 1]

    def __str__(self) -> str:
        xs = "".join(map(str, self.x_bits))
        ys = "".join(map(str, self.y_bits))
        return f"x=0.{xs}b y=0.{ys}b"


def baker_forward(tape: BitTape) -> BitTape:
    """One step of B: the leading x-bit becomes the leading y-bit."""
    if not tape.x_bits:
        raise EmptyFuture("x-precision exhausted; allocate more x-bits")
    return BitTape(tape.x_bits[1:], (tape.x_bits[0],) + tape.y_bits)


def baker_inverse(tape: BitTape) -> BitTape:
    if not tape.y_bits:
        raise EmptyPast("y-precision exhausted; allocate more y-bits")
    return BitTape((tape.y_bits[0],) + tape.x_bits, tape.y_bits[1:])


def baker_iterate(tape: BitTape, n: int) -> BitTape:
    """B^n for any integer n (negative n runs the inverse)."""
    step = baker_forward if n >= 0 else baker_inverse
    for _ in range(abs(n)):
        tape = step(tape)
    return tape


def baker_real(x: float, y: float) -> tuple[float, float]:
    """Floating-point Baker map.

    ``x = 1/2`` is sent through the right-half branch, which is where the
    tape places it (its leading bit is 1).
    """
    if not (0.0 <= x < 1.0 and 0.0 <= y < 1.0):
        raise DomainError(f"point ({x}, {y}) is outside [0,1)^2")
    if x < 0.5:
        return 2.0 * x, 0.5 * y
    return 2.0 * x - 1.0, 0.5 * y + 0.5


@dataclass(frozen=True)
class CylinderSpec:
    """Constraints ``n -> i`` meaning ``B^-n(w)`` lies in the cell ``Delta_i``.

    Cell 1 is the left half ``x < 1/2``, cell 2 the right half.
    """

    constraints: tuple[tuple[int, int], ...]

    def __init__(self, constraints: Mapping[int, int] | Iterable[tuple[int, int]]):
        items = constraints.items() if isinstance(constraints, Mapping) else constraints
        pairs = tuple(sorted((int(n), int(i)) for n, i in items))
        if not pairs:
            raise ValueError("a cylinder needs at least one constraint")
        times = [n for n, _ in pairs]
        if len(set(times)) != len(times):
            raise ValueError(f"repeated time coordinate in {pairs}")
        if any(i not in (1, 2) for _, i in pairs):
            raise ValueError(f"partition index must be 1 or 2 in {pairs}")
        object.__setattr__(self, "constraints", pairs)

    def __len__(self) -> int:
        return len(self.constraints)

    def shifted(self, k: int) -> CylinderSpec:
        return CylinderSpec((n + k, i) for n, i in self.constraints)

    def contains(self, tape: BitTape) -> bool:
        return all(tape.bit(n) == i - 1 for n, i in self.constraints)


def _axis_measure(positions: list[int]) -> Fraction:
    # Length of the set of [0,1) points whose binary digits at `positions`
    # are fixed: a union of 2^(depth - fixed) dyadic intervals of size 2^-depth.
    if not positions:
        return Fraction(1)
    depth = max(positions)
    free = depth - len(positions)
    return Fraction(1 << free, 1 << depth)


def measure_cylinder(spec: CylinderSpec) -> Fraction:
    """Lebesgue measure of the cylinder set, as an exact rational."""
    x_pos = [1 - n for n, _ in spec.constraints if n <= 0]
    y_pos = [n for n, _ in spec.constraints if n > 0]
    return _axis_measure(x_pos) * _axis_measure(y_pos)


def rademacher_eval(n: int, tape: BitTape) -> int:
    """``alpha_n(w)``: +1 if ``B^-n(w)`` is in the left half, else -1."""
    return 1 - 2 * tape.bit(n)


# --------------------------------------------------------------------------
# Walsh basis


@dataclass(frozen=True, order=True)
class WalshIndexSet:
    indices: tuple[int, ...] = ()

    def __post_init__(self):
        idx = tuple(int(n) for n in self.indices)
        if len(set(idx)) != len(idx):
            raise ValueError(f"Walsh indices must be distinct: {idx}")
        object.__setattr__(self, "indices", tuple(sorted(idx)))

    @classmethod
    def of(cls, *indices: int) -> WalshIndexSet:
        return cls(indices)

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    @property
    def is_empty(self) -> bool:
        return not self.indices

    @property
    def age(self) -> int:
        """``max F``; undefined for the empty set."""
        if not self.indices:
            raise AgeUndefinedForEquilibrium("the constant function has no age")
        return self.indices[-1]

    def shift(self, n: int) -> WalshIndexSet:
        return WalshIndexSet(tuple(k + n for k in self.indices))

    def __str__(self) -> str:
        return "{" + ",".join(str(k) for k in self.indices) + "}"


EMPTY_SET = WalshIndexSet()


def walsh_eval(F: WalshIndexSet, tape: BitTape) -> int:
    value = 1
    for n in F:
        value *= rademacher_eval(n, tape)
    return value


class WalshExpansion:
    """Finite linear combination ``sum_F a_F alpha_F`` with exact coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[WalshIndexSet, object] | None = None):
        clean: dict[WalshIndexSet, ExactComplex] = {}
        for F, a in (terms or {}).items():
            if not isinstance(F, WalshIndexSet):
                F = WalshIndexSet(tuple(F))
            a = ExactComplex.coerce(a)
            if a:
                clean[F] = clean.get(F, ExactComplex(Fraction(0))) + a
        self._terms = {F: a for F, a in sorted(clean.items()) if a}

    @classmethod
    def _from_clean(cls, terms: Mapping[WalshIndexSet, ExactComplex]) -> WalshExpansion:
        # internal fast path: keys are distinct index sets, values ExactComplex
        out = cls.__new__(cls)
        out._terms = {F: a for F, a in sorted(terms.items()) if a}
        return out

    @classmethod
    def basis(cls, *indices: int, coeff=1) -> WalshExpansion:
        return cls({WalshIndexSet(indices): coeff})

    @property
    def terms(self) -> dict[WalshIndexSet, ExactComplex]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def __len__(self) -> int:
        return len(self._terms)

    def __iter__(self):
        return iter(self._terms)

    def __getitem__(self, F) -> ExactComplex:
        if not isinstance(F, WalshIndexSet):
            F = WalshIndexSet(tuple(F))
        return self._terms.get(F, ExactComplex(Fraction(0)))

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other):
        if not isinstance(other, WalshExpansion):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        return hash(tuple(self._terms.items()))

    def __add__(self, other: WalshExpansion) -> WalshExpansion:
        merged = dict(self._terms)
        for F, a in other._terms.items():
            merged[F] = merged[F] + a if F in merged else a
        return WalshExpansion._from_clean(merged)

    def __neg__(self) -> WalshExpansion:
        return WalshExpansion._from_clean({F: -a for F, a in self._terms.items()})

    def __sub__(self, other: WalshExpansion) -> WalshExpansion:
        return self + (-other)

    def __mul__(self, scalar) -> WalshExpansion:
        c = ExactComplex.coerce(scalar)
        return WalshExpansion._from_clean({F: a * c for F, a in self._terms.items()})

    __rmul__ = __mul__

    @property
    def constant_term(self) -> ExactComplex:
        return self[EMPTY_SET]

    @property
    def is_mean_zero(self) -> bool:
        return EMPTY_SET not in self._terms

    def norm_squared(self) -> Fraction:
        """Exact L2 norm squared; the alpha_F are orthonormal."""
        return sum((a.abs2() for a in self._terms.values()), Fraction(0))

    def norm(self) -> float:
        return math.sqrt(self.norm_squared())

    def evaluate(self, tape: BitTape) -> ExactComplex:
        total = ExactComplex(Fraction(0))
        for F, a in self._terms.items():
            total = total + a if walsh_eval(F, tape) > 0 else total - a
        return total

    def time_span(self) -> tuple[int, int] | None:
        """Smallest and largest index used, or None for constants/zero."""
        used = [n for F in self._terms for n in F]
        return (min(used), max(used)) if used else None

    def to_text(self) -> str:
        """One line per term: ``F={n1,n2} re im`` with exact rationals."""
        lines = [
            f"F={F} {format_rational(a.re)} {format_rational(a.im)}"
            for F, a in self._terms.items()
        ]
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_text(cls, text: str) -> WalshExpansion:
        terms: dict[WalshIndexSet, ExactComplex] = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) not in (2, 3) or not parts[0].startswith("F={") or not parts[0].endswith("}"):
                raise ValueError(f"line {lineno}: expected 'F={{...}} re [im]', got {raw!r}")
            body = parts[0][3:-1].strip()
            F = WalshIndexSet(tuple(int(s) for s in body.split(",")) if body else ())
            re_ = Fraction(parts[1])
            im_ = Fraction(parts[2]) if len(parts) == 3 else Fraction(0)
            if F in terms:
                raise ValueError(f"line {lineno}: duplicate index set {F}")
            terms[F] = ExactComplex(re_, im_)
        return cls(terms)

    def __repr__(self) -> str:
        body = " + ".join(f"{a!r}*alpha{F}" for F, a in self._terms.items())
        return f"WalshExpansion({body or '0'})"


def koopman_apply(rho: WalshExpansion, n: int) -> WalshExpansion:
    """``U^n rho``: every index set is translated by ``n``."""
    return WalshExpansion._from_clean({F.shift(n): a for F, a in rho.items()})


def age_apply(rho: WalshExpansion) -> WalshExpansion:
    """Discrete age operator: ``A alpha_F = (max F) alpha_F``."""
    if not rho.is_mean_zero:
        raise AgeUndefinedForEquilibrium(
            f"constant term {rho.constant_term!r} has no age"
        )
    return WalshExpansion._from_clean({F: a * F.age for F, a in rho.items()})


def age_commutation_residual(rho: WalshExpansion, n: int) -> float:
    """``|| (U^-n A U^n - A - n) rho ||`` computed through the operators."""
    conjugated = koopman_apply(age_apply(koopman_apply(rho, n)), -n)
    residual = conjugated - age_apply(rho) - rho * n
    return residual.norm()


def inner_product_walsh(rho: WalshExpansion, tau: WalshExpansion) -> ExactComplex:
    total = ExactComplex(Fraction(0))
    for F, a in rho.items():
        b = tau[F]
        if b:
            total = total + a.conjugate() * b
    return total


# --------------------------------------------------------------------------
# random sampling helpers (seeded numpy generators only)


def random_tape(rng: np.random.Generator, x_depth: int, y_depth: int) -> BitTape:
    return BitTape(
        tuple(rng.integers(0, 2, size=x_depth).tolist()),
        tuple(rng.integers(0, 2, size=y_depth).tolist()),
    )


def random_bit_arrays(rng: np.random.Generator, count: int, x_depth: int, y_depth: int):
    """``count`` random tapes as two uint8 arrays of shape (count, depth)."""
    xb = rng.integers(0, 2, size=(count, x_depth), dtype=np.uint8)
    yb = rng.integers(0, 2, size=(count, y_depth), dtype=np.uint8)
    return xb, yb


def _bit_column(n: int, x_bits: np.ndarray, y_bits: np.ndarray) -> np.ndarray:
    if n <= 0:
        if -n >= x_bits.shape[1]:
            raise PrecisionExhausted(f"time {n} outside the sampled x-bits")
        return x_bits[:, -n]
    if n > y_bits.shape[1]:
        raise PrecisionExhausted(f"time {n} outside the sampled y-bits")
    return y_bits[:, n - 1]


def walsh_eval_batch(F: WalshIndexSet, x_bits: np.ndarray, y_bits: np.ndarray) -> np.ndarray:
    """Vectorized :func:`walsh_eval` over rows of bit arrays (int8 of +-1)."""
    parity = np.zeros(x_bits.shape[0], dtype=np.uint8)
    for n in F:
        parity ^= _bit_column(n, x_bits, y_bits)
    return (1 - 2 * parity.astype(np.int8)).astype(np.int8)


def cylinder_indicator_batch(spec: CylinderSpec, x_bits: np.ndarray, y_bits: np.ndarray) -> np.ndarray:
    inside = np.ones(x_bits.shape[0], dtype=bool)
    for n, i in spec.constraints:
        inside &= _bit_column(n, x_bits, y_bits) == (i - 1)
    return inside


def random_expansion(
    rng: np.random.Generator,
    max_terms: int = 64,
    index_radius: int = 16,
    mean_zero: bool = True,
    min_age: int | None = None,
    max_set_size: int = 4,
) -> WalshExpansion:
    """Random expansion with small Gaussian-rational coefficients.

    Index sets draw from ``[-index_radius, index_radius]``; ``min_age``
    keeps only sets with ``max F >= min_age``.
    """
    terms: dict[WalshIndexSet, ExactComplex] = {}
    n_terms = int(rng.integers(1, max_terms + 1))
    pool = np.arange(-index_radius, index_radius + 1)
    while len(terms) < n_terms:
        size = int(rng.integers(0 if not mean_zero else 1, max_set_size + 1))
        F = WalshIndexSet(tuple(rng.choice(pool, size=size, replace=False).tolist()))
        if min_age is not None and (F.is_empty or F.age < min_age):
            continue
        coeff = ExactComplex(
            Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 9))),
            Fraction(int(rng.integers(-9, 10)), int(rng.integers(1, 9))),
        )
        if coeff:
            terms[F] = coeff
    return WalshExpansion(terms)
