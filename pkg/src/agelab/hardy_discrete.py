"""Forward-stable / transient split of Walsh expansions.

Terms are classified by age: ``max F >= 1`` is forward-stable (the ``H+``
part), ``max F <= 0`` and the constant term are transient (``H-``). Since
``U`` raises every age by one, each mean-zero finite expansion is absorbed
into ``H+`` after finitely many steps.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .baker_core import WalshExpansion, koopman_apply
from .errors import AgeUndefinedForEquilibrium, EmptyExpansion, InvalidSubspace

__all__ = [
    "HardySplitDiscrete",
    "split_by_age",
    "verify_forward_stability",
    "minus_norm_after",
    "absorption_time",
    "convergence_table",
    "write_convergence_csv",
]


def _is_plus(F) -> bool:
    return not F.is_empty and F.age >= 1


@dataclass(frozen=True)
class HardySplitDiscrete:
    plus: WalshExpansion
    minus: WalshExpansion

    def reconstruct(self) -> WalshExpansion:
        return self.plus + self.minus


def split_by_age(rho: WalshExpansion) -> HardySplitDiscrete:
    plus = {F: a for F, a in rho.items() if _is_plus(F)}
    minus = {F: a for F, a in rho.items() if not _is_plus(F)}
    return HardySplitDiscrete(WalshExpansion._from_clean(plus), WalshExpansion._from_clean(minus))


def verify_forward_stability(rho_plus: WalshExpansion) -> bool:
    """True iff ``U rho_plus`` stays in the forward-stable subspace."""
    if split_by_age(rho_plus).minus:
        raise InvalidSubspace("input has terms with max F <= 0")
    return not split_by_age(koopman_apply(rho_plus, 1)).minus


def _minus_norm_squared(rho: WalshExpansion, n: int) -> Fraction:
    return split_by_age(koopman_apply(rho, n)).minus.norm_squared()


def minus_norm_after(rho: WalshExpansion, n: int) -> float:
    """``|| minus part of U^n rho ||``, from exact coefficients."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return math.sqrt(_minus_norm_squared(rho, n))


def absorption_time(rho: WalshExpansion) -> int:
    """Smallest ``n*`` with no transient component for every ``n >= n*``."""
    if not rho.is_mean_zero:
        raise AgeUndefinedForEquilibrium("a constant term is never absorbed")
    if not rho:
        raise EmptyExpansion("the zero expansion has no absorption time")
    youngest = min(F.age for F in rho)
    return max(0, 1 - youngest)


def convergence_table(rho: WalshExpansion, n_max: int) -> list[tuple[int, float, float]]:
    """Rows ``(n, minus_norm, plus_norm)`` for ``n = 0..n_max``."""
    rows = []
    for n in range(n_max + 1):
        split = split_by_age(koopman_apply(rho, n))
        rows.append((n, split.minus.norm(), split.plus.norm()))
    return rows


def write_convergence_csv(path, rows) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["n", "minus_norm", "plus_norm"])
        for n, minus, plus in rows:
            w.writerow([n, f"{minus:.17g}", f"{plus:.17g}"])
    return path
