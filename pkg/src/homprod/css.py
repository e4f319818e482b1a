"""CSS-code view of a chain complex: checks, syndromes, metachecks, reports.

Level conventions: qubits sit at level 0.  Z checks (detecting X errors)
are the rows of d_0; X checks (detecting Z errors) are the rows of
d_{-1}^T.  A length-4 complex additionally carries metachecks: d_1 on
the Z-syndrome bits and d_{-2}^T on the X-syndrome bits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from . import gf2
from .chain import (
    ChainComplex,
    Distance,
    betti_number,
    cohomological_distance,
    homological_distance,
    require_valid,
)

__all__ = [
    "CssCode",
    "PauliError",
    "Syndrome",
    "CodeReport",
    "from_complex",
    "pauli_weight",
    "pauli_min_weight",
    "code_report",
]


@dataclass(frozen=True)
class PauliError:
    """X[e] Z[f] in binary form: e flags X action, f flags Z action."""

    e: np.ndarray
    f: np.ndarray

    @staticmethod
    def identity(n: int) -> "PauliError":
        return PauliError(np.zeros(n, dtype=np.uint8), np.zeros(n, dtype=np.uint8))

    @staticmethod
    def x_only(e) -> "PauliError":
        e = gf2.as_bin(e).reshape(-1)
        return PauliError(e, np.zeros_like(e))

    @staticmethod
    def z_only(f) -> "PauliError":
        f = gf2.as_bin(f).reshape(-1)
        return PauliError(np.zeros_like(f), f)

    def compose(self, other: "PauliError") -> "PauliError":
        return PauliError(self.e ^ other.e, self.f ^ other.f)

    def weight(self) -> int:
        return int(np.count_nonzero(self.e | self.f))

    def is_identity(self) -> bool:
        return not (self.e.any() or self.f.any())


def pauli_weight(p: PauliError) -> int:
    return p.weight()


@dataclass(frozen=True)
class Syndrome:
    """Z-check outcomes (from X errors) and X-check outcomes (from Z errors)."""

    z_part: np.ndarray
    x_part: np.ndarray

    def weight(self) -> int:
        return int(self.z_part.sum()) + int(self.x_part.sum())

    def compose(self, other: "Syndrome") -> "Syndrome":
        return Syndrome(self.z_part ^ other.z_part, self.x_part ^ other.x_part)

    def is_zero(self) -> bool:
        return not (self.z_part.any() or self.x_part.any())


class CssCode:
    """Checks and metachecks of a CSS code read off a chain complex."""

    def __init__(
        self,
        z_checks: np.ndarray,
        x_checks: np.ndarray,
        z_metachecks: Optional[np.ndarray] = None,
        x_metachecks: Optional[np.ndarray] = None,
    ) -> None:
        self.z_checks = gf2.as_bin(z_checks)
        self.x_checks = gf2.as_bin(x_checks)
        if self.z_checks.shape[1] != self.x_checks.shape[1]:
            raise ValueError("Z and X checks disagree on qubit count")
        self.n = self.z_checks.shape[1]
        if gf2.mat_mul(self.z_checks, self.x_checks.T).any():
            raise ValueError("Z and X checks do not commute")
        self.z_metachecks = None if z_metachecks is None else gf2.as_bin(z_metachecks)
        self.x_metachecks = None if x_metachecks is None else gf2.as_bin(x_metachecks)
        if self.z_metachecks is not None and gf2.mat_mul(
            self.z_metachecks, self.z_checks
        ).any():
            raise ValueError("Z metachecks do not annihilate Z checks")
        if self.x_metachecks is not None and gf2.mat_mul(
            self.x_metachecks, self.x_checks
        ).any():
            raise ValueError("X metachecks do not annihilate X checks")
        self._solvers: dict[str, gf2.Gf2Solver] = {}
        self._caches: dict[str, np.ndarray] = {}

    @property
    def has_metachecks(self) -> bool:
        return self.z_metachecks is not None and self.x_metachecks is not None

    @property
    def num_z_checks(self) -> int:
        return self.z_checks.shape[0]

    @property
    def num_x_checks(self) -> int:
        return self.x_checks.shape[0]

    def solver(self, which: str) -> gf2.Gf2Solver:
        """Cached elimination for one of the code's matrices."""
        if which not in self._solvers:
            matrix = {
                "z_checks": self.z_checks,
                "x_checks": self.x_checks,
                "z_metachecks": self.z_metachecks,
                "x_metachecks": self.x_metachecks,
            }[which]
            if matrix is None:
                raise ValueError(f"code has no {which}")
            self._solvers[which] = gf2.Gf2Solver(matrix)
        return self._solvers[which]

    def syndrome(self, error: PauliError) -> Syndrome:
        if error.e.shape[0] != self.n or error.f.shape[0] != self.n:
            raise ValueError(f"error length does not match {self.n} qubits")
        return Syndrome(
            gf2.mat_vec(self.z_checks, error.e),
            gf2.mat_vec(self.x_checks, error.f),
        )

    def metasyndrome(self, s: Syndrome) -> np.ndarray:
        """Block-diagonal metacheck application; zero on every real syndrome."""
        if not self.has_metachecks:
            raise ValueError("code has no metachecks")
        return np.concatenate(
            [
                gf2.mat_vec(self.z_metachecks, s.z_part),
                gf2.mat_vec(self.x_metachecks, s.x_part),
            ]
        )

    def in_syndrome_image(self, s: Syndrome) -> bool:
        """Is s = syndrome(E) for some Pauli E?"""
        return self.solver("z_checks").in_image(s.z_part) and self.solver(
            "x_checks"
        ).in_image(s.x_part)

    def coset_annihilator(self, side: str) -> np.ndarray:
        """Matrix B whose kernel is exactly the stabiliser span on one side.

        side "x": X-error vectors are stabiliser-equivalent iff they have
        the same image under B (the span of X-type stabilisers is the
        column space of x_checks^T, i.e. ker B).  side "z" mirrors.
        """
        key = f"ann_{side}"
        cached = self._caches.get(key)
        if cached is None:
            span = self.x_checks if side == "x" else self.z_checks
            basis = gf2.kernel_basis(span)
            cached = np.array(basis, dtype=np.uint8).reshape(len(basis), self.n)
            self._caches[key] = cached
        return cached


def from_complex(complex_: ChainComplex) -> CssCode:
    """Read checks (and metachecks, when present) off a validated complex."""
    require_valid(complex_)
    if complex_.length not in (2, 4):
        raise ValueError(
            f"need a length-2 or length-4 complex with qubits at level 0, "
            f"got length {complex_.length}"
        )
    expected_min = -1 if complex_.length == 2 else -2
    if complex_.j_min != expected_min:
        raise ValueError(
            f"length-{complex_.length} complex must span levels "
            f"{expected_min}..{expected_min + complex_.length}"
        )
    z = complex_.delta(0)
    x = complex_.delta(-1).T
    if complex_.length == 2:
        return CssCode(z, x)
    return CssCode(z, x, complex_.delta(1), complex_.delta(-2).T)


def _coset_elements(code: CssCode, side: str, v: np.ndarray, budget: int):
    """All vectors of weight <= budget equal to v up to stabilisers, lex order.

    side "x" means X-error vectors modulo X-type stabiliser supports
    (rows of x_checks); side "z" the mirror.
    """
    ann = code.coset_annihilator(side)
    return gf2.all_solutions_up_to_weight(ann, gf2.mat_vec(ann, v), budget)


def pauli_min_weight(code: CssCode, p: PauliError, max_weight: int) -> Optional[int]:
    """Least weight of p times any stabiliser, or None when it exceeds budget.

    The X and Z coset sides are searched independently and then joined on
    combined support, which is exact within the budget.
    """
    if p.is_identity():
        return 0
    xs = _coset_elements(code, "x", p.e, max_weight)
    zs = _coset_elements(code, "z", p.f, max_weight)
    best: Optional[int] = None
    for ev in xs:
        e_supp = np.flatnonzero(ev)
        for fv in zs:
            w = int(np.union1d(e_supp, np.flatnonzero(fv)).size)
            if best is None or w < best:
                best = w
    if best is not None and best <= max_weight:
        return best
    return None


@dataclass
class CodeReport:
    n: int
    k: int
    d_q: Distance
    d_ss: Distance
    redundancy: Fraction
    max_check_weight: int
    mean_check_weight: Fraction
    max_qubit_degree: int

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "d_q": self.d_q.to_json(),
            "d_ss": self.d_ss.to_json(),
            "redundancy": {
                "value": float(self.redundancy),
                "exact": str(self.redundancy),
            },
            "max_check_weight": self.max_check_weight,
            "mean_check_weight": {
                "value": float(self.mean_check_weight),
                "exact": str(self.mean_check_weight),
            },
            "max_qubit_degree": self.max_qubit_degree,
        }


def combine_distances(a: Distance, b: Distance) -> Distance:
    """min of two distances; a lower bound only caps from below."""
    if a.status == "exact" and b.status == "exact":
        chosen = a if a.value <= b.value else b
        return chosen
    if a.status == "exact" and a.value <= b.value:
        return a
    if b.status == "exact" and b.value <= a.value:
        return b
    return Distance(min(a.value, b.value), "lower_bound")


def code_report(
    complex_: ChainComplex, max_weight: int = 4, distance_search: bool = True
) -> CodeReport:
    """All code parameters of a complex, distances carrying exactness status.

    Check statistics pool the Z- and X-check rows together; the mean is an
    exact reduced rational.
    """
    code = from_complex(complex_)
    n = complex_.size(0)
    k = betti_number(complex_, 0)
    if distance_search:
        d_q = combine_distances(
            homological_distance(complex_, 0, max_weight),
            cohomological_distance(complex_, -1, max_weight),
        )
    else:
        d_q = Distance(1.0, "lower_bound")
    if complex_.length == 4:
        if betti_number(complex_, 1) == 0 and betti_number(complex_, -1) == 0:
            d_ss = Distance(math.inf, "exact")
        else:
            d_ss = combine_distances(
                homological_distance(complex_, 1, max_weight),
                cohomological_distance(complex_, -2, max_weight),
            )
    else:
        # no metachecks: every metacheck-consistent syndrome is a syndrome
        d_ss = Distance(math.inf, "exact")
    from .product import redundancy as _redundancy

    check_weights = np.concatenate(
        [code.z_checks.sum(axis=1), code.x_checks.sum(axis=1)]
    ).astype(np.int64)
    qubit_degrees = (
        code.z_checks.sum(axis=0).astype(np.int64)
        + code.x_checks.sum(axis=0).astype(np.int64)
    )
    return CodeReport(
        n=n,
        k=k,
        d_q=d_q,
        d_ss=d_ss,
        redundancy=_redundancy(complex_),
        max_check_weight=int(check_weights.max()) if check_weights.size else 0,
        mean_check_weight=Fraction(int(check_weights.sum()), len(check_weights))
        if check_weights.size
        else Fraction(0),
        max_qubit_degree=int(qubit_degrees.max()) if qubit_degrees.size else 0,
    )
