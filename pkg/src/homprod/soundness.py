"""Soundness profiling and constructive preimage witnesses.

A map d is (t, f)-sound when every syndrome s = d r with |s| < t admits a
preimage of weight at most f(|s|).  This module measures that profile
exhaustively (image-first: syndromes enumerated by weight), certifies or
refutes claims, and produces constructive witnesses for the two product
constructions:

* single product: both maps into the middle level satisfy f(x) = x^2/4
  up to t = min(d_0, d_0^T), via repeated rank-one reductions of the
  reshaped solution;

* double product: the map out of the qubit level satisfies f(x) = x^3/4
  up to the same t, via a support-shrinking transformation of the middle
  reshaped block followed by columnwise/rowwise reuse of the single
  product witnesses.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from . import gf2
from .bounds import PolyBound, QUADRATIC_OVER_4, CUBIC_OVER_4
from .chain import ChainComplex

__all__ = [
    "SoundnessProfile",
    "Verdict",
    "PreimageError",
    "profile_map",
    "profile_map_error_first",
    "certify_map",
    "pauli_weight_table",
    "certify_checks",
    "SingleWitness",
    "single_product_preimage",
    "PartialDecodeState",
    "partial_decode",
    "RemainderTerm",
    "DoubleWitness",
    "double_product_preimage",
]


class PreimageError(ValueError):
    """Requested witness does not exist (syndrome outside the map's image)."""


@dataclass(frozen=True)
class Verdict:
    kind: str  # "certified" | "counterexample" | "budget_limited"
    detail: str
    counterexample: Optional[np.ndarray] = None

    @property
    def certified(self) -> bool:
        return self.kind == "certified"


@dataclass
class SoundnessProfile:
    """Worst-case minimum preimage weight per syndrome weight.

    worst[x] is the largest "minimum |r| with d r = s" over all syndromes
    s in the image with |s| = x; entries equal to budget+1 mean the
    minimum exceeded the preimage search budget.
    """

    worst: dict[int, int]
    preimage_budget: int
    x_max: int
    domain: str
    threshold: Optional[float] = None
    bound: Optional[PolyBound] = None
    verdict: Optional[Verdict] = None

    def to_json(self) -> dict:
        out = {
            "worst_min_preimage_by_syndrome_weight": {
                str(x): w for x, w in sorted(self.worst.items())
            },
            "preimage_budget": self.preimage_budget,
            "x_max": self.x_max,
            "domain": self.domain,
        }
        if self.threshold is not None:
            out["threshold"] = (
                "inf" if math.isinf(self.threshold) else int(self.threshold)
            )
        if self.bound is not None:
            out["bound"] = self.bound.to_json()
        if self.verdict is not None:
            out["verdict"] = {
                "kind": self.verdict.kind,
                "detail": self.verdict.detail,
            }
        return out


def _image_annihilator(delta: np.ndarray) -> np.ndarray:
    """Matrix whose kernel is exactly im(delta)."""
    basis = gf2.kernel_basis(delta.T)
    return np.array(basis, dtype=np.uint8).reshape(len(basis), delta.shape[0])


def profile_map(
    delta,
    x_max: int,
    preimage_budget: int,
) -> SoundnessProfile:
    """Image-first profile: enumerate image syndromes by weight.

    Exhaustive over every syndrome of weight <= x_max, so a verdict drawn
    from this profile is a certificate, not a sample.
    """
    delta = gf2.as_bin(delta)
    ann = _image_annihilator(delta)
    worst: dict[int, int] = {0: 0}
    for s in gf2.kernel_vectors_by_weight(ann, x_max):
        x = gf2.weight(s)
        found = gf2.min_weight_solution(delta, s, preimage_budget)
        w = found[1] if found is not None else preimage_budget + 1
        if w > worst.get(x, 0):
            worst[x] = w
    return SoundnessProfile(
        worst, preimage_budget, x_max, domain=f"all image syndromes of weight <= {x_max}"
    )


def profile_map_error_first(delta, w_domain_max: Optional[int] = None) -> SoundnessProfile:
    """Definition-shaped profile: enumerate errors r, then their syndromes.

    Only for tiny domains (full space when the domain dimension is at
    most 20, else all r with |r| <= w_domain_max); used to cross-check
    the image-first computation.
    """
    delta = gf2.as_bin(delta)
    n = delta.shape[1]
    syndromes: dict[bytes, np.ndarray] = {}
    if n <= 20 and w_domain_max is None:
        rs = (
            np.array([(code >> i) & 1 for i in range(n)], dtype=np.uint8)
            for code in range(2**n)
        )
        domain = "full error space"
    elif w_domain_max is not None:
        def gen():
            yield np.zeros(n, dtype=np.uint8)
            for w in range(1, w_domain_max + 1):
                for support in itertools.combinations(range(n), w):
                    r = np.zeros(n, dtype=np.uint8)
                    for i in support:
                        r[i] = 1
                    yield r

        rs = gen()
        domain = f"all errors of weight <= {w_domain_max}"
    else:
        raise ValueError("domain too large; pass w_domain_max")
    best: dict[bytes, int] = {}
    weights: dict[bytes, int] = {}
    for r in rs:
        s = gf2.mat_vec(delta, r)
        key = s.tobytes()
        w = gf2.weight(r)
        if key not in best or w < best[key]:
            best[key] = w
            weights[key] = gf2.weight(s)
    worst: dict[int, int] = {}
    for key, w in best.items():
        x = weights[key]
        if w > worst.get(x, -1):
            worst[x] = w
    budget = max(worst.values(), default=0)
    return SoundnessProfile(worst, budget, max(weights.values(), default=0), domain)


def certify_map(
    delta,
    threshold: float,
    bound: PolyBound,
    x_max: Optional[int] = None,
    preimage_budget: Optional[int] = None,
) -> SoundnessProfile:
    """Certify or refute a (threshold, bound) soundness claim for a map.

    The syndrome range x < threshold is enumerated exhaustively; a
    counterexample is a concrete minimum-weight preimage heavier than
    bound(x).  Out-of-range weights up to x_max are profiled for
    information only.
    """
    delta = gf2.as_bin(delta)
    if math.isinf(threshold):
        range_max = delta.shape[0]
    else:
        range_max = int(threshold) - 1
    x_max = range_max if x_max is None else max(x_max, range_max)
    x_max = min(x_max, delta.shape[0])
    if preimage_budget is None:
        preimage_budget = int(bound(max(range_max, 0))) + 1
    profile = profile_map(delta, x_max, preimage_budget)
    profile.threshold = threshold
    profile.bound = bound
    verdict = Verdict("certified", f"all syndrome weights below {threshold} within {bound.name}")
    for x in sorted(profile.worst):
        if not x < threshold:
            continue
        w = profile.worst[x]
        if Fraction(w) > bound(x):
            if w > preimage_budget and Fraction(preimage_budget) < bound(x):
                verdict = Verdict(
                    "budget_limited",
                    f"syndrome weight {x}: preimage search stopped at {preimage_budget}",
                )
                break
            witness_s = _worst_syndrome(delta, x, preimage_budget)
            r = gf2.solve(delta, witness_s)
            verdict = Verdict(
                "counterexample",
                f"syndrome weight {x} needs preimage weight {w} > {bound.name}({x})",
                counterexample=r,
            )
            break
    profile.verdict = verdict
    return profile


def _worst_syndrome(delta: np.ndarray, x: int, budget: int) -> np.ndarray:
    ann = _image_annihilator(delta)
    worst_s = None
    worst_w = -1
    for s in gf2.kernel_vectors_by_weight(ann, x):
        if gf2.weight(s) != x:
            continue
        found = gf2.min_weight_solution(delta, s, budget)
        w = found[1] if found is not None else budget + 1
        if w > worst_w:
            worst_w, worst_s = w, s
    assert worst_s is not None
    return worst_s


# -- Pauli-space soundness (general stabiliser checks) --------------------------


def pauli_weight_table(checks: np.ndarray) -> dict[bytes, int]:
    """Min Pauli weight per syndrome, brute-forced over all Paulis.

    checks is an m x 2n symplectic matrix (X half | Z half).  Only
    feasible for small n; the table is exact.
    """
    checks = gf2.as_bin(checks)
    m, two_n = checks.shape
    n = two_n // 2
    cx, cz = checks[:, :n].astype(np.int64), checks[:, n:].astype(np.int64)
    table: dict[bytes, int] = {}
    for code in range(4**n):
        e = np.zeros(n, dtype=np.int64)
        f = np.zeros(n, dtype=np.int64)
        c = code
        weight = 0
        for q in range(n):
            p = c & 3
            c >>= 2
            if p:
                weight += 1
                if p in (1, 3):
                    e[q] = 1
                if p in (2, 3):
                    f[q] = 1
        syndrome = ((cx @ f + cz @ e) & 1).astype(np.uint8)
        key = syndrome.tobytes()
        if key not in table or weight < table[key]:
            table[key] = weight
    return table


def certify_checks(
    checks: np.ndarray, threshold: float, bound: PolyBound
) -> Verdict:
    """Exhaustively certify (threshold, bound)-soundness of a Pauli check set."""
    checks = gf2.as_bin(checks)
    if checks.shape[1] // 2 > 7:
        raise ValueError("brute-force Pauli certification is limited to 7 qubits")
    table = pauli_weight_table(checks)
    for key, w in table.items():
        s = np.frombuffer(key, dtype=np.uint8)
        x = int(s.sum())
        if x < threshold and Fraction(w) > bound(x):
            return Verdict(
                "counterexample",
                f"syndrome weight {x} needs Pauli weight {w} > {bound.name}({x})",
                counterexample=s.copy(),
            )
    return Verdict("certified", f"exhaustive over all {len(table)} achievable syndromes")


# -- constructive witness: single product ---------------------------------------


@dataclass(frozen=True)
class SingleWitness:
    r: np.ndarray
    bound_guaranteed: bool
    reductions: int


_SINGLE_MAP_CACHE: dict[tuple[int, str], tuple] = {}


def _single_map_pieces(h: np.ndarray, map_side: str):
    """The selected middle-level map, reshape dims, and kernel tests.

    "from_checks": domain C_1 (x) C_0 (reshaped checks x bits); transforms
    add outer products of ker(h^T) columns with ker(h) rows.
    "from_redundancy": domain C_0 (x) C_1; the mirror.
    """
    if map_side not in ("from_checks", "from_redundancy"):
        raise ValueError("map_side must be 'from_checks' or 'from_redundancy'")
    key = (id(h), map_side)
    hit = _SINGLE_MAP_CACHE.get(key)
    if hit is not None and hit[0] is h:
        return hit[1:]
    n1, n0 = h.shape
    if map_side == "from_checks":
        the_map = np.vstack(
            [np.kron(h.T, gf2.identity(n0)), np.kron(gf2.identity(n1), h)]
        )
        pieces = (the_map, (n1, n0), h.T, h)
    else:
        the_map = np.vstack(
            [np.kron(gf2.identity(n0), h.T), np.kron(h, gf2.identity(n1))]
        )
        pieces = (the_map, (n0, n1), h, h.T)
    if len(_SINGLE_MAP_CACHE) > 64:
        _SINGLE_MAP_CACHE.clear()
    _SINGLE_MAP_CACHE[key] = (h,) + pieces
    return pieces


def _reduce_reshaped(
    r_mat: np.ndarray, col_test: np.ndarray, row_test: np.ndarray
) -> tuple[np.ndarray, int]:
    """Cancel intersecting kernel column/row pairs by rank-one updates.

    While some column a of R lies in ker(col_test), some row b of R lies
    in ker(row_test), and they intersect (R[i, j] = 1), replace
    R <- R + a b.  Each step strictly shrinks both supports, and the
    image constraints are untouched.  Pairs are chosen smallest row
    index first, then smallest column index.
    """
    r_mat = r_mat.copy()
    steps = 0
    while True:
        nonzero_cols = np.flatnonzero(r_mat.any(axis=0))
        nonzero_rows = np.flatnonzero(r_mat.any(axis=1))
        if nonzero_cols.size == 0 or nonzero_rows.size == 0:
            break
        col_ok = nonzero_cols[
            ~gf2.mat_mul(col_test, r_mat[:, nonzero_cols]).any(axis=0)
        ]
        row_ok = nonzero_rows[
            ~gf2.mat_mul(row_test, r_mat[nonzero_rows].T).any(axis=0)
        ]
        if col_ok.size == 0 or row_ok.size == 0:
            break
        sub = r_mat[np.ix_(row_ok, col_ok)]
        hits = np.argwhere(sub == 1)
        if hits.size == 0:
            break
        i, j = int(row_ok[hits[0][0]]), int(col_ok[hits[0][1]])
        r_mat ^= np.outer(r_mat[:, j], r_mat[i, :])
        steps += 1
    return r_mat, steps


def single_product_preimage(
    h,
    s,
    map_side: str,
    threshold: Optional[int] = None,
) -> SingleWitness:
    """Constructive bounded preimage for one of a single product's two
    middle-level maps.

    map_side "from_checks" targets the transpose of the qubit-to-Z-check
    map (domain: checks x bits); "from_redundancy" targets the map out of
    the lowest level (domain: bits x checks).  The returned r satisfies
    (selected map) r = s exactly, with |r| <= |s|^2 / 4 whenever
    |s| < min(d_0, d_0^T); heavier syndromes still get a witness but the
    bound flag is dropped.
    """
    h = gf2.as_bin(h)
    n1, n0 = h.shape
    s = gf2.as_bin(s).reshape(-1)
    if s.shape[0] != n0 * n0 + n1 * n1:
        raise ValueError("syndrome length does not match the product's middle level")
    the_map, shape, col_test, row_test = _single_map_pieces(h, map_side)
    r0 = gf2.get_solver(the_map).solve(s)
    if r0 is None:
        raise PreimageError("syndrome is not in the image of the selected map")
    r_mat, steps = _reduce_reshaped(
        gf2.reshape_vector(r0, *shape), col_test, row_test
    )
    r = gf2.flatten_matrix(r_mat)
    assert (gf2.mat_vec(the_map, r) == s).all()
    x = gf2.weight(s)
    guaranteed = threshold is not None and x < threshold
    if guaranteed:
        assert Fraction(gf2.weight(r)) <= QUADRATIC_OVER_4(x), (
            "area bound violated inside the guaranteed range"
        )
    return SingleWitness(r, guaranteed, steps)


# -- constructive witness: double product ---------------------------------------


@dataclass
class PartialDecodeState:
    """Bookkeeping for the middle-block reduction of the double product."""

    r_b: np.ndarray
    s_l: np.ndarray
    s_r: np.ndarray
    m: np.ndarray
    loop_counters: list[int] = field(default_factory=lambda: [0] * 6)
    passes: int = 0

    def support_conditions(self, d_high: np.ndarray, d_low: np.ndarray) -> list[bool]:
        """The six terminal support conditions, in pseudocode order."""
        rb_low = gf2.mat_mul(self.r_b, d_low)
        high_rb = gf2.mat_mul(d_high, self.r_b)
        return [
            gf2.row_support(rb_low) <= gf2.row_support(self.s_l),
            gf2.col_support(rb_low) <= gf2.col_support(self.s_l),
            gf2.row_support(rb_low) == gf2.row_support(self.r_b),
            gf2.col_support(high_rb) <= gf2.col_support(self.s_r),
            gf2.row_support(high_rb) <= gf2.row_support(self.s_r),
            gf2.col_support(high_rb) == gf2.col_support(self.r_b),
        ]


def _assert_m_preserved(state: PartialDecodeState, d_high, d_low) -> None:
    if not (gf2.mat_mul(gf2.mat_mul(d_high, state.r_b), d_low) == state.m).all():
        raise AssertionError("middle-block transform failed to preserve M")


def partial_decode(
    r_b,
    s_l,
    s_r,
    d_high,
    d_low,
    check_every_step: bool = True,
) -> PartialDecodeState:
    """Shrink the middle block's support while preserving M.

    Runs the six while loops (smallest admissible index everywhere) and
    repeats the pass until none of them fires, which pins down all six
    terminal support conditions.  M = d_high @ r_b @ d_low is asserted
    after every single transform when check_every_step is set.
    """
    d_high = gf2.as_bin(d_high)
    d_low = gf2.as_bin(d_low)
    r_b = gf2.as_bin(r_b).copy()
    s_l = gf2.as_bin(s_l)
    s_r = gf2.as_bin(s_r)
    m_from_sl = gf2.mat_mul(d_high, s_l)
    m_from_sr = gf2.mat_mul(s_r, d_low)
    m_from_rb = gf2.mat_mul(gf2.mat_mul(d_high, r_b), d_low)
    if not (m_from_sl == m_from_sr).all():
        raise ValueError("precondition failed: d_high @ S_L != S_R @ d_low")
    if not (m_from_sl == m_from_rb).all():
        raise ValueError("precondition failed: d_high @ R_b @ d_low != d_high @ S_L")
    state = PartialDecodeState(r_b, s_l, s_r, m_from_sl)

    def checked():
        if check_every_step:
            _assert_m_preserved(state, d_high, d_low)

    sl_rows = gf2.row_support(state.s_l)
    sl_cols = gf2.col_support(state.s_l)
    sr_rows = gf2.row_support(state.s_r)
    sr_cols = gf2.col_support(state.s_r)
    guard = 4 * (state.r_b.shape[0] + state.r_b.shape[1] + 2) ** 2

    while True:
        worked = False
        # loop 1: push rows of R_b @ d_low into the rows of S_L
        while True:
            rb_low = gf2.mat_mul(state.r_b, d_low)
            extra = sorted(gf2.row_support(rb_low) - sl_rows)
            if not extra:
                break
            i = extra[0] - 1
            row_of_image = rb_low[i]
            j = int(np.flatnonzero(row_of_image)[0])
            w = rb_low[:, j] ^ state.s_l[:, j]
            state.r_b ^= np.outer(w, state.r_b[i])
            state.loop_counters[0] += 1
            worked = True
            checked()
            if state.loop_counters[0] > guard:
                raise AssertionError("loop 1 failed to terminate")
        # loop 2: push columns of R_b @ d_low into the columns of S_L
        while True:
            rb_low = gf2.mat_mul(state.r_b, d_low)
            extra = sorted(gf2.col_support(rb_low) - sl_cols)
            if not extra:
                break
            j = extra[0] - 1
            c = rb_low[:, j]
            k = min(
                set(int(i) + 1 for i in np.flatnonzero(c))
                & gf2.row_support(state.r_b)
            ) - 1
            state.r_b ^= np.outer(c, state.r_b[k])
            state.loop_counters[1] += 1
            worked = True
            checked()
            if state.loop_counters[1] > guard:
                raise AssertionError("loop 2 failed to terminate")
        # loop 3: drop rows of R_b invisible to d_low
        while True:
            rb_low = gf2.mat_mul(state.r_b, d_low)
            extra = sorted(gf2.row_support(state.r_b) - gf2.row_support(rb_low))
            if not extra:
                break
            state.r_b[extra[0] - 1] = 0
            state.loop_counters[2] += 1
            worked = True
            checked()
        # loop 4: push columns of d_high @ R_b into the columns of S_R
        while True:
            high_rb = gf2.mat_mul(d_high, state.r_b)
            extra = sorted(gf2.col_support(high_rb) - sr_cols)
            if not extra:
                break
            i = extra[0] - 1
            col_of_image = high_rb[:, i]
            j = int(np.flatnonzero(col_of_image)[0])
            w = high_rb[j] ^ state.s_r[j]
            state.r_b ^= np.outer(state.r_b[:, i], w)
            state.loop_counters[3] += 1
            worked = True
            checked()
            if state.loop_counters[3] > guard:
                raise AssertionError("loop 4 failed to terminate")
        # loop 5: push rows of d_high @ R_b into the rows of S_R
        while True:
            high_rb = gf2.mat_mul(d_high, state.r_b)
            extra = sorted(gf2.row_support(high_rb) - sr_rows)
            if not extra:
                break
            j = extra[0] - 1
            v = high_rb[j]
            k = min(
                set(int(i) + 1 for i in np.flatnonzero(v))
                & gf2.col_support(state.r_b)
            ) - 1
            state.r_b ^= np.outer(state.r_b[:, k], v)
            state.loop_counters[4] += 1
            worked = True
            checked()
            if state.loop_counters[4] > guard:
                raise AssertionError("loop 5 failed to terminate")
        # loop 6: drop columns of R_b invisible to d_high
        while True:
            high_rb = gf2.mat_mul(d_high, state.r_b)
            extra = sorted(gf2.col_support(state.r_b) - gf2.col_support(high_rb))
            if not extra:
                break
            state.r_b[:, extra[0] - 1] = 0
            state.loop_counters[5] += 1
            worked = True
            checked()
        state.passes += 1
        if not worked:
            break
        if state.passes > guard:
            raise AssertionError("outer pass failed to reach a fixed point")
    return state


@dataclass(frozen=True)
class RemainderTerm:
    """One tensor term (vector at a unit position) of a remainder syndrome."""

    vector: np.ndarray
    index: int


@dataclass
class DoubleWitness:
    r: np.ndarray
    r_a: np.ndarray
    r_b: np.ndarray
    r_c: np.ndarray
    bound_guaranteed: bool
    used_fallback: bool
    left_terms: list[RemainderTerm]
    right_terms: list[RemainderTerm]
    state: Optional[PartialDecodeState]


def double_product_preimage(
    h,
    tilde: ChainComplex,
    breve: ChainComplex,
    s,
    threshold: Optional[int] = None,
    strict: bool = False,
) -> DoubleWitness:
    """Constructive bounded preimage under the double product's qubit map.

    Pipeline: solve the reshaped middle-block equation for any R_b, run
    partial_decode to shrink its support, then solve each remainder
    column (rows on the right side) with the single-product witnesses and
    assemble.  The cubic bound |r| <= |s|^3 / 4 is guaranteed for
    |s| < threshold; outside that range the remainder pieces can fall
    outside the single product's image, in which case the plain solver
    supplies a correct (unbounded) witness unless strict is set.
    """
    h = gf2.as_bin(h)
    s = gf2.as_bin(s).reshape(-1)
    d_low, d_high = tilde.delta(-1), tilde.delta(0)
    n_m1, n_0, n_1 = tilde.size(-1), tilde.size(0), tilde.size(1)
    len_l = n_0 * n_m1
    if s.shape[0] != breve.size(1):
        raise ValueError("syndrome length does not match the double product's checks")
    if gf2.mat_vec(breve.delta(1), s).any():
        raise PreimageError("syndrome fails the metachecks")
    breve_solver = gf2.get_solver(breve.delta(0))
    plain = breve_solver.solve(s)
    if plain is None:
        raise PreimageError("syndrome is not in the image of the qubit map")
    s_l_mat = gf2.reshape_vector(s[:len_l], n_0, n_m1)
    s_r_mat = gf2.reshape_vector(s[len_l:], n_1, n_0)
    x = gf2.weight(s)
    guaranteed = threshold is not None and x < threshold

    mid_map_key = "mid_map"
    cache = getattr(tilde, "_preimage_cache", None)
    if cache is None:
        cache = {}
        setattr(tilde, "_preimage_cache", cache)
    mid_map = cache.get(mid_map_key)
    if mid_map is None:
        mid_map = np.kron(d_high, d_low.T)
        cache[mid_map_key] = mid_map
    m_mat = gf2.mat_mul(d_high, s_l_mat)
    r_b0 = gf2.get_solver(mid_map).solve(gf2.flatten_matrix(m_mat))
    assert r_b0 is not None, "middle-block equation must be solvable for image syndromes"
    state = partial_decode(
        gf2.reshape_vector(r_b0, n_0, n_0), s_l_mat, s_r_mat, d_high, d_low,
        check_every_step=False,
    )
    _assert_m_preserved(state, d_high, d_low)

    q_l = s_l_mat ^ gf2.mat_mul(state.r_b, d_low)
    q_r = s_r_mat ^ gf2.mat_mul(d_high, state.r_b)
    left_terms = [
        RemainderTerm(q_l[:, j].copy(), j) for j in np.flatnonzero(q_l.any(axis=0))
    ]
    right_terms = [
        RemainderTerm(q_r[i].copy(), i) for i in np.flatnonzero(q_r.any(axis=1))
    ]
    r_a_mat = gf2.zeros(n_m1, n_m1)
    r_c_mat = gf2.zeros(n_1, n_1)
    try:
        for term in left_terms:
            # each leftover column lives in ker(d_high) and, inside the
            # guaranteed range, below the product distance, so it has a
            # bounded preimage under the lowest map
            witness = single_product_preimage(
                h, term.vector, "from_redundancy", threshold
            )
            r_a_mat[:, term.index] = witness.r
        for term in right_terms:
            witness = single_product_preimage(h, term.vector, "from_checks", threshold)
            r_c_mat[term.index, :] = witness.r
    except PreimageError:
        if strict or guaranteed:
            raise
        return DoubleWitness(
            plain, None, None, None, False, True, left_terms, right_terms, None
        )
    r = np.concatenate(
        [
            gf2.flatten_matrix(r_a_mat),
            gf2.flatten_matrix(state.r_b),
            gf2.flatten_matrix(r_c_mat),
        ]
    )
    assert (gf2.mat_vec(breve.delta(0), r) == s).all()
    if guaranteed:
        assert Fraction(gf2.weight(r)) <= CUBIC_OVER_4(x), (
            "cubic bound violated inside the guaranteed range"
        )
    return DoubleWitness(
        r,
        gf2.flatten_matrix(r_a_mat),
        gf2.flatten_matrix(state.r_b),
        gf2.flatten_matrix(r_c_mat),
        guaranteed,
        False,
        left_terms,
        right_terms,
        state,
    )


