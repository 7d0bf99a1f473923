"""Geometry of rank-n projectors in C^m: distances, intertwiners, and bounds.

The projector (operator-norm) distance equals the sine of the largest
principal angle between the ranges. Two-sided covering-number bounds for the
set of rank-n projectors are evaluated in log domain. Product and quotient
covering inequalities are checked exactly on small structured spaces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

import numpy as np

from . import metric
from .linalg import (
    UnitaryMatrix,
    _as_square_array,
    _haar_batch,
    operator_norm,
)

_ORTHONORMAL_TOL = 1e-10
_PROJECTOR_TOL = 1e-9
KATO_DISTANCE_LIMIT = 1.0 / math.sqrt(2.0)


class Subspace:
    """An n-dimensional subspace of C^m given by an orthonormal basis matrix."""

    __slots__ = ("basis",)

    def __init__(self, basis):
        arr = np.array(np.asarray(basis, dtype=complex), order="C")
        if arr.ndim != 2:
            raise ValueError("basis must be a 2-d array of column vectors")
        m, n = arr.shape
        if not 1 <= n <= m:
            raise ValueError(f"need 1 <= dim <= ambient, got basis shape {arr.shape}")
        if not np.all(np.isfinite(arr.view(float))):
            raise ValueError("basis has non-finite entries")
        gram = arr.conj().T @ arr - np.eye(n)
        if operator_norm(gram) > _ORTHONORMAL_TOL:
            raise ValueError("basis columns are not orthonormal within 1e-10")
        arr.setflags(write=False)
        self.basis = arr

    @property
    def m(self) -> int:
        return self.basis.shape[0]

    @property
    def n(self) -> int:
        return self.basis.shape[1]

    def __repr__(self) -> str:
        return f"Subspace(n={self.n}, m={self.m})"


class Projector:
    """A Hermitian idempotent matrix with a well-defined integer rank."""

    __slots__ = ("matrix", "rank")

    def __init__(self, matrix):
        arr = np.array(_as_square_array(matrix, "projector"), order="C")
        if operator_norm(arr - arr.conj().T) > _ORTHONORMAL_TOL:
            raise ValueError("projector must be Hermitian within 1e-10")
        if operator_norm(arr @ arr - arr) > _PROJECTOR_TOL:
            raise ValueError("projector must be idempotent within 1e-9")
        trace = float(np.real(np.trace(arr)))
        rank = round(trace)
        if abs(trace - rank) > 1e-6:
            raise ValueError(f"projector trace {trace} is not near an integer")
        arr.setflags(write=False)
        self.matrix = arr
        self.rank = int(rank)

    @property
    def m(self) -> int:
        return self.matrix.shape[0]

    def __repr__(self) -> str:
        return f"Projector(rank={self.rank}, m={self.m})"


def random_subspace(n: int, m: int, seed: int) -> Subspace:
    """Haar-random n-dimensional subspace of C^m."""
    if not 1 <= n <= m:
        raise ValueError("need 1 <= n <= m")
    rng = np.random.default_rng(seed)
    u = _haar_batch(m, 1, rng)[0]
    return Subspace(u[:, :n])


def projector_from_subspace(s: Subspace) -> Projector:
    """Orthogonal projector B B^dag onto the subspace."""
    return Projector(s.basis @ s.basis.conj().T)


def projector_distance(p: Projector, q: Projector) -> float:
    """Operator-norm distance ||P - Q||; equals sin of the largest principal angle."""
    if p.m != q.m:
        raise ValueError("projectors act on different spaces")
    if p.rank != q.rank:
        raise ValueError("projectors must have equal rank")
    return operator_norm(p.matrix - q.matrix)


def principal_angles(s1: Subspace, s2: Subspace) -> np.ndarray:
    """Principal angles between two subspaces, ascending, in [0, pi/2]."""
    if s1.m != s2.m:
        raise ValueError("subspaces live in different ambient spaces")
    if s1.n != s2.n:
        raise ValueError("subspaces must have equal dimension")
    sigma = np.linalg.svd(s1.basis.conj().T @ s2.basis, compute_uv=False)
    return np.sort(np.arccos(np.clip(sigma, 0.0, 1.0)))


def kato_unitary(p: Projector, q: Projector) -> UnitaryMatrix:
    """Unitary V with V P V^dag = Q, defined when ||P - Q|| <= 1/sqrt(2).

    V = (1 - R)^(-1/2) (Q P + (1 - Q)(1 - P)) with R = (P - Q)^2. Satisfies
    ||1 - V|| <= (5/sqrt(2)) ||P - Q||.
    """
    if p.m != q.m:
        raise ValueError("projectors act on different spaces")
    if p.rank != q.rank:
        raise ValueError("projectors must have equal rank")
    dist = operator_norm(p.matrix - q.matrix)
    if dist > KATO_DISTANCE_LIMIT + 1e-12:
        raise ValueError(
            f"Kato precondition violated: ||P - Q|| = {dist:.6f} > 1/sqrt(2)")
    m = p.m
    eye = np.eye(m)
    diff = p.matrix - q.matrix
    r = diff @ diff
    h = eye - r
    h = 0.5 * (h + h.conj().T)
    w, v = np.linalg.eigh(h)
    if w.min() < 1e-8:
        raise ValueError("Kato inverse square root is singular")
    inv_sqrt = (v / np.sqrt(w)) @ v.conj().T
    core = q.matrix @ p.matrix + (eye - q.matrix) @ (eye - p.matrix)
    return UnitaryMatrix(inv_sqrt @ core)


def quotient_distance_bounds(p: Projector, q: Projector) -> tuple[float, float]:
    """Bounds on the quotient distance between projector orbits in U(m).

    Returns (||P - Q|| / 2, ||1 - V||) for the intertwiner V of kato_unitary;
    the true infimum over all unitaries mapping range(P) to range(Q) of
    ||1 - V|| lies between them.
    """
    dist = projector_distance(p, q)
    v = kato_unitary(p, q)
    upper = operator_norm(np.eye(p.m) - v.array)
    return (0.5 * dist, upper)


@dataclass(frozen=True)
class ProjectorCoveringBounds:
    """Log-domain covering bounds for rank-n projectors in C^m.

    lower_log is the log of 19^(-m^2) (9/(5 eps))^(2n(m-n)), valid for
    eps <= 1/71; upper_log is the log of 38^(m^2) (3/(4 eps))^(2n(m-n)),
    valid for eps <= 1/10. ``lower_nontrivial`` records lower_log > 0.
    """

    n: int
    m: int
    epsilon: float
    lower_log: float
    upper_log: float
    lower_valid: bool
    upper_valid: bool
    lower_nontrivial: bool

    def as_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "m": self.m,
            "epsilon": self.epsilon,
            "lower_log": self.lower_log,
            "upper_log": self.upper_log,
            "lower_valid": self.lower_valid,
            "upper_valid": self.upper_valid,
            "lower_nontrivial": self.lower_nontrivial,
        }


def projector_covering_bounds(n: int, m: int, epsilon: float) -> ProjectorCoveringBounds:
    """Two-sided covering-number bounds for the rank-n projector manifold."""
    if not 1 <= n < m:
        raise ValueError("need 1 <= n < m")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    exponent = 2.0 * n * (m - n)
    msq = float(m * m)
    lower = -msq * math.log(19.0) + exponent * math.log(9.0 / (5.0 * epsilon))
    upper = msq * math.log(38.0) + exponent * math.log(3.0 / (4.0 * epsilon))
    return ProjectorCoveringBounds(
        n=n,
        m=m,
        epsilon=float(epsilon),
        lower_log=lower,
        upper_log=upper,
        lower_valid=epsilon <= 1.0 / 71.0,
        upper_valid=epsilon <= 0.1,
        lower_nontrivial=lower > 0.0,
    )


@dataclass(frozen=True)
class ProductCoveringReport:
    """Exact covering/packing numbers for a max-metric product space."""

    epsilon: float
    size1: int
    size2: int
    cover1_eps: int
    cover2_eps: int
    cover1_2eps: int
    cover2_2eps: int
    product_cover_eps: int
    product_pack_eps: int
    lower_ok: bool
    upper_ok: bool
    passed: bool

    def as_dict(self) -> dict[str, Any]:
        return {
            "epsilon": self.epsilon,
            "size1": self.size1,
            "size2": self.size2,
            "cover1_eps": self.cover1_eps,
            "cover2_eps": self.cover2_eps,
            "cover1_2eps": self.cover1_2eps,
            "cover2_2eps": self.cover2_2eps,
            "product_cover_eps": self.product_cover_eps,
            "product_pack_eps": self.product_pack_eps,
            "lower_ok": self.lower_ok,
            "upper_ok": self.upper_ok,
            "passed": self.passed,
        }


def product_covering_check(space1: metric.FiniteMetricSpace,
                           space2: metric.FiniteMetricSpace,
                           epsilon: float) -> ProductCoveringReport:
    """Exact check of N1(2e) N2(2e) <= N_product(e) <= N1(e) N2(e) (max metric)."""
    for sp in (space1, space2):
        if sp.size > metric.EXACT_SEARCH_LIMIT:
            raise ValueError(
                f"exact search limit exceeded: factor has {sp.size} points")
    prod = metric.product_space(space1, space2)
    prod_limit = space1.size * space2.size
    n1 = metric.brute_force_covering_number(space1, epsilon)
    n2 = metric.brute_force_covering_number(space2, epsilon)
    n1_2 = metric.brute_force_covering_number(space1, 2.0 * epsilon)
    n2_2 = metric.brute_force_covering_number(space2, 2.0 * epsilon)
    np_cover = metric.brute_force_covering_number(prod, epsilon, limit=prod_limit)
    np_pack = metric.brute_force_packing_number(prod, epsilon, limit=prod_limit)
    lower_ok = n1_2 * n2_2 <= np_cover
    upper_ok = np_cover <= n1 * n2
    return ProductCoveringReport(
        epsilon=float(epsilon),
        size1=space1.size,
        size2=space2.size,
        cover1_eps=n1,
        cover2_eps=n2,
        cover1_2eps=n1_2,
        cover2_2eps=n2_2,
        product_cover_eps=np_cover,
        product_pack_eps=np_pack,
        lower_ok=lower_ok,
        upper_ok=upper_ok,
        passed=lower_ok and upper_ok,
    )


@dataclass(frozen=True)
class QuotientCoveringReport:
    """Exact covering numbers around a cyclic group quotient Z_order / H."""

    order: int
    subgroup_order: int
    epsilon: float
    group_cover_2eps: int
    subgroup_cover_eps: int
    quotient_cover_eps: int
    group_cover_half_eps: int
    lower_ok: bool
    upper_ok: bool
    passed: bool

    def as_dict(self) -> dict[str, Any]:
        return {
            "order": self.order,
            "subgroup_order": self.subgroup_order,
            "epsilon": self.epsilon,
            "group_cover_2eps": self.group_cover_2eps,
            "subgroup_cover_eps": self.subgroup_cover_eps,
            "quotient_cover_eps": self.quotient_cover_eps,
            "group_cover_half_eps": self.group_cover_half_eps,
            "lower_ok": self.lower_ok,
            "upper_ok": self.upper_ok,
            "passed": self.passed,
        }


def quotient_covering_check(order: int, subgroup_order: int,
                            epsilon: float) -> QuotientCoveringReport:
    """Exact check of N_G(2e) <= N_{G/H}(e) N_H(e) <= N_G(e/2) for cyclic G.

    G = Z_order with the circular hop metric, H the subgroup of the given
    order, and the quotient metric d'([x],[y]) = min_h d(x, y + h).
    """
    if order < 1 or subgroup_order < 1 or order % subgroup_order != 0:
        raise ValueError("subgroup order must divide the group order")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    group = metric.FiniteMetricSpace.cycle(order)
    gmat = group.matrix
    step = order // subgroup_order
    members = [i * step for i in range(subgroup_order)]
    subgroup = metric.FiniteMetricSpace(
        members, gmat[np.ix_(members, members)])
    reps = list(range(step))
    qmat = np.zeros((step, step))
    for a in reps:
        for b in reps:
            qmat[a, b] = min(gmat[a, (b + h) % order] for h in members)
    quotient = metric.FiniteMetricSpace(reps, qmat)

    limit = max(order, metric.EXACT_SEARCH_LIMIT)
    n_g_2 = metric.brute_force_covering_number(group, 2.0 * epsilon, limit=limit)
    n_h = metric.brute_force_covering_number(subgroup, epsilon, limit=limit)
    n_q = metric.brute_force_covering_number(quotient, epsilon, limit=limit)
    n_g_half = metric.brute_force_covering_number(group, 0.5 * epsilon, limit=limit)
    lower_ok = n_g_2 <= n_q * n_h
    upper_ok = n_q * n_h <= n_g_half
    return QuotientCoveringReport(
        order=order,
        subgroup_order=subgroup_order,
        epsilon=float(epsilon),
        group_cover_2eps=n_g_2,
        subgroup_cover_eps=n_h,
        quotient_cover_eps=n_q,
        group_cover_half_eps=n_g_half,
        lower_ok=lower_ok,
        upper_ok=upper_ok,
        passed=lower_ok and upper_ok,
    )


def empirical_grassmann_packing(n: int, m: int, epsilon: float, trials: int,
                                seed: int) -> int:
    """Greedy epsilon-packing count among Haar-random rank-n projectors."""
    if not 1 <= n < m:
        raise ValueError("need 1 <= n < m")
    if m > 16:
        raise ValueError("ambient dimension capped at 16 for the empirical packing")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if trials < 1:
        raise ValueError("need at least one trial")
    rng = np.random.default_rng(seed)
    accepted: list[np.ndarray] = []
    for _ in range(trials):
        u = _haar_batch(m, 1, rng)[0]
        b = u[:, :n]
        proj = b @ b.conj().T
        if accepted:
            diffs = np.asarray(accepted) - proj[None]
            sigmas = np.linalg.svd(diffs, compute_uv=False)[:, 0]
            if sigmas.min() <= epsilon:
                continue
        accepted.append(proj)
    return len(accepted)
