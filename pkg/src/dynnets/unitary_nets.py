"""Epsilon-nets on the unitary group U(n) in operator-norm distance.

Explicit nets come from a cubic grid in the Lie algebra u(n): grid points
within a ball slightly larger than the image of the principal logarithm are
exponentiated, and the exponential map's 1-Lipschitz upper bound certifies
the covering radius. An implicit variant materializes only the grid element
nearest (in log coordinates) to a query, which is what makes discretization
feasible for n >= 4 where the explicit grid would be astronomically large.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from .linalg import (
    UNITARY_TOL,
    UnitaryMatrix,
    _exp_skew_stack,
    _haar_batch,
    _opnorm_stack,
    matrix_exp,
    operator_norm,
    principal_log,
    skew_basis,
)

_GRID_DIM_LIMIT = 3
_CANDIDATE_CAP = 20_000_000


@dataclass(frozen=True)
class UnitaryCoveringBounds:
    """Two-sided covering-number bounds for U(n), stored as natural logs.

    Valid only for 0 < epsilon <= 1/10; outside that window the logs are None
    and ``valid`` is False.
    """

    n: int
    epsilon: float
    lower_log: float | None
    upper_log: float | None
    valid: bool


def unitary_covering_bounds(n: int, epsilon: float) -> UnitaryCoveringBounds:
    """ln of (3/(4 eps))^(n^2) <= N(U(n), eps) <= (7/eps)^(n^2) for eps <= 1/10."""
    if n < 1:
        raise ValueError("dimension must be at least 1")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if epsilon > 0.1:
        return UnitaryCoveringBounds(n, float(epsilon), None, None, False)
    nsq = n * n
    lower = nsq * math.log(3.0 / (4.0 * epsilon))
    upper = nsq * math.log(7.0 / epsilon)
    return UnitaryCoveringBounds(n, float(epsilon), lower, upper, True)


class UnitaryNet:
    """A finite set of unitaries intended as an epsilon-covering of U(n)."""

    def __init__(self, n: int, epsilon: float, matrices, construction_log=None):
        arr = np.ascontiguousarray(matrices, dtype=complex)
        if arr.ndim != 3 or arr.shape[1:] != (n, n):
            raise ValueError(f"expected a (count, {n}, {n}) stack, got {arr.shape}")
        if arr.shape[0] == 0:
            raise ValueError("net must contain at least one element")
        if epsilon <= 0:
            raise ValueError("epsilon must be positive")
        eye = np.eye(n)
        for start in range(0, arr.shape[0], 65536):
            chunk = arr[start:start + 65536]
            gram = np.einsum("cji,cjk->cik", np.conj(chunk), chunk) - eye
            defects = _opnorm_stack(gram)
            if np.any(defects > UNITARY_TOL):
                worst = float(defects.max())
                raise ValueError(f"net element is not unitary (defect {worst:.3e})")
        arr.setflags(write=False)
        self.n = int(n)
        self.epsilon = float(epsilon)
        self.matrices = arr
        self.construction_log = dict(construction_log or {})
        self._elements: tuple[UnitaryMatrix, ...] | None = None

    def __len__(self) -> int:
        return self.matrices.shape[0]

    @property
    def elements(self) -> tuple[UnitaryMatrix, ...]:
        if self._elements is None:
            self._elements = tuple(
                UnitaryMatrix(m, _validated=True) for m in self.matrices)
        return self._elements

    def nearest(self, u) -> tuple[UnitaryMatrix, float]:
        """Net element closest to ``u`` in operator norm, with its distance."""
        target = u.array if isinstance(u, UnitaryMatrix) else UnitaryMatrix(u).array
        if target.shape[0] != self.n:
            raise ValueError(f"expected a {self.n}-dimensional unitary")
        dists = _stack_distances(target[None], self.matrices)[0]
        idx = int(np.argmin(dists))
        return (UnitaryMatrix(self.matrices[idx], _validated=True),
                float(dists[idx]))

    def __repr__(self) -> str:
        return f"UnitaryNet(n={self.n}, epsilon={self.epsilon}, count={len(self)})"


def _ball_volume_log(dim: int, radius: float) -> float:
    return (0.5 * dim * math.log(math.pi) + dim * math.log(radius)
            - math.lgamma(0.5 * dim + 1.0))


def _grid_coordinates(dim: int, spacing: float, radius: float,
                      cap: int) -> np.ndarray:
    """All grid points (multiples of spacing) with L2 norm <= radius."""
    m = int(math.floor(radius / spacing + 1e-9))
    vals = spacing * np.arange(-m, m + 1)
    coords = np.zeros((1, 0))
    sq = np.zeros(1)
    for _ in range(dim):
        new_sq = sq[:, None] + vals[None, :] ** 2
        keep = new_sq <= radius * radius + 1e-12
        rows, cols = np.nonzero(keep)
        if rows.size > cap:
            raise ValueError(
                f"net too large: more than {cap} grid candidates")
        coords = np.hstack([coords[rows], vals[cols, None]])
        sq = new_sq[rows, cols]
    return coords


def build_unitary_net(n: int, epsilon: float, *,
                      max_elements: int = 5_000_000) -> UnitaryNet:
    """Explicit grid net: certified epsilon-covering of U(n) for n <= 3.

    Grid spacing is 2*eps/n in Frobenius-orthonormal coordinates on u(n), so
    rounding any principal logarithm to the grid moves it by at most eps;
    grid points are kept when their operator norm is at most pi + eps, which
    retains every possible rounding image. The count is checked against
    ``max_elements`` and construction fails rather than degrading the radius.
    """
    if n < 1:
        raise ValueError("dimension must be at least 1")
    if n > _GRID_DIM_LIMIT:
        raise ValueError(
            f"explicit grid construction supports n <= {_GRID_DIM_LIMIT}; "
            f"use ImplicitGridNet for n = {n}")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    dim = n * n
    spacing = 2.0 * epsilon / n
    radius = math.sqrt(n) * (math.pi + epsilon)

    projected_log = _ball_volume_log(dim, radius) - dim * math.log(spacing)
    if projected_log > math.log(1000.0 * max_elements):
        raise ValueError(
            f"net too large: projected {math.exp(min(projected_log, 700.0)):.3e} "
            f"grid candidates for max_elements={max_elements}")

    coords = _grid_coordinates(dim, spacing, radius, _CANDIDATE_CAP)
    basis = skew_basis(n)

    retained = []
    for start in range(0, coords.shape[0], 65536):
        chunk = coords[start:start + 65536]
        x = np.einsum("cd,dij->cij", chunk, basis)
        eigs = np.linalg.eigvalsh(-1j * x)
        opnorms = np.abs(eigs).max(axis=1)
        keep = chunk[opnorms <= math.pi + epsilon + 1e-12]
        retained.append(keep)
        if sum(c.shape[0] for c in retained) > max_elements:
            raise ValueError(
                f"net too large: retained element count exceeds "
                f"max_elements={max_elements}")
    kept = np.vstack(retained)

    mats = np.empty((kept.shape[0], n, n), dtype=complex)
    for start in range(0, kept.shape[0], 65536):
        chunk = kept[start:start + 65536]
        x = np.einsum("cd,dij->cij", chunk, basis)
        mats[start:start + chunk.shape[0]] = _exp_skew_stack(x)

    log = {
        "method": "lie-algebra-grid",
        "spacing": spacing,
        "source_radius": math.pi + epsilon,
        "candidates": int(coords.shape[0]),
        "retained": int(kept.shape[0]),
    }
    return UnitaryNet(n, epsilon, mats, log)


class ImplicitGridNet:
    """The same Lie-algebra grid as build_unitary_net, materialized on demand.

    Instead of enumerating every grid point, ``round`` maps a unitary to the
    grid element obtained by rounding its principal-log coordinates, which is
    guaranteed to lie within epsilon in operator norm. Usable at any n.
    """

    def __init__(self, n: int, epsilon: float):
        if n < 1:
            raise ValueError("dimension must be at least 1")
        if epsilon <= 0:
            raise ValueError("epsilon must be positive")
        self.n = int(n)
        self.epsilon = float(epsilon)
        self.spacing = 2.0 * epsilon / n
        self._basis = skew_basis(n)

    def round(self, u) -> tuple[UnitaryMatrix, float]:
        """Grid element within epsilon of ``u`` and the realized distance."""
        target = u if isinstance(u, UnitaryMatrix) else UnitaryMatrix(u)
        if target.dim != self.n:
            raise ValueError(f"expected a {self.n}-dimensional unitary")
        x = principal_log(target).array
        coeffs = np.real(np.einsum("dji,ji->d", np.conj(self._basis), x))
        snapped = self.spacing * np.round(coeffs / self.spacing)
        xg = np.einsum("d,dij->ij", snapped, self._basis)
        element = UnitaryMatrix(matrix_exp(xg))
        return element, operator_norm(element.array - target.array)

    def __repr__(self) -> str:
        return f"ImplicitGridNet(n={self.n}, epsilon={self.epsilon})"


def _stack_distances(targets: np.ndarray, elements: np.ndarray) -> np.ndarray:
    """(S, N) operator-norm distances between two stacks of n x n matrices."""
    n = targets.shape[-1]
    diff = targets[:, None, :, :] - elements[None, :, :, :]
    if n == 1:
        return np.abs(diff[..., 0, 0])
    if n == 2:
        # Closed-form largest singular value of a 2x2 matrix.
        fro2 = np.sum(np.abs(diff) ** 2, axis=(-2, -1))
        det = (diff[..., 0, 0] * diff[..., 1, 1]
               - diff[..., 0, 1] * diff[..., 1, 0])
        gap = np.sqrt(np.maximum(fro2 ** 2 - 4.0 * np.abs(det) ** 2, 0.0))
        return np.sqrt(0.5 * (fro2 + gap))
    return _opnorm_stack(diff)


def _nearest_distances(targets: np.ndarray, elements: np.ndarray) -> np.ndarray:
    """Min operator-norm distance from each target to the element stack."""
    n = targets.shape[-1]
    count = elements.shape[0]
    out = np.empty(targets.shape[0])
    chunk = max(1, int(4_000_000 // max(count * n * n, 1)))
    for start in range(0, targets.shape[0], chunk):
        t = targets[start:start + chunk]
        out[start:start + t.shape[0]] = _stack_distances(t, elements).min(axis=1)
    return out


def empirical_covering_check(net: UnitaryNet, samples: int,
                             seed: int) -> tuple[float, bool]:
    """Max over Haar samples of the distance to the net, and pass/fail.

    Passes when the largest observed gap is at most the net's epsilon
    (with the usual 1e-12 covering slack).
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    rng = np.random.default_rng(seed)
    max_gap = 0.0
    remaining = samples
    while remaining > 0:
        batch = min(remaining, 2048)
        haar = _haar_batch(net.n, batch, rng)
        gaps = _nearest_distances(haar, net.matrices)
        max_gap = max(max_gap, float(gaps.max()))
        remaining -= batch
    return max_gap, max_gap <= net.epsilon + 1e-12


def empirical_packing_lower_bound(n: int, epsilon: float, trials: int,
                                  seed: int) -> int:
    """Size of a greedily grown epsilon-packing from Haar samples.

    A lower bound on the true packing number N_pack(U(n), epsilon); by the
    sandwich inequalities also a lower-bound witness for N_cov(epsilon/2)
    and an upper-bound check against any covering bound at epsilon/2.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if trials < 1:
        raise ValueError("need at least one trial")
    rng = np.random.default_rng(seed)
    accepted: list[np.ndarray] = []
    stack = np.zeros((0, n, n), dtype=complex)
    for _ in range(trials):
        u = _haar_batch(n, 1, rng)[0]
        if stack.shape[0]:
            d = _nearest_distances(u[None], stack)[0]
            if d <= epsilon:
                continue
        accepted.append(u)
        stack = np.asarray(accepted)
    return stack.shape[0]


def circle_covering_number(epsilon: float) -> int:
    """Exact minimal number of closed epsilon-balls covering U(1) (chordal)."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if epsilon >= 2.0:
        return 1
    half_arc = 2.0 * math.asin(epsilon / 2.0)
    return int(math.ceil(math.pi / half_arc - 1e-12))


def save_net(net: UnitaryNet, path) -> None:
    """Write a net in the binary interchange format.

    Header: n (uint32 LE), epsilon (float64 LE), count (uint64 LE); then each
    element row-major, each entry as two little-endian float64 (re, im).
    """
    count = len(net)
    with open(path, "wb") as fh:
        fh.write(struct.pack("<I", net.n))
        fh.write(struct.pack("<d", net.epsilon))
        fh.write(struct.pack("<Q", count))
        interleaved = np.empty((count, net.n, net.n, 2), dtype="<f8")
        interleaved[..., 0] = net.matrices.real
        interleaved[..., 1] = net.matrices.imag
        fh.write(interleaved.tobytes())


def load_net(path) -> UnitaryNet:
    """Read a net written by save_net; re-validates unitarity of every element."""
    with open(path, "rb") as fh:
        header = fh.read(20)
        if len(header) != 20:
            raise ValueError("truncated net file header")
        n = struct.unpack("<I", header[0:4])[0]
        epsilon = struct.unpack("<d", header[4:12])[0]
        count = struct.unpack("<Q", header[12:20])[0]
        payload = fh.read()
    expected = count * n * n * 16
    if len(payload) != expected:
        raise ValueError(
            f"net file payload has {len(payload)} bytes, expected {expected}")
    flat = np.frombuffer(payload, dtype="<f8").reshape(count, n, n, 2)
    mats = flat[..., 0] + 1j * flat[..., 1]
    return UnitaryNet(n, epsilon, mats, {"method": "deserialized"})
