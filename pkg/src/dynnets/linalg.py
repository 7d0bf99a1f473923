"""Dense complex linear algebra kernels.

Operator norms, skew-Hermitian exponentials, Haar-random unitaries, principal
logarithms, and the two-sided Lipschitz comparison for the exponential map.
Everything here is deterministic for a fixed seed.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

UNITARY_TOL = 1e-10
SKEW_TOL = 1e-12
HERMITIAN_TOL = 1e-10

# Above this dimension operator_norm switches from full SVD to power iteration.
_SVD_DIM_LIMIT = 64


def _as_square_array(a, name: str = "matrix") -> np.ndarray:
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be a square 2-d array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr.view(float))):
        raise ValueError(f"{name} has non-finite entries")
    return arr


def operator_norm(a) -> float:
    """Largest singular value of a square complex matrix.

    Uses a full SVD up to dimension 64 and power iteration on A^dag A above
    that (deterministic start vector, relative tolerance 1e-13).
    """
    arr = _as_square_array(a)
    n = arr.shape[0]
    if n == 0:
        return 0.0
    if n <= _SVD_DIM_LIMIT:
        return float(np.linalg.svd(arr, compute_uv=False)[0])
    return _power_iteration_norm(arr)


def _power_iteration_norm(a: np.ndarray, tol: float = 1e-13, max_iter: int = 20000) -> float:
    rng = np.random.default_rng(0)
    n = a.shape[1]
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    v /= np.linalg.norm(v)
    sigma_prev = 0.0
    stable = 0
    for _ in range(max_iter):
        w = a.conj().T @ (a @ v)
        s = np.linalg.norm(w)
        if s == 0.0:
            return 0.0
        v = w / s
        sigma = float(np.sqrt(s))
        if abs(sigma - sigma_prev) <= tol * max(sigma, 1.0):
            stable += 1
            if stable >= 3:
                return sigma
        else:
            stable = 0
        sigma_prev = sigma
    return sigma_prev


def _opnorm_stack(stack: np.ndarray) -> np.ndarray:
    """Operator norms over the last two axes of a (..., n, n) stack."""
    if stack.shape[-1] == 0:
        return np.zeros(stack.shape[:-2])
    return np.linalg.svd(stack, compute_uv=False)[..., 0]


class UnitaryMatrix:
    """A square complex matrix validated against ||U^dag U - 1|| <= 1e-10."""

    __slots__ = ("array",)

    def __init__(self, array, *, _validated: bool = False):
        arr = np.array(_as_square_array(array, "unitary"), order="C")
        if not _validated:
            defect = operator_norm(arr.conj().T @ arr - np.eye(arr.shape[0]))
            if defect > UNITARY_TOL:
                raise ValueError(f"matrix is not unitary (defect {defect:.3e})")
        arr.setflags(write=False)
        self.array = arr

    @property
    def dim(self) -> int:
        return self.array.shape[0]

    def __repr__(self) -> str:
        return f"UnitaryMatrix(dim={self.dim})"


class SkewHermitian:
    """A square complex matrix validated against ||X + X^dag|| <= 1e-12."""

    __slots__ = ("array",)

    def __init__(self, array, *, _validated: bool = False):
        arr = np.array(_as_square_array(array, "skew-Hermitian matrix"), order="C")
        if not _validated:
            defect = operator_norm(arr + arr.conj().T)
            if defect > SKEW_TOL:
                raise ValueError(f"matrix is not skew-Hermitian (defect {defect:.3e})")
        arr.setflags(write=False)
        self.array = arr

    @property
    def dim(self) -> int:
        return self.array.shape[0]

    def __repr__(self) -> str:
        return f"SkewHermitian(dim={self.dim})"


@dataclass(frozen=True)
class Spectrum:
    """Real eigenvalues of a Hermitian matrix, sorted ascending."""

    eigenvalues: tuple[float, ...]

    def __post_init__(self) -> None:
        vals = tuple(float(v) for v in self.eigenvalues)
        if any(vals[i] > vals[i + 1] for i in range(len(vals) - 1)):
            raise ValueError("eigenvalues must be sorted ascending")
        object.__setattr__(self, "eigenvalues", vals)

    @classmethod
    def from_hermitian(cls, o) -> "Spectrum":
        arr = _require_hermitian(o)
        return cls(tuple(np.linalg.eigvalsh(arr)))

    @property
    def width(self) -> float:
        if not self.eigenvalues:
            raise ValueError("empty spectrum has no width")
        return 0.5 * (self.eigenvalues[-1] - self.eigenvalues[0])


def _require_hermitian(o) -> np.ndarray:
    arr = _as_square_array(o, "observable")
    if operator_norm(arr - arr.conj().T) > HERMITIAN_TOL:
        raise ValueError("matrix is not Hermitian within 1e-10")
    return 0.5 * (arr + arr.conj().T)


def spectral_width(o) -> float:
    """Half the spread of the spectrum of a Hermitian matrix."""
    return Spectrum.from_hermitian(o).width


def matrix_exp(x) -> np.ndarray:
    """Matrix exponential; skew-Hermitian input takes an exactly-unitary path.

    For X with ||X + X^dag|| <= 1e-12 the result is assembled from the
    eigendecomposition of the Hermitian matrix -iX, so it passes the
    UnitaryMatrix invariant. Other inputs go through scipy's expm.
    """
    if isinstance(x, SkewHermitian):
        return _exp_skew_array(x.array)
    arr = _as_square_array(x)
    if operator_norm(arr + arr.conj().T) <= SKEW_TOL:
        return _exp_skew_array(arr)
    return scipy.linalg.expm(arr)


def _exp_skew_array(x: np.ndarray) -> np.ndarray:
    h = -1j * x
    h = 0.5 * (h + h.conj().T)
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * w)) @ v.conj().T


def _exp_skew_stack(stack: np.ndarray) -> np.ndarray:
    """Exponentials of a (..., n, n) stack of skew-Hermitian matrices."""
    h = -1j * stack
    h = 0.5 * (h + np.conj(np.swapaxes(h, -1, -2)))
    w, v = np.linalg.eigh(h)
    phases = np.exp(1j * w)
    return np.einsum("...ik,...k,...jk->...ij", v, phases, np.conj(v))


def haar_unitary(n: int, seed: int) -> UnitaryMatrix:
    """Haar-distributed random unitary via QR of a complex Ginibre matrix."""
    rng = np.random.default_rng(seed)
    return UnitaryMatrix(_haar_batch(n, 1, rng)[0], _validated=True)


def _haar_batch(n: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """(count, n, n) stack of independent Haar unitaries."""
    z = (rng.standard_normal((count, n, n)) + 1j * rng.standard_normal((count, n, n)))
    z /= np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    diag = np.einsum("...ii->...i", r)
    phases = diag / np.abs(diag)
    return q * phases[..., None, :]


def random_skew_in_ball(n: int, radius: float, seed: int) -> SkewHermitian:
    """Random skew-Hermitian matrix with operator norm in (0, radius].

    Antihermitizes a complex Gaussian matrix, then rescales to u * radius
    where u is uniform on (0, 1].
    """
    if radius <= 0:
        raise ValueError("radius must be positive")
    rng = np.random.default_rng(seed)
    return SkewHermitian(_skew_ball_batch(n, radius, 1, rng)[0], _validated=True)


def _skew_ball_batch(n: int, radius: float, count: int,
                     rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((count, n, n)) + 1j * rng.standard_normal((count, n, n))
    x = 0.5 * (g - np.conj(np.swapaxes(g, -1, -2)))
    norms = _opnorm_stack(x)
    norms[norms == 0.0] = 1.0
    u = 1.0 - rng.random(count)  # uniform on (0, 1]
    return x * (u * radius / norms)[:, None, None]


def skew_basis(n: int) -> np.ndarray:
    """Orthonormal basis of u(n) as an (n^2, n, n) stack.

    Orthonormal under the real inner product Re tr(A^dag B): the n matrices
    i E_kk, and for k < l the pairs (E_kl - E_lk)/sqrt(2) and
    i (E_kl + E_lk)/sqrt(2).
    """
    if n < 1:
        raise ValueError("dimension must be at least 1")
    basis = np.zeros((n * n, n, n), dtype=complex)
    idx = 0
    for k in range(n):
        basis[idx, k, k] = 1j
        idx += 1
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    for k in range(n):
        for l in range(k + 1, n):
            basis[idx, k, l] = inv_sqrt2
            basis[idx, l, k] = -inv_sqrt2
            idx += 1
            basis[idx, k, l] = 1j * inv_sqrt2
            basis[idx, l, k] = 1j * inv_sqrt2
            idx += 1
    return basis


def principal_log(u) -> SkewHermitian:
    """Principal logarithm of a unitary: skew-Hermitian X with exp(X) = U.

    Eigenphases are taken in (-pi, pi], so ||X|| <= pi always. Computed from
    the complex Schur form, which is diagonal for a unitary matrix.
    """
    arr = u.array if isinstance(u, UnitaryMatrix) else UnitaryMatrix(u).array
    t, z = scipy.linalg.schur(arr, output="complex")
    diag = np.diagonal(t)
    # np.angle maps to (-pi, pi] with angle(-1) = +pi, as required.
    theta = np.angle(diag)
    x = (z * (1j * theta)) @ z.conj().T
    x = 0.5 * (x - x.conj().T)
    return SkewHermitian(x, _validated=True)


def check_exp_lipschitz(x, y) -> tuple[float, float, float]:
    """Two-sided comparison of exp-map distortion for skew-Hermitian X, Y.

    Returns (lower, mid, upper) where mid = ||exp(X) - exp(Y)||,
    upper = ||X - Y||, and lower = (2 - e^r) ||X - Y|| with
    r = max(||X||, ||Y||). mid <= upper always holds; lower <= mid holds
    whenever r is small enough that 2 - e^r is a valid contraction factor
    (lower is clamped at 0 when 2 - e^r < 0).
    """
    xa = x.array if isinstance(x, SkewHermitian) else SkewHermitian(x).array
    ya = y.array if isinstance(y, SkewHermitian) else SkewHermitian(y).array
    if xa.shape != ya.shape:
        raise ValueError("matrices must have matching dimensions")
    diff = operator_norm(xa - ya)
    mid = operator_norm(matrix_exp(xa) - matrix_exp(ya))
    r = max(operator_norm(xa), operator_norm(ya))
    factor = max(2.0 - np.exp(r), 0.0)
    return (factor * diff, mid, diff)
