"""Spectrum profiles, crossover analysis, and deterministic report output.

The crossover analysis pits the log-domain covering lower bound for half-rank
projectors in a d^L-dimensional space against the covering upper bounds of
two resource families (gate count, evolution time), returning the minimal
resource at which the upper bound first matches the geometric demand.
Reports serialize byte-identically: fixed key order and 17-significant-digit
floats.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .circuits import circuit_covering_log_bound
from .grassmann import projector_covering_bounds
from .trotter import evolution_covering_log_bound

_RESOURCES = ("circuit", "time")


@dataclass(frozen=True)
class SpectrumProfile:
    """Distinct eigenvalues (strictly ascending) with positive degeneracies."""

    eigenvalues: tuple[float, ...]
    degeneracies: tuple[int, ...]

    def __post_init__(self) -> None:
        eig = tuple(float(e) for e in self.eigenvalues)
        deg = tuple(int(g) for g in self.degeneracies)
        if not eig:
            raise ValueError("profile needs at least one eigenvalue")
        if len(eig) != len(deg):
            raise ValueError("eigenvalues and degeneracies must align")
        if not all(map(math.isfinite, eig)):
            raise ValueError("eigenvalues must be finite")
        if any(a >= b for a, b in zip(eig, eig[1:])):
            raise ValueError("eigenvalues must be strictly ascending")
        if any(g < 1 for g in deg):
            raise ValueError("degeneracies must be positive")
        object.__setattr__(self, "eigenvalues", eig)
        object.__setattr__(self, "degeneracies", deg)

    @property
    def total(self) -> int:
        return sum(self.degeneracies)

    @property
    def width(self) -> float:
        return 0.5 * (self.eigenvalues[-1] - self.eigenvalues[0])

    def as_dict(self) -> dict[str, Any]:
        return {
            "eigenvalues": list(self.eigenvalues),
            "degeneracies": list(self.degeneracies),
            "total": self.total,
            "width": self.width,
        }


def _snap_eigenvalue(eig: float, center1: float, center2: float,
                     half: float) -> float:
    if abs(eig - center1) <= half:
        return float(center1)
    if abs(eig - center2) <= half:
        return float(center2)
    return float(eig)


def _check_centers(center1: float, center2: float, epsilon: float) -> None:
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if center2 - center1 <= epsilon:
        raise ValueError(
            f"neighborhoods overlap: need center2 - center1 > epsilon, got "
            f"{center2} - {center1} <= {epsilon}")


def coarse_grain_spectrum(profile: SpectrumProfile, center1: float,
                          center2: float, epsilon: float
                          ) -> tuple[SpectrumProfile, float, int, int]:
    """Snap eigenvalues within eps/2 of either center onto it.

    Returns (new profile, shift bound, degeneracy at center1, degeneracy at
    center2). The shift bound eps/2 certifies that the matrix rebuilt from
    the new profile differs from the original by at most eps/2 in operator
    norm. Requires center2 - center1 > eps so the two neighborhoods stay
    disjoint.
    """
    _check_centers(center1, center2, epsilon)
    half = 0.5 * epsilon
    merged: dict[float, int] = {}
    for eig, deg in zip(profile.eigenvalues, profile.degeneracies):
        eig = _snap_eigenvalue(eig, center1, center2, half)
        merged[eig] = merged.get(eig, 0) + deg
    eigs = sorted(merged)
    new = SpectrumProfile(tuple(eigs), tuple(merged[e] for e in eigs))
    return (new, half,
            merged.get(float(center1), 0), merged.get(float(center2), 0))


def coarse_grain_hermitian(matrix: np.ndarray, center1: float,
                           center2: float, epsilon: float
                           ) -> tuple[np.ndarray, float]:
    """Apply the eigenvalue snap to an explicit Hermitian matrix.

    Same snapping rule as coarse_grain_spectrum, acting on the matrix
    itself: each eigenvalue within eps/2 of a center moves onto it while
    the eigenvectors stay fixed. Returns (snapped matrix, shift bound);
    the operator-norm distance to the input is at most the shift bound
    eps/2 because no eigenvalue moves farther than that.
    """
    _check_centers(center1, center2, epsilon)
    a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if np.max(np.abs(a - a.conj().T)) > 1e-10:
        raise ValueError("matrix must be Hermitian")
    half = 0.5 * epsilon
    w, v = np.linalg.eigh(a)
    snapped = np.array([_snap_eigenvalue(x, center1, center2, half)
                        for x in w])
    rebuilt = (v * snapped) @ v.conj().T
    return 0.5 * (rebuilt + rebuilt.conj().T), half


def degeneracy_profile_extensive_z(L: int) -> SpectrumProfile:
    """Spectrum of the extensive single-site-z sum on L qubits.

    Eigenvalues -L, -L+2, ..., L with binomial degeneracies C(L, i).
    """
    if L < 1:
        raise ValueError("need at least one site")
    eig = tuple(float(-L + 2 * i) for i in range(L + 1))
    deg = tuple(math.comb(L, i) for i in range(L + 1))
    return SpectrumProfile(eig, deg)


@dataclass(frozen=True)
class CrossoverRow:
    """Per-system-size result: geometric demand and minimal matching resource."""

    L: int
    m: int
    lower_log: float
    min_gates: int | None
    min_time: float | None

    def as_dict(self) -> dict[str, Any]:
        return {
            "L": self.L,
            "m": self.m,
            "lower_log": self.lower_log,
            "min_gates": self.min_gates,
            "min_time": self.min_time,
        }


@dataclass(frozen=True)
class CrossoverReport:
    """Crossover rows plus growth-fit summary; resource values non-decreasing."""

    resource: str
    d: int
    k: int
    epsilon: float
    rows: tuple[CrossoverRow, ...]
    fit: dict[str, Any] | None
    metadata: dict[str, Any]

    def __post_init__(self) -> None:
        if self.resource not in _RESOURCES:
            raise ValueError(f"resource must be one of {_RESOURCES}")
        values = [self._row_value(r) for r in self.rows]
        if any(a > b for a, b in zip(values, values[1:])):
            raise ValueError("resource values must be non-decreasing in L")

    def _row_value(self, row: CrossoverRow) -> float:
        v = row.min_gates if self.resource == "circuit" else row.min_time
        if v is None:
            raise ValueError(f"row for L={row.L} lacks a {self.resource} value")
        return float(v)

    def as_dict(self) -> dict[str, Any]:
        return {
            "resource": self.resource,
            "d": self.d,
            "k": self.k,
            "epsilon": self.epsilon,
            "rows": [r.as_dict() for r in self.rows],
            "fit": self.fit,
            "metadata": self.metadata,
        }


def _minimal_gates(d: int, k: int, L: int, epsilon: float, target: float) -> int:
    def value(n_gates: int) -> float:
        return circuit_covering_log_bound(d, k, L, n_gates, epsilon).ln_value

    hi = 1
    while value(hi) < target:
        hi *= 2
        if hi > 2 ** 60:
            raise ValueError("minimal gate count search did not terminate")
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if mid < 1 or value(mid) < target:
            lo = mid
        else:
            hi = mid
    return hi


def _minimal_time(d: int, k: int, L: int, K: int, z: int, h_max: float,
                  epsilon: float, target: float) -> float:
    t_min = epsilon * math.sqrt(10.0) / (4.0 * K * math.sqrt(z) * h_max)

    def value(t: float) -> float:
        return evolution_covering_log_bound(L, d, k, K, z, h_max, t,
                                            epsilon).ln_value

    start = t_min * (1.0 + 1e-12)
    if value(start) >= target:
        return start
    hi = start
    while value(hi) < target:
        hi *= 2.0
        if hi > 1e12:
            raise ValueError("minimal time search did not terminate")
    lo = hi / 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if value(mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-12 * hi:
            break
    return hi


def _growth_fit(l_values: Sequence[int], values: Sequence[float]) -> dict[str, Any] | None:
    if len(values) < 2:
        return None
    logs = np.log(np.asarray(values, dtype=float))
    ls = np.asarray(l_values, dtype=float)
    ratios = [float(b / a) for a, b in zip(values, values[1:])]
    slope, intercept = np.polyfit(ls, logs, 1)
    pred = slope * ls + intercept
    ss_res = float(np.sum((logs - pred) ** 2))
    ss_tot = float(np.sum((logs - logs.mean()) ** 2))
    r_squared = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    mean_ratio = float(np.exp(np.mean(np.log(ratios))))
    return {
        "per_site_ratios": ratios,
        "mean_ratio": mean_ratio,
        "log_slope": float(slope),
        "r_squared": r_squared,
    }


def crossover_analysis(d: int, k: int, epsilon: float, l_range,
                       resource: str, params: dict | None = None
                       ) -> CrossoverReport:
    """Minimal resource (gates or time) meeting the projector-covering demand.

    For each L the demand is the log-domain covering lower bound for
    half-rank projectors in dimension m = d^L; the resource is grown until
    its covering upper bound reaches that demand. The time family is the
    canonical nearest-neighbor chain: K = L - 1 terms and configurable z
    (default 3) and h_max (default 1.0). Finite-size trend only; no
    asymptotic claim is made.
    """
    if resource not in _RESOURCES:
        raise ValueError(f"resource must be one of {_RESOURCES}")
    ls = sorted(set(int(x) for x in l_range))
    if not ls:
        raise ValueError("L range is empty")
    if d < 2 or k < 1:
        raise ValueError("d >= 2 and k >= 1 required")
    params = dict(params or {})
    z = int(params.pop("z", 3))
    h_max = float(params.pop("h_max", 1.0))
    if params:
        raise ValueError(f"unknown crossover parameters: {sorted(params)}")
    if resource == "time" and ls[0] < 2:
        raise ValueError("time resource needs L >= 2 (K = L - 1 terms)")

    rows = []
    for L in ls:
        m = d ** L
        n = m // 2
        if n < 1 or n >= m:
            raise ValueError(f"dimension d^L = {m} too small for half-rank split")
        demand = projector_covering_bounds(n, m, epsilon)
        if not demand.lower_valid:
            raise ValueError(
                f"epsilon {epsilon} outside the lower bound's validity "
                f"window (needs epsilon <= 1/71)")
        if demand.lower_log <= 0:
            raise ValueError(
                f"covering lower bound is vacuous at L={L}: the half-rank "
                f"demand is positive only for epsilon < 9/1805 "
                f"(~{9 / 1805:.6f}), got {epsilon}")
        if resource == "circuit":
            gates = _minimal_gates(d, k, L, epsilon, demand.lower_log)
            rows.append(CrossoverRow(L, m, demand.lower_log, gates, None))
        else:
            t = _minimal_time(d, k, L, L - 1, z, h_max, epsilon,
                              demand.lower_log)
            rows.append(CrossoverRow(L, m, demand.lower_log, None, t))

    values = [r.min_gates if resource == "circuit" else r.min_time
              for r in rows]
    fit = _growth_fit(ls, values)
    metadata: dict[str, Any] = {
        "scope": "finite-size trend over the reported range; no asymptotic claim",
        "rank_split": "n = floor(d^L / 2)",
    }
    if resource == "time":
        metadata["family"] = {"K": "L - 1", "z": z, "h_max": h_max}
    return CrossoverReport(
        resource=resource,
        d=d,
        k=k,
        epsilon=float(epsilon),
        rows=tuple(rows),
        fit=fit,
        metadata=metadata,
    )


def _json_scalar(value) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        x = float(value)
        if not math.isfinite(x):
            raise ValueError("reports must not contain non-finite floats")
        return f"{x:.17g}"
    if isinstance(value, str):
        out = io.StringIO()
        out.write('"')
        for ch in value:
            if ch == '"':
                out.write('\\"')
            elif ch == "\\":
                out.write("\\\\")
            elif ord(ch) < 0x20:
                out.write(f"\\u{ord(ch):04x}")
            else:
                out.write(ch)
        out.write('"')
        return out.getvalue()
    raise TypeError(f"cannot serialize {type(value).__name__} in a report")


def _json_encode(value, indent: int) -> str:
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{inner}{_json_scalar(str(k))}: {_json_encode(v, indent + 1)}"
                 for k, v in value.items()]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [f"{inner}{_json_encode(v, indent + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    return _json_scalar(value)


def _report_payload(report) -> dict[str, Any]:
    if hasattr(report, "as_dict"):
        return report.as_dict()
    if isinstance(report, dict):
        return report
    raise TypeError("report must expose as_dict() or be a dict")


def emit_report(report, format: str = "json", path=None) -> str:
    """Serialize a report deterministically; optionally write it to a file.

    JSON output has a fixed key order and 17-significant-digit floats, so
    identical reports yield byte-identical output. CSV is supported for
    crossover reports only (header plus one row per L).
    """
    if format == "json":
        text = _json_encode(_report_payload(report), 0) + "\n"
    elif format == "csv":
        if not isinstance(report, CrossoverReport):
            raise ValueError("CSV output is only defined for crossover reports")
        column = "min_gates" if report.resource == "circuit" else "min_time"
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["L", "m", "lower_log", column])
        for row in report.rows:
            value = row.min_gates if report.resource == "circuit" else row.min_time
            cell = (str(value) if isinstance(value, int)
                    else f"{float(value):.17g}")
            writer.writerow([row.L, row.m, f"{row.lower_log:.17g}", cell])
        text = buf.getvalue()
    else:
        raise ValueError(f"unknown report format {format!r}")
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text
