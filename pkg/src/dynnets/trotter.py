"""Time-dependent lattice Hamiltonians and certified Trotterization.

The exact propagator uses an adaptive fourth-order commutator-free
exponential integrator (two Gauss-node exponential factors per step) with
step doubling and local Richardson extrapolation. Every factor is a true
unitary from an eigendecomposition, so unitarity never drifts beyond the
requested tolerance. The first-order Trotter error is certified against
delta_t * T * K * z * |h|^2, where z counts support overlaps (a term
overlaps itself) and |h| is the largest sup-norm of a term over [0, T].
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .circuits import QuditRegister, _apply_gate
from .linalg import (
    UnitaryMatrix,
    _as_square_array,
    _exp_skew_array,
    _require_hermitian,
    operator_norm,
)
from .logdomain import LogBound

_SQRT3 = math.sqrt(3.0)
_GAUSS_ALPHA1 = 0.25 + _SQRT3 / 6.0
_GAUSS_ALPHA2 = 0.25 - _SQRT3 / 6.0
_MIN_TOL = 1e-12
_EXACT_DIM_LIMIT = 64
_ENVELOPE_GRID = 1024


class ConstantEnvelope:
    """Envelope e(t) = value."""

    kind = "constant"

    def __init__(self, value: float):
        self.value = float(value)
        if not math.isfinite(self.value):
            raise ValueError("envelope value must be finite")

    def __call__(self, t):
        return self.value * np.ones_like(np.asarray(t, dtype=float))

    def sup_abs(self, t0: float, t1: float) -> float:
        return abs(self.value)

    def breakpoints(self) -> tuple[float, ...]:
        return ()

    def to_json(self) -> dict[str, Any]:
        return {"kind": self.kind, "value": self.value}


class CosineEnvelope:
    """Envelope e(t) = amplitude * cos(omega t + phase)."""

    kind = "cosine"

    def __init__(self, amplitude: float, omega: float, phase: float = 0.0):
        self.amplitude = float(amplitude)
        self.omega = float(omega)
        self.phase = float(phase)
        if not all(map(math.isfinite, (self.amplitude, self.omega, self.phase))):
            raise ValueError("envelope parameters must be finite")

    def __call__(self, t):
        return self.amplitude * np.cos(self.omega * np.asarray(t, dtype=float)
                                       + self.phase)

    def sup_abs(self, t0: float, t1: float) -> float:
        # |cos| attains 1 at integer multiples of pi; otherwise the sup over
        # an interval is at one of its endpoints.
        lo, hi = sorted((self.omega * t0 + self.phase,
                         self.omega * t1 + self.phase))
        k = math.ceil(lo / math.pi - 1e-12)
        if k * math.pi <= hi + 1e-12:
            return abs(self.amplitude)
        return abs(self.amplitude) * max(abs(math.cos(lo)), abs(math.cos(hi)))

    def breakpoints(self) -> tuple[float, ...]:
        return ()

    def to_json(self) -> dict[str, Any]:
        return {"kind": self.kind, "amplitude": self.amplitude,
                "omega": self.omega, "phase": self.phase}


class PiecewiseLinearEnvelope:
    """Piecewise-linear envelope through (times[i], values[i]) breakpoints.

    Evaluation outside [times[0], times[-1]] is an error; the envelope must
    be defined on the whole evolution window before it is used.
    """

    kind = "pwl"

    def __init__(self, times: Sequence[float], values: Sequence[float]):
        t = np.asarray(times, dtype=float)
        v = np.asarray(values, dtype=float)
        if t.ndim != 1 or t.shape != v.shape or t.size < 2:
            raise ValueError("need matching 1-d times/values with >= 2 breakpoints")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(v))):
            raise ValueError("breakpoints must be finite")
        if np.any(np.diff(t) <= 0):
            raise ValueError("breakpoint times must be strictly increasing")
        t.setflags(write=False)
        v.setflags(write=False)
        self.times = t
        self.values = v

    def _check_domain(self, lo: float, hi: float) -> None:
        if lo < self.times[0] - 1e-9 or hi > self.times[-1] + 1e-9:
            raise ValueError(
                f"envelope evaluated outside its domain "
                f"[{self.times[0]}, {self.times[-1]}]")

    def __call__(self, t):
        arr = np.asarray(t, dtype=float)
        self._check_domain(float(arr.min()), float(arr.max()))
        return np.interp(arr, self.times, self.values)

    def sup_abs(self, t0: float, t1: float) -> float:
        self._check_domain(t0, t1)
        # Piecewise-linear |e| peaks at window endpoints or interior breakpoints.
        candidates = [t0, t1] + [float(t) for t in self.times if t0 < t < t1]
        return max(abs(float(np.interp(c, self.times, self.values)))
                   for c in candidates)

    def breakpoints(self) -> tuple[float, ...]:
        return tuple(float(t) for t in self.times)

    def to_json(self) -> dict[str, Any]:
        return {"kind": self.kind, "times": self.times.tolist(),
                "values": self.values.tolist()}


def envelope_from_json(obj) -> ConstantEnvelope | CosineEnvelope | PiecewiseLinearEnvelope:
    kind = obj.get("kind")
    if kind == "constant":
        return ConstantEnvelope(obj["value"])
    if kind == "cosine":
        return CosineEnvelope(obj["amplitude"], obj["omega"],
                              obj.get("phase", 0.0))
    if kind == "pwl":
        return PiecewiseLinearEnvelope(obj["times"], obj["values"])
    raise ValueError(f"unknown envelope kind {kind!r}")


class HamiltonianTerm:
    """One lattice term: e(t) * base acting on a sorted site tuple."""

    __slots__ = ("support", "base", "envelope")

    def __init__(self, support, base, envelope):
        sup = tuple(int(s) for s in support)
        if not sup or len(set(sup)) != len(sup) or list(sup) != sorted(sup):
            raise ValueError("support must be a sorted tuple of distinct sites")
        if min(sup) < 0:
            raise ValueError("support sites must be non-negative")
        arr = _require_hermitian(_as_square_array(base, "term base"))
        arr.setflags(write=False)
        self.support = sup
        self.base = arr
        self.envelope = envelope


class TimeDependentHamiltonian:
    """Sum of envelope-modulated lattice terms on a qudit register."""

    def __init__(self, register: QuditRegister, terms):
        ts = tuple(terms)
        if not ts:
            raise ValueError("Hamiltonian needs at least one term")
        for term in ts:
            if not isinstance(term, HamiltonianTerm):
                raise ValueError("terms must be HamiltonianTerm instances")
            if max(term.support) >= register.L:
                raise ValueError(
                    f"term support {term.support} exceeds register size")
            expected = register.d ** len(term.support)
            if term.base.shape[0] != expected:
                raise ValueError(
                    f"term base on {len(term.support)} site(s) must be "
                    f"{expected}-dimensional, got {term.base.shape[0]}")
        self.register = register
        self.terms = ts

    @property
    def n_terms(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        return (f"TimeDependentHamiltonian(register={self.register}, "
                f"n_terms={self.n_terms})")


def term_norm_sup(term: HamiltonianTerm, t_final: float) -> float:
    """sup over [0, T] of ||e(t) * base|| via a 1024-point grid plus exact extrema."""
    if t_final < 0:
        raise ValueError("final time must be non-negative")
    base_norm = operator_norm(term.base)
    grid = np.linspace(0.0, t_final, _ENVELOPE_GRID)
    grid_sup = float(np.max(np.abs(term.envelope(grid))))
    return base_norm * max(grid_sup, term.envelope.sup_abs(0.0, t_final))


def commutation_degree(h: TimeDependentHamiltonian) -> int:
    """Max over terms of the number of terms sharing a site with it (self included)."""
    best = 0
    supports = [set(t.support) for t in h.terms]
    for s in supports:
        overlaps = sum(1 for other in supports if s & other)
        best = max(best, overlaps)
    return best


def _embedded_bases(h: TimeDependentHamiltonian) -> np.ndarray:
    reg = h.register
    eye = np.eye(reg.dim, dtype=complex)
    stack = np.empty((h.n_terms, reg.dim, reg.dim), dtype=complex)
    for i, term in enumerate(h.terms):
        stack[i] = _apply_gate(term.base, term.support, eye, reg.L, reg.d)
    return stack


def _cf4_step(hfun, t: float, h: float) -> np.ndarray:
    """One fourth-order commutator-free step over [t, t + h]."""
    t1 = t + (0.5 - _SQRT3 / 6.0) * h
    t2 = t + (0.5 + _SQRT3 / 6.0) * h
    h1 = hfun(t1)
    h2 = hfun(t2)
    x1 = -1j * h * (_GAUSS_ALPHA1 * h1 + _GAUSS_ALPHA2 * h2)
    x2 = -1j * h * (_GAUSS_ALPHA2 * h1 + _GAUSS_ALPHA1 * h2)
    return _exp_skew_array(x2) @ _exp_skew_array(x1)


def _adaptive_unitary(hfun, t0: float, t1: float, dim: int,
                      tol: float) -> np.ndarray:
    """Propagator over [t0, t1] with accumulated error budgeted to <= tol."""
    span = t1 - t0
    u = np.eye(dim, dtype=complex)
    if span == 0.0:
        return u
    t = t0
    h = span / 8.0
    min_h = 1e-13 * max(span, 1.0)
    # Rounding noise of the doubling estimator grows ~sqrt(dim) * eps; the
    # additive floor keeps the controller from chasing that noise on the
    # final sliver of an interval where the proportional share vanishes.
    noise_floor = 32.0 * np.finfo(float).eps * math.sqrt(dim)
    while t < t1 - 1e-15 * span:
        h = min(h, t1 - t)
        coarse = _cf4_step(hfun, t, h)
        fine = _cf4_step(hfun, t + 0.5 * h, 0.5 * h) @ _cf4_step(hfun, t, 0.5 * h)
        est = operator_norm(fine - coarse)
        # True local error of the extrapolated step is ~est/16, so the
        # accumulated total stays well under tol.
        budget = 0.5 * tol * (h / span) + noise_floor
        if est <= budget:
            u = (fine + (fine - coarse) / 15.0) @ u
            t += h
        elif h <= min_h:
            raise ValueError("step-size underflow in adaptive propagator")
        if est == 0.0:
            factor = 4.0
        else:
            factor = min(4.0, max(0.2, 0.9 * (budget / est) ** 0.2))
        h = max(h * factor, min_h)
    return u


def _piecewise_unitary(hfun, t0: float, t1: float, dim: int, tol: float,
                       knots=()) -> np.ndarray:
    """Compose adaptive segments split at envelope kinks.

    Step doubling assumes a smooth integrand, so intervals are cut at every
    interior breakpoint; each segment gets a tolerance share proportional to
    its length.
    """
    span = t1 - t0
    if span == 0.0:
        return np.eye(dim, dtype=complex)
    interior = sorted({float(k) for k in knots
                       if t0 + 1e-12 * max(span, 1.0) < k
                       < t1 - 1e-12 * max(span, 1.0)})
    cuts = [t0] + interior + [t1]
    u = np.eye(dim, dtype=complex)
    for a, b in zip(cuts, cuts[1:]):
        u = _adaptive_unitary(hfun, a, b, dim, tol * (b - a) / span) @ u
    return u


def exact_propagator(h: TimeDependentHamiltonian, t_final: float,
                     tol: float = 1e-11) -> UnitaryMatrix:
    """Reference time-ordered propagator over [0, T] to accuracy ~tol.

    Time-independent input reduces to the eigendecomposition exponential; the
    result's unitarity defect stays within 10 * tol by construction.
    """
    if t_final < 0:
        raise ValueError("final time must be non-negative")
    if tol < _MIN_TOL:
        raise ValueError(f"tolerance below the supported minimum {_MIN_TOL}")
    dim = h.register.dim
    if dim > _EXACT_DIM_LIMIT:
        raise ValueError(
            f"exact propagation capped at dimension {_EXACT_DIM_LIMIT}, "
            f"got {dim}")
    bases = _embedded_bases(h)
    envelopes = [t.envelope for t in h.terms]

    def hfun(t: float) -> np.ndarray:
        weights = np.array([float(env(t)) for env in envelopes])
        return np.tensordot(weights, bases, axes=(0, 0))

    knots = [b for env in envelopes for b in env.breakpoints()]
    u = _piecewise_unitary(hfun, 0.0, t_final, dim, tol, knots)
    return UnitaryMatrix(u, _validated=True)


def trotter_propagator(h: TimeDependentHamiltonian, t_final: float,
                       n_steps: int) -> UnitaryMatrix:
    """First-order term-sequential propagator with n_steps uniform slices.

    Within each slice the terms act one after another in their given order;
    each single-term local propagator is integrated adaptively to 1e-12 on
    its own support, so the only error is the term-splitting itself.
    """
    if n_steps < 1:
        raise ValueError("need at least one step")
    if t_final < 0:
        raise ValueError("final time must be non-negative")
    reg = h.register
    u = np.eye(reg.dim, dtype=complex)
    delta = t_final / n_steps
    for step in range(n_steps):
        t0 = step * delta
        t1 = (step + 1) * delta
        for term in h.terms:
            dim_loc = reg.d ** len(term.support)
            base = term.base
            env = term.envelope

            def hloc(t: float, _b=base, _e=env) -> np.ndarray:
                return float(_e(t)) * _b

            local = _piecewise_unitary(hloc, t0, t1, dim_loc, 1e-12,
                                       env.breakpoints())
            u = _apply_gate(local, term.support, u, reg.L, reg.d)
    return UnitaryMatrix(u, _validated=True)


class CertificateViolation(RuntimeError):
    """Measured Trotter error exceeded the certified bound."""

    def __init__(self, measured: float, bound: float):
        super().__init__(
            f"measured Trotter error {measured:.6e} exceeds bound {bound:.6e}")
        self.measured = measured
        self.bound = bound


@dataclass(frozen=True)
class TrotterCertificate:
    """A validated pairing of measured Trotter error and its a priori bound."""

    T: float
    n_steps: int
    delta_t: float
    K: int
    z: int
    h_max: float
    bound: float
    measured: float

    def as_dict(self) -> dict[str, Any]:
        return {
            "T": self.T,
            "N_t": self.n_steps,
            "delta_t": self.delta_t,
            "K": self.K,
            "z": self.z,
            "h_max": self.h_max,
            "bound": self.bound,
            "measured": self.measured,
        }


def certify_trotter(h: TimeDependentHamiltonian, t_final: float,
                    n_steps: int) -> TrotterCertificate:
    """Measure ||U_trotter - U_exact|| and certify it against the a priori bound.

    The bound is delta_t * T * K * z * h_max^2. A measurement exceeding the
    bound by more than 1e-9 raises CertificateViolation (it would falsify
    the bound, so it must never be silently returned).
    """
    exact = exact_propagator(h, t_final, tol=1e-11)
    approx = trotter_propagator(h, t_final, n_steps)
    measured = operator_norm(approx.array - exact.array)
    k_terms = h.n_terms
    z = commutation_degree(h)
    h_max = max(term_norm_sup(term, t_final) for term in h.terms)
    delta_t = t_final / n_steps
    bound = delta_t * t_final * k_terms * z * h_max ** 2
    if measured > bound + 1e-9:
        raise CertificateViolation(measured, bound)
    return TrotterCertificate(
        T=float(t_final),
        n_steps=int(n_steps),
        delta_t=float(delta_t),
        K=k_terms,
        z=z,
        h_max=float(h_max),
        bound=float(bound),
        measured=float(measured),
    )


def evolution_covering_log_bound(L: int, d: int, k: int, K: int, z: int,
                                 h_max: float, t_final: float,
                                 epsilon: float) -> LogBound:
    """ln of the covering bound for time-T reachable conjugations.

    The bound is L^(k K) * (112 T^2 K^2 z h^2 / eps^2)^(4 d^(2k) T^2 K^2 z
    h^2 / eps); it requires eps^2 / (16 T^2 K^2 z h^2) <= 1/10 so the
    implied per-gate net scale stays within its validity window.
    """
    if L < 1 or d < 2 or k < 1 or K < 1 or z < 1:
        raise ValueError("L >= 1, d >= 2, k >= 1, K >= 1, z >= 1 required")
    if h_max <= 0 or t_final <= 0 or epsilon <= 0:
        raise ValueError("h_max, T, and epsilon must be positive")
    scale = t_final ** 2 * K ** 2 * z * h_max ** 2
    net_scale = epsilon ** 2 / (16.0 * scale)
    if net_scale > 0.1:
        raise ValueError(
            f"epsilon too large for inner-net validity: need epsilon <= "
            f"{math.sqrt(1.6 * scale):.6g}, got {epsilon}")
    exponent = 4.0 * d ** (2 * k) * scale / epsilon
    ln_value = k * K * math.log(L) + exponent * math.log(
        112.0 * scale / epsilon ** 2)
    return LogBound(ln_value, {
        "L": L,
        "d": d,
        "k": k,
        "K": K,
        "z": z,
        "h_max": float(h_max),
        "T": float(t_final),
        "epsilon": float(epsilon),
        "n_steps_implied": 4.0 * t_final ** 2 * K * z * h_max ** 2 / epsilon,
    })


def hamiltonian_to_json(h: TimeDependentHamiltonian) -> dict[str, Any]:
    """Hamiltonian as a JSON-ready dict mirroring the circuit format."""
    terms = []
    for term in h.terms:
        flat = term.base.reshape(-1)
        terms.append({
            "support": list(term.support),
            "base": [[float(x.real), float(x.imag)] for x in flat],
            "envelope": term.envelope.to_json(),
        })
    return {"L": h.register.L, "d": h.register.d, "terms": terms}


def hamiltonian_from_json(data) -> TimeDependentHamiltonian:
    """Parse the JSON Hamiltonian format; validates Hermiticity of each base."""
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    try:
        reg = QuditRegister(int(data["L"]), int(data["d"]))
        raw_terms = data["terms"]
    except KeyError as exc:
        raise ValueError(f"Hamiltonian JSON missing key {exc}") from None
    terms = []
    for entry in raw_terms:
        support = tuple(int(s) for s in entry["support"])
        pairs = np.asarray(entry["base"], dtype=float)
        if pairs.ndim != 2 or pairs.shape[1] != 2:
            raise ValueError("term base must be a list of [re, im] pairs")
        dim = reg.d ** len(support)
        if pairs.shape[0] != dim * dim:
            raise ValueError(
                f"term base has {pairs.shape[0]} entries, expected {dim * dim}")
        base = (pairs[:, 0] + 1j * pairs[:, 1]).reshape(dim, dim)
        terms.append(HamiltonianTerm(support, base,
                                     envelope_from_json(entry["envelope"])))
    return TimeDependentHamiltonian(reg, terms)
