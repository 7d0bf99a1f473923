"""Qudit circuits: composition, observable conjugation, and discretization.

Site 0 is the leftmost tensor factor (most significant digit of the basis
index). A gate's matrix is indexed row-major over its sorted support. Gate 0
acts first, so the circuit unitary is g_{N-1} ... g_1 g_0.
"""

from __future__ import annotations

import json
import math

import numpy as np

from .linalg import UnitaryMatrix, _require_hermitian
from .logdomain import LogBound

_DENSE_DIM_LIMIT = 4096


class QuditRegister:
    """L qudit sites of local dimension d, with dense total dimension d^L."""

    __slots__ = ("L", "d")

    def __init__(self, L: int, d: int):
        if L < 1:
            raise ValueError("register needs at least one site")
        if d < 2:
            raise ValueError("local dimension must be at least 2")
        if d ** L > _DENSE_DIM_LIMIT:
            raise ValueError(
                f"dense dimension {d}^{L} exceeds the limit {_DENSE_DIM_LIMIT}")
        self.L = int(L)
        self.d = int(d)

    @property
    def dim(self) -> int:
        return self.d ** self.L

    def __eq__(self, other) -> bool:
        return (isinstance(other, QuditRegister)
                and self.L == other.L and self.d == other.d)

    def __hash__(self) -> int:
        return hash((self.L, self.d))

    def __repr__(self) -> str:
        return f"QuditRegister(L={self.L}, d={self.d})"


class Gate:
    """A unitary acting on a sorted tuple of distinct sites."""

    __slots__ = ("support", "matrix")

    def __init__(self, support, matrix):
        sup = tuple(int(s) for s in support)
        if not sup:
            raise ValueError("gate support must be non-empty")
        if len(set(sup)) != len(sup):
            raise ValueError("gate support sites must be distinct")
        if list(sup) != sorted(sup):
            raise ValueError("gate support must be sorted ascending")
        if min(sup) < 0:
            raise ValueError("gate support sites must be non-negative")
        mat = matrix if isinstance(matrix, UnitaryMatrix) else UnitaryMatrix(matrix)
        self.support = sup
        self.matrix = mat

    def __repr__(self) -> str:
        return f"Gate(support={self.support}, dim={self.matrix.dim})"


class Circuit:
    """An ordered gate sequence on a register; validated on construction."""

    __slots__ = ("register", "gates")

    def __init__(self, register: QuditRegister, gates):
        gs = tuple(gates)
        for g in gs:
            if not isinstance(g, Gate):
                raise ValueError("circuit gates must be Gate instances")
            if max(g.support) >= register.L:
                raise ValueError(
                    f"gate support {g.support} exceeds register size {register.L}")
            expected = register.d ** len(g.support)
            if g.matrix.dim != expected:
                raise ValueError(
                    f"gate on {len(g.support)} site(s) must be "
                    f"{expected}-dimensional, got {g.matrix.dim}")
        self.register = register
        self.gates = gs

    @property
    def n_gates(self) -> int:
        return len(self.gates)

    def __repr__(self) -> str:
        return f"Circuit(register={self.register}, n_gates={self.n_gates})"


def _apply_gate(matrix: np.ndarray, support: tuple[int, ...],
                state: np.ndarray, L: int, d: int) -> np.ndarray:
    """Left-multiply a dense (dim, dim) matrix by a gate embedded at support."""
    dim = d ** L
    k = len(support)
    g = matrix.reshape((d,) * k + (d,) * k)
    t = state.reshape((d,) * L + (dim,))
    t = np.tensordot(g, t, axes=(tuple(range(k, 2 * k)), support))
    t = np.moveaxis(t, range(k), support)
    return np.ascontiguousarray(t).reshape(dim, dim)


def circuit_unitary(circuit: Circuit) -> UnitaryMatrix:
    """Dense unitary implemented by the circuit (gate 0 applied first)."""
    reg = circuit.register
    u = np.eye(reg.dim, dtype=complex)
    for gate in circuit.gates:
        u = _apply_gate(gate.matrix.array, gate.support, u, reg.L, reg.d)
    return UnitaryMatrix(u, _validated=True)


def conjugate_observable(circuit: Circuit, observable) -> np.ndarray:
    """Heisenberg image U^dag O U of a Hermitian observable under the circuit."""
    obs = _require_hermitian(observable)
    if obs.shape[0] != circuit.register.dim:
        raise ValueError(
            f"observable dimension {obs.shape[0]} does not match register "
            f"dimension {circuit.register.dim}")
    u = circuit_unitary(circuit).array
    return u.conj().T @ obs @ u


def _pad_gate(gate: Gate, k: int, L: int, d: int) -> Gate:
    """Extend a gate to exactly k sites by tensoring with identity factors."""
    if len(gate.support) == k:
        return gate
    extra = [s for s in range(L) if s not in gate.support]
    needed = k - len(gate.support)
    if len(extra) < needed:
        raise ValueError("register too small to pad gate support")
    padded = tuple(sorted(gate.support + tuple(extra[:needed])))
    positions = tuple(padded.index(s) for s in gate.support)
    eye = np.eye(d ** k, dtype=complex)
    emb = _apply_gate(gate.matrix.array, positions, eye, k, d)
    return Gate(padded, UnitaryMatrix(emb, _validated=True))


def discretize_circuit(circuit: Circuit, net) -> tuple[Circuit, float]:
    """Replace every gate by a net element; returns the circuit and error bound.

    The net acts on d^k-dimensional gates; smaller gates are padded with
    identity factors. The bound is the sum of realized per-gate distances,
    which dominates the operator-norm deviation of the full circuit unitary.
    """
    reg = circuit.register
    n = net.n
    k = round(math.log(n, reg.d))
    if reg.d ** k != n:
        raise ValueError(
            f"net dimension {n} is not a power of the local dimension {reg.d}")
    if k > reg.L:
        raise ValueError(f"net acts on {k} sites but the register has {reg.L}")
    for g in circuit.gates:
        if len(g.support) > k:
            raise ValueError(
                f"gate on {len(g.support)} sites exceeds the net's {k} sites")
    snap = getattr(net, "nearest", None) or net.round
    new_gates = []
    total = 0.0
    for gate in circuit.gates:
        padded = _pad_gate(gate, k, reg.L, reg.d)
        element, dist = snap(padded.matrix)
        new_gates.append(Gate(padded.support, element))
        total += float(dist)
    return Circuit(reg, new_gates), total


def circuit_covering_log_bound(d: int, k: int, L: int, n_gates: int,
                               epsilon: float) -> LogBound:
    """ln of the reachable-set covering bound L^(k Ng) (14 Ng / eps)^(d^(2k) Ng).

    Requires eps <= Ng/5 so that the per-gate net scale eps/(2 Ng) stays
    within the validity window of the unitary-group covering bound.
    """
    if d < 2 or k < 1 or L < 1 or n_gates < 1:
        raise ValueError("d >= 2, k >= 1, L >= 1, and n_gates >= 1 required")
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if epsilon / (2.0 * n_gates) > 0.1:
        raise ValueError(
            f"epsilon too large for inner-net validity: need epsilon <= "
            f"{n_gates / 5.0} (= n_gates/5), got {epsilon}")
    topology = topology_count_log(L, k, n_gates)
    ln_value = topology + (d ** (2 * k)) * n_gates * math.log(
        14.0 * n_gates / epsilon)
    return LogBound(ln_value, {
        "d": d,
        "k": k,
        "L": L,
        "n_gates": n_gates,
        "epsilon": float(epsilon),
        "topology_log": topology,
        "hypothesis_gates_exceed_sites": n_gates > L,
    })


def topology_count_log(L: int, k: int, n_gates: int) -> float:
    """ln of the support-placement count L^(k Ng)."""
    if L < 1 or k < 1 or n_gates < 0:
        raise ValueError("L >= 1, k >= 1, n_gates >= 0 required")
    return k * n_gates * math.log(L)


def circuit_to_json(circuit: Circuit) -> dict:
    """Circuit as a JSON-ready dict: {"L", "d", "gates": [{"support", "matrix"}]}.

    Matrix entries are [re, im] pairs, flattened row-major.
    """
    gates = []
    for g in circuit.gates:
        flat = g.matrix.array.reshape(-1)
        gates.append({
            "support": list(g.support),
            "matrix": [[float(z.real), float(z.imag)] for z in flat],
        })
    return {"L": circuit.register.L, "d": circuit.register.d, "gates": gates}


def circuit_from_json(data) -> Circuit:
    """Parse the JSON circuit format; validates unitarity of every gate."""
    if isinstance(data, (str, bytes)):
        data = json.loads(data)
    try:
        reg = QuditRegister(int(data["L"]), int(data["d"]))
        raw_gates = data["gates"]
    except KeyError as exc:
        raise ValueError(f"circuit JSON missing key {exc}") from None
    gates = []
    for entry in raw_gates:
        support = tuple(int(s) for s in entry["support"])
        pairs = np.asarray(entry["matrix"], dtype=float)
        if pairs.ndim != 2 or pairs.shape[1] != 2:
            raise ValueError("gate matrix must be a list of [re, im] pairs")
        dim = reg.d ** len(support)
        if pairs.shape[0] != dim * dim:
            raise ValueError(
                f"gate matrix has {pairs.shape[0]} entries, expected {dim * dim}")
        mat = (pairs[:, 0] + 1j * pairs[:, 1]).reshape(dim, dim)
        gates.append(Gate(support, mat))
    return Circuit(reg, gates)
