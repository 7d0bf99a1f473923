"""
Discretizing circuits over a gate net
=====================================

Replacing every gate of a circuit by its nearest net element moves the
full unitary by at most the sum of per-gate distances. Conjugated
observables move by at most twice that, scaled by their spectral width.
The number of distinguishable circuits is bounded in the log domain.
"""

import numpy as np

from dynnets import (
    Circuit,
    Gate,
    ImplicitGridNet,
    QuditRegister,
    circuit_covering_log_bound,
    circuit_unitary,
    conjugate_observable,
    discretize_circuit,
    haar_unitary,
    spectral_width,
)
from dynnets.linalg import operator_norm

rng = np.random.default_rng(21)

# A 3-qubit circuit with four Haar-random 2-local gates.
reg = QuditRegister(3, 2)
gates = [Gate((0, 1), haar_unitary(4, seed=1).array),
         Gate((1, 2), haar_unitary(4, seed=2).array),
         Gate((0, 2), haar_unitary(4, seed=3).array),
         Gate((1, 2), haar_unitary(4, seed=4).array)]
circuit = Circuit(reg, gates)

# Discretize over an implicit eps=0.3 grid net on U(4).
net = ImplicitGridNet(4, 0.3)
disc, bound = discretize_circuit(circuit, net)
deviation = operator_norm(circuit_unitary(circuit).array
                          - circuit_unitary(disc).array)
print(f"per-gate distance sum (bound): {bound:.4f}")
print(f"actual full-circuit deviation: {deviation:.4f}")
print("deviation <= bound <= n_gates * eps:",
      deviation <= bound <= len(gates) * 0.3)

# Heisenberg-evolved observables inherit the bound with a factor 2 w(O).
g = rng.normal(size=(8, 8)) + 1j * rng.normal(size=(8, 8))
obs = 0.5 * (g + g.conj().T)
moved = operator_norm(conjugate_observable(circuit, obs)
                      - conjugate_observable(disc, obs))
print(f"observable moved by {moved:.4f} <= "
      f"{2 * bound * spectral_width(obs):.4f}")

# How many circuits are distinguishable at resolution eps? The count is
# astronomically large, so it lives in the log domain.
log_bound = circuit_covering_log_bound(d=2, k=2, L=4, n_gates=8,
                                       epsilon=0.3)
print("log10 circuit covering bound (L=4, 8 gates):",
      round(log_bound.log10_value, 2))
