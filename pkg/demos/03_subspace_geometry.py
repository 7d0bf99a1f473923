"""
Subspace geometry: principal angles, the Kato unitary, covering bounds
======================================================================

Rank-n projectors in dimension m form a quotient manifold. The projector
distance equals the sine of the largest principal angle; the Kato unitary
maps one range onto the other and witnesses the two-sided comparison
between the projector metric and the quotient metric.
"""

import numpy as np

from dynnets import (
    Subspace,
    kato_unitary,
    principal_angles,
    projector_covering_bounds,
    projector_distance,
    projector_from_subspace,
    quotient_distance_bounds,
    random_subspace,
)
from dynnets.linalg import matrix_exp, operator_norm

# A random 2-dimensional subspace of C^5 and a small rotation of it; the
# Kato construction needs the pair closer than 1/sqrt(2).
s1 = random_subspace(2, 5, seed=3)
p = projector_from_subspace(s1)
rng = np.random.default_rng(4)
g = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
skew = 0.5 * (g - g.conj().T)
skew *= 0.25 / operator_norm(skew)
w = matrix_exp(skew)
s2 = Subspace(w @ s1.basis)
q = projector_from_subspace(s2)

angles = principal_angles(s1, s2)
dist = projector_distance(p, q)
print("principal angles:", np.round(angles, 4))
print("projector distance:", round(dist, 6),
      "= sin(max angle):", round(float(np.sin(angles[-1])), 6))

# The Kato unitary conjugates P onto Q and stays close to the identity.
v = kato_unitary(p, q)
conj = operator_norm(v.array @ p.matrix @ v.array.conj().T - q.matrix)
print("conjugation defect ||V P V+ - Q||:", f"{conj:.2e}")
print("||1 - V|| =", round(operator_norm(np.eye(5) - v.array), 6),
      "<= (5/sqrt 2) * dist =", round(5 / np.sqrt(2) * dist, 6))

# Quotient distance sandwich: d'(P,Q)/2 <= ... via the same certificate.
lo, hi = quotient_distance_bounds(p, q)
print(f"quotient distance bounds: [{lo:.6f}, {hi:.6f}]")

# Log-domain covering bounds for the projector manifold. At half rank the
# lower bound is positive only for eps < 9/1805, so the demand is real.
bounds = projector_covering_bounds(8, 16, 0.002)
print("rank-8 projectors in dim 16, eps=0.002:")
print("  ln N in [", round(bounds.lower_log, 1), ",",
      round(bounds.upper_log, 1), "]")
print("  lower bound nontrivial:", bounds.lower_log > 0)
