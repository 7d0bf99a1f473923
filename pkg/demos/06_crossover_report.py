"""
Where dynamical reach meets geometric demand
============================================

Half-rank projectors in a d^L-dimensional space need exp(Theta(4^L))
covering elements at fixed resolution. Circuits and time evolutions can
only reach exp(poly(resource)) many distinguishable observables, so the
minimal resource matching the demand must itself grow exponentially in L.
The report quantifies that growth at desk scale.
"""

from dynnets import crossover_analysis, emit_report

# Gate-count family: minimal N_G whose covering upper bound reaches the
# half-rank demand at eps = 1/1000, d = 2, k = 2.
gates = crossover_analysis(2, 2, 0.001, range(8, 15), "circuit")
print("L, minimal gate count:")
for row in gates.rows:
    print(f"  L={row.L}: {row.min_gates}")
print("per-site growth ratios:",
      [round(r, 3) for r in gates.fit["per_site_ratios"]])
print("geometric mean ratio:", round(gates.fit["mean_ratio"], 3))

# Time family: canonical nearest-neighbor chain with K = L - 1 terms.
times = crossover_analysis(2, 2, 0.001, range(8, 15), "time")
print("L, minimal evolution time:")
for row in times.rows:
    print(f"  L={row.L}: {row.min_time:.5f}")
print("log-linear fit R^2:", round(times.fit["r_squared"], 6))
print("scope:", times.metadata["scope"])

# Reports serialize deterministically: JSON with fixed key order and
# 17-digit floats, or CSV with one row per system size.
csv_text = emit_report(gates, format="csv")
print()
print(csv_text)
