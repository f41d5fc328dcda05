"""
Cluster data and Levy obstructions straight from angle pairs.

Run:  python3 demos/cluster_cycles.py

Each mating is given by one pair of angles per side.  From the ray-class
graph of the formal mating we read off the cluster period, the rotation
number rho and the displacement delta, and decide whether a Levy cycle
obstructs the mating.
"""
from artifact import MatingSpec, cluster_data, levy_check, twist_solvable, ClusterConfiguration

specs = {
    "F (cubic)": {"degree": 3, "white": ["11/80", "19/80"], "black": ["22/80", "24/80"]},
    "G (cubic)": {"degree": 3, "white": ["21/80", "29/80"], "black": ["71/80", "73/80"]},
    "rabbit + aeroplane": {"degree": 2, "white": ["1/7", "2/7"], "black": ["3/7", "4/7"]},
    "rabbit + co-rabbit": {"degree": 2, "white": ["1/7", "2/7"], "black": ["5/7", "6/7"]},
}

for name, d in specs.items():
    spec = MatingSpec.from_dict(d)
    rep = levy_check(spec)
    if rep.obstructed:
        print(f"{name:20s} obstructed: {rep.witness}")
        continue
    data, star = cluster_data(spec)
    print(f"{name:20s} period {data.period}  rho {data.rho}  delta {data.delta}")

# F and G share the same data, which is why the invariants demo compares them.

print()
print("both critical points in one period-2 cluster:")
for degree in (2, 3, 4):
    r = levy_check(ClusterConfiguration(2, (0, 0), degree, 4))
    print(f"  degree {degree}: obstructed={r.obstructed}")

print()
print("twist equation with discrepancy 1:")
for degree in range(2, 7):
    ok, sol = twist_solvable(degree, 1)
    print(f"  degree {degree}: {'solvable, k = ' + str(sol) if ok else 'no solution'}")
