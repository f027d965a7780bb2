"""Signed degrees of PL maps from a disc onto a triangle.

The preimage of the closed simplex splits into components. Counting preimages
of a generic point with orientation signs gives each component a degree d,
and the component must have area at least |d| times the area of the simplex.
"""

from dehn.complex2 import TRIANGLE_AREA
from dehn.plmaps import component_degrees, disc_to_degenerate_diagram, example_map, random_aligned_map, random_disc_map

for name in ("identity", "wrap2", "fold", "fold_pair", "skeleton"):
    rep = component_degrees(example_map(name))
    print(f"{name:<10}", [(c.degree, round(c.area, 4)) for c in rep.components])

worst = min(c.area - TRIANGLE_AREA * abs(c.degree)
            for seed in range(30) for c in component_degrees(random_disc_map(seed), seed).components)
print(f"\n30 random maps: smallest slack area - (sqrt3/2)|d| = {worst:.4f}")

f = random_aligned_map(2, 3, "torus")
D, cert = disc_to_degenerate_diagram(f, 2)
print(f"aligned map: total |d| = {cert.total_abs_degree}, diagram area = {D.area}")
