"""Collapse degenerate van Kampen diagrams into honest ones.

A random degenerate diagram maps some triangles onto edges or vertices of the
target. Collapsing removes them, cutting off any spheres that pinch off on the
way, and never increases the area or changes the boundary word.
"""

from dehn.diagram import collapse, random_degenerate_diagram

for seed in range(6):
    D = random_degenerate_diagram(seed, n=2, target="torus")
    rep = collapse(D)
    rep.diagram.check_combinatorial()
    same = rep.diagram.boundary_word == D.boundary_word
    print(f"seed {seed}: {len(D.faces)} triangles, area {rep.area_before} -> {rep.area_after}, "
          f"{rep.excised_sphere_count} spheres cut off, boundary kept: {same}")
