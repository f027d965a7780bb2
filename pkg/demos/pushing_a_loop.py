"""Push a random PL loop in a triangulated disc into the 1-skeleton.

Each triangle the loop crosses gets a centre u near its barycentre; the
radial projection from u sends the loop to the boundary of the triangle.
The certificate records how much the loop was stretched and checks that the
swept region S really connects the old loop to the new one.
"""

from dehn.complex2 import disc_grid
from dehn.pushing import alpha_point_segment, estimate_alpha, push_chain, pushing_constants, random_loop, _O, LocalSegment

K = disc_grid(3)
c = pushing_constants()
print(f"constants: r={c.r}, K={c.K:.4f}, v0={c.v0}, C={c.C:.1f}")

T = random_loop(K, seed=4, steps=10)
result = push_chain(T, K, c, seed=1)
print(result.certificate.table())
print(f"length {T.volume(K):.3f} -> {result.R.volume(K):.3f}; swept area {result.certificate.vol_S:.4f}")

# For a very short segment at the barycentre the bad-centre volume has a closed form.
seg = [LocalSegment(tuple(_O - [5e-7, 0]), tuple(_O + [5e-7, 0]))]
for v in (c.v0, 2 * c.v0):
    est = estimate_alpha(seg, v, 100_000, seed=0, r=c.r)
    print(f"alpha({v}) = {est.alpha:.3e} in [{est.ci_low:.3e}, {est.ci_high:.3e}], "
          f"closed form {alpha_point_segment(v, c.r):.3e}")
