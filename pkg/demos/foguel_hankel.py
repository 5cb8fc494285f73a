"""Foguel block operators: power bounds and a 3-isometric lifting.

First the lacunary coupling F = [[S*, X/N], [0, S]] and its explicit
power bound, then a scaled Hankel instance lifted to S = V + Q with V
isometric on the interior and Q^2 = 0.
"""

import numpy as np

from isolab import (
    FoguelSpec,
    foguel_hankel_lift,
    foguel_power_report,
    hankel_from_symbol,
)
from isolab.numerics import op_norm

spec = FoguelSpec(n_param=4, trunc=100, k_max=4)
rep = foguel_power_report(spec, n_max=60)
print("Foguel operator, N =", spec.n_param, "coupling on indices 3, 9, 27, 81")
print("sup ||F^n|| over n <= 60:", max(rep.power_norms))
print("bound (1/N + sqrt(4 + 1/N))/2:", rep.bound)
print("sup ||X_n||:", max(rep.hankel_norms), "(stays at 1: the coupling blocks")
print("do not accumulate)")

# a Hankel coupling with the shifts scaled strictly inside the disk
n = 24
s = 0.6
shift = np.eye(n, k=-1)
c = hankel_from_symbol([1.0, 0.5, 0.25], n)
c = 0.9 * c / op_norm(c)

cert = foguel_hankel_lift(s * shift.T, c, s * shift, n)
print()
print("Hankel instance, scale", s, ", truncation", n)
print("||Q^2||:", cert.q_square_norm, "(exactly zero by block triangularity)")
print("||VQ - QV|| on the interior:", cert.commutator_norm)
print("order 3 defect on the interior:", cert.defect3_interior)
print("lifting residual:", cert.lifting_residual)
print("||Ctilde|| - ||C||:", cert.commutant.norm_excess)
print()
print("intertwiner band norms along the ladder (decay sets the interior):")
print([f"{b:.1e}" for b in cert.commutant.band_norms[:10]])
