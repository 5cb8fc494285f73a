"""Polynomial norms: contractions against the grid sup, and the extremal
shift calculus for power bounded operators.

For a contraction, ||p(C)|| never exceeds the sup of |p| on the circle.
For a merely K power bounded operator the right comparison object is the
extremal weighted shift S_K, evaluated on nested truncations.
"""

import numpy as np

from isolab import Operator, extremal_shift, poly_eval, sup_grid, vn_check
from isolab.numerics import op_norm

rng = np.random.default_rng(3)

# contraction side
a = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
c = 0.95 * a / op_norm(a)
p = rng.normal(size=9)
g = sup_grid(p)
print("random contraction, random degree 8 polynomial")
print("||p(C)|| =", op_norm(poly_eval(p, c)))
print("sup |p| on the circle (grid):", g.sup)

# power bounded side
d = 4
u = np.linalg.qr(rng.normal(size=(d, d)))[0]
dm = np.diag(rng.uniform(0.6, 1.5, size=d))
t = Operator(dm @ u @ np.linalg.inv(dm))
rep = vn_check(p, t, 2.5, [32, 64, 128, 256])
print()
print("power bounded operator, K = 2.5, measured power sup:", rep.power_sup)
print("||p(T)|| =", rep.poly_norm)
print("||p(S_K[N])|| over the sweep:", [f"{x:.6f}" for x in rep.shift_norms])
print("nondecreasing in N:", rep.monotone, "; verdict:", rep.verdict)

# the extremal shift itself: first weights for a few K
for k in (1.5, 3.0, 8.0):
    s = extremal_shift(k, 8)
    print(f"K = {k}: first extremal weights", np.round(s.weights[:4], 5))
