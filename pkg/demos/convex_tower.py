"""The doubling tower of a convex operator, level by level.

Each level halves the distance to a 2-isometry in an averaged sense, but
the operator norm of the compressed second difference is not monotone:
it oscillates between odd and even levels while the even subsequence
decays. The Jordan block shows the refusal path.
"""

import numpy as np

from isolab import Operator, convex_defect, iterate_tower, one_step_lift

t = Operator(np.diag([1.0, 0.5]))
cd = convex_defect(t)
print("base operator diag(1, 0.5), convex defect min eigenvalue:", cd.min_eig)

res = iterate_tower(t, 10)
print()
print("level  dim    ||P_H Delta_2(T_j) P_H||")
for st in res.states:
    print(f"{st.level:5d}  {st.dim:5d}  {st.defect2_norm:.10f}")
print()
print("note the odd/even oscillation; the even levels decay like 2^-j")

# one explicit doubling step, to see the block structure
t1 = one_step_lift(t)
print()
print("one step lift of diag(1, 0.5):")
print(np.round(t1.matrix.real, 4))

# a linear-growth operator is refused before any tower is built
j = Operator(np.array([[1.0, 1.0], [0.0, 1.0]]))
res_j = iterate_tower(j, 5)
print()
print("Jordan block [[1,1],[0,1]]: diverging =", res_j.diverging,
      "(squared power norms grow superlinearly, tower refused)")
