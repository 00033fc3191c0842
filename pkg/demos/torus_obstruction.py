"""The (2,4) torus link: not every score vector can be cleared.

A rational functional that is integral on the columns but not on -c proves
that no integral region choice exists.

Run: python3 demos/torus_obstruction.py
"""

from regionchoice import corpus, zlinalg
from regionchoice.choice import image_basis_two_component, image_membership
from regionchoice.matrices import region_choice_matrix

dg = corpus.builtin("torus_2_4").diagram
a = region_choice_matrix(dg, "a2")
print(a.to_text())

for c in ([1, 1, 0, 0], [1, 0, 0, -1], [2, 1, -1, 0]):
    ok = image_membership(dg, "a2", c)
    print(f"\nc = {c}: c1-c2+c3-c4 = {c[0] - c[1] + c[2] - c[3]}, solvable = {ok}")
    if not ok:
        y = zlinalg.infeasibility_certificate(a.entries, [-v for v in c])
        print("  certificate y =", [str(t) for t in y])
        print("  y.A =", [str(sum(yi * row[j] for yi, row in zip(y, a.entries))) for j in range(len(dg.regions))])
        print("  y.(-c) =", str(sum(yi * -ci for yi, ci in zip(y, c))))

print("\nimage basis (alternating):", [b.to_dict() for b in image_basis_two_component(dg, "alternating")])
print("image basis (definite):   ", [b.to_dict() for b in image_basis_two_component(dg, "definite")])
