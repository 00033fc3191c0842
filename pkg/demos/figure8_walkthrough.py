"""Solve a region choice problem on the figure-eight knot, under all four rules.

Run: python3 demos/figure8_walkthrough.py
"""

from regionchoice import corpus
from regionchoice.choice import ProblemInstance, ScoreVector, kernel_basis, solve
from regionchoice.matrices import RULES, region_choice_matrix

dg = corpus.builtin("figure8").diagram
print(f"figure-eight: n={dg.n} crossings, {len(dg.regions)} regions, outer region R{dg.outer}")
print("signs:", {x: dg.sign(x) for x in dg.crossing_ids})

scores = ScoreVector.of(dg, [1, -1, 3, 2])
for code in RULES:
    a = region_choice_matrix(dg, code)
    print(f"\nrule {code}\n{a.to_text()}")
    sol = solve(ProblemInstance(dg, code, scores))
    print("u =", list(sol.u), "  A u + c =", [p + q for p, q in zip(a @ list(sol.u), scores.vector(dg))])

# adding a kernel vector changes no score, so solutions are never unique
u_inf = kernel_basis(dg, "a2")[-1]
print("\nthe all-ones region vector is a kernel vector of A_a2:", list(u_inf))
