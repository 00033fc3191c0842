"""Command line entry point: ``regionchoice <command> ...``.

Exit codes: 0 success (an unsolvable instance is a successful answer),
1 domain error, 2 usage or parse error, 3 internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path
from typing import Callable, Optional, Sequence

from . import choice, corpus, moves, numbering, zlinalg
from .diagram import DiagramError, InvariantError, LinkDiagram, parse_diagram, splice, unsplice
from .matrices import RULES, Rule, mod2_reduce, region_choice_matrix


class UsageError(Exception):
    pass


def _load(path: str) -> LinkDiagram:
    if path.startswith("builtin:"):
        return corpus.builtin(path[len("builtin:"):]).diagram
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return parse_diagram(text)
    except DiagramError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _scores(dg: LinkDiagram, text: str) -> choice.ScoreVector:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"bad --scores JSON: {exc}") from None
    if isinstance(obj, list):
        return choice.ScoreVector.of(dg, obj)
    if not isinstance(obj, dict):
        raise UsageError("--scores must be a JSON object keyed by crossing id")
    return choice.ScoreVector.parse(dg, obj)


def _fraction(v) -> str:
    return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"


# ----------------------------------------------------------------- commands


def cmd_info(args) -> dict:
    dg = _load(args.file)
    return {
        "n": dg.n,
        "d": dg.d,
        "l": dg.l,
        "regions": len(dg.regions),
        "reducible_crossings": sorted(dg.reducible_crossings()),
        "signs": {str(x): dg.sign(x) for x in dg.crossing_ids},
        "self_crossings": [x for x in dg.crossing_ids if dg.is_self_crossing(x)],
        "outer_region": dg.outer,
    }


def cmd_matrix(args):
    m = region_choice_matrix(_load(args.file), args.rule)
    return m.to_text() if args.text else m.to_dict()


def cmd_solve(args) -> dict:
    dg = _load(args.file)
    scores = _scores(dg, args.scores)
    rule = Rule.parse(args.rule)
    sol = choice.solve(choice.ProblemInstance(dg, rule, scores))
    out: dict = {"rule": rule.code, "scores": scores.to_dict(), "solvable": sol is not None}
    if sol is not None:
        out.update(sol.to_dict())
    else:
        a = region_choice_matrix(dg, rule)
        y = zlinalg.infeasibility_certificate(a, [-v for v in scores.vector(dg)])
        out["membership"] = {
            "in_image": False,
            "functional": {str(x): _fraction(v) for x, v in zip(dg.crossing_ids, y)},
            "functional_on_columns_integral": True,
            "functional_on_minus_scores": _fraction(sum(v * -c for v, c in zip(y, scores.vector(dg)))),
        }
    return out


def cmd_member(args) -> dict:
    dg = _load(args.file)
    scores = _scores(dg, args.scores)
    ok = choice.image_membership(dg, args.rule, scores)
    return {"rule": args.rule, "scores": scores.to_dict(), "member": ok, "solvable": ok}


def cmd_kernel(args) -> dict:
    dg = _load(args.file)
    rule = Rule.parse(args.rule)
    if rule.counting == "double":
        basis = [list(v) for v in choice.kernel_basis(dg, rule)]
        kind = "standard" if rule.family == "alternating" else "standard-flipped"
    else:
        basis = zlinalg.kernel_lattice(region_choice_matrix(dg, rule))
        kind = "hnf"
    return {"rule": rule.code, "kind": kind, "rank": len(basis), "basis": basis}


def cmd_image_basis(args) -> dict:
    dg = _load(args.file)
    basis = choice.image_basis_two_component(dg, args.family)
    return {"family": args.family, "basis": [b.to_dict() for b in basis]}


def cmd_corpus(args):
    if args.action == "list":
        return corpus.list_builtins()
    if not args.name:
        raise UsageError("corpus dump needs a NAME")
    try:
        return corpus.builtin(args.name).diagram.to_dict()
    except DiagramError as exc:
        raise UsageError(str(exc)) from None


# ------------------------------------------------------------------- verify


def diagram_checks(dg: LinkDiagram, rng: random.Random, samples: int = 20) -> list[tuple[str, bool, str]]:
    """Property checks on one diagram; each is (name, passed, detail)."""
    results: list[tuple[str, bool, str]] = []

    def check(name: str, fn: Callable[[], Optional[str]]):
        try:
            detail = fn()
            results.append((name, detail is None, detail or ""))
        except (DiagramError, InvariantError, ArithmeticError) as exc:
            results.append((name, False, f"{type(exc).__name__}: {exc}"))

    mats = {code: region_choice_matrix(dg, code) for code in RULES}
    ncols = len(dg.regions)

    def counts():
        if ncols != dg.n + dg.d + 1:
            return f"{ncols} regions, n+d+1 = {dg.n + dg.d + 1}"
        if sum(len(r.corners) for r in dg.regions) != 4 * dg.n:
            return "quadrants not covered exactly once"

    def row_sums():
        for i, x in enumerate(dg.crossing_ids):
            if sum(mats["d2"].entries[i]) != 4 or sum(mats["a2"].entries[i]) != 0:
                return f"bad row sum at crossing {x}"

    def mod2():
        for a, b in (("d1", "a1"), ("d2", "a2")):
            if mod2_reduce(mats[a]).entries != mod2_reduce(mats[b]).entries:
                return f"{a} and {b} differ mod 2"

    def reducible():
        same = mats["d1"].entries == mats["d2"].entries and mats["a1"].entries == mats["a2"].entries
        if same != (not dg.reducible_crossings()):
            return "single and double rules disagree with reducibility"

    def alexander():
        w = list(numbering.alexander_numbering(dg))
        if mats["a2"] @ w != [0] * dg.n:
            return "Alexander numbering is not an alternating kernel vector"

    def ranks():
        want = dg.n + dg.d - dg.l
        for code, m in mats.items():
            r1, r2 = zlinalg.rank(m), zlinalg.rank(m, "snf")
            if r1 != r2 or r1 != want or ncols - r1 != dg.l + 1:
                return f"{code}: rank {r1} (snf {r2}), expected {want}"

    def kernels():
        for code in ("a2", "d2"):
            choice.kernel_basis(dg, code)

    def images():
        for fam in ("d", "a"):
            if not zlinalg.lattice_equal(mats[fam + "1"].columns(), mats[fam + "2"].columns(), dg.n):
                return f"{fam}: single and double images differ"

    def specials():
        for x in dg.crossing_ids:
            if dg.is_self_crossing(x):
                for fam in choice.FAMILIES:
                    choice.special_solution_double(dg, x, fam)

    def reducible_specials():
        for y in sorted(dg.reducible_crossings()):
            for fam in choice.FAMILIES:
                choice.special_solution_single_reducible(dg, y, fam)
        if dg.crossing_ids and all(dg.is_self_crossing(x) for x in dg.crossing_ids):
            for fam in choice.FAMILIES:
                if dg.l == 1:
                    choice.single_from_double(dg, fam, [rng.randint(-5, 5) for _ in range(dg.n)])

    def surjective():
        if dg.l != 1:
            return None
        for code in RULES:
            for _ in range(samples):
                c = [rng.randint(-5, 5) for _ in range(dg.n)]
                if choice.solve(choice.ProblemInstance(dg, Rule.parse(code), choice.ScoreVector.of(dg, c))) is None:
                    return f"{code}: knot diagram unsolvable for {c}"

    def two_component():
        if dg.l == 2 and dg.d == 1 and dg.n >= 2:
            for fam in choice.FAMILIES:
                choice.image_basis_two_component(dg, fam)

    def splicing():
        for x in dg.crossing_ids:
            sp, rec = splice(dg, x)
            if moves.same_diagram(unsplice(sp, rec), dg) is False:
                return f"splice/unsplice at {x} did not round-trip"

    for name, fn in (
        ("region count", counts), ("row sums", row_sums), ("mod 2", mod2), ("reducibility", reducible),
        ("alexander kernel", alexander), ("rank", ranks), ("kernel basis", kernels),
        ("image equality", images), ("special solutions", specials),
        ("reducible solutions", reducible_specials), ("knot surjectivity", surjective),
        ("two-component image basis", two_component), ("splice round trip", splicing),
    ):
        check(name, fn)
    return results


def walk_checks(start: LinkDiagram, seed: int, steps: int, max_crossings: int = 12):
    rng = random.Random(seed)
    transcript, failures = [], []
    cache: dict = {}
    dg = start
    for step in range(steps):
        before = dg
        cands = moves.candidate_moves(before, rng, max_crossings)
        kinds = sorted({m.kind for m in cands})
        kind = rng.choice(kinds)
        spec = rng.choice([m for m in cands if m.kind == kind])
        dg = moves.apply_move(before, spec)
        rep = moves.rank_delta_check(before, dg, spec, cache)
        transcript.append({"step": step, "move": spec.to_dict(), "n": dg.n, "d": dg.d, "l": dg.l,
                           "ranks": rep.ranks_after, "ok": rep.ok})
        if not rep.ok:
            failures.append({"step": step, "problems": rep.problems})
    return transcript, failures


def cmd_verify(args):
    rng = random.Random(args.seed)
    if args.walk is not None:
        start = corpus.builtin(args.name or "figure8").diagram
        transcript, failures = walk_checks(start, args.walk, args.steps)
        return {"walk": args.walk, "steps": args.steps, "transcript": transcript, "failures": failures}, not failures
    if args.name:
        entries = [corpus.builtin(args.name)]
    else:
        entries = corpus.corpus(random_count=12 if args.all else 0, seed=args.seed)
    report, ok = [], True
    for e in entries:
        res = diagram_checks(e.diagram, rng)
        bad = [{"check": n, "detail": d} for n, passed, d in res if not passed]
        ok &= not bad
        report.append({"name": e.name, "checks": len(res), "failed": bad})
    return {"entries": report, "ok": ok}, ok


# --------------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="regionchoice", description="Integral region choice problems on link diagrams.")
    p.add_argument("--seed", type=int, default=0, help="seed for any randomness (default 0)")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("info", help="counts, reducible crossings, signs")
    s.add_argument("file")
    s = sub.add_parser("matrix", help="a region choice matrix")
    s.add_argument("file")
    s.add_argument("--rule", choices=RULES, required=True)
    s.add_argument("--text", action="store_true", help="aligned text grid instead of JSON")
    for name in ("solve", "member"):
        s = sub.add_parser(name, help="solve A u + c = 0" if name == "solve" else "is -c in the image")
        s.add_argument("file")
        s.add_argument("--rule", choices=RULES, required=True)
        s.add_argument("--scores", required=True, help='JSON object, e.g. {"1": 1, "2": -1}')
    s = sub.add_parser("kernel", help="kernel basis")
    s.add_argument("file")
    s.add_argument("--rule", choices=RULES, required=True)
    s = sub.add_parser("image-basis", help="image basis of a connected two-component diagram")
    s.add_argument("file")
    s.add_argument("--family", choices=choice.FAMILIES, required=True)
    s = sub.add_parser("verify", help="run the property checks")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--all", action="store_true", help="builtins plus seeded random diagrams")
    g.add_argument("--walk", type=int, metavar="SEED", help="random move walk with rank checks")
    s.add_argument("--steps", type=int, default=50)
    s.add_argument("--name", help="a single corpus entry (or the walk's start)")
    s = sub.add_parser("corpus", help="list or dump builtin diagrams")
    s.add_argument("action", choices=("list", "dump"))
    s.add_argument("name", nargs="?")
    return p


COMMANDS = {
    "info": cmd_info, "matrix": cmd_matrix, "solve": cmd_solve, "member": cmd_member,
    "kernel": cmd_kernel, "image-basis": cmd_image_basis, "corpus": cmd_corpus,
}


def _emit(out) -> None:
    if isinstance(out, str):
        print(out)
    else:
        print(json.dumps(out, indent=2, sort_keys=False))


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "verify":
            out, ok = cmd_verify(args)
            _emit(out)
            return 0 if ok else 3
        _emit(COMMANDS[args.command](args))
        return 0
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvariantError as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return 3
    except (DiagramError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())
