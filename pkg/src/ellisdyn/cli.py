"""Command-line front end.

Exit codes: 0 success, 1 sound negative verdict (Reject, refuted candidate,
discrepancy), 2 usage or input error. Reports never contain timings, so equal
argv and seed give byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction
from typing import Callable, Optional, Sequence

from . import samples
from .circle import decompose_arc, external_arc, lift_mod1
from .cuts import (
    Above,
    Principal,
    UndecidableOrder,
    UnsupportedCut,
    format_cut,
    format_genset,
    parse_cut,
    parse_field,
    parse_genset,
)
from .finiteflow import (
    BudgetExceeded,
    NotInAlgebra,
    UnknownElement,
    coset_algebra,
    d_closure,
    ellis_envelope,
    generate_left_invariant,
    group_by_name,
    is_d_closed,
    lambda_check,
    left_invariant_algebras,
    parse_seeds,
    star_table,
)
from .ordfields import Ladder, ParseError, SubfieldSpec
from .sets1d import InvertedBounds, parse_set
from .shiftcrit import (
    Candidate,
    MalformedCandidate,
    TPoly,
    extddef_verify,
    propex_region,
    shift_representable,
    candidate_falsifier,
    xpi_report,
)
from .typedyn import d_p, decompose_external_1d, pool, p_id_cut, realization_check, star


class UsageError(Exception):
    pass


class Report:
    def __init__(self, command: str, inputs: dict, citations: Sequence[str]):
        self.command = command
        self.inputs = inputs
        self.outputs: dict = {}
        self.lines: list[str] = []
        self.citations = list(citations)
        self.status = 0

    def out(self, key: str, value, line: Optional[str] = None) -> None:
        self.outputs[key] = value
        if line is not None:
            self.lines.append(line)

    def render(self, as_json: bool) -> str:
        if as_json:
            return json.dumps({
                "command": self.command,
                "inputs": self.inputs,
                "outputs": self.outputs,
                "citations": self.citations,
                "exit": self.status,
            }, indent=2, sort_keys=True)
        body = "\n".join(self.lines)
        if self.citations:
            body += "\ncitations: " + ", ".join(self.citations)
        return body


# --------------------------------------------------------------------------
# helpers


def _model(args) -> Ladder:
    lad = parse_field(args.field)
    if args.model_depth is not None:
        return SubfieldSpec.depth(lad, args.model_depth).model
    return lad


def _require(args, *names):
    for n in names:
        if getattr(args, n) is None:
            raise UsageError(f"--{n.replace('_', '-')} is required")


# --------------------------------------------------------------------------
# verbs


def cmd_dtrace(args) -> Report:
    _require(args, "set", "cut")
    M = _model(args)
    X = parse_set(args.set, M)
    p = parse_cut(args.cut, M)
    rep = Report("dtrace", {"set": str(X), "cut": format_cut(p)}, ["d_p", "L:ddefinable", "F:Convex"])
    Y = d_p(X, p).without_provenance()
    dual = realization_check(X, p)
    rep.out("d_p", format_genset(Y), f"d_p X = {format_genset(Y)}")
    rep.out("routes_agree", Y == dual, f"realization route agrees: {Y == dual}")
    if Y != dual:
        rep.status = 1
    return rep


def cmd_star(args) -> Report:
    _require(args, "left", "right")
    M = _model(args)
    p, q = parse_cut(args.left, M), parse_cut(args.right, M)
    rep = Report("star", {"left": format_cut(p), "right": format_cut(q)}, ["F:Ellis-Newelski", "F:lmap"])
    r = star(p, q, M)
    rep.out("product", format_cut(r.product), format_cut(r.product))
    rep.out("witness", [str(w) for w in r.witness])
    return rep


def cmd_decompose(args) -> Report:
    _require(args, "genset")
    M = _model(args)
    Y = parse_genset(args.genset, M)
    rep = Report("decompose", {"genset": format_genset(Y)}, ["T:1dim", "C:Equiv-Ellis-ext"])
    dec = decompose_external_1d(Y, collapse_definable=args.collapse)
    a, b = dec.evaluate(), dec.evaluate_by_realization()
    rep.out("decomposition", str(dec), str(dec))
    rep.out("pieces", len(dec.pieces()), f"pieces: {len(dec.pieces())}")
    ok = a == Y and b == Y
    rep.out("verified", ok, f"evaluates back to input (both routes): {ok}")
    rep.status = 0 if ok else 1
    return rep


def _arc_text(piece) -> str:
    """``R(x, ., z)`` for an open template interval, else the raw piece."""
    ps = piece.template.pieces
    if len(ps) != 1 or ps[0][1] or ps[0][3] or ps[0][0] is None or ps[0][2] is None:
        return str(piece)
    lo, _, hi, _ = ps[0]
    if isinstance(piece.shift, Principal):
        v = piece.shift.value
        return f"R({lo + v}, ., {hi + v})"
    return f"R({lo} + b, ., {hi} + b) with b |= {format_cut(piece.shift)}"


def cmd_decompose_arc(args) -> Report:
    _require(args, "cut")
    M = _model(args)
    a = parse_cut(args.cut, M)
    rep = Report("decompose-arc", {"cut": format_cut(a)}, ["T:1dim"])
    dec = decompose_arc(a, M)
    target = external_arc(a, dec.model)
    rep.out("branch", dec.branch, f"case {dec.branch}")
    terms = []
    for term in dec.terms:
        texts = [_arc_text(piece) for piece in term]
        terms.append(texts)
        rep.lines.append("  " + " n ".join(texts))
    rep.outputs["terms"] = terms
    ok = dec.evaluate() == target and dec.evaluate_by_realization() == target
    rep.out("arc", format_genset(target), f"arc = {format_genset(target)}")
    rep.out("verified", ok, f"both routes reproduce the arc: {ok}")
    rep.status = 0 if ok else 1
    return rep


def cmd_finite(args) -> Report:
    _require(args, "group")
    G = group_by_name(args.group)
    seeds = parse_seeds(G, args.seeds or "")
    A = generate_left_invariant(G, seeds)
    rep = Report("finite", {"group": G.name, "seeds": [G.fmt(s) for s in seeds]},
                 ["R:d-closed", "L:d-closed", "F:Ellis-Newelski", "P:Epi", "C:Equivalence"])
    Ad, rounds = d_closure(A)
    rep.out("algebra_size", A.size, f"|A| = {A.size} ({len(A.atoms)} atoms)")
    rep.out("atoms", [G.fmt(a) for a in A.atoms], "atoms: " + " ".join(G.fmt(a) for a in A.atoms))
    rep.out("d_closed", is_d_closed(A), f"A d-closed: {is_d_closed(A)}")
    rep.out("Ad_size", Ad.size, f"|A^d| = {Ad.size} after {rounds} round(s)")
    rep.out("Ad_atoms", [G.fmt(a) for a in Ad.atoms])
    table = star_table(Ad)
    rep.out("star_table", [list(r) for r in table], f"star table on A^d: {len(table)}x{len(table)}")
    env = ellis_envelope(A)
    rep.out("envelope_size", env.size, f"|E(S(A))| = {env.size}, kernel size {env.kernel_size}")
    verdicts = {}
    if G.n <= 8:
        for B in left_invariant_algebras(G):
            v = lambda_check(B, A)
            if v != "NotWellFormed":
                verdicts[f"{B.size}:" + " ".join(G.fmt(b) for b in B.atoms)] = v
        for k in sorted(verdicts):
            rep.lines.append(f"  Lambda onto E(S(A)) from B with atoms {k.split(':', 1)[1]}: {verdicts[k]}")
    rep.outputs["lambda"] = verdicts
    return rep


def cmd_check_shift(args) -> Report:
    _require(args, "poly")
    h = TPoly.parse(args.poly)
    rep = Report("check-shift", {"poly": str(h)}, ["P:realalg"])
    v = shift_representable(h)
    d = v.to_dict()
    rep.outputs.update(d)
    if v.passed:
        w = d["witness"]
        rep.lines.append(f"Pass: h(x) = f(x + c) + d with f(z) = {w['f']}, c = {w['c']}, d = {w['d']}")
        rep.lines.append("criterion passes; inconclusive for the converse")
    else:
        rep.lines.append(f"Reject: {v.obstruction}")
        rep.citations.append("C:Alg")
        rep.status = 1
    return rep


def cmd_verify_example(args) -> Report:
    if args.name != "extddef":
        raise UsageError(f"unknown example {args.name!r}; available: extddef")
    n = args.samples if args.samples is not None else 1000
    rep = Report("verify-example", {"example": "extddef", "samples": n, "seed": args.seed},
                 ["Ex:extddef", "L:ddefinable"])
    r = extddef_verify(n, args.seed)
    d = r.to_dict()
    rep.outputs.update(d)
    rep.lines.append(f"samples: {r.samples}, in X: {r.in_X}, discrepancies: {len(r.discrepancies)}")
    rep.status = 0 if not r.discrepancies else 1
    return rep


def cmd_falsify(args) -> Report:
    _require(args, "candidate")
    if args.region != "propex":
        raise UsageError(f"unknown region {args.region!r}; available: propex")
    try:
        with open(args.candidate) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as ex:
        raise UsageError(f"cannot read candidate: {ex}") from None
    cand = Candidate.from_json(data)
    budget = args.samples if args.samples is not None else 5000
    rep = Report("falsify", {"region": "propex", "candidate": data, "budget": budget, "seed": args.seed},
                 ["P:ex"])
    pt = candidate_falsifier(propex_region(), cand, budget, args.seed)
    if pt is None:
        rep.out("verdict", "Unknown", "Unknown: no counterexample within budget")
    else:
        X = propex_region()
        rep.out("verdict", "Counterexample", f"counterexample ({pt[0]}, {pt[1]})")
        rep.out("point", [str(pt[0]), str(pt[1])])
        rep.out("in_region", X(*pt), f"in region: {X(*pt)}, in candidate: {cand(*pt)}")
        rep.status = 1
    return rep


def cmd_xpi(args) -> Report:
    r = xpi_report(args.slope)
    rep = Report("xpi", {"slope": args.slope}, r["citations"])
    rep.outputs.update({k: v for k, v in r.items() if k != "citations"})
    rep.lines.extend(r["chain"])
    rep.status = 1 if r["verdict"] == "Reject" else 0
    return rep


# --------------------------------------------------------------------------
# repro


def _repro_1dim(seed: int, n: int) -> tuple[bool, str]:
    rng = random.Random(seed)
    M = Ladder(("e2", "e3"))
    ok = 0
    for _ in range(n):
        X = samples.set1d(rng, M)
        Y = d_p(X, samples.cut(rng, M)).without_provenance()
        dec = decompose_external_1d(Y)
        ok += dec.evaluate() == Y and dec.evaluate_by_realization() == Y
    return ok == n, f"{ok}/{n} external sets rebuilt from d-definable pieces"


def _repro_arcs(seed: int, n: int) -> tuple[bool, str]:
    rng = random.Random(seed)
    M = Ladder(("e2",))
    ok, branches = 0, {"2.1": 0, "2.2": 0}
    for _ in range(n):
        a = samples.circle_cut(rng, M)
        dec = decompose_arc(a, M)
        branches[dec.branch] += 1
        target = external_arc(a, dec.model)
        ok += dec.evaluate() == target and dec.evaluate_by_realization() == target
    return ok == n, f"{ok}/{n} arcs, case 2.1: {branches['2.1']}, case 2.2: {branches['2.2']}"


def _repro_star(seed: int) -> tuple[bool, str]:
    M = Ladder(("e2",))
    pid = p_id_cut(SubfieldSpec.of(Ladder.standard(2), ["e2"]))
    P = pool(M, pid)
    cache = {}

    def mul(p, q):
        if (p, q) not in cache:
            cache[(p, q)] = star(p, q, M).product
        return cache[(p, q)]

    assoc = sum(mul(mul(p, q), r) == mul(p, mul(q, r)) for p in P for q in P for r in P)
    idem = [format_cut(c) for c in (Above(M.zero()), P[6], P[7], pid) if mul(c, c) == c]
    return assoc == len(P) ** 3 and len(idem) == 4, f"associative on {assoc}/{len(P) ** 3} triples; idempotent: {', '.join(idem)}"


def _repro_lift(seed: int, n: int) -> tuple[bool, str]:
    rng = random.Random(seed)
    amb = Ladder(("e1", "e2"))
    spec = SubfieldSpec.of(amb, ["e2"])
    ok = 0
    for _ in range(n):
        Z = samples.circle_set(rng, spec.model).to_field(amb)
        y = amb.const(Fraction(rng.randint(0, 7), 8)) + amb.var("e1") * rng.choice((1, -1)) * Fraction(1, rng.randint(1, 5))
        y = y if y.sign() >= 0 else y + 1
        lift_mod1(Z, y, spec)
        ok += 1
    return ok == n, f"{ok}/{n} mod-1 lifts agree"


def _repro_s3() -> tuple[bool, str]:
    G = group_by_name("S3")
    A = coset_algebra(G, ["e", "(12)"])
    Ad, _ = d_closure(A)
    v = lambda_check(Ad, A)
    strict = A.subalgebra_of(Ad) and A != Ad
    return strict and v == "Iso", f"|A| = {A.size}, |A^d| = {Ad.size}, Lambda on A^d: {v}"


def cmd_repro(args) -> Report:
    if not args.all:
        raise UsageError("repro needs --all")
    seed = args.seed
    n = args.samples if args.samples is not None else 200
    rep = Report("repro", {"seed": seed, "samples": n},
                 ["T:1dim", "F:Ellis-Newelski", "Ex:extddef", "R:defcompact", "C:Equivalence", "C:Alg"])
    ex = extddef_verify(n, seed)
    xpi = xpi_report()
    runs: list[tuple[str, Callable[[], tuple[bool, str]]]] = [
        ("T:1dim case 1", lambda: _repro_1dim(seed, n)),
        ("T:1dim case 2", lambda: _repro_arcs(seed, n)),
        ("coheir product", lambda: _repro_star(seed)),
        ("extddef", lambda: (not ex.discrepancies, f"{ex.samples} samples, {len(ex.discrepancies)} discrepancies")),
        ("defcompact lift", lambda: _repro_lift(seed, n)),
        ("S3 coset lab", _repro_s3),
        ("X_pi", lambda: (xpi["verdict"] == "Reject", f"{xpi['h']} -> {xpi['verdict']}")),
    ]
    results = {}
    for name, fn in runs:
        ok, detail = fn()
        results[name] = {"ok": ok, "detail": detail}
        rep.lines.append(f"{'ok  ' if ok else 'FAIL'} {name}: {detail}")
    rep.outputs["results"] = results
    bad = sum(not r["ok"] for r in results.values())
    rep.lines.append(f"{len(results) - bad}/{len(results)} named results reproduced")
    rep.status = 1 if bad else 0
    return rep


# --------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--samples", type=int)
    common.add_argument("--json", action="store_true")
    common.add_argument("--field", default="Q")
    common.add_argument("--model-depth", type=int, dest="model_depth")

    ap = argparse.ArgumentParser(prog="ellisdyn", description="Types, cuts and Ellis semigroups, exactly.")
    sub = ap.add_subparsers(dest="verb", required=True)

    def verb(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(fn=fn)
        return p

    p = verb("dtrace", cmd_dtrace, "d_p X for a set X and a cut p")
    p.add_argument("--set")
    p.add_argument("--cut")
    p = verb("star", cmd_star, "coheir product of two cuts")
    p.add_argument("--left")
    p.add_argument("--right")
    p = verb("decompose", cmd_decompose, "decompose an externally definable set")
    p.add_argument("--genset")
    p.add_argument("--collapse", action="store_true", help="keep definable components whole")
    p = verb("decompose-arc", cmd_decompose_arc, "decompose the arc from 0 to a cut on the circle")
    p.add_argument("--cut")
    p = verb("finite", cmd_finite, "finite group laboratory")
    p.add_argument("--group")
    p.add_argument("--seeds", help='subsets like "{e,(12)};{(123)}"')
    p = verb("check-shift", cmd_check_shift, "shift-representability of a polynomial over Q(tau)")
    p.add_argument("--poly")
    p = verb("verify-example", cmd_verify_example, "verify a named planar example")
    p.add_argument("name")
    p = verb("falsify", cmd_falsify, "search a counterexample to a candidate decomposition")
    p.add_argument("--region", default="propex")
    p.add_argument("--candidate")
    p = verb("xpi", cmd_xpi, "the verdict for {y < tau x}")
    p.add_argument("--slope", default="tau")
    p = verb("repro", cmd_repro, "rerun the named examples")
    p.add_argument("--all", action="store_true")
    return ap


INPUT_ERRORS = (
    ParseError, InvertedBounds, UsageError, UnknownElement, ValueError, MalformedCandidate,
    UnsupportedCut, UndecidableOrder, BudgetExceeded, NotInAlgebra, ZeroDivisionError,
)


def run(argv: Optional[Sequence[str]] = None) -> tuple[str, int]:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as ex:
        return "", 2 if ex.code else 0
    try:
        rep = args.fn(args)
    except INPUT_ERRORS as ex:
        msg = ex.args[0] if isinstance(ex, KeyError) and ex.args else ex
        return f"error: {msg}", 2
    return rep.render(args.json), rep.status


def main(argv: Optional[Sequence[str]] = None) -> int:
    text, code = run(argv)
    if text:
        stream = sys.stderr if code == 2 else sys.stdout
        print(text, file=stream)
    return code


if __name__ == "__main__":
    sys.exit(main())
