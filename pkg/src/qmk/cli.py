"""Command line entry point: ``qmk <command> ...``.

Exit codes: 0 success, 2 usage or input error, 3 no solution (with
``--strict``), 4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from fractions import Fraction

from . import adet, tables
from .algebraic import AlgebraicNumber, parse_algebraic
from .errors import (
    BadParameterCount,
    DisconnectedGraph,
    NotAGeneralizedTree,
    NotAnEigenvalue,
    OutsideModuliImage,
    ParseError,
    QMKError,
)
from .fields import NumberField
from .forms import ModuleSolution, verify_solution
from .graph import (
    MultiGraph,
    RigidityClass,
    classify_rigidity,
    component_vertex_sets,
    enumerate_graphs,
    generalized_cycle_count,
    is_generalized_tree,
    load_graph,
    parse_text,
    to_dot,
    to_json,
    to_text,
)
from .solver import (
    FreeParams,
    LoopTrace,
    TracePair,
    fp_solution,
    free_parameter_count,
    parameter_slots,
    solve_free_parameter,
    solve_general,
    solve_generalized_tree,
    super_rigid_spectrum,
)
from .spectra import frobenius_perron, lambda_to_q, q_root_of_unity_order, spectrum
from .tl import build_graded_rep, jw_image_norm, n_star

EXIT_OK, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_VERIFY = 0, 2, 3, 4
JW_TOL = 1e-8

CLASS_NAMES = {c.value.lower(): c for c in RigidityClass}
CLASS_NAMES.update({"super": RigidityClass.SUPER_RIGID, "super-rigid": RigidityClass.SUPER_RIGID,
                    "non-rigid": RigidityClass.NON_RIGID})


class Infeasible(Exception):
    """A requested solution does not exist; an error only under --strict."""


def read_graph(spec: str) -> MultiGraph:
    """A graph file path, ``-`` for stdin, or inline text with ``;`` between lines."""
    if spec == "-":
        return parse_text(sys.stdin.read())
    if ";" in spec or spec.startswith("n "):
        return parse_text(spec.replace(";", "\n"))
    try:
        return load_graph(spec)
    except FileNotFoundError:
        raise ParseError(f"no such graph file: {spec}") from None


def parse_lambda(text: str) -> AlgebraicNumber:
    try:
        return parse_algebraic(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"bad lambda {text!r}: {exc}") from None


def _value(v) -> Fraction:
    return Fraction(str(v))


def load_params(path: str) -> FreeParams:
    """JSON with optional lists ``edges``, ``tree_edges`` and ``loops``.

    Edge records are ``{"i", "j", "eigenvalues": [...]}`` or ``{"i", "j", "x", "y"}``;
    loop records are ``{"i", "mu": [...]}`` or ``{"i", "t"}``.  Values are rationals.
    """
    try:
        with open(path) as fh:
            doc = json.load(fh)
        edges, tree_edges, loops = {}, {}, {}
        for rec in doc.get("edges", []):
            key = (rec["i"], rec["j"])
            edges[key] = (TracePair(_value(rec["x"]), _value(rec["y"])) if "x" in rec
                          else [_value(v) for v in rec["eigenvalues"]])
        for rec in doc.get("tree_edges", []):
            tree_edges[rec["i"], rec["j"]] = [_value(v) for v in rec["eigenvalues"]]
        for rec in doc.get("loops", []):
            loops[rec["i"]] = LoopTrace(_value(rec["t"])) if "t" in rec else [_value(v) for v in rec["mu"]]
    except (OSError, KeyError, ValueError, TypeError, ZeroDivisionError) as exc:
        raise ParseError(f"bad parameter file {path}: {exc}") from None
    return FreeParams(edges, tree_edges, loops)


# ---------------------------------------------------------------------------
# report helpers


def _poly_text(coeffs, var="λ") -> str:
    deg = len(coeffs) - 1
    terms = []
    for k, c in enumerate(coeffs):
        if c == 0:
            continue
        p = deg - k
        mono = "" if p == 0 else var if p == 1 else f"{var}^{p}"
        mag = abs(c)
        body = f"{mag}{mono}" if mag != 1 or not mono else mono
        terms.append(("- " if c < 0 else "+ ") + body)
    if not terms:
        return "0"
    text = " ".join(terms)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


def _num(a: AlgebraicNumber) -> str:
    if a.is_rational:
        return str(a.as_fraction())
    z = complex(a)
    if a.is_real:
        return f"{z.real:.10g} [{_poly_text(a.min_poly, 'x')}]"
    return f"{z.real:.8g}{z.imag:+.8g}i [{_poly_text(a.min_poly, 'x')}]"


def _q_info(lam: AlgebraicNumber) -> dict:
    q, q_inv, excluded = lambda_to_q(lam)
    order = None if excluded else q_root_of_unity_order(q)
    return {"q": q, "q_inv": q_inv, "excluded": excluded, "order": order}


def _emit(args, text_lines: list[str], doc) -> None:
    if args.format == "structured":
        print(json.dumps(doc, indent=2, sort_keys=True))
    else:
        print("\n".join(text_lines))


def _components(g: MultiGraph, split: bool) -> list[tuple[list[int], MultiGraph]]:
    if g.is_connected():
        return [(list(range(g.n)), g)]
    if not split:
        raise DisconnectedGraph("graph is disconnected; pass --split for per-component reports")
    return [(vs, g.induced(vs)) for vs in component_vertex_sets(g)]


def _solution_lines(sol: ModuleSolution) -> list[str]:
    res = verify_solution(sol)
    ok = all(sol.field.is_zero(r) for r in res)
    lines = [f"    forms on {len(sol.pairs)} edge(s) and {len(sol.selfs)} loop space(s); residual zero: {ok}"]
    if isinstance(sol.field, NumberField) and sol.field.degree > 1:
        lines.append(f"    entries in Q(t), t = {_num(sol.field.generator)}")
    for (i, j), p in sorted(sol.pairs.items()):
        lines.append(f"    E[{i},{j}] = {_matrix_text(p.e_fwd)}   E[{j},{i}] = {_matrix_text(p.e_bwd)}")
    for i, s in sorted(sol.selfs.items()):
        lines.append(f"    E[{i},{i}] = {_matrix_text(s.e)}")
    return lines


def _matrix_text(m) -> str:
    return "[" + "; ".join(" ".join(str(x) for x in row) for row in m) + "]"


# ---------------------------------------------------------------------------
# commands


def cmd_classify(args) -> int:
    g = read_graph(args.graph)
    lines, docs = [], []
    for vs, h in _components(g, args.split):
        L = generalized_cycle_count(h)
        cls = classify_rigidity(h)
        sp = spectrum(h)
        det = adet.adet_detect(h, args.n_max) if args.n_max <= adet.DETECT_MAX else None
        lines.append(f"component {vs}" if len(vs) != g.n else f"graph on {g.n} vertices")
        lines.append(f"  |I| = {h.n}   L = {L}   class = {cls}")
        lines.append(f"  char poly: {_poly_text(sp.char_poly)}")
        for r in sp.roots:
            lines.append(f"  lambda = {_num(r.value)}  mult {r.multiplicity}  "
                         f"{'nondegenerate' if r.nondegenerate else 'degenerate'}")
        if det is not None:
            lines.append(f"  P_{det[1]}(A) = 0: {det[0] or 'unmatched'}")
        docs.append({
            "vertices": vs, "vertex_count": h.n, "cycle_count": L, "class": str(cls),
            "spectrum": sp.to_json(),
            "adet": None if det is None else {"h": det[1], "diagram": det[0] and det[0].name},
        })
    _emit(args, lines, docs if args.split else docs[0])
    return EXIT_OK


def cmd_spectrum(args) -> int:
    g = read_graph(args.graph)
    lines, docs = [], []
    for vs, h in _components(g, args.split):
        sp = spectrum(h)
        lines.append(f"char poly: {_poly_text(sp.char_poly)}")
        for r in sp.roots:
            info = _q_info(r.value)
            flag = "excluded" if info["excluded"] else (f"q order {info['order']}" if info["order"] else "q not a root of unity")
            w = "" if r.witness is None else "  witness (t = lambda) " + ", ".join(map(str, r.witness))
            lines.append(f"  {_num(r.value)}  mult {r.multiplicity}  "
                         f"{'nondegenerate' if r.nondegenerate else 'degenerate'}  {flag}{w}")
        docs.append(dict(sp.to_json(), vertices=vs))
    _emit(args, lines, docs if args.split else docs[0])
    return EXIT_OK


def _spectrum_entry_doc(e) -> dict:
    return {
        "lambda": e.lam.to_json(), "q": e.q.to_json(), "q_inv": e.q_inv.to_json(),
        "excluded": e.excluded, "root_of_unity_order": e.root_of_unity_order,
        "solution": None if e.solution is None else e.solution.to_json(),
    }


def cmd_solve(args) -> int:
    g = read_graph(args.graph)
    if not g.is_connected():
        raise DisconnectedGraph("solve needs a connected graph")
    if args.all == (args.lam is not None):
        raise argparse.ArgumentTypeError("give exactly one of --lambda and --all")
    tree = is_generalized_tree(g)
    if not tree and args.params is None:
        raise NotAGeneralizedTree(
            f"L = {generalized_cycle_count(g)}; pass --params <file> or --params sweep"
        )
    if args.all:
        if not tree:
            raise NotAGeneralizedTree("--all is available for generalized trees")
        entries = super_rigid_spectrum(g)
        lines = [f"{len(entries)} nondegenerate eigenvalue(s)"]
        for e in entries:
            flag = "EXCLUDED (q = ±i)" if e.excluded else (
                f"q root of unity of order {e.root_of_unity_order}" if e.root_of_unity_order else "q not a root of unity")
            lines.append(f"lambda = {_num(e.lam)}   q+1/q = {_num(e.q_plus_q_inv)}   {flag}")
            if e.solution is not None:
                lines += _solution_lines(e.solution)
        _emit(args, lines, [_spectrum_entry_doc(e) for e in entries])
        if args.strict and not any(e.solution is not None and not e.excluded for e in entries):
            raise Infeasible("no admissible solution")
        return EXIT_OK
    lam = args.lam
    if args.params == "sweep":
        return _solve_sweep(args, g, lam)
    if args.params is not None:
        sol = solve_general(g, lam, load_params(args.params))
    else:
        try:
            sol = solve_generalized_tree(g, lam)
        except NotAnEigenvalue:
            sol = None
    info = _q_info(lam)
    lines = [f"lambda = {_num(lam)}   excluded = {info['excluded']}   q order = {info['order']}"]
    if sol is None:
        lines.append("no solution")
    else:
        lines += _solution_lines(sol)
    _emit(args, lines, {"lambda": lam.to_json(), "solution": None if sol is None else sol.to_json()})
    if sol is None and args.strict:
        raise Infeasible("no solution at this lambda")
    return EXIT_OK


def _solve_sweep(args, g: MultiGraph, lam: AlgebraicNumber) -> int:
    if not lam.is_rational:
        raise argparse.ArgumentTypeError("--params sweep needs a rational --lambda")
    if free_parameter_count(g) != 1:
        raise BadParameterCount("--params sweep handles graphs with exactly one free parameter")
    rng = random.Random(args.seed) if args.seed is not None else None
    res = solve_free_parameter(g, lam.as_fraction(), samples=args.samples, rng=rng)
    slot = parameter_slots(g)[0]
    lines = [f"free parameter: {slot.kind} {slot.key}",
             f"residual numerator: {_poly_text(res.residual, 's')}"
             + ("  (identically zero)" if res.identically_zero else "")]
    lines.append(f"{len(res.solutions)} solution(s)")
    for s, sol in res.solutions:
        shown = s if isinstance(s, Fraction) else _num(s)
        lines.append(f"  s = {shown}: residual zero {all(sol.field.is_zero(r) for r in verify_solution(sol))}")
    doc = {
        "lambda": lam.to_json(), "residual": [str(c) for c in res.residual],
        "identically_zero": res.identically_zero,
        "solutions": [{"s": str(s) if isinstance(s, Fraction) else s.to_json(), "solution": sol.to_json()}
                      for s, sol in res.solutions],
    }
    _emit(args, lines, doc)
    if args.strict and not res.solutions:
        raise Infeasible("no parameter value solves the system")
    return EXIT_OK


def cmd_enumerate(args) -> int:
    try:
        cls = CLASS_NAMES[args.cls.lower()]
    except KeyError:
        raise argparse.ArgumentTypeError(f"unknown class {args.cls!r}") from None
    graphs = enumerate_graphs(args.n, cls)
    lines = [f"{len(graphs)} {cls} graph(s) on {args.n} vertices"]
    for k, g in enumerate(graphs):
        lines.append(f"# {k}")
        lines.append(to_text(g).rstrip())
    _emit(args, lines, {"n": args.n, "class": str(cls), "count": len(graphs), "graphs": [to_json(g) for g in graphs]})
    return EXIT_OK


def cmd_adet(args) -> int:
    rows = adet.classification_report(args.N)
    h = n_star(args.N)
    lines = [f"N = {args.N}, N* = {h}: {', '.join(r['name'] for r in rows) or 'none'}"]
    for r in rows:
        lines.append(f"{r['name']}  h = {r['coxeter']}")
        lines.append(r["graph"].rstrip())
    _emit(args, lines, {"N": args.N, "n_star": h, "diagrams": rows})
    return EXIT_OK


def _solution_for_check(g: MultiGraph, lam: AlgebraicNumber, params: str | None) -> ModuleSolution | None:
    if params is not None:
        return solve_general(g, lam, load_params(params))
    if is_generalized_tree(g):
        return solve_generalized_tree(g, lam)
    if lam == frobenius_perron(g):
        return fp_solution(g)
    if lam.is_rational and free_parameter_count(g) == 1:
        found = solve_free_parameter(g, lam.as_fraction(), samples=1).solutions
        return found[0][1] if found else None
    raise NotAGeneralizedTree("pass --params to fix the free parameters of this graph")


def cmd_tlcheck(args) -> int:
    g = read_graph(args.graph)
    lam = args.lam
    sol = _solution_for_check(g, lam, args.params)
    if sol is None:
        _emit(args, ["no solution at this lambda"], {"solution": None})
        if args.strict:
            raise Infeasible("no solution to check")
        return EXIT_OK
    rep = build_graded_rep(sol)
    info = _q_info(lam)
    N = args.N if args.N is not None else info["order"]
    lines = [f"lambda = {_num(lam)}   q order = {info['order']}"]
    doc = {"lambda": lam.to_json(), "q_order": info["order"], "norms": {}}
    if N is None or N < 3:
        ns = range(2, args.max_strands + 1)
        lines.append("q is not a root of unity of order >= 3; reporting JW image norms")
    else:
        if info["order"] != N:
            lines.append(f"warning: q has order {info['order']}, not {N}")
        ns = [n_star(N) - 1]
        doc["N"], doc["n_star"] = N, n_star(N)
    worst = 0.0
    for n in ns:
        norm, exact_zero = jw_image_norm(rep, n)
        worst = max(worst, norm)
        lines.append(f"  f_{n} image max-entry norm = {norm:.3e}" + ("  (exactly zero)" if exact_zero else ""))
        doc["norms"][str(n)] = norm
    vanishing = N is not None and N >= 3 and info["order"] == N and worst <= JW_TOL
    doc["vanishing"] = vanishing
    _emit(args, lines, doc)
    if args.strict and not vanishing:
        return EXIT_VERIFY
    return EXIT_OK


def cmd_paper_verify(args) -> int:
    results = tables.verify_all()
    lines = [r.line() for r in results]
    counts = {s: sum(r.status == s for r in results) for s in (tables.PASS, tables.FAIL, tables.SKIPPED)}
    lines.append(f"{counts[tables.PASS]} PASS, {counts[tables.FAIL]} FAIL, {counts[tables.SKIPPED]} {tables.SKIPPED}")
    doc = [{"key": r.entry.key, "table": r.entry.table, "printed": r.entry.printed,
            "status": r.status, "detail": r.detail} for r in results]
    _emit(args, lines, doc)
    return EXIT_VERIFY if counts[tables.FAIL] else EXIT_OK


def cmd_export_dot(args) -> int:
    print(to_dot(read_graph(args.graph)), end="")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--strict", action="store_true", help="treat a missing solution as an error (exit 3)")
    common.add_argument("--seed", type=int, default=None)

    p = argparse.ArgumentParser(prog="qmk", description="Module-category data on multigraphs.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("classify", parents=[common], help="cycle count, rigidity class and spectrum")
    c.add_argument("graph")
    c.add_argument("--split", action="store_true")
    c.add_argument("--n-max", type=int, default=adet.DETECT_MAX)
    c.set_defaults(func=cmd_classify)

    c = sub.add_parser("spectrum", parents=[common], help="eigenvalues, nondegeneracy and q data")
    c.add_argument("graph")
    c.add_argument("--split", action="store_true")
    c.set_defaults(func=cmd_spectrum)

    c = sub.add_parser("solve", parents=[common], help="solve the vertex trace equations")
    c.add_argument("graph")
    c.add_argument("--lambda", dest="lam", type=parse_lambda)
    c.add_argument("--all", action="store_true")
    c.add_argument("--params", help="parameter JSON file, or 'sweep' for one free parameter")
    c.add_argument("--samples", type=int, default=10)
    c.set_defaults(func=cmd_solve)

    c = sub.add_parser("enumerate", parents=[common], help="graphs of a rigidity class")
    c.add_argument("n", type=int)
    c.add_argument("cls", metavar="class")
    c.set_defaults(func=cmd_enumerate)

    c = sub.add_parser("adet", parents=[common], help="ADET diagrams for q of order N")
    c.add_argument("N", type=int)
    c.set_defaults(func=cmd_adet)

    c = sub.add_parser("tlcheck", parents=[common], help="Jones-Wenzl vanishing on a solution")
    c.add_argument("graph")
    c.add_argument("--lambda", dest="lam", type=parse_lambda, required=True)
    c.add_argument("--N", type=int, default=None)
    c.add_argument("--params")
    c.add_argument("--max-strands", type=int, default=4)
    c.set_defaults(func=cmd_tlcheck)

    c = sub.add_parser("paper-verify", parents=[common], help="recompute the reference tables")
    c.set_defaults(func=cmd_paper_verify)

    c = sub.add_parser("export-dot", parents=[common], help="Graphviz export")
    c.add_argument("graph")
    c.set_defaults(func=cmd_export_dot)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "n_max", 1) < 1:
        parser.error("--n-max must be positive")
    if args.command == "adet" and args.N < 3:
        parser.error("N must be at least 3")
    try:
        return args.func(args)
    except argparse.ArgumentTypeError as exc:
        parser.error(str(exc))
    except ParseError as exc:
        print(f"error: ParseError: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Infeasible as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (NotAnEigenvalue, OutsideModuliImage) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE if args.strict else EXIT_OK
    except QMKError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
