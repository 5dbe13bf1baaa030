"""Command-line driver: ``tropcomp <group> <command> FILE... [options]``.

Reports go to standard output and are byte-identical for identical inputs.
Exit status: 0 on success, 1 on a failing verdict, 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Sequence

from . import fan as fanmod
from . import geomtrop, toric_dvr, tropical
from .documents import (
    Document,
    ParseError,
    _vector,
    admissible_fan_document,
    complex_document,
    fan_document,
    parse_document,
    render_document,
)
from .fan import FanViolation
from .lattice import LatticeContext
from .oracles import brute_force_integer_solutions, hypersurface_grid_check
from .polyhedral import Cone


@dataclass
class Report:
    command: str
    digests: list[str]
    verdict: str
    lines: list[str] = field(default_factory=list)
    output: Document | None = None
    exit_code: int = 0

    def render(self) -> str:
        out = [f"command: {self.command}"]
        out += [f"input: sha256:{d}" for d in self.digests]
        out.append(f"verdict: {self.verdict}")
        out += self.lines
        if self.output is not None:
            out.append("--- output")
            return "\n".join(out) + "\n" + render_document(self.output)
        return "\n".join(out) + "\n"


class UsageError(Exception):
    pass


def _v(x: Sequence) -> str:
    return "[" + ",".join(str(Fraction(c)) for c in x) + "]"


def _cone(c: Cone) -> str:
    s = "rays " + " ".join(_v(r) for r in c.rays) if c.rays else "rays"
    if c.lineality:
        s += " lineality " + " ".join(_v(l) for l in c.lineality)
    return s


def _basis(vs) -> str:
    return " ".join(_v(v) for v in vs) if vs else "0"


def _vec_arg(text: str, rank: int) -> tuple[Fraction, ...]:
    try:
        return _vector(text, 0, 0, rank)
    except ParseError as exc:
        raise UsageError(f"bad vector argument {text!r}: {exc.message}") from exc


# -- commands ------------------------------------------------------------------------


def fan_validate(docs, args) -> Report:
    res = fanmod.validate_fan(docs[0].cones())
    if isinstance(res, FanViolation):
        return Report("", [], "FAIL", [
            f"violation: cones {res.i} and {res.j}",
            f"intersection: {_cone(res.intersection)}",
            "not a face of: " + " ".join(f"cone {k}" for k in res.not_face_of),
        ], exit_code=1)
    return Report("", [], "PASS", [f"maximal cones: {len(res.maximal_cones)}", f"cones: {len(res.cones)}"],
                  fan_document(res))


def _valid_fan(doc: Document):
    res = fanmod.validate_fan(doc.cones())
    if isinstance(res, FanViolation):
        raise UsageError(f"input is not a fan: {res.describe()}")
    return res


def fan_refines(docs, args) -> Report:
    fine, coarse = _valid_fan(docs[0]), _valid_fan(docs[1])
    ok = fanmod.refines(fine, coarse)
    return Report("", [], "PASS" if ok else "FAIL", [f"refines: {'yes' if ok else 'no'}"], exit_code=0 if ok else 1)


def fan_common_refinement(docs, args) -> Report:
    f1, f2 = _valid_fan(docs[0]), _valid_fan(docs[1])
    w = fanmod.support_witness(f1, f2) or fanmod.support_witness(f2, f1)
    if w is not None:
        return Report("", [], "FAIL", [f"supports differ at: {_v(w)}"], exit_code=1)
    res = fanmod.common_refinement(f1, f2)
    return Report("", [], "PASS", [f"maximal cones: {len(res.maximal_cones)}"], fan_document(res))


def fan_star(docs, args) -> Report:
    f = _valid_fan(docs[0])
    rays = [_vec_arg(r, f.rank) for r in (args.ray or [])]
    sigma = Cone(rays, (), f.rank)
    if sigma not in f:
        return Report("", [], "FAIL", [f"not a cone of the fan: {_cone(sigma)}"], exit_code=1)
    res = fanmod.star(f, sigma)
    return Report("", [], "PASS", [f"sigma: {_cone(sigma)}", f"maximal cones: {len(res.maximal_cones)}"],
                  fan_document(res))


def fan_coarsen(docs, args) -> Report:
    res = fanmod.coarsen(_valid_fan(docs[0]))
    lines = [f"fixpoint: {'yes' if res.is_fixpoint else 'no'}", f"merges: {len(res.merges)}"]
    lines += [f"merge: {i} {j}" for i, j in res.merges]
    return Report("", [], "PASS", lines, fan_document(res.fan))


def fan_translation_space(docs, args) -> Report:
    L = fanmod.support_translation_space(_valid_fan(docs[0]))
    return Report("", [], "PASS", [f"dimension: {len(L)}", f"basis: {_basis(L)}"])


def trop_hypersurface(docs, args) -> Report:
    f = docs[0].to_polynomial()
    hyp = tropical.tropical_hypersurface(f)
    lines = [f"cells: {len(hyp.cells)}", f"bounded cells: {len(hyp.bounded_cells)}"]
    if hyp.monomial_input:
        lines.append("note: a monomial has empty tropicalization")
    code = 0
    verdict = "PASS"
    if args.oracle_check:
        rep = hypersurface_grid_check(f, hyp)
        lines.append(f"oracle probes: {rep.probes}")
        lines.append(f"oracle tropical points: {rep.in_tropical}")
        lines.append(f"oracle agreement: {'yes' if rep.agree else 'no'}")
        for p in rep.disagreements[:10]:
            lines.append(f"oracle disagreement: {_v(p)}")
        if not rep.agree:
            verdict, code = "FAIL", 1
    if hyp.is_empty:
        return Report("", [], verdict, lines, exit_code=code)
    return Report("", [], verdict, lines, complex_document(hyp.complex), code)


def trop_initial_form(docs, args) -> Report:
    f = docs[0].to_polynomial()
    w = _vec_arg(args.weight, f.rank)
    init = tropical.initial_form(f, w)
    lines = [f"weight: {_v(w)}", f"minimum: {init.value}", f"monomial: {'yes' if init.is_monomial else 'no'}"]
    lines += [f"term: {_v(m)} {r}" for m, r in init.terms]
    return Report("", [], "PASS", lines)


def trop_certificate(docs, args) -> Report:
    gens = [d.to_polynomial() for d in docs]
    w = _vec_arg(args.weight, gens[0].rank)
    cert = tropical.is_in_tropicalization_certificate(gens, w)
    if cert.excluded:
        lines = [f"weight: {_v(w)}", "excluded: yes", f"witness generator: {cert.witness_index}",
                 f"witness term: {_v(cert.initial.terms[0][0])}"]
    else:
        lines = [f"weight: {_v(w)}", "excluded: no",
                 "note: no generator has a monomial initial form; membership needs a tropical basis"]
    return Report("", [], "EXCLUDED" if cert.excluded else "UNDETERMINED", lines)


def geomtrop_build(docs, args) -> Report:
    res = geomtrop.geometric_tropicalization(docs[0].to_boundary_data())
    lines = []
    for sc in res.cones:
        flag = "strictly-simplicial" if sc.strictly_simplicial else "not-strictly-simplicial"
        lines.append(f"stratum {{{','.join(sc.stratum)}}}: {_cone(sc.cone)} ({flag})")
    if isinstance(res.fan_status, FanViolation):
        v = res.fan_status
        lines.append(f"violation: strata {{{','.join(res.cones[v.i].stratum)}}} and {{{','.join(res.cones[v.j].stratum)}}}")
        lines.append(f"intersection: {_cone(v.intersection)}")
        return Report("", [], "NOT-A-FAN", lines, exit_code=1)
    return Report("", [], "FAN", lines, fan_document(res.fan_status))


def geomtrop_schoen_check(docs, args) -> Report:
    data = docs[0].to_boundary_data()
    cert = geomtrop.schoen_check(data)
    lines = []
    agree = True
    for stratum, pivot, m in cert.condition2:
        lines.append(f"condition 2 {{{','.join(stratum)}}} pivot {pivot}: " + (_v(m) if m is not None else "infeasible"))
        if args.oracle_check:
            A = [data.val(i) for i in stratum]
            b = [int(i == pivot) for i in stratum]
            hits = brute_force_integer_solutions(A, b, 6)
            if (m is None) != (not hits):
                agree = False
    lines.append("condition 3: " + ("fan" if isinstance(cert.condition3, fanmod.Fan) else "not a fan"))
    lines += [f"note: {n}" for n in cert.notes]
    if args.oracle_check:
        lines.append(f"oracle agreement: {'yes' if agree else 'no'}")
    ok = cert.lattice_conditions_hold and agree
    return Report("", [], "PASS" if ok else "FAIL", lines, exit_code=0 if ok else 1)


def geomtrop_hubsch_check(docs, args) -> Report:
    rep = geomtrop.hubsch_check(_valid_fan(docs[0]))
    lines = [f"star {_cone(s.cone)}: translation space {_basis(s.translation_space)}" for s in rep.stars]
    lines.append(f"minimality: {rep.minimality}")
    lines.append("note: translations are tested in the quotient by the span of each cone")
    return Report("", [], "PASS" if rep.passed else "FAIL", lines, exit_code=0 if rep.passed else 1)


def _admissible(doc: Document) -> toric_dvr.AdmissibleFan:
    f = _valid_fan(doc)
    check = toric_dvr.is_admissible(f)
    if not check:
        raise UsageError(f"fan is not admissible: generator {_v(check.witness)}")
    return toric_dvr.AdmissibleFan(f, LatticeContext(f.rank, doc.scale))


def toric_admissible(docs, args) -> Report:
    check = toric_dvr.is_admissible(_valid_fan(docs[0]))
    if check:
        return Report("", [], "PASS", ["admissible: yes"])
    return Report("", [], "FAIL", ["admissible: no", f"witness: {_v(check.witness)}"], exit_code=1)


def toric_analyze(docs, args) -> Report:
    af = _admissible(docs[0])
    rep = toric_dvr.special_fiber_report(af)
    u = toric_dvr.uniformizer(af.ctx)
    lines = [f"scale: {af.scale}", f"components: {len(rep.components)}"]
    for c in rep.components:
        val = toric_dvr.divisorial_valuation(u, c.ray, af.ctx)
        lines.append(f"component {_v(c.ray)}: generator {_v(c.generator)} multiplicity {c.multiplicity} "
                     f"uniformizer valuation {val}")
    lines += [f"reduced: {'yes' if rep.reduced else 'no'}", f"reduction index: {rep.reduction_index}"]
    gen = toric_dvr.generic_fiber_subfan(af)
    lines.append(f"generic fiber maximal cones: {len(gen.maximal_cones)}")
    return Report("", [], "PASS", lines)


def toric_rescale(docs, args) -> Report:
    af = _admissible(docs[0])
    d = args.by if args.by is not None else toric_dvr.special_fiber_report(af).reduction_index
    if d < 1:
        raise UsageError("--by must be a positive integer")
    out = toric_dvr.rescale(af, d)
    rep = toric_dvr.special_fiber_report(out)
    lines = [f"factor: {d}", f"scale: {out.scale}", f"reduced: {'yes' if rep.reduced else 'no'}"]
    return Report("", [], "PASS", lines, admissible_fan_document(out))


def toric_chart(docs, args) -> Report:
    af = _admissible(docs[0])
    lines = []
    for k, sigma in enumerate(af.fan.maximal_cones):
        ch = toric_dvr.chart_presentation(sigma, af.ctx)
        lines.append(f"chart {k}: {_cone(sigma)}")
        lines.append(f"  generators: {_basis(ch.generators)}")
        lines.append(f"  units: {_basis(ch.units) if ch.units else 'none'}")
        lines.append(f"  marked: {_v(ch.marked)} in generators: {'yes' if ch.marked_in_generators else 'no'}"
                     f" irreducible: {'yes' if ch.marked_irreducible else 'no'}")
        lines.append(f"  relation: {ch.relation}")
    return Report("", [], "PASS", lines)


def toric_generic_fiber(docs, args) -> Report:
    gen = toric_dvr.generic_fiber_subfan(_admissible(docs[0]))
    return Report("", [], "PASS", [f"maximal cones: {len(gen.maximal_cones)}"], fan_document(gen))


def tcone_build(docs, args) -> Report:
    T = toric_dvr.tcone_build(docs[0].to_complex())
    if isinstance(T.status, FanViolation):
        return Report("", [], "NOT-A-FAN", [f"violation: {T.status.describe()}"], exit_code=1)
    lines = [f"maximal cones: {len(T.fan.maximal_cones)}", f"height-zero cones: {len(T.height_zero)}"]
    return Report("", [], "FAN", lines, admissible_fan_document(toric_dvr.AdmissibleFan(T.fan)))


def tcone_slice(docs, args) -> Report:
    af = _admissible(docs[0])
    C = fanmod.slice_at_height_one(af.fan)
    lines = [f"cells: {len(C.maximal_cells)}"]
    if C.is_empty:
        return Report("", [], "PASS", lines + ["note: the slice is empty"])
    return Report("", [], "PASS", lines, complex_document(C))


def tcone_properness(docs, args) -> Report:
    af = _admissible(docs[0])
    rep = toric_dvr.properness_support_check(af, docs[1].to_complex())
    lines = [f"proper: {'yes' if rep.proper else 'no'}", f"equality: {'yes' if rep.equality else 'no'}"]
    if rep.witness is not None:
        lines.append(f"missing point: {_v(rep.witness)}")
    if rep.excess is not None:
        lines.append(f"excess point: {_v(rep.excess)}")
    return Report("", [], "PASS" if rep.proper else "FAIL", lines, exit_code=0 if rep.proper else 1)


COMMANDS: dict[tuple[str, str], tuple[Callable, tuple[str, ...]]] = {
    ("fan", "validate"): (fan_validate, ("fan",)),
    ("fan", "refines"): (fan_refines, ("fan", "fan")),
    ("fan", "common-refinement"): (fan_common_refinement, ("fan", "fan")),
    ("fan", "star"): (fan_star, ("fan",)),
    ("fan", "coarsen"): (fan_coarsen, ("fan",)),
    ("fan", "translation-space"): (fan_translation_space, ("fan",)),
    ("trop", "hypersurface"): (trop_hypersurface, ("polynomial",)),
    ("trop", "initial-form"): (trop_initial_form, ("polynomial",)),
    ("trop", "certificate"): (trop_certificate, ("polynomial", "...")),
    ("geomtrop", "build"): (geomtrop_build, ("boundary_data",)),
    ("geomtrop", "schoen-check"): (geomtrop_schoen_check, ("boundary_data",)),
    ("geomtrop", "hubsch-check"): (geomtrop_hubsch_check, ("fan",)),
    ("toric", "admissible"): (toric_admissible, ("fan",)),
    ("toric", "analyze"): (toric_analyze, ("fan",)),
    ("toric", "rescale"): (toric_rescale, ("fan",)),
    ("toric", "chart"): (toric_chart, ("fan",)),
    ("toric", "generic-fiber"): (toric_generic_fiber, ("fan",)),
    ("tcone", "build"): (tcone_build, ("complex",)),
    ("tcone", "slice"): (tcone_slice, ("fan",)),
    ("tcone", "properness"): (tcone_properness, ("fan", "complex")),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tropcomp", description="Exact polyhedral and tropical computations.")
    parser.add_argument("--timing", action="store_true", help="print elapsed time on standard error")
    groups = parser.add_subparsers(dest="group", required=True)
    subs: dict[str, argparse._SubParsersAction] = {}
    for (group, name), (_, kinds) in COMMANDS.items():
        if group not in subs:
            subs[group] = groups.add_parser(group).add_subparsers(dest="command", required=True)
        p = subs[group].add_parser(name)
        p.add_argument("files", nargs="+" if "..." in kinds else len(kinds), metavar="FILE",
                       help="input documents ('-' reads standard input)")
        if name in ("hypersurface", "schoen-check"):
            p.add_argument("--oracle-check", action="store_true", help="cross-check against brute force")
        if name in ("initial-form", "certificate"):
            p.add_argument("--weight", required=True, help="weight vector such as [1,1/2]")
        if name == "star":
            p.add_argument("--ray", action="append", help="a ray of the cone sigma (repeatable; none for {0})")
        if name == "rescale":
            p.add_argument("--by", type=int, help="rescale factor (default: the reduction index)")
    return parser


def _read(path: str) -> bytes:
    if path == "-":
        return sys.stdin.buffer.read()
    with open(path, "rb") as fh:
        return fh.read()


_ACCEPTS = {"fan": ("fan", "admissible_fan")}


def run_command(argv: Sequence[str]) -> tuple[str, int]:
    """Run one command; returns (report text, exit code)."""
    parser = build_parser()
    try:
        args = parser.parse_args(list(argv))
    except SystemExit as exc:
        return "", 2 if exc.code else 0
    handler, kinds = COMMANDS[(args.group, args.command)]
    try:
        blobs = [_read(p) for p in args.files]
        docs = []
        for k, blob in enumerate(blobs):
            doc = parse_document(blob.decode("utf-8"))
            want = kinds[min(k, len(kinds) - 1)] if kinds[-1] != "..." else kinds[0]
            if doc.kind not in _ACCEPTS.get(want, (want,)):
                raise UsageError(f"{args.files[k]}: expected a {want} document, got {doc.kind}")
            docs.append(doc)
        rep = handler(docs, args)
    except (ValueError, UsageError, OSError) as exc:
        return f"error: {exc}\n", 2
    rep.command = f"{args.group} {args.command}"
    rep.digests = [hashlib.sha256(b).hexdigest() for b in blobs]
    return rep.render(), rep.exit_code


def main(argv: Sequence[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    start = time.perf_counter()
    text, code = run_command(argv)
    stream = sys.stdout if code != 2 else sys.stderr
    stream.write(text)
    if "--timing" in argv:
        print(f"elapsed: {time.perf_counter() - start:.3f}s", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
