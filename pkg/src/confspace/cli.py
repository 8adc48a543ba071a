"""Command-line front end.

    confspace COMMAND GRAPH [options]

GRAPH is a path to a graph JSON file, ``-`` for stdin, or ``bundled:NAME``.
Exit status is 0 when every check passes, 1 when a check fails and 2 when the
input cannot be used.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any, Dict, List, Optional

from . import corpus
from .cup import basis_products, cohomology_bases, product_via_pullback, tori_report
from .discrete import build_discrete_config, euler_characteristic_formula, homology_oracle
from .errors import (
    BadOuterMarker,
    BadRotation,
    ConfSpaceError,
    EulerMismatch,
    HypothesisViolated,
    MalformedGraph,
)
from .graph import Graph, fundamental_cycle_basis, graph_from_dict, graph_to_dict, subdivide, validate
from .intersection import build_intersection_matrix, config_homology
from .planar import (
    disjoint_pairs,
    h1_generator_cycles,
    planar_betti_report,
    sum_of_bounded,
    torus_basis_report,
    trace_faces,
)
from .relative import build_relative_complex, rank_formula_check, relative_h2, relative_homology

SCHEMA = 1
COMMANDS = ("info", "euler", "homology", "nform", "iform", "planar", "cup", "subdivide", "check")


class InputError(Exception):
    """Input that cannot be used at all (exit status 2)."""


class Run:
    def __init__(self, graph: Graph, digest: str, args):
        self.graph = graph
        self.args = args
        self.report: Dict[str, Any] = {"schema": SCHEMA, "command": args.command, "input_digest": digest}
        self.checks: List[Dict[str, Any]] = []
        self._cache: Dict[str, Any] = {}

    def check(self, name: str, passed: bool, detail: str = "") -> bool:
        if any(c["name"] == name for c in self.checks):
            return passed
        self.checks.append({"name": name, "passed": bool(passed), "detail": detail})
        return passed

    def cached(self, key, build):
        if key not in self._cache:
            self._cache[key] = build()
        return self._cache[key]

    # pieces -------------------------------------------------------------

    def classification(self):
        cls = self.cached("cls", lambda: validate(self.graph))
        self.report["classification"] = {
            "vertices": self.graph.n_vertices,
            "edges": self.graph.n_edges,
            "connected": cls.connected,
            "circle_like": cls.circle_like,
            "interval_like": cls.interval_like,
            "essential_vertices": sorted(cls.essential_vertices),
            "first_betti": cls.first_betti,
            "euler": cls.euler,
        }
        return cls

    def discrete(self):
        return self.cached("D", lambda: build_discrete_config(self.graph))

    def relative(self):
        return self.cached("N", lambda: build_relative_complex(self.graph))

    def oracle(self):
        return self.cached("oracle", lambda: homology_oracle(self.discrete()))

    def planar(self):
        def build():
            outer = self.graph.outer_face
            if self.args.outer_face:
                eid, _, rev = self.args.outer_face.partition(":")
                if rev not in ("", "reverse"):
                    raise BadOuterMarker(f"bad --outer-face value {self.args.outer_face!r}")
                outer = (eid, "reverse" if rev else "forward")
            return trace_faces(self.graph, self.graph.rotations, outer)

        return self.cached("ps", build)

    def euler(self):
        D = self.discrete()
        formula = euler_characteristic_formula(self.graph)
        self.report["euler"] = {"cells": list(D.counts), "by_cells": D.euler, "by_formula": formula}
        self.check("boundary-squared-zero:D", D.boundary_squared_is_zero())
        self.check("euler-consistency", D.euler == formula, f"cells {D.euler}, formula {formula}")

    def homology(self):
        h = self.oracle()
        self.report["homology"] = h.as_dict()
        self.check("boundary-squared-zero:D", self.discrete().boundary_squared_is_zero())

    def nform(self):
        cls = self.classification()
        N = self.relative()
        h = relative_homology(N)
        im_h2 = self.cached("h2", lambda: relative_h2(N))
        self.report["relative_h2_rank"] = im_h2.rank
        self.report["relative_homology"] = h.as_dict()
        self.check("boundary-squared-zero:N", N.boundary_squared_is_zero())
        if cls.qualifies():
            self.check("rank-formula", rank_formula_check(self.graph, im_h2, N), f"rank {im_h2.rank}")

    def basis(self):
        if self.args.basis == "faces":
            return self.planar().bounded_cycles
        return fundamental_cycle_basis(self.graph)

    def iform(self):
        cls = self.classification()
        self.nform()
        if not cls.qualifies():
            raise HypothesisViolated(
                "intersection form route needs a connected graph that is neither a circle nor an interval"
            )
        im = self.cached("im", lambda: build_intersection_matrix(
            self.graph, self.basis(), self.relative(), self._cache.get("h2")))
        rep = config_homology(self.graph, im, self.oracle())
        out = rep.as_dict()
        out["basis"] = self.args.basis
        out["matrix_shape"] = list(im.matrix.shape)
        self.report["intersection"] = out
        self.report["homology"] = self.oracle().as_dict()
        self.check(
            "oracle-equivalence",
            bool(rep.oracle_agreement),
            f"intersection route b1={rep.b1} b2={rep.b2} torsion={rep.coker_torsion}; "
            f"oracle betti={self.oracle().betti} torsion={self.oracle().torsion}",
        )
        return im

    def face_form(self, ps):
        return self.cached("im_faces", lambda: build_intersection_matrix(
            self.graph, ps.bounded_cycles, self.relative(), self._cache.get("h2")))

    def planar_section(self):
        ps = self.planar()
        pairs = disjoint_pairs(ps)
        rep = planar_betti_report(ps, self.graph, pairs)
        out = rep.as_dict()
        out.pop("torus_tensors")
        out["faces"] = len(ps.faces)
        out["r"] = ps.r
        out["pairs"] = [list(p) for p in pairs]
        self.report["planar"] = out
        self.check("outer-cycle-is-sum", sum_of_bounded(ps) == ps.face_cycles[0])
        self.check("pairs-even", len(pairs) % 2 == 0, f"|J| = {len(pairs)}")
        b2 = self.oracle().betti[2]
        self.check("pairs-equal-oracle-b2", len(pairs) == b2, f"|J| = {len(pairs)}, oracle b2 = {b2}")
        if ps.r:
            im = self.face_form(ps)
            tb = torus_basis_report(ps, pairs, im)
            self.check(
                "torus-basis",
                tb.ok and tb.unimodular is not False,
                f"{tb.count} tensors, nullity {tb.nullity}, in kernel {tb.in_kernel}, unimodular {tb.unimodular}",
            )
        hyp = rep.thm3_hypotheses
        if hyp.all_pass:
            b = validate(self.graph).first_betti
            self.check("thm3-b2", rep.b2_thm3 == len(pairs), f"formula {rep.b2_thm3}, |J| {len(pairs)}")
            self.check("thm3-b1", rep.b1_thm3 == self.oracle().betti[1],
                       f"formula {rep.b1_thm3}, oracle {self.oracle().betti[1]}")
            gens = h1_generator_cycles(ps, self.graph, self.discrete())
            out["generators"] = gens.labels
            out["generator_rank"] = gens.rank
            self.check("generator-rank", gens.rank == 2 * b + 1, f"rank {gens.rank}")
        return ps, pairs

    def cup(self):
        ps, pairs = self.planar_section()
        bases = cohomology_bases(ps, pairs, self.discrete())
        table = basis_products(ps, pairs, bases)
        self.report["cup"] = table.as_dict()
        antisym = all(
            table[(a, b)] == [-c for c in table[(b, a)]] for a, b in table.entries
        )
        self.check("cup-antisymmetry", antisym)
        agree = all(
            product_via_pullback(table, a, b) in (None, table[(a, b)]) for a, b in table.entries
        )
        self.check("cup-pullback-formula", agree)
        if ps.r:
            tr = tori_report(table, self.face_form(ps))
            self.check("tori-pullback", tr.tensors_in_kernel and not tr.pullback_mismatches,
                       f"{len(tr.pullback_mismatches)} mismatches")
            bad = sorted({m[2] for m in tr.special_mismatches})
            self.check("tori-special", not bad,
                       "special class nonzero on tori " + ", ".join(map(str, bad)) if bad else "")

    # commands -----------------------------------------------------------

    def run(self):
        cmd = self.args.command
        if cmd == "info":
            self.classification()
        elif cmd == "euler":
            self.classification()
            self.euler()
        elif cmd == "homology":
            self.classification()
            self.homology()
        elif cmd == "nform":
            self.nform()
        elif cmd == "iform":
            self.iform()
        elif cmd == "planar":
            self.classification()
            self.planar_section()
        elif cmd == "cup":
            self.classification()
            self.cup()
        elif cmd == "check":
            cls = self.classification()
            self.euler()
            self.homology()
            if cls.qualifies():
                self.iform()
            else:
                self.nform()
            if self.graph.rotations is not None:
                if cls.essential_vertices and cls.connected:
                    self.cup()
                else:
                    self.planar_section()
        self.report["checks"] = self.checks
        if self.args.timestamp:
            self.report["timestamp"] = datetime.now(timezone.utc).isoformat()
        return self.report


def load_input(spec: str):
    if spec.startswith("bundled:"):
        try:
            raw = corpus.bundled_text(spec.split(":", 1)[1]).encode()
        except KeyError as exc:
            raise InputError(str(exc.args[0])) from None
    elif spec == "-":
        raw = sys.stdin.buffer.read()
    else:
        try:
            with open(spec, "rb") as fh:
                raw = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {spec}: {exc.strerror}") from None
    try:
        doc = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise MalformedGraph(f"not valid JSON: {exc}") from None
    return graph_from_dict(doc), hashlib.sha256(raw).hexdigest()


def _jsonable(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if hasattr(x, "item"):
        return x.item()
    return x


def render_text(report: Dict[str, Any]) -> str:
    lines = [f"command: {report['command']}", f"input sha256: {report['input_digest']}"]
    for section in ("classification", "euler", "homology", "relative_homology", "intersection", "planar"):
        if section not in report:
            continue
        lines.append(f"[{section}]")
        for k, v in report[section].items():
            if k in ("h2_generators", "pairs", "generators"):
                v = f"{len(v)} items"
            lines.append(f"  {k:<24} {json.dumps(_jsonable(v))}")
    if "relative_h2_rank" in report:
        lines.append(f"relative H2 rank: {report['relative_h2_rank']}")
    if "cup" in report:
        lines.append("[cup]")
        prods = report["cup"]["products"]
        if not prods:
            lines.append("  all products vanish")
        for k, v in prods.items():
            terms = " ".join(f"{c}*{n}" for n, c in v.items())
            lines.append(f"  {k:<20} {terms}")
    if report.get("checks"):
        lines.append("[checks]")
        for c in report["checks"]:
            mark = "PASS" if c["passed"] else "FAIL"
            lines.append(f"  {mark} {c['name']}" + (f"  ({c['detail']})" if c["detail"] else ""))
    return "\n".join(lines) + "\n"


def write_dot(graph: Graph, prefix: str) -> None:
    with open(f"{prefix}.graph.dot", "w") as fh:
        fh.write("digraph G {\n")
        for v in graph.vertices:
            fh.write(f'  "{v}";\n')
        for e in graph.edges:
            fh.write(f'  "{e.tail}" -> "{e.head}" [label="{e.id}"];\n')
        fh.write("}\n")
    D = build_discrete_config(graph)
    with open(f"{prefix}.config.dot", "w") as fh:
        fh.write("digraph D {\n")
        for u, v in D.cells0:
            fh.write(f'  "{u},{v}";\n')
        for cell in D.cells1:
            if cell[0] == "ev":
                e, v = graph.edge_map[cell[1]], cell[2]
                a, b, lab = f"{e.tail},{v}", f"{e.head},{v}", f"{e.id} x {v}"
            else:
                v, e = cell[1], graph.edge_map[cell[2]]
                a, b, lab = f"{v},{e.tail}", f"{v},{e.head}", f"{v} x {e.id}"
            fh.write(f'  "{a}" -> "{b}" [label="{lab}"];\n')
        fh.write("}\n")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="confspace", description="Homology of two-point configuration spaces of graphs.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("graph", help="graph JSON path, '-' for stdin, or bundled:NAME")
    p.add_argument("--json", action="store_true", help="emit the report as JSON")
    p.add_argument("--outer-face", metavar="EDGE[:reverse]", help="directed edge with the outer face on its left")
    p.add_argument("--basis", choices=("tree", "faces"), default="tree", help="cycle basis for iform")
    p.add_argument("--parts", type=int, default=2, metavar="K", help="pieces per edge for subdivide")
    p.add_argument("--dot", metavar="PREFIX", help="also write PREFIX.graph.dot and PREFIX.config.dot")
    p.add_argument("--timestamp", action="store_true", help="add a timestamp field to the report")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        graph, digest = load_input(args.graph)
        validate(graph)
    except (InputError, MalformedGraph) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    if args.dot:
        write_dot(graph, args.dot)

    if args.command == "subdivide":
        if args.parts < 1:
            print("error: --parts must be positive", file=sys.stderr)
            return 2
        sys.stdout.write(json.dumps(graph_to_dict(subdivide(graph, args.parts)), indent=1) + "\n")
        return 0

    run = Run(graph, digest, args)
    try:
        report = run.run()
    except (BadRotation, BadOuterMarker, EulerMismatch) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except HypothesisViolated as exc:
        run.check("hypotheses", False, str(exc))
        run.report["checks"] = run.checks
        report = run.report
    except ConfSpaceError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    report = _jsonable(report)
    if args.json:
        sys.stdout.write(json.dumps(report, indent=1) + "\n")
    else:
        sys.stdout.write(render_text(report))
    failed = [c["name"] for c in report["checks"] if not c["passed"]]
    if failed:
        print("failed checks: " + ", ".join(failed), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
