"""Command-line front end.

Instances are declared in a JSON document (objects, actions, precrossed
modules, morphisms, squares) and a subcommand dispatches one operation over
them.  Reports are emitted as text or JSON; exit code 0 means computed or
property holds, 1 means a property failed (witness in the report), 2 means
the input was invalid.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import ambient as amb
from . import catalog as cat
from . import galois as gal
from . import pxmod as px
from .errors import BadSpec, NotCentral, NotDouble, PeifferError

SUBCOMMANDS = (
    "validate", "crossed", "peiffer", "reflect", "central", "central-crosscheck",
    "centralize", "trivial", "double", "double-central", "double-centralize",
    "galois-group", "hopf2", "hopf3", "five-term", "relative-commutator",
    "enumerate", "verify",
)


# ---------------------------------------------------------------------------
# instance documents
# ---------------------------------------------------------------------------

class Document:
    """Declarations from an instance file, resolved in order."""

    def __init__(self, data: dict, max_order=None):
        if not isinstance(data, dict):
            raise BadSpec("instance document must be a JSON object")
        self.max_order = max_order
        self.objects = {}
        self.actions = {}
        self.pxmods = {}
        self.morphisms = {}
        self.squares = {}
        self.task = data.get("task", {})
        for spec in data.get("objects", []):
            name = self._name(spec, "object")
            self.objects[name] = amb.build_ambient(spec, max_order=max_order, name=name)
        for spec in data.get("actions", []):
            name = self._name(spec, "action")
            self.actions[name] = self._action(spec)
        for spec in data.get("pxmods", []):
            name = self._name(spec, "pxmod")
            self.pxmods[name] = self._pxmod(spec)
        for spec in data.get("morphisms", []):
            name = self._name(spec, "morphism")
            self.morphisms[name] = self._morphism(spec)
        for spec in data.get("squares", []):
            name = self._name(spec, "square")
            self.squares[name] = spec

    @staticmethod
    def _name(spec, kind):
        name = spec.get("name")
        if not name:
            raise BadSpec(f"every {kind} declaration needs a name")
        return name

    def _lookup(self, table, name, kind):
        if name not in table:
            raise BadSpec(f"unknown {kind} {name!r} (declare it before use)")
        return table[name]

    def object(self, name):
        return self._lookup(self.objects, name, "object")

    def _action(self, spec):
        actor = self.object(spec["actor"])
        acted = self.object(spec["acted"])
        if spec.get("trivial"):
            return amb.trivial_action(actor, acted)
        if spec.get("conjugation"):
            if actor is not acted:
                raise BadSpec("conjugation action needs actor == acted")
            return amb.conjugation_action(actor)
        if "table" not in spec:
            raise BadSpec("action needs 'table', 'trivial' or 'conjugation'")
        return amb.make_action(actor, acted, np.array(spec["table"], dtype=np.int64))

    def _hom(self, spec, domain, codomain):
        if spec.get("zero"):
            return amb.zero_hom(domain, codomain)
        if spec.get("identity"):
            if domain is not codomain:
                raise BadSpec("identity map needs equal endpoints")
            return amb.identity_hom(domain)
        if "map" in spec:
            return amb.make_hom(domain, codomain, mapping=spec["map"])
        if "matrix" in spec:
            return amb.make_hom(domain, codomain, matrix=spec["matrix"])
        raise BadSpec("map needs 'map', 'matrix', 'zero' or 'identity'")

    def _pxmod(self, spec):
        X = self.object(spec["X"])
        B = self.object(spec["B"])
        boundary = self._hom(spec.get("boundary", {"zero": True}), X, B)
        action = self._lookup(self.actions, spec["action"], "action") if "action" in spec \
            else amb.trivial_action(B, X)
        return px.make_pxmod(X, B, boundary, action)

    def _morphism(self, spec):
        source = self._lookup(self.pxmods, spec["source"], "pxmod")
        target = self._lookup(self.pxmods, spec["target"], "pxmod")
        f = self._hom(spec, source.X, target.X)
        return px.make_pxmorphism(source, target, f)

    def pxmod(self, name):
        return self._lookup(self.pxmods, name, "pxmod")

    def morphism(self, name):
        return self._lookup(self.morphisms, name, "morphism")

    def extension(self, name):
        return gal.make_extension(self.morphism(name))

    def square(self, name):
        spec = self._lookup(self.squares, name, "square")
        f = self.extension(spec["f"])
        g = self.extension(spec["g"])
        h = self.extension(spec["h"])
        j = self.extension(spec["j"])
        return gal.make_double_extension(f, g, h, j, max_order=self.max_order)

    def submodule(self, parent, spec):
        if spec == "whole":
            return px.whole_submodule(parent)
        if spec == "trivial":
            return px.trivial_submodule(parent)
        carrier = amb.generated_subobject(parent.X, [int(h) for h in spec])
        return px.make_submodule(parent, carrier)


def load_document(path, max_order=None) -> Document:
    with open(path) as fh:
        data = json.load(fh)
    return Document(data, max_order=max_order)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------

def _sub_summary(sub) -> dict:
    carrier = sub.carrier if isinstance(sub, px.PXSubmodule) else sub
    emb = amb.embed_subobject(carrier)
    return {
        "order": carrier.size,
        "fingerprint": amb.fingerprint(emb.object),
    }


def _module_summary(P: px.PrecrossedModule) -> dict:
    return {
        "X": {"order": P.X.size, "fingerprint": amb.fingerprint(P.X)},
        "B": {"order": P.B.size, "fingerprint": amb.fingerprint(P.B)},
    }


class Report:
    def __init__(self, task):
        self.task = task
        self.fields = {}
        self.caveats = []
        self.witness = None
        self.exit_code = 0

    def to_dict(self, include_witness, timing_ms=None):
        out = {"task": self.task, **self.fields}
        if self.caveats:
            out["caveats"] = sorted(self.caveats)
        if include_witness and self.witness is not None:
            out["witness"] = self.witness
        if timing_ms is not None:
            out["timing_ms"] = timing_ms
        return out

    def render_text(self, include_witness, timing_ms=None) -> str:
        lines = [f"task: {self.task}"]
        for key, value in self.fields.items():
            lines.append(f"{key}: {json.dumps(value, sort_keys=True)}")
        for caveat in sorted(self.caveats):
            lines.append(f"caveat: {caveat}")
        if include_witness and self.witness is not None:
            lines.append(f"witness: {json.dumps(self.witness, sort_keys=True)}")
        if timing_ms is not None:
            lines.append(f"timing_ms: {timing_ms}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# task handlers
# ---------------------------------------------------------------------------

def _task_validate(doc: Document, args) -> Report:
    rep = Report("validate")
    rep.fields["objects"] = {name: amb.fingerprint(obj) for name, obj in sorted(doc.objects.items())}
    rep.fields["pxmods"] = sorted(doc.pxmods)
    rep.fields["morphisms"] = sorted(doc.morphisms)
    rep.fields["verdict"] = True
    return rep


def _task_crossed(doc: Document, args) -> Report:
    P = doc.pxmod(doc.task["pxmod"])
    verdict = px.is_crossed(P)
    rep = Report("crossed")
    rep.fields["module"] = _module_summary(P)
    rep.fields["verdict"] = verdict.ok
    if not verdict.ok:
        rep.witness = {"pair": list(verdict.witness)}
        rep.exit_code = 1
    return rep


def _task_peiffer(doc: Document, args) -> Report:
    P = doc.pxmod(doc.task["pxmod"])
    M = doc.submodule(P, doc.task.get("M", "whole"))
    N = doc.submodule(P, doc.task.get("N", "whole"))
    comm = px.peiffer_commutator(P, M, N)
    rep = Report("peiffer")
    rep.fields["module"] = _module_summary(P)
    rep.fields["commutator"] = _sub_summary(comm)
    rep.fields["normal_in_parent"] = comm.normal_in_parent
    rep.fields["trivial"] = comm.is_trivial
    return rep


def _task_reflect(doc: Document, args) -> Report:
    P = doc.pxmod(doc.task["pxmod"])
    refl = px.reflect_to_xmod(P)
    rep = Report("reflect")
    rep.fields["module"] = _module_summary(P)
    rep.fields["reflection"] = _module_summary(refl.module)
    rep.fields["radical"] = _sub_summary(refl.radical)
    rep.fields["unit_bijective"] = refl.unit.map.is_bijective
    if refl.closure_was_proper:
        rep.caveats.append("normal-closure-was-proper")
    return rep


def _task_central(doc: Document, args) -> Report:
    ext = doc.extension(doc.task["extension"])
    report = gal.is_central(ext)
    rep = Report("central")
    rep.fields["extension"] = {
        "source": _module_summary(ext.source),
        "target": _module_summary(ext.target),
        "kernel": _sub_summary(ext.kernel),
    }
    rep.fields["verdict"] = report.verdict
    rep.fields["obstruction"] = _sub_summary(report.obstruction)
    if not report.verdict:
        rep.witness = {"peiffer_generator": list(report.witness)} if report.witness else None
        rep.exit_code = 1
    return rep


def _task_central_crosscheck(doc: Document, args) -> Report:
    ext = doc.extension(doc.task["extension"])
    direct = gal.is_central(ext)
    huq = gal.is_central_via_huq(ext, max_order=doc.max_order)
    rep = Report("central-crosscheck")
    rep.fields["peiffer_verdict"] = direct.verdict
    rep.fields["huq_verdict"] = huq.verdict
    rep.fields["verdict"] = direct.verdict == huq.verdict
    if direct.verdict != huq.verdict:
        rep.exit_code = 1
    return rep


def _task_centralize(doc: Document, args) -> Report:
    ext = doc.extension(doc.task["extension"])
    cz = gal.centralize(ext)
    rep = Report("centralize")
    rep.fields["source"] = _module_summary(ext.source)
    rep.fields["centralized"] = _module_summary(cz.extension.source)
    rep.fields["unit_bijective"] = cz.unit.map.is_bijective
    if cz.closure_was_proper:
        rep.caveats.append("normal-closure-was-proper")
    return rep


def _task_trivial(doc: Document, args) -> Report:
    ext = doc.extension(doc.task["extension"])
    verdict = gal.is_trivial_extension(ext, max_order=doc.max_order)
    rep = Report("trivial")
    rep.fields["verdict"] = verdict
    if not verdict:
        rep.exit_code = 1
    return rep


def _task_double(doc: Document, args) -> Report:
    rep = Report("double")
    try:
        square = doc.square(doc.task["square"])
    except NotDouble as exc:
        rep.fields["verdict"] = False
        rep.witness = {"pullback_element_not_hit": exc.witness}
        rep.exit_code = 1
        return rep
    rep.fields["verdict"] = True
    rep.fields["top"] = _module_summary(square.top)
    rep.fields["pullback"] = _module_summary(square.pullback.module)
    return rep


def _task_double_central(doc: Document, args) -> Report:
    square = doc.square(doc.task["square"])
    report = gal.is_double_central(square)
    rep = Report("double-central")
    rep.fields["verdict"] = report.verdict
    rep.fields["meet_obstruction"] = _sub_summary(report.meet_obstruction)
    rep.fields["kernel_obstruction"] = _sub_summary(report.kernels_obstruction)
    if not report.verdict:
        rep.witness = {"peiffer_generator": list(report.witness)} if report.witness else None
        rep.exit_code = 1
    return rep


def _task_double_centralize(doc: Document, args) -> Report:
    square = doc.square(doc.task["square"])
    dc = gal.double_centralize(square, max_order=doc.max_order)
    rep = Report("double-centralize")
    rep.fields["top_before"] = _module_summary(square.top)
    rep.fields["top_after"] = _module_summary(dc.square.top)
    rep.fields["unit_bijective"] = dc.unit.map.is_bijective
    if dc.closure_was_proper:
        rep.caveats.append("normal-closure-was-proper")
    return rep


def _task_galois_group(doc: Document, args) -> Report:
    ext = doc.extension(doc.task["extension"])
    rep = Report("galois-group")
    quotient = gal.galois_group(ext)
    rep.fields["galois_group"] = {"order": quotient.order, "fingerprint": quotient.fingerprint}
    return rep


def _hopf_fields(rep: Report, quotient: gal.HopfQuotient):
    rep.fields["numerator_order"] = quotient.numerator.size
    rep.fields["denominator_order"] = quotient.denominator.size
    rep.fields["quotient"] = {"order": quotient.order, "fingerprint": quotient.fingerprint}
    if quotient.projectivity_caveat:
        rep.caveats.append("projectivity-not-verified")
    if quotient.closure_was_proper:
        rep.caveats.append("normal-closure-was-proper")


def _task_hopf2(doc: Document, args) -> Report:
    ext = doc.extension(doc.task["extension"])
    rep = Report("hopf2")
    _hopf_fields(rep, gal.hopf_h2(ext))
    return rep


def _task_hopf3(doc: Document, args) -> Report:
    square = doc.square(doc.task["square"])
    rep = Report("hopf3")
    _hopf_fields(rep, gal.hopf_h3(square))
    return rep


def _task_five_term(doc: Document, args) -> Report:
    f = doc.morphism(doc.task["f"])
    g = doc.morphism(doc.task["g"])
    if "p" in doc.task:
        p = doc.extension(doc.task["p"])
    else:
        p = gal.identity_extension(g.source)
    ft = gal.five_term(f, g, p)
    rep = Report("five-term")
    rep.fields["nodes"] = [
        {"order": node.X.size, "fingerprint": amb.fingerprint(node.X)} for node in ft.nodes
    ]
    rep.fields["exactness"] = {str(k): v for k, v in sorted(ft.exactness.items())}
    rep.fields["composites_zero"] = ft.composites_zero
    rep.fields["verdict"] = ft.ok
    rep.caveats.append("projectivity-not-verified")
    if not ft.ok:
        rep.exit_code = 1
    return rep


def _task_relative_commutator(doc: Document, args) -> Report:
    P = doc.pxmod(doc.task["pxmod"])
    H = doc.submodule(P, doc.task["H"])
    K = doc.submodule(P, doc.task["K"])
    comm = gal.relative_commutator(P, H, K)
    rep = Report("relative-commutator")
    rep.fields["commutator"] = _sub_summary(comm)
    return rep


def _task_enumerate(doc, args) -> Report:
    stream = cat.build_stream(
        theory=args.theory, bound=args.max_order, seed=args.seed, prime=args.prime
    )
    rep = Report("enumerate")
    rep.fields["stream"] = stream.describe()
    rep.fields["first_labels"] = [inst.label for inst in stream.pxmods[:10]]
    return rep


def _task_verify(doc, args) -> Report:
    if not args.property:
        raise BadSpec("verify needs --property NAME")
    stream = cat.build_stream(
        theory=args.theory, bound=args.max_order, seed=args.seed, prime=args.prime
    )
    report = cat.verify_property(stream, args.property)
    rep = Report("verify")
    rep.fields["report"] = report.to_json_dict()
    rep.fields["verdict"] = report.ok
    if not report.ok:
        rep.exit_code = 1
    return rep


TASKS = {
    "validate": _task_validate,
    "crossed": _task_crossed,
    "peiffer": _task_peiffer,
    "reflect": _task_reflect,
    "central": _task_central,
    "central-crosscheck": _task_central_crosscheck,
    "centralize": _task_centralize,
    "trivial": _task_trivial,
    "double": _task_double,
    "double-central": _task_double_central,
    "double-centralize": _task_double_centralize,
    "galois-group": _task_galois_group,
    "hopf2": _task_hopf2,
    "hopf3": _task_hopf3,
    "five-term": _task_five_term,
    "relative-commutator": _task_relative_commutator,
    "enumerate": _task_enumerate,
    "verify": _task_verify,
}

NEEDS_INPUT = set(TASKS) - {"enumerate", "verify"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="peiffer",
        description="Peiffer commutators and central-extension certificates for finite precrossed modules",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--input", help="instance document (JSON)")
        p.add_argument("--format", choices=("text", "json"), default="text")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--max-order", type=int, default=None)
        p.add_argument("--witness", action="store_true", help="include element-level witnesses")
        p.add_argument("--out", help="write the report to a file instead of stdout")
        p.add_argument("--no-timing", action="store_true", help="omit timing from the report")
        if name in ("enumerate", "verify"):
            p.add_argument("--property", help="registered property name")
            p.add_argument("--theory", choices=("group", "lie"), default="group")
            p.add_argument("--prime", type=int, default=2, choices=(2, 3, 5, 7))
    return parser


def run(argv) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    command = args.command
    started = time.monotonic()
    env_cap = os.environ.get("PEIFFER_MAX_ORDER")
    if args.max_order is None and env_cap is not None:
        try:
            args.max_order = int(env_cap)
        except ValueError:
            print("error: PEIFFER_MAX_ORDER must be an integer", file=sys.stderr)
            return 2
    try:
        doc = None
        if command in NEEDS_INPUT:
            if not args.input:
                raise BadSpec(f"{command} needs --input FILE")
            doc = load_document(args.input, max_order=args.max_order)
            declared = doc.task.get("op")
            if declared is not None and declared != command:
                raise BadSpec(f"document task is {declared!r} but subcommand is {command!r}")
        report = TASKS[command](doc, args)
    except PeifferError as exc:
        diag = {"error": type(exc).__name__, "message": str(exc)}
        if exc.witness is not None:
            diag["witness"] = exc.witness if not isinstance(exc.witness, tuple) else list(exc.witness)
        print(json.dumps(diag, sort_keys=True, default=str), file=sys.stderr)
        return 2
    except (OSError, json.JSONDecodeError) as exc:
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return 2
    timing = None if args.no_timing else int((time.monotonic() - started) * 1000)
    if args.format == "json":
        text = json.dumps(report.to_dict(args.witness, timing), sort_keys=True, indent=2) + "\n"
    else:
        text = report.render_text(args.witness, timing)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return report.exit_code


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
