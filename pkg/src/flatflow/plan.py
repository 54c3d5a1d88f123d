"""Declarative computation plans.

A plan is a JSON document with sections "presentations", "representations",
"paths", and "tasks".  Exact data is written as rational strings "p/q"
(never floats); SU(2) elements are four decimals [w, x, y, z], exact circle
elements {"axis": "i", "turns": "p/q"} (or "turns_poly" for t-families),
conjugations {"conjugate": E, "by": name-or-element}, and products
{"product": [E, ...]}.  Task inputs may reference earlier results with
{"from": task_id, "take": field}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Mapping, Optional

from .errors import CyclicPlan, SchemaError, UnresolvedReference
from .quaternions import UnitQuaternion
from .reps import (
    CircleExpr,
    ConjugateExpr,
    ImageExpr,
    LiteralExpr,
    ProductExpr,
    RepresentationPath,
    SolvedConjugator,
)
from .words import GroupPresentation

TASK_KINDS = (
    "cohomology",
    "path_certificate",
    "signature",
    "cs",
    "rho_pipeline",
    "spectral_flow",
)

SIGNATURE_OPERATIONS = (
    "kernel_form",
    "form_signature",
    "eigenspace_transfer",
    "seifert_g_signature",
)


def parse_rational(value, where: str, problems: list[str]) -> Fraction:
    if isinstance(value, bool) or isinstance(value, float):
        problems.append(f"{where}: exact rationals must be strings or integers")
        return Fraction(0)
    try:
        return Fraction(str(value))
    except (ValueError, ZeroDivisionError):
        problems.append(f"{where}: not a rational: {value!r}")
        return Fraction(0)


def _parse_element(spec, where: str, problems: list[str]) -> ImageExpr:
    if isinstance(spec, list):
        if len(spec) != 4 or not all(isinstance(x, (int, float)) for x in spec):
            problems.append(f"{where}: quaternion literal needs four numbers")
            return LiteralExpr(UnitQuaternion.of(1, 0, 0, 0))
        try:
            return LiteralExpr(UnitQuaternion.of(*spec))
        except Exception as exc:
            problems.append(f"{where}: {exc}")
            return LiteralExpr(UnitQuaternion.of(1, 0, 0, 0))
    if not isinstance(spec, dict):
        problems.append(f"{where}: element must be a list or object, got {type(spec).__name__}")
        return LiteralExpr(UnitQuaternion.of(1, 0, 0, 0))
    if "product" in spec:
        factors = spec["product"]
        if not isinstance(factors, list) or not factors:
            problems.append(f"{where}.product: need a nonempty list")
            return LiteralExpr(UnitQuaternion.of(1, 0, 0, 0))
        return ProductExpr(
            tuple(
                _parse_element(f, f"{where}.product[{i}]", problems)
                for i, f in enumerate(factors)
            )
        )
    if "conjugate" in spec:
        inner = _parse_element(spec["conjugate"], f"{where}.conjugate", problems)
        by = spec.get("by")
        if isinstance(by, str):
            return ConjugateExpr(inner, by)
        if by is None:
            problems.append(f"{where}: conjugate needs 'by'")
            return inner
        return ConjugateExpr(inner, _parse_element(by, f"{where}.by", problems))
    if "axis" in spec:
        axis = spec["axis"]
        if axis not in ("i", "j", "k"):
            problems.append(f"{where}.axis: must be i, j or k")
            axis = "i"
        if "turns_poly" in spec:
            coeffs = tuple(
                parse_rational(c, f"{where}.turns_poly[{i}]", problems)
                for i, c in enumerate(spec["turns_poly"])
            )
            return CircleExpr(axis, coeffs or (Fraction(0),))
        if "turns" in spec:
            return CircleExpr(axis, (parse_rational(spec["turns"], f"{where}.turns", problems),))
        problems.append(f"{where}: circle element needs turns or turns_poly")
        return CircleExpr(axis, (Fraction(0),))
    problems.append(f"{where}: unrecognized element {sorted(spec)}")
    return LiteralExpr(UnitQuaternion.of(1, 0, 0, 0))


def _parse_family(
    name: str,
    spec,
    presentations: Mapping[str, GroupPresentation],
    where: str,
    problems: list[str],
) -> Optional[RepresentationPath]:
    n_before = len(problems)
    if not isinstance(spec, dict):
        problems.append(f"{where}: must be an object")
        return None
    pres_name = spec.get("presentation")
    if pres_name not in presentations:
        problems.append(f"{where}.presentation: unknown presentation {pres_name!r}")
        return None
    pres = presentations[pres_name]
    conjugators: dict[str, Any] = {}
    for cname, cspec in (spec.get("conjugators") or {}).items():
        cwhere = f"{where}.conjugators.{cname}"
        if isinstance(cspec, dict) and "solve" in cspec:
            solve = cspec["solve"]
            axis = solve.get("axis", "j")
            if axis not in ("i", "j", "k"):
                problems.append(f"{cwhere}.solve.axis: must be i, j or k")
                axis = "j"
            conjugators[cname] = SolvedConjugator(axis=axis, relator=solve.get("relator"))
        else:
            conjugators[cname] = _parse_element(cspec, cwhere, problems)
    images = {}
    imgs = spec.get("images")
    if not isinstance(imgs, dict):
        problems.append(f"{where}.images: required object")
        return None
    for g in pres.generators:
        if g not in imgs:
            problems.append(f"{where}.images: missing image for generator {g!r}")
            return None
    for g, espec in imgs.items():
        if g not in pres.generators:
            problems.append(f"{where}.images.{g}: not a generator of {pres_name!r}")
            continue
        images[g] = _parse_element(espec, f"{where}.images.{g}", problems)
    if len(problems) > n_before:
        return None
    return RepresentationPath(pres, images, conjugators)


@dataclass(frozen=True)
class ComputationPlan:
    name: str
    description: str
    presentations: Mapping[str, GroupPresentation]
    representations: Mapping[str, RepresentationPath]
    paths: Mapping[str, RepresentationPath]
    tasks: tuple[dict, ...]
    execution_order: tuple[int, ...] = field(default=())  # indices into tasks

    def task_ids(self) -> list[str]:
        return [t["id"] for t in self.tasks]


def _collect_refs(value, acc: list[str]):
    if isinstance(value, dict):
        if set(value.keys()) == {"from", "take"}:
            acc.append(value["from"])
        else:
            for v in value.values():
                _collect_refs(v, acc)
    elif isinstance(value, list):
        for v in value:
            _collect_refs(v, acc)


def parse_plan(document: str) -> ComputationPlan:
    """Parse and statically validate a plan; raises SchemaError /
    UnresolvedReference / CyclicPlan."""
    try:
        doc = json.loads(document)
    except json.JSONDecodeError as exc:
        raise SchemaError([f"not valid JSON: {exc}"])
    if not isinstance(doc, dict):
        raise SchemaError(["top level must be an object"])
    problems: list[str] = []

    presentations: dict[str, GroupPresentation] = {}
    for pname, pspec in (doc.get("presentations") or {}).items():
        where = f"presentations.{pname}"
        if not isinstance(pspec, dict):
            problems.append(f"{where}: must be an object")
            continue
        gens = pspec.get("generators")
        rels = pspec.get("relators", [])
        if not isinstance(gens, list) or not all(isinstance(g, str) for g in gens):
            problems.append(f"{where}.generators: must be a list of names")
            continue
        if not isinstance(rels, list) or not all(isinstance(r, str) for r in rels):
            problems.append(f"{where}.relators: must be a list of word strings")
            continue
        try:
            presentations[pname] = GroupPresentation.parse(gens, rels, name=pname)
        except Exception as exc:
            problems.append(f"{where}: {exc}")

    representations: dict[str, RepresentationPath] = {}
    for rname, rspec in (doc.get("representations") or {}).items():
        fam = _parse_family(
            rname, rspec, presentations, f"representations.{rname}", problems
        )
        if fam is not None:
            representations[rname] = fam

    paths: dict[str, RepresentationPath] = {}
    for pname, pspec in (doc.get("paths") or {}).items():
        fam = _parse_family(pname, pspec, presentations, f"paths.{pname}", problems)
        if fam is not None:
            paths[pname] = fam

    tasks_spec = doc.get("tasks")
    if tasks_spec is None:
        tasks_spec = []
    if not isinstance(tasks_spec, list):
        problems.append("tasks: must be a list")
        tasks_spec = []
    tasks: list[dict] = []
    seen_ids: set[str] = set()
    for i, t in enumerate(tasks_spec):
        where = f"tasks[{i}]"
        if not isinstance(t, dict):
            problems.append(f"{where}: must be an object")
            continue
        tid = t.get("id")
        if not isinstance(tid, str) or not tid:
            problems.append(f"{where}.id: required nonempty string")
            continue
        if tid in seen_ids:
            problems.append(f"{where}.id: duplicate id {tid!r}")
            continue
        seen_ids.add(tid)
        kind = t.get("kind")
        if kind not in TASK_KINDS:
            problems.append(f"{where}.kind: must be one of {', '.join(TASK_KINDS)}")
            continue
        if kind == "cohomology":
            if t.get("presentation") not in presentations:
                problems.append(f"{where}.presentation: unknown")
            ref = t.get("representation")
            if ref not in representations and ref not in paths:
                problems.append(f"{where}.representation: unknown representation {ref!r}")
        elif kind == "path_certificate":
            if t.get("path") not in paths:
                problems.append(f"{where}.path: unknown path {t.get('path')!r}")
        elif kind == "signature":
            if t.get("operation") not in SIGNATURE_OPERATIONS:
                problems.append(
                    f"{where}.operation: must be one of {', '.join(SIGNATURE_OPERATIONS)}"
                )
        elif kind == "cs":
            if not isinstance(t.get("meridians"), dict):
                problems.append(f"{where}.meridians: required object")
            if not isinstance(t.get("rows"), dict):
                problems.append(f"{where}.rows: required object")
        elif kind == "rho_pipeline":
            if not isinstance(t.get("source"), dict):
                problems.append(f"{where}.source: required object")
        elif kind == "spectral_flow":
            for k in ("cs0", "cs1", "rho0", "rho1", "h0", "h1"):
                if k not in t:
                    problems.append(f"{where}.{k}: required")
        tasks.append(t)

    if problems:
        raise SchemaError(problems)

    # reference resolution and cycle detection
    ids = [t["id"] for t in tasks]
    index = {tid: i for i, tid in enumerate(ids)}
    deps: dict[int, list[int]] = {}
    for i, t in enumerate(tasks):
        refs: list[str] = []
        _collect_refs({k: v for k, v in t.items() if k != "id"}, refs)
        for r in refs:
            if r not in index:
                raise UnresolvedReference(
                    f"task {t['id']!r} references unknown task {r!r}"
                )
        deps[i] = [index[r] for r in refs]

    order: list[int] = []
    state = [0] * len(tasks)  # 0 new, 1 visiting, 2 done

    def visit(i: int, stack: tuple[str, ...]):
        if state[i] == 1:
            raise CyclicPlan(f"cycle through tasks {' -> '.join(stack + (ids[i],))}")
        if state[i] == 2:
            return
        state[i] = 1
        for d in deps[i]:
            visit(d, stack + (ids[i],))
        state[i] = 2
        order.append(i)

    for i in range(len(tasks)):
        visit(i, ())

    return ComputationPlan(
        name=str(doc.get("name", "")),
        description=str(doc.get("description", "")),
        presentations=presentations,
        representations=representations,
        paths=paths,
        tasks=tuple(tasks),
        execution_order=tuple(order),
    )
