"""Execute computation plans and render reports.

Tasks run in dependency order; a failing task aborts its dependents but
independent tasks still run.  Reports carry exact rationals as "p/q"
strings together with a provenance note for every computed quantity, and
the JSON rendering is byte-stable across runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

from .chern_simons import (
    BoundaryPath,
    CSValue,
    PiecewisePoly,
    RationalPoly,
    as_path,
    cs_lift,
    kirk_klassen_cs,
    longitude_path,
)
from .cohomology import cohomology_summary, path_certificate, DEFAULT_SAMPLES
from .errors import ComputationError, FlatflowError, SchemaError
from .plan import ComputationPlan, parse_rational
from .rho import (
    CobordismStep,
    CoverData,
    RhoValue,
    connected_sum_rho,
    rho_chain,
    rho_finite_image,
    rho_finite_image_by_order,
    rho_lens_space,
)
from .signatures import (
    FixedSurface,
    IsolatedFixedPoint,
    SeifertMatrix,
    SymmetricForm,
    cg_eigenspace_form,
    eigenspace_signature_from_cover,
    g_signature_from_seifert,
    hermitian_signature,
    restrict_form,
    signature,
    solve_boundary_class,
)
from .spectral_flow import SpectralFlowInput, spectral_flow
from .errors import NoSolution


def _fmt(value) -> Any:
    """Canonical JSON value: Fractions as 'p/q' strings, lists elementwise."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, RhoValue):
        return str(value.exact) if value.exact is not None else value.value
    if isinstance(value, (list, tuple)):
        return [_fmt(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _fmt(v) for k, v in value.items()}
    return value


@dataclass(frozen=True)
class TaskResult:
    task_id: str
    kind: str
    status: str  # "ok" | "error" | "skipped"
    results: dict[str, Any] = field(default_factory=dict)
    provenance: dict[str, str] = field(default_factory=dict)
    error: Optional[str] = None


@dataclass(frozen=True)
class Report:
    plan_name: str
    tasks: tuple[TaskResult, ...]

    def task(self, tid: str) -> TaskResult:
        for t in self.tasks:
            if t.task_id == tid:
                return t
        raise KeyError(tid)

    @property
    def ok(self) -> bool:
        return all(t.status == "ok" for t in self.tasks)

    def overall_spectral_flow(self) -> Optional[int]:
        sf = None
        for t in self.tasks:
            if t.kind == "spectral_flow" and t.status == "ok":
                sf = t.results.get("sf")
        return sf


class _DependencyFailed(ComputationError):
    pass


def _resolve(value, results: dict[str, TaskResult]):
    """Replace {"from": id, "take": key} references by computed values."""
    if isinstance(value, dict) and set(value.keys()) == {"from", "take"}:
        t = results[value["from"]]
        if t.status != "ok":
            raise _DependencyFailed(f"dependency {value['from']!r} did not succeed")
        if value["take"] not in t.results:
            raise ComputationError(
                f"task {value['from']!r} has no result field {value['take']!r}"
            )
        return t.results[value["take"]]
    if isinstance(value, dict):
        return {k: _resolve(v, results) for k, v in value.items()}
    if isinstance(value, list):
        return [_resolve(v, results) for v in value]
    return value


def _rat(value, where="value") -> Fraction:
    problems: list[str] = []
    out = parse_rational(value, where, problems)
    if problems:
        raise ComputationError(problems[0])
    return out


def _int(value, where="value") -> int:
    fr = _rat(value, where)
    if fr.denominator != 1:
        raise ComputationError(f"{where}: expected an integer, got {fr}")
    return int(fr)


# ------------------------------------------------------------------ tasks

def _run_cohomology(task, plan: ComputationPlan):
    pres = plan.presentations[task["presentation"]]
    fam = plan.representations.get(task["representation"]) or plan.paths[
        task["representation"]
    ]
    t = _rat(task.get("t", "1"), "t")
    rep = fam.at(t)
    s = cohomology_summary(pres, rep)
    return (
        {
            "dim_z1": s.dim_z1,
            "dim_h0": s.dim_h0,
            "dim_h1": s.dim_h1,
            "h": s.h,
            "rep_class": s.rep_class.value,
        },
        {
            "dim_z1": "kernel of the Fox-derivative cocycle system",
            "dim_h0": "invariant-vector count from the central/abelian/irreducible trichotomy",
            "dim_h1": "dim Z^1 - 3 + dim H^0",
            "h": "dim H^0 + dim H^1, the zero-mode count",
        },
    )


def _run_path_certificate(task, plan: ComputationPlan):
    fam = plan.paths[task["path"]]
    samples = task.get("samples")
    if samples is None:
        samples = DEFAULT_SAMPLES
    else:
        samples = [_rat(s, "samples") for s in samples]
    cert = path_certificate(fam.presentation, fam, samples)
    return (
        {
            "verdict": cert.verdict,
            "h": cert.h,
            "samples": [str(s) for s in cert.samples],
            "dim_z1": [s.dim_z1 for s in cert.summaries],
            "dim_h0": [s.dim_h0 for s in cert.summaries],
            "dim_h1": [s.dim_h1 for s in cert.summaries],
        },
        {
            "verdict": "rho is unchanged along the path when the kernel-jump "
            "pattern (or constant dimensions) holds at every sample",
            "h": "common zero-mode count at interior samples",
        },
    )


def _run_signature(task, plan, resolved):
    op = task["operation"]
    if op == "kernel_form":
        gens = resolved["generators"]
        boundary = [[_int(x, "boundary") for x in row] for row in resolved["boundary"]]
        form = SymmetricForm.from_rows(
            [[_rat(x, "form") for x in row] for row in resolved["form"]]
        )
        classes, solvable = [], {}
        for target in resolved["targets"]:
            if isinstance(target, str):
                if target not in gens:
                    raise ComputationError(f"unknown target generator {target!r}")
                tvec = [1 if g == target else 0 for g in gens]
                label = target
            else:
                tvec = [_int(x, "target") for x in target]
                label = str(target)
            try:
                classes.append(solve_boundary_class(boundary, tvec))
                solvable[label] = True
            except NoSolution:
                solvable[label] = False
        restricted = restrict_form(form, classes)
        sig = signature(restricted)
        return (
            {
                "classes": [[str(x) for x in v] for v in classes],
                "solvable": solvable,
                "kernel_dim": len(classes),
                "restricted_form": [[str(x) for x in row] for row in restricted.entries],
                "signature": sig,
            },
            {
                "classes": "rational handle combinations bounding each target class",
                "signature": "exact congruence diagonalization of the restricted "
                "intersection form",
            },
        )
    if op == "form_signature":
        form = SymmetricForm.from_rows(
            [[_rat(x, "form") for x in row] for row in resolved["form"]]
        )
        if "basis" in resolved:
            form = restrict_form(form, [[_rat(x) for x in v] for v in resolved["basis"]])
        return (
            {"signature": signature(form)},
            {"signature": "exact congruence diagonalization"},
        )
    if op == "eigenspace_transfer":
        total = _int(resolved["sign_total"], "sign_total")
        quotient = _int(resolved["sign_quotient"], "sign_quotient")
        sign_alpha = eigenspace_signature_from_cover(total, quotient)
        sign_w = _int(resolved.get("sign_w", quotient), "sign_w")
        sign_complex = 2 * sign_alpha
        return (
            {
                "sign_alpha": sign_alpha,
                "sign_complex": sign_complex,
                "sign_w": sign_w,
                "sign_q": sign_w + sign_complex,
            },
            {
                "sign_alpha": "cover signature minus quotient signature "
                "(transfer identifies the +1-eigenspace with the quotient)",
                "sign_q": "Sign W plus the real dimension count of the complex "
                "eigenspace signature",
            },
        )
    if op == "seifert_g_signature":
        A = SeifertMatrix.from_rows(resolved["seifert"])
        m, s = _int(resolved["m"], "m"), _int(resolved["s"], "s")
        quotient = _int(resolved["sign_quotient"], "sign_quotient")
        eig = [hermitian_signature(cg_eigenspace_form(A, m, r)) for r in range(1, m)]
        value = g_signature_from_seifert(A, m, s, quotient)
        return (
            {"value": value, "eigenspace_signatures": eig},
            {"value": "quotient signature plus the character-weighted eigenspace sum"},
        )
    raise ComputationError(f"unknown signature operation {op!r}")


def _run_cs(task, plan, resolved):
    meridians = {
        name: as_path(
            [_rat(c, f"meridians.{name}") for c in spec]
            if isinstance(spec, list)
            else [_rat(spec, f"meridians.{name}")]
        )
        for name, spec in resolved["meridians"].items()
    }
    rows = {
        name: {c: _int(e, "rows") for c, e in row.items()}
        for name, row in resolved["rows"].items()
    }
    longitudes = longitude_path(rows, meridians)
    paths = BoundaryPath(
        {name: (meridians[name], longitudes[name]) for name in rows}
    )
    value = kirk_klassen_cs(paths)
    lift = _int(resolved.get("lift", 0), "lift")
    lifted = cs_lift(value, lift)
    series = {}
    for name in sorted(rows):
        series[name] = {
            "meridian": [str(c) for c in meridians[name].pieces[0][2].coeffs],
            "longitude": [str(c) for c in longitudes[name].pieces[0][2].coeffs],
        }
    return (
        {
            "raw": str(value.raw),
            "mod1": str(value.mod1),
            "lift": lift,
            "lifted": str(lifted),
            "paths": series,
        },
        {
            "raw": "- sum over components of the exact integral of 2 b(t) a'(t)",
            "mod1": "the invariant is defined mod 1",
            "lifted": "integer lift chosen in the plan",
        },
    )


def _parse_fixed_points(spec) -> list:
    out = []
    for item in spec:
        if "isolated" in item:
            t1, t2 = (_rat(x, "isolated") for x in item["isolated"])
            out.append(IsolatedFixedPoint(t1, t2, count=item.get("count", 1)))
        elif "surface" in item:
            out.append(
                FixedSurface(
                    self_intersection=_int(item["surface"]["self_intersection"]),
                    psi_turns=_rat(item["surface"]["psi_turns"]),
                    count=item.get("count", 1),
                )
            )
        else:
            raise ComputationError(f"bad fixed point spec {item!r}")
    return out


def _run_rho_source(source) -> tuple[RhoValue, dict, dict]:
    extras: dict[str, Any] = {}
    prov: dict[str, str] = {}
    if "finite_image" in source:
        spec = source["finite_image"]
        cover = CoverData(
            m=_int(spec["m"], "m"),
            generator_turns=_rat(spec["generator_turns"], "generator_turns"),
            fixed_points={
                int(n): _parse_fixed_points(fp)
                for n, fp in (spec.get("fixed_points") or {}).items()
            },
            defects={int(n): float(v) for n, v in (spec.get("defects") or {}).items()},
        )
        rho = rho_finite_image(cover)
        extras["subtotals_by_order"] = {
            str(order): _fmt(v) for order, v in rho_finite_image_by_order(cover).items()
        }
        prov["rho_terminal"] = (
            "finite-image formula: averaged signature defects weighted by "
            "Tr Ad - 3 over the cyclic cover"
        )
        return rho, extras, prov
    if "lens" in source:
        spec = source["lens"]
        rho = rho_lens_space(_int(spec["p"]), _int(spec["q"]), _int(spec["k"]))
        prov["rho_terminal"] = (
            "lens-space cotangent sum (one fixed point per deck power on the disk)"
        )
        return rho, extras, prov
    if "value" in source:
        return RhoValue.from_exact(_rat(source["value"], "value")), extras, {
            "rho_terminal": "supplied input value"
        }
    if "connected_sum" in source:
        total = RhoValue.from_exact(0)
        for part in source["connected_sum"]:
            if isinstance(part, dict) and ("from" in part or set(part) & {
                "finite_image",
                "lens",
                "value",
                "connected_sum",
            }):
                sub, _, _ = _run_rho_source(part)
            else:
                sub = RhoValue.from_exact(_rat(part, "connected_sum"))
            total = connected_sum_rho(total, sub)
        prov["rho_terminal"] = "connected sum: rho adds over summands"
        return total, extras, prov
    raise ComputationError(f"unknown rho source {sorted(source)!r}")


def _run_rho_pipeline(task, plan, resolved):
    rho_terminal, extras, prov = _run_rho_source(resolved["source"])
    steps = []
    for s in resolved.get("steps", []):
        steps.append(
            CobordismStep(
                label=str(s.get("label", f"step{len(steps)}")),
                sign_w=_int(s["sign_w"], "sign_w"),
                sign_q=_int(s["sign_q"], "sign_q"),
                sign_complex=(
                    _int(s["sign_complex"], "sign_complex")
                    if "sign_complex" in s
                    else None
                ),
            )
        )
    rho = rho_chain(rho_terminal, steps)
    results = {
        "rho_terminal": _fmt(rho_terminal),
        "rho": _fmt(rho),
        "rho_float": rho.value,
        "steps": [
            {"label": s.label, "sign_w": s.sign_w, "sign_q": s.sign_q, "delta": str(s.delta)}
            for s in steps
        ],
        **extras,
    }
    prov = dict(prov)
    prov["rho"] = (
        "terminal rho carried backward through the flat cobordisms: each step "
        "changes rho(new) - rho(old) by 3 Sign W - Sign Q"
    )
    return results, prov


def _run_spectral_flow(task, plan, resolved):
    def rho_arg(v):
        if isinstance(v, float):
            return RhoValue.from_float(v)
        return _rat(v, "rho")

    inp = SpectralFlowInput(
        cs0=_rat(resolved["cs0"], "cs0"),
        cs1=_rat(resolved["cs1"], "cs1"),
        rho0=rho_arg(resolved["rho0"]),
        rho1=rho_arg(resolved["rho1"]),
        h0=_int(resolved["h0"], "h0"),
        h1=_int(resolved["h1"], "h1"),
    )
    res = spectral_flow(inp)
    return (
        {
            "sf": res.sf,
            "sf_mod8": res.sf_mod8,
            "residual": res.residual,
            "zero_mode_convention": res.zero_mode_convention,
        },
        {
            "sf": "8 (CS1 - CS0) + (rho1 - rho0 - h1 - h0)/2, exact",
            "sf_mod8": "from the mod-1 CS difference alone; independent of lifts",
        },
    )


_RUNNERS = {
    "cohomology": lambda task, plan, resolved: _run_cohomology(task, plan),
    "path_certificate": lambda task, plan, resolved: _run_path_certificate(task, plan),
    "signature": _run_signature,
    "cs": _run_cs,
    "rho_pipeline": _run_rho_pipeline,
    "spectral_flow": _run_spectral_flow,
}


def run_plan(plan: ComputationPlan) -> Report:
    """Execute all tasks in dependency order; errors abort only dependents."""
    by_id: dict[str, TaskResult] = {}
    for idx in plan.execution_order:
        task = plan.tasks[idx]
        tid = task["id"]
        try:
            resolved = _resolve({k: v for k, v in task.items() if k != "id"}, by_id)
            results, prov = _RUNNERS[task["kind"]](task, plan, resolved)
            notes = task.get("notes") or {}
            prov = dict(prov)
            for k, v in notes.items():
                prov[k] = str(v)
            by_id[tid] = TaskResult(tid, task["kind"], "ok", results, prov)
        except _DependencyFailed as exc:
            by_id[tid] = TaskResult(tid, task["kind"], "skipped", {}, {}, str(exc))
        except FlatflowError as exc:
            by_id[tid] = TaskResult(tid, task["kind"], "error", {}, {}, str(exc))
    return Report(plan.name, tuple(by_id[t["id"]] for t in plan.tasks))


# ---------------------------------------------------------------- reports

def report_to_dict(report: Report) -> dict:
    return {
        "plan": report.plan_name,
        "tasks": [
            {
                "id": t.task_id,
                "kind": t.kind,
                "status": t.status,
                "results": t.results,
                "provenance": t.provenance,
                **({"error": t.error} if t.error else {}),
            }
            for t in report.tasks
        ],
    }


def report_from_dict(doc: dict) -> Report:
    tasks = tuple(
        TaskResult(
            t["id"],
            t["kind"],
            t["status"],
            t.get("results", {}),
            t.get("provenance", {}),
            t.get("error"),
        )
        for t in doc.get("tasks", [])
    )
    return Report(doc.get("plan", ""), tasks)


def parse_report(text: str) -> Report:
    return report_from_dict(json.loads(text))


def emit_report(report: Report, format: str = "human") -> str:
    """Render a report; 'json' is stable-ordered and round-trips through
    parse_report, 'human' shows each invariant with its provenance."""
    if format == "json":
        return json.dumps(report_to_dict(report), indent=2, sort_keys=True)
    if format != "human":
        raise SchemaError([f"unknown report format {format!r}"])
    lines = [f"plan: {report.plan_name}" if report.plan_name else "plan"]
    for t in report.tasks:
        lines.append("")
        lines.append(f"[{t.task_id}] ({t.kind}) {t.status}")
        if t.error:
            lines.append(f"  error: {t.error}")
        for key, value in t.results.items():
            if key in ("paths", "steps", "classes", "restricted_form"):
                lines.append(f"  {key} = {json.dumps(value, sort_keys=True)}")
            else:
                lines.append(f"  {key} = {value}")
            note = t.provenance.get(key)
            if note:
                lines.append(f"      ({note})")
    sf = report.overall_spectral_flow()
    if sf is not None:
        lines.append("")
        lines.append(f"spectral flow SF = {sf}")
    return "\n".join(lines) + "\n"
