"""Session files: a JSON description of a chart, its data and a list of tasks."""
from __future__ import annotations

import json
import json.decoder
import json.scanner
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from typing import Any, Callable, Dict, List, Optional, Tuple

from .algebroids import (
    PoissonStructure,
    characteristic_foliation,
    from_poisson,
    image_metric,
    invariant_functions,
    kernel_split,
    l_invariance_check,
)
from .cohomology import CoefficientModule, TruncationWindow, d_squared_check, truncated_cohomology_ranks
from .errors import LogalgError, ParseError
from .exact import Ideal, Poly, RationalFunction, make_ring, module_equal, parse_poly
from .forms import Foliation, VectorField, involutivity_check
from .loggeom import (
    DivisorChart,
    atiyah_split_report,
    cond1_check,
    cond1_witness,
    log_derivations,
    normal_module,
    saito_determinant,
    saito_free_check,
)
from .metrics import (
    BilinearMetric,
    hermitian_table,
    induced_connection_on_Y,
    koszul_christoffel,
    levi_civita_check,
    quotient_metric,
)

__all__ = ["Session", "SessionError", "SessionParseError", "Task", "parse_session", "run_session",
           "report_json", "report_text", "bundled_sessions", "load_bundled", "TASKS"]

SCHEMA_KEYS = ("ring", "ideals", "fields", "poisson", "metric", "tasks")


# ---------------------------------------------------------------------------
# position-tracking JSON
# ---------------------------------------------------------------------------

class _PosStr(str):
    pos = 0


class _PosDict(dict):
    pos = 0


class _PosList(list):
    pos = 0


class _Decoder(json.JSONDecoder):
    """JSONDecoder whose strings, objects and arrays remember their source offset."""

    def __init__(self):
        super().__init__()
        base_string, base_object, base_array = self.parse_string, self.parse_object, self.parse_array

        def parse_string(s, end, strict):
            value, new_end = base_string(s, end, strict)
            out = _PosStr(value)
            out.pos = end  # first character after the opening quote
            return out, new_end

        def parse_object(s_and_end, *args):
            value, end = base_object(s_and_end, *args)
            out = _PosDict(value)
            out.pos = s_and_end[1] - 1
            return out, end

        def parse_array(s_and_end, scan_once):
            value, end = base_array(s_and_end, scan_once)
            out = _PosList(value)
            out.pos = s_and_end[1] - 1
            return out, end

        self.parse_string = parse_string
        self.parse_object = parse_object
        self.parse_array = parse_array
        self.scan_once = json.scanner.py_make_scanner(self)


def _line_col(text: str, pos: int) -> Tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


@dataclass
class SessionError:
    message: str
    line: int
    col: int

    def __str__(self):
        return f"{self.line}:{self.col}: {self.message}"


class SessionParseError(LogalgError):
    def __init__(self, errors: List[SessionError]):
        super().__init__("; ".join(str(e) for e in errors))
        self.errors = errors


@dataclass
class Task:
    name: str
    args: Dict[str, Any]


@dataclass
class Session:
    ring: Tuple[str, ...]
    ideals: Dict[str, Ideal] = field(default_factory=dict)
    fields: Dict[str, VectorField] = field(default_factory=dict)
    poisson: Optional[PoissonStructure] = None
    metric: Optional[BilinearMetric] = None
    tasks: List[Task] = field(default_factory=list)


# ---------------------------------------------------------------------------
# tasks
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _TaskSpec:
    run: Callable
    required: Tuple[str, ...] = ()
    optional: Tuple[str, ...] = ()
    ideal_args: Tuple[str, ...] = ()
    field_args: Tuple[str, ...] = ()
    field_list_args: Tuple[str, ...] = ()
    needs: Tuple[str, ...] = ()


def _fmt_field(D: VectorField) -> List[str]:
    return [str(c) for c in D.coeffs]


def _fmt_rf(x) -> Any:
    if isinstance(x, RationalFunction):
        x = x.reduced()
        if x.is_polynomial():
            return str(x.num * x.den.constant_coeff().inverse())
        return {"num": str(x.num), "den": str(x.den)}
    return str(x)


def _algebroid(session: Session):
    return from_poisson(session.poisson)


def _cap(value: int, ctx) -> Tuple[int, bool]:
    cap = ctx["degree_cap"]
    if cap is not None and value > cap:
        return cap, True
    return value, False


def _t_from_poisson(s: Session, args, ctx):
    A = _algebroid(s)
    return {"anchor": [_fmt_field(a) for a in A.anchor],
            "anchor_text": [str(a) for a in A.anchor],
            "invariants": A.validate()}


def _t_l_invariance(s, args, ctx):
    return {"l_invariant": l_invariance_check(_algebroid(s), s.ideals[args["ideal"]])}


def _t_invariant_functions(s, args, ctx):
    d, capped = _cap(int(args.get("d", 2)), ctx)
    basis = invariant_functions(characteristic_foliation(_algebroid(s)), d)
    return {"d": d, "capped": capped, "basis": [str(f) for f in basis]}


def _named_fields(s: Session, args) -> Tuple[List[str], List[VectorField]]:
    if "fields" in args:
        names = list(args["fields"])
        return names, [s.fields[n] for n in names]
    A = _algebroid(s)
    names = [f"H_{v}" for v in s.ring]
    return names, list(A.anchor)


def _t_hermitian_table(s, args, ctx):
    names, fields = _named_fields(s, args)
    H = hermitian_table(fields)
    return {"fields": names,
            "entries": [{"pair": [names[i], names[j]], "value": str(H[i, j])}
                        for i in range(len(names)) for j in range(i, len(names))]}


def _metric(s: Session) -> BilinearMetric:
    if s.metric is not None:
        return s.metric
    return BilinearMetric.identity(s.ring, len(s.ring))


def _t_image_metric(s, args, ctx):
    mode = args.get("mode", "naive")
    A = _algebroid(s)
    g = _metric(s)
    r = A.rank
    table = []
    for i in range(r):
        row = []
        for j in range(r):
            val = image_metric(A, g, A.anchor[i], A.anchor[j], A.basis(i), A.basis(j), mode)
            row.append(_fmt_rf(val))
        table.append(row)
    return {"mode": mode, "preimages": "basis", "table": table}


def _t_kernel_split(s, args, ctx):
    ks = kernel_split(_algebroid(s), _metric(s))
    return {"kernel": [[str(c) for c in v] for v in ks.kernel.gens],
            "complement": [[str(c) for c in v] for v in ks.complement.gens],
            "spans": ks.spans}


def _t_log_derivations(s, args, ctx):
    L = log_derivations(s.ideals[args["ideal"]])
    out = {"generators": [_fmt_field(D) for D in L.gens],
           "generators_text": [str(D) for D in L.gens],
           "witnesses_ok": L.check_witnesses(),
           "involutive": L.is_involutive()}
    if "compare" in args:
        other = [s.fields[n] for n in args["compare"]]
        from .exact import Submodule
        ref = Submodule([D.coeffs for D in other], rank=len(s.ring), ring=s.ring)
        out["equals_compare"] = module_equal(L.module, ref)
    return out


def _chart(s: Session, name: str) -> DivisorChart:
    gens = [g for g in s.ideals[name].gens if not g.is_zero()]
    if len(gens) != 1:
        raise LogalgError(f"ideal {name!r} is not principal")
    return DivisorChart(gens[0])


def _t_cond1(s, args, ctx):
    ch = _chart(s, args["ideal"])
    return {"cond1": cond1_check(ch), "witness": str(cond1_witness(ch))}


def _t_saito(s, args, ctx):
    ch = _chart(s, args["ideal"])
    gens = [s.fields[n] for n in args["fields"]] if "fields" in args else log_derivations(ch.ideal).gens
    return {"free": saito_free_check(gens, ch), "determinant": str(saito_determinant(gens))}


def _t_normal_module(s, args, ctx):
    rep = normal_module(s.ideals[args["ideal"]])
    return {"generators": [[str(c) for c in v] for v in rep.gens],
            "gradient_generators": [[str(c) for c in v] for v in rep.gradient_module.gens],
            "equals_gradient": rep.equals_gradient,
            "equals_gradient_plus_zero": rep.equals_gradient_plus_zero,
            "gradients_are_members": rep.gradients_are_members}


def _t_atiyah(s, args, ctx):
    return {"checks": atiyah_split_report(_chart(s, args["ideal"]))}


def _t_koszul(s, args, ctx):
    A = _algebroid(s)
    g = _metric(s)
    conn = koszul_christoffel(A, g)
    nonzero = []
    for k in range(conn.rank):
        for i in range(conn.rank):
            for j in range(conn.rank):
                if not conn.gamma[k][i][j].is_zero():
                    nonzero.append({"k": k + 1, "i": i + 1, "j": j + 1, "value": _fmt_rf(conn.gamma[k][i][j])})
    return {"christoffel": nonzero, "levi_civita": levi_civita_check(conn, A, g)}


def _t_metric(s, args, ctx):
    g = _metric(s)
    return {"determinant": str(g.det()), "nondegenerate": g.nondegenerate, "inverse": [
        [_fmt_rf(x) for x in row] for row in g.inverse()]}


def _t_d_squared(s, args, ctx):
    A = _algebroid(s)
    dmax, capped = _cap(int(args.get("dmax", 2)), ctx)
    return {"dmax": dmax, "capped": capped, "d_squared_zero": d_squared_check(A, CoefficientModule.trivial(A), dmax)}


def _t_cohomology(s, args, ctx):
    A = _algebroid(s)
    dmax, capped = _cap(int(args.get("dmax", 2)), ctx)
    ranks = truncated_cohomology_ranks(A, CoefficientModule.trivial(A), TruncationWindow(dmax),
                                       all_degrees=bool(args.get("all_degrees", False)))
    return {"dmax": dmax, "capped": capped, "ranks": [r.as_dict() for r in ranks]}


def _t_quotient_metric(s, args, ctx):
    D1, D2 = (s.fields[n] for n in args["fields"])
    return {"value": str(quotient_metric(D1, D2, s.ideals[args["ideal"]]))}


def _t_induced_connection(s, args, ctx):
    D1, D2 = (s.fields[n] for n in args["fields"])
    return {"field": _fmt_field(induced_connection_on_Y(D1, D2, s.ideals[args["ideal"]]))}


def _t_involutivity(s, args, ctx):
    return {"involutive": involutivity_check([s.fields[n] for n in args["fields"]])}


def _t_foliation_member(s, args, ctx):
    """Membership of a named field in the characteristic foliation."""
    F = characteristic_foliation(_algebroid(s))
    return {"field": args["field"], "member": F.contains(s.fields[args["field"]])}


TASKS: Dict[str, _TaskSpec] = {
    "from_poisson": _TaskSpec(_t_from_poisson, needs=("poisson",)),
    "l_invariance": _TaskSpec(_t_l_invariance, ("ideal",), ideal_args=("ideal",), needs=("poisson",)),
    "invariant_functions": _TaskSpec(_t_invariant_functions, (), ("d",), needs=("poisson",)),
    "hermitian_table": _TaskSpec(_t_hermitian_table, (), ("fields",), field_list_args=("fields",)),
    "image_metric": _TaskSpec(_t_image_metric, (), ("mode",), needs=("poisson",)),
    "kernel_split": _TaskSpec(_t_kernel_split, needs=("poisson",)),
    "log_derivations": _TaskSpec(_t_log_derivations, ("ideal",), ("compare",), ideal_args=("ideal",),
                                 field_list_args=("compare",)),
    "cond1": _TaskSpec(_t_cond1, ("ideal",), ideal_args=("ideal",)),
    "saito": _TaskSpec(_t_saito, ("ideal",), ("fields",), ideal_args=("ideal",), field_list_args=("fields",)),
    "normal_module": _TaskSpec(_t_normal_module, ("ideal",), ideal_args=("ideal",)),
    "atiyah": _TaskSpec(_t_atiyah, ("ideal",), ideal_args=("ideal",)),
    "koszul": _TaskSpec(_t_koszul, needs=("poisson",)),
    "metric": _TaskSpec(_t_metric),
    "d_squared": _TaskSpec(_t_d_squared, (), ("dmax",), needs=("poisson",)),
    "cohomology": _TaskSpec(_t_cohomology, (), ("dmax", "all_degrees"), needs=("poisson",)),
    "quotient_metric": _TaskSpec(_t_quotient_metric, ("ideal", "fields"), ideal_args=("ideal",),
                                 field_list_args=("fields",)),
    "induced_connection": _TaskSpec(_t_induced_connection, ("ideal", "fields"), ideal_args=("ideal",),
                                    field_list_args=("fields",)),
    "involutivity": _TaskSpec(_t_involutivity, ("fields",), field_list_args=("fields",)),
    "foliation_member": _TaskSpec(_t_foliation_member, ("field",), field_args=("field",), needs=("poisson",)),
}


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def parse_session(text: str) -> Session:
    """Validate a session document; raises SessionParseError listing every problem found."""
    errors: List[SessionError] = []

    def err(msg, pos):
        line, col = _line_col(text, pos)
        errors.append(SessionError(msg, line, col))

    def pos_of(obj, default=0):
        return getattr(obj, "pos", default)

    if not text.strip():
        raise SessionParseError([SessionError("missing ring declaration", 1, 1)])
    try:
        doc = _Decoder().decode(text)
    except json.JSONDecodeError as exc:
        raise SessionParseError([SessionError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno)]) from None
    if not isinstance(doc, dict):
        raise SessionParseError([SessionError("session must be a JSON object", 1, 1)])
    for key in doc:
        if key not in SCHEMA_KEYS:
            err(f"unknown key {key!r}", pos_of(doc))
    if "ring" not in doc:
        err("missing ring declaration", pos_of(doc))
        raise SessionParseError(errors)
    ring_decl = doc["ring"]
    try:
        if not isinstance(ring_decl, list) or not all(isinstance(v, str) for v in ring_decl):
            raise ValueError("ring must be a list of variable names")
        ring = make_ring(ring_decl)
    except (ValueError, LogalgError) as exc:
        err(str(exc), pos_of(ring_decl))
        raise SessionParseError(errors) from None

    def poly(obj) -> Optional[Poly]:
        if not isinstance(obj, str):
            err("expected a polynomial string", pos_of(obj))
            return None
        try:
            return parse_poly(obj, ring)
        except ParseError as exc:
            err(f"malformed polynomial: {exc.message}", pos_of(obj) + exc.pos)
            return None

    session = Session(ring)

    ideals = doc.get("ideals", {})
    if not isinstance(ideals, dict):
        err("ideals must be an object", pos_of(ideals))
        ideals = {}
    for name, gens in ideals.items():
        if not isinstance(gens, list) or not gens:
            err(f"ideal {name!r} needs a nonempty list of generators", pos_of(gens, pos_of(ideals)))
            continue
        ps = [poly(g) for g in gens]
        if all(p is not None for p in ps):
            session.ideals[name] = Ideal(ps, ring=ring)

    fields = doc.get("fields", {})
    if not isinstance(fields, dict):
        err("fields must be an object", pos_of(fields))
        fields = {}
    for name, coeffs in fields.items():
        if not isinstance(coeffs, list) or len(coeffs) != len(ring):
            err(f"field {name!r} needs {len(ring)} coefficients", pos_of(coeffs, pos_of(fields)))
            continue
        ps = [poly(c) for c in coeffs]
        if all(p is not None for p in ps):
            session.fields[name] = VectorField(tuple(ps))

    if doc.get("poisson") is not None:
        rows = doc["poisson"]
        n = len(ring)
        if not isinstance(rows, list) or len(rows) != n - 1 or any(
                not isinstance(row, list) or len(row) != n - 1 - i for i, row in enumerate(rows)):
            err(f"poisson must list the strict upper triangle ({n - 1} rows of decreasing length)",
                pos_of(rows))
        else:
            parsed = [[poly(x) for x in row] for row in rows]
            if all(p is not None for row in parsed for p in row):
                try:
                    session.poisson = PoissonStructure.from_upper(parsed, ring)
                except (ValueError, LogalgError) as exc:
                    err(str(exc), pos_of(rows))

    if doc.get("metric") is not None:
        rows = doc["metric"]
        if not isinstance(rows, list) or not rows or any(
                not isinstance(row, list) or len(row) != len(rows) for row in rows):
            err("metric must be a square list of rows", pos_of(rows))
        else:
            parsed = [[poly(x) for x in row] for row in rows]
            if all(p is not None for row in parsed for p in row):
                try:
                    session.metric = BilinearMetric(parsed)
                except ValueError as exc:
                    err(str(exc), pos_of(rows))

    tasks = doc.get("tasks", [])
    if not isinstance(tasks, list):
        err("tasks must be a list", pos_of(tasks))
        tasks = []
    for entry in tasks:
        if not isinstance(entry, dict) or not isinstance(entry.get("task"), str):
            err("each task needs a 'task' name", pos_of(entry, pos_of(tasks)))
            continue
        name = entry["task"]
        spec = TASKS.get(name)
        if spec is None:
            err(f"unknown task {name!r}", pos_of(name))
            continue
        args = entry.get("args", {})
        if not isinstance(args, dict):
            err("args must be an object", pos_of(args, pos_of(entry)))
            continue
        ok = True
        for key in args:
            if key not in spec.required + spec.optional:
                err(f"task {name!r} does not take argument {key!r}", pos_of(args))
                ok = False
        for key in spec.required:
            if key not in args:
                err(f"task {name!r} needs argument {key!r}", pos_of(entry))
                ok = False
        for key in spec.ideal_args:
            if key in args and args[key] not in session.ideals:
                err(f"unresolved ideal name {args[key]!r}", pos_of(args[key], pos_of(args)))
                ok = False
        for key in spec.field_args:
            if key in args and args[key] not in session.fields:
                err(f"unresolved field name {args[key]!r}", pos_of(args[key], pos_of(args)))
                ok = False
        for key in spec.field_list_args:
            if key in args:
                if not isinstance(args[key], list):
                    err(f"argument {key!r} must be a list of field names", pos_of(args[key], pos_of(args)))
                    ok = False
                    continue
                for n in args[key]:
                    if n not in session.fields:
                        err(f"unresolved field name {n!r}", pos_of(n, pos_of(args)))
                        ok = False
        for need in spec.needs:
            if need == "poisson" and "poisson" not in doc:
                err(f"task {name!r} needs a poisson declaration", pos_of(name))
                ok = False
        if ok:
            session.tasks.append(Task(str(name), _plain(args)))
    if errors:
        raise SessionParseError(errors)
    return session


def _plain(obj):
    """Strip the position-tracking subclasses."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_plain(v) for v in obj]
    if isinstance(obj, str):
        return str(obj)
    return obj


# ---------------------------------------------------------------------------
# running
# ---------------------------------------------------------------------------

def _env_degree_cap() -> Optional[int]:
    raw = os.environ.get("LOGALG_DEGREE_CAP")
    if raw is None or raw == "":
        return None
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"LOGALG_DEGREE_CAP must be an integer, got {raw!r}") from None
    if cap < 0:
        raise ValueError("LOGALG_DEGREE_CAP must be nonnegative")
    return cap


def _run_task(session: Session, index: int, task: Task, ctx, timings: bool) -> dict:
    record = {"index": index, "task": task.name, "args": task.args}
    start = time.perf_counter()
    try:
        record["result"] = TASKS[task.name].run(session, task.args, ctx)
        record["status"] = "ok"
    except (LogalgError, ValueError, ZeroDivisionError) as exc:
        record["status"] = "failed"
        record["error"] = f"{type(exc).__name__}: {exc}"
    if timings:
        record["wall_time"] = round(time.perf_counter() - start, 6)
    return record


def run_session(session: Session, jobs: int = 1, degree_cap: Optional[int] = None,
                timings: bool = False) -> dict:
    """Execute every task; the report lists them in declaration order whatever ``jobs`` is."""
    if degree_cap is None:
        degree_cap = _env_degree_cap()
    ctx = {"degree_cap": degree_cap}
    items = list(enumerate(session.tasks, start=1))
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(lambda it: _run_task(session, it[0], it[1], ctx, timings), items))
    else:
        records = [_run_task(session, i, t, ctx, timings) for i, t in items]
    failed = sum(1 for r in records if r["status"] != "ok")
    return {
        "ring": list(session.ring),
        "degree_cap": degree_cap,
        "tasks": records,
        "summary": {"total": len(records), "ok": len(records) - failed, "failed": failed},
    }


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


def report_text(report: dict) -> str:
    lines = [f"ring: {', '.join(report['ring'])}"]
    for rec in report["tasks"]:
        tag = "ok" if rec["status"] == "ok" else "FAILED"
        line = f"[{tag}] {rec['index']}. {rec['task']}"
        if rec["status"] != "ok":
            line += f": {rec['error']}"
        lines.append(line)
    s = report["summary"]
    lines.append(f"{s['ok']}/{s['total']} tasks ok")
    return "\n".join(lines) + "\n"


def bundled_sessions() -> List[str]:
    root = resources.files("logalg") / "sessions"
    return sorted(p.name for p in root.iterdir() if p.name.endswith(".session"))


def load_bundled(name: str) -> str:
    if not name.endswith(".session"):
        name += ".session"
    return (resources.files("logalg") / "sessions" / name).read_text(encoding="utf-8")
