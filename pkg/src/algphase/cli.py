"""Command-line entry point.

Exit status: 0 on success, 1 when an input fails validation or a check
fails, 2 on usage errors.  Nothing printed or written depends on timing,
so repeated invocations are byte-identical.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Any, Callable

from . import io
from .corpus import build
from .filtrep import (
    enumerate_reps,
    phi_assemble,
    regular_rep,
    rep_counts,
    rep_validate,
    restriction_bijection,
    testing_object_search,
)
from .heisenberg import flagship_suite
from .maps import BudgetExceeded, iso_certify, iso_search
from .phase import (
    PhaseError,
    boundary_quotient,
    extension_inclusion,
    generator_depth,
    phase_invariants,
    square_zero_extend,
    validate_phase,
)
from .reconstruct import (
    RawRep,
    dichotomy_classify,
    local_reconstruction_check,
    no_hidden_structure_check,
    reconstruct_phase,
    reconstruction_report,
)

DEFAULT_BUDGET = 10**6


class CheckFailed(Exception):
    """Raised to turn a failed validation into exit status 1."""


class StageError(RuntimeError):
    def __init__(self, stage: str, exc: BaseException):
        super().__init__(f"stage '{stage}' failed: {exc}")
        self.stage = stage


def _emit(obj: Any, out: str | None) -> None:
    text = io.dumps(obj)
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_validated(path: str):
    p = io.load_phase(path)
    report = validate_phase(p)
    if not report.ok:
        f = report.first_failure
        raise CheckFailed(f"{path}: {f.name}: {f.detail}")
    return p


# -- the flagship demo ------------------------------------------------------------------------


def _status(ok: bool | None) -> str:
    return "unknown" if ok is None else ("pass" if ok else "fail")


def demo_flagship(n: int = 1, b_dim: int = 1, budget: int = DEFAULT_BUDGET, mdim_max: int = 2) -> dict:
    """Run the full flagship pipeline and return one consolidated report.

    Each entry of ``checks`` is ``pass``, ``fail`` or ``unknown``; an
    exception inside a stage is re-raised as ``StageError`` naming it.
    """
    checks: list[dict] = []

    def stage(name: str, fn: Callable[[], Any]) -> Any:
        try:
            return fn()
        except StageError:
            raise
        except Exception as exc:  # noqa: BLE001 - any failure aborts with the stage named
            raise StageError(name, exc) from exc

    def record(name: str, ok: bool | None, **detail: Any) -> None:
        checks.append({"check": name, "status": _status(ok), **detail})

    suite = stage("build", lambda: flagship_suite(n, b_dim, budget))
    phases = {"R": suite.R_strong, "P": suite.P_weak, "P_ext": suite.P_ext, "R_ext": suite.R_ext}
    for name, ph in phases.items():
        rep = stage("validate", lambda ph=ph: validate_phase(ph))
        record(f"validate {name}", rep.ok, dim=ph.dim, layer_dims=ph.layer_dims)

    qi = suite.quotient_iso
    detail: dict[str, Any] = {"search": qi.status}
    if qi.map is not None:
        detail["certificate"] = io.map_to_json(qi.map)
        detail["certified"] = bool(iso_certify(qi.map))
    record("P/F[1] isomorphic to R", None if qi.status == "unknown" else qi.status == "yes" and detail["certified"], **detail)

    def kernels():
        return {name: phi_assemble(ph, [regular_rep(ph)])[1] for name, ph in phases.items()}

    ks = stage("kernels", kernels)
    for name, ph in phases.items():
        record(f"kernel equals boundary for {name}", ks[name] == ph.boundary, kernel_dim=ks[name].dim)
    record("kernel gap P_ext vs P", ks["P_ext"].dim - ks["P"].dim == b_dim, gap=ks["P_ext"].dim - ks["P"].dim)
    record("kernel gap R_ext vs R", ks["R_ext"].dim - ks["R"].dim == b_dim, gap=ks["R_ext"].dim - ks["R"].dim)

    def counts(base, ext):
        try:
            small, big = enumerate_reps(base, mdim_max, budget), enumerate_reps(ext, mdim_max, budget)
        except BudgetExceeded as exc:
            return None, str(exc)
        bij = restriction_bijection(big, small, extension_inclusion(base, ext))
        return (rep_counts(small), rep_counts(big), len(bij)), ""

    for base, ext in (("P", "P_ext"), ("R", "R_ext")):
        res, why = stage("rep counts", lambda b=base, e=ext: counts(phases[b], phases[e]))
        if res is None:
            record(f"rep counts {base} vs {ext}", None, reason=why)
        else:
            cb, ce, size = res
            record(f"rep counts {base} vs {ext}", cb == ce, mdim_max=mdim_max, counts=[_keys(cb), _keys(ce)], bijection_size=size)
        lb, le = phases[base].layer_dims, phases[ext].layer_dims
        record(f"boundary layers {base} vs {ext} differ", lb != le, layer_dims=[lb, le])

    t, cert = stage("testing object", lambda: testing_object_search(suite.P_weak, budget))
    tk = stage("testing object", lambda: phi_assemble(suite.P_weak, [t])[1])
    record("testing object separates P", tk == suite.P_weak.boundary, mdim=t.mdim, kernel_dim=tk.dim)
    record("testing object minimal", True if cert.certified else None, certificate=cert.to_dict())

    for name in ("P", "P_ext"):
        lr = stage("island", lambda name=name: local_reconstruction_check(phases[name], budget))
        ok = True if lr.exact else (None if lr.island_status != "found" or lr.iso_status == "unknown" else False)
        record(f"island reconstruction {name}", ok, **lr.to_dict())

    expected = {"R": "Strong", "P": f"Weak({suite.P_weak.depth})", "P_ext": f"Weak({suite.P_ext.depth})", "R_ext": "Weak(1)"}
    for name, ph in phases.items():
        verdict = str(stage("dichotomy", lambda ph=ph: dichotomy_classify(ph)))
        record(f"dichotomy {name}", verdict == expected[name] and (verdict == "Strong") == ph.is_strong(), verdict=verdict)

    def round_trip():
        try:
            rebuilt = reconstruct_phase([regular_rep(suite.P_weak)], budget)
        except BudgetExceeded as exc:
            return None, str(exc)
        q, _ = boundary_quotient(suite.P_weak)
        return iso_search(rebuilt, q, budget), ""

    rt, why = stage("reconstruction", round_trip)
    if rt is None or rt.status == "unknown":
        record("reconstruction round-trip P", None, reason=why or rt.reason)
    else:
        extra = {"certificate": io.map_to_json(rt.map)} if rt.map is not None else {"reason": rt.reason}
        record("reconstruction round-trip P", rt.status == "yes" and bool(iso_certify(rt.map)), **extra)

    nh = stage("no hidden structure", lambda: no_hidden_structure_check(suite.P_weak, suite.P_ext, budget, mdim_max))
    record(
        "no hidden structure P vs P_ext",
        None if nh.verdict == "unknown" else nh.verdict == "distinguished",
        verdict=nh.verdict,
        invariant=nh.invariant,
        rep_counts=[None if c is None else _keys(c) for c in nh.details["rep_counts"]],
    )

    statuses = [c["status"] for c in checks]
    return {
        "schema": io.SCHEMA,
        "kind": "flagship-demo",
        "parameters": {"n": n, "b_dim": b_dim, "budget": budget, "mdim_max": mdim_max},
        "dims": {name: ph.dim for name, ph in phases.items()},
        "checks": checks,
        "summary": {s: statuses.count(s) for s in ("pass", "fail", "unknown")},
    }


def _keys(d: dict) -> dict:
    return {str(k): v for k, v in sorted(d.items())}


# -- verbs -------------------------------------------------------------------------------------


def cmd_build(a) -> int:
    p = build(a.spec)
    if a.bdim:
        p = square_zero_extend(p, a.bdim)
    _emit(io.phase_to_json(p), a.out)
    return 0


def cmd_validate(a) -> int:
    data = io.read_json(a.file)
    if isinstance(data, dict) and "action" in data:
        report = rep_validate(io.rep_from_json(data, Path(a.file).parent))
    else:
        report = validate_phase(io.phase_from_json(data))
    print(report)
    if not report.ok:
        f = report.first_failure
        print(f"invalid: {f.name}: {f.detail}", file=sys.stderr)
        return 1
    return 0


def cmd_invariants(a) -> int:
    p = _load_validated(a.file)
    inv = phase_invariants(p)
    inv.update(depth=p.depth, generator_depth=generator_depth(p), dichotomy=str(dichotomy_classify(p)), boundary_dim=p.boundary.dim)
    _emit(inv, a.out)
    return 0


def cmd_quotient(a) -> int:
    q, _ = boundary_quotient(_load_validated(a.file))
    _emit(io.phase_to_json(q), a.out)
    return 0


def cmd_extend(a) -> int:
    _emit(io.phase_to_json(square_zero_extend(_load_validated(a.file), a.bdim)), a.out)
    return 0


def cmd_rep(a) -> int:
    p = _load_validated(a.file)
    ref = str(Path(a.file))
    if a.rep_verb == "regular":
        _emit(io.rep_to_json(regular_rep(p), ref), a.out)
        return 0
    reps = enumerate_reps(p, a.maxdim, a.budget)
    _emit({"counts": _keys(rep_counts(reps)), "reps": [io.rep_to_json(r, ref) for r in reps]}, a.out)
    return 0


def cmd_reconstruct(a) -> int:
    raws = []
    for path in a.reps:
        r = io.load_rep(path)
        report = rep_validate(r)
        if not report.ok:
            f = report.first_failure
            raise CheckFailed(f"{path}: {f.name}: {f.detail}")
        raws.append(RawRep.of(r))
    p = reconstruct_phase(raws, a.budget, keep_boundary=a.keep_boundary)
    _emit(io.phase_to_json(p), a.out)
    return 0


def cmd_testing_object(a) -> int:
    p = _load_validated(a.file)
    t, cert = testing_object_search(p, a.budget)
    _emit({"rep": io.rep_to_json(t, str(Path(a.file))), "certificate": cert.to_dict()}, a.out)
    return 0


def cmd_iso(a) -> int:
    p, q = _load_validated(a.a), _load_validated(a.b)
    if a.check:
        m = io.load_map(a.check)
        cert = iso_certify(m)
        if m.source != p or m.target != q:
            print("witness does not connect the given phases")
            return 1
        print("certified" if cert else f"not certified: {cert.reason}")
        return 0 if cert else 1
    res = iso_search(p, q, a.budget)
    print(res.status + (f": {res.reason}" if res.reason else ""))
    if a.witness and res.map is not None:
        io.save_map(a.witness, res.map)
    return 0


def cmd_report(a) -> int:
    rep = reconstruction_report(_load_validated(a.file), a.budget)
    _emit(rep.to_dict(), a.out)
    return 0


def cmd_demo(a) -> int:
    report = demo_flagship(a.n, a.bdim, a.budget, a.maxdim)
    if a.out:
        io.write_json(a.out, report)
    for c in report["checks"]:
        print(f"{c['status'].upper():8s}{c['check']}")
    s = report["summary"]
    print(f"{s['pass']} passed, {s['fail']} failed, {s['unknown']} unknown")
    if s["unknown"]:
        print("warning: some checks ran out of budget and are reported as unknown", file=sys.stderr)
    return 1 if s["fail"] else 0


def make_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="algphase", description="Filtered GF(2) algebras: build, validate, compare, reconstruct.")
    sub = ap.add_subparsers(dest="verb", required=True)

    def add(name: str, fn, help_: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_)
        sp.set_defaults(fn=fn)
        return sp

    def out(sp):
        sp.add_argument("-o", "--out", help="write to this file instead of standard output")

    def budget(sp):
        sp.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="search step budget (default 10^6)")

    sp = add("build", cmd_build, "build a phase: unit, dual or heisenberg:n=N,k=K[,cocycle=C]")
    sp.add_argument("spec")
    sp.add_argument("--bdim", type=int, default=0, help="adjoin a square-zero block of this dimension")
    out(sp)

    sp = add("validate", cmd_validate, "check a phase or representation file")
    sp.add_argument("file")

    sp = add("invariants", cmd_invariants, "dimensions, layers, depth and dichotomy verdict")
    sp.add_argument("file")
    out(sp)

    sp = add("quotient", cmd_quotient, "quotient by the boundary ideal")
    sp.add_argument("file")
    out(sp)

    sp = add("extend", cmd_extend, "square-zero extension")
    sp.add_argument("file")
    sp.add_argument("--bdim", type=int, default=1)
    out(sp)

    sp = add("rep", cmd_rep, "representations of a phase")
    rsub = sp.add_subparsers(dest="rep_verb", required=True)
    r1 = rsub.add_parser("regular", help="regular module of the boundary quotient")
    r1.add_argument("file")
    out(r1)
    r2 = rsub.add_parser("enumerate", help="all terminating representations up to a dimension")
    r2.add_argument("file")
    r2.add_argument("--maxdim", type=int, default=2, choices=(1, 2, 3))
    budget(r2)
    out(r2)

    sp = add("reconstruct", cmd_reconstruct, "rebuild a phase from representation files")
    sp.add_argument("--reps", nargs="+", required=True)
    sp.add_argument("--keep-boundary", action="store_true", help="keep the degree >= 1 operators instead of collapsing them")
    budget(sp)
    out(sp)

    sp = add("testing-object", cmd_testing_object, "minimal separating representation with certificate")
    sp.add_argument("file")
    budget(sp)
    out(sp)

    sp = add("iso", cmd_iso, "search for or certify an isomorphism A -> B")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--witness", help="write a found isomorphism to this file")
    sp.add_argument("--check", help="certify an existing witness file instead of searching")
    budget(sp)

    sp = add("report", cmd_report, "reconstruction report with inline certificates")
    sp.add_argument("file")
    budget(sp)
    out(sp)

    sp = add("demo", cmd_demo, "end-to-end demo")
    dsub = sp.add_subparsers(dest="demo_name", required=True)
    d1 = dsub.add_parser("flagship", help="strong vs weak Heisenberg phases and their extensions")
    d1.add_argument("--n", type=int, default=1)
    d1.add_argument("--bdim", type=int, default=1)
    d1.add_argument("--maxdim", type=int, default=2, choices=(1, 2, 3))
    budget(d1)
    out(d1)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.fn(args)
    except CheckFailed as exc:
        print(f"invalid: {exc}", file=sys.stderr)
        return 1
    except (io.FormatError, PhaseError, StageError, BudgetExceeded, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
