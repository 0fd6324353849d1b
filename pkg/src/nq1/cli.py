"""Command-line front end: ``nq1 <command> <file> [options]``.

Exit codes: 0 when every check passes, 1 when a mathematical check fails
(witnesses are printed), 2 for input or usage errors.  JSON reports carry
``"schema": 1`` and are written with sorted keys, so identical inputs give
byte-identical reports.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from typing import Sequence

from .algebroid import NotHomologicalError, build_q, extract_algebroid, verify_algebroid_axioms
from .distributions import (ClassicalDataError, dist_is_involutive, dist_is_q_invariant, dist_to_classical,
                            dist_validate, sample_points)
from .dsl import DSLError, Model, load, render_algebroid, render_manifold
from .imfoliation import FlatFrameUnavailable, IMFoliation, distribution_from_imf, imf_check_axioms
from .lie2 import action_check_constraints, action_closure_check, action_distribution, strict_action_check
from .polynomial import SignatureError
from .reduction import ReductionError, ReductionSetting, reduce
from .report import CheckResult
from .vector_fields import DegreeError, vf_is_homological

SCHEMA = 1
COMMANDS = ("check-q", "extract-algebroid", "build-q", "analyze-distribution", "check-imfoliation",
            "check-action", "reduce")


class InputError(Exception):
    pass


@dataclass
class Outcome:
    report: dict
    lines: list[str] = field(default_factory=list)
    ok: bool = True


def _checks_json(checks: Sequence[CheckResult]) -> list[dict]:
    return [c.to_json() for c in checks]


def _check_lines(checks: Sequence[CheckResult], indent: str = "  ") -> list[str]:
    out = []
    for c in checks:
        out.append(f"{indent}{c.name}: {'pass' if c.ok else 'fail'}")
        if c.witness is not None:
            out.append(f"{indent}  witness: {json.dumps(c.witness, sort_keys=True)}")
    return out


def _need_q(m: Model):
    Q = m.Q
    if Q is None:
        raise InputError("the document defines neither a q_field nor an algebroid")
    return Q


def _select(items, name: str | None, what: str):
    if not items:
        raise InputError(f"the document has no {what} block")
    if name is None:
        return items
    chosen = [it for it in items if it.name == name]
    if not chosen:
        raise InputError(f"no {what} block named {name!r}")
    return chosen


def _setting(m: Model, args) -> ReductionSetting:
    base = m.settings or ReductionSetting()
    st = ReductionSetting(base.mode, base.F_coords, base.flat_frame, base.max_xi_degree, base.max_base_degree)
    if args.max_xi_degree is not None:
        st.max_xi_degree = args.max_xi_degree
    if args.max_base_degree is not None:
        st.max_base_degree = args.max_base_degree
    return st


def _points(m: Model, args):
    return sample_points(m.n, args.samples, args.seed)


# ---------------------------------------------------------------------------
# commands


def cmd_check_q(m: Model, args) -> Outcome:
    Q = _need_q(m)
    hc = vf_is_homological(Q)
    rep = {"Q": str(Q), "status": "pass" if hc.ok else "fail"}
    lines = [f"Q = {Q}", f"[Q,Q] = 0: {'pass' if hc.ok else 'fail'}"]
    if not hc.ok:
        name, val = hc.witness
        rep["witness"] = {"generator": name, "value": str(val)}
        lines.append(f"  witness: [Q,Q]({name}) = {val}")
    return Outcome(rep, lines, hc.ok)


def _axiom_lines(report) -> list[str]:
    out = []
    for c in report.checks:
        out.append(f"  {c.axiom}: {c.status}")
        if c.witness is not None:
            out.append(f"    witness: {c.witness}")
    return out


def cmd_extract_algebroid(m: Model, args) -> Outcome:
    if m.q_field is None:
        raise InputError("extract-algebroid needs a q_field block")
    Q = m.q_field
    try:
        A = extract_algebroid(Q, check=True)
    except NotHomologicalError as exc:
        name, val = exc.witness
        return Outcome({"status": "fail", "witness": {"generator": name, "value": str(val)}},
                       [f"Q is not homological: [Q,Q]({name}) = {val}"], False)
    axioms = verify_algebroid_axioms(A)
    rep = {"algebroid": A.describe(), "axioms": axioms.to_json(), "status": "pass" if axioms.ok else "fail"}
    lines = render_manifold(A.n, A.r) + render_algebroid(A) + ["# algebroid axioms"] + \
        ["#" + line for line in _axiom_lines(axioms)]
    return Outcome(rep, lines, axioms.ok)


def cmd_build_q(m: Model, args) -> Outcome:
    if m.algebroid is None:
        raise InputError("build-q needs an algebroid block")
    A = m.algebroid
    Q = build_q(A)
    hc = vf_is_homological(Q)
    axioms = verify_algebroid_axioms(A)
    ok = hc.ok and axioms.ok
    rep = {"Q": str(Q), "homological": "pass" if hc.ok else "fail", "axioms": axioms.to_json(),
           "status": "pass" if ok else "fail"}
    lines = [f"q_field {{ Q = {Q} }}", f"# [Q,Q] = 0: {'pass' if hc.ok else 'fail'}"]
    if not hc.ok:
        name, val = hc.witness
        rep["witness"] = {"generator": name, "value": str(val)}
        lines.append(f"#   witness: [Q,Q]({name}) = {val}")
    lines += ["# algebroid axioms"] + ["#" + line for line in _axiom_lines(axioms)]
    if hc.ok != axioms.ok:
        lines.append("# warning: the two routes disagree")
    return Outcome(rep, lines, ok)


def cmd_analyze_distribution(m: Model, args) -> Outcome:
    specs = _select(m.distributions, args.block, "distribution")
    Q = m.Q
    pts = _points(m, args)
    reports, lines, ok = [], [], True
    for item in specs:
        D = dist_validate(item.generators, m.n, m.r, item.labels, points=pts)
        checks = [CheckResult("distribution", D.certified,
                              None if D.certified else {"status": D.status,
                                                        "reason": D.details.get("reason", ""),
                                                        "point": [str(v) for v in D.failing_point]})]
        checks.append(dist_is_involutive(D))
        if Q is not None:
            checks.append(dist_is_q_invariant(D, Q))
        rep = {"name": item.name, "distribution": D.describe(), "checks": _checks_json(checks)}
        lines.append(f"distribution {item.name or ''}".rstrip() + f": {D.status}")
        lines += _check_lines(checks)
        if all(c.ok for c in checks):
            try:
                T, cchecks = dist_to_classical(D, check_involutive=False)
                rep["triple"] = T.describe()
                rep["checks"] += _checks_json(cchecks)
                lines += _check_lines(cchecks)
                lines.append(f"  B = {rep['triple']['B']}")
                lines.append(f"  F = {rep['triple']['F']}")
                checks += cchecks
            except ClassicalDataError as exc:
                checks.append(CheckResult("classical_data", False, exc.witness or {"reason": str(exc)}))
                rep["checks"] = _checks_json(checks)
                lines += _check_lines(checks[-1:])
        ok = ok and all(c.ok for c in checks)
        reports.append(rep)
    return Outcome({"distributions": reports, "status": "pass" if ok else "fail"}, lines, ok)


def _algebroid_of(m: Model):
    if m.algebroid is not None:
        return m.algebroid
    if m.q_field is not None:
        try:
            return extract_algebroid(m.q_field)
        except NotHomologicalError as exc:
            raise InputError(f"the q_field is not homological: {exc}") from exc
    raise InputError("the document defines neither an algebroid nor a q_field")


def cmd_check_imfoliation(m: Model, args) -> Outcome:
    specs = _select(m.imfoliations, args.block, "imfoliation")
    A = _algebroid_of(m)
    pts = _points(m, args)
    reports, lines, ok = [], [], True
    for item in specs:
        I = IMFoliation(A, item.triple, item.name or "")
        try:
            checks = imf_check_axioms(I, pts)
        except FlatFrameUnavailable as exc:
            raise InputError(str(exc)) from exc
        lines.append(f"imfoliation {item.name or ''}".rstrip() + ":")
        lines += _check_lines(checks)
        if all(c.ok for c in checks):
            cd = distribution_from_imf(I, pts)
            extra = [cd.involutive, cd.q_invariant]
            checks = checks + extra
            lines.append("  distribution side:")
            lines += _check_lines(extra, "    ")
            rep = {"name": item.name, "checks": _checks_json(checks),
                   "distribution": cd.distribution.describe()}
        else:
            rep = {"name": item.name, "checks": _checks_json(checks)}
        ok = ok and all(c.ok for c in checks)
        reports.append(rep)
    return Outcome({"imfoliations": reports, "status": "pass" if ok else "fail"}, lines, ok)


def cmd_check_action(m: Model, args) -> Outcome:
    specs = _select(m.actions, args.block, "action")
    Q = _need_q(m)
    pts = _points(m, args)
    reports, lines, ok = [], [], True
    for item in specs:
        phi = item.action
        algebra = phi.L.check_axioms()
        constraints = action_check_constraints(phi, Q)
        D = action_distribution(phi, Q, points=pts)
        closure = action_closure_check(D, Q)
        rep = {"name": item.name, "lie2algebra": _checks_json(algebra), "constraints": _checks_json(constraints),
               "distribution": D.describe(), "closure": _checks_json(closure)}
        lines.append(f"action {item.name or ''}".rstrip() + ":")
        lines.append("  lie 2-algebra:")
        lines += _check_lines(algebra, "    ")
        lines.append("  constraints:")
        lines += _check_lines(constraints, "    ")
        lines.append(f"  completed distribution: {D.status}")
        lines += _check_lines(closure, "    ")
        checks = algebra + constraints + closure
        if not any(phi.eta_pairs.values()):
            strict = strict_action_check(phi, Q, pts)
            rep["strict"] = _checks_json(strict)
            lines.append("  strict action:")
            lines += _check_lines(strict, "    ")
            checks += [c for c in strict if c.name != "almost_free"]
        ok = ok and all(c.ok for c in checks)
        reports.append(rep)
    return Outcome({"actions": reports, "status": "pass" if ok else "fail"}, lines, ok)


def cmd_reduce(m: Model, args) -> Outcome:
    Q = _need_q(m)
    pts = _points(m, args)
    setting = _setting(m, args)
    if m.distributions and (args.block is not None or not m.actions):
        item = _select(m.distributions, args.block, "distribution")[0]
        D = dist_validate(item.generators, m.n, m.r, item.labels, points=pts)
        source = {"distribution": item.name}
    elif m.actions:
        item = m.actions[0]
        D = action_distribution(item.action, Q, points=pts)
        closure = action_closure_check(D, Q)
        if not all(c.ok for c in closure):
            bad = [c for c in closure if not c.ok]
            return Outcome({"status": "fail", "source": {"action": item.name}, "checks": _checks_json(closure)},
                           ["the completed distribution of the action is not closed:"] + _check_lines(bad), False)
        source = {"action": item.name}
    else:
        raise InputError("reduce needs a distribution or an action block")
    try:
        res = reduce(Q, D, setting)
    except ReductionError as exc:
        wit = exc.witness or {"reason": str(exc)}
        return Outcome({"status": "fail", "source": source, "witness": wit},
                       [f"cannot reduce: {exc}", f"  witness: {json.dumps(wit, sort_keys=True)}"], False)
    rep = {"source": source, "quotient": res.describe(), "status": "pass" if res.ok else "fail"}
    if res.algebroid is not None:
        A = res.algebroid
        lines = ["# quotient NQ-1 manifold", "# embedding of the reduced generators:"]
        lines += [f"#   {k} = {v}" for k, v in res.embedding.items()]
        lines += render_manifold(A.n, A.r) + render_algebroid(A)
        lines.append(f"# reduced Q = {res.q_reduced}")
        rep["dsl"] = "\n".join(render_manifold(A.n, A.r) + render_algebroid(A)) + "\n"
    else:
        desc = res.describe()
        lines = ["# singular quotient on a point body", f"# invariants: {', '.join(desc['invariants']['basis'])}",
                 f"# Q on invariants: {desc['q_on_invariants']}", f"# {desc['summary']}"]
    lines += ["#" + line for line in _check_lines(res.checks)]
    return Outcome(rep, lines, res.ok)


HANDLERS = {"check-q": cmd_check_q, "extract-algebroid": cmd_extract_algebroid, "build-q": cmd_build_q,
            "analyze-distribution": cmd_analyze_distribution, "check-imfoliation": cmd_check_imfoliation,
            "check-action": cmd_check_action, "reduce": cmd_reduce}


def run(command: str, text: str, args) -> Outcome:
    """Run one command on document text; raises InputError/DSLError for bad input."""
    m = load(text)
    if m.empty:
        raise InputError("the document is empty; nothing to run")
    if m.n is None:
        raise InputError("the document needs a manifold block")
    out = HANDLERS[command](m, args)
    out.report = {"schema": SCHEMA, "command": command, **out.report}
    return out


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nq1", description="Checks and reductions for NQ-1 manifolds.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("file", help="input document")
    p.add_argument("--json", metavar="PATH", help="write the JSON report to PATH ('-' for stdout)")
    p.add_argument("--samples", type=int, default=8, help="number of random sample points (default 8)")
    p.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")
    p.add_argument("--max-xi-degree", type=int, default=None, help="xi-degree cutoff for invariants")
    p.add_argument("--max-base-degree", type=int, default=None, help="base-degree cutoff for invariants")
    p.add_argument("--block", default=None, help="name of the block to use when a kind appears several times")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    if args.samples < 0:
        print("error: --samples must be non-negative", file=sys.stderr)
        return 2
    try:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
        out = run(args.command, text, args)
    except OSError as exc:
        print(f"error: cannot read {args.file}: {exc.strerror}", file=sys.stderr)
        return 2
    except (DSLError, InputError, SignatureError, DegreeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    payload = json.dumps(out.report, sort_keys=True, indent=2) + "\n"
    if args.json == "-":
        sys.stdout.write(payload)
    else:
        print("\n".join(out.lines))
        print(f"status: {'pass' if out.ok else 'fail'}")
        if args.json:
            with open(args.json, "w", encoding="utf-8") as fh:
                fh.write(payload)
    return 0 if out.ok else 1


if __name__ == "__main__":
    sys.exit(main())
