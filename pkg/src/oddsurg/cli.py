"""Command-line front end.

Exit codes: 0 success, 1 negative domain verdict, 2 usage or input error.
Settings resolve as flag, then ``ODDSURG_*`` environment variable, then
default.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

from .charflow import (
    CapRegion,
    FlowState,
    ScalarField,
    poincare_section,
    run_ensemble,
    verify_level_sets_meet_cap,
)
from .d3calc import format_rational, full_report
from .exactalg import NotSymmetricError, ShapeError
from .polyparse import PolynomialSyntaxError
from .surgery import (
    InvalidInvariants,
    LegendrianInvariants,
    SurgeryPresentation,
    legendrian_unknot_presentation,
    valid_unknots,
    validate_unknot,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE = 0, 1, 2
TABLE_HEADER = ["tb", "rot", "chi", "sigma", "det", "c1sq", "d3"]


class UsageError(Exception):
    pass


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed indent, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def _env(name: str, choices=None):
    val = os.environ.get(f"ODDSURG_{name}")
    if val is None or val == "":
        return None
    if choices is not None and val not in choices:
        return None
    return val


def load_presentation(path: str) -> SurgeryPresentation:
    """Read a ``{"matrix": [[int]], "chern": [int]?, "labels": [str]?}`` file."""
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"input: cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"input: malformed JSON in {path}: {exc}") from None
    return presentation_from_json(data)


def _int_list(value, name):
    if not isinstance(value, list) or any(
        not isinstance(x, int) or isinstance(x, bool) for x in value
    ):
        raise UsageError(f"{name}: expected a list of integers")
    return value


def presentation_from_json(data) -> SurgeryPresentation:
    if not isinstance(data, dict):
        raise UsageError("presentation: expected a JSON object")
    unknown = set(data) - {"matrix", "chern", "labels"}
    if unknown:
        raise UsageError(f"{sorted(unknown)[0]}: unknown field")
    if "matrix" not in data:
        raise UsageError("matrix: required field missing")
    matrix = data["matrix"]
    if not isinstance(matrix, list):
        raise UsageError("matrix: expected a list of integer rows")
    rows = [_int_list(r, f"matrix[{i}]") for i, r in enumerate(matrix)]
    if any(len(r) != len(rows) for r in rows):
        raise UsageError("matrix: must be square")
    chern = data.get("chern")
    if chern is not None:
        chern = _int_list(chern, "chern")
    labels = data.get("labels")
    if labels is not None and (
        not isinstance(labels, list) or any(not isinstance(s, str) for s in labels)
    ):
        raise UsageError("labels: expected a list of strings")
    try:
        return SurgeryPresentation.from_lists(rows, chern, labels)
    except NotSymmetricError:
        raise UsageError("matrix: must be symmetric") from None
    except ShapeError as exc:
        field = "labels" if "labels" in str(exc) else "chern"
        raise UsageError(f"{field}: {exc}") from None


def presentation_to_json(pres: SurgeryPresentation) -> dict:
    out = {"matrix": pres.Q.tolist(), "chern": None if pres.chern is None else list(pres.chern)}
    if pres.labels is not None:
        out["labels"] = list(pres.labels)
    return out


def _emit_report(pres, as_json, out, extra=None) -> int:
    report = full_report(pres)
    if as_json:
        doc = report.to_dict()
        doc["presentation"] = presentation_to_json(pres)
        if extra:
            doc.update(extra)
        out.write(dumps(doc))
    else:
        if extra:
            for k, v in extra.items():
                out.write(f"{k:<14}{v}\n")
        out.write(report.to_text() + "\n")
    return EXIT_NEGATIVE if report.non_torsion else EXIT_OK


def cmd_d3_unknot(args, out, err) -> int:
    try:
        pres = legendrian_unknot_presentation(args.tb, args.rot)
    except InvalidInvariants as exc:
        err.write(f"invalid invariants {exc}\n")
        return EXIT_NEGATIVE
    as_json = args.json or _env("FORMAT") == "json"
    return _emit_report(pres, as_json, out, {"tb": args.tb, "rot": args.rot})


def cmd_d3_general(args, out, err) -> int:
    pres = load_presentation(args.input)
    as_json = args.json or _env("FORMAT") == "json"
    code = _emit_report(pres, as_json, out)
    if code == EXIT_NEGATIVE:
        err.write("c1 is not torsion on the boundary; d3 undefined\n")
    return code


def table_rows(tb_min: int) -> list[dict]:
    rows = []
    for inv in valid_unknots(tb_min):
        rep = full_report(legendrian_unknot_presentation(inv.tb, inv.rot))
        rows.append(
            {
                "tb": inv.tb,
                "rot": inv.rot,
                "chi": rep.euler,
                "sigma": rep.sigma,
                "det": rep.det,
                "c1sq": format_rational(rep.chern_square),
                "d3": format_rational(rep.d3),
            }
        )
    return rows


def cmd_d3_table(args, out, err) -> int:
    if args.tb_min >= 0:
        raise UsageError(f"--tb-min: must be negative, got {args.tb_min}")
    fmt = args.format or _env("FORMAT", ("csv", "json")) or "csv"
    rows = table_rows(args.tb_min)
    if fmt == "json":
        out.write(dumps(rows))
    else:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=TABLE_HEADER, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        out.write(buf.getvalue())
    return EXIT_OK


def cmd_validate(args, out, err) -> int:
    inv = LegendrianInvariants(args.tb, args.rot)
    verdict = validate_unknot(inv)
    if verdict:
        out.write(f"valid {inv}\n")
        return EXIT_OK
    out.write(f"invalid {inv}: {verdict.reason}\n")
    return EXIT_NEGATIVE


def _floats(text: str, count: int, name: str) -> list[float]:
    parts = text.split(",")
    try:
        vals = [float(p) for p in parts]
    except ValueError:
        vals = []
    if len(vals) != count or not all(math.isfinite(v) for v in vals):
        raise UsageError(f"{name}: expected {count} comma-separated numbers, got {text!r}")
    return vals


def _psi(text: str) -> ScalarField:
    try:
        return ScalarField.parse(text)
    except PolynomialSyntaxError as exc:
        raise UsageError(f"--psi: {exc}") from None


def _cap(text: str | None) -> CapRegion | None:
    if text is None:
        return None
    cx, cy, cz, r = _floats(text, 4, "--cap")
    try:
        return CapRegion.around((cx, cy, cz), r)
    except ValueError as exc:
        raise UsageError(f"--cap: {exc}") from None


def _seed_path(out: Path, seed: int, many: bool) -> Path:
    if not many:
        return out
    return out.with_name(f"{out.stem}.seed{seed}{out.suffix or '.csv'}")


def cmd_flow_trace(args, out, err) -> int:
    psi = _psi(args.psi)
    cap = _cap(args.cap)
    if args.epsilon < 0:
        raise UsageError(f"--epsilon: must be nonnegative, got {args.epsilon}")
    if not args.dt > 0:
        raise UsageError(f"--dt: must be positive, got {args.dt}")
    if args.steps < 1:
        raise UsageError(f"--steps: must be at least 1, got {args.steps}")
    if args.seeds < 1:
        raise UsageError(f"--seeds: must be at least 1, got {args.seeds}")
    if args.seed is not None:
        base = args.seed
    else:
        env_seed = _env("SEED")
        try:
            base = int(env_seed) if env_seed is not None else 0
        except ValueError:
            raise UsageError(f"ODDSURG_SEED: not an integer: {env_seed!r}") from None
    start = None
    if args.start is not None:
        th, x, y, z = _floats(args.start, 4, "--start")
        try:
            start = FlowState(th, (x, y, z))
        except ValueError as exc:
            raise UsageError(f"--start: {exc}") from None

    seeds = list(range(base, base + args.seeds))
    runs = run_ensemble(psi, args.epsilon, args.dt, args.steps, seeds, cap, args.halt_on_hit, start)
    out_path = Path(args.out)
    many = len(seeds) > 1
    summary_runs = []
    failed = False
    for seed, s, trace in runs:
        path = _seed_path(out_path, seed, many)
        with open(path, "w", newline="") as fh:
            trace.write_csv(fh)
        failed = failed or trace.failure is not None
        summary_runs.append(
            {
                "seed": seed,
                "csv": str(path),
                "start": {"theta": s.theta, "p": list(s.p)},
                "psi_drift": trace.psi_drift,
                "cap_hit": trace.cap_hits[0] if trace.cap_hits else None,
                "cap_hits": trace.cap_hits,
                "completed": trace.completed,
                "halted": trace.halted,
                "failure": trace.failure,
                "section": [[float(c) for c in q] for q in poincare_section(trace)],
            }
        )
    summary = {
        "psi": str(psi),
        "epsilon": args.epsilon,
        "dt": args.dt,
        "steps": args.steps,
        "cap": None
        if cap is None
        else {"center": list(cap.center), "angular_radius": cap.angular_radius},
        "runs": summary_runs,
    }
    text = dumps(summary)
    out_path.with_suffix(".json").write_text(text)
    out.write(text)
    if failed:
        err.write("one or more traces failed (non-finite state)\n")
        return EXIT_NEGATIVE
    return EXIT_OK


def cmd_flow_check_psi(args, out, err) -> int:
    psi = _psi(args.psi)
    cap = _cap(args.cap)
    if args.grid < 16:
        raise UsageError(f"--grid: must be at least 16, got {args.grid}")
    verdict = verify_level_sets_meet_cap(psi, cap, args.grid)
    doc = verdict.to_dict()
    doc["psi"] = str(psi)
    out.write(dumps(doc))
    return EXIT_OK if verdict else EXIT_NEGATIVE


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="oddsurg", description="d3 invariants of contact surgeries and characteristic flows")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    d3 = sub.add_parser("d3", help="invariant reports").add_subparsers(
        dest="mode", required=True, parser_class=_Parser
    )
    un = d3.add_parser(
        "paper",
        aliases=["unknot"],
        help="(-1)-surgery on a Legendrian unknot in S1xS2",
    )
    un.add_argument("--tb", type=int, required=True)
    un.add_argument("--rot", type=int, required=True)
    un.add_argument("--json", action="store_true")
    un.set_defaults(func=cmd_d3_unknot)

    gen = d3.add_parser("general", help="report for a presentation file")
    gen.add_argument("--input", required=True)
    gen.add_argument("--json", action="store_true")
    gen.set_defaults(func=cmd_d3_general)

    tab = d3.add_parser("table", help="one row per realizable (tb, rot)")
    tab.add_argument("--tb-min", type=int, required=True)
    tab.add_argument("--format", choices=["csv", "json"])
    tab.set_defaults(func=cmd_d3_table)

    val = sub.add_parser("validate", help="check (tb, rot) against the unknot classification")
    val.add_argument("--tb", type=int, required=True)
    val.add_argument("--rot", type=int, required=True)
    val.set_defaults(func=cmd_validate)

    flow = sub.add_parser("flow", help="characteristic flow tools").add_subparsers(
        dest="mode", required=True, parser_class=_Parser
    )
    tr = flow.add_parser("trace", help="integrate orbits to CSV with a JSON summary")
    tr.add_argument("--psi", required=True, help="polynomial in x, y, z")
    tr.add_argument("--epsilon", type=float, required=True)
    tr.add_argument("--dt", type=float, required=True)
    tr.add_argument("--steps", type=int, required=True)
    tr.add_argument("--cap", help="CX,CY,CZ,RADIUS")
    tr.add_argument("--halt-on-hit", action="store_true")
    tr.add_argument("--seeds", type=int, default=1, help="number of orbits")
    tr.add_argument("--seed", type=int, help="first seed (default $ODDSURG_SEED or 0)")
    tr.add_argument("--start", help="THETA,X,Y,Z; used for every seed")
    tr.add_argument("--out", required=True)
    tr.set_defaults(func=cmd_flow_trace)

    ck = flow.add_parser("check-psi", help="do all level sets of psi meet the cap")
    ck.add_argument("--psi", required=True)
    ck.add_argument("--cap", required=True, help="CX,CY,CZ,RADIUS")
    ck.add_argument("--grid", type=int, default=64)
    ck.set_defaults(func=cmd_flow_check_psi)
    return p


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out, err)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


def main():
    sys.exit(run())
