"""Command-line front end.

Exit codes: 0 success or principle satisfied, 1 principle violated (or a
failed self-check), 2 usage or input error.  Nothing else escapes.
"""

from __future__ import annotations

import csv
import io
import json
import sys
from pathlib import Path

import click
import numpy as np

from . import audit, discrimination, selfcheck
from .geometry import GEOM_TOL
from .models import ModelError, bloch_state, model_from_selector

EXIT_OK, EXIT_VIOLATED, EXIT_USAGE = 0, 1, 2

SWEEP_SCHEMAS = {
    "odd": ("m", "n", "p", "p_bar", "abs_diff"),
    "even1": ("m", "l", "n", "p", "p_bar", "abs_diff"),
    "even2": ("m", "l", "n", "pE", "min_pure_asymmetry"),
}
SWEEP_DEFAULT_RANGE = {"odd": (2, 50), "even1": (2, 10), "even2": (1, 10)}


class InputError(click.ClickException):
    exit_code = EXIT_USAGE


def fmt(x) -> str:
    """12 significant digits for floats, plain text otherwise."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return f"{float(x):.12g}"
    return str(x)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _table_text(header, rows) -> str:
    cells = [list(header)] + [[fmt(v) for v in r] for r in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(header))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
    return "\n".join(lines) + "\n"


def _json_text(obj) -> str:
    return json.dumps(obj, indent=2, default=_json_default) + "\n"


def _json_default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer, np.bool_)):
        return o.item()
    raise TypeError(f"not serializable: {type(o).__name__}")


def _render(header, rows, payload, fmt_name: str) -> str:
    if fmt_name == "json":
        return _json_text(payload)
    if fmt_name == "csv":
        return _csv_text(header, rows)
    return _table_text(header, rows)


def _load(selector: str):
    try:
        return model_from_selector(selector)
    except (ModelError, ValueError, OSError) as exc:
        raise InputError(str(exc)) from exc


def parse_range(text: str) -> tuple[int, int]:
    """``"a..b"`` -> ``(a, b)`` with ``a <= b``."""
    a, sep, b = text.partition("..")
    try:
        lo, hi = int(a), int(b)
    except ValueError:
        raise InputError(f"range must look like a..b, got {text!r}") from None
    if not sep or hi < lo:
        raise InputError(f"empty or malformed range {text!r}")
    return lo, hi


def parse_grid(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"bad --p-grid {text!r}") from None


def _resolve_state(model, key: str):
    if model.kind == "measurement_list":
        return key
    if "," in key:
        try:
            coords = [float(x) for x in key.split(",")]
        except ValueError:
            raise InputError(f"bad inline coordinates {key!r}") from None
        return bloch_state(coords) if model.kind == "qubit" else np.array(coords)
    if model.kind == "qubit":
        raise InputError("qubit states are given as inline Bloch vectors x,y,z")
    try:
        return model.state(key)
    except (KeyError, IndexError, ValueError) as exc:
        raise InputError(f"unknown state {key!r} in {model.name}") from exc


def _mesd(model, a, b, tol: float):
    if model.kind == "qubit":
        return discrimination.mesd_qubit(a, b)
    if model.kind == "measurement_list":
        return discrimination.mesd_spekkens(a, b, tol=tol)
    return discrimination.mesd_polytope(model, a, b, tol=tol)


def _tolerance(ctx, param, value):
    if value is not None and value < 0:
        raise click.BadParameter("tolerance must be non-negative")
    return value


tolerance_opt = click.option("--tolerance", type=float, default=GEOM_TOL, show_default=True,
                             callback=_tolerance, help="Numerical tolerance.")
out_opt = click.option("--out", type=click.Path(dir_okay=False), default=None,
                       help="Write output to a file instead of stdout.")


def format_opt(default: str):
    return click.option("--format", "fmt_name", type=click.Choice(["csv", "json", "table"]),
                        default=default, show_default=True, help="Output format.")


@click.group()
def cli():
    """Audit probabilistic models for information symmetry."""


@cli.group()
def model():
    """Inspect models."""


@model.command("show")
@click.argument("selector")
@out_opt
def model_show(selector: str, out: str | None) -> int:
    """Print the model as JSON."""
    _emit(_load(selector).to_json() + "\n", out)
    return EXIT_OK


@cli.command()
@click.argument("selector")
@click.argument("state_a")
@click.argument("state_b")
@tolerance_opt
@format_opt("table")
@out_opt
def mesd(selector, state_a, state_b, tolerance, fmt_name, out) -> int:
    """Minimum-error discrimination of STATE_A against STATE_B."""
    m = _load(selector)
    a, b = _resolve_state(m, state_a), _resolve_state(m, state_b)
    try:
        res = _mesd(m, a, b, tolerance)
    except (ModelError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    header = ("label", "kind", "guess_on_effect", "p12", "p21", "pE", "asymmetry")
    rows = [(x.label, x.kind, x.assignment[0], x.p12, x.p21, x.pE, x.asymmetry)
            for x in res.minimizers]
    if fmt_name == "table":
        head = (f"pE {fmt(res.pE)}\np12 {fmt(res.p12)}\np21 {fmt(res.p21)}\n"
                f"asymmetry {fmt(res.asymmetry)}\n\n")
        _emit(head + _table_text(header, rows), out)
    else:
        _emit(_render(header, rows, res.to_dict(), fmt_name), out)
    return EXIT_OK


@cli.group("audit")
def audit_group():
    """Check a model against the symmetry principles."""


def _verdict_line(report) -> str:
    word = "satisfied" if report.satisfied else "violated"
    return f"{report.model}: {word} (max asymmetry {fmt(report.max_asymmetry)})\n"


@audit_group.command("is")
@click.argument("selector")
@tolerance_opt
@click.option("--policy", type=click.Choice(audit.POLICIES), default="any", show_default=True,
              help="Require any or all pure-effect minimizers to be symmetric.")
@format_opt("table")
@out_opt
def audit_is(selector, tolerance, policy, fmt_name, out) -> int:
    """Information symmetry over pure-state pairs."""
    report = audit.audit_is(_load(selector), tolerance=tolerance, policy=policy)
    header = ("state_a", "state_b", "pE", "p12", "p21", "asymmetry", "satisfied")
    rows = [(*v.pair, v.result.pE, v.result.p12, v.result.p21, v.asymmetry, v.is_satisfied)
            for v in report.verdicts]
    text = _render(header, rows, report.to_dict(), fmt_name)
    if fmt_name == "table":
        text += _verdict_line(report)
    _emit(text, out)
    return EXIT_OK if report.satisfied else EXIT_VIOLATED


@audit_group.command("gis")
@click.argument("selector")
@click.option("--p-grid", default="0.6,0.75,0.9", show_default=True,
              help="Comma-separated mixing weights in (0, 1).")
@tolerance_opt
@format_opt("table")
@out_opt
def audit_gis(selector, p_grid, tolerance, fmt_name, out) -> int:
    """Generalized information symmetry over equally mixed pairs."""
    m = _load(selector)
    try:
        report = audit.audit_gis(m, parse_grid(p_grid), tolerance=tolerance)
    except (ModelError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    header = ("p", "state_i", "state_j", "state_k", "min_error", "best_symmetric_error",
              "asymmetry", "satisfied")
    rows = []
    for e in report.entries:
        pair = tuple(e.pair) + ("",) * (3 - len(e.pair))
        rows.append((e.p, *pair, e.min_error, e.best_symmetric_error, e.asymmetry, e.satisfied))
    text = _render(header, rows, report.to_dict(), fmt_name)
    if fmt_name == "table":
        text += _verdict_line(report)
    _emit(text, out)
    return EXIT_OK if report.satisfied else EXIT_VIOLATED


def sweep_rows(family: str, lo: int, hi: int) -> list[tuple]:
    if family == "odd":
        return [(r.m, r.n, r.p, r.p_bar, r.abs_diff) for r in audit.sweep_odd(lo, hi)]
    if family == "even1":
        return [(r.m, r.l, r.n, r.p, r.p_bar, r.abs_diff)
                for r in audit.sweep_even_case1(m_min=lo, m_max=hi)]
    return [(r.m, r.l, r.n, r.pE, r.min_pure_asymmetry)
            for r in audit.sweep_even_case2(m_min=lo, m_max=hi)]


@cli.command()
@click.argument("family", type=click.Choice(list(SWEEP_SCHEMAS)))
@click.option("--m", "m_range", default=None, help="Inclusive range a..b.")
@format_opt("csv")
@out_opt
def sweep(family, m_range, fmt_name, out) -> int:
    """Gap tables for odd polygons and the two even-polygon cases."""
    lo, hi = parse_range(m_range) if m_range else SWEEP_DEFAULT_RANGE[family]
    try:
        rows = sweep_rows(family, lo, hi)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    header = SWEEP_SCHEMAS[family]
    payload = [dict(zip(header, r)) for r in rows]
    _emit(_render(header, rows, payload, fmt_name), out)
    return EXIT_OK


@cli.command("selfcheck")
@click.option("--tolerance", type=float, default=GEOM_TOL, show_default=True,
              callback=_tolerance, help="Tolerance for the qubit symmetry checks.")
@click.option("--model", "selector", default=None,
              help="Also validate a user model, e.g. file:model.json.")
@out_opt
def selfcheck_cmd(tolerance, selector, out) -> int:
    """Run every reproduction check and print a pass/fail table."""
    extra = _load(selector) if selector else None
    results = selfcheck.run_all(tolerance)
    if extra is not None:
        results.append(selfcheck.check_user_model(extra))
    lines = []
    for r in results:
        lines.append(f"{'PASS' if r.passed else 'FAIL'}  {r.name}: {r.detail}")
        lines += [f"      note: {n}" for n in r.notes]
    ok = all(r.passed for r in results)
    lines.append(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    _emit("\n".join(lines) + "\n", out)
    return EXIT_OK if ok else EXIT_VIOLATED


def main(argv=None) -> int:
    """Entry point; maps every outcome onto the 0/1/2 exit-code contract."""
    args = sys.argv[1:] if argv is None else list(argv)
    try:
        rv = cli.main(args=args, prog_name="infosym", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return EXIT_OK if exc.exit_code == 0 else EXIT_USAGE
    except click.ClickException as exc:
        exc.show()
        return EXIT_USAGE
    except (click.exceptions.Abort, ModelError, ValueError, KeyError, OSError) as exc:
        click.echo(f"Error: {exc}", err=True)
        return EXIT_USAGE
    if rv is None:
        # --help and bare groups
        return EXIT_OK
    return rv if rv in (EXIT_OK, EXIT_VIOLATED, EXIT_USAGE) else EXIT_USAGE


def run() -> None:
    sys.exit(main())
