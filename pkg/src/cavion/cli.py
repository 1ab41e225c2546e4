"""Command-line front end, configuration, and golden-table regression.

The ``cavion`` console command exposes five subcommands:

``solve``
    Cavity eigenvalues for one or more states over a radius list.
``entropy``
    The full set of information measures (Renyi, Tsallis, Shannon,
    Onicescu in position, momentum and composite space) per state/radius.
``scan``
    Confined-to-free ratio series over a radius grid: each measure is
    emitted as a raw value, its analytic free-atom reference, and their
    ratio, which tends to 1 as the cavity opens.
``table``
    Re-computation of a bundled golden table, or, with ``--check``, a
    regression run comparing every stored cell against a fresh
    computation within its per-cell tolerance.
``fha``
    Analytic free-atom limits of the same measures.

Golden data ships as plain-text CSV (``data/tables.csv``,
``data/literature.csv``) with one row per cell: the verbatim published
digit string, an absolute tolerance derived from the printed precision
and a measured cross-check, and an optional flag.  Cells flagged
``suspect`` are internally inconsistent in their source and are reported
as SKIP instead of compared; ``noisy`` marks cells whose tolerance is
set by the measured deviation of the source digits rather than their
printed precision.

Determinism: numbers are formatted with a fixed significant-digit
count via ``numpy.format_float_positional`` (fixed point, no locale),
rows are assembled in a fixed order, and parsing an emitted CSV and
re-printing it reproduces the file byte for byte.  Batch cells are
evaluated concurrently but assembled single-threaded in input order.

Exit codes: 0 success; 1 golden-check failure (one JSON record per
failing cell on stderr); 2 validation failure; 3 numerical
non-convergence.  Config files use ``key = value`` lines (``#``
comments allowed) and are overridden by explicit flags.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

import numpy as np

from .entropy import DEFAULT_ORDERS, EntropicOrders, compute_all
from .errors import ConvergenceError, ValidationError
from .solver import Confinement, QuantumNumbers, solve_state

MEASURE_FIELDS = (
    "R_r", "R_p", "R_t",
    "T_r", "T_p", "T_t",
    "S_r", "S_p", "S_t",
    "E_r", "E_p", "E_t",
)

#: identifiers accepted by ``table``; the S-series belongs to supplementary
#: material that is not distributed, so no golden data exists for it.
GOLDEN_TABLE_IDS = ("I", "II", "III", "IV", "V", "VI", "VII", "VIII",
                    "S1", "S2", "S3", "S4")
_STORED_TABLE_IDS = frozenset(GOLDEN_TABLE_IDS[:8])

DEFAULT_PRECISION = 12
DEFAULT_SCAN_POINTS = 20
_TASKS = ("solve", "entropy", "scan", "table", "fha")
_CONFIG_KEYS = ("state", "rc", "orders", "z", "format", "precision", "out")
_MAX_WORKERS = 8


# --------------------------------------------------------------------------
# run specification


@dataclass(frozen=True)
class RunSpec:
    """Validated description of one CLI invocation."""

    task: str
    states: tuple[QuantumNumbers, ...] = ()
    Z: float = 1.0
    rc_values: tuple[float, ...] = ()
    orders: EntropicOrders = DEFAULT_ORDERS
    out: str | None = None
    fmt: str = "csv"
    precision: int = DEFAULT_PRECISION
    table_id: str | None = None
    check: bool = False

    def __post_init__(self) -> None:
        if self.task not in _TASKS:
            raise ValidationError(f"unknown task {self.task!r}; expected one of {_TASKS}")
        if self.fmt not in ("csv", "text"):
            raise ValidationError(f"unknown format {self.fmt!r}; expected csv or text")
        if not isinstance(self.precision, int) or isinstance(self.precision, bool):
            raise ValidationError("precision must be an integer")
        if not 6 <= self.precision <= 14:
            raise ValidationError(f"precision {self.precision} outside [6, 14]")
        if not (self.Z > 0.0 and math.isfinite(self.Z)):
            raise ValidationError(f"charge Z must be positive and finite, got {self.Z}")
        for rc in self.rc_values:
            if not (rc > 0.0 and math.isfinite(rc)):
                raise ValidationError(f"cavity radius must be positive and finite, got {rc}")
        if list(self.rc_values) != sorted(self.rc_values):
            raise ValidationError("rc values must be sorted ascending")
        if self.task in ("solve", "entropy", "scan"):
            if not self.states:
                raise ValidationError(f"{self.task} requires --state")
            if not self.rc_values:
                raise ValidationError(f"{self.task} requires --rc")
        if self.task == "fha" and not self.states:
            raise ValidationError("fha requires --state")
        if self.task == "table" and self.table_id is None:
            raise ValidationError("table requires a table identifier")


# --------------------------------------------------------------------------
# golden data


@dataclass(frozen=True)
class GoldenRow:
    """One stored cell: where it lives, its digits, and how close a fresh
    computation must come."""

    state: str
    rc: str
    quantity: str
    printed: str
    value: float
    tol: float | None
    flag: str


@dataclass(frozen=True)
class GoldenTable:
    table_id: str
    rows: tuple[GoldenRow, ...]


def _data_text(name: str) -> str:
    return (resources.files(__package__) / "data" / name).read_text(encoding="utf-8")


@lru_cache(maxsize=None)
def _all_golden_rows() -> tuple[tuple[str, GoldenRow], ...]:
    out = []
    for rec in csv.DictReader(io.StringIO(_data_text("tables.csv"))):
        suspect = rec["flag"] == "suspect"
        out.append((rec["table"], GoldenRow(
            state=rec["state"],
            rc=rec["rc"],
            quantity=rec["quantity"],
            printed=rec["value"],
            value=float(rec["value"]),
            tol=None if suspect else float(rec["tol"]),
            flag=rec["flag"],
        )))
    return tuple(out)


def load_golden(table_id: str) -> GoldenTable:
    """Load the stored rows of one golden table.

    Raises ValidationError for unknown identifiers and for the S-series,
    which is part of the accepted identifier domain but has no stored
    data.
    """
    if table_id not in GOLDEN_TABLE_IDS:
        raise ValidationError(
            f"unknown table {table_id!r}; expected one of {', '.join(GOLDEN_TABLE_IDS)}")
    if table_id not in _STORED_TABLE_IDS:
        raise ValidationError(
            f"table {table_id} has no stored golden data (supplementary series)")
    rows = tuple(row for tid, row in _all_golden_rows() if tid == table_id)
    return GoldenTable(table_id=table_id, rows=rows)


def load_literature() -> tuple[GoldenRow, ...]:
    """Stored literature cross-check triples (Shannon entropies for 2p/3d)."""
    out = []
    for rec in csv.DictReader(io.StringIO(_data_text("literature.csv"))):
        suspect = rec["flag"] == "suspect"
        out.append(GoldenRow(
            state=rec["state"],
            rc=rec["rc"],
            quantity=rec["quantity"],
            printed=rec["value"],
            value=float(rec["value"]),
            tol=None if suspect else float(rec["tol"]),
            flag=rec["flag"],
        ))
    return tuple(out)


# --------------------------------------------------------------------------
# deterministic formatting and emission


def format_value(x: float, precision: int) -> str:
    """Fixed-point rendering with ``precision`` significant digits.

    Idempotent under parse/format round trips: formatting the float that
    a formatted string parses back to reproduces the string.
    """
    x = float(x)
    if math.isnan(x):
        raise ValidationError("cannot format NaN")
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    if x == 0.0:
        return "0"
    return np.format_float_positional(
        x, precision=precision, unique=False, fractional=False, trim="-")


def render_csv(header: list[str], rows: list[list[str]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    return "\n".join(lines) + "\n"


def parse_csv(text: str) -> tuple[list[str], list[list[str]]]:
    reader = csv.reader(io.StringIO(text))
    table = [row for row in reader if row]
    if not table:
        raise ValidationError("empty CSV input")
    return table[0], table[1:]


def render_text(header: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in header]
    for row in rows:
        widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
    lines = ["  ".join(h.rjust(w) for h, w in zip(header, widths))]
    lines.extend("  ".join(cell.rjust(w) for cell, w in zip(row, widths)) for row in rows)
    return "\n".join(lines) + "\n"


def _render(header: list[str], rows: list[list[str]], fmt: str) -> str:
    return render_csv(header, rows) if fmt == "csv" else render_text(header, rows)


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# --------------------------------------------------------------------------
# flag parsing


def parse_state_spec(text: str) -> tuple[QuantumNumbers, ...]:
    """Parse ``2p``, comma lists ``2p,3d``, and l-ranges ``10s..10m``."""
    states: list[QuantumNumbers] = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            raise ValidationError(f"empty state token in {text!r}")
        if ".." in token:
            lo_s, _, hi_s = token.partition("..")
            lo = QuantumNumbers.from_label(lo_s.strip())
            hi = QuantumNumbers.from_label(hi_s.strip())
            if lo.n != hi.n:
                raise ValidationError(
                    f"state range {token!r} must keep the principal quantum number fixed")
            if lo.l > hi.l:
                raise ValidationError(f"state range {token!r} runs backwards")
            states.extend(QuantumNumbers(n=lo.n, l=l) for l in range(lo.l, hi.l + 1))
        else:
            states.append(QuantumNumbers.from_label(token))
    return tuple(states)


def parse_rc_spec(text: str) -> tuple[float, ...]:
    """Parse a radius flag: single value, comma list, or a grid
    ``start:stop[:count][:lin|log]`` (count defaults to 20; the scale
    token may stand in the count position, e.g. ``0.1:100:log``)."""
    text = text.strip()
    if ":" in text:
        parts = [p.strip() for p in text.split(":")]
        if not 2 <= len(parts) <= 4:
            raise ValidationError(f"bad rc grid {text!r}")
        try:
            start, stop = float(parts[0]), float(parts[1])
        except ValueError as exc:
            raise ValidationError(f"bad rc grid endpoint in {text!r}") from exc
        count = DEFAULT_SCAN_POINTS
        scale = "lin"
        saw_count = saw_scale = False
        for extra in parts[2:]:
            if extra in ("lin", "log"):
                if saw_scale:
                    raise ValidationError(f"duplicate scale token in {text!r}")
                scale, saw_scale = extra, True
            else:
                if saw_count:
                    raise ValidationError(f"duplicate count token in {text!r}")
                try:
                    count = int(extra)
                except ValueError as exc:
                    raise ValidationError(f"bad rc grid count in {text!r}") from exc
                saw_count = True
        if count < 2:
            raise ValidationError(f"rc grid needs at least 2 points, got {count}")
        if not (0.0 < start < stop) or not math.isfinite(stop):
            raise ValidationError(f"rc grid endpoints must satisfy 0 < start < stop in {text!r}")
        grid = np.geomspace(start, stop, count) if scale == "log" else np.linspace(start, stop, count)
        # pin the endpoints to the parsed values so emitted grids carry
        # exactly the radii the user named
        grid[0], grid[-1] = start, stop
        values = [float(v) for v in grid]
    else:
        try:
            values = [float(tok) for tok in text.split(",") if tok.strip()]
        except ValueError as exc:
            raise ValidationError(f"bad rc value in {text!r}") from exc
        if not values:
            raise ValidationError(f"no rc values in {text!r}")
    for v in values:
        if not (v > 0.0 and math.isfinite(v)):
            raise ValidationError(f"cavity radius must be positive and finite, got {v}")
    return tuple(sorted(set(values)))


def parse_orders_spec(text: str) -> EntropicOrders:
    """Parse ``--orders a,b`` (decimals or fractions; conjugacy enforced
    by the EntropicOrders constructor, which stores exact rationals)."""
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 2 or not all(parts):
        raise ValidationError(f"orders must be two comma-separated values, got {text!r}")
    return EntropicOrders(parts[0], parts[1])


def read_config(path: str) -> dict[str, str]:
    """Read a plain ``key = value`` config file (# comments allowed)."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = fh.read()
    except OSError as exc:
        raise ValidationError(f"cannot read config file {path}: {exc}") from exc
    out: dict[str, str] = {}
    for lineno, line in enumerate(raw.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip().lower(), value.strip()
        if not sep or not key or not value:
            raise ValidationError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        if key not in _CONFIG_KEYS:
            raise ValidationError(
                f"{path}:{lineno}: unknown config key {key!r}; expected one of {_CONFIG_KEYS}")
        out[key] = value
    return out


# --------------------------------------------------------------------------
# computation helpers


def _pool_size(n_jobs: int) -> int:
    return max(1, min(_MAX_WORKERS, os.cpu_count() or 1, n_jobs))


def _measures_for(pairs: list[tuple[QuantumNumbers, float]], Z: float,
                  orders: EntropicOrders) -> dict[tuple[QuantumNumbers, float], object]:
    """Evaluate all measures for unique (state, rc) pairs concurrently;
    the result dict makes row assembly order-independent of completion."""
    uniq = sorted(set(pairs), key=lambda p: (p[0].n, p[0].l, p[0].m, p[1]))

    def one(pair):
        qn, rc = pair
        return compute_all(qn, Confinement(Z=Z, rc=rc), orders)

    with ThreadPoolExecutor(max_workers=_pool_size(len(uniq))) as ex:
        results = list(ex.map(one, uniq))
    return dict(zip(uniq, results))


def _rc_token(rc: float, precision: int) -> str:
    return format_value(rc, precision)


# --------------------------------------------------------------------------
# subcommand bodies


def _run_solve(spec: RunSpec) -> int:
    def one(pair):
        qn, rc = pair
        return solve_state(qn, Confinement(Z=spec.Z, rc=rc))

    pairs = [(qn, rc) for qn in spec.states for rc in spec.rc_values]
    with ThreadPoolExecutor(max_workers=_pool_size(len(pairs))) as ex:
        solutions = list(ex.map(one, pairs))
    header = ["state", "Z", "rc", "energy", "nodes"]
    rows = []
    for (qn, rc), rs in zip(pairs, solutions):
        rows.append([qn.label, format_value(spec.Z, spec.precision),
                     _rc_token(rc, spec.precision),
                     format_value(rs.energy, spec.precision),
                     str(qn.n - qn.l - 1)])
    _emit(_render(header, rows, spec.fmt), spec.out)
    return 0


def _measure_row(qn: QuantumNumbers, rc_token: str, m, spec: RunSpec) -> list[str]:
    return [qn.label, format_value(spec.Z, spec.precision), rc_token,
            *(format_value(getattr(m, f), spec.precision) for f in MEASURE_FIELDS)]


def _run_entropy(spec: RunSpec) -> int:
    pairs = [(qn, rc) for qn in spec.states for rc in spec.rc_values]
    measures = _measures_for(pairs, spec.Z, spec.orders)
    header = ["state", "Z", "rc", *MEASURE_FIELDS]
    rows = [_measure_row(qn, _rc_token(rc, spec.precision), measures[(qn, rc)], spec)
            for qn, rc in pairs]
    _emit(_render(header, rows, spec.fmt), spec.out)
    return 0


def _run_fha(spec: RunSpec) -> int:
    header = ["state", "Z", "rc", *MEASURE_FIELDS]
    rows = []
    for qn in spec.states:
        m = compute_all(qn, Confinement(Z=spec.Z, rc=math.inf), spec.orders)
        rows.append(_measure_row(qn, "inf", m, spec))
    _emit(_render(header, rows, spec.fmt), spec.out)
    return 0


def emit_ratio_series(states: tuple[QuantumNumbers, ...],
                      rc_values: tuple[float, ...],
                      Z: float = 1.0,
                      orders: EntropicOrders | None = None,
                      precision: int = DEFAULT_PRECISION,
                      ) -> tuple[list[str], list[list[str]]]:
    """Confined-to-free ratio series for the Renyi and Shannon measures.

    Every measure appears as the raw confined value, the analytic
    free-atom reference (the true limit, not a large-radius surrogate),
    and their ratio.  The ratios tend to 1 as the cavity opens; for
    state families whose free-space references keep a fixed sign pattern
    (positive position-space, negative momentum-space entropies, as for
    the n=10 family) the ratio never exceeds 1.
    """
    orders = DEFAULT_ORDERS if orders is None else orders
    free = {qn: compute_all(qn, Confinement(Z=Z, rc=math.inf), orders) for qn in states}
    pairs = [(qn, rc) for qn in states for rc in rc_values]
    measures = _measures_for(pairs, Z, orders)
    header = ["state", "rc"]
    for f in ("R_r", "R_p", "S_r", "S_p"):
        header.extend([f, f + "_free", f + "_ratio"])
    rows = []
    for qn, rc in pairs:
        m, fm = measures[(qn, rc)], free[qn]
        row = [qn.label, _rc_token(rc, precision)]
        for f in ("R_r", "R_p", "S_r", "S_p"):
            confined, reference = getattr(m, f), getattr(fm, f)
            row.extend([format_value(confined, precision),
                        format_value(reference, precision),
                        format_value(confined / reference, precision)])
        rows.append(row)
    return header, rows


def _run_scan(spec: RunSpec) -> int:
    header, rows = emit_ratio_series(
        spec.states, spec.rc_values, spec.Z, spec.orders, spec.precision)
    _emit(_render(header, rows, spec.fmt), spec.out)
    return 0


def _golden_measures(table: GoldenTable, orders: EntropicOrders):
    pairs = sorted({(row.state, row.rc) for row in table.rows})

    def one(pair):
        state, rc = pair
        qn = QuantumNumbers.from_label(state)
        rc_val = math.inf if rc == "inf" else float(rc)
        return compute_all(qn, Confinement(Z=1.0, rc=rc_val), orders)

    with ThreadPoolExecutor(max_workers=_pool_size(len(pairs))) as ex:
        results = list(ex.map(one, pairs))
    return dict(zip(pairs, results))


def _run_table(spec: RunSpec) -> int:
    table = load_golden(spec.table_id)
    measures = _golden_measures(table, DEFAULT_ORDERS)
    if not spec.check:
        header = ["table", "state", "rc", "quantity", "value"]
        rows = [[table.table_id, row.state, row.rc, row.quantity,
                 format_value(getattr(measures[(row.state, row.rc)], row.quantity),
                              spec.precision)]
                for row in table.rows]
        _emit(_render(header, rows, spec.fmt), spec.out)
        return 0

    lines = []
    failures = []
    n_ok = n_skip = 0
    for row in table.rows:
        cell = f"{table.table_id} {row.state} rc={row.rc} {row.quantity}"
        if row.tol is None:
            n_skip += 1
            lines.append(f"{cell}: SKIP (suspect source cell)")
            continue
        computed = getattr(measures[(row.state, row.rc)], row.quantity)
        delta = computed - row.value
        verdict = "OK" if abs(delta) <= row.tol else "FAIL"
        lines.append(f"{cell}: {verdict} delta={delta:+.3e} tol={row.tol:.3e}")
        if verdict == "OK":
            n_ok += 1
        else:
            failures.append({
                "check": "golden",
                "column": row.quantity,
                "computed": computed,
                "delta": delta,
                "expected": row.value,
                "row": f"{row.state} rc={row.rc}",
                "table": table.table_id,
                "tol": row.tol,
            })
    lines.append(
        f"table {table.table_id} check: {n_ok} ok, {len(failures)} fail, {n_skip} skip")
    _emit("\n".join(lines) + "\n", spec.out)
    for record in failures:
        sys.stderr.write(json.dumps(record, sort_keys=True) + "\n")
    return 1 if failures else 0


def run(spec: RunSpec) -> int:
    """Execute a validated RunSpec; returns the process exit code."""
    body = {
        "solve": _run_solve,
        "entropy": _run_entropy,
        "scan": _run_scan,
        "table": _run_table,
        "fha": _run_fha,
    }[spec.task]
    return body(spec)


# --------------------------------------------------------------------------
# argument plumbing


def _build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="plain key=value config file; flags override it")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", dest="fmt", choices=("csv", "text"),
                        help="output format (default csv)")
    common.add_argument("--precision", type=int, help="significant digits, 6..14 (default 12)")

    physics = argparse.ArgumentParser(add_help=False)
    physics.add_argument("--state", help="state labels: 2p, 10d, lists 2p,3d, ranges 10s..10m")
    physics.add_argument("--Z", dest="Z", type=float, help="nuclear charge (default 1)")

    parser = argparse.ArgumentParser(
        prog="cavion",
        description="Cavity-confined hydrogen-like ion: bound states and "
                    "information measures.")
    sub = parser.add_subparsers(dest="task", required=True)

    p = sub.add_parser("solve", parents=[common, physics],
                       help="cavity eigenvalues")
    p.add_argument("--rc", help="radius: single value, list, or start:stop[:count][:lin|log]")

    p = sub.add_parser("entropy", parents=[common, physics],
                       help="information measures per state and radius")
    p.add_argument("--rc", help="radius: single value, list, or start:stop[:count][:lin|log]")
    p.add_argument("--orders", help="entropic orders a,b with 1/a + 1/b = 2 (default 0.6,3)")

    p = sub.add_parser("scan", parents=[common, physics],
                       help="confined-to-free ratio series over a radius grid")
    p.add_argument("--rc", help="radius grid, e.g. 0.1:100:log")
    p.add_argument("--orders", help="entropic orders a,b (default 0.6,3)")

    p = sub.add_parser("table", parents=[common],
                       help="emit or regression-check a bundled golden table")
    p.add_argument("table_id", metavar="TABLE",
                   help=f"one of {', '.join(GOLDEN_TABLE_IDS)}")
    p.add_argument("--check", action="store_true",
                   help="compare stored cells against fresh computations")

    p = sub.add_parser("fha", parents=[common, physics],
                       help="analytic free-atom limits")
    p.add_argument("--orders", help="entropic orders a,b (default 0.6,3)")
    return parser


def _merged(args: argparse.Namespace, key: str, cfg: dict[str, str]):
    """Flag value if given, else config value, else None."""
    value = getattr(args, key, None)
    if value is not None:
        return value
    return cfg.get(key.lower())


def build_spec(args: argparse.Namespace) -> RunSpec:
    cfg = read_config(args.config) if getattr(args, "config", None) else {}

    state_spec = _merged(args, "state", cfg)
    rc_spec = _merged(args, "rc", cfg)
    orders_spec = _merged(args, "orders", cfg)
    z_spec = _merged(args, "Z", cfg)
    fmt = _merged(args, "fmt", cfg) or cfg.get("format") or "csv"
    precision = _merged(args, "precision", cfg)
    out = _merged(args, "out", cfg)

    if isinstance(precision, str):
        try:
            precision = int(precision)
        except ValueError as exc:
            raise ValidationError(f"precision must be an integer, got {precision!r}") from exc
    if isinstance(z_spec, str):
        try:
            z_spec = float(z_spec)
        except ValueError as exc:
            raise ValidationError(f"Z must be a number, got {z_spec!r}") from exc

    return RunSpec(
        task=args.task,
        states=parse_state_spec(state_spec) if state_spec else (),
        Z=1.0 if z_spec is None else z_spec,
        rc_values=parse_rc_spec(rc_spec) if rc_spec else (),
        orders=parse_orders_spec(orders_spec) if orders_spec else DEFAULT_ORDERS,
        out=out,
        fmt=fmt,
        precision=DEFAULT_PRECISION if precision is None else precision,
        table_id=getattr(args, "table_id", None),
        check=bool(getattr(args, "check", False)),
    )


def _error_record(kind: str, exc: Exception) -> None:
    sys.stderr.write(json.dumps(
        {"error": kind, "message": str(exc)}, sort_keys=True) + "\n")


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        spec = build_spec(args)
        return run(spec)
    except ValidationError as exc:
        _error_record("validation", exc)
        return 2
    except ConvergenceError as exc:
        _error_record("non-convergence", exc)
        return 3


if __name__ == "__main__":
    sys.exit(main())
