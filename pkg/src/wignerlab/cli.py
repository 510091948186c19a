"""Command-line front end: ``wignerlab {wf,criteria,witness,batch}``.

Exit codes: 0 success, 1 input error, 2 a criterion contradicted the
partial-transpose oracle.
"""

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__, criteria, experiments, states
from .exceptions import ConsistencyError, InvalidInputError, StateSpecError
from .phase_space import WignerGrid, char_values, purity, wigner_values

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_CONSISTENCY = 2

SEED_ENV = "WIGNERLAB_SEED"
COMMANDS = ("wf", "criteria", "witness", "batch")
FORMATS = ("text", "json", "csv")
DEFAULT_SAMPLES = {"witness": 4, "batch": 1000}

WIGNER_ORDER_1 = "2*q + p"
WIGNER_ORDER_2 = "8*q1 + 4*q2 + 2*p1 + p2"
CHAR_ORDER_1 = "2*u + v"
CHAR_ORDER_2 = "8*u1 + 4*u2 + 2*v1 + v2"


@dataclass(frozen=True)
class RunConfig:
    command: str
    state: object = None
    seed: int = 0
    samples: int = 1
    tolerance: float = criteria.DEFAULT_TOL
    output_format: str = "text"
    witness_set: tuple = None
    sampler: str = None
    workers: int = 1
    out: str = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InvalidInputError(f"unknown command {self.command!r}")
        if self.samples < 1:
            raise InvalidInputError(f"--samples must be >= 1, got {self.samples}")
        if not self.tolerance > 0:
            raise InvalidInputError(f"--tol must be > 0, got {self.tolerance}")
        if not 0 <= self.seed < 2**64:
            raise InvalidInputError(f"--seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.output_format not in FORMATS:
            raise InvalidInputError(f"--format must be one of {FORMATS}")


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage errors; 2 is reserved for contradictions here
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _seed_arg(text):
    try:
        seed = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if not 0 <= seed < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 unsigned bits: {text}")
    return seed


def build_parser():
    parser = _Parser(prog="wignerlab", description="Discrete Wigner functions and two-qubit entanglement tests.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, formats, default_format):
        p.add_argument("--format", choices=formats, default=default_format)
        p.add_argument("--out", help="write output to this path instead of stdout")

    p = sub.add_parser("wf", help="print the Wigner grid of a state")
    p.add_argument("--state", required=True, help="JSON state spec or path to one")
    common(p, FORMATS, "text")

    p = sub.add_parser("criteria", help="run every entanglement criterion and the oracle")
    p.add_argument("--state", required=True)
    p.add_argument("--tol", type=float, default=criteria.DEFAULT_TOL)
    common(p, FORMATS, "text")

    p = sub.add_parser("witness", help="overlaps of the partially transposed grid with witnesses")
    p.add_argument("--state", required=True)
    p.add_argument("--witnesses", help="JSON list of state specs (or a path); default: Bell states")
    p.add_argument("--samples", type=int, default=None, help="number of extra random pure witnesses")
    p.add_argument("--seed", type=_seed_arg, default=None)
    p.add_argument("--tol", type=float, default=criteria.DEFAULT_TOL)
    common(p, FORMATS, "text")

    p = sub.add_parser("batch", help="seeded sweep over random or Werner states")
    p.add_argument("--sampler", choices=experiments.SAMPLERS, required=True)
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--seed", type=_seed_arg, default=None)
    p.add_argument("--tol", type=float, default=criteria.DEFAULT_TOL)
    p.add_argument("--workers", type=int, default=1)
    common(p, FORMATS, "csv")
    return parser


def _resolve_seed(value):
    if value is not None:
        return value
    env = os.environ.get(SEED_ENV)
    if env is None or not env.strip():
        return 0
    try:
        return _seed_arg(env.strip())
    except argparse.ArgumentTypeError as exc:
        raise InvalidInputError(f"{SEED_ENV}: {exc}") from None


def config_from_args(args):
    command = args.command
    samples = getattr(args, "samples", None)
    if samples is None:
        samples = DEFAULT_SAMPLES.get(command, 1)
    state = states.load_state(args.state) if getattr(args, "state", None) else None
    witnesses = None
    if getattr(args, "witnesses", None):
        witnesses = _load_witness_specs(args.witnesses)
    return RunConfig(
        command=command,
        state=state,
        seed=_resolve_seed(getattr(args, "seed", None)),
        samples=samples,
        tolerance=getattr(args, "tol", criteria.DEFAULT_TOL),
        output_format=args.format,
        witness_set=witnesses,
        sampler=getattr(args, "sampler", None),
        workers=max(1, getattr(args, "workers", 1)),
        out=args.out,
    )


def _load_witness_specs(text):
    text = text.strip()
    if not text.startswith(("[", "{")):
        try:
            with open(text, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise StateSpecError("witnesses", f"cannot read {text}: {exc.strerror}") from None
    try:
        specs = json.loads(text)
    except json.JSONDecodeError as exc:
        raise StateSpecError("witnesses", f"invalid JSON ({exc.msg})") from None
    if isinstance(specs, dict):
        specs = [specs]
    if not isinstance(specs, list) or not specs:
        raise StateSpecError("witnesses", "expected a nonempty list of state specs")
    return tuple(specs)


# -- rendering -----------------------------------------------------------------

def _fmt(x):
    x = float(x)
    return f"{0.0 if x == 0 else x:.6f}"


def render_grid(w):
    """Text grid in table orientation with the axis legend."""
    if not isinstance(w, WignerGrid):
        w = WignerGrid(w)
    rows, labels = w.rows()
    n = w.n_qubits
    p_name = "(p1,p2)" if n == 2 else "p"
    q_name = "(q1,q2)" if n == 2 else "q"
    cells = [[_fmt(x) for x in row] for row in rows]
    width = max(len(c) for row in cells for c in row)
    lab_w = max(len(p_name), len(labels[0]))
    lines = [p_name]
    for label, row in zip(reversed(labels), cells):
        lines.append(f"{label:>{lab_w}} | " + "  ".join(c.rjust(width) for c in row))
    lines.append(" " * lab_w + " +-" + "-" * (len(labels) * (width + 2) - 2))
    lines.append(" " * (lab_w + 3) + "  ".join(lab.rjust(width) for lab in labels) + f"   {q_name}")
    return "\n".join(lines) + "\n"


def _csv_text(header_comment, fieldnames, rows):
    buf = io.StringIO()
    buf.write(f"# {header_comment}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fieldnames)
    writer.writerows(rows)
    return buf.getvalue()


def _json_text(obj):
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _json_float(x):
    x = float(x)
    return None if np.isnan(x) else x


# -- commands ------------------------------------------------------------------

def cmd_wf(config):
    rho = config.state
    w = wigner_values(rho.mat)
    chi = char_values(rho.mat)
    n = rho.n_qubits
    if config.output_format == "json":
        return _json_text(
            {
                "n_qubits": n,
                "index_order": WIGNER_ORDER_2 if n == 2 else WIGNER_ORDER_1,
                "wigner": w.ravel().tolist(),
                "char_index_order": CHAR_ORDER_2 if n == 2 else CHAR_ORDER_1,
                "char": chi.ravel().tolist(),
                "purity": purity(WignerGrid(w)),
            }
        ), EXIT_OK
    if config.output_format == "csv":
        names = ["q1", "q2", "p1", "p2"] if n == 2 else ["q", "p"]
        rows = []
        for idx, (wv, cv) in enumerate(zip(w.ravel(), chi.ravel())):
            bits = [(idx >> k) & 1 for k in reversed(range(2 * n))]
            rows.append(bits + [experiments.format_float(wv), experiments.format_float(cv)])
        header = f"wignerlab-wf/1 version={__version__} order={WIGNER_ORDER_2 if n == 2 else WIGNER_ORDER_1}"
        return _csv_text(header, names + ["wigner", "char"], rows), EXIT_OK
    return render_grid(w), EXIT_OK


def cmd_criteria(config):
    report = criteria.run_all(config.state, tol=config.tolerance, check=False)
    oracle = report.oracle
    bad = [
        v for v in report.verdicts
        if criteria._contradicts(v.decision.value, oracle.decision.value)
    ]
    code = EXIT_CONSISTENCY if bad else EXIT_OK
    if config.output_format == "json":
        payload = {
            "tolerance": config.tolerance,
            "criteria": [v.as_dict() for v in report.verdicts],
            "oracle": oracle.as_dict(),
            "contradictions": [v.criterion for v in bad],
        }
        return _json_text(payload), code
    if config.output_format == "csv":
        rows = [
            [v.criterion, v.decision.value, experiments.format_float(v.margin), repr(v.tol)]
            for v in report
        ]
        return _csv_text(
            f"wignerlab-criteria/1 version={__version__}",
            ["criterion", "decision", "margin", "tolerance"],
            rows,
        ), code
    width = max(len(v.criterion) for v in report)
    lines = [
        f"{v.criterion:<{width}}  {str(v.decision):<12}  margin {v.margin: .6e}  tol {v.tol:.1e}"
        for v in report.verdicts
    ]
    lines.append(
        f"{'oracle':<{width}}  {str(oracle.decision):<12}  min eig(rho^T2) {oracle.margin: .6e}"
    )
    for v in bad:
        lines.append(
            f"CONTRADICTION: {v.criterion} says {v.decision}, ppt_oracle says {oracle.decision}"
        )
    return "\n".join(lines) + "\n", code


def _witness_list(config):
    """``[(name, spec_or_matrix)]``: user set, or Bell states, then random pure states."""
    items = []
    if config.witness_set is not None:
        items += [(f"witness[{i}]", spec) for i, spec in enumerate(config.witness_set)]
    else:
        items += [(kind, states.bell(kind)) for kind in states.BELL_KINDS]
    extra = config.samples if config.witness_set is None else 0
    if extra:
        rng = np.random.default_rng([config.seed, 0])
        for i, mat in enumerate(states.random_pure(rng, size=extra)):
            items.append((f"random[{i}]", states.DensityMatrix(mat)))
    return items


def cmd_witness(config):
    pair = criteria.wigner_pt(config.state)
    rows, skipped = [], []
    for name, item in _witness_list(config):
        try:
            rho_w = item if isinstance(item, states.DensityMatrix) else states.parse_state(item)
            value = criteria.witness_overlap(pair, rho_w)
        except InvalidInputError as exc:
            print(f"warning: skipping {name}: {exc}", file=sys.stderr)
            skipped.append({"witness": name, "reason": str(exc)})
            continue
        rows.append({"witness": name, "overlap": value, "certifies": value < -config.tolerance})
    if not rows:
        raise InvalidInputError("no valid witnesses")
    if config.output_format == "json":
        return _json_text(
            {"tolerance": config.tolerance, "witnesses": rows, "skipped": skipped}
        ), EXIT_OK
    if config.output_format == "csv":
        table = [[r["witness"], experiments.format_float(r["overlap"]), str(r["certifies"]).lower()] for r in rows]
        table += [[s["witness"], "", "skipped"] for s in skipped]
        return _csv_text(
            f"wignerlab-witness/1 version={__version__}", ["witness", "overlap", "certifies"], table
        ), EXIT_OK
    width = max(len(r["witness"]) for r in rows)
    lines = [
        f"{r['witness']:<{width}}  overlap {r['overlap']: .6e}  "
        + ("certifies entanglement" if r["certifies"] else "no certificate")
        for r in rows
    ]
    lines += [f"{s['witness']:<{width}}  skipped: {s['reason']}" for s in skipped]
    return "\n".join(lines) + "\n", EXIT_OK


def _batch_rows(result):
    floats = {"werner_x", "min_w", "min_w_pt", "oracle_min_eig", "purity"}
    for rec in result.records():
        yield [
            experiments.format_float(rec[c]) if c in floats else rec[c]
            for c in experiments.BATCH_COLUMNS
        ]


def _batch_summary_text(result):
    s = result.summary
    lines = [
        f"sampler {result.sampler}  samples {len(result)}  seed {result.seed}  tol {result.tol:g}",
        f"contradictions: {s['contradictions']}",
        "min W over oracle-separable samples: "
        + ("n/a" if s["min_w_separable"] is None else f"{s['min_w_separable']:.6f}")
        + f"  (bound {s['negativity_bound']:.6f})",
        "verdict counts:",
    ]
    for name, counts in s["verdict_counts"].items():
        parts = "  ".join(f"{k}={v}" for k, v in counts.items())
        lines.append(f"  {name:<20} {parts}")
    lines.append("Werner detection onset (first grid x with Entangled):")
    for name, x in s["werner_detection"]["onset"].items():
        lines.append(f"  {name:<20} {'never' if x is None else f'{x:.6f}'}")
    return "\n".join(lines) + "\n"


def cmd_batch(config):
    result = experiments.run_batch(
        config.sampler, config.samples, seed=config.seed, tol=config.tolerance, workers=config.workers
    )
    if config.output_format == "csv":
        header = (
            f"{experiments.BATCH_SCHEMA} version={__version__} sampler={config.sampler} "
            f"samples={config.samples} seed={config.seed} tol={config.tolerance!r}"
        )
        return _csv_text(header, experiments.BATCH_COLUMNS, _batch_rows(result)), EXIT_OK
    if config.output_format == "json":
        records = [
            {k: (_json_float(v) if isinstance(v, float) else v) for k, v in rec.items()}
            for rec in result.records()
        ]
        payload = {
            "schema": experiments.BATCH_SCHEMA,
            "version": __version__,
            "config": {
                "sampler": config.sampler,
                "samples": config.samples,
                "seed": config.seed,
                "tolerance": config.tolerance,
            },
            "summary": result.summary,
            "records": records,
        }
        return _json_text(payload), EXIT_OK
    return _batch_summary_text(result), EXIT_OK


_COMMANDS = {"wf": cmd_wf, "criteria": cmd_criteria, "witness": cmd_witness, "batch": cmd_batch}


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        if config.command == "criteria" and config.state.n_qubits != 2:
            raise InvalidInputError("criteria need a two-qubit state")
        if config.command == "witness" and config.state.n_qubits != 2:
            raise InvalidInputError("witness overlaps need a two-qubit state")
        text, code = _COMMANDS[config.command](config)
        _emit(text, config.out)
    except ConsistencyError as exc:
        print(f"consistency violation: {exc}", file=sys.stderr)
        state = getattr(exc, "state", None)
        if state is not None:
            print("offending state:", file=sys.stderr)
            print(json.dumps(state), file=sys.stderr)
        return EXIT_CONSISTENCY
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    return code


if __name__ == "__main__":
    sys.exit(main())
