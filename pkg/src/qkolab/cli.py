"""Experiment runner: seeded, byte-reproducible subcommands over the
protocol, complexity, fingerprint, and demon modules.

Outputs are canonical JSON (sorted keys, floats formatted %.12g) or
RFC-4180 CSV, written atomically. A flat key=value config file can supply
defaults; command-line flags override it. QKOLAB_THREADS is accepted as a
parallelism cap; trial loops are order-independent and run sequentially,
which is the degenerate (and byte-stable) schedule for every thread count.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
from dataclasses import asdict

from .bits import BitString
from .codes import (
    concatenated_code,
    hadamard_code,
    simplex_code,
    verify_distance,
)
from .complexity import (
    bell_pair_circuit,
    cbe_upper,
    knet_upper,
)
from .compressor import METHOD_ID
from .demon import demon_step, multiphoton_ledger
from .errors import CapError, DecodeError, InputError, QkolabError
from .fingerprint import build_fingerprint, build_hx_circuit, extract_codeword
from .smp import ExperimentConfig, communication_report, monte_carlo
from .states import StateVector


def canonical_json(obj, indent: int = 0) -> str:
    """Deterministic JSON: sorted keys, %.12g floats, no locale surprises."""
    pad = " " * indent
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            raise InputError("non-finite float in report")
        return "%.12g" % obj
    if isinstance(obj, str):
        out = ['"']
        for ch in obj:
            if ch in '"\\':
                out.append("\\" + ch)
            elif ord(ch) < 0x20:
                out.append("\\u%04x" % ord(ch))
            else:
                out.append(ch)
        out.append('"')
        return "".join(out)
    if isinstance(obj, dict):
        items = sorted(obj.items())
        inner = ",".join(
            f"\n{pad}  {canonical_json(k)}: {canonical_json(v, indent + 2)}"
            for k, v in items
        )
        return "{" + inner + ("\n" + pad + "}" if items else "}")
    if isinstance(obj, (list, tuple)):
        inner = ",".join(canonical_json(v, indent) for v in obj)
        return "[" + inner + "]"
    raise InputError(f"cannot serialize {type(obj).__name__}")


def atomic_write(path: str, data: str) -> None:
    tmp = path + ".tmp"
    try:
        with open(tmp, "w", newline="") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except OSError as e:
        raise InputError(f"cannot write {path}: {e}") from e


def _csv_text(rows: list[dict]) -> str:
    if not rows:
        return ""
    buf = io.StringIO()
    writer = csv.DictWriter(
        buf, fieldnames=list(rows[0].keys()), lineterminator="\r\n"
    )
    writer.writeheader()
    for row in rows:
        writer.writerow(
            {
                k: ("%.12g" % v if isinstance(v, float) else v)
                for k, v in row.items()
            }
        )
    return buf.getvalue()


def emit(report: dict, fmt: str, path: str | None, rows: list[dict] | None = None) -> None:
    """Writes the report (JSON) or its row table (CSV) to path, or prints
    the JSON to stdout when no path is given."""
    if fmt == "json":
        text = canonical_json(report) + "\n"
    elif fmt == "csv":
        if rows is None:
            raise InputError("this subcommand has no CSV row form")
        text = _csv_text(rows)
    else:
        raise InputError(f"unknown format {fmt!r}")
    if path is None:
        sys.stdout.write(text)
    else:
        atomic_write(path, text)


def _threads() -> int:
    raw = os.environ.get("QKOLAB_THREADS", "1")
    try:
        val = int(raw)
    except ValueError:
        raise InputError(f"QKOLAB_THREADS must be an integer, got {raw!r}")
    if val < 1:
        raise InputError("QKOLAB_THREADS must be >= 1")
    return val


def _build_code(args):
    if args.code == "hadamard":
        return hadamard_code(args.n)
    if args.code == "simplex":
        return simplex_code(args.n)
    if args.code == "concatenated":
        return concatenated_code(args.n, args.c)
    raise InputError(f"unknown code {args.code!r}")


def _cmd_codes_verify(args) -> int:
    code = _build_code(args)
    mode = args.mode if args.mode != "exhaustive" else "exhaustive"
    if args.mode == "sampled":
        mode = f"sampled({args.samples})"
    delta, mode = verify_distance(code, mode)
    report = {
        "config": _config_echo(args),
        "name": code.name,
        "n": code.n,
        "m": code.m,
        "delta_verified": delta,
        "verification_mode": mode,
    }
    print(f"delta = {'%.12g' % delta}")
    emit(report, args.format, args.out, rows=[report | {"config": ""}])
    return 0


def _cmd_equality(args) -> int:
    code = _build_code(args)
    cfg = ExperimentConfig(
        code,
        args.protocol,
        args.trials,
        args.seed,
        k=args.k,
        s=args.s,
        eps_a=args.eps_a,
        mode=args.mode,
        inputs=args.inputs,
    )
    rep = monte_carlo(cfg)
    report = {
        "config": _config_echo(args),
        "decided": rep.decided,
        "restarts": rep.restarts,
        "error_rate": rep.error_rate,
        "wilson_99": list(rep.wilson_99),
        "mean_bits": rep.mean_classical_bits,
        "mean_qubits": rep.mean_qubits,
        "per_direction_errors": {
            "false_equal": rep.false_equal,
            "false_not_equal": rep.false_not_equal,
        },
    }
    emit(report, args.format, args.out)
    return 0


def _cmd_complexity_report(args) -> int:
    if args.target == "bell":
        circuit = bell_pair_circuit(args.n)
        state = None
    elif args.target == "fingerprint":
        code = hadamard_code(args.n)
        x = _parse_bits(args.x, args.n)
        circuit = build_hx_circuit(code, x)
        state = build_fingerprint(code, x).state
    else:
        raise InputError(f"unknown target {args.target!r}")
    knet = knet_upper(circuit)
    report = {
        "config": _config_echo(args),
        "subject": args.target,
        "knet_upper_bits": knet.compressed_length_bits,
        "raw_knet_bits": knet.raw_length_bits,
        "cbe_upper_bits": None,
        "raw_cbe_bits": None,
        "eps_a": args.eps_a,
        "method_id": METHOD_ID,
    }
    if state is not None:
        cbe = cbe_upper(state, args.eps_a)
        report["cbe_upper_bits"] = cbe.compressed_length_bits
        report["raw_cbe_bits"] = cbe.raw_length_bits
    emit(report, args.format, args.out)
    return 0


def _parse_bits(text: str | None, n: int) -> BitString:
    if text is None:
        raise InputError("this subcommand requires --x")
    if len(text) != n or set(text) - {"0", "1"}:
        raise InputError(f"--x must be {n} characters of 0/1")
    return BitString(text)


def _cmd_fingerprint_build(args) -> int:
    code = _build_code(args)
    fp = build_fingerprint(code, _parse_bits(args.x, code.n))
    if args.out is None:
        sys.stdout.write(fp.state.to_json() + "\n")
    else:
        atomic_write(args.out, fp.state.to_json() + "\n")
    return 0


def _cmd_fingerprint_extract(args) -> int:
    code = _build_code(args)
    try:
        with open(args.state) as fh:
            state = StateVector.from_json(fh.read())
    except OSError as e:
        raise InputError(f"cannot read {args.state}: {e}") from e
    res = extract_codeword(state, code)
    report = {
        "config": _config_echo(args),
        "word": res.word.to_text(),
        "status": res.status,
        "message": res.message.to_text() if res.message is not None else None,
    }
    emit(report, args.format, args.out)
    return 0


def _ledger_dict(ledger, n: int, m: int) -> dict:
    return {
        "n": n,
        "m": m,
        "strategy": ledger.strategy,
        "S_in": ledger.S_in,
        "I_in": ledger.I_in,
        "S_fin": ledger.S_fin,
        "I_fin": ledger.I_fin,
        "delta_total_bits": ledger.delta_total,
        "work_joules": ledger.work_joules,
        "kB": ledger.kB,
        "T": ledger.T,
        "surrogate_method": ledger.surrogate_method,
    }


def _cmd_demon_run(args) -> int:
    record, _post, ledger = demon_step(args.m, args.seed, args.kB, args.T)
    report = {
        "config": _config_echo(args),
        "record": record.full_record.to_text(),
        "outcome": record.outcome_bit,
        "ledger": _ledger_dict(ledger, 1, args.m),
    }
    emit(report, args.format, args.out)
    return 0


def _cmd_demon_multi(args) -> int:
    cmp_ = multiphoton_ledger(
        args.n, args.m, args.eps, args.mode, args.kB, args.T, args.seed
    )
    report = {
        "config": _config_echo(args),
        "product": _ledger_dict(cmp_.product, args.n, args.m),
        "entangled": _ledger_dict(cmp_.entangled, args.n, args.m),
        "entangled_exceeds_product": cmp_.entangled_exceeds_product,
    }
    emit(report, args.format, args.out)
    return 0


def _cmd_sweep(args) -> int:
    if args.n_min > args.n_max:
        raise InputError("--n-min must be <= --n-max")
    rows = [
        asdict(row)
        for row in communication_report(range(args.n_min, args.n_max + 1), args.k, args.p)
    ]
    report = {"config": _config_echo(args), "rows": rows}
    emit(report, args.format, args.out, rows=rows)
    return 0


def _config_echo(args) -> dict:
    # threads are validated but not echoed: scheduling must not change output
    _threads()
    skip = {"func", "config"}
    return {k: v for k, v in vars(args).items() if k not in skip}


def _add_common(sp, fmt_default: str = "json"):
    sp.add_argument("--out", default=None, help="output path (stdout if omitted)")
    sp.add_argument("--format", choices=("json", "csv"), default=fmt_default)


def _add_code_flags(sp):
    sp.add_argument(
        "--code", choices=("hadamard", "simplex", "concatenated"), default="hadamard"
    )
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--c", type=int, default=4, help="rate multiple for concatenated")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qkolab")
    parser.add_argument("--config", default=None, help="flat key=value defaults file")
    sub = parser.add_subparsers(dest="command", required=True)

    codes = sub.add_parser("codes").add_subparsers(dest="action", required=True)
    cv = codes.add_parser("verify")
    _add_code_flags(cv)
    cv.add_argument("--mode", choices=("exhaustive", "sampled"), default="exhaustive")
    cv.add_argument("--samples", type=int, default=10000)
    _add_common(cv)
    cv.set_defaults(func=_cmd_codes_verify)

    eq = sub.add_parser("equality")
    eq.add_argument(
        "--protocol",
        choices=("classical", "classical-multi", "quantum", "classical-sim"),
        required=True,
    )
    _add_code_flags(eq)
    eq.add_argument("--k", type=int, default=1)
    eq.add_argument("--s", type=int, default=None)
    eq.add_argument("--trials", type=int, required=True)
    eq.add_argument("--seed", type=int, required=True)
    eq.add_argument("--eps-a", dest="eps_a", type=float, default=None)
    eq.add_argument("--mode", choices=("threshold", "sampled"), default="threshold")
    eq.add_argument(
        "--inputs", choices=("random-unequal", "random-equal"), default="random-unequal"
    )
    _add_common(eq)
    eq.set_defaults(func=_cmd_equality)

    comp = sub.add_parser("complexity").add_subparsers(dest="action", required=True)
    cr = comp.add_parser("report")
    cr.add_argument("--target", choices=("bell", "fingerprint"), required=True)
    cr.add_argument("--n", type=int, required=True)
    cr.add_argument("--x", default=None)
    cr.add_argument("--eps-a", dest="eps_a", type=float, default=2.0**-16)
    _add_common(cr)
    cr.set_defaults(func=_cmd_complexity_report)

    fp = sub.add_parser("fingerprint").add_subparsers(dest="action", required=True)
    fb = fp.add_parser("build")
    _add_code_flags(fb)
    fb.add_argument("--x", required=True)
    fb.add_argument("--out", default=None)
    fb.set_defaults(func=_cmd_fingerprint_build, format="json")
    fe = fp.add_parser("extract")
    _add_code_flags(fe)
    fe.add_argument("--state", required=True, help="statevector JSON file")
    _add_common(fe)
    fe.set_defaults(func=_cmd_fingerprint_extract)

    dm = sub.add_parser("demon").add_subparsers(dest="action", required=True)
    dr = dm.add_parser("run")
    dr.add_argument("--m", type=int, required=True)
    dr.add_argument("--seed", type=int, required=True)
    dr.add_argument("--kB", type=float, default=1.380649e-23)
    dr.add_argument("--T", type=float, default=300.0)
    _add_common(dr)
    dr.set_defaults(func=_cmd_demon_run)
    dmu = dm.add_parser("multi")
    dmu.add_argument("--n", type=int, required=True)
    dmu.add_argument("--m", type=int, required=True)
    dmu.add_argument("--eps", type=float, required=True)
    dmu.add_argument("--mode", choices=("formula", "simulated"), default="formula")
    dmu.add_argument("--seed", type=int, default=0)
    dmu.add_argument("--kB", type=float, default=1.380649e-23)
    dmu.add_argument("--T", type=float, default=300.0)
    _add_common(dmu)
    dmu.set_defaults(func=_cmd_demon_multi)

    sw = sub.add_parser("sweep")
    sw.add_argument("--n-min", dest="n_min", type=int, required=True)
    sw.add_argument("--n-max", dest="n_max", type=int, required=True)
    sw.add_argument("--k", type=int, default=1)
    sw.add_argument("--p", type=int, default=16)
    _add_common(sw, fmt_default="csv")
    sw.set_defaults(func=_cmd_sweep)
    return parser


def _load_config_file(path: str) -> list[str]:
    flags = []
    try:
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise InputError(f"bad config line {line!r} (expected key=value)")
                key, value = line.split("=", 1)
                flags.extend([f"--{key.strip()}", value.strip()])
    except OSError as e:
        raise InputError(f"cannot read config {path}: {e}") from e
    return flags


def _effective_argv(argv: list[str]) -> list[str]:
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise InputError("--config needs a path")
    flags = _load_config_file(argv[i + 1])
    rest = argv[:i] + argv[i + 2 :]
    # insert file-supplied flags before explicit flags so the latter win
    split = next((j for j, tok in enumerate(rest) if tok.startswith("-")), len(rest))
    return rest[:split] + flags + rest[split:]


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        args = parser.parse_args(_effective_argv(list(argv)))
        return args.func(args)
    except CapError as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except (InputError, DecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except QkolabError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except SystemExit as e:  # argparse usage errors
        return 2 if e.code else 0


if __name__ == "__main__":
    sys.exit(main())
