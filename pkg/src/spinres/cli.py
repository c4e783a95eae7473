"""Command-line client for the benchmark service.

Subcommands: run, trace, sweep, and esn (run with the reference reservoir).
Each request goes through the in-process HTTP service, so every artifact a
command writes came over the same request/response path a network client
would use. All outputs are deterministic functions of the configuration.

Exit status is 0 iff all requested work completed; failures print a
diagnostic naming the stage that broke (config, layout, dynamics, learning).
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from pathlib import Path

import httpx
import numpy as np

from .dynamics import trace_csv_text
from .task import states_csv_text

SWEEP_COLUMNS = ("status", "train_accuracy", "test_accuracy",
                 "quantized_train_accuracy", "quantized_test_accuracy",
                 "coupling_ratio", "run_hash", "elapsed_seconds", "error")


def _fail(stage: str, detail: str) -> None:
    print(f"error [{stage}]: {detail}", file=sys.stderr)
    raise SystemExit(1)


def _post(path: str, payload: dict) -> httpx.Response:
    """Send one request to the in-process service."""
    from .service.app import app

    async def go() -> httpx.Response:
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(transport=transport,
                                     base_url="http://service",
                                     timeout=None) as client:
            return await client.post(path, json=payload)

    return asyncio.run(go())


def _check(resp: httpx.Response) -> dict:
    """Return the JSON body of a success, or exit with its diagnostic."""
    if resp.status_code == 200:
        return resp.json()
    try:
        body = resp.json()
    except ValueError:
        _fail("dynamics", resp.text)
    if resp.status_code == 422:   # request body rejected by the schema
        details = "; ".join(
            ".".join(str(p) for p in e.get("loc", [])) + f": {e.get('msg', '')}"
            for e in body.get("detail", []))
        _fail("config", details or str(body))
    _fail(body.get("stage", "dynamics"), body.get("detail", str(body)))


def _load_config_dict(path: str | None) -> dict:
    """Read a config file as a plain dict; the service validates it."""
    if path is None:
        return {}
    p = Path(path)
    if not p.exists():
        _fail("config", f"config file not found: {p}")
    try:
        payload = json.loads(p.read_text())
    except json.JSONDecodeError as exc:
        _fail("config", f"config file {p}: {exc}")
    if not isinstance(payload, dict):
        _fail("config", f"config file {p}: expected a JSON object")
    return payload


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _dump(payload, path: Path) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_run(args, reservoir: str | None = None) -> int:
    """Run one experiment; write config snapshot, report, states, weights."""
    payload = _load_config_dict(args.config)
    if reservoir is not None:
        payload["reservoir"] = reservoir
    out = _out_dir(args)
    data = _check(_post("/run", {"config": payload}))

    _dump(data["report"]["config"], out / "config.json")
    _dump(data["report"], out / "report.json")
    _dump(data["weights"], out / "weights.json")
    if data["quantized_weights"] is not None:
        _dump(data["quantized_weights"], out / "weights_quantized.json")
    states = np.array(data["states"], dtype=np.float64).T
    labels = np.array(data["labels"], dtype=np.int64)
    (out / "states.csv").write_text(
        states_csv_text(data["run_hash"], labels, states))

    quant = ""
    if data["quantized_test_accuracy"] is not None:
        quant = f" quantized-test {data['quantized_test_accuracy']:.4f}"
    print(f"run {data['run_hash']}: train {data['train_accuracy']:.4f} "
          f"test {data['test_accuracy']:.4f}{quant} "
          f"({data['elapsed_seconds']:.2f}s) -> {out}")
    return 0


def cmd_trace(args) -> int:
    """Record a dense m_z trace of the benchmark stream for chosen magnets."""
    payload = _load_config_dict(args.config)
    indices: list[int] = []
    if args.indices:
        try:
            indices = [int(tok) for tok in args.indices.split(",") if tok.strip()]
        except ValueError:
            _fail("config", f"bad --indices {args.indices!r}, expected e.g. 7,12,15")
    out = _out_dir(args)
    data = _check(_post("/trace", {"config": payload, "indices": indices,
                                   "stride": args.stride}))

    text = trace_csv_text(np.array(data["times_ns"]),
                          np.array(data["m_z"], dtype=np.float64),
                          data["indices"])
    (out / "trace.csv").write_text(text)
    print(f"trace {data['run_hash']}: {len(data['times_ns'])} rows x "
          f"{len(data['indices'])} magnets -> {out / 'trace.csv'}")
    return 0


def parse_grid(spec: str) -> dict[str, list]:
    """Parse 'field=v1,v2;field2=v3' into an ordered grid mapping.

    Values parse as JSON scalars where possible (numbers, booleans, null)
    and stay strings otherwise. material.<param> fields override the magnet
    material for nanomagnet points.
    """
    grid: dict[str, list] = {}
    for part in spec.split(";"):
        part = part.strip()
        if not part:
            continue
        key, eq, values = part.partition("=")
        if not eq or not key.strip():
            _fail("config", f"bad grid entry {part!r}, expected field=v1,v2")
        parsed = []
        for tok in values.split(","):
            tok = tok.strip()
            try:
                parsed.append(json.loads(tok))
            except json.JSONDecodeError:
                parsed.append(tok)
        grid[key.strip()] = parsed
    if not grid:
        _fail("config", f"empty grid spec {spec!r}")
    return grid


def _sweep_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value).replace(",", ";").replace("\n", " ")


def cmd_sweep(args) -> int:
    """Evaluate a parameter grid; one summary CSV row per point."""
    payload = _load_config_dict(args.config)
    grid = parse_grid(args.grid)
    out = _out_dir(args)
    data = _check(_post("/sweep", {"config": payload, "grid": grid,
                                   "workers": args.workers}))

    keys = list(grid)
    lines = [",".join(keys + list(SWEEP_COLUMNS))]
    for row in data["rows"]:
        cells = [_sweep_cell(row["point"].get(k)) for k in keys]
        cells += [_sweep_cell(row[c]) for c in SWEEP_COLUMNS]
        lines.append(",".join(cells))
    (out / "sweep.csv").write_text("\n".join(lines) + "\n")

    failed = sum(row["status"] == "failed" for row in data["rows"])
    print(f"sweep: {len(data['rows'])} points, {failed} failed "
          f"-> {out / 'sweep.csv'}")
    return 0


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spinres",
        description="Waveform-identification benchmark on a dipole-coupled "
                    "nanomagnet array (or a reference echo state network).")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", metavar="PATH",
                       help="JSON run configuration (defaults apply if omitted)")
        p.add_argument("--out", metavar="DIR", default=".",
                       help="directory for artifact files (default: .)")

    p_run = sub.add_parser("run", help="run one experiment and write artifacts")
    common(p_run)
    p_run.set_defaults(func=cmd_run)

    p_esn = sub.add_parser("esn", help="run with the reference echo state network")
    common(p_esn)
    p_esn.set_defaults(func=lambda a: cmd_run(a, reservoir="esn"))

    p_trace = sub.add_parser("trace", help="record a dense m_z trajectory")
    common(p_trace)
    p_trace.add_argument("--indices", metavar="LIST", default="",
                         help="comma-separated magnet indices (default: all)")
    p_trace.add_argument("--stride", metavar="N", type=int, default=100,
                         help="integration steps between trace rows "
                              "(default: 100); must divide one hold interval")
    p_trace.set_defaults(func=cmd_trace)

    p_sweep = sub.add_parser("sweep", help="evaluate a parameter grid")
    common(p_sweep)
    p_sweep.add_argument("--grid", metavar="SPEC", required=True,
                         help="grid as 'field=v1,v2;field2=v3'; "
                              "material.<param> overrides the material")
    p_sweep.add_argument("--workers", metavar="N", type=int, default=1,
                         help="concurrent sweep points (default: 1)")
    p_sweep.set_defaults(func=cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
