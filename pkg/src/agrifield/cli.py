"""Command line entry points: run, recommend, ml, serve.

Exit codes are a stable scripting contract: 0 success, 1 usage error,
2 I/O or data-schema error. All commands are deterministic given their
flags and seed. AGRIFIELD_CONFIG may point at a default scenario file.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import agronomy
from .damageml import (
    FeatureSpec,
    ModelSpec,
    load_records,
    run_experiment,
    synth_generate,
)
from .damageml.metrics import render_table, report_rows
from .damageml.pipeline import DtParams, KnnParams, RfParams
from .errors import DomainError, NotFoundError, ProtocolError, SchemaError
from .modbus import frame_to_hex
from .scenario import Scenario, load_scenario, run_scenario, write_trace_csv

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_IO = 2


class CliParser(argparse.ArgumentParser):
    """argparse exits 2 on bad flags; our contract reserves 2 for I/O."""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _nonnegative(raw: str) -> float:
    value = float(raw)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {raw}")
    return value


def _resolve_scenario(path: str | None) -> Scenario:
    path = path or os.environ.get("AGRIFIELD_CONFIG")
    return load_scenario(path) if path else Scenario()


def build_parser() -> CliParser:
    parser = CliParser(prog="agrifield", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a closed-loop irrigation scenario")
    p_run.add_argument("--scenario", help="scenario JSON (default: $AGRIFIELD_CONFIG or built-in)")
    p_run.add_argument("--seed", type=int, help="override the scenario RNG seed")
    p_run.add_argument("--duration", type=int, help="override the tick count")
    p_run.add_argument("--output", default="trace.csv", help="trace CSV destination")
    p_run.add_argument(
        "--npk-poll", type=int, default=0, metavar="N",
        help="also read the NPK probe over the RTU bus every N ticks",
    )
    p_run.add_argument(
        "--dump-hex", action="store_true",
        help="print each bus frame as space-separated hex on stderr",
    )

    p_rec = sub.add_parser("recommend", help="fertilizer doses for a crop")
    p_rec.add_argument("--crop", required=True)
    p_rec.add_argument("--n", type=_nonnegative, default=0.0, help="soil nitrogen kg/ha")
    p_rec.add_argument("--p", type=_nonnegative, default=0.0, help="soil phosphorus kg/ha")
    p_rec.add_argument("--k", type=_nonnegative, default=0.0, help="soil potassium kg/ha")
    p_rec.add_argument("--req-n", type=_nonnegative, help="requirement override, nitrogen")
    p_rec.add_argument("--req-p", type=_nonnegative, help="requirement override, phosphorus")
    p_rec.add_argument("--req-k", type=_nonnegative, help="requirement override, potassium")
    p_rec.add_argument("--table", help="crop requirement CSV (crop_name,n,p,k)")

    p_ml = sub.add_parser("ml", help="train and score damage classifiers")
    src = p_ml.add_mutually_exclusive_group(required=True)
    src.add_argument("--data", help="survey CSV with a crop_damage column")
    src.add_argument("--synthetic", type=int, metavar="N", help="generate N benchmark rows")
    p_ml.add_argument("--model", choices=["dt", "rf", "knn", "all"], default="all")
    p_ml.add_argument("--seed", type=int, default=0)
    p_ml.add_argument("--report", help="also write per-class scores to this CSV")
    p_ml.add_argument("--column-map", help="JSON file renaming canonical -> actual columns")
    p_ml.add_argument("--trees", type=int, default=50, help="forest size")
    p_ml.add_argument("--max-depth", type=int, help="override the per-model default depth")
    p_ml.add_argument("--knn-k", type=int, default=5)

    p_srv = sub.add_parser("serve", help="run the gateway and the control loop")
    p_srv.add_argument("--host", default="127.0.0.1")
    p_srv.add_argument("--port", type=int, default=8000)
    p_srv.add_argument("--scenario", help="scenario JSON (default: $AGRIFIELD_CONFIG or built-in)")
    p_srv.add_argument("--log", default="telemetry_log.jsonl", help="append-only telemetry log")
    p_srv.add_argument("--npk-poll", type=int, default=5, metavar="N")
    p_srv.add_argument("--portal", help="static portal bundle to serve at /")
    p_srv.add_argument("--dump-hex", action="store_true", help="log bus frames as hex")
    return parser


def _hex_printer(direction: str, frame: bytes) -> None:
    print(f"{direction} {frame_to_hex(frame)}", file=sys.stderr)


def cmd_run(args) -> int:
    scenario = _resolve_scenario(args.scenario).with_overrides(args.seed, args.duration)
    npk_poll = args.npk_poll or (5 if args.dump_hex else 0)
    result = run_scenario(
        scenario,
        npk_poll_ticks=npk_poll,
        frame_hook=_hex_printer if args.dump_hex else None,
    )
    write_trace_csv(result, args.output)
    print(f"ticks: {result.duration}")
    print(f"ticks_pump_on: {result.ticks_pump_on}")
    print(f"final_moisture: {result.final_moisture:.6f}")
    print(f"trace: {args.output}")
    return EXIT_OK


def cmd_recommend(args) -> int:
    req_flags = (args.req_n, args.req_p, args.req_k)
    if any(v is not None for v in req_flags):
        if any(v is None for v in req_flags):
            raise DomainError("--req-n, --req-p and --req-k must be given together")
        required = agronomy.NutrientProfile(*req_flags)
        crop_name = args.crop
    else:
        table = agronomy.load_crop_table(args.table) if args.table else None
        crop = agronomy.lookup_crop(args.crop, table)
        required, crop_name = crop.required, crop.crop_name

    soil = agronomy.NutrientProfile(args.n, args.p, args.k)
    shortfall = agronomy.deficit(soil, required)
    doses = agronomy.recommend_doses(shortfall)

    print(f"crop: {crop_name}")
    print(f"required (kg/ha): N {required.n:.2f}  P {required.p:.2f}  K {required.k:.2f}")
    print(f"soil     (kg/ha): N {soil.n:.2f}  P {soil.p:.2f}  K {soil.k:.2f}")
    print(f"deficit  (kg/ha): N {shortfall.n:.2f}  P {shortfall.p:.2f}  K {shortfall.k:.2f}")
    print(f"doses    (kg/ha): MOP {doses.mop_kg_ha:.2f}  DAP {doses.dap_kg_ha:.2f}  "
          f"urea {doses.urea_kg_ha:.2f}")
    return EXIT_OK


def cmd_ml(args) -> int:
    if args.synthetic is not None:
        if args.synthetic < 1:
            raise DomainError(f"--synthetic must be >= 1, got {args.synthetic}")
        records = synth_generate(args.synthetic, args.seed)
    else:
        column_map = None
        if args.column_map:
            import json

            column_map = json.loads(Path(args.column_map).read_text())
        records = load_records(args.data, require_label=True, column_map=column_map)

    kinds = ["dt", "rf", "knn"] if args.model == "all" else [args.model]
    reports = {}
    rows = []
    for kind in kinds:
        dt = DtParams(max_depth=args.max_depth) if args.max_depth else DtParams()
        rf = (
            RfParams(n_trees=args.trees, max_depth=args.max_depth)
            if args.max_depth
            else RfParams(n_trees=args.trees)
        )
        spec = ModelSpec(kind=kind, dt=dt, rf=rf, knn=KnnParams(k=args.knn_k))
        result = run_experiment(records, spec, seed=args.seed, feature_spec=FeatureSpec())
        reports[kind.upper()] = result.report
        rows.extend(report_rows(kind.upper(), result.report))

    print(render_table(reports))
    if args.report:
        import csv as _csv

        with open(args.report, "w", newline="") as fh:
            writer = _csv.writer(fh)
            writer.writerow(["model", "class", "precision", "recall", "f1", "accuracy"])
            for row in rows:
                writer.writerow(
                    [
                        row["model"],
                        row["class"],
                        f"{row['precision']:.6f}",
                        f"{row['recall']:.6f}",
                        f"{row['f1']:.6f}",
                        f"{row['accuracy']:.6f}",
                    ]
                )
        print(f"report: {args.report}")
    return EXIT_OK


def cmd_serve(args) -> int:
    import socket

    import uvicorn

    from .gateway.live import LiveSystem
    from .gateway.service import create_app
    from .gateway.store import TelemetryStore

    # fail fast with the documented exit code instead of uvicorn's sys.exit
    probe = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    probe.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    try:
        probe.bind((args.host, args.port))
    finally:
        probe.close()

    scenario = _resolve_scenario(args.scenario)
    store = TelemetryStore(args.log)
    system = LiveSystem(
        scenario,
        store,
        npk_poll_ticks=args.npk_poll,
        frame_hook=_hex_printer if args.dump_hex else None,
    )
    app = create_app(
        store,
        submit_command=system.submit_command,
        static_dir=args.portal,
    )
    system.start()
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    finally:
        system.stop()
        store.close()
    return EXIT_OK


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "run": cmd_run,
        "recommend": cmd_recommend,
        "ml": cmd_ml,
        "serve": cmd_serve,
    }
    try:
        return handlers[args.command](args)
    except (SchemaError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (DomainError, NotFoundError, ProtocolError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
