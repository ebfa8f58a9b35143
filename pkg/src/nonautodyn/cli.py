"""Batch experiment runner.

``nonautodyn corpus list`` lists the built-in systems, ``nonautodyn run
CONFIG`` runs a detector suite and writes a JSON report plus CSV sidecars,
and ``nonautodyn plot REPORT --kind K`` extracts one plot series as CSV.

Exit codes: 0 when every consistency row is CONSISTENT, INFO or
INCONCLUSIVE; 1 when any row is a VIOLATION; 2 on usage or config errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import platform
import sys
import time
from typing import Any

import numba
import numpy as np

from . import __version__
from . import detect as dt
from .config import ExperimentConfig
from .corpus import CorpusEntry, build_example, corpus_ids
from .errors import ConfigError, MissingSeries, NonAutoDynError
from .hitting import HittingSet, classify, histogram
from .space import Ball, Entourage
from .system import induced

REPORT_VERSION = 1
PLOT_KINDS = ("gaps", "runs", "separation", "first-hit")
TIMING_KEYS = ("timing",)
INF = "inf"


def _jsonable(o: Any):
    if isinstance(o, np.integer):
        return int(o)
    if isinstance(o, np.floating):
        return float(o)
    if isinstance(o, np.bool_):
        return bool(o)
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot serialise {type(o).__name__}")


def dumps_report(report: dict) -> str:
    return json.dumps(report, indent=1, sort_keys=True, ensure_ascii=False, default=_jsonable) + "\n"


def strip_timing(report: dict) -> dict:
    return {k: v for k, v in report.items() if k not in TIMING_KEYS}


# ---------------------------------------------------------------------------
# running detectors


def _params(entry: CorpusEntry, spec_params: dict, seed: int, workers: int) -> dt.DetectorParams:
    p = dict(spec_params)
    regions = tuple(Ball(entry.space.parse(r["center"]), float(r["radius"])) for r in p.pop("regions", []))
    return dt.DetectorParams(**p, regions=regions, seed=seed, workers=workers)


def _set_result(S: HittingSet, P: dt.DetectorParams) -> tuple[dict, dict]:
    res = {
        "size": len(S),
        "horizon": S.horizon,
        "syndetic": classify(S, "syndetic", P.bound_m).as_dict() if S.horizon >= 1 else None,
        "thick": classify(S, "thick", P.thick_k).as_dict() if S.horizon >= 1 else None,
        "info": S.info,
    }
    series = {
        "members": S.members.tolist(),
        "gaps": histogram(S.gaps()),
        "runs": histogram(S.runs()),
    }
    return res, series


def _run_one(entry: CorpusEntry, spec, which: str, P: dt.DetectorParams) -> tuple[dict, dict, list]:
    """Result, plot series and consistency rows of one detector on f or g."""
    sys_ = entry.system if which == "f" else induced(entry.system)
    space = entry.space
    a = spec.args
    name = spec.detector
    if name == "separation_hitting_set":
        U = Ball(space.parse(a["center"]), float(a["radius"]))
        S = dt.separation_hitting_set(sys_, U, Entourage(float(a.get("eps", P.separation_eps))), P)
        res, series = _set_result(S, P)
        if len(S):
            w = S.witness(int(S.members[0]))
            res["first_witness"] = {"n": int(S.members[0]), "x": space.serialize(w.x), "y": space.serialize(w.y),
                                    "value": w.value}
            depth = dt._depth(space, P.separation_eps)
            ax, ay = dt.orbit_arrays(sys_, [w.x, w.y], P.horizon, depth)
            d = space.array_distance(ax, ay)
            series["separation"] = [[n, float(d[n])] for n in range(len(d))]
        return res, series, []
    if name == "cover_hitting_set":
        V = Ball(space.parse(a["center"]), float(a["radius"]))
        S = dt.cover_hitting_set(sys_, V, dt.default_cover(space, P), P)
        res, series = _set_result(S, P)
        return res, series, []
    if name in ("sensitivity", "hausdorff_sensitivity"):
        fn = dt.sensitivity_verdict if name == "sensitivity" else dt.hausdorff_sensitivity_verdict
        return fn(sys_, a["mode"], P).as_dict(), {}, []
    if name in ("equicontinuity", "syndetic_equicontinuity"):
        E = Entourage(P.stability_eps)
        if "point" in a:
            fn = dt.equicontinuity_at if name == "equicontinuity" else dt.syndetic_equicontinuity_at
            return fn(sys_, space.parse(a["point"]), E, P).as_dict(), {}, []
        fn = dt.equicontinuity_verdict if name == "equicontinuity" else dt.syndetic_equicontinuity_verdict
        return fn(sys_, P).as_dict(), {}, []
    if name == "eventual_sensitivity":
        return dt.eventual_sensitivity_check(sys_, P).as_dict(), {}, []
    if name in ("eqp", "seqp"):
        x, y = space.parse(a["x"]), space.parse(a["y"])
        fn = dt.eqp_check if name == "eqp" else dt.seqp_check
        return fn(sys_, x, y, Ball(y, float(a["o_radius"])), P).as_dict(), {}, []
    if name == "visit_times":
        targets = [Ball(space.parse(t["center"]), float(t["radius"])) for t in a["targets"]]
        hits = dt.visit_times(sys_, space.parse(a["point"]), targets, P.horizon)
        table = [INF if h is None else h for h in hits]
        return {"point": a["point"], "horizon": P.horizon, "first_hits": table}, {
            "first-hit": [[j, h] for j, h in enumerate(table)]
        }, []
    if name == "minimality":
        starts = [space.parse(s) for s in a["starts"]] if "starts" in a else None
        v = dt.minimality_estimate(sys_, P, starts)
        first = v.certificate["first_hits"][0] if v.certificate["first_hits"] else []
        return v.as_dict(), {"first-hit": [[j, INF if h < 0 else h] for j, h in enumerate(first)]}, []
    if name == "omega_nonwandering":
        return dt.omega_nonwandering_estimate(sys_, space.parse(a["point"]), P), {}, []
    if name == "dichotomy_report":
        rep = dt.dichotomy_report(entry, P, a.get("rows"))
        rows = [{"source": "dichotomy", **r} for r in rep["matrix"]]
        rows += [{"source": "manifest", "row": m["property"], **m} for m in rep["manifest"]]
        return rep, {}, rows
    raise ConfigError("detector", f"unknown detector {name!r}")


def run_experiment(config: ExperimentConfig, workers: int = 1, write: bool = True) -> dict:
    """Run every configured detector; errors are recorded per row."""
    t0 = time.perf_counter()
    entry = build_example(config.entry, config.system_params)
    rows, series, consistency, timings = [], {}, [], []
    for i, spec in enumerate(config.detectors):
        for which in spec.which:
            if spec.detector == "dichotomy_report" and which == "g":
                continue  # the report already covers both systems
            key = f"{i}:{which}"
            t1 = time.perf_counter()
            row: dict = {"id": key, "detector": spec.detector, "which": which}
            try:
                P = _params(entry, spec.params, config.seed, workers)
                res, ser, cons = _run_one(entry, spec, which, P)
                row.update(status="ok", result=res)
                if ser:
                    series[key] = ser
                consistency += [{"id": key, **c} for c in cons]
            except (NonAutoDynError, ValueError, KeyError) as e:
                row.update(status="error", error={"type": type(e).__name__, "message": str(e)})
            rows.append(row)
            timings.append({"id": key, "seconds": round(time.perf_counter() - t1, 3)})
    report = {
        "version": REPORT_VERSION,
        "config": config.to_dict(),
        "system": {"entry": entry.entry_id, "description": entry.description, "params": entry.params},
        "rows": rows,
        "consistency": consistency,
        "series": series,
        "versions": {
            "nonautodyn": __version__,
            "numpy": np.__version__,
            "numba": numba.__version__,
            "python": platform.python_version(),
        },
        "timing": {"wall_clock_s": round(time.perf_counter() - t0, 3), "rows": timings},
    }
    if write:
        write_outputs(report, config.output)
    return report


def exit_status(report: dict) -> int:
    return 1 if any(c.get("flag") == "VIOLATION" for c in report["consistency"]) else 0


# ---------------------------------------------------------------------------
# outputs


def _csv(header: list[str], rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


_COLUMNS = {
    "gaps": ["gap", "count"],
    "runs": ["run", "count"],
    "separation": ["n", "distance"],
    "first-hit": ["target", "first_hit"],
}


def emit_plot_data(report: dict, kind: str, row: str | None = None) -> str:
    """One plot series of a report as CSV text with a header row."""
    if kind not in PLOT_KINDS:
        raise ValueError(f"kind must be one of {PLOT_KINDS}")
    series = report.get("series", {})
    keys = [row] if row is not None else sorted(series, key=_row_order)
    for k in keys:
        if kind in series.get(k, {}):
            return _csv(_COLUMNS[kind], series[k][kind])
    raise MissingSeries(f"report has no {kind!r} series" + (f" for row {row}" if row else ""))


def _row_order(key: str) -> tuple[int, str]:
    i, w = key.split(":")
    return int(i), w


def write_outputs(report: dict, outdir: str) -> list[str]:
    os.makedirs(outdir, exist_ok=True)
    written = []
    path = os.path.join(outdir, "report.json")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_report(report))
    written.append(path)
    for key, ser in sorted(report["series"].items(), key=lambda kv: _row_order(kv[0])):
        stem = key.replace(":", "_")
        if "members" in ser:
            p = os.path.join(outdir, f"row{stem}_members.csv")
            with open(p, "w", encoding="utf-8") as fh:
                fh.write(_csv(["member"], [[m] for m in ser["members"]]))
            written.append(p)
        for kind in PLOT_KINDS:
            if kind in ser:
                p = os.path.join(outdir, f"row{stem}_{kind}.csv")
                with open(p, "w", encoding="utf-8") as fh:
                    fh.write(emit_plot_data(report, kind, key))
                written.append(p)
    return written


# ---------------------------------------------------------------------------
# command line


def _row_summary(row: dict) -> str:
    if row["status"] != "ok":
        return row["error"]["message"]
    res = row["result"]
    if "outcome" in res:
        return res["outcome"]
    if "first_hits" in res:
        return "first hits " + ", ".join(str(h) for h in res["first_hits"][:8])
    if "matrix" in res:
        return f"{len(res['matrix'])} theorem rows"
    if "omega" in res:
        return f"omega covers {sum(res['omega'])}/{len(res['omega'])}, Omega covers {sum(res['Omega'])}/{len(res['Omega'])}"
    if "size" in res:
        return f"{res['size']} members"
    return ""


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="nonautodyn",
        description="Finite-horizon sensitivity and equicontinuity experiments on periodic non-autonomous systems.",
        epilog="NONAUTODYN_MAX_HORIZON overrides the maximum orbit horizon (default 10^7).",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)
    c = sub.add_parser("corpus", help="corpus operations")
    c.add_argument("action", choices=["list"])
    r = sub.add_parser("run", help="run an experiment config")
    r.add_argument("config")
    r.add_argument("--workers", type=int, default=1, help="region-parallel worker threads")
    r.add_argument("--output", help="override the config's output directory")
    p = sub.add_parser("plot", help="extract plot data from a report")
    p.add_argument("report")
    p.add_argument("--kind", required=True, choices=PLOT_KINDS)
    p.add_argument("--row", help="row id such as 0:f (default: first row with the series)")
    p.add_argument("--out", help="write to a file instead of stdout")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = _parser().parse_args(argv)
    if args.cmd == "corpus":
        for eid in corpus_ids():
            print(build_example(eid).summary())
        return 0
    if args.cmd == "run":
        if args.workers < 1:
            print("error: --workers must be positive", file=sys.stderr)
            return 2
        try:
            cfg = ExperimentConfig.load(args.config)
        except (ConfigError, OSError) as e:
            print(f"config error: {e}", file=sys.stderr)
            return 2
        if args.output:
            cfg = ExperimentConfig(cfg.entry, cfg.system_params, cfg.detectors, args.output, cfg.seed, cfg.version)
        report = run_experiment(cfg, workers=args.workers)
        for row in report["rows"]:
            status = row["status"]
            outcome = _row_summary(row)
            print(f"{row['id']:>6} {row['detector']:<26} {status:<6} {outcome}")
        for c in report["consistency"]:
            print(f"{c['flag']:<13} {c['row']}: {c.get('note', c.get('outcome', ''))}")
        print(f"report written to {os.path.join(cfg.output, 'report.json')}")
        return exit_status(report)
    try:
        with open(args.report, encoding="utf-8") as fh:
            report = json.load(fh)
        text = emit_plot_data(report, args.kind, args.row)
    except (OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except MissingSeries as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
