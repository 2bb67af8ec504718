"""Command-line surface: simulate | cluster | krige | monitor | verify | report.

Alarm and data output goes to standard output; diagnostics go to standard
error, so `shellmon monitor ... | jq .` style pipelines stay clean.  Exit
codes: 0 success, 1 usage error, 2 data/computation error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import kriging, pipeline
from .clustering import ClusterModel
from .pipeline import MonitorConfig, MonitorState, Normalizer
from .synth import ManifoldSpec, gen_cloud, inject_defect, oracle_suite

_KINDS = ("point", "line", "plane", "circle")


class _Parser(argparse.ArgumentParser):
    """argparse with usage failures mapped to exit code 1."""

    def error(self, message: str) -> None:  # noqa: D102 - argparse override
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _fmt(value: float) -> str:
    """Full-precision decimal text that parses back to the same float."""
    return repr(float(value))


def _write_csv(path, names: list[str], rows: np.ndarray) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(names) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _column_names(spec: ManifoldSpec) -> tuple[list[str], list[str]]:
    if spec.kind == "circle":
        ind = ["u1", "u2"]
    else:
        ind = [f"w{i + 1}" for i in range(spec.manifold_dims)]
    dep = [f"x{i + 1}" for i in range(spec.n_dims)]
    return ind, dep


def _parse_defect(text: str, n_columns: int, dep_columns: list[int]):
    parts = text.split(":")
    if len(parts) != 3:
        raise ValueError(f"--defect expects DIMS:OFFSET:INDEX, got {text!r}")
    dims_part, offset_part, index_part = parts
    if dims_part == "dep":
        dims = dep_columns
    else:
        try:
            dims = [int(p) for p in dims_part.split(",") if p.strip() != ""]
        except ValueError:
            raise ValueError(f"--defect dims must be integers, got {dims_part!r}") from None
    try:
        offset = float(offset_part)
        index = int(index_part)
    except ValueError:
        raise ValueError(f"--defect expects DIMS:OFFSET:INDEX, got {text!r}") from None
    if any(d < 0 or d >= n_columns for d in dims):
        raise ValueError(f"--defect dims out of range for {n_columns} columns")
    return dims, offset, index


def _cmd_simulate(args) -> int:
    l_dims = args.l
    if args.manifold == "plane":
        if l_dims is None:
            raise ValueError("--manifold plane requires --l")
    elif l_dims is not None and l_dims != {"point": 0, "line": 1, "circle": 1}[args.manifold]:
        raise ValueError(f"--l {l_dims} conflicts with --manifold {args.manifold}")
    spec = ManifoldSpec(
        kind=args.manifold,
        n_dims=args.n,
        manifold_dims=l_dims,
        noise=args.eps0,
        seed=args.seed,
        radius=args.radius,
    )
    reals, truth = gen_cloud(spec, args.m)
    ind_names, dep_names = _column_names(spec)
    names = ind_names + dep_names
    if args.defect:
        dep_columns = list(range(len(ind_names), len(names)))
        dims, offset, index = _parse_defect(args.defect, len(names), dep_columns)
        reals = inject_defect(reals, dims, offset, index)
    _write_csv(args.out, names, reals)

    truth_names = (
        [f"param{i + 1}" for i in range(truth.params.shape[1])]
        + [f"true_{n}" for n in dep_names]
        + ["noise_norm", "perp_dist"]
    )
    truth_rows = np.hstack(
        [
            truth.params,
            truth.manifold_points,
            truth.noise_norm[:, None],
            truth.perp_dist[:, None],
        ]
    )
    truth_path = Path(str(args.out) + ".truth.csv")
    _write_csv(truth_path, truth_names, truth_rows)
    if args.roles_out:
        with open(args.roles_out, "w", encoding="utf-8") as fh:
            json.dump({"independent": ind_names, "dependent": dep_names}, fh, indent=2)
            fh.write("\n")
    print(
        f"wrote {args.m} realizations to {args.out} (truth: {truth_path})",
        file=sys.stderr,
    )
    return 0


def _run_clustering(data: np.ndarray, roles: np.ndarray, kmax: int, cdist: float):
    """Cluster a realization matrix under dynamic normalization.

    Returns the model, the normalizer, and the fusion-search trace as
    (realization index, cumulative count) pairs recorded at each increment.
    """
    model = ClusterModel(kmax=kmax, cdist=cdist, mask=roles)
    norm = Normalizer(data.shape[1])
    trace: list[tuple[int, int]] = []
    last = 0
    for i, row in enumerate(data, start=1):
        norm.observe(row)
        model.ingest(row, scales=norm.scales)
        if model.fusion_search_count != last:
            last = model.fusion_search_count
            trace.append((i, last))
    return model, norm, trace


def _cmd_cluster(args) -> int:
    names, data = pipeline.load_realizations(args.infile)
    roles = pipeline.load_roles(args.roles, names)
    if not roles.any():
        raise ValueError("clustering needs at least one independent column")
    model, norm, trace = _run_clustering(data, roles, args.kmax, args.cdist)

    ind_idx = [i for i, r in enumerate(roles) if r == 1]
    header = ["k", "population", "cvar"] + [names[i] for i in ind_idx]
    print("\t".join(header))
    for k, cluster in enumerate(model.clusters):
        cells = [str(k), str(cluster.population), f"{cluster.cvar:.6g}"]
        cells += [f"{cluster.centroid[i]:.6g}" for i in ind_idx]
        print("\t".join(cells))
    print(f"shelldist\t{model.shelldist:.6g}")
    print(f"fusion_search_count\t{model.fusion_search_count}")
    print("fusion_trace\trealization\tcount")
    for step, count in trace:
        print(f"fusion_trace\t{step}\t{count}")

    if args.model_out:
        doc = {
            "schema": pipeline.SCHEMA_VERSION,
            "type": "cluster_model",
            "normalizer": norm.to_dict(),
            "model": model.to_dict(),
        }
        with open(args.model_out, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
    return 0


def _load_cluster_model(path) -> tuple[ClusterModel, Normalizer]:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ValueError(f"corrupt model file {path}: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("schema") != pipeline.SCHEMA_VERSION:
        raise ValueError(f"{path}: unsupported or missing model schema")
    if doc.get("type") == "cluster_model":
        model = ClusterModel.from_dict(doc["model"])
        norm = Normalizer.from_dict(doc["normalizer"], len(doc["model"]["mask"]))
        return model, norm
    if "mode" in doc:  # a full monitor model
        state = MonitorState.from_dict(doc)
        if state.clusters is None:
            raise ValueError(f"{path}: monitor model has no cluster state")
        return state.clusters, state.normalizer
    raise ValueError(f"{path}: not a cluster or monitor model file")


def _cmd_krige(args) -> int:
    model, norm = _load_cluster_model(args.model)
    if model.n_clusters < 2:
        raise ValueError("model has fewer than two clusters")
    scales = norm.scales
    fitted = kriging.fit(model.clusters, model.mask, scales=scales)
    try:
        at = np.asarray([float(p) for p in args.at.split(",")], dtype=float)
    except ValueError:
        raise ValueError(f"--at expects comma-separated numbers, got {args.at!r}") from None
    ind = model.mask == 1
    if at.size != int(ind.sum()):
        raise ValueError(
            f"--at expects {int(ind.sum())} coordinates, got {at.size}"
        )
    # fit() works in raw/scale coordinates, so the query and the estimate
    # convert with the scales alone (no min shift)
    query = at / scales[ind]
    result = kriging.interpolate(fitted, query)
    dep = model.mask == 0
    estimate_raw = result.estimate * scales[dep]
    print("estimate:", " ".join(_fmt(v) for v in estimate_raw))
    print("sigma_M:", _fmt(result.sigma_M))
    return 0


def _monitor_config(args) -> MonitorConfig:
    kwargs = {}
    for field in ("threshold_k", "alpha", "warmup", "refit_interval", "kmax", "cdist"):
        value = getattr(args, field)
        if value is not None:
            kwargs[field] = value
    return MonitorConfig(**kwargs)


def _cmd_monitor(args) -> int:
    names, data = pipeline.load_realizations(args.infile)
    if args.model_in:
        explicit = [
            f"--{f.replace('_', '-')}"
            for f in ("threshold_k", "alpha", "warmup", "refit_interval", "kmax", "cdist")
            if getattr(args, f) is not None
        ]
        if explicit:
            raise ValueError(
                f"{', '.join(explicit)} cannot be combined with --model-in "
                "(configuration comes from the model file)"
            )
        state = pipeline.load(args.model_in)
        if state.roles.size != len(names):
            raise ValueError(
                f"model expects {state.roles.size} columns, CSV has {len(names)}"
            )
        if args.roles:
            roles = pipeline.load_roles(args.roles, names)
            if not np.array_equal(roles, state.roles):
                raise ValueError("--roles disagrees with the roles stored in the model")
    else:
        if not args.roles:
            raise ValueError("--roles is required without --model-in")
        roles = pipeline.load_roles(args.roles, names)
        state = MonitorState(roles, _monitor_config(args))
    for row in data:
        for event in state.step(row):
            print(event.to_json())
    if args.model_out:
        pipeline.save(state, args.model_out)
    return 0


def _cmd_verify(args) -> int:
    checks = oracle_suite(seed=args.seed, m=args.m)
    width = max(len(c.name) for c in checks)
    print(f"{'check':<{width}}  {'measured':>12}  {'expected':>12}  {'rel_tol':>8}  result")
    failures = 0
    for c in checks:
        status = "pass" if c.passed else "FAIL"
        if not c.passed:
            failures += 1
        line = (
            f"{c.name:<{width}}  {c.measured:>12.6f}  {c.expected:>12.6f}"
            f"  {c.rel_tol:>8.3g}  {status}"
        )
        if c.note:
            line += f"  ({c.note})"
        print(line)
    if failures:
        print(f"{failures} of {len(checks)} checks failed", file=sys.stderr)
        return 2
    return 0


def _cmd_report(args) -> int:
    names, data = pipeline.load_realizations(args.infile)
    roles = pipeline.load_roles(args.roles, names)
    state = MonitorState(roles, _monitor_config(args))
    rows = []
    alarms = []
    for row in data:
        events = state.step(row)
        alarms.extend(events)
        r = state.last_fast_result
        if r is not None:
            rows.append(
                (
                    state.seq,
                    r.d,
                    r.shelldist,
                    r.shelldist - r.bound,
                    r.shelldist + r.bound,
                )
            )
        state.last_fast_result = None
    if not rows:
        raise ValueError("no comparisons were made (stream too short for a reference)")

    out = Path(args.out)
    if out.suffix.lower() == ".csv":
        with open(out, "w", encoding="utf-8") as fh:
            fh.write("seq,d,shelldist,lower,upper\n")
            for seq, d, mu, lo, hi in rows:
                fh.write(f"{seq},{_fmt(d)},{_fmt(mu)},{_fmt(lo)},{_fmt(hi)}\n")
    else:
        try:
            import matplotlib
        except ImportError:
            raise ValueError(
                "matplotlib is required for image output; install shellmon[plot] "
                "or use a .csv output path"
            ) from None
        matplotlib.use("Agg")
        import matplotlib.pyplot as plt

        arr = np.asarray(rows)
        fig, ax = plt.subplots(figsize=(10, 5))
        ax.fill_between(arr[:, 0], arr[:, 3], arr[:, 4], alpha=0.3, label="shell band")
        ax.plot(arr[:, 0], arr[:, 1], lw=0.6, label="distance d")
        ax.plot(arr[:, 0], arr[:, 2], lw=1.0, ls="--", label="shelldist")
        for kind, color in (("fast", "tab:red"), ("trend", "tab:orange")):
            seqs = [a.seq for a in alarms if a.type == kind]
            if seqs:
                ds = {a.seq: a.d for a in alarms if a.type == kind}
                ax.scatter(
                    seqs, [ds[s] for s in seqs], color=color, s=14, label=f"{kind} alarm"
                )
        ax.set_xlabel("realization")
        ax.set_ylabel("normalized distance")
        ax.legend(loc="best")
        fig.tight_layout()
        fig.savefig(out, dpi=120)
        plt.close(fig)
    print(f"wrote report to {out} ({len(alarms)} alarms)", file=sys.stderr)
    return 0


def build_parser() -> _Parser:
    parser = _Parser(prog="shellmon", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="generate a synthetic realization CSV")
    p.add_argument("--manifold", choices=_KINDS, required=True)
    p.add_argument("--n", type=int, required=True, help="dependent channels")
    p.add_argument("--l", type=int, default=None, help="manifold parameters (plane)")
    p.add_argument("--eps0", type=float, default=1.0, help="per-channel noise sd")
    p.add_argument("--m", type=int, required=True, help="realization count")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--radius", type=float, default=1.0, help="circle radius")
    p.add_argument(
        "--defect",
        default=None,
        metavar="DIMS:OFFSET:INDEX",
        help="add OFFSET to columns DIMS ('dep' or comma-separated indices) "
        "from row INDEX on",
    )
    p.add_argument("--out", required=True, help="output CSV path")
    p.add_argument("--roles-out", default=None, help="also write a roles JSON here")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("cluster", help="cluster a realization CSV")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--roles", required=True)
    p.add_argument("--kmax", type=int, default=50)
    p.add_argument("--cdist", type=float, default=1.5)
    p.add_argument("--model-out", default=None)
    p.set_defaults(func=_cmd_cluster)

    p = sub.add_parser("krige", help="interpolate a fitted model at a point")
    p.add_argument("--model", required=True, help="cluster or monitor model JSON")
    p.add_argument("--at", required=True, help="comma-separated independent coords")
    p.set_defaults(func=_cmd_krige)

    p = sub.add_parser("monitor", help="stream realizations, emit alarm JSONL")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--roles", default=None)
    p.add_argument("--model-in", default=None)
    p.add_argument("--model-out", default=None)
    p.add_argument("--threshold-k", dest="threshold_k", type=float, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--warmup", type=int, default=None)
    p.add_argument("--refit-interval", dest="refit_interval", type=int, default=None)
    p.add_argument("--kmax", type=int, default=None)
    p.add_argument("--cdist", type=float, default=None)
    p.set_defaults(func=_cmd_monitor)

    p = sub.add_parser("verify", help="run the Monte-Carlo oracle suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--m", type=int, default=10_000, help="samples per check")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("report", help="render a distance/shell-band report")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--roles", required=True)
    p.add_argument("--out", required=True, help=".csv or image path")
    p.add_argument("--threshold-k", dest="threshold_k", type=float, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--warmup", type=int, default=None)
    p.add_argument("--refit-interval", dest="refit_interval", type=int, default=None)
    p.add_argument("--kmax", type=int, default=None)
    p.add_argument("--cdist", type=float, default=None)
    p.set_defaults(func=_cmd_report)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr, level=logging.WARNING, format="%(levelname)s: %(message)s"
    )
    try:
        return args.func(args)
    except BrokenPipeError:
        return 0
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
