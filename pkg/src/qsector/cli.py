"""Command-line front-end.

Each subcommand builds a service request model, executes it (in-process by
default, or against a running service via --server), and writes the JSON /
CSV artifacts plus a run manifest into --out-dir.  Re-running with the same
manifest parameters reproduces the outputs byte for byte.

Exit codes: 0 = computed (a "not colorable" verdict is a result, not a
failure); 2 = input error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click
from pydantic import BaseModel, ValidationError

from . import __version__
from .errors import InputError
from .ks_data import BUILTIN_INSTANCES
from .service import handlers
from .service import schemas as s

_HANDLERS = {
    "ks-check": (handlers.ks_check, s.KsCheckResponse),
    "gleason-test": (handlers.gleason_test, s.GleasonTestResponse),
    "sector": (handlers.sector, s.SectorResponse),
    "overlap": (handlers.overlap, s.OverlapResponse),
    "operator-block": (handlers.operator_block, s.OperatorBlockResponse),
    "cascade": (handlers.cascade, s.CascadeResponse),
}


def _dispatch(name: str, request: BaseModel, server: str | None) -> BaseModel:
    fn, response_cls = _HANDLERS[name]
    if server is None:
        return fn(request)
    import httpx

    resp = httpx.post(
        f"{server.rstrip('/')}/v1/{name}", json=request.model_dump(), timeout=300.0
    )
    if resp.status_code in (400, 422):
        raise InputError(f"server rejected request: {resp.text}")
    resp.raise_for_status()
    return response_cls.model_validate(resp.json())


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: invalid JSON: {exc.msg}") from exc


def _parse_n_list(text: str) -> list[int]:
    try:
        values = [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise InputError(f"bad n-list {text!r}: {exc}") from exc
    if not values:
        raise InputError("n-list is empty")
    return values


class RunWriter:
    """Collects artifacts and writes them plus one manifest, deterministically."""

    def __init__(self, out_dir: str, subcommand: str, parameters: dict, seed: int | None):
        self.dir = Path(out_dir)
        self.subcommand = subcommand
        self.parameters = parameters
        self.seed = seed
        self.outputs: list[str] = []
        self.dir.mkdir(parents=True, exist_ok=True)

    def write_json(self, name: str, payload) -> None:
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
        (self.dir / name).write_text(text, encoding="utf-8")
        self.outputs.append(name)

    def write_csv(self, name: str, header: list[str], rows: list[tuple]) -> None:
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(_csv_cell(v) for v in row))
        (self.dir / name).write_text("\n".join(lines) + "\n", encoding="utf-8")
        self.outputs.append(name)

    def finish(self) -> None:
        manifest = {
            "subcommand": self.subcommand,
            "parameters": self.parameters,
            "seed": self.seed,
            "version": __version__,
            "outputs": sorted(self.outputs),
        }
        self.write_json(f"{self.subcommand}_manifest.json", manifest)
        self.outputs.pop()  # the manifest does not list itself


def _csv_cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def _fail(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


def run_guarded(fn):
    try:
        fn()
    except (InputError, ValidationError) as exc:
        _fail(str(exc))


@click.group()
@click.version_option(__version__)
@click.option("--server", default=None, help="Base URL of a running qsector service; default runs in-process.")
@click.option("--out-dir", default="out", show_default=True, help="Directory for output artifacts.")
@click.pass_context
def main(ctx, server, out_dir):
    """Contextuality / infinite-tensor-product studies as reproducible runs."""
    ctx.obj = {"server": server, "out_dir": out_dir}


@main.command("ks-check")
@click.argument("instance")
@click.pass_obj
def cmd_ks_check(obj, instance):
    """Colorability of a KS instance (a JSON file, or 'cabello18'/'control')."""

    def run():
        if instance in BUILTIN_INSTANCES:
            data = BUILTIN_INSTANCES[instance]().to_json()
        else:
            data = _load_json(instance)
        req = s.KsCheckRequest(instance=s.KSInstanceModel.model_validate(data))
        resp = _dispatch("ks-check", req, obj["server"])
        writer = RunWriter(obj["out_dir"], "ks-check", {"instance": instance}, None)
        writer.write_json("ks_check.json", resp.model_dump())
        writer.finish()
        click.echo(json.dumps({"colorable": resp.colorable}))

    run_guarded(run)


@main.command("gleason-test")
@click.option("--dim", default=4, show_default=True)
@click.option("--contexts", default=100, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--state", default=None, help="JSON file with a state vector [[re,im],...].")
@click.option(
    "--assignment",
    type=click.Choice(["born", "uniform", "ones"]),
    default="born",
    show_default=True,
)
@click.pass_obj
def cmd_gleason_test(obj, dim, contexts, seed, state, assignment):
    """Frame-function check over seeded random contexts."""

    def run():
        state_data = _load_json(state) if state else None
        req = s.GleasonTestRequest(
            dim=dim, contexts=contexts, seed=seed, state=state_data, assignment=assignment
        )
        resp = _dispatch("gleason-test", req, obj["server"])
        params = {
            "dim": dim,
            "contexts": contexts,
            "state": state,
            "assignment": assignment,
        }
        writer = RunWriter(obj["out_dir"], "gleason-test", params, seed)
        writer.write_json("gleason_test.json", resp.model_dump())
        writer.finish()
        click.echo(json.dumps({"passed": resp.passed}))

    run_guarded(run)


_CURVE_HEADER = ["n", "|overlap|", "log2|overlap|"]


def _curve_rows(curve) -> list[tuple]:
    return [(p.n, p.overlap_abs, p.log2_overlap_abs) for p in curve]


@main.command("sector")
@click.argument("spec_a")
@click.argument("spec_b")
@click.option("--n-list", default="4,8,16,32,64", show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="csv", show_default=True)
@click.pass_obj
def cmd_sector(obj, spec_a, spec_b, n_list, fmt):
    """Sector-equivalence verdict plus orthogonalization curve."""

    def run():
        req = s.SectorRequest(
            spec_a=s.ProductStateSpecModel.model_validate(_load_json(spec_a)),
            spec_b=s.ProductStateSpecModel.model_validate(_load_json(spec_b)),
            n_list=_parse_n_list(n_list),
        )
        resp = _dispatch("sector", req, obj["server"])
        params = {"spec_a": spec_a, "spec_b": spec_b, "n_list": n_list, "format": fmt}
        writer = RunWriter(obj["out_dir"], "sector", params, None)
        writer.write_json(
            "sector.json", {"same_sector": resp.same_sector, "witness": resp.witness}
        )
        if fmt == "csv":
            writer.write_csv("sector_curve.csv", _CURVE_HEADER, _curve_rows(resp.curve))
        else:
            writer.write_json("sector_curve.json", [p.model_dump() for p in resp.curve])
        writer.finish()
        click.echo(json.dumps({"same_sector": resp.same_sector}))

    run_guarded(run)


@main.command("overlap")
@click.argument("spec_a")
@click.argument("spec_b")
@click.option("--n-list", required=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="csv", show_default=True)
@click.pass_obj
def cmd_overlap(obj, spec_a, spec_b, n_list, fmt):
    """Truncated overlap magnitudes at the given site counts."""

    def run():
        req = s.OverlapRequest(
            spec_a=s.ProductStateSpecModel.model_validate(_load_json(spec_a)),
            spec_b=s.ProductStateSpecModel.model_validate(_load_json(spec_b)),
            n_list=_parse_n_list(n_list),
        )
        resp = _dispatch("overlap", req, obj["server"])
        params = {"spec_a": spec_a, "spec_b": spec_b, "n_list": n_list, "format": fmt}
        writer = RunWriter(obj["out_dir"], "overlap", params, None)
        if fmt == "csv":
            writer.write_csv("overlap_curve.csv", _CURVE_HEADER, _curve_rows(resp.curve))
        else:
            writer.write_json("overlap_curve.json", [p.model_dump() for p in resp.curve])
        writer.finish()

    run_guarded(run)


@main.command("operator-block")
@click.option("--expr", "expr_path", required=True, help="Operator expression JSON file.")
@click.argument("reps", nargs=-1, required=True)
@click.option("--n", "truncation", default=64, show_default=True)
@click.option("--epsilon", default=1e-6, show_default=True)
@click.option("--term-budget", default=100_000, show_default=True)
@click.pass_obj
def cmd_operator_block(obj, expr_path, reps, truncation, epsilon, term_budget):
    """Truncated matrix elements between representatives, grouped by sector."""

    def run():
        req = s.OperatorBlockRequest(
            expr=_load_json(expr_path),
            reps=[s.ProductStateSpecModel.model_validate(_load_json(p)) for p in reps],
            truncation=truncation,
            epsilon=epsilon,
            term_budget=term_budget,
        )
        resp = _dispatch("operator-block", req, obj["server"])
        params = {
            "expr": expr_path,
            "reps": list(reps),
            "n": truncation,
            "epsilon": epsilon,
            "term_budget": term_budget,
        }
        writer = RunWriter(obj["out_dir"], "operator-block", params, None)
        writer.write_json(
            "operator_block.json",
            {
                "sector_labels": resp.sector_labels,
                "cross_sector_max": resp.cross_sector_max,
                "epsilon": resp.epsilon,
                "truncation": resp.truncation,
                "passes": resp.passes,
            },
        )
        writer.write_csv(
            "operator_block.csv",
            ["row", "col", "row_sector", "col_sector", "|element|", "log2|element|"],
            [
                (e.row, e.col, e.row_sector, e.col_sector, e.magnitude, e.log2_magnitude)
                for e in resp.entries
            ],
        )
        writer.finish()
        click.echo(json.dumps({"cross_sector_max": resp.cross_sector_max}))

    run_guarded(run)


@main.command("cascade")
@click.argument("config")
@click.option("--depths", default="0,1,2,3,4,5,6,7,8,9,10", show_default=True)
@click.option("--samples", default=100_000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.pass_obj
def cmd_cascade(obj, config, depths, samples, seed):
    """Coherence decay along the measurement cascade plus outcome sampling."""

    def run():
        depth_list = _parse_n_list(depths)
        req = s.CascadeRequest(
            config=s.CascadeConfigModel.model_validate(_load_json(config)),
            depths=depth_list,
            samples=samples,
            seed=seed,
        )
        resp = _dispatch("cascade", req, obj["server"])
        params = {"config": config, "depths": depths, "samples": samples}
        writer = RunWriter(obj["out_dir"], "cascade", params, seed)
        writer.write_csv(
            "cascade_coherence.csv",
            ["depth", "L", "j", "k", "|rho_jk|", "log2|rho_jk|"],
            [
                (e.depth, e.device_size, e.j, e.k, e.magnitude, e.log2_magnitude)
                for e in resp.coherence
            ],
        )
        writer.write_json("cascade_histogram.json", resp.histogram.model_dump())
        writer.write_json("cascade_traces.json", resp.traces)
        writer.finish()
        click.echo(json.dumps({"frequencies": resp.histogram.frequencies}))

    run_guarded(run)


if __name__ == "__main__":
    main()
