"""Command-line client for the estimation service.

The CLI is a thin HTTP client: every subcommand serializes its arguments
into a request, posts it to the service, and writes the returned payloads
to disk. By default requests are served in-process through an ASGI
transport (no server required); pass ``--url`` to talk to a running
instance instead, or start one with ``pickands serve``.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import sys
from pathlib import Path

import httpx


async def _request(url: str | None, route: str, payload: dict) -> httpx.Response:
    if url:
        async with httpx.AsyncClient(base_url=url, timeout=None) as client:
            return await client.post(route, json=payload)
    from .service import app

    transport = httpx.ASGITransport(app=app)
    async with httpx.AsyncClient(
        transport=transport, base_url="http://pickands.local", timeout=None
    ) as client:
        return await client.post(route, json=payload)


def _model_spec(raw: str) -> dict:
    """Parse --model: inline JSON or the path of a JSON file."""
    text = raw.strip()
    if not text.startswith("{"):
        text = Path(raw).read_text()
    spec = json.loads(text)
    if not isinstance(spec, dict):
        raise ValueError("model spec must be a JSON object")
    return spec


def _write(path: str, text: str) -> None:
    if path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)
        print(f"wrote {path}")


def _post(url: str | None, route: str, payload: dict) -> dict:
    response = asyncio.run(_request(url, route, payload))
    if response.status_code != 200:
        try:
            detail = response.json()
        except ValueError:
            detail = response.text
        raise SystemExit(f"error: {route} returned {response.status_code}: {detail}")
    return response.json()


def _cmd_simulate(args: argparse.Namespace) -> int:
    payload = {
        "model": _model_spec(args.model),
        "n": args.n,
        "seed": args.seed,
        "stream": args.stream,
    }
    body = _post(args.url, "/simulate", payload)
    _write(args.out, body["csv"])
    return 0


def _cmd_estimate(args: argparse.Namespace) -> int:
    payload = {
        "sample_csv": Path(args.sample).read_text(),
        "estimators": args.estimators.split(","),
        "step": args.step,
        "shape_correct": args.shape_correct,
    }
    if args.grid:
        payload["grid_csv"] = Path(args.grid).read_text()
    body = _post(args.url, "/estimate", payload)
    _write(args.out, body["csv"])
    return 0


def _cmd_asymptotics(args: argparse.Namespace) -> int:
    payload = {
        "model": _model_spec(args.model),
        "step": args.step,
        "nodes": args.nodes,
    }
    if args.grid:
        payload["grid_csv"] = Path(args.grid).read_text()
    body = _post(args.url, "/asymptotics", payload)
    _write(args.out, body["csv"])
    return 0


def _cmd_bench(args: argparse.Namespace) -> int:
    spec: dict = {}
    if args.config:
        spec = json.loads(Path(args.config).read_text())
    if args.model:
        spec["model"] = _model_spec(args.model)
    if args.n:
        spec["n"] = [int(v) for v in args.n.split(",")]
    if args.reps is not None:
        spec["replications"] = args.reps
    if args.seed is not None:
        spec["seed"] = args.seed
    if args.step is not None:
        spec["step"] = args.step
    if args.estimators:
        spec["estimators"] = args.estimators.split(",")
    if args.shape_correct:
        spec["shape_correct"] = True
    if args.out:
        spec["out"] = args.out
    if "seed" not in spec or spec["seed"] is None:
        raise SystemExit("error: bench requires --seed (or a seed in the config file)")
    for key in ("model", "n"):
        if key not in spec:
            raise SystemExit(f"error: bench requires {key!r} via flag or config file")

    out_dir = Path(spec.get("out") or ".")
    payload = {
        "model": spec["model"],
        "n": spec["n"],
        "replications": spec.get("replications", 1000),
        "seed": spec["seed"],
        "step": spec.get("step", 0.025),
        "shape_correct": spec.get("shape_correct", False),
    }
    if "estimators" in spec:
        payload["estimators"] = spec["estimators"]
    body = _post(args.url, "/bench", payload)
    out_dir.mkdir(parents=True, exist_ok=True)
    summary_path = out_dir / "summary.csv"
    script_path = out_dir / "plot_summary.py"
    summary_path.write_text(body["summary_csv"])
    script_path.write_text(body["plot_script"])
    print(f"wrote {summary_path}")
    print(f"wrote {script_path}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pickands",
        description="Pickands dependence function estimation toolkit",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_url(p: argparse.ArgumentParser) -> None:
        p.add_argument("--url", default=None, help="base URL of a running service "
                       "(default: serve the request in-process)")

    p = sub.add_parser("simulate", help="draw a sample and dump it as CSV")
    p.add_argument("--model", required=True, help="model JSON (inline or a file path)")
    p.add_argument("--n", type=int, required=True, help="sample size")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--stream", type=int, default=0, help="RNG stream id (default 0)")
    p.add_argument("--out", default="-", help="output CSV path (default stdout)")
    add_url(p)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("estimate", help="evaluate estimators on a sample CSV")
    p.add_argument("--sample", required=True, help="sample CSV path (header y1,...,yp)")
    p.add_argument("--estimators", default="cfg,ols",
                   help="comma-separated ids: naive,cfg,zwp,ols,pickands,deheuvels,ht")
    p.add_argument("--step", type=float, default=0.025, help="w1=w2 line grid step")
    p.add_argument("--grid", default=None, help="explicit grid CSV (header w1,...,wp)")
    p.add_argument("--shape-correct", action="store_true")
    p.add_argument("--out", default="-", help="output CSV path (default stdout)")
    add_url(p)
    p.set_defaults(func=_cmd_estimate)

    p = sub.add_parser("asymptotics",
                       help="quadrature Sigma, optimal weights and minimal variances")
    p.add_argument("--model", required=True)
    p.add_argument("--step", type=float, default=0.1)
    p.add_argument("--grid", default=None, help="explicit grid CSV (header w1,...,wp)")
    p.add_argument("--nodes", type=int, default=512)
    p.add_argument("--out", default="-")
    add_url(p)
    p.set_defaults(func=_cmd_asymptotics)

    p = sub.add_parser("bench", help="run the Monte Carlo bias/MSE study")
    p.add_argument("--config", default=None, help="JSON config file")
    p.add_argument("--model", default=None)
    p.add_argument("--n", default=None, help="comma-separated sample sizes")
    p.add_argument("--reps", type=int, default=None)
    p.add_argument("--seed", type=int, default=None, help="mandatory (here or in config)")
    p.add_argument("--step", type=float, default=None)
    p.add_argument("--estimators", default=None)
    p.add_argument("--shape-correct", action="store_true")
    p.add_argument("--out", default=None, help="output directory (default cwd)")
    add_url(p)
    p.set_defaults(func=_cmd_bench)

    p = sub.add_parser("serve", help="run the HTTP service with uvicorn")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    raise SystemExit(main())
