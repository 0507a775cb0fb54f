"""Command-line front end.

A thin client over the HTTP service: parameters from `--config` files and
`--key value` flags are sent as-is to the scenario endpoints (in-process by
default, remote with --server), the returned table is printed as
`key = value` lines, and returned files are written under --out.

Exit status is 0 on success; on failure the last stdout line is a single
`error: ...` line and the status is nonzero.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import SCHEMAS, ConfigError, load_config_file

_EPILOG = """examples:
  decosense sql --L 12
  decosense simulate --state cat --mode grid --out run1
  decosense detect --family contractive
  decosense first-order --eps 0.1,0.03,0.01,0.003,0.001
  decosense scale-hbar --L 12 --D 0.00694 --F 1 --kappa 1,0.1,0.01
"""


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="decosense",
        description="Phase-space simulation and detection limits for diffusing test masses.",
        epilog=_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for command in SCHEMAS:
        cmd = sub.add_parser(command, help=f"run the {command} scenario")
        cmd.add_argument("--config", metavar="PATH", help="key = value config file")
        cmd.add_argument("--out", metavar="DIR", default=".", help="directory for output files")
        cmd.add_argument("--server", metavar="URL", help="remote service URL (default: in-process)")
        for key in SCHEMAS[command]:
            cmd.add_argument(f"--{key}", dest=f"param_{key}", metavar="VALUE", help=f"set {key}")
    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)
    return parser


def _collect_params(args: argparse.Namespace, command: str) -> dict:
    raw: dict = {}
    if args.config:
        raw.update(load_config_file(args.config))
    for key in SCHEMAS[command]:
        value = getattr(args, f"param_{key}", None)
        if value is not None:
            raw[key] = value
    return raw


def _post(command: str, raw: dict, server: str | None):
    payload = {"params": raw}
    if server:
        import httpx

        response = httpx.post(f"{server.rstrip('/')}/{command}", json=payload, timeout=600.0)
    else:
        import warnings

        with warnings.catch_warnings():
            # quiet the starlette/httpx pairing deprecation emitted at import
            warnings.simplefilter("ignore")
            from fastapi.testclient import TestClient

        from .service import create_app

        with TestClient(create_app()) as client:
            response = client.post(f"/{command}", json=payload)
    return response


def _fail(message: str) -> int:
    print(f"error: {message}")
    return 2


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "serve":
        import uvicorn

        from .service import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return 0

    try:
        raw = _collect_params(args, args.command)
    except ConfigError as exc:
        return _fail(str(exc))

    try:
        response = _post(args.command, raw, args.server)
    except Exception as exc:  # connection refused, bad URL, ...
        return _fail(f"service: {str(exc).splitlines()[0] if str(exc) else type(exc).__name__}")

    if response.status_code != 200:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        if isinstance(detail, (list, dict)):
            detail = str(detail)
        return _fail(str(detail).replace("\n", "; "))

    body = response.json()
    out_dir = Path(args.out)
    for entry in body.get("files", []):
        target = out_dir / entry["relpath"]
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_text(entry["content"], encoding="utf-8")
    for key, value in body["table"]:
        print(f"{key} = {value}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
