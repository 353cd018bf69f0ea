"""Command-line front end.

Thin client over the HTTP service: every subcommand builds a request,
posts it (in-process by default, or to --server), and writes the response
to --out or stdout. Exit codes: 0 success, 1 simulation failure, 2 usage.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import httpx

USAGE_EXIT = 2
FAILURE_EXIT = 1


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fastgates",
        description="Pulsed fast-gate scheme solver and stability sweeps.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", type=Path, help="JSON run-config file")
        p.add_argument("--out", type=Path, help="output file (default stdout)")
        p.add_argument("--threads", type=int, help="sweep worker threads")
        p.add_argument("--server", help="remote service URL (default: in-process)")

    solve = sub.add_parser("solve", help="solve scheme timings, print scheme JSON")
    solve.add_argument("--kind", choices=("frag", "gzc"))
    solve.add_argument("--n", type=int)
    common(solve)

    for name, help_text in (
            ("run", "single gate simulation, print report JSON"),
            ("sweep-duration", "fidelity vs pulse duration CSV"),
            ("sweep-xi", "fidelity vs pulse area CSV"),
            ("populations", "final-state populations vs pulse area CSV"),
            ("trajectory", "phase-space trajectory CSV plus snapshots CSV")):
        p = sub.add_parser(name, help=help_text)
        common(p)
    return parser


def _load_config(args, parser) -> dict:
    if args.config is None:
        parser.error(f"{args.command} requires --config")
    try:
        doc = json.loads(args.config.read_text())
    except FileNotFoundError:
        parser.error(f"config file not found: {args.config}")
    except json.JSONDecodeError as exc:
        parser.error(f"config is not valid JSON: {exc}")
    if args.threads is not None:
        doc["threads"] = args.threads
    return doc


def _client(args) -> httpx.Client:
    if args.server:
        return httpx.Client(base_url=args.server, timeout=600.0)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from starlette.testclient import TestClient

    from .service import create_app
    return TestClient(create_app(), raise_server_exceptions=False)


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        out.write_text(text)


def _post(client, path, payload):
    response = client.post(path, json=payload)
    if response.status_code >= 400:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        print(f"error: {detail}", file=sys.stderr)
        sys.exit(USAGE_EXIT if response.status_code in (400, 422) else FAILURE_EXIT)
    return response


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)

    with _client(args) as client:
        if args.command == "solve":
            if args.kind is None or args.n is None:
                doc = _load_config(args, parser)
                kind, n, trap = doc.get("kind"), doc.get("n"), doc.get("trap", {})
                if kind is None or n is None:
                    parser.error("solve needs --kind/--n or a config with kind and n")
            else:
                kind, n, trap = args.kind, args.n, {}
                if args.config is not None:
                    trap = json.loads(args.config.read_text()).get("trap", {})
            response = _post(client, "/solve", {"kind": kind, "n": n, "trap": trap})
            scheme = response.json()
            _emit(json.dumps(scheme, indent=2), args.out)
            if args.out is not None:
                residuals = ", ".join(f"{r:.3e}" for r in scheme["residuals"])
                print(f"{kind} n={n}: T_G={scheme['T_G']:.6e} s, residuals [{residuals}]")
            return 0

        doc = _load_config(args, parser)
        if args.command == "run":
            response = _post(client, "/run", doc)
            _emit(json.dumps(response.json(), indent=2), args.out)
            return 0
        if args.command == "sweep-duration":
            _emit(_post(client, "/sweep/duration", doc).text, args.out)
            return 0
        if args.command == "sweep-xi":
            _emit(_post(client, "/sweep/xi", doc).text, args.out)
            return 0
        if args.command == "populations":
            _emit(_post(client, "/populations", doc).text, args.out)
            return 0
        # trajectory: two CSV payloads, second lands next to the first
        payload = _post(client, "/trajectory", doc).json()
        _emit(payload["trajectory"], args.out)
        if args.out is not None:
            snap_path = args.out.with_name(args.out.stem + "_snapshots" + args.out.suffix)
        else:
            snap_path = None
            sys.stdout.write(payload["snapshots"])
        if snap_path is not None:
            snap_path.write_text(payload["snapshots"])
        return 0


if __name__ == "__main__":
    sys.exit(main())
