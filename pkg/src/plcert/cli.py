"""Command line interface.

Subcommands map 1:1 onto the shared operation handlers and run fully in
process by default; `--server URL` routes the same payload to a running
service instead.  Reports are key-sorted JSON, plots are SVG 1.1, and all
rationals cross the boundary as strings.

Exit codes: 0 success, 1 criterion or verification failure (including
domain errors), 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .errors import MapSpecError, PLCertError
from .mapspec import FAMILIES, parse_mapspec, serialize_mapspec
from .report import dumps_report
from .service import handlers

_PARSE_EXIT_CODES = {"parse_error", "validation_error", "mapspec_error"}


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _map_payload(args: argparse.Namespace) -> dict:
    """--map <family name or mapspec path> (+ --lambda) -> mapspec object."""
    name = args.map
    if name is None:
        raise SystemExit(_usage("--map is required"))
    if name in FAMILIES:
        if args.lam is None:
            raise SystemExit(_usage(f"--lambda is required with --map {name}"))
        text = json.dumps({"family": name, "lambda": args.lam})
    else:
        try:
            with open(name, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise SystemExit(_usage(f"cannot read map file {name!r}: {exc}"))
    spec = parse_mapspec(text)  # early diagnostics; exit 2 on failure
    return json.loads(serialize_mapspec(spec))


def _usage(message: str) -> int:
    sys.stderr.write(f"plcert: error: {message}\n")
    return 2


def _window_pair(text: str) -> list[str]:
    parts = text.split(":")
    if len(parts) != 2 or not parts[0] or not parts[1]:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}")
    return parts


def _criteria_range(text: str) -> list[int]:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
            if lo > hi:
                raise ValueError
            return list(range(lo, hi + 1))
        return [int(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a..b or a single integer, got {text!r}")


def _post(server: str, path: str, payload: dict) -> tuple[int, str]:
    import httpx

    url = server.rstrip("/") + path
    resp = httpx.post(url, json=payload, timeout=600.0)
    return resp.status_code, resp.text


def _run_remote(args: argparse.Namespace, path: str, payload: dict) -> tuple[int, dict]:
    status, text = _post(args.server, path, payload)
    body = json.loads(text)
    if status == 200:
        return 0, body
    code = body.get("error", "")
    sys.stderr.write(dumps_report(body))
    return (2 if code in _PARSE_EXIT_CODES else 1), {}


def _op(args: argparse.Namespace, path: str, payload: dict, local) -> tuple[int, dict]:
    if args.server:
        return _run_remote(args, path, payload)
    return 0, local()


def cmd_plot(args: argparse.Namespace) -> int:
    m = _map_payload(args)
    payload = {"map": m, "window": args.window, "iterate": args.iterate}
    rc, rep = _op(args, "/v1/plot", payload,
                  lambda: handlers.plot(m, args.window, args.iterate))
    if rc:
        return rc
    _emit(rep["svg"], args.out)
    return 0


def cmd_fixed_points(args: argparse.Namespace) -> int:
    m = _map_payload(args)
    payload = {"map": m, "window": args.window, "iterate": args.iterate}
    rc, rep = _op(args, "/v1/fixed-points", payload,
                  lambda: handlers.fixed_points(m, args.window, args.iterate))
    if rc:
        return rc
    _emit(dumps_report(rep), args.out)
    return 0


def cmd_find_horseshoe(args: argparse.Namespace) -> int:
    m = _map_payload(args)
    payload = {"map": m, "variant": args.variant}
    rc, rep = _op(args, "/v1/horseshoe/find", payload,
                  lambda: handlers.find_horseshoe(m, args.variant))
    if rc:
        return rc
    _emit(dumps_report(rep), args.out)
    return 0


def cmd_verify_horseshoe(args: argparse.Namespace) -> int:
    m = _map_payload(args)
    try:
        with open(args.cert, "r", encoding="utf-8") as fh:
            cert = json.load(fh)
    except OSError as exc:
        return _usage(f"cannot read certificate file {args.cert!r}: {exc}")
    except json.JSONDecodeError as exc:
        return _usage(f"certificate file {args.cert!r}: {exc}")
    payload = {"map": m, "certificate": cert}
    rc, rep = _op(args, "/v1/horseshoe/verify", payload,
                  lambda: handlers.verify_horseshoe(m, cert))
    if rc:
        return rc
    _emit(dumps_report(rep), args.out)
    return 0 if rep["ok"] else 1


def cmd_entropy(args: argparse.Namespace) -> int:
    m = _map_payload(args)
    payload = {"map": m, "variant": args.variant, "tol": args.tol}
    rc, rep = _op(args, "/v1/entropy", payload,
                  lambda: handlers.entropy(m, args.variant, args.tol))
    if rc:
        return rc
    _emit(dumps_report(rep), args.out)
    return 0


def cmd_spec_refute(args: argparse.Namespace) -> int:
    m = _map_payload(args)
    payload = {"map": m, "eps": args.eps}
    rc, rep = _op(args, "/v1/spec-refute", payload,
                  lambda: handlers.spec_refute(m, args.eps))
    if rc:
        return rc
    _emit(dumps_report(rep), args.out)
    return 0


def cmd_acceptance(args: argparse.Namespace) -> int:
    nums = args.n
    payload = {"criteria": nums}
    rc, rep = _op(args, "/v1/acceptance", payload,
                  lambda: handlers.acceptance(nums))
    if rc:
        return rc
    _emit(dumps_report(rep), args.out)
    if args.out:
        sys.stdout.write("\n".join(rep["summary"]) + "\n")
    return 0 if rep["all_passed"] else 1


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


def _add_map_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--map", help="family name (phi|psi|F|G|H|fbar) or mapspec JSON path")
    p.add_argument("--lambda", dest="lam", help="family parameter as a rational string p/q")
    p.add_argument("--server", help="route the operation to a running service at this URL")
    p.add_argument("--out", help="write the report (or SVG) to this path instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="plcert",
        description="certified piecewise linear dynamics: plots, horseshoes, "
                    "entropy sandwiches, and quantitative refutations",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("plot", help="render the graph of f^iterate as SVG")
    _add_map_flags(p)
    p.add_argument("--window", required=True, type=_window_pair, help="lo:hi rationals")
    p.add_argument("--iterate", type=int, default=1)
    p.set_defaults(func=cmd_plot)

    p = sub.add_parser("fixed-points", help="exact fixed points of f^iterate in a window")
    _add_map_flags(p)
    p.add_argument("--window", required=True, type=_window_pair, help="lo:hi rationals")
    p.add_argument("--iterate", type=int, default=1)
    p.set_defaults(func=cmd_fixed_points)

    p = sub.add_parser("find-horseshoe", help="search for a verified horseshoe certificate")
    _add_map_flags(p)
    p.add_argument("--variant", default="auto",
                   choices=["auto", "two-fixed", "halfline", "unique-fixed"])
    p.set_defaults(func=cmd_find_horseshoe)

    p = sub.add_parser("verify-horseshoe", help="re-verify a certificate from a JSON file")
    _add_map_flags(p)
    p.add_argument("--cert", required=True, help="certificate JSON path")
    p.set_defaults(func=cmd_verify_horseshoe)

    p = sub.add_parser("entropy", help="certified entropy sandwich from a found certificate")
    _add_map_flags(p)
    p.add_argument("--variant", default="auto",
                   choices=["auto", "two-fixed", "halfline", "unique-fixed"])
    p.add_argument("--tol", type=float, default=1e-9, help="Perron enclosure tolerance")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("spec-refute", help="quantitative gluing-time refutation certificate")
    _add_map_flags(p)
    p.add_argument("--eps", default="1/2", help="tracing tolerance as a rational string")
    p.set_defaults(func=cmd_spec_refute)

    p = sub.add_parser("acceptance", help="run the acceptance criteria and report")
    _add_map_flags(p)
    p.add_argument("--n", type=_criteria_range, default=None,
                   help="criteria subset as a..b or a single number")
    p.set_defaults(func=cmd_acceptance)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.set_defaults(func=cmd_serve)

    return parser


_VALUE_FLAGS = {"--window", "--lambda", "--eps", "--tol", "--n"}


def _glue_values(argv: Sequence[str]) -> list[str]:
    """Join value flags with '=' so negative rationals parse as values."""
    out: list[str] = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(_glue_values(sys.argv[1:] if argv is None else argv))
    try:
        return args.func(args)
    except MapSpecError as exc:
        sys.stderr.write(dumps_report({"error": exc.code, "message": str(exc)}))
        return 2
    except PLCertError as exc:
        sys.stderr.write(dumps_report({"error": exc.code, "message": str(exc)}))
        return 1
    except SystemExit as exc:
        code = exc.code
        return code if isinstance(code, int) else 2


if __name__ == "__main__":
    sys.exit(main())
