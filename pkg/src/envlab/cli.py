"""Command-line client for the verification service.

The CLI builds request payloads, sends them to the service (in-process by
default, or to a remote instance via --server), and formats the JSON
responses.  Exit codes: 0 success, 1 verification failure, 2 input or usage
error.
"""

from __future__ import annotations

import json
import sys

import click
import httpx

EXIT_OK = 0
EXIT_VERIFICATION_FAILED = 1
EXIT_INPUT_ERROR = 2


def canonical_json(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2)


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    import warnings

    with warnings.catch_warnings():
        # starlette 1.3 warns when its test client runs on httpx 0.x
        warnings.simplefilter("ignore")
        from starlette.testclient import TestClient

    from .service.app import app

    return TestClient(app, base_url="http://envlab")


def _request(server: str | None, method: str, path: str, payload: dict | None = None) -> dict:
    with _client(server) as client:
        response = client.request(method, path, json=payload)
    body = response.json()
    if response.status_code >= 400:
        detail = body.get("detail", body)
        if isinstance(detail, dict):
            message = detail.get("message", str(detail))
        else:
            message = str(detail)
        click.echo(f"error: {message}", err=True)
        sys.exit(EXIT_INPUT_ERROR)
    return body


def _parse_csv_ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        click.echo(f"error: expected a comma-separated integer list, got {text!r}", err=True)
        sys.exit(EXIT_INPUT_ERROR)


def _space_source(builtin: str | None, space_file: str | None, weights: tuple[str, ...]) -> dict:
    if (builtin is None) == (space_file is None):
        click.echo("error: provide exactly one of --builtin or --space-file", err=True)
        sys.exit(EXIT_INPUT_ERROR)
    if builtin is not None:
        spec: dict = {"name": builtin}
        if weights:
            # each occurrence may carry one weight ("1,0") or several ("0,0 1,0 0,1")
            spec["weights"] = [_parse_csv_ints(w) for chunk in weights for w in chunk.split()]
        return {"builtin": spec}
    if weights:
        click.echo("error: --weights applies only to builtin spaces", err=True)
        sys.exit(EXIT_INPUT_ERROR)
    try:
        with open(space_file, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        click.echo(f"error: cannot read space file: {exc}", err=True)
        sys.exit(EXIT_INPUT_ERROR)
    return {"space": data}


def _parse_slope(text: str) -> dict:
    if text == "trivial":
        return {"kind": "trivial"}
    if "/" in text:
        name, suffix = text.rsplit("/", 1)
        if suffix == "search":
            return {"kind": "bundle", "bundle": name, "search": True}
        try:
            return {"kind": "bundle", "bundle": name, "denominator": int(suffix)}
        except ValueError:
            click.echo(f"error: malformed slope {text!r}", err=True)
            sys.exit(EXIT_INPUT_ERROR)
    return {"kind": "bundle", "bundle": text, "denominator": 1}


format_option = click.option(
    "--format", "fmt", type=click.Choice(["json", "tsv", "pretty"]), default="pretty"
)
source_options = [
    click.option("--builtin", default=None, help="Builtin space: P1, P2, P3, PnxPm"),
    click.option("--space-file", default=None, type=click.Path(), help="JSON space file"),
    click.option("--weights", multiple=True, help="Coordinate weight, e.g. --weights 1,0 (repeatable)"),
]


def _with_source_options(command):
    for option in reversed(source_options):
        command = option(command)
    return command


@click.group()
@click.option("--server", default=None, help="Base URL of a running service; defaults to in-process")
@click.pass_context
def main(ctx: click.Context, server: str | None):
    """Exact verification of stable-envelope axioms on fixed-point data."""
    ctx.obj = server


@main.command("space")
@_with_source_options
@click.option("--sigma", default=None, help="Chamber cocharacter, e.g. 1,2")
@format_option
@click.pass_obj
def space_command(server, builtin, space_file, weights, sigma, fmt):
    """Describe a space: fixed points, weights, cells, order, bundles."""
    payload = {"source": _space_source(builtin, space_file, weights)}
    if sigma is not None:
        payload["sigma"] = _parse_csv_ints(sigma)
    report = _request(server, "POST", "/space", payload)
    if fmt == "json":
        click.echo(canonical_json(report))
    elif fmt == "tsv":
        lines = ["point\ttangent\tdim_cell"]
        for p in report["points"]:
            tangent = " ".join(str(w) for w in report["tangent"][p])
            dim_cell = report["cells"][p]["dim_cell"] if report.get("cells") else ""
            lines.append(f"{p}\t{tangent}\t{dim_cell}")
        click.echo("\n".join(lines))
    else:
        click.echo(f"{report['name']}: {len(report['points'])} fixed points, "
                   f"rank {report['rank']}, dim {report['dim']}")
        for p in report["points"]:
            line = f"  {p}: tangent {report['tangent'][p]}"
            if report.get("cells"):
                line += f", cell dim {report['cells'][p]['dim_cell']}"
            click.echo(line)
        if report.get("order"):
            click.echo("  order (less < greater): " + ", ".join(f"{a}<{b}" for a, b in report["order"]))
        for name, bundle in sorted(report["bundles"].items()):
            click.echo(f"  bundle {name} ({bundle['ampleness']}): {bundle['restrictions']}")


@main.command("verify")
@_with_source_options
@click.option("--sigma", required=True, help="Chamber cocharacter, e.g. 1,2")
@click.option("--slope", default="trivial", help="trivial | NAME[/N] | NAME/search")
@click.option("--weak-c", is_flag=True, help="Use the weak containment variant of the smallness check")
@format_option
@click.pass_obj
def verify_command(server, builtin, space_file, weights, sigma, slope, weak_c, fmt):
    """Build the candidate and machine-check the envelope axioms."""
    payload = {
        "source": _space_source(builtin, space_file, weights),
        "sigma": _parse_csv_ints(sigma),
        "slope": _parse_slope(slope),
        "weak_c": weak_c,
    }
    report = _request(server, "POST", "/verify", payload)
    if fmt == "json":
        click.echo(canonical_json(report))
    elif fmt == "tsv":
        click.echo(_verify_tsv(report))
    else:
        if report["minimal_n"] is not None:
            click.echo(f"minimal n: {report['minimal_n']} (probe n+1..n+{len(report['probe'])}: "
                       f"{'all pass' if all(report['probe']) else report['probe']})")
        inner = report["report"]
        click.echo(f"slope {report['slope']}, mode {inner['mode']}: "
                   f"{'PASS' if report['verdict'] else 'FAIL'}")
        if not report["verdict"]:
            for row in inner["support"]:
                if not row["passed"]:
                    click.echo(f"  support {row['pair']}: FAIL ({row['mode']})")
            for row in inner["normalization"]:
                if not row["passed"]:
                    click.echo(f"  normalization {row['point']}: FAIL")
            for row in inner["smallness"]:
                if not row["passed"]:
                    click.echo(f"  smallness {row['pair']}: FAIL")
        click.echo(f"note: {inner['support_note']}")
    sys.exit(EXIT_OK if report["verdict"] else EXIT_VERIFICATION_FAILED)


def _verify_tsv(report: dict) -> str:
    inner = report["report"]
    lines = ["axiom\tpair\tverdict\tdetail"]
    for row in inner["support"]:
        lines.append(
            f"support\t{','.join(row['pair'])}\t{'pass' if row['passed'] else 'FAIL'}\t{row['mode']}"
        )
    for row in inner["normalization"]:
        lines.append(f"normalization\t{row['point']}\t{'pass' if row['passed'] else 'FAIL'}\t")
    for row in inner["smallness"]:
        detail = f"contained={row['contained']} origin_excluded={row['origin_excluded']}"
        lines.append(
            f"smallness\t{','.join(row['pair'])}\t{'pass' if row['passed'] else 'FAIL'}\t{detail}"
        )
    lines.append(f"overall\t\t{'pass' if report['verdict'] else 'FAIL'}\t{report['slope']}")
    return "\n".join(lines)


@main.command("examples")
@format_option
@click.pass_obj
def examples_command(server, fmt):
    """Recompute the built-in worked examples and diff against golden values."""
    report = _request(server, "GET", "/examples")
    if fmt == "json":
        click.echo(canonical_json(report))
    elif fmt == "tsv":
        lines = ["section\tcheck\tverdict"]
        for section in report["sections"]:
            for check in section["checks"]:
                lines.append(
                    f"{section['name']}\t{check['name']}\t{'pass' if check['passed'] else 'FAIL'}"
                )
        click.echo("\n".join(lines))
    else:
        click.echo(report["summary"])
        for section in report["sections"]:
            for check in section["checks"]:
                mark = "ok" if check["passed"] else "MISMATCH"
                click.echo(f"  [{mark}] {section['name']}/{check['name']}")
                if not check["passed"]:
                    click.echo(f"      expected: {check['expected']}")
                    click.echo(f"      got:      {check['got']}")
    sys.exit(EXIT_OK if report["passed"] else EXIT_VERIFICATION_FAILED)


@main.command("serve")
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8000, type=int)
def serve_command(host: str, port: int):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("envlab.service.app:app", host=host, port=port)


if __name__ == "__main__":
    main()
