"""Command-line front end.

The CLI is a thin client over the service schema: every command builds a
request model and either calls the in-process handler (default) or POSTs it
to a running service given ``--url``.  Output is JSON with numbers printed
to 12 significant digits; identical inputs and seeds give byte-identical
output.

Exit codes: 2 parse errors, 3 admissibility errors, 4 qubit budget.
"""

from __future__ import annotations

import json
import sys

import click

from .service import handlers
from .service.handlers import ServiceError
from .service.models import (BenchRequest, BenchResponse, FramedLinkSpec,
                             InvariantRequest, InvariantResponse, PolyRequest,
                             PolyResponse, VerifyRequest, VerifyResponse,
                             VolumeScanRequest, VolumeScanResponse)

_ROUTES = {
    "poly": (handlers.handle_poly, PolyResponse),
    "invariant": (handlers.handle_invariant, InvariantResponse),
    "verify": (handlers.handle_verify, VerifyResponse),
    "volume-scan": (handlers.handle_volume_scan, VolumeScanResponse),
    "bench": (handlers.handle_bench, BenchResponse),
}


def _emit(model) -> None:
    click.echo(json.dumps(model.model_dump(), indent=2, sort_keys=False))


def _dispatch(route: str, request, url: str | None):
    handler, response_model = _ROUTES[route]
    if url is None:
        return handler(request)
    import httpx

    resp = httpx.post(f"{url.rstrip('/')}/{route}",
                      json=request.model_dump(), timeout=600.0)
    if resp.status_code == 400:
        body = resp.json()
        raise ServiceError(body.get("error", "remote error"),
                           body.get("code", 2))
    resp.raise_for_status()
    return response_model.model_validate(resp.json())


def _run(route: str, request, url: str | None) -> None:
    try:
        _emit(_dispatch(route, request, url))
    except ServiceError as exc:
        click.echo(json.dumps({"error": str(exc), "code": exc.code}),
                   err=True)
        sys.exit(exc.code)


url_option = click.option("--url", default=None,
                          help="base URL of a running qtopo service; "
                               "default runs in-process")


@click.group()
def main() -> None:
    """Colored link polynomials and quantum 3-manifold invariants."""


@main.command()
@click.option("--braid", default=None, help='braid word, e.g. "2 2 2"')
@click.option("--strands", type=int, default=None)
@click.option("--catalog", "catalog_name", default=None,
              help="bundled link name")
@click.option("--k", type=int, required=True)
@click.option("--color", default="1/2", help='uniform color, e.g. "1/2"')
@click.option("--colors", default=None,
              help="comma-separated per-cap colors")
@click.option("--twice", is_flag=True, help="colors given as doubled values")
@click.option("--normalize", is_flag=True,
              help="apply the ambient-isotopy normalization")
@click.option("--convention", default="unoriented",
              type=click.Choice(["unoriented", "oriented"]))
@url_option
def poly(braid, strands, catalog_name, k, color, colors, twice, normalize,
         convention, url):
    """Colored polynomial of a plat closure."""
    req = PolyRequest(
        k=k, braid=braid, strands=strands, catalog=catalog_name,
        color=color, colors=colors.split(",") if colors else None,
        twice=twice, normalize=normalize, convention=convention)
    _run("poly", req, url)


@main.command()
@click.option("--link", "link_json", default=None,
              help="framed link JSON "
                   '{"strands": .., "word": "..", "framings": [..]}')
@click.option("--file", "link_file", type=click.Path(exists=True),
              default=None, help="read the framed-link JSON from a file")
@click.option("--catalog", "catalog_name", default=None,
              help="bundled link name (framings default to 0)")
@click.option("--framings", default=None,
              help="comma-separated framings overriding the default")
@click.option("--k", type=int, required=True)
@click.option("--circuit", is_flag=True,
              help="additive approximation through the compiled circuit")
@click.option("--shots", type=int, default=1024)
@click.option("--seed", type=int, default=0)
@click.option("--workers", type=int, default=None,
              help="parallel workers for the color sum")
@click.option("--convention", default="unoriented",
              type=click.Choice(["unoriented", "oriented"]))
@url_option
def invariant(link_json, link_file, catalog_name, framings, k, circuit,
              shots, seed, workers, convention, url):
    """Surgery 3-manifold invariant of a framed link."""
    try:
        if link_file is not None:
            spec = FramedLinkSpec.model_validate_json(
                open(link_file).read())
        elif link_json is not None:
            spec = FramedLinkSpec.model_validate_json(link_json)
        elif catalog_name is not None:
            from .braid import catalog as cat, parse_braid, plat_components, PlatBraid
            entry = cat()[catalog_name]
            word = parse_braid(entry["word"], entry["strands"])
            comps = plat_components(PlatBraid(word)).components
            spec = FramedLinkSpec(strands=entry["strands"],
                                  word=entry["word"],
                                  framings=[0] * comps, name=catalog_name)
        else:
            spec = FramedLinkSpec(strands=0, word="", framings=[])
    except (KeyError, ValueError) as exc:
        click.echo(json.dumps({"error": str(exc), "code": 2}), err=True)
        sys.exit(2)
    if framings is not None:
        spec.framings = [int(x) for x in framings.split(",")]
    req = InvariantRequest(k=k, link=spec, circuit=circuit, shots=shots,
                           seed=seed, workers=workers, convention=convention)
    _run("invariant", req, url)


@main.command()
@click.argument("suite")
@click.option("--k", type=int, default=None)
@click.option("--trials", type=int, default=None)
@url_option
def verify(suite, k, trials, url):
    """Run a named property suite; exit 0 iff it passes."""
    req = VerifyRequest(suite=suite, k=k, trials=trials)
    try:
        result = _dispatch("verify", req, url)
    except ServiceError as exc:
        click.echo(json.dumps({"error": str(exc), "code": exc.code}),
                   err=True)
        sys.exit(exc.code)
    _emit(result)
    if not result.passed:
        sys.exit(1)


@main.command("volume-scan")
@click.option("--nmax", type=int, default=25)
@url_option
def volume_scan(nmax, url):
    """Kashaev figure-eight growth against the hyperbolic volume."""
    _run("volume-scan", VolumeScanRequest(nmax=nmax), url)


@main.command()
@click.option("--n", type=int, default=3, help="strand pairs")
@click.option("--k", type=int, default=3)
@click.option("--kappas", default="10,20,40,80",
              help="comma-separated word lengths")
@click.option("--seed", type=int, default=0)
@click.option("--csv", "as_csv", is_flag=True, help="emit CSV rows")
@url_option
def bench(n, k, kappas, seed, as_csv, url):
    """Step counts and wall time versus word length."""
    req = BenchRequest(n=n, k=k, seed=seed,
                       kappas=[int(x) for x in kappas.split(",") if x])
    try:
        result = _dispatch("bench", req, url)
    except ServiceError as exc:
        click.echo(json.dumps({"error": str(exc), "code": exc.code}),
                   err=True)
        sys.exit(exc.code)
    if as_csv:
        click.echo("kappa,steps,seconds")
        for row in result.rows:
            click.echo(f"{row.kappa},{row.steps},{row.seconds:.12g}")
        return
    _emit(result)


@main.command()
@url_option
def catalog(url):
    """List the bundled links."""
    if url is None:
        _emit(handlers.handle_catalog())
        return
    import httpx

    resp = httpx.get(f"{url.rstrip('/')}/catalog", timeout=60.0)
    resp.raise_for_status()
    click.echo(json.dumps(resp.json(), indent=2))


@main.command()
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run("qtopo.service.app:app", host=host, port=port)


if __name__ == "__main__":
    main()
