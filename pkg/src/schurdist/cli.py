"""schurdist command line.

Exit codes: 0 ok, 2 malformed input, 3 zero state, 4 over a size cap,
5 unsupported triplet region.
"""

from __future__ import annotations

import json
import math
import os
import sys

import click
import numpy as np

from . import covariants as cov
from . import io as sio
from . import kronecker as kr
from . import rates
from .errors import InvalidInput, ResourceError, UnsupportedRegion

EXIT_INPUT, EXIT_ZERO, EXIT_CAP, EXIT_REGION = 2, 3, 4, 5


class CliFailure(Exception):
    def __init__(self, code, msg):
        super().__init__(msg)
        self.code = code


def _random_state(seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    psi = rng.normal(size=(2, 2, 2)) + 1j * rng.normal(size=(2, 2, 2))
    return psi / np.linalg.norm(psi)


def load_state(source: str, seed: int | None = None) -> np.ndarray:
    """A state from a JSON file path, inline JSON, a named state (ghz, w, 000...) or "random"."""
    named = {"ghz": cov.ghz_state, "w": cov.w_state}
    try:
        if source in named:
            psi = named[source]()
        elif source == "random":
            psi = _random_state(0 if seed is None else seed)
        elif len(source) == 3 and set(source) <= {"0", "1"}:
            psi = cov.basis_state(source)
        elif source.lstrip().startswith("{"):
            psi = sio.parse_state(source)
        else:
            try:
                with open(source) as fh:
                    psi = sio.parse_state(fh.read())
            except OSError as exc:
                raise InvalidInput(f"cannot read state file {source!r}: {exc.strerror}") from None
    except InvalidInput as exc:
        raise CliFailure(EXIT_INPUT, str(exc)) from None
    if np.sum(np.abs(psi) ** 2) == 0:
        raise CliFailure(EXIT_ZERO, "zero state")
    return psi


def _emit(obj, fmt="json"):
    if fmt == "json":
        click.echo(json.dumps(obj, indent=2, default=_jsonable))
    else:
        for k, v in obj.items():
            click.echo(f"{k}\t{_jsonable(v) if not isinstance(v, (str, int, float)) else v}")


def _jsonable(x):
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, tuple):
        return list(x)
    return str(x)


def _run(fn):
    try:
        fn()
    except CliFailure as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(exc.code)
    except ResourceError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_CAP)
    except UnsupportedRegion as exc:
        click.echo(f"error: unsupported region: {exc}", err=True)
        sys.exit(EXIT_REGION)
    except (InvalidInput, ValueError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_INPUT)


@click.group()
@click.version_option(package_name="artifact")
def main():
    """Three-qubit Schur-Weyl analysis.

    STATE arguments accept a JSON file, inline JSON {"psi": [[re, im] x 8]},
    the names ghz / w / random, or a basis label such as 010.
    """


def classification_report(psi) -> dict:
    psi = psi / np.linalg.norm(psi)
    report = {"class": str(cov.classify(psi)), "covariants": cov.covariant_magnitudes(psi),
              "three_tangle": cov.three_tangle(psi)}
    for s in "ABC":
        report[f"entropy_{s}"] = cov.local_entropy(psi, s)
        report[f"linear_entropy_{s}"] = cov.linear_entropy(psi, s)
        report[f"rank_{s}"] = cov.local_rank(psi, s)
    for pair in ("AB", "AC", "BC"):
        report[f"concurrence_{pair}"] = cov.concurrence(cov.two_qubit_density(psi, pair))
    return report


@main.command()
@click.argument("state")
@click.option("--seed", type=int, default=None, help="Seed for STATE=random.")
@click.option("--tol", type=float, default=1e-8, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="json")
def classify(state, seed, tol, fmt):
    """Entanglement class, covariant magnitudes and local measures."""
    def go():
        psi = load_state(state, seed)
        rep = classification_report(psi)
        rep["class"] = str(cov.classify(psi / np.linalg.norm(psi), tol))
        _emit(rep, fmt)
    _run(go)


@main.command()
@click.argument("n", type=int)
@click.argument("triplet", type=int, nargs=-1)
@click.option("--scan", is_flag=True, help="Emit every triplet with g > 0.")
@click.option("--w-region", is_flag=True, help="With --scan, keep only triplets reachable without D000.")
@click.option("--verify", is_flag=True, help="Cross-check against the character-table oracle (n <= 8).")
@click.option("--jobs", type=int, default=None, help="Worker processes for --scan (default: all CPUs).")
@click.option("--format", "fmt", type=click.Choice(["csv", "json", "table"]), default="csv")
def kron(n, triplet, scan, w_region, verify, jobs, fmt):
    """Kronecker coefficient g of the triplet (n-a, a), (n-b, b), (n-c, c).

    Scan CSV columns: n,alpha2,beta2,gamma2,g (sorted triplets).
    """
    def go():
        if verify and n > 8:
            raise ResourceError("--verify runs the character oracle only for n <= 8")
        if scan:
            nj = jobs if jobs is not None else (os.cpu_count() or 1)
            rows = kr.polytope_scan(n, jobs=nj)
            if w_region:
                rows = [(t, g) for t, g in rows if kr.in_w_region(t)]
            if verify:
                bad = [t for t, g in rows if kr.kronecker_bruteforce(t) != g]
                if bad:
                    raise CliFailure(1, f"oracle disagrees on {len(bad)} triplets")
            if fmt == "json":
                click.echo(sio.scan_to_json(rows))
            elif fmt == "csv":
                click.echo(sio.scan_to_csv(rows), nl=False)
            else:
                for t, g in rows:
                    click.echo(f"{t.alpha2:4d} {t.beta2:4d} {t.gamma2:4d} {g:4d}")
            return
        if len(triplet) != 3:
            raise InvalidInput("give three second rows a b c, or --scan")
        t = kr.TripletLabel(*triplet, n)
        g = kr.kronecker_two_row(t)
        out = {"n": n, "alpha2": t.alpha2, "beta2": t.beta2, "gamma2": t.gamma2, "g": g}
        if verify:
            out["oracle"] = kr.kronecker_bruteforce(t)
            out["agree"] = out["oracle"] == g
        if fmt == "json":
            click.echo(json.dumps(out))
        elif fmt == "csv":
            click.echo(sio.scan_to_csv([(t, g)]), nl=False)
        else:
            click.echo(str(g))
    _run(go)


@main.command()
@click.argument("state")
@click.argument("n", type=int)
@click.option("--route", type=click.Choice(["projection", "dense", "r-tensor", "covariant"]), default="projection")
@click.option("--seed", type=int, default=None)
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "table"]), default="json")
def probs(state, n, route, seed, fmt):
    """Block probabilities p(alpha, beta, gamma | psi) for n copies.

    CSV columns: n,alpha2,beta2,gamma2,p.
    """
    def go():
        psi = load_state(state, seed)
        psi = psi / np.linalg.norm(psi)
        fn = {"projection": rates.copy_probabilities, "dense": rates.copy_probabilities_dense,
              "r-tensor": rates.r_tensor_probability, "covariant": rates.covariant_ratio_probability}[route]
        tab = fn(psi, n)
        if fmt == "json":
            click.echo(sio.probtable_to_json(tab))
        elif fmt == "csv":
            click.echo(sio.probtable_to_csv(tab), nl=False)
        else:
            for t, p in sorted(tab.entries.items()):
                click.echo(f"{t.alpha2:3d} {t.beta2:3d} {t.gamma2:3d}  {p:.12g}")
    _run(go)


@main.command()
@click.argument("kind", type=click.Choice(["w-plane", "w-general", "ghz-facet", "ghz-bullet"]))
@click.argument("point", type=float, nargs=-1)
@click.option("--a", type=float, default=1 / 3)
@click.option("--b", type=float, default=1 / 3)
@click.option("--c", type=float, default=1 / 3)
@click.option("--d", type=float, default=None, help="W parameter d (default 1 - a - b - c).")
@click.option("--angles", type=float, nargs=5, default=None, help="GHZ-family angles delta epsilon theta varphi phi.")
@click.option("--form", default=None, help="Formula variant (w-general: absolute|relative; "
                                           "ghz-facet: exact|stated; ghz-bullet: stated|endpoint).")
@click.option("--bits", is_flag=True, help="Report in bits instead of nats.")
def rate(kind, point, a, b, c, d, angles, form, bits):
    """Exponential rate -lim log p / n at a normalised triplet POINT (second rows over n)."""
    def go():
        need = {"w-plane": 3, "w-general": 3, "ghz-facet": 2, "ghz-bullet": 1}[kind]
        if len(point) != need:
            raise InvalidInput(f"{kind} takes {need} coordinates")
        if kind == "w-plane":
            res = rates.rate_w_plane(*point, a, b, c)
        elif kind == "w-general":
            res = rates.rate_w_general(*point, a, b, c, d, form=form or "absolute")
        elif kind == "ghz-facet":
            res = rates.rate_ghz_facet(*point, tuple(angles) if angles else None, form=form or "exact")
        else:
            res = rates.rate_ghz_bullet(*point, form=form or "stated")
        scale = 1 / math.log(2) if bits else 1.0
        _emit({"kind": kind, "point": list(point), "value": res.value * scale,
               "units": "bits" if bits else "nats", "method": res.method,
               "maximizer": res.maximizer, "diagnostics": res.diagnostics})
    _run(go)


@main.command("keyl-werner")
@click.argument("state")
@click.argument("n", type=int)
@click.option("--route", type=click.Choice(["exact", "bipartite"]), default="exact")
@click.option("--seed", type=int, default=None)
def keyl_werner(state, n, route, seed):
    """Most likely normalised frames against the sorted local spectra."""
    def go():
        psi = load_state(state, seed)
        _emit(rates.keyl_werner_check(psi / np.linalg.norm(psi), n, route))
    _run(go)


if __name__ == "__main__":
    main()
