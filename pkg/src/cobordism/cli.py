"""Command-line front end.

Exit codes: 0 success, 1 verification failures, 2 usage error,
3 environment or data error.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .algebra import AlgebraError, parse_poly
from .hopf import OpIndex, s_on_phi
from .mass import DEFAULT_T_BOUND, BoundError, check_relation, d1, homology

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 3


def _usage(msg):
    click.echo(f"error: {msg}", err=True)
    sys.exit(EXIT_USAGE)


def _emit(text, out):
    if out:
        Path(out).write_text(text + "\n")
    else:
        click.echo(text)


def _parse(expr):
    try:
        return parse_poly(expr)
    except AlgebraError as exc:
        _usage(str(exc))


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.option("--t-bound", type=click.IntRange(min=0), default=DEFAULT_T_BOUND, show_default=True,
              help="Largest t-degree handled by the complex.")
@click.option("--data", "data_dir", type=click.Path(), default=None,
              help="Data directory (overrides $COBORDISM_DATA).")
@click.pass_context
def main(ctx, t_bound, data_dir):
    """Landweber-Novikov actions and the first Adams-Novikov differential over F2."""
    ctx.obj = {"t_bound": t_bound, "data": data_dir}


@main.command()
@click.option("--omega", required=True, help="Comma-separated parts, e.g. 2,2.")
@click.option("--phi", "--n", "phi", type=click.IntRange(min=1), required=True, help="Index n of Phi_n.")
@click.option("--json", "as_json", is_flag=True)
def sop(omega, phi, as_json):
    """Print S_omega Phi_n."""
    try:
        E = OpIndex.parse(omega)
    except (ValueError, AlgebraError) as exc:
        _usage(str(exc))
    v = s_on_phi(E, phi)
    if as_json:
        click.echo(json.dumps({"omega": list(E.parts), "n": phi, "value": str(v)}))
    else:
        click.echo(str(v))


@main.command(name="d1")
@click.argument("expr")
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def d1_cmd(ctx, expr, as_json):
    """Apply the differential d1 to EXPR."""
    p = _parse(expr)
    if p and p.degrees() and max(d.t for d in p.degrees()) > ctx.obj["t_bound"]:
        _usage(f"t-degree exceeds the bound {ctx.obj['t_bound']}")
    r = d1(p)
    click.echo(json.dumps({"input": str(p), "d1": str(r)}) if as_json else str(r))


@main.command()
@click.argument("q", type=int)
@click.argument("s", type=int)
@click.argument("t", type=int)
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def cell(ctx, q, s, t, as_json):
    """Basis, cycles, boundaries and homology of the cell (q, s, t)."""
    try:
        hom = homology(q, s, t, ctx.obj["t_bound"])
    except (BoundError, ValueError) as exc:
        _usage(str(exc))
    if as_json:
        click.echo(json.dumps({"q": q, "s": s, "t": t, "dim_basis": hom.dim_basis,
                               "dim_cycles": hom.dim_cycles, "dim_boundaries": hom.dim_boundaries,
                               "dim_homology": hom.dim_homology,
                               "representatives": [str(p) for p in hom.representatives]}))
    else:
        click.echo(hom.render())


@main.command()
@click.argument("lhs")
@click.argument("rhs")
@click.option("--mode", type=click.Choice(["identical", "up_to_boundary"]), default="identical",
              show_default=True)
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def check(ctx, lhs, rhs, mode, as_json):
    """Compare LHS and RHS in E1 or modulo d1-boundaries."""
    a, b = _parse(lhs), _parse(rhs)
    try:
        v = check_relation(a, b, mode, ctx.obj["t_bound"])
    except (BoundError, AlgebraError) as exc:
        _usage(str(exc))
    if as_json:
        click.echo(json.dumps({"holds": v.holds, "mode": v.mode, "difference": str(v.difference),
                               "witness": None if v.witness is None else str(v.witness)}))
    else:
        click.echo(("HOLDS" if v.holds else "FAILS") + f" ({v.mode}); difference {v.difference}"
                   + (f"; preimage {v.witness}" if v.witness is not None and v.holds else ""))
    sys.exit(EXIT_OK if v.holds else EXIT_FAIL)


@main.command()
@click.argument("suite")
@click.option("--json", "as_json", is_flag=True)
@click.option("--out", type=click.Path(dir_okay=False), default=None, help="Write the report here.")
@click.option("--jobs", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--n", "n_max", type=click.IntRange(min=1), default=20, show_default=True,
              help="Largest n in the closed-form sweep.")
@click.option("--k", "k_max", type=click.IntRange(min=1), default=8, show_default=True,
              help="Largest k in the closed-form sweep.")
@click.option("--m", "m_max", type=click.IntRange(min=2), default=10, show_default=True,
              help="Largest m for the instantiated action families.")
@click.option("--samples", type=click.IntRange(min=0), default=10_000, show_default=True,
              help="Random monomials in the high-t d1^2 check.")
@click.option("--seed", type=int, default=20_240_601, show_default=True)
@click.pass_context
def verify(ctx, suite, as_json, out, jobs, n_max, k_max, m_max, samples, seed):
    """Run SUITE (corollaries, table9, mass, relations, projections or all)."""
    from . import suites
    from .projection import DataError, data_paths, load_tables

    if suite != "all" and suite not in suites.SUITES:
        _usage(f"unknown suite {suite!r}; choose from {', '.join(suites.SUITES + ('all',))}")
    db = None
    if suite in ("projections", "all"):
        paths = [Path(ctx.obj["data"])] if ctx.obj["data"] else data_paths()
        try:
            missing = [p for p in paths if not p.exists()]
            if missing:
                raise FileNotFoundError(f"data path {missing[0]} does not exist")
            db = load_tables(paths)
        except (DataError, AlgebraError, OSError) as exc:
            click.echo(f"data error: {exc}", err=True)
            sys.exit(EXIT_DATA)
    results = suites.run_suite(suite, db=db, jobs=jobs, n_max=n_max, k_max=k_max, m_max=m_max,
                               samples=samples, seed=seed)
    if as_json:
        body = results[0].to_json() if len(results) == 1 else {"suites": [r.to_json() for r in results]}
        _emit(json.dumps(body, indent=1), out)
    else:
        _emit("\n\n".join(r.render() for r in results), out)
    sys.exit(EXIT_FAIL if any(r.failures() for r in results) else EXIT_OK)


if __name__ == "__main__":  # pragma: no cover
    main()
