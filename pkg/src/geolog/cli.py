"""Command line interface: JSON reports on stdout (or a file) and optional SVG pictures.

Exit codes: 1 for input errors, 2 for classification inconsistencies and 3
for unsupported categories.
"""

from __future__ import annotations

import os
import random
import sys
from dataclasses import dataclass, field
from fractions import Fraction

import click

from . import fixtures
from .geography import (
    ClassificationInconsistency,
    Param,
    UnsupportedCategory,
    classify_facets,
    classify_ridges,
    compute_geography,
    grid_refines,
    oracle_grid_geography,
    pair_backend,
    separatrix_and_projection,
)
from .io import dumps, fan_from_json, fan_report, load_json, pair_from_json, pair_to_json, rational
from .surface import SurfaceLattice, zariski_decomposition
from .toric.fan import FanError, ToricModel

EXIT_INPUT, EXIT_INCONSISTENT, EXIT_UNSUPPORTED = 1, 2, 3


@dataclass
class JobConfig:
    command: str
    inputs: list[str]
    output: str | None = None
    pitch: Fraction | None = None
    fillers: int = 4
    render: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.pitch is not None and self.pitch <= 0:
            raise ValueError("grid pitch must be positive")
        paths = [p for p in self.inputs + [self.output or ""] if p and not p.startswith("example:")]
        if len(set(paths)) != len(paths):
            raise ValueError("input and output paths must be distinct")


# -- named inputs ----------------------------------------------------------------------------

MODELS = {
    "p2": fixtures.projective_plane,
    "f0": lambda: fixtures.hirzebruch(0),
    "f1": lambda: fixtures.hirzebruch(1),
    "f2": lambda: fixtures.hirzebruch(2),
    "dp6": fixtures.dp6_toric,
    "p3": lambda: fixtures.projective_space(3),
    "p3-blowup": fixtures.p3_blowup_point,
    "quadric-flop": fixtures.quadric_cone_flop,
}

PAIRS = {
    "cremona": fixtures.cremona_pair,
    "quadric-2a": fixtures.quadric_2a_pair,
    "plane-blowup-2b": fixtures.plane_blowup_2b_pair,
    "fiber-modification-2c": fixtures.fiber_modification_2c_pair,
}


def _named(name: str):
    """example:NAME, with fig1:n and fig1-surface:n taking the parameter n."""
    base, _, arg = name.partition(":")
    if base == "fig1":
        return fixtures.fig1_pair(int(arg))
    if base == "fig1-surface":
        return fixtures.fig1_surface_pair(int(arg))
    if base == "fn-relative":
        return fixtures.fn_relative(int(arg))
    if base in PAIRS:
        return PAIRS[base]()
    if base in MODELS:
        return MODELS[base]()
    raise ValueError(f"unknown example {name!r}")


def load_model(src: str) -> ToricModel:
    if src.startswith("example:"):
        X = _named(src[len("example:"):])
        if isinstance(X, tuple):
            X = X[0]
        if not isinstance(X, ToricModel):
            raise ValueError("expected a toric model")
        return X
    d = load_json(src)
    return fan_from_json(d["fan"] if "fan" in d else d)


def load_pair(src: str):
    if src.startswith("example:"):
        P = _named(src[len("example:"):])
        if not isinstance(P, tuple):
            raise ValueError("expected a pair (model and components)")
        return P
    return pair_from_json(load_json(src))


def load_surface(src: str) -> SurfaceLattice:
    if src.startswith("example:"):
        P = _named(src[len("example:"):])
        S = P[0] if isinstance(P, tuple) else P
        if not isinstance(S, SurfaceLattice):
            raise ValueError("expected a surface lattice")
        return S
    d = load_json(src)
    return SurfaceLattice.from_json(d["surface"] if "surface" in d else d)


def _vector(text: str) -> tuple[Fraction, ...]:
    return tuple(rational(x) for x in text.split(",") if x.strip())


def emit(ctx: click.Context, report) -> None:
    text = dumps(report)
    out = ctx.obj.get("output")
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


# -- reports ---------------------------------------------------------------------------------


def model_label(g, key):
    if key is None:
        return None
    ch = g.charts.get(key)
    if ch is None:
        return repr(key)
    Y = ch.model
    if isinstance(Y, ToricModel):
        return {"rays": [list(r) for r in Y.rays], "cones": [list(c) for c in Y.cones]}
    return {"contracted": list(Y.contracted)}


def geography_report(g, X, cube) -> dict:
    classes = []
    for c in g.classes:
        entry = {
            "index": c.index,
            "dim": c.dim,
            "inside": c.inside,
            "point": g.param.b(c.point),
            "vertices": sorted(g.param.b(v) for v in c.closure.vertices),
        }
        if c.inside:
            entry["model"] = model_label(g, c.model)
            entry["wlc_models"] = len(c.wlc_models)
            entry["e_signs"] = list(c.signature[0])
            entry["p_signs"] = list(c.signature[1])
            entry["nu"] = c.nu
        classes.append(entry)
    walls = sorted({g.param.b(c.point) for c in g.classes if c.dim == 0 and c.inside})
    return {
        "pair": pair_to_json(X, cube),
        "components": cube.names,
        "dim": g.dim,
        "classes": classes,
        "countries": sum(1 for c in g.inside_classes if c.dim == g.dim),
        "vertices": walls,
    }


def _slice(cube, fix: str | None):
    """Param for the 2D slice with the named coefficients fixed (NAME=p/q,...)."""
    if not fix:
        return None
    vals = {}
    for part in fix.split(","):
        name, _, v = part.partition("=")
        vals[cube.index(name.strip())] = rational(v)
    free = [i for i in range(cube.m) if i not in vals]
    b0 = tuple(vals.get(i, Fraction(0)) for i in range(cube.m))
    cols = [tuple(Fraction(1 if j == i else 0) for j in range(cube.m)) for i in free]
    return Param.make(b0, cols), [cube.names[i] for i in free]


def _geography(src: str, fix: str | None):
    X, cube = load_pair(src)
    be = pair_backend(X, cube)
    sl = _slice(cube, fix)
    if sl is None:
        return X, cube, compute_geography(be), tuple(cube.names)
    par, names = sl
    return X, cube, compute_geography(be, par), tuple(names)


# -- commands --------------------------------------------------------------------------------


@click.group()
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Write the JSON report here instead of stdout.")
@click.option("--seed", type=int, default=0, show_default=True, help="Seed for the order of oracle sampling.")
@click.option("--threads", type=int, default=None, help="Cap on worker threads (sets GEOLOG_THREADS).")
@click.pass_context
def cli(ctx, output, seed, threads):
    """Exact geography of log models for toric and surface pairs."""
    ctx.ensure_object(dict)
    ctx.obj["output"] = output
    ctx.obj["seed"] = seed
    if threads is not None:
        os.environ["GEOLOG_THREADS"] = str(threads)


@cli.group()
def fan():
    """Fan utilities."""


@fan.command("validate")
@click.argument("src")
@click.pass_context
def fan_validate(ctx, src):
    """Check the fan axioms and print the canonical fan."""
    X = load_model(src)
    emit(ctx, {"valid": True, **fan_report(X)})


@cli.command()
@click.argument("src")
@click.pass_context
def cones(ctx, src):
    """Semiample, nef, mobile and effective cones of a toric model."""
    from .cones import positive_cones

    X = load_model(src)
    rep = positive_cones(X)
    out = {}
    for k in ("samp", "nef", "mob", "eff"):
        c = getattr(rep, k)
        out[k] = {"rays": list(c.rays), "facets": list(c.facets), "lineality": list(c.lineality)}
    emit(ctx, {"fan": fan_report(X)["fan"], "cones": out})


@cli.command()
@click.argument("src")
@click.pass_context
def chambers(ctx, src):
    """Mori chambers of the effective cone of a toric model."""
    from .cones import mori_chambers

    X = load_model(src)
    mc = mori_chambers(X)
    classes = [
        {"dim": c.dim, "rays": list(c.cone.rays), "model": [list(r) for r in _rays_of_key(c.model)], "exc_support": list(c.exc_support)}
        for c in mc.classes
    ]
    emit(ctx, {"fan": fan_report(X)["fan"], "classes": classes, "countries": len(mc.countries)})


def _rays_of_key(key) -> list:
    return sorted({v for c in key for v in c[1]})


@cli.command()
@click.argument("src")
@click.option("--divisor", required=True, help="Coefficients on the canonical rays, e.g. 1,0,2/3.")
@click.option("--all-outcomes", is_flag=True, help="Also list the outcomes over every choice of extremal ray.")
@click.pass_context
def mmp(ctx, src, divisor, all_outcomes):
    """Run the D-MMP of a toric model and print its trace."""
    from .mmp import all_resulting_models, run_dmmp

    X = load_model(src)
    D = _vector(divisor)
    if len(D) != len(X.rays):
        raise ValueError(f"divisor needs {len(X.rays)} coefficients")
    run = run_dmmp(X, D)
    steps = [{"kind": s.kind, "before": _rays_of_key(s.before), "after": _rays_of_key(s.after) if s.after else None} for s in run.steps]
    rep = {
        "rays": [list(r) for r in X.rays],
        "divisor": D,
        "steps": steps,
        "step_count": run.step_count,
        "result": run.result,
        "model": [list(r) for r in run.model.rays],
    }
    if run.fibration is not None:
        rep["base_dim"] = run.fibration.base.dim
    if all_outcomes:
        rep["outcomes"] = sorted(repr(k) for k in all_resulting_models(X, D))
    emit(ctx, rep)


@cli.command()
@click.argument("src")
@click.option("--svg", type=click.Path(dir_okay=False), help="Also draw the geography.")
@click.option("--fix", help="Fixed coefficients NAME=p/q,... giving a slice.")
@click.option("--classify", is_flag=True, help="Tag facets and ridges.")
@click.option("--oracle-pitch", help="Compare with the MMP at every grid point of this pitch (p/q).")
@click.pass_context
def geography(ctx, src, svg, fix, classify, oracle_pitch):
    """Classes of boundaries of a pair."""
    cfg = JobConfig("geography", [src], ctx.obj.get("output"), rational(oracle_pitch) if oracle_pitch else None)
    X, cube, g, names = _geography(src, fix)
    rep = geography_report(g, X, cube)
    if classify:
        rep["facets"] = [{"class": t.facet, "kind": t.kind, "validated": t.validated, "reason": t.reason} for t in classify_facets(g)]
        if g.dim >= 2:
            rep["ridges"] = [{"class": t.ridge, "kind": t.kind, "m": t.m, "validated": t.validated, "reason": t.reason} for t in classify_ridges(g)]
    if cfg.pitch is not None:
        if fix:
            raise ValueError("the grid oracle runs on the full cube")
        res = 1 / cfg.pitch
        if res.denominator != 1:
            raise ValueError("pitch must be 1/n")
        oracle = oracle_grid_geography(g.backend, int(res))
        order = list(range(len(oracle.points)))
        random.Random(ctx.obj["seed"]).shuffle(order)
        oracle.points = [oracle.points[i] for i in order]
        oracle.keys = [oracle.keys[i] for i in order]
        rep["oracle"] = {"pitch": cfg.pitch, "groups": len(oracle.groups), "refines": grid_refines(g, oracle)}
    if svg:
        from .render import render_svg

        _write(svg, render_svg(g, names))
    emit(ctx, rep)


@cli.command()
@click.argument("src")
@click.pass_context
def separatrix(ctx, src):
    """The separatrix of a pair and its central projection."""
    X, cube = load_pair(src)
    g = compute_geography(pair_backend(X, cube))
    sep = separatrix_and_projection(g)
    emit(ctx, {
        "components": cube.names,
        "classes": [c.index for c in sep.classes],
        "vertices": sep.vertices,
        "projection": [[v, p] for v, p in sorted(sep.projection.items())],
        "empty": sep.empty,
        "injective": sep.injective(),
        "nu_origin": sep.nu_origin,
        "nu_top": sep.nu_top,
    })


@cli.command()
@click.argument("src")
@click.option("--divisor", required=True, help="Class in the lattice basis, e.g. 4,-1,-1,-1.")
@click.pass_context
def zariski(ctx, src, divisor):
    """Zariski decomposition of a class on a surface lattice."""
    S = load_surface(src)
    D = _vector(divisor)
    z = zariski_decomposition(S, D)
    emit(ctx, {"class": D, "P": z.P, "N": dict(sorted(z.N.items())), "support": list(z.support)})


@cli.group()
def links():
    """Elementary links and factorizations."""


@links.command("factor")
@click.argument("src")
@click.option("--fillers", type=int, default=4, show_default=True, help="Budget of ample filler components.")
@click.pass_context
def links_factor(ctx, src, fillers):
    """Factor a map between Mori fibrations into elementary links.

    SRC is example:cremona, example:quadric-rulings or a JSON job with
    "resolution", "source" and "target" ({"fan", "fibration": index}) and an
    optional "identification" matrix.
    """
    from .links import factor_mori_map, mori_fibrations, validate_link

    if src == "example:cremona":
        X, Y1, Y2, A = fixtures.dp6_toric(), fixtures.projective_plane(), fixtures.projective_plane(), ((-1, 0), (0, -1))
        i1 = i2 = 0
    elif src == "example:quadric-rulings":
        X = Y1 = Y2 = fixtures.hirzebruch(0)
        A, i1, i2 = None, 0, 1
    else:
        d = load_json(src)
        X = fan_from_json(d["resolution"])
        Y1, Y2 = fan_from_json(d["source"]["fan"]), fan_from_json(d["target"]["fan"])
        i1, i2 = int(d["source"].get("fibration", 0)), int(d["target"].get("fibration", 0))
        A = d.get("identification")
    f1, f2 = mori_fibrations(Y1), mori_fibrations(Y2)
    if i1 >= len(f1) or i2 >= len(f2):
        raise ValueError("fibration index out of range")
    chain = factor_mori_map(X, (Y1, f1[i1][1]), (Y2, f2[i2][1]), identification=A, fillers=fillers)
    rep = chain.as_dict()
    rep["valid"] = [validate_link(l).ok for l in chain.links]
    emit(ctx, rep)


@cli.command()
@click.argument("src")
@click.option("--svg", "svg_path", required=True, type=click.Path(dir_okay=False), help="Output SVG file.")
@click.option("--fix", help="Fixed coefficients NAME=p/q,... giving a 2D slice.")
def render(src, svg_path, fix):
    """Draw a one or two dimensional geography (or slice) as SVG."""
    from .render import render_svg

    _, _, g, names = _geography(src, fix)
    _write(svg_path, render_svg(g, names))


def main(argv=None) -> int:
    """Entry point; returns the exit code."""
    try:
        cli.main(args=argv, prog_name="geolog", standalone_mode=False)
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.Abort:
        return EXIT_INPUT
    except click.ClickException as e:
        e.show()
        return EXIT_INPUT
    except ClassificationInconsistency as e:
        click.echo(f"error: classification inconsistency: {e}", err=True)
        return EXIT_INCONSISTENT
    except UnsupportedCategory as e:
        click.echo(f"error: unsupported category: {e}", err=True)
        return EXIT_UNSUPPORTED
    except (ValueError, KeyError, OSError, FanError) as e:
        click.echo(f"error: {e}", err=True)
        return EXIT_INPUT
    return 0


def entry() -> None:
    sys.exit(main())
