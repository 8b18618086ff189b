"""Command line front end: ``quantdga <subcommand> ...``.

Exit status 0 on success, 1 on a domain error, 2 on a usage error.
"""
from __future__ import annotations

import json
import math
import random
import sys
from fractions import Fraction
from pathlib import Path
from typing import Dict, List, Optional

import click

from . import __version__
from .errors import DomainError


class Record:
    """Ordered output; rendered as ``key: value`` lines or as JSON."""

    def __init__(self):
        self.items: List = []

    def add(self, key: str, value) -> None:
        self.items.append((key, value))

    def render(self, as_json: bool) -> str:
        if as_json:
            return json.dumps({k: _jsonable(v) for k, v in self.items}, indent=2)
        return "\n".join(f"{k}: {_text(v)}" for k, v in self.items)


def _text(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, tuple)):
        return ", ".join(_text(x) for x in v)
    return str(v)


def _jsonable(v):
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return v
    if isinstance(v, float):
        return v
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return str(v)


def _json_flag(ctx, _param, value):
    if value:
        ctx.find_root().obj["json"] = True
    return value


def json_option(f):
    return click.option("--json", "json_", is_flag=True, expose_value=False, callback=_json_flag,
                        help="Emit JSON instead of key: value lines.")(f)


def _emit(ctx: click.Context, rec: Record) -> None:
    click.echo(rec.render(ctx.find_root().obj.get("json", False)))


def _fail_usage(msg: str):
    raise click.UsageError(msg)


def _model(model: Optional[str], file: Optional[str], dga: Optional[str]):
    from .models import canned_model
    from .presentation import load
    if model and file:
        _fail_usage("give either --model or --file, not both")
    if model:
        return canned_model(model)
    if not file:
        _fail_usage("give --model NAME or --file FILE --dga NAME")
    ws = load(Path(file).read_text())
    if dga is None:
        if len(ws.dgas) != 1:
            _fail_usage("the file declares several algebras; pick one with --dga")
        return next(iter(ws.dgas.values()))
    if dga not in ws.dgas:
        _fail_usage(f"no algebra named {dga!r} in {file}")
    return ws.dgas[dga]


def _complex(path: str):
    from .cochains import SimplicialPair
    from .presentation import load
    text = Path(path).read_text()
    if "complex" in text:
        ws = load(text)
        if len(ws.complexes) != 1:
            _fail_usage("the file must declare exactly one complex")
        return next(iter(ws.complexes.values()))
    try:
        return SimplicialPair.from_text(text, name=Path(path).stem)
    except ValueError as exc:
        _fail_usage(str(exc))


def _parse_cochain(text: Optional[str], k: int):
    """"0 1 2 = 1/2; 1 2 3 = -1" -> Cochain."""
    from .cochains import Cochain
    vals = {}
    for part in (text or "").split(";"):
        part = part.strip()
        if not part:
            continue
        if "=" not in part:
            _fail_usage(f"cochain entry {part!r} needs the form 'v0 v1 ... = value'")
        lhs, rhs = part.split("=", 1)
        try:
            s = tuple(sorted(int(v) for v in lhs.replace(",", " ").split()))
            vals[s] = Fraction(rhs.strip())
        except ValueError:
            _fail_usage(f"cannot read cochain entry {part!r}")
        if len(s) != k + 1:
            _fail_usage(f"{s} is not a {k}-simplex")
    return Cochain(k, vals)


def _cochain_text(x) -> str:
    if not x.values:
        return "0"
    return "; ".join(f"{' '.join(map(str, s))} = {v}" for s, v in sorted(x.values.items()) if v)


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__, prog_name="quantdga")
@click.option("--json", "as_json", is_flag=True, help="Emit JSON instead of key: value lines.")
@click.pass_context
def main(ctx: click.Context, as_json: bool):
    """Exact DGA homotopy computations and simplicial isoperimetry."""
    ctx.ensure_object(dict)
    ctx.obj["json"] = as_json


@main.command()
@json_option
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--homotopy", "hname", help="Homotopy to check against endpoints.")
@click.option("--start", help="Morphism expected at t=0.")
@click.option("--end", help="Morphism expected at t=1.")
@click.pass_context
def validate(ctx, file, hname, start, end):
    """Check every object declared in FILE."""
    from .morphisms import validate_homotopy
    from .presentation import load
    ws = load(Path(file).read_text())
    rec = Record()
    ok = True
    for name, A in ws.dgas.items():
        rec.add(f"dga {name}", f"{A.describe()}, minimal {_text(A.minimal)}")
    for name, f in ws.morphisms.items():
        good = f.is_chain_map()
        ok &= good
        rec.add(f"morphism {name}", "chain map" if good else "NOT a chain map")
    for name, H in ws.homotopies.items():
        good = H.is_chain_map()
        ok &= good
        rec.add(f"homotopy {name}", "chain map" if good else "NOT a chain map")
    for name, P in ws.complexes.items():
        rec.add(f"complex {name}", repr(P))
    if hname:
        if hname not in ws.homotopies:
            _fail_usage(f"no homotopy named {hname!r}")
        H = ws.homotopies[hname]
        f = ws.morphisms[start] if start else H.at(0)
        g = ws.morphisms[end] if end else H.at(1)
        if (start and start not in ws.morphisms) or (end and end not in ws.morphisms):
            _fail_usage("unknown endpoint morphism")
        good = validate_homotopy(H, f, g)
        ok &= good
        rec.add(f"{hname} from {start or 't=0'} to {end or 't=1'}", good)
    rec.add("valid", ok)
    _emit(ctx, rec)
    if not ok:
        ctx.exit(1)


@main.command()
@json_option
@click.option("--model", help="Canned model name.")
@click.option("--file", type=click.Path(exists=True, dir_okay=False))
@click.option("--dga", help="Algebra name inside --file.")
@click.option("--degree", type=click.IntRange(1, 22), required=True)
@click.option("--compare", help="Canned model to compare with, up to renaming.")
@click.pass_context
def minmodel(ctx, model, file, dga, degree, compare):
    """Minimal model of an algebra through a degree."""
    from .algebra import cohomology_dims
    from .models import canned_model, isomorphic_by_renaming, minimal_model_of
    from .presentation import dga_to_text
    A = _model(model, file, dga)
    M, _ = minimal_model_of(A, degree)
    rec = Record()
    rec.add("model", dga_to_text(M, M.name).strip().replace("\n", " "))
    rec.add("cohomology", cohomology_dims(M, degree))
    if compare:
        ren = isomorphic_by_renaming(M, canned_model(compare))
        rec.add(f"isomorphic to {compare}", ren is not None)
        if ren:
            rec.add("renaming", ", ".join(f"{a} -> {b}" for a, b in ren.items()))
    _emit(ctx, rec)


def _periods_run(model, file, dga, degree, zero_above):
    from .periods import model_periods
    M = _model(model, file, dga)
    return M, model_periods(M, degree, zero_above)


@main.command()
@json_option
@click.option("--model", help="Canned model name.")
@click.option("--file", type=click.Path(exists=True, dir_okay=False))
@click.option("--dga", help="Algebra name inside --file.")
@click.option("--degree", type=click.IntRange(2, 22), required=True)
@click.option("--zero-above", type=int, default=None, help="Dimension of the target space.")
@click.pass_context
def periods(ctx, model, file, dga, degree, zero_above):
    """Homotopy-period integrands of a generic map from the degree-sphere."""
    M, r = _periods_run(model, file, dga, degree, zero_above)
    rec = Record()
    for name, c in r.extension.symbols:
        rec.add(f"symbol {name}", f"d = {c.d()}, weight {r.ledger.weights[name]}")
    if not r.integrands:
        rec.add("integrands", f"none: no generators in degree {degree}")
    for v, a in r.integrands.items():
        rec.add(f"{v} integrand", a)
        rec.add(f"{v} weight", r.weights[v])
    _emit(ctx, rec)


@main.command()
@json_option
@click.option("--model", help="Canned model name.")
@click.option("--file", type=click.Path(exists=True, dir_okay=False))
@click.option("--dga", help="Algebra name inside --file.")
@click.option("--degree", type=click.IntRange(2, 22), required=True)
@click.option("--zero-above", type=int, default=None)
@click.option("--integrand", help="Element to reduce instead of the computed integrand.")
@click.pass_context
def reduce(ctx, model, file, dga, degree, zero_above, integrand):
    """Lower the ledger weight of period integrands by exact corrections."""
    from .periods import reduce_weight
    from .presentation import parse_element
    M, r = _periods_run(model, file, dga, degree, zero_above)
    alg = r.extension.algebra
    targets = dict(r.integrands)
    if integrand is not None:
        targets = {"input": parse_element(alg, integrand)}
    rec = Record()
    for v, a in targets.items():
        red, w, y = reduce_weight(alg.embed(a), r.ledger)
        rec.add(f"{v} weight", f"{r.ledger.weight(alg.embed(a))} -> {w}")
        rec.add(f"{v} correction", f"d({y})")
        rec.add(f"{v} reduced", red)
    _emit(ctx, rec)


@main.command()
@json_option
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--first", required=True, help="Homotopy from phi to psi.")
@click.option("--second", required=True, help="Homotopy from psi to xi.")
@click.pass_context
def concat(ctx, file, first, second):
    """Concatenate two homotopies declared in FILE."""
    from .morphisms import validate_homotopy
    from .obstruction import concatenate
    from .presentation import load
    ws = load(Path(file).read_text())
    for n in (first, second):
        if n not in ws.homotopies:
            _fail_usage(f"no homotopy named {n!r}")
    P, Q = ws.homotopies[first], ws.homotopies[second]
    X = concatenate(P, Q)
    rec = Record()
    for n, u in X.images.items():
        rec.add(f"{n}", u)
    rec.add("valid", validate_homotopy(X, P.at(0), Q.at(1)))
    ok = True
    for n in X.images:
        gap = X.images[n].integrate_0_1() - P.images[n].integrate_0_1() - Q.images[n].integrate_0_1()
        if gap:
            ok = False
            rec.add(f"{n} additivity defect", gap)
    rec.add("additive", ok)
    _emit(ctx, rec)


def _grading_arg(text: Optional[str], M):
    from .models import detect_positive_weights
    if text in (None, "auto"):
        g = detect_positive_weights(M)
        if g is None:
            from .errors import InvalidGrading
            raise InvalidGrading("the model admits no positive weights")
        return g
    out = {}
    for part in text.split(","):
        if "=" not in part:
            _fail_usage("grading must look like x=1,y=2")
        k, v = part.split("=", 1)
        try:
            out[k.strip()] = int(v)
        except ValueError:
            _fail_usage(f"bad weight {v!r}")
    return out


@main.command()
@json_option
@click.option("--model", help="Canned model name.")
@click.option("--file", type=click.Path(exists=True, dir_okay=False))
@click.option("--dga", help="Algebra name inside --file.")
@click.option("--degree", type=click.IntRange(1, 22), required=True, help="Dimension of the sphere.")
@click.option("--grading", default="auto", help="auto, or weights like x=1,y=2.")
@click.option("--zero-above", type=int, default=None)
@click.pass_context
def nullhomotopy(ctx, model, file, dga, degree, grading, zero_above):
    """Positive-weight nullhomotopy of a generic pullback."""
    from .models import weight_filtration
    from .morphisms import Morphism, validate_homotopy
    from .periods import positive_weight_nullhomotopy, pullback_target
    M = _model(model, file, dga)
    g = _grading_arg(grading, M)
    phi, ledger = pullback_target(M, degree, zero_above)
    H, ext, prims = positive_weight_nullhomotopy(M, g, phi, ledger)
    F = weight_filtration(M)
    rec = Record()
    rec.add("grading", ", ".join(f"{k}={g[k]}" for k in M.index))
    for v, u in H.images.items():
        rec.add(v, u)
    for v, c in prims.items():
        if c:
            bound = M.degrees[M.index[v]] + F.level_of(v) - 1
            rec.add(f"c({v})", f"d = {c.d()}, weight {ext.ledger.weight(c)} (bound {bound})")
    rec.add("valid", validate_homotopy(H, Morphism.zero(M, phi.target), phi))
    _emit(ctx, rec)


@main.command()
@json_option
@click.option("--model", help="Canned model name.")
@click.option("--file", type=click.Path(exists=True, dir_okay=False))
@click.option("--dga", help="Algebra name inside --file.")
@click.option("--degree", type=click.IntRange(1, 22), required=True)
@click.option("--generator", help="Degree-n generator dual to the class (default: all).")
@click.pass_context
def distortion(ctx, model, file, dga, degree, generator):
    """Predicted distortion exponent of degree-n homotopy classes."""
    from .models import hurewicz_image, predict_distortion_exponent
    M = _model(model, file, dga)
    gens = [generator] if generator else [g.name for g in M.generators if g.degree == degree]
    if not gens:
        _fail_usage(f"no generators of degree {degree}")
    rec = Record()
    rec.add("hurewicz rank", len(hurewicz_image(M, degree)))
    for g in gens:
        rec.add(f"{g} exponent", predict_distortion_exponent(M, degree, g))
    _emit(ctx, rec)


@main.command()
@json_option
@click.option("--complex", "cx", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--k", type=click.IntRange(1, 10), required=True)
@click.option("--side", type=click.Choice(["forms", "chains"]), default="forms")
@click.option("--cap", type=int, default=12)
@click.pass_context
def iso(ctx, cx, k, side, cap):
    """Isoperimetric constant of a simplicial pair."""
    from .cochains import iso_constant
    P = _complex(cx)
    r = iso_constant(P, k, side, cap)
    rec = Record()
    rec.add("constant", r.constant)
    rec.add("vertices", r.vertices)
    if r.extremal is not None:
        rec.add("extremal", _cochain_text(r.extremal))
        rec.add("optimum", _cochain_text(r.optimum))
        rec.add("verified", r.verify(P))
    _emit(ctx, rec)


@main.command()
@json_option
@click.option("--complex", "cx", type=click.Path(exists=True, dir_okay=False), required=True)
@click.option("--k", type=click.IntRange(1, 10), required=True)
@click.option("--cap", type=int, default=12)
@click.pass_context
def duality(ctx, cx, k, cap):
    """Compare the primitive and filling constants."""
    from .cochains import duality_check
    c1, c2, eq = duality_check(_complex(cx), k, cap)
    rec = Record()
    if ctx.find_root().obj.get("json"):
        rec.add("C1", c1)
        rec.add("C2", c2)
        rec.add("equal", eq)
        _emit(ctx, rec)
    else:
        head = f"C1 = C2 = {c1}" if eq else f"C1 = {c1}, C2 = {c2}"
        click.echo(f"{head}, equal: {_text(eq)}")
    if not eq:
        ctx.exit(1)


@main.command("round")
@json_option
@click.option("--complex", "cx", type=click.Path(exists=True, dir_okay=False))
@click.option("--prism", is_flag=True, help="Use the boundary-of-tetrahedron prism.")
@click.option("--n", type=click.IntRange(1, 10), required=True)
@click.option("--c", "ctext", default="", help="Integer cocycle, e.g. '0 1 2 = 1; 0 1 3 = -1'.")
@click.option("--w", "wtext", default=None, help="Rational cocycle in the same format.")
@click.option("--seed", type=int, default=None, help="Random instance w = c + d(b0).")
@click.pass_context
def round_(ctx, cx, prism, n, ctext, wtext, seed):
    """Round a primitive of w - c to integers and check the remainder bound."""
    from .cochains import Cochain, coboundary, guth_round, sphere_prism
    if bool(cx) == bool(prism):
        _fail_usage("give exactly one of --complex and --prism")
    P = sphere_prism() if prism else _complex(cx)
    c = _parse_cochain(ctext, n)
    if seed is not None:
        rng = random.Random(seed)
        b0 = Cochain(n - 1, {s: Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for s in P.cells(n - 1)})
        db = coboundary(P, b0)
        w = Cochain(n, dict(c.values))
        for s, v in db.values.items():
            w.values[s] = w.values.get(s, 0) + v
    elif wtext is not None:
        w = _parse_cochain(wtext, n)
    else:
        _fail_usage("give --w or --seed")
    g = guth_round(P, n, c, w)
    rec = Record()
    rec.add("b", _cochain_text(g.b))
    rec.add("rounded", _cochain_text(g.rounded))
    rec.add("remainder", _cochain_text(g.remainder))
    rec.add("max remainder", g.remainder.norm())
    rec.add("within faces/2", g.within_bounds())
    rec.add("integral primitive used", g.integral_fallback)
    _emit(ctx, rec)


@main.command()
@json_option
@click.option("--kappa", type=float, default=None, help="Default: sqrt(2 log(2 C C')).")
@click.option("--C", "C", type=float, default=2.0)
@click.option("--Cprime", "Cprime", type=float, default=2.0)
@click.option("--n", type=click.IntRange(1, 100), default=2)
@click.option("--lmin", type=float, default=1e4)
@click.option("--lmax", type=float, default=1e12)
@click.option("--per-decade", type=click.IntRange(1, 100), default=1)
@click.pass_context
def bounds(ctx, kappa, C, Cprime, n, lmin, lmax, per_decade):
    """Iterate the nullhomotopy recurrence and report where rho(L) = L."""
    from .bounds import format_sci, proof_kappa, weird_recurrence
    if kappa is None:
        kappa = proof_kappa(C, Cprime)
    try:
        t = weird_recurrence(C, Cprime, n, kappa, lmax, Lmin=lmin, per_decade=per_decade)
    except ValueError as exc:
        _fail_usage(str(exc))
    rec = Record()
    rec.add("kappa", f"{kappa:.6g}")
    rec.add("crossing", format_sci(t.crossing))
    rec.add("crossing closed form", f"exp({kappa * kappa:.6g})")
    rec.add("A", f"{t.A:.6g}")
    for L, g, r in t.rows:
        rec.add(f"L={format_sci(L)}", f"bound {format_sci(g)}, ratio {r:.6g}")
    rec.add("ratio non-increasing", t.non_increasing())
    _emit(ctx, rec)


def run(argv=None) -> int:
    """Entry point with the package's exit-status convention."""
    try:
        rv = main.main(args=argv, prog_name="quantdga", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.exceptions.Abort:
        click.echo("aborted", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 2 if isinstance(exc, click.UsageError) or exc.exit_code == 2 else 1
    except DomainError as exc:
        click.echo(f"error: {type(exc).__name__}: {exc}", err=True)
        return 1
    except (FileNotFoundError, IsADirectoryError) as exc:
        click.echo(f"error: {exc}", err=True)
        return 2
    return rv if isinstance(rv, int) else 0


def entry() -> None:
    sys.exit(run())
