import contextlib
import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import List, Optional

import typer

from ultrawrap import __version__
from ultrawrap import cayley_dickson as cd
from ultrawrap import expression as ex
from ultrawrap import group_constructions as gc
from ultrawrap import linear_spaces as ls
from ultrawrap import padic_field as pf
from ultrawrap import quadratic_forms as qf
from ultrawrap import ultrametric_calculus as calc
from ultrawrap import wrap_sim as ws
from ultrawrap.exceptions import DomainError, MonoidLawError, UltrawrapError
from ultrawrap.schemas import check_document

log = logging.getLogger(__name__)

app = typer.Typer(help="Ultrametric arithmetic, Cayley-Dickson algebras and wrap group models.")
padic_app = typer.Typer(help="Scalars of Q_p and F_p((t)).")
cd_app = typer.Typer(help="Cayley-Dickson algebras A_r(q).")
calc_app = typer.Typer(help="Difference quotients and differentials.")
linal_app = typer.Typer(help="Linear maps over A_r.")
group_app = typer.Typer(help="Finite magmas, skew products and completions.")
wrap_app = typer.Typer(help="Desk-scale wrap monoids and transports.")
app.add_typer(padic_app, name="padic")
app.add_typer(cd_app, name="cd")
app.add_typer(calc_app, name="calc")
app.add_typer(linal_app, name="linal")
app.add_typer(group_app, name="group")
app.add_typer(wrap_app, name="wrap")

P_OPT = typer.Option(5, "--p", help="Residue characteristic")
KIND_OPT = typer.Option(pf.PADIC, "--kind", help="p-adic or laurent")
PRECISION_OPT = typer.Option(pf.DEFAULT_PRECISION, "--precision", help="Significant digits")
JSON_OPT = typer.Option(False, "--json", help="Print a JSON document")


def _version(value: bool):
    if value:
        typer.echo(f"ultrawrap {__version__}")
        raise typer.Exit()


@app.callback()
def main(
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug logging on stderr"),
    version: bool = typer.Option(False, "--version", callback=_version, is_eager=True, help="Show the version"),
) -> None:
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING)


@contextlib.contextmanager
def _reported():
    """Turn library errors into a message on stderr and exit code 1."""
    try:
        yield
    except (UltrawrapError, ValueError) as err:
        typer.echo(f"Error: {err}", err=True)
        raise typer.Exit(1)


def _emit(as_json: bool, doc, text: str) -> None:
    typer.echo(json.dumps(doc, indent=2) if as_json else text)


def _load(path: str, name: str) -> dict:
    if not Path(path).exists():
        raise DomainError(f"File not found: {path}")
    with open(path) as fid:
        return check_document(json.load(fid), name)


def _field(p: int, kind: str, precision: int) -> pf.Field:
    return pf.Field(kind, p, precision)


def _scalar(text: str, field_: pf.Field) -> pf.UltraScalar:
    value = ex.evaluate_text(text, ex.EvalContext(field_))
    if isinstance(value, cd.CDElement):
        raise DomainError(f"{text!r} is not a field element")
    return value


def _scalars(text: Optional[str], field_: pf.Field) -> List[pf.UltraScalar]:
    if not text:
        return []
    return [_scalar(item, field_) for item in text.split(",")]


def _params(q: Optional[str], field_: pf.Field) -> cd.CDParams:
    return cd.CDParams(field_, tuple(_scalars(q, field_)))


def _value_doc(value) -> dict:
    if isinstance(value, cd.CDElement):
        return check_document(cd.to_document(value), "cd_element")
    return check_document(pf.to_document(value), "ultra_scalar")


def _fraction_text(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# padic


@padic_app.command("show")
def padic_show(
    value: str = typer.Argument(..., help="Literal such as p5:2.301e-1, or an integer expression"),
    p: int = P_OPT,
    kind: str = KIND_OPT,
    precision: int = PRECISION_OPT,
    as_json: bool = JSON_OPT,
) -> None:
    """Show valuation, digits and norm of a scalar."""
    with _reported():
        x = pf.parse_literal(value) if ":" in value else _scalar(value, _field(p, kind, precision))
        lines = [
            f"literal:    {pf.format_literal(x)}",
            f"valuation:  {x.valuation}",
            f"digits:     {list(x.digits)}",
            f"norm:       {_fraction_text(pf.norm(x))}",
            f"known mod:  {x.p}^{x.absolute_precision}",
        ]
        _emit(as_json, _value_doc(x), "\n".join(lines))


@padic_app.command("sqrt")
def padic_sqrt(
    value: str = typer.Argument(..., help="Scalar literal or integer expression"),
    p: int = P_OPT,
    kind: str = KIND_OPT,
    precision: int = PRECISION_OPT,
    as_json: bool = JSON_OPT,
) -> None:
    """Hensel square root, when one exists."""
    with _reported():
        x = pf.parse_literal(value) if ":" in value else _scalar(value, _field(p, kind, precision))
        root = pf.hensel_sqrt(x)
        doc = {"square": root is not None, "root": None if root is None else _value_doc(root)}
        _emit(as_json, doc, "not a square" if root is None else pf.format_literal(root))


@padic_app.command("eval")
def padic_eval(
    text: str = typer.Argument(..., help="Expression, e.g. '(p5:1.2e0 + 3)/5'"),
    p: int = P_OPT,
    kind: str = KIND_OPT,
    precision: int = PRECISION_OPT,
    as_json: bool = JSON_OPT,
) -> None:
    """Evaluate a scalar expression."""
    with _reported():
        value = _scalar(text, _field(p, kind, precision))
        _emit(as_json, _value_doc(value), ex.format_value(value))


# cd


Q_OPT = typer.Option("1,1,1", "--q", help="Comma separated q_1..q_r; empty for the base field")


@cd_app.command("eval")
def cd_eval(
    text: str = typer.Argument(..., help="Expression such as '(u1*u2)*u4' or 'n(u3)'"),
    q: str = Q_OPT,
    p: int = P_OPT,
    kind: str = KIND_OPT,
    precision: int = PRECISION_OPT,
    as_json: bool = JSON_OPT,
) -> None:
    """Evaluate an algebra expression exactly as parenthesized."""
    with _reported():
        field_ = _field(p, kind, precision)
        value = ex.evaluate_text(text, ex.EvalContext(field_, _params(q, field_)))
        _emit(as_json, _value_doc(value), ex.format_value(value))


@cd_app.command("table")
def cd_table(
    q: str = Q_OPT,
    p: int = P_OPT,
    kind: str = KIND_OPT,
    precision: int = PRECISION_OPT,
    as_json: bool = JSON_OPT,
) -> None:
    """Print the signed generator table u_j u_k."""
    with _reported():
        params = _params(q, _field(p, kind, precision))
        table = cd.generator_table(params)
        doc = {"table": [[{"coeff": pf.format_literal(c), "index": k} for c, k in row] for row in table]}
        lines = [
            "  ".join(f"u{j}u{i}={pf.format_literal(c)}*u{k}" for i, (c, k) in enumerate(row))
            for j, row in enumerate(table)
        ]
        _emit(as_json, doc, "\n".join(lines))


@cd_app.command("witness")
def cd_witness(
    q: str = Q_OPT,
    p: int = P_OPT,
    kind: str = KIND_OPT,
    precision: int = PRECISION_OPT,
    as_json: bool = JSON_OPT,
) -> None:
    """First generator triple with (u_i u_j) u_k != u_i (u_j u_k)."""
    with _reported():
        params = _params(q, _field(p, kind, precision))
        triple = cd.non_associativity_witness(params)
        if triple is None:
            _emit(as_json, {"witness": None}, "associative")
            return
        i, j, k = (cd.generator(params, n) for n in triple)
        left, right = cd.cd_mul(cd.cd_mul(i, j), k), cd.cd_mul(i, cd.cd_mul(j, k))
        doc = {"witness": list(triple), "left": str(left), "right": str(right)}
        a, b, c = triple
        _emit(as_json, doc, f"(u{a}*u{b})*u{c} = {left}\nu{a}*(u{b}*u{c}) = {right}")


# division-check


@app.command("division-check")
def division_check(
    r: int = typer.Option(2, "--r", help="Level of the algebra"),
    q: str = typer.Option("1,1", "--q", help="Comma separated q_1..q_r"),
    p: int = typer.Option(2, "--p", help="Prime"),
    depth: int = typer.Option(1, "--depth", help="Residue search depth"),
    precision: int = typer.Option(10, "--precision", help="Significant digits"),
    matrix: Optional[str] = typer.Option(None, "--matrix", help="Comma separated primes: tabulate q_j in {1,-1,p,-p}"),
    as_json: bool = JSON_OPT,
) -> None:
    """Decide the division property by isotropy search and, for r = 2, the Hilbert symbol."""
    with _reported():
        if matrix:
            rows = qf.division_matrix([int(s) for s in matrix.split(",")], r, depth, precision)
            text = "\n".join(f"p={row['p']} q={row['q']} {row['verdict']}" for row in rows)
            _emit(as_json, {"rows": rows}, text)
            return
        field_ = pf.Field.qp(p, precision)
        params = _params(q, field_)
        if params.r != r:
            raise DomainError(f"--q gives {params.r} parameters but --r is {r}")
        verdict = qf.has_division_property(params, depth)
        doc = {"verdict": verdict.verdict, "certified": verdict.certified}
        text = verdict.verdict
        if verdict.pair is not None:
            b, b_star = verdict.pair
            doc["witness"] = {"b": _value_doc(b), "b_conj": _value_doc(b_star)}
            text += f"\nb  = {b}\nb* = {b_star}"
        if r == 2:
            doc["symbol"] = qf.hilbert_symbol(-params.q[0], -params.q[1], p)
        _emit(as_json, doc, text)


# calc


def _function(spec: str, field_: pf.Field) -> calc.ScalarFn:
    if spec.startswith("corpus:"):
        return calc.corpus(spec, field_)
    return calc.polynomial(spec, field_)


def _schedule(m1: Optional[int], target: Optional[int]) -> calc.ProbeSchedule:
    return calc.ProbeSchedule(m1=m1, target=target)


@calc_app.command("phi")
def calc_phi(
    f: str = typer.Option(..., "--f", help="Polynomial in x, or a corpus:... name"),
    x: str = typer.Option(..., "--x", help="Base point"),
    v: str = typer.Option(..., "--v", help="Comma separated directions"),
    t: str = typer.Option(..., "--t", help="Comma separated increments"),
    order: Optional[int] = typer.Option(None, "--order", help="Order n; defaults to the number of directions"),
    p: int = P_OPT,
    kind: str = KIND_OPT,
    precision: int = PRECISION_OPT,
    as_json: bool = JSON_OPT,
) -> None:
    """Phi^n f(x; v; t) for nonzero increments."""
    with _reported():
        field_ = _field(p, kind, precision)
        fn = _function(f, field_)
        qp = calc.QuotientPoint(_scalar(x, field_), tuple(_scalars(v, field_)), tuple(_scalars(t, field_)))
        if order is not None and order != qp.order:
            raise DomainError(f"--order {order} but {qp.order} directions were given")
        qp.check_domain(fn)
        value = calc.phi_n(fn, qp)
        _emit(as_json, {"order": qp.order, "value": _value_doc(value)}, ex.format_value(value))


@calc_app.command("d")
def calc_d(
    f: str = typer.Option(..., "--f", help="Polynomial in x, or a corpus:... name"),
    x: str = typer.Option(..., "--x", help="Base point"),
    v: str = typer.Option(..., "--v", help="Comma separated directions"),
    m1: Optional[int] = typer.Option(None, "--m1", help="Last probe exponent"),
    target: Optional[int] = typer.Option(None, "--target", help="Digits of agreement needed"),
    p: int = P_OPT,
    kind: str = KIND_OPT,
    precision: int = PRECISION_OPT,
    as_json: bool = JSON_OPT,
) -> None:
    """d^n f(x).(v_1, ..., v_n)."""
    with _reported():
        field_ = _field(p, kind, precision)
        value = calc.differential_n(_function(f, field_), _scalar(x, field_), _scalars(v, field_), _schedule(m1, target))
        _emit(as_json, {"value": _value_doc(value)}, ex.format_value(value))


@calc_app.command("class")
def calc_class(
    f: str = typer.Option(..., "--f", help="Polynomial in x, or a corpus:... name"),
    n: int = typer.Option(1, "--n", help="Smoothness order"),
    flavor: str = typer.Option("C", "--flavor", help="C or C[n]"),
    x: Optional[str] = typer.Option(None, "--x", help="Comma separated base points"),
    m1: Optional[int] = typer.Option(None, "--m1", help="Last probe exponent"),
    target: Optional[int] = typer.Option(None, "--target", help="Digits of agreement needed"),
    p: int = P_OPT,
    kind: str = KIND_OPT,
    precision: int = PRECISION_OPT,
    as_json: bool = JSON_OPT,
) -> None:
    """Membership verdict for C^n or C^[n]."""
    with _reported():
        field_ = _field(p, kind, precision)
        verdict = calc.class_check(
            _function(f, field_), n, flavor, _scalars(x, field_), schedule=_schedule(m1, target)
        )
        doc = {"verdict": verdict.verdict, "order": verdict.order, "flavor": verdict.flavor}
        _emit(as_json, doc, verdict.verdict)


# linal


def _finite_map(path: Optional[str], left: Optional[str], right: Optional[str], q: str, field_: pf.Field) -> ls.FiniteMap:
    if path:
        return ls.from_document(_load(path, "finite_map"))
    params = _params(q, field_)
    ctx = ex.EvalContext(field_, params)
    if left:
        return ls.left_multiplication(ex.as_element(ex.evaluate_text(left, ctx), ctx))
    if right:
        return ls.right_multiplication(ex.as_element(ex.evaluate_text(right, ctx), ctx))
    raise DomainError("Give a matrix file, --left or --right")


@linal_app.command("opnorm")
def linal_opnorm(
    path: Optional[str] = typer.Argument(None, help="finite_map JSON document"),
    left: Optional[str] = typer.Option(None, "--left", help="Left multiplication by this element"),
    right: Optional[str] = typer.Option(None, "--right", help="Right multiplication by this element"),
    sample: int = typer.Option(0, "--sample", help="Also estimate from this many random vectors"),
    seed: int = typer.Option(0, "--seed"),
    q: str = Q_OPT,
    p: int = P_OPT,
    kind: str = KIND_OPT,
    precision: int = PRECISION_OPT,
    as_json: bool = JSON_OPT,
) -> None:
    """Operator norm as the maximal entry norm."""
    with _reported():
        a = _finite_map(path, left, right, q, _field(p, kind, precision))
        norm = ls.operator_norm(a)
        doc = {"norm": _fraction_text(norm)}
        text = f"||A|| = {_fraction_text(norm)}"
        if sample:
            sampled = ls.sampled_operator_norm(a, sample, seed)
            doc["sampled"] = _fraction_text(sampled)
            text += f"\nsampled sup over {sample} vectors = {_fraction_text(sampled)}"
        _emit(as_json, doc, text)


@linal_app.command("classify")
def linal_classify(
    path: Optional[str] = typer.Argument(None, help="finite_map JSON document with q"),
    left: Optional[str] = typer.Option(None, "--left", help="Left multiplication by this element"),
    right: Optional[str] = typer.Option(None, "--right", help="Right multiplication by this element"),
    domain: str = typer.Option("full", "--domain", help="full or distinguished"),
    q: str = Q_OPT,
    p: int = P_OPT,
    kind: str = KIND_OPT,
    precision: int = PRECISION_OPT,
    as_json: bool = JSON_OPT,
) -> None:
    """Membership in K_q, K_r and K_l."""
    with _reported():
        a = _finite_map(path, left, right, q, _field(p, kind, precision))
        result = ls.linearity_class(a, domain)
        doc = {"classes": list(result.classes), "witnesses": {k: list(v) for k, v in result.witnesses.items()}}
        _emit(as_json, doc, " ".join(result.classes))


# group


BUILTINS = {
    "trivial": gc.trivial,
    "Z2": lambda: gc.cyclic(2),
    "Z4": lambda: gc.cyclic(4),
    "S3": gc.symmetric3,
    "Q8": gc.quaternion_units,
    "O16": gc.octonion_units,
}


def _magma(builtin: Optional[str], table: Optional[str]) -> gc.FiniteMagma:
    if table:
        return gc.from_document(_load(table, "magma_table"))
    if builtin is None:
        raise DomainError("Give --table or --builtin")
    if builtin.startswith("Z") and builtin[1:].isdigit():
        return gc.cyclic(int(builtin[1:]))
    if builtin not in BUILTINS:
        raise DomainError(f"Unknown built-in {builtin!r}; use Zn or one of {sorted(BUILTINS)}")
    return BUILTINS[builtin]()


def _skew_element(s: gc.SkewProduct, text: str) -> gc.SkewElement:
    parts = [part.strip() for part in text.split(",")]
    if len(parts) != 4:
        raise DomainError(f"Skew element {text!r} needs the form g1,w1,g2,w2")
    return s.element(parts[0], parts[1] or "e", parts[2], parts[3] or "e")


def _skew_text(s: gc.SkewProduct, x: gc.SkewElement) -> str:
    names = s.w.elements
    return f"{names[x.g1]}[{x.w1}] (x) {names[x.g2]}[{x.w2}]"


BUILTIN_OPT = typer.Option(None, "--builtin", help="trivial, Zn, S3, Q8 or O16")
TABLE_OPT = typer.Option(None, "--table", help="magma_table JSON document")


@group_app.command("audit")
def group_audit(
    builtin: Optional[str] = BUILTIN_OPT,
    table: Optional[str] = TABLE_OPT,
    cap: int = typer.Option(gc.AUDIT_CAP, "--cap", help="Largest table audited"),
    as_json: bool = JSON_OPT,
) -> None:
    """Check G1-G5 exhaustively over a multiplication table."""
    with _reported():
        m = _magma(builtin, table)
        report = gc.audit_axioms(m, cap)
        doc = {
            "name": m.name,
            "order": len(m),
            "axioms": dict(report.results),
            "witnesses": {k: report.named_witness(m, k) for k in report.results if report.witnesses[k] is not None},
        }
        lines = [f"{m.name} ({len(m)} elements)"]
        for axiom, ok in report.results.items():
            witness = report.named_witness(m, axiom)
            lines.append(f"  {axiom}: {'holds' if ok else 'fails'}" + ("" if ok else f" at {witness}"))
        _emit(as_json, doc, "\n".join(lines))


@group_app.command("skew-mul")
def group_skew_mul(
    x: str = typer.Argument(..., help="g1,w1,g2,w2 e.g. 'i,a,j,b^-1'"),
    y: str = typer.Argument(..., help="g1,w1,g2,w2"),
    builtin: Optional[str] = typer.Option("Q8", "--builtin", help="trivial, Zn, S3, Q8"),
    table: Optional[str] = TABLE_OPT,
    as_json: bool = JSON_OPT,
) -> None:
    """Product in the skew product of W with the free group on a, b."""
    with _reported():
        s = gc.SkewProduct(_magma(builtin, table))
        z = s.mul(_skew_element(s, x), _skew_element(s, y))
        names = s.w.elements
        doc = {
            "g1": names[z.g1],
            "w1": str(z.w1),
            "g2": names[z.g2],
            "w2": str(z.w2),
            "invariant": list(s.invariant(z)),
        }
        _emit(as_json, doc, _skew_text(s, z))


@group_app.command("skew-equiv")
def group_skew_equiv(
    x: str = typer.Argument(..., help="g1,w1,g2,w2"),
    y: str = typer.Argument(..., help="g1,w1,g2,w2"),
    builtin: Optional[str] = typer.Option("Q8", "--builtin", help="trivial, Zn, S3, Q8"),
    table: Optional[str] = TABLE_OPT,
    budget: int = typer.Option(gc.DEFAULT_REWRITE_BUDGET, "--budget", help="Rewrite expansions"),
    as_json: bool = JSON_OPT,
) -> None:
    """Decide equivalence under the defining relation within a rewrite budget."""
    with _reported():
        s = gc.SkewProduct(_magma(builtin, table))
        verdict = s.equiv(_skew_element(s, x), _skew_element(s, y), budget)
        _emit(as_json, {"verdict": verdict}, verdict)


@group_app.command("grothendieck")
def group_grothendieck(
    naturals: Optional[int] = typer.Option(None, "--naturals", help="Complete (N, +) sampled on 0..n"),
    builtin: Optional[str] = BUILTIN_OPT,
    table: Optional[str] = TABLE_OPT,
    as_json: bool = JSON_OPT,
) -> None:
    """Grothendieck completion of a commutative cancellative monoid."""
    with _reported():
        if naturals is not None:
            monoid = gc.truncated_naturals(naturals)
        else:
            monoid = gc.PresentedMonoid.from_magma(_magma(builtin, table))
        try:
            completion = gc.grothendieck(monoid)
        except MonoidLawError as err:
            witness = None if err.witness is None else [str(w) for w in err.witness]
            typer.echo(f"Error: {err} (witness {witness})", err=True)
            raise typer.Exit(1)
        reps = completion.classes()
        doc = {"monoid": monoid.name, "classes": len(reps), "representatives": [[str(a), str(b)] for a, b in reps]}
        _emit(as_json, doc, f"K({monoid.name}) has {len(reps)} classes on the generated range")


# wrap


def _settings(radius: int, kappa: str, stand_in: str) -> ws.WrapSettings:
    c1, c2 = (int(s) for s in kappa.split(","))
    return ws.WrapSettings(radius, (c1, c2), stand_in)


RADIUS_OPT = typer.Option(1, "--radius", help="Flatness radius around marked leaves")
KAPPA_OPT = typer.Option("0,1", "--kappa", help="Root children receiving the two copies")
STAND_IN_OPT = typer.Option("tree", "--stand-in", help="tree (default) or ball")


@wrap_app.command("compose")
def wrap_compose(
    f: str = typer.Option(..., "--f", help="grid_map JSON document"),
    g: str = typer.Option(..., "--g", help="grid_map JSON document"),
    p: Optional[int] = typer.Option(None, "--p", help="Expected branching"),
    d: Optional[int] = typer.Option(None, "--d", help="Expected depth"),
    k: Optional[int] = typer.Option(None, "--k", help="Expected number of marked leaves"),
    radius: int = RADIUS_OPT,
    kappa: str = KAPPA_OPT,
    stand_in: str = STAND_IN_OPT,
    as_json: bool = JSON_OPT,
) -> None:
    """g o f = chi_star(g v f) and its class."""
    with _reported():
        fm, gm = ws.from_document(_load(f, "grid_map")), ws.from_document(_load(g, "grid_map"))
        for m in (fm, gm):
            if (p is not None and m.grid.p != p) or (d is not None and m.grid.depth != d) or (
                k is not None and m.grid.k != k
            ):
                raise DomainError("Map does not live on the grid given by --p/--d/--k")
        settings = _settings(radius, kappa, stand_in)
        composite = ws.compose_maps(fm, gm, settings)
        cls = ws.canonicalize(composite, settings.stand_in)
        doc = {"map": check_document(ws.to_document(composite), "grid_map"), "counts": list(composite.counts())}
        text = f"depth {composite.grid.depth}, counts {list(composite.counts())}, class {cls.key}"
        _emit(as_json, doc, text)


@wrap_app.command("holonomy")
def wrap_holonomy(
    transport: str = typer.Argument(..., help="transport_map JSON document"),
    then: Optional[str] = typer.Option(None, "--then", help="Compose with a second transport first"),
    kappa: str = KAPPA_OPT,
    as_json: bool = JSON_OPT,
) -> None:
    """Holonomy h_q = g_q^-1 g_{q+k} of a transport."""
    with _reported():
        t = ws.transport_from_document(_load(transport, "transport_map"))
        if then:
            t2 = ws.transport_from_document(_load(then, "transport_map"), t.group)
            t = ws.compose_transports(t, t2, _settings(1, kappa, "tree").kappa)
        names = [t.group.elements[h] for h in ws.holonomy(t)]
        _emit(as_json, {"holonomy": names}, " ".join(names))


@wrap_app.command("audit")
def wrap_audit(
    p: int = typer.Option(2, "--p"),
    d: int = typer.Option(2, "--d"),
    k: int = typer.Option(1, "--k"),
    target_size: int = typer.Option(2, "--target-size", help="|N| including y0"),
    group: Optional[str] = typer.Option(None, "--group", help="Structure group: trivial, Zn, S3, Q8"),
    radius: int = RADIUS_OPT,
    kappa: str = KAPPA_OPT,
    stand_in: str = STAND_IN_OPT,
    as_json: bool = JSON_OPT,
) -> None:
    """Check the wrap monoid laws on the full flat-map population."""
    with _reported():
        target = tuple(f"y{i}" for i in range(target_size))
        structure = _magma(group, None) if group else None
        report = ws.audit_wrap_monoid(p, d, k, target, _settings(radius, kappa, stand_in), structure)
        doc = {
            "population": report.population,
            "classes": report.classes,
            "laws": {law: ok for law, (ok, _) in report.laws.items()},
        }
        lines = [f"{report.population} maps, {report.classes} classes"]
        lines += [f"  {law}: {'holds' if ok else 'fails'}" for law, (ok, _) in report.laws.items()]
        _emit(as_json, doc, "\n".join(lines))


@wrap_app.command("group")
def wrap_group_cmd(
    p: int = typer.Option(2, "--p"),
    d: int = typer.Option(2, "--d"),
    k: int = typer.Option(1, "--k"),
    target_size: int = typer.Option(2, "--target-size", help="|N| including y0"),
    group: Optional[str] = typer.Option(None, "--group", help="Structure group: trivial, Zn, S3, Q8"),
    stand_in: str = STAND_IN_OPT,
    as_json: bool = JSON_OPT,
) -> None:
    """The desk wrap group: Grothendieck completion, or the holonomy image for non-commutative G."""
    with _reported():
        target = tuple(f"y{i}" for i in range(target_size))
        structure = _magma(group, None) if group else None
        report = ws.wrap_group(p, d, k, target, structure, _settings(1, "0,1", stand_in))
        doc = {"kind": report.kind, "order": report.order, "axioms": report.axioms}
        _emit(as_json, doc, f"{report.kind}: {report.order} classes, axioms {report.axioms}")


if __name__ == "__main__":
    app()
