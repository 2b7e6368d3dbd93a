"""Lifting functions, the canonical lift solver, retract transfer, algebra
composition, and the exhaustive filler oracle that grounds every derived
value in the test suite."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .arrows import ArrowObject, Awfs, FunctorialFactorization, LawReport, Square
from .core import (
    FiniteCategory,
    Presheaf,
    PresheafMap,
    ValidationError,
    all_maps,
    eq_witness,
)


class FillFailure(Exception):
    """A canonical lift failed to fill its square: corrupted structures."""

    def __init__(self, witness: dict):
        self.witness = witness
        super().__init__(f"canonical lift does not fill: {witness}")


@dataclass(eq=False)
class GeneratorDiagram:
    """A functor from a finite shape category into the arrow category.

    Objects name generating arrows; morphisms name connecting squares.
    """

    shape: FiniteCategory
    arrow_of: dict[str, ArrowObject]
    square_of: dict[str, Square] = field(default_factory=dict)

    def __post_init__(self):
        squares = dict(self.square_of)
        for o, i in self.shape.identities.items():
            arr = self.arrow_of[o]
            squares.setdefault(
                i, Square(arr, arr, PresheafMap.identity(arr.dom), PresheafMap.identity(arr.cod))
            )
        self.square_of = squares

    def objects(self) -> tuple[str, ...]:
        return self.shape.objects

    def is_discrete(self) -> bool:
        return not self.shape.nonidentity_morphisms()

    def validate(self, path: str = "generators") -> None:
        for o in self.shape.objects:
            if o not in self.arrow_of:
                raise ValidationError(f"{path}.{o}", "missing generator arrow")
        for m in self.shape.morphisms:
            sq = self.square_of.get(m)
            if sq is None:
                raise ValidationError(f"{path}.squares.{m}", "missing square")
            if sq.src != self.arrow_of[self.shape.src(m)] or sq.dst != self.arrow_of[self.shape.dst(m)]:
                raise ValidationError(f"{path}.squares.{m}", "square endpoints wrong")
            sq.validate(f"{path}.squares.{m}")
        for o, i in self.shape.identities.items():
            arr = self.arrow_of[o]
            if self.square_of[i] != Square(
                arr, arr, PresheafMap.identity(arr.dom), PresheafMap.identity(arr.cod)
            ):
                raise ValidationError(f"{path}.squares.{i}", "identity is not the identity square")
        for f in self.shape.morphisms:
            for g in self.shape.morphisms:
                if self.shape.dst(f) != self.shape.src(g):
                    continue
                gf = self.shape.compose(g, f)
                composed = Square(
                    self.square_of[f].src,
                    self.square_of[g].dst,
                    self.square_of[f].u.then(self.square_of[g].u),
                    self.square_of[f].v.then(self.square_of[g].v),
                )
                if self.square_of[gf] != composed:
                    raise ValidationError(
                        f"{path}.squares.{gf}", "functoriality fails on composite"
                    )

    @staticmethod
    def discrete(arrows: dict[str, ArrowObject]) -> "GeneratorDiagram":
        shape = FiniteCategory.discrete(tuple(arrows.keys()))
        return GeneratorDiagram(shape, dict(arrows))


def square_key(u: PresheafMap, v: PresheafMap) -> str:
    """Canonical serialization of a square's edges, used for dense tables."""
    base = u.base
    tables = [[list(u.components[o].table) for o in base.objects],
              [list(v.components[o].table) for o in base.objects]]
    return repr(tables)


@lru_cache(maxsize=None)
def _squares_into_cached(j: ArrowObject, g: ArrowObject) -> tuple[Square, ...]:
    out = []
    for u in all_maps(j.dom, g.dom):
        for v in all_maps(j.cod, g.cod):
            sq = Square(j, g, u, v)
            if sq.commutes():
                out.append(sq)
    out.sort(key=lambda s: square_key(s.u, s.v))
    return tuple(out)


def enumerate_squares(j: ArrowObject, g: ArrowObject) -> tuple[Square, ...]:
    """All squares j => g, in canonical lexicographic order of serialized (u, v)."""
    return _squares_into_cached(j, g)


def oracle_lift(j: ArrowObject, g: ArrowObject, sq: Square) -> list[PresheafMap]:
    """ALL diagonal fillers of the square, in canonical table order.

    This is the module's ground truth: it never consults any engine structure.
    """
    if sq.src != j or sq.dst != g:
        raise ValidationError("oracle_lift", "square does not connect j to g")
    fills = []
    for w in all_maps(j.cod, g.dom):
        if j.f.then(w) == sq.u and w.then(g.f) == sq.v:
            fills.append(w)
    return fills


@dataclass(eq=False)
class LiftingFunction:
    """Coherent choice of filler for every square from every generator into g.

    Stored as a dense table over the canonical square enumeration.
    """

    diagram: GeneratorDiagram
    g: ArrowObject
    fills: dict[tuple[str, str], PresheafMap]  # (j name, square key) -> filler

    def phi(self, jname: str, sq: Square) -> PresheafMap:
        key = (jname, square_key(sq.u, sq.v))
        if key not in self.fills:
            raise ValidationError("lifting_function", f"no fill recorded for {jname} square")
        return self.fills[key]

    @staticmethod
    def tabulate(diagram: GeneratorDiagram, g: ArrowObject, fn) -> "LiftingFunction":
        fills = {}
        for jname in diagram.objects():
            j = diagram.arrow_of[jname]
            for sq in enumerate_squares(j, g):
                fills[(jname, square_key(sq.u, sq.v))] = fn(jname, sq)
        return LiftingFunction(diagram, g, fills)


@dataclass(eq=False)
class AlgebraStructure:
    """Algebra datum (g, t): a chosen retraction t: Eg -> dom g."""

    g: ArrowObject
    t: PresheafMap


@dataclass(eq=False)
class CoalgebraStructure:
    """Coalgebra datum (f, s): a chosen section s: cod f -> Ef."""

    f: ArrowObject
    s: PresheafMap


def check_algebra_unit(a: AlgebraStructure, fact: FunctorialFactorization) -> LawReport:
    report = LawReport()
    fac = fact.factor(a.g)
    report.record(
        "algebra.square", a.g.key[:12], a.t.src == fac.mid and a.t.dst == a.g.dom
    )
    if report.passed:
        report.check("algebra.retlaw", a.g.key[:12], a.t.then(a.g.f), fac.right)
        report.check(
            "algebra.unit", a.g.key[:12], fac.left.then(a.t), PresheafMap.identity(a.g.dom)
        )
    return report


def check_algebra_laws(a: AlgebraStructure, awfs: Awfs) -> LawReport:
    """Unit law plus associativity against the monad multiplication."""
    report = check_algebra_unit(a, awfs.fact)
    if not report.passed:
        return report
    fac = awfs.fact.factor(a.g)
    rarr = ArrowObject(fac.right)
    t_sq = Square(rarr, a.g, a.t, PresheafMap.identity(a.g.cod))
    report.check(
        "algebra.assoc",
        a.g.key[:12],
        awfs.mu(a.g).then(a.t),
        awfs.fact.e(t_sq).then(a.t),
    )
    return report


def check_coalgebra_unit(c: CoalgebraStructure, fact: FunctorialFactorization) -> LawReport:
    report = LawReport()
    fac = fact.factor(c.f)
    report.record(
        "coalgebra.square", c.f.key[:12], c.s.src == c.f.cod and c.s.dst == fac.mid
    )
    if report.passed:
        report.check("coalgebra.seclaw", c.f.key[:12], c.f.f.then(c.s), fac.left)
        report.check(
            "coalgebra.unit", c.f.key[:12], c.s.then(fac.right), PresheafMap.identity(c.f.cod)
        )
    return report


def check_coalgebra_laws(c: CoalgebraStructure, awfs: Awfs) -> LawReport:
    """Unit law plus coassociativity against the comonad comultiplication."""
    report = check_coalgebra_unit(c, awfs.fact)
    if not report.passed:
        return report
    fac = awfs.fact.factor(c.f)
    larr = ArrowObject(fac.left)
    s_sq = Square(c.f, larr, PresheafMap.identity(c.f.dom), c.s)
    report.check(
        "coalgebra.coassoc",
        c.f.key[:12],
        c.s.then(awfs.delta(c.f)),
        c.s.then(awfs.fact.e(s_sq)),
    )
    return report


def solve_lift(
    c: CoalgebraStructure,
    a: AlgebraStructure,
    sq: Square,
    fact: FunctorialFactorization,
) -> PresheafMap:
    """Canonical solution w = t ∘ E(u, v) ∘ s of a lifting problem between a
    coalgebra and an algebra.  Raises FillFailure if w does not fill."""
    if sq.src != c.f or sq.dst != a.g:
        raise ValidationError("solve_lift", "square does not connect the structures")
    w = c.s.then(fact.e(sq)).then(a.t)
    top = eq_witness(c.f.f.then(w), sq.u)
    if top is not None:
        raise FillFailure({"triangle": "top", **top})
    bottom = eq_witness(w.then(a.g.f), sq.v)
    if bottom is not None:
        raise FillFailure({"triangle": "bottom", **bottom})
    return w


def check_lifting_function(diagram: GeneratorDiagram, lf: LiftingFunction) -> LawReport:
    """Verify filling on every square and coherence over every shape morphism."""
    report = LawReport()
    g = lf.g
    for jname in diagram.objects():
        j = diagram.arrow_of[jname]
        for idx, sq in enumerate(enumerate_squares(j, g)):
            probe = f"{jname}[{idx}]"
            try:
                w = lf.phi(jname, sq)
            except ValidationError:
                report.record("fill.present", probe, False)
                continue
            try:
                w.validate()
                report.record("fill.natural", probe, True)
            except ValidationError as exc:
                report.record("fill.natural", probe, False, {"error": str(exc)})
            report.check("fill.top", probe, j.f.then(w), sq.u)
            report.check("fill.bottom", probe, w.then(g.f), sq.v)
    for m in diagram.shape.nonidentity_morphisms():
        jp = diagram.shape.src(m)
        jn = diagram.shape.dst(m)
        conn = diagram.square_of[m]
        jarr = diagram.arrow_of[jn]
        for idx, sq in enumerate(enumerate_squares(jarr, g)):
            probe = f"coh.{m}[{idx}]"
            composed = Square(
                diagram.arrow_of[jp], g, conn.u.then(sq.u), conn.v.then(sq.v)
            )
            report.check(
                "coherence",
                probe,
                lf.phi(jp, composed),
                conn.v.then(lf.phi(jn, sq)),
            )
    return report


@dataclass
class RetractData:
    """h as a retract of g: sections i and retractions r on both levels."""

    h: ArrowObject
    g: ArrowObject
    i1: PresheafMap  # dom h -> dom g
    i2: PresheafMap  # cod h -> cod g
    r1: PresheafMap  # dom g -> dom h
    r2: PresheafMap  # cod g -> cod h

    def validate(self) -> None:
        checks = [
            ("retract.r1i1", self.i1.then(self.r1), PresheafMap.identity(self.h.dom)),
            ("retract.r2i2", self.i2.then(self.r2), PresheafMap.identity(self.h.cod)),
            ("retract.sq.i", self.i1.then(self.g.f), self.h.f.then(self.i2)),
            ("retract.sq.r", self.r1.then(self.h.f), self.g.f.then(self.r2)),
        ]
        for path, lhs, rhs in checks:
            w = eq_witness(lhs, rhs)
            if w is not None:
                raise ValidationError(path, f"retract diagram fails at {w}")


def retract_transfer(lf: LiftingFunction, retract: RetractData) -> LiftingFunction:
    """Transfer a lifting function along a retract: ψ(j,u,v) = r1·φ(j, i1·u, i2·v)."""
    retract.validate()
    if retract.g != lf.g:
        raise ValidationError("retract_transfer", "lifting function is not for g")

    def fn(jname: str, sq: Square) -> PresheafMap:
        big = Square(sq.src, retract.g, sq.u.then(retract.i1), sq.v.then(retract.i2))
        return lf.phi(jname, big).then(retract.r1)

    return LiftingFunction.tabulate(lf.diagram, retract.h, fn)


def compose_lifting(
    f_lift: tuple[ArrowObject, LiftingFunction],
    g_lift: tuple[ArrowObject, LiftingFunction],
) -> tuple[ArrowObject, LiftingFunction]:
    """Canonical composite (gf, ψ•φ) with ψ•φ(j,a,b) = φ(j, a, ψ(j, f·a, b))."""
    f, phi = f_lift
    g, psi = g_lift
    if f.cod != g.dom:
        raise ValidationError("compose_lifting", "arrows not composable")
    gf = ArrowObject(f.f.then(g.f))

    def fn(jname: str, sq: Square) -> PresheafMap:
        j = phi.diagram.arrow_of[jname]
        mid = psi.phi(jname, Square(j, g, sq.u.then(f.f), sq.v))
        return phi.phi(jname, Square(j, f, sq.u, mid))

    return gf, LiftingFunction.tabulate(phi.diagram, gf, fn)


def compose_algebras_free(
    a1: AlgebraStructure, a2: AlgebraStructure, awfs: Awfs
) -> AlgebraStructure:
    """Canonical algebra structure on a composite:
    t•s = s ∘ E(1, t·E(f,1)) ∘ δ_{gf} for composable algebras (f,s), (g,t)."""
    f, s = a1.g, a1.t
    g, t = a2.g, a2.t
    if f.cod != g.dom:
        raise ValidationError("compose_algebras_free", "arrows not composable")
    gf = ArrowObject(f.f.then(g.f))
    fact = awfs.fact
    fac_gf = fact.factor(gf)
    # E(f, 1): E(gf) -> Eg
    e_f1 = fact.e(Square(gf, g, f.f, PresheafMap.identity(g.cod)))
    bottom = e_f1.then(t)  # E(gf) -> cod f
    l_gf = ArrowObject(fac_gf.left)
    mid_sq = Square(l_gf, f, PresheafMap.identity(gf.dom), bottom)
    structure = awfs.delta(gf).then(fact.e(mid_sq)).then(s)
    return AlgebraStructure(gf, structure)


def check_algebra_map(
    sq: Square, a_f: AlgebraStructure, a_g: AlgebraStructure, fact: FunctorialFactorization
) -> bool:
    """Whether (u,v): f => g is a map of algebras: s' ∘ E(u,v) = u ∘ s."""
    if sq.src != a_f.g or sq.dst != a_g.g:
        raise ValidationError("check_algebra_map", "square does not connect the algebras")
    return eq_witness(fact.e(sq).then(a_g.t), a_f.t.then(sq.u)) is None


def algebra_to_lifting_function(
    diagram: GeneratorDiagram,
    a: AlgebraStructure,
    lam,
    fact: FunctorialFactorization,
) -> LiftingFunction:
    """The `lift` direction of the algebra/lifting-function dictionary:
    φ(j, u, v) = t ∘ E(u,v) ∘ s_j, with s_j the unit coalgebra structure."""

    def fn(jname: str, sq: Square) -> PresheafMap:
        return solve_lift(lam(jname), a, sq, fact)

    return LiftingFunction.tabulate(diagram, a.g, fn)
