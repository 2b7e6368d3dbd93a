"""Garner-style small object argument on finite presheaf categories.

The monic variant is normative: each stage attaches one cell per square whose
top edge does not factor through the previous stage, so every square acquires
a unique minimal-stage cell and no coequalizer bookkeeping is needed.  The
standard variant attaches every square and then collapses redundant cells; it
is gated behind the `variant` option and must agree with the monic variant on
monic instances.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field

from .arrows import ArrowObject, Awfs, Factored, FunctorialFactorization, Square
from .core import (
    Presheaf,
    PresheafMap,
    ValidationError,
    coproduct,
    check_cocone_factor,
    pushout,
    quotient_presheaf,
)
from .lifting import (
    AlgebraStructure,
    CoalgebraStructure,
    GeneratorDiagram,
    LiftingFunction,
    enumerate_squares,
    square_key,
)


class NonConvergence(Exception):
    """The iteration hit max_steps while still attaching cells."""

    def __init__(self, arrow_key: str, trace: list[int]):
        self.arrow_key = arrow_key
        self.trace = trace
        super().__init__(f"no convergence after {len(trace) - 1} stages; sizes {trace}")


class MonicityViolation(Exception):
    """The monic variant is inapplicable: a generator or stage inclusion is not monic."""

    def __init__(self, where: str):
        self.where = where
        super().__init__(f"monic variant inapplicable: {where}")


class UnconvergedArrow(Exception):
    def __init__(self, arrow_key: str):
        self.arrow_key = arrow_key
        super().__init__(f"arrow {arrow_key[:16]} has no converged factorization")


def factor_through(u: PresheafMap, incl: PresheafMap) -> PresheafMap | None:
    """The unique u' with incl ∘ u' = u, when it exists (incl injective)."""
    lookup = {}
    for o in incl.base.objects:
        lookup[o] = {}
        for x, v in enumerate(incl.components[o].table):
            if v in lookup[o]:
                raise ValidationError("factor_through", "inclusion is not injective")
            lookup[o][v] = x
    tables = {}
    for o in u.base.objects:
        t = []
        for v in u.components[o].table:
            if v not in lookup[o]:
                return None
            t.append(lookup[o][v])
        tables[o] = t
    return PresheafMap.from_tables(u.src, incl.src, tables)


def induce_through(q: PresheafMap, value: PresheafMap) -> PresheafMap:
    """Unique map out of a quotient: table[q(x)] = value(x), q surjective."""
    tables = {}
    for o in q.base.objects:
        t = [-1] * q.dst.at[o].size
        qt, vt = q.components[o].table, value.components[o].table
        for x in range(q.src.at[o].size):
            if t[qt[x]] == -1:
                t[qt[x]] = vt[x]
            elif t[qt[x]] != vt[x]:
                raise ValidationError("induce_through", f"not constant on classes at {o}")
        if any(v == -1 for v in t):
            raise ValidationError("induce_through", f"quotient map not surjective at {o}")
        tables[o] = t
    return PresheafMap.from_tables(q.dst, value.dst, tables)


@dataclass
class CellRecord:
    """One attached cell: generator, attaching square into the previous stage's
    right factor, the stage it entered at, and its injection into that stage."""

    stage: int
    jname: str
    square: Square
    injection: PresheafMap  # cod j -> E^{stage}


@dataclass
class ArrowRecord:
    """Full stage bookkeeping for one factored arrow."""

    f: ArrowObject
    stages: list[Presheaf]  # E^0 .. E^N with E^0 = dom f
    inclusions: list[PresheafMap]  # E^b -> E^{b+1}
    rmaps: list[PresheafMap]  # r_b: E^b -> cod f
    cells: list[CellRecord]
    converged: bool
    variant: str

    def __post_init__(self):
        self.cell_index = {
            (c.stage, c.jname, square_key(c.square.u, c.square.v)): c for c in self.cells
        }

    @property
    def trace(self) -> list[int]:
        return [s.total_size for s in self.stages]

    def inclusion_range(self, lo: int, hi: int) -> PresheafMap:
        out = PresheafMap.identity(self.stages[lo])
        for b in range(lo, hi):
            out = out.then(self.inclusions[b])
        return out

    def left(self) -> PresheafMap:
        return self.inclusion_range(0, len(self.stages) - 1)

    def right(self) -> PresheafMap:
        return self.rmaps[-1]

    def mid(self) -> Presheaf:
        return self.stages[-1]


def density_comonad(diagram: GeneratorDiagram, f) -> tuple[ArrowObject, Square]:
    """Left Kan extension of the generator diagram along itself, evaluated at f:
    the coend over generators of squares-weighted copies, with its counit."""
    farr = f if isinstance(f, ArrowObject) else ArrowObject(f)
    base = farr.base
    squares = [
        (jname, sq)
        for jname in diagram.objects()
        for sq in enumerate_squares(diagram.arrow_of[jname], farr)
    ]
    if not squares:
        empty = Presheaf.empty(base)
        nothing = PresheafMap.identity(empty)
        l0_arr = ArrowObject(nothing)
        to_dom = PresheafMap.from_tables(empty, farr.dom, {o: [] for o in base.objects})
        to_cod = PresheafMap.from_tables(empty, farr.cod, {o: [] for o in base.objects})
        return l0_arr, Square(l0_arr, farr, to_dom, to_cod)
    dom_cop = coproduct([diagram.arrow_of[j].dom for j, _ in squares], base)
    cod_cop = coproduct([diagram.arrow_of[j].cod for j, _ in squares], base)
    index = {(j, square_key(sq.u, sq.v)): i for i, (j, sq) in enumerate(squares)}
    dom_rels, cod_rels = [], []
    for m in diagram.shape.nonidentity_morphisms():
        jp, jn = diagram.shape.src(m), diagram.shape.dst(m)
        conn = diagram.square_of[m]
        for i, (jname, sq) in enumerate(squares):
            if jname != jn:
                continue
            i2 = index[(jp, square_key(conn.u.then(sq.u), conn.v.then(sq.v)))]
            dom_rels.append((dom_cop.legs[i2], conn.u.then(dom_cop.legs[i])))
            cod_rels.append((cod_cop.legs[i2], conn.v.then(cod_cop.legs[i])))
    dom_q, dq = quotient_presheaf(dom_cop.apex, dom_rels)
    cod_q, cq = quotient_presheaf(cod_cop.apex, cod_rels)
    blocks = check_cocone_factor(
        dom_cop,
        [diagram.arrow_of[j].f.then(cod_cop.legs[i]).then(cq) for i, (j, _) in enumerate(squares)],
    )
    l0 = induce_through(dq, blocks)
    top = induce_through(
        dq, check_cocone_factor(dom_cop, [sq.u for _, sq in squares])
    )
    bottom = induce_through(
        cq, check_cocone_factor(cod_cop, [sq.v for _, sq in squares])
    )
    l0_arr = ArrowObject(l0)
    counit = Square(l0_arr, farr, top, bottom)
    return l0_arr, counit


def step_one(diagram: GeneratorDiagram, f) -> Factored:
    """One-step factorization: push out the density counit, then factor."""
    farr = f if isinstance(f, ArrowObject) else ArrowObject(f)
    l0, counit = density_comonad(diagram, farr)
    po = pushout(counit.u, l0.f)
    l1 = po.legs[0]
    r1 = check_cocone_factor(po, [farr.f, counit.v])
    return Factored(l1, po.apex, r1)


class GeneratedAwfs:
    """The awfs produced by running the small object argument over a generator
    diagram, with per-arrow stage and cell bookkeeping.

    Factorizations of arrows are computed lazily and cached; all structure maps
    (delta, mu, the unit coalgebras, free lifting functions) are derived from
    the cell records.
    """

    def __init__(self, diagram: GeneratorDiagram, variant: str = "monic", max_steps: int = 64):
        if variant not in ("monic", "standard"):
            raise ValidationError("run_soa.variant", f"unknown variant {variant!r}")
        self.diagram = diagram
        self.variant = variant
        self.max_steps = max_steps
        self._records: dict[str, ArrowRecord] = {}
        self._failures: dict[str, Exception] = {}
        self._esquares: dict[str, PresheafMap] = {}
        self._deltas: dict[str, PresheafMap] = {}
        self._mus: dict[str, PresheafMap] = {}
        self._lock = threading.RLock()
        if variant == "monic":
            for jname in diagram.objects():
                if not diagram.arrow_of[jname].f.is_injective():
                    raise MonicityViolation(f"generator {jname} is not componentwise injective")

    # -- factorization ----------------------------------------------------

    def record(self, f) -> ArrowRecord:
        farr = f if isinstance(f, ArrowObject) else ArrowObject(f)
        with self._lock:
            if farr.key in self._records:
                return self._records[farr.key]
            if farr.key in self._failures:
                raise self._failures[farr.key]
            try:
                rec = self._compute_record(farr)
            except (NonConvergence, MonicityViolation) as exc:
                self._failures[farr.key] = exc
                raise
            self._records[farr.key] = rec
            return rec

    def cached_records(self) -> dict[str, ArrowRecord]:
        """Snapshot of every factorization computed so far, keyed by arrow."""
        with self._lock:
            return dict(self._records)

    def _compute_record(self, farr: ArrowObject) -> ArrowRecord:
        stages = [farr.dom]
        inclusions: list[PresheafMap] = []
        rmaps: list[PresheafMap] = [farr.f]
        cells: list[CellRecord] = []
        cell_index: dict[tuple, CellRecord] = {}
        converged = False
        for stage in range(1, self.max_steps + 1):
            r_prev = rmaps[-1]
            r_arr = ArrowObject(r_prev)
            attached: list[tuple[str, Square, bool]] = []
            for jname in self.diagram.objects():
                j = self.diagram.arrow_of[jname]
                for sq in enumerate_squares(j, r_arr):
                    redundant = False
                    if stage >= 2:
                        redundant = factor_through(sq.u, inclusions[-1]) is not None
                    if redundant and self.variant == "monic":
                        continue
                    attached.append((jname, sq, redundant))
            if self.variant == "monic" and not attached:
                converged = True
                break
            new_stage, iota, injections, r_new = self._build_stage(
                stages, inclusions, rmaps, cell_index, attached
            )
            if self.variant == "standard" and iota.is_bijective():
                # idempotent stage: canonical labels make iota the identity
                converged = True
                break
            if self.variant == "monic" and not iota.is_injective():
                raise MonicityViolation(f"stage inclusion E^{stage - 1} -> E^{stage} of {farr.key[:16]}")
            stages.append(new_stage)
            inclusions.append(iota)
            rmaps.append(r_new)
            for (jname, sq, redundant), inj in zip(attached, injections):
                if redundant:
                    continue
                cell = CellRecord(stage, jname, sq, inj)
                cells.append(cell)
                cell_index[(stage, jname, square_key(sq.u, sq.v))] = cell
        if not converged:
            raise NonConvergence(farr.key, [s.total_size for s in stages])
        return ArrowRecord(farr, stages, inclusions, rmaps, cells, True, self.variant)

    def _build_stage(self, stages, inclusions, rmaps, cell_index, attached):
        """One colimit: glue the new cells onto the current stage object."""
        prev = stages[-1]
        r_prev = rmaps[-1]
        pieces = [prev] + [self.diagram.arrow_of[j].cod for j, _, _ in attached]
        cop = coproduct(pieces, prev.base)
        inj0 = cop.legs[0]
        rels: list[tuple[PresheafMap, PresheafMap]] = []
        for idx, (jname, sq, redundant) in enumerate(attached):
            j = self.diagram.arrow_of[jname]
            leg = cop.legs[idx + 1]
            rels.append((j.f.then(leg), sq.u.then(inj0)))
            if redundant:
                fill = self._partial_fill(stages, inclusions, cell_index, jname, sq)
                rels.append((leg, fill.then(inj0)))
        index = {
            (jname, square_key(sq.u, sq.v)): i for i, (jname, sq, _) in enumerate(attached)
        }
        for m in self.diagram.shape.nonidentity_morphisms():
            jp, jn = self.diagram.shape.src(m), self.diagram.shape.dst(m)
            conn = self.diagram.square_of[m]
            for idx, (jname, sq, _) in enumerate(attached):
                if jname != jn:
                    continue
                leg = cop.legs[idx + 1]
                cu, cv = conn.u.then(sq.u), conn.v.then(sq.v)
                ckey = (jp, square_key(cu, cv))
                if ckey in index:
                    rels.append((cop.legs[index[ckey] + 1], conn.v.then(leg)))
                else:
                    fill = self._partial_fill(
                        stages,
                        inclusions,
                        cell_index,
                        jp,
                        Square(self.diagram.arrow_of[jp], ArrowObject(r_prev), cu, cv),
                    )
                    rels.append((fill.then(inj0), conn.v.then(leg)))
        new_stage, q = quotient_presheaf(cop.apex, rels)
        iota = inj0.then(q)
        injections = [cop.legs[i + 1].then(q) for i in range(len(attached))]
        values = check_cocone_factor(cop, [r_prev] + [sq.v for _, sq, _ in attached])
        r_new = induce_through(q, values)
        return new_stage, iota, injections, r_new

    def _partial_fill(self, stages, inclusions, cell_index, jname, sq: Square) -> PresheafMap:
        """Minimal-stage cell injection for a square into the current right
        factor, composed up into the current stage object."""
        u = sq.u
        gamma = len(stages) - 1
        reduced = [u]
        while gamma >= 1:
            down = factor_through(reduced[-1], inclusions[gamma - 1])
            if down is None:
                break
            reduced.append(down)
            gamma -= 1
        u_min = reduced[-1]
        key = (gamma + 1, jname, square_key(u_min, sq.v))
        cell = cell_index.get(key)
        if cell is None:
            raise ValidationError(
                "soa.fill", f"no cell for generator {jname} at minimal stage {gamma + 1}"
            )
        out = cell.injection
        for b in range(gamma + 1, len(stages) - 1):
            out = out.then(inclusions[b])
        return out

    # -- derived structure -------------------------------------------------

    def factor(self, f) -> Factored:
        rec = self.record(f)
        return Factored(rec.left(), rec.mid(), rec.right())

    def free_fill(self, f, jname: str, sq: Square) -> PresheafMap:
        """Fill of a square from a generator into Rf: the stage-minimal cell."""
        rec = self.record(f)
        return self._partial_fill(
            rec.stages, rec.inclusions, rec.cell_index, jname, sq
        )

    def free_lifting_function(self, f) -> LiftingFunction:
        rec = self.record(f)
        if not rec.converged:
            raise UnconvergedArrow(rec.f.key)
        rf = ArrowObject(rec.right())
        return LiftingFunction.tabulate(
            self.diagram, rf, lambda jname, sq: self.free_fill(f, jname, sq)
        )

    def lam(self, jname: str) -> CoalgebraStructure:
        """Unit functor: the free coalgebra structure of a generator."""
        j = self.diagram.arrow_of[jname]
        rec = self.record(j)
        rf = ArrowObject(rec.right())
        sq = Square(j, rf, rec.left(), PresheafMap.identity(j.cod))
        return CoalgebraStructure(j, self.free_fill(j, jname, sq))

    def e_on_square(self, sq: Square) -> PresheafMap:
        """E(u, v) by cell reindexing: each cell of f maps to the minimal-stage
        fill of its composed square in g's factorization."""
        key = sq.key
        with self._lock:
            if key in self._esquares:
                return self._esquares[key]
        recf = self.record(sq.src)
        recg = self.record(sq.dst)
        rg = ArrowObject(recg.right())
        current = sq.u.then(recg.left())  # E^0 f -> Eg
        for stage in range(1, len(recf.stages)):
            prev_map = current
            target = recf.stages[stage]
            tables = {o: [-1] * target.at[o].size for o in target.base.objects}
            iota = recf.inclusions[stage - 1]

            def put(o, idx, val):
                if tables[o][idx] == -1:
                    tables[o][idx] = val
                elif tables[o][idx] != val:
                    raise ValidationError("e_on_square", f"inconsistent reindexing at {o}")

            for o in target.base.objects:
                it = iota.components[o].table
                pt = prev_map.components[o].table
                for x, v in enumerate(it):
                    put(o, v, pt[x])
            for cell in recf.cells:
                if cell.stage != stage:
                    continue
                j = self.diagram.arrow_of[cell.jname]
                top = cell.square.u.then(prev_map)
                bottom = cell.square.v.then(sq.v)
                fill = self.free_fill(sq.dst, cell.jname, Square(j, rg, top, bottom))
                for o in target.base.objects:
                    ct = cell.injection.components[o].table
                    ft = fill.components[o].table
                    for y, idx in enumerate(ct):
                        put(o, idx, ft[y])
            current = PresheafMap.from_tables(target, recg.mid(), tables)
        with self._lock:
            self._esquares[key] = current
        return current

    def mu(self, f) -> PresheafMap:
        """Multiplication by stage collapse: re-attach every cell of R f at its
        minimal stage in Ef."""
        farr = f if isinstance(f, ArrowObject) else ArrowObject(f)
        with self._lock:
            if farr.key in self._mus:
                return self._mus[farr.key]
        rec = self.record(farr)
        lf = self.free_lifting_function(farr)
        alg = lifting_function_to_algebra(self, lf)
        with self._lock:
            self._mus[farr.key] = alg.t
        return alg.t

    def delta(self, f) -> PresheafMap:
        farr = f if isinstance(f, ArrowObject) else ArrowObject(f)
        with self._lock:
            if farr.key in self._deltas:
                return self._deltas[farr.key]
        out = delta_from_composition(self, farr)
        with self._lock:
            self._deltas[farr.key] = out
        return out

    def free_algebra(self, f) -> AlgebraStructure:
        rec = self.record(f)
        return AlgebraStructure(ArrowObject(rec.right()), self.mu(f))

    def free_coalgebra(self, f) -> CoalgebraStructure:
        rec = self.record(f)
        return CoalgebraStructure(ArrowObject(rec.left()), self.delta(f))

    def as_fact(self) -> FunctorialFactorization:
        return FunctorialFactorization(self.factor, self.e_on_square)

    def as_awfs(self) -> Awfs:
        return Awfs(self.as_fact(), self.delta, self.mu)


def run_soa(diagram: GeneratorDiagram, variant: str = "monic", max_steps: int = 64) -> GeneratedAwfs:
    """Construct the lazily-evaluated awfs generated by a diagram."""
    diagram.validate()
    return GeneratedAwfs(diagram, variant=variant, max_steps=max_steps)


def lifting_function_to_algebra(gen: GeneratedAwfs, lf: LiftingFunction) -> AlgebraStructure:
    """Dictionary direction J^⧄ -> algebras: each cell of E(h) lands at the
    fill of its attaching square, transported through the stages."""
    h = lf.g
    rec = gen.record(h)
    current = PresheafMap.identity(h.dom)
    for stage in range(1, len(rec.stages)):
        prev_map = current
        target = rec.stages[stage]
        tables = {o: [-1] * target.at[o].size for o in target.base.objects}

        def put(o, idx, val):
            if tables[o][idx] == -1:
                tables[o][idx] = val
            elif tables[o][idx] != val:
                raise ValidationError(
                    "lifting_function_to_algebra", f"incoherent lifting function at {o}"
                )

        iota = rec.inclusions[stage - 1]
        for o in target.base.objects:
            it = iota.components[o].table
            pt = prev_map.components[o].table
            for x, v in enumerate(it):
                put(o, v, pt[x])
        for cell in rec.cells:
            if cell.stage != stage:
                continue
            j = gen.diagram.arrow_of[cell.jname]
            top = cell.square.u.then(prev_map)
            fill = lf.phi(cell.jname, Square(j, h, top, cell.square.v))
            for o in target.base.objects:
                ct = cell.injection.components[o].table
                ft = fill.components[o].table
                for y, idx in enumerate(ct):
                    put(o, idx, ft[y])
        current = PresheafMap.from_tables(target, h.dom, tables)
    return AlgebraStructure(h, current)


def delta_from_composition(gen: GeneratedAwfs, f) -> PresheafMap:
    """Comultiplication from the composite of free algebras:
    δ_f = (μ_f • μ_{Lf}) ∘ E(L²f, 1)."""
    from .lifting import compose_lifting

    farr = f if isinstance(f, ArrowObject) else ArrowObject(f)
    rec = gen.record(farr)
    larr = ArrowObject(rec.left())
    rec_l = gen.record(larr)
    rlf = ArrowObject(rec_l.right())
    rf = ArrowObject(rec.right())
    phi = gen.free_lifting_function(larr)  # for R(Lf)
    psi = gen.free_lifting_function(farr)  # for Rf
    comp_arrow, comp_lf = compose_lifting((rlf, phi), (rf, psi))
    alg = lifting_function_to_algebra(gen, comp_lf)  # E(Rf·RLf) -> ELf
    sq = Square(farr, comp_arrow, rec_l.left(), PresheafMap.identity(farr.cod))
    return gen.e_on_square(sq).then(alg.t)
