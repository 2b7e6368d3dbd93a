"""Exact kernel: finite sets, finite categories, finite-set-valued presheaves,
and pointwise finite colimits with deterministic quotient labeling.

Everything here is immutable after construction and every operation is a pure
function, so all of it is safe to call concurrently.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product


def canonical_dumps(obj) -> str:
    """Bit-exact canonical JSON: sorted keys, no whitespace."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def sha256_hex(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


class ValidationError(Exception):
    """A structural law failed, with a location path for diagnostics."""

    def __init__(self, path: str, message: str):
        self.path = path
        self.message = message
        super().__init__(f"{path}: {message}")


class NonCommutingCocone(Exception):
    """A claimed cocone does not commute; carries a (base object, element) witness."""

    def __init__(self, base_object: str, element: int, detail: str = ""):
        self.base_object = base_object
        self.element = element
        super().__init__(f"cocone fails to commute at ({base_object}, {element}) {detail}")


@dataclass(frozen=True)
class FinSet:
    """The set {0, ..., size-1}."""

    size: int

    def __post_init__(self):
        if self.size < 0:
            raise ValidationError("FinSet.size", "must be nonnegative")

    def elements(self) -> range:
        return range(self.size)


@dataclass(frozen=True)
class FinFunction:
    """Total function between FinSets, stored as a lookup table."""

    src: FinSet
    dst: FinSet
    table: tuple[int, ...]

    def __post_init__(self):
        if len(self.table) != self.src.size:
            raise ValidationError("FinFunction.table", "length must equal src.size")
        for i, v in enumerate(self.table):
            if not (0 <= v < self.dst.size):
                raise ValidationError("FinFunction.table", f"entry {i} -> {v} out of range")

    def __call__(self, x: int) -> int:
        return self.table[x]

    def then(self, other: "FinFunction") -> "FinFunction":
        """Diagrammatic composite: self followed by other."""
        if self.dst != other.src:
            raise ValidationError("FinFunction.then", "codomain/domain mismatch")
        return FinFunction(self.src, other.dst, tuple(other.table[v] for v in self.table))

    def after(self, other: "FinFunction") -> "FinFunction":
        """Classical composite self ∘ other."""
        return other.then(self)

    @staticmethod
    def identity(s: FinSet) -> "FinFunction":
        return FinFunction(s, s, tuple(range(s.size)))

    def is_injective(self) -> bool:
        return len(set(self.table)) == len(self.table)

    def is_surjective(self) -> bool:
        return set(self.table) == set(range(self.dst.size))

    def is_bijective(self) -> bool:
        return self.src.size == self.dst.size and self.is_injective()

    def inverse(self) -> "FinFunction":
        if not self.is_bijective():
            raise ValidationError("FinFunction.inverse", "not a bijection")
        inv = [0] * self.dst.size
        for i, v in enumerate(self.table):
            inv[v] = i
        return FinFunction(self.dst, self.src, tuple(inv))


@dataclass(eq=False)
class FiniteCategory:
    """Finite category with named objects and morphisms.

    Morphism names are globally unique. `compose` maps (g, f) with f: a->b,
    g: b->c to the name of g∘f; the table is total over composable pairs and
    includes identity compositions.
    """

    objects: tuple[str, ...]
    morphisms: dict[str, tuple[str, str]]  # name -> (src, dst)
    compose_table: dict[tuple[str, str], str]  # (g, f) -> g∘f
    identities: dict[str, str]  # object -> identity morphism name

    def __post_init__(self):
        self.objects = tuple(self.objects)
        homs: dict[tuple[str, str], list[str]] = {}
        for name, (a, b) in self.morphisms.items():
            homs.setdefault((a, b), []).append(name)
        self._homs = {k: tuple(v) for k, v in homs.items()}
        full = dict(self.compose_table)
        for name, (a, b) in self.morphisms.items():
            full.setdefault((self.identities[b], name), name)
            full.setdefault((name, self.identities[a]), name)
        self.compose_table = full
        self._key = canonical_dumps(
            {
                "objects": list(self.objects),
                "morphisms": {m: list(v) for m, v in sorted(self.morphisms.items())},
                "compose": {f"{g} {f}": h for (g, f), h in sorted(self.compose_table.items())},
                "identities": dict(sorted(self.identities.items())),
            }
        )

    @property
    def key(self) -> str:
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, FiniteCategory) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def hom(self, a: str, b: str) -> tuple[str, ...]:
        return self._homs.get((a, b), ())

    def morphism_names(self) -> tuple[str, ...]:
        return tuple(self.morphisms.keys())

    def nonidentity_morphisms(self) -> tuple[str, ...]:
        idset = set(self.identities.values())
        return tuple(m for m in self.morphisms if m not in idset)

    def src(self, m: str) -> str:
        return self.morphisms[m][0]

    def dst(self, m: str) -> str:
        return self.morphisms[m][1]

    def compose(self, g: str, f: str) -> str:
        """g∘f for f: a->b, g: b->c."""
        return self.compose_table[(g, f)]

    def identity(self, obj: str) -> str:
        return self.identities[obj]

    def validate(self) -> None:
        seen = set(self.objects)
        if len(seen) != len(self.objects):
            raise ValidationError("base.objects", "duplicate object names")
        for name, (a, b) in self.morphisms.items():
            if a not in seen or b not in seen:
                raise ValidationError(f"base.morphisms.{name}", "endpoint not an object")
        for obj in self.objects:
            i = self.identities.get(obj)
            if i is None or self.morphisms.get(i) != (obj, obj):
                raise ValidationError(f"base.identities.{obj}", "missing or ill-typed identity")
        for (g, f), h in self.compose_table.items():
            if self.dst(f) != self.src(g):
                raise ValidationError(f"base.compose.{g}∘{f}", "pair not composable")
            if self.morphisms.get(h) is None or (self.src(f), self.dst(g)) != self.morphisms[h]:
                raise ValidationError(f"base.compose.{g}∘{f}", f"composite {h} ill-typed")
        for f in self.morphisms:
            for g in self.morphisms:
                if self.dst(f) == self.src(g) and (g, f) not in self.compose_table:
                    raise ValidationError(f"base.compose.{g}∘{f}", "missing composite")
        for f in self.morphisms:
            a, b = self.morphisms[f]
            if self.compose(self.identities[b], f) != f or self.compose(f, self.identities[a]) != f:
                raise ValidationError(f"base.identity.{f}", "identity not neutral")
        for f in self.morphisms:
            for g in self.morphisms:
                if self.dst(f) != self.src(g):
                    continue
                gf = self.compose(g, f)
                for h in self.morphisms:
                    if self.dst(g) != self.src(h):
                        continue
                    if self.compose(h, gf) != self.compose(self.compose(h, g), f):
                        raise ValidationError(
                            f"base.assoc.{h}∘{g}∘{f}", "composition not associative"
                        )

    def to_json(self) -> dict:
        idset = set(self.identities.values())
        return {
            "objects": list(self.objects),
            "morphisms": [
                {"name": m, "src": a, "dst": b}
                for m, (a, b) in self.morphisms.items()
                if m not in idset
            ],
            "composition": [
                [g, f, h]
                for (g, f), h in sorted(self.compose_table.items())
                if g not in idset and f not in idset
            ],
            "identities": dict(sorted(self.identities.items())),
        }

    @staticmethod
    def from_json(data: dict) -> "FiniteCategory":
        objects = tuple(data["objects"])
        identities = dict(data.get("identities") or {o: f"id_{o}" for o in objects})
        morphisms: dict[str, tuple[str, str]] = {}
        for o in objects:
            morphisms[identities[o]] = (o, o)
        for m in data.get("morphisms", []):
            morphisms[m["name"]] = (m["src"], m["dst"])
        compose = {(g, f): h for g, f, h in data.get("composition", [])}
        return FiniteCategory(objects, morphisms, compose, identities)

    @staticmethod
    def point() -> "FiniteCategory":
        return FiniteCategory(("*",), {"id_*": ("*", "*")}, {}, {"*": "id_*"})

    @staticmethod
    def discrete(names: tuple[str, ...]) -> "FiniteCategory":
        return FiniteCategory(
            tuple(names),
            {f"id_{o}": (o, o) for o in names},
            {},
            {o: f"id_{o}" for o in names},
        )

    @staticmethod
    def walking_arrow() -> "FiniteCategory":
        return FiniteCategory(
            ("0", "1"),
            {"id_0": ("0", "0"), "id_1": ("1", "1"), "a": ("0", "1")},
            {},
            {"0": "id_0", "1": "id_1"},
        )

    @staticmethod
    def graph_base() -> "FiniteCategory":
        """Base for directed graphs: presheaves have vertex and edge sets."""
        return FiniteCategory(
            ("V", "E"),
            {"id_V": ("V", "V"), "id_E": ("E", "E"), "s": ("V", "E"), "t": ("V", "E")},
            {},
            {"V": "id_V", "E": "id_E"},
        )

    def opposite(self) -> "FiniteCategory":
        morphisms = {m: (b, a) for m, (a, b) in self.morphisms.items()}
        compose = {(f, g): h for (g, f), h in self.compose_table.items()}
        return FiniteCategory(self.objects, morphisms, compose, dict(self.identities))

    def product(self, other: "FiniteCategory") -> "FiniteCategory":
        objects = tuple(f"{a}|{b}" for a in self.objects for b in other.objects)
        morphisms = {
            f"{m}|{n}": (f"{self.src(m)}|{other.src(n)}", f"{self.dst(m)}|{other.dst(n)}")
            for m in self.morphisms
            for n in other.morphisms
        }
        compose = {}
        for (g1, f1), h1 in self.compose_table.items():
            for (g2, f2), h2 in other.compose_table.items():
                compose[(f"{g1}|{g2}", f"{f1}|{f2}")] = f"{h1}|{h2}"
        identities = {
            f"{a}|{b}": f"{self.identities[a]}|{other.identities[b]}"
            for a in self.objects
            for b in other.objects
        }
        return FiniteCategory(objects, morphisms, compose, identities)


@dataclass(eq=False)
class Presheaf:
    """Finite-set-valued presheaf: contravariant functor base^op -> FinSet.

    `act[m]` for m: a -> b in the base is a FinFunction at[b] -> at[a].
    Actions for identities are filled in automatically.
    """

    base: FiniteCategory
    at: dict[str, FinSet]
    act: dict[str, FinFunction]

    def __post_init__(self):
        at = {}
        for o in self.base.objects:
            s = self.at[o]
            at[o] = s if isinstance(s, FinSet) else FinSet(int(s))
        self.at = at
        act = dict(self.act)
        for o, i in self.base.identities.items():
            act.setdefault(i, FinFunction.identity(self.at[o]))
        self.act = act
        self._key = canonical_dumps(
            {
                "base": sha256_hex(self.base.key),
                "at": {o: self.at[o].size for o in self.base.objects},
                "act": {m: list(fn.table) for m, fn in sorted(self.act.items())},
            }
        )

    @property
    def key(self) -> str:
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, Presheaf) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    def size_at(self, obj: str) -> int:
        return self.at[obj].size

    @property
    def total_size(self) -> int:
        return sum(s.size for s in self.at.values())

    def validate(self, path: str = "presheaf") -> None:
        for m, (a, b) in self.base.morphisms.items():
            fn = self.act.get(m)
            if fn is None:
                raise ValidationError(f"{path}.act.{m}", "missing action")
            if fn.src != self.at[b] or fn.dst != self.at[a]:
                raise ValidationError(f"{path}.act.{m}", "action ill-typed (must be at[dst]->at[src])")
        for o, i in self.base.identities.items():
            if self.act[i] != FinFunction.identity(self.at[o]):
                raise ValidationError(f"{path}.act.{i}", "identity action is not the identity")
        for f in self.base.morphisms:
            for g in self.base.morphisms:
                if self.base.dst(f) != self.base.src(g):
                    continue
                gf = self.base.compose(g, f)
                if self.act[gf] != self.act[g].then(self.act[f]):
                    raise ValidationError(
                        f"{path}.act.{gf}", f"functoriality fails: act({g}∘{f}) != act({f})∘act({g})"
                    )

    def to_json(self) -> dict:
        idset = set(self.base.identities.values())
        return {
            "at": {o: self.at[o].size for o in self.base.objects},
            "act": {m: list(fn.table) for m, fn in self.act.items() if m not in idset},
        }

    @staticmethod
    def from_json(base: FiniteCategory, data: dict, path: str = "presheaf") -> "Presheaf":
        at = {o: FinSet(int(n)) for o, n in data["at"].items()}
        for o in base.objects:
            if o not in at:
                raise ValidationError(f"{path}.at.{o}", "missing object")
        act = {}
        for m, table in data.get("act", {}).items():
            if m not in base.morphisms:
                raise ValidationError(f"{path}.act.{m}", "unknown base morphism")
            a, b = base.morphisms[m]
            act[m] = FinFunction(at[b], at[a], tuple(int(v) for v in table))
        return Presheaf(base, at, act)

    @staticmethod
    def empty(base: FiniteCategory) -> "Presheaf":
        zero = FinSet(0)
        none = FinFunction(zero, zero, ())
        return Presheaf(
            base, {o: zero for o in base.objects}, {m: none for m in base.morphisms}
        )

    @staticmethod
    def terminal(base: FiniteCategory) -> "Presheaf":
        zero = FinSet(1)
        return Presheaf(
            base,
            {o: zero for o in base.objects},
            {m: FinFunction(zero, zero, (0,)) for m in base.morphisms},
        )

    @staticmethod
    def constant(base: FiniteCategory, n: int) -> "Presheaf":
        s = FinSet(n)
        ident = FinFunction.identity(s)
        return Presheaf(base, {o: s for o in base.objects}, {m: ident for m in base.morphisms})


@dataclass(eq=False)
class PresheafMap:
    """Natural transformation between presheaves on the same base."""

    src: Presheaf
    dst: Presheaf
    components: dict[str, FinFunction]

    def __post_init__(self):
        self._key = canonical_dumps(
            {
                "src": sha256_hex(self.src.key),
                "dst": sha256_hex(self.dst.key),
                "components": {
                    o: list(self.components[o].table) for o in self.src.base.objects
                },
            }
        )

    @property
    def key(self) -> str:
        return self._key

    def __eq__(self, other) -> bool:
        return isinstance(other, PresheafMap) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)

    @property
    def base(self) -> FiniteCategory:
        return self.src.base

    def component(self, obj: str) -> FinFunction:
        return self.components[obj]

    def __call__(self, obj: str, x: int) -> int:
        return self.components[obj].table[x]

    def validate(self, path: str = "map") -> None:
        if self.src.base != self.dst.base:
            raise ValidationError(path, "source and target live over different bases")
        for o in self.base.objects:
            fn = self.components.get(o)
            if fn is None:
                raise ValidationError(f"{path}.components.{o}", "missing component")
            if fn.src != self.src.at[o] or fn.dst != self.dst.at[o]:
                raise ValidationError(f"{path}.components.{o}", "component ill-typed")
        for m, (a, b) in self.base.morphisms.items():
            left = self.src.act[m].then(self.components[a])
            right = self.components[b].then(self.dst.act[m])
            if left != right:
                for x in range(self.src.at[b].size):
                    if left.table[x] != right.table[x]:
                        raise ValidationError(
                            f"{path}.naturality.{m}",
                            f"square fails at element {x} of ({b})",
                        )

    def then(self, other: "PresheafMap") -> "PresheafMap":
        if self.dst != other.src:
            raise ValidationError("map.then", "codomain/domain mismatch")
        return PresheafMap(
            self.src,
            other.dst,
            {o: self.components[o].then(other.components[o]) for o in self.base.objects},
        )

    def after(self, other: "PresheafMap") -> "PresheafMap":
        return other.then(self)

    @staticmethod
    def identity(p: Presheaf) -> "PresheafMap":
        return PresheafMap(p, p, {o: FinFunction.identity(p.at[o]) for o in p.base.objects})

    def is_injective(self) -> bool:
        return all(fn.is_injective() for fn in self.components.values())

    def is_bijective(self) -> bool:
        return all(fn.is_bijective() for fn in self.components.values())

    def inverse(self) -> "PresheafMap":
        return PresheafMap(
            self.dst, self.src, {o: fn.inverse() for o, fn in self.components.items()}
        )

    def table_json(self) -> dict:
        return {o: list(self.components[o].table) for o in self.base.objects}

    @staticmethod
    def from_tables(src: Presheaf, dst: Presheaf, tables: dict) -> "PresheafMap":
        comps = {
            o: FinFunction(src.at[o], dst.at[o], tuple(int(v) for v in tables[o]))
            for o in src.base.objects
        }
        return PresheafMap(src, dst, comps)


def eq_witness(m1: PresheafMap, m2: PresheafMap):
    """None when the maps agree; otherwise a (object, element, lhs, rhs) witness."""
    if m1.src != m2.src or m1.dst != m2.dst:
        return {"object": "<type>", "element": -1, "lhs": m1.key, "rhs": m2.key}
    for o in m1.base.objects:
        t1, t2 = m1.components[o].table, m2.components[o].table
        for x, (v1, v2) in enumerate(zip(t1, t2)):
            if v1 != v2:
                return {"object": o, "element": x, "lhs": v1, "rhs": v2}
    return None


# ---------------------------------------------------------------------------
# Colimits


class _UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x: int, y: int) -> None:
        rx, ry = self.find(x), self.find(y)
        if rx != ry:
            # smallest index wins: deterministic representatives
            if rx < ry:
                self.parent[ry] = rx
            else:
                self.parent[rx] = ry


@dataclass
class ColimitRecord:
    """A computed colimit: the apex with legs from the diagram's targets.

    `kind` is one of coproduct/pushout/coequalizer; `diagram` holds the maps
    the cocone must commute with (empty for coproducts).
    """

    kind: str
    diagram: tuple[PresheafMap, ...]
    apex: Presheaf
    legs: tuple[PresheafMap, ...]


def coproduct(parts: list[Presheaf], base: FiniteCategory | None = None) -> ColimitRecord:
    """Componentwise disjoint union; element order is concatenation in input order."""
    if parts:
        base = parts[0].base
        for i, p in enumerate(parts):
            if p.base != base:
                raise ValidationError(f"coproduct.parts[{i}]", "mismatched base categories")
    if base is None:
        raise ValidationError("coproduct", "empty coproduct needs an explicit base")
    offsets: dict[str, list[int]] = {o: [] for o in base.objects}
    sizes = {o: 0 for o in base.objects}
    for p in parts:
        for o in base.objects:
            offsets[o].append(sizes[o])
            sizes[o] += p.at[o].size
    at = {o: FinSet(sizes[o]) for o in base.objects}
    act = {}
    for m, (a, b) in base.morphisms.items():
        table = []
        for i, p in enumerate(parts):
            table.extend(offsets[a][i] + v for v in p.act[m].table)
        act[m] = FinFunction(at[b], at[a], tuple(table))
    apex = Presheaf(base, at, act)
    legs = tuple(
        PresheafMap(
            p,
            apex,
            {
                o: FinFunction(
                    p.at[o], at[o], tuple(offsets[o][i] + x for x in range(p.at[o].size))
                )
                for o in base.objects
            },
        )
        for i, p in enumerate(parts)
    )
    return ColimitRecord("coproduct", (), apex, legs)


def quotient_presheaf(
    x: Presheaf, relations: list[tuple[PresheafMap, PresheafMap]]
) -> tuple[Presheaf, PresheafMap]:
    """Quotient of x by the congruence generated by pairs of parallel maps into x.

    Each relation (alpha, beta) shares a source S and identifies alpha(s) with
    beta(s) for every element s.  Because relations are graphs of natural maps,
    the pointwise union-find quotient is automatically a presheaf.  Classes are
    labeled by order of first appearance (equivalently, smallest member).
    """
    base = x.base
    ufs = {o: _UnionFind(x.at[o].size) for o in base.objects}
    for alpha, beta in relations:
        if alpha.dst != x or beta.dst != x or alpha.src != beta.src:
            raise ValidationError("quotient.relations", "relation maps must be parallel into x")
        for o in base.objects:
            ta, tb = alpha.components[o].table, beta.components[o].table
            for s in range(alpha.src.at[o].size):
                ufs[o].union(ta[s], tb[s])
    labels: dict[str, list[int]] = {}
    counts: dict[str, int] = {}
    for o in base.objects:
        lab = [-1] * x.at[o].size
        nxt = 0
        for i in range(x.at[o].size):
            r = ufs[o].find(i)
            if lab[r] == -1:
                lab[r] = nxt
                nxt += 1
            lab[i] = lab[r]
        labels[o] = lab
        counts[o] = nxt
    at = {o: FinSet(counts[o]) for o in base.objects}
    reps: dict[str, list[int]] = {}
    for o in base.objects:
        rep = [-1] * counts[o]
        for i, l in enumerate(labels[o]):
            if rep[l] == -1:
                rep[l] = i
        reps[o] = rep
    act = {}
    for m, (a, b) in base.morphisms.items():
        old = x.act[m]
        act[m] = FinFunction(
            at[b], at[a], tuple(labels[a][old.table[reps[b][c]]] for c in range(counts[b]))
        )
    q_presheaf = Presheaf(base, at, act)
    q_map = PresheafMap(
        x,
        q_presheaf,
        {o: FinFunction(x.at[o], at[o], tuple(labels[o])) for o in base.objects},
    )
    for m, (a, b) in base.morphisms.items():
        # well-definedness of the induced action over every class member
        old = x.act[m]
        for i in range(x.at[b].size):
            if labels[a][old.table[i]] != q_presheaf.act[m].table[labels[b][i]]:
                raise ValidationError(
                    f"quotient.act.{m}", f"relation set not a congruence at element {i}"
                )
    return q_presheaf, q_map


def pushout(f: PresheafMap, g: PresheafMap) -> ColimitRecord:
    """Pushout of B <-f- A -g-> C, computed per base object by union-find."""
    if f.src != g.src:
        raise ValidationError("pushout", "maps must share their source")
    rec = coproduct([f.dst, g.dst])
    inj_b, inj_c = rec.legs
    apex, q = quotient_presheaf(rec.apex, [(f.then(inj_b), g.then(inj_c))])
    return ColimitRecord("pushout", (f, g), apex, (inj_b.then(q), inj_c.then(q)))


def coequalizer(f: PresheafMap, g: PresheafMap) -> ColimitRecord:
    """Coequalizer of a parallel pair f, g: A -> B."""
    if f.src != g.src or f.dst != g.dst:
        raise ValidationError("coequalizer", "maps must be parallel")
    apex, q = quotient_presheaf(f.dst, [(f, g)])
    return ColimitRecord("coequalizer", (f, g), apex, (q,))


def check_cocone_factor(record: ColimitRecord, cocone: list[PresheafMap]) -> PresheafMap:
    """Unique factoring of a commuting cocone through a computed colimit.

    Raises NonCommutingCocone (with a base object / element witness) when the
    cocone fails to commute with the colimit's diagram.
    """
    if len(cocone) != len(record.legs):
        raise ValidationError("cocone", "wrong number of legs")
    target = cocone[0].dst
    for leg, c in zip(record.legs, cocone):
        if c.src != leg.src or c.dst != target:
            raise ValidationError("cocone", "leg endpoints do not match the diagram")
    if record.kind == "pushout":
        f, g = record.diagram
        w = eq_witness(f.then(cocone[0]), g.then(cocone[1]))
        if w is not None:
            raise NonCommutingCocone(w["object"], w["element"], "pushout cocone")
    elif record.kind == "coequalizer":
        f, g = record.diagram
        w = eq_witness(f.then(cocone[0]), g.then(cocone[0]))
        if w is not None:
            raise NonCommutingCocone(w["object"], w["element"], "coequalizer cocone")
    base = record.apex.base
    tables: dict[str, list[int]] = {o: [-1] * record.apex.at[o].size for o in base.objects}
    for leg, c in zip(record.legs, cocone):
        for o in base.objects:
            lt, ct = leg.components[o].table, c.components[o].table
            for x in range(leg.src.at[o].size):
                cur = tables[o][lt[x]]
                if cur == -1:
                    tables[o][lt[x]] = ct[x]
                elif cur != ct[x]:
                    raise NonCommutingCocone(o, lt[x], "cocone not constant on a class")
    for o in base.objects:
        if any(v == -1 for v in tables[o]):
            raise ValidationError("cocone", f"colimit legs do not cover the apex at {o}")
    out = PresheafMap.from_tables(record.apex, target, tables)
    return out


# ---------------------------------------------------------------------------
# Exhaustive enumeration of natural transformations


@lru_cache(maxsize=None)
def _all_maps_cached(src: Presheaf, dst: Presheaf) -> tuple[PresheafMap, ...]:
    base = src.base
    objs = list(base.objects)
    constraints: dict[str, list[tuple[str, str]]] = {o: [] for o in objs}
    for m, (a, b) in base.morphisms.items():
        if a != b or m != base.identities[a]:
            constraints[b].append((m, a))

    results: list[PresheafMap] = []
    chosen: dict[str, tuple[int, ...]] = {}

    def ok_so_far(obj: str) -> bool:
        for m, a in constraints[obj]:
            if a not in chosen:
                continue
            # naturality for m: a -> obj: comp_a ∘ src.act[m] == dst.act[m] ∘ comp_obj
            sa, da = src.act[m].table, dst.act[m].table
            ca, cb = chosen[a], chosen[obj]
            for x in range(src.at[obj].size):
                if ca[sa[x]] != da[cb[x]]:
                    return False
        for o2 in objs:
            if o2 not in chosen:
                continue
            for m, a in constraints[o2]:
                if a == obj:
                    sa, da = src.act[m].table, dst.act[m].table
                    ca, cb = chosen[obj], chosen[o2]
                    for x in range(src.at[o2].size):
                        if ca[sa[x]] != da[cb[x]]:
                            return False
        return True

    def rec(i: int) -> None:
        if i == len(objs):
            comps = {
                o: FinFunction(src.at[o], dst.at[o], chosen[o]) for o in objs
            }
            results.append(PresheafMap(src, dst, comps))
            return
        o = objs[i]
        n, k = src.at[o].size, dst.at[o].size
        if n > 0 and k == 0:
            return
        for table in product(range(k), repeat=n):
            chosen[o] = table
            if ok_so_far(o):
                rec(i + 1)
            del chosen[o]

    rec(0)
    return tuple(results)


def all_maps(src: Presheaf, dst: Presheaf) -> tuple[PresheafMap, ...]:
    """Every natural transformation src -> dst, in lexicographic table order."""
    return _all_maps_cached(src, dst)
