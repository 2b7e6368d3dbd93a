"""Instance files: parsing, exhaustive validation, and canonical serialization.

An instance bundles finite base categories, named presheaves and maps over
them, generator diagrams, a weak-equivalence predicate, inclusion functors
between generator diagrams, and adjunction descriptors.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .arrows import ArrowObject, Square
from .core import (
    FiniteCategory,
    Presheaf,
    PresheafMap,
    ValidationError,
    canonical_dumps,
    sha256_hex,
)
from .lifting import GeneratorDiagram
from .model import TauData, WeqPredicate
from .transport import AdjunctionData, FunctorData, identity_adjunction, restriction_adjunction


@dataclass
class InstanceFile:
    bases: dict[str, FiniteCategory]
    presheaves: dict[str, Presheaf]
    presheaf_base: dict[str, str]
    maps: dict[str, PresheafMap]
    generators: dict[str, GeneratorDiagram]
    weq: WeqPredicate
    taus: dict[str, TauData]
    adjunctions: dict[str, dict]
    options: dict
    raw: dict

    @property
    def main_base(self) -> FiniteCategory:
        return self.bases["main"]

    def canonical_json(self) -> str:
        return canonical_dumps(self.raw)

    def input_hash(self) -> str:
        return sha256_hex(self.canonical_json())

    def arrow(self, name: str) -> ArrowObject:
        if name not in self.maps:
            raise ValidationError(f"maps.{name}", "unknown map name")
        return ArrowObject(self.maps[name])

    def arrows_over(self, base_name: str) -> dict[str, ArrowObject]:
        base = self.bases[base_name]
        return {
            n: ArrowObject(m) for n, m in self.maps.items() if m.base == base
        }

    def adjunction(self, name: str) -> AdjunctionData:
        if name not in self.adjunctions:
            raise ValidationError(f"adjunctions.{name}", "unknown adjunction name")
        desc = self.adjunctions[name]
        kind = desc.get("kind")
        if kind == "identity":
            return identity_adjunction(self.bases[desc.get("base", "main")])
        if kind == "lan_res":
            src = self.bases[desc["from_base"]]
            dst = self.bases[desc.get("to_base", "main")]
            fd = FunctorData(
                src,
                dst,
                dict(desc["functor"].get("objects", {})),
                dict(desc["functor"].get("morphisms", {})),
            )
            return restriction_adjunction(fd)
        if kind == "explicit":
            return self._explicit_adjunction(name, desc)
        raise ValidationError(f"adjunctions.{name}.kind", f"unsupported kind {kind!r}")

    def _explicit_adjunction(self, name: str, desc: dict) -> AdjunctionData:
        """Fully tabulated adjunction: functors given on named objects/maps.

        Applying the functors outside the tabulated data raises, so explicit
        adjunctions support generator transport and law verification but not
        the constructions that evaluate functors on derived objects.
        """
        where = f"adjunctions.{name}"
        m_base = self.bases[desc.get("from_base", "main")]
        k_base = self.bases[desc.get("to_base", "main")]

        def table(kind_key):
            out = {}
            for a, b in desc.get(kind_key, {}).items():
                for n in (a, b):
                    if n not in self.presheaves and n not in self.maps:
                        raise ValidationError(f"{where}.{kind_key}.{a}", f"unknown name {n}")
            return dict(desc.get(kind_key, {}))

        t_obj_tab, s_obj_tab = table("t_objects"), table("s_objects")
        t_map_tab, s_map_tab = table("t_maps"), table("s_maps")
        unit_tab, counit_tab = dict(desc.get("unit", {})), dict(desc.get("counit", {}))

        def by_obj(tab, registry, label):
            lookup = {self.presheaves[a].key: registry[b] for a, b in tab.items()}

            def fn(x):
                if x.key not in lookup:
                    raise ValidationError(where, f"explicit adjunction {label} table does not cover an object")
                return lookup[x.key]

            return fn

        def by_map(tab, label):
            lookup = {self.maps[a].key: self.maps[b] for a, b in tab.items()}

            def fn(m):
                if m.key not in lookup:
                    raise ValidationError(where, f"explicit adjunction {label} table does not cover a map")
                return lookup[m.key]

            return fn

        def nat(tab, label):
            lookup = {self.presheaves[a].key: self.maps[b] for a, b in tab.items()}

            def fn(x):
                if x.key not in lookup:
                    raise ValidationError(where, f"explicit adjunction {label} table does not cover an object")
                return lookup[x.key]

            return fn

        return AdjunctionData(
            "explicit",
            m_base,
            k_base,
            by_obj(t_obj_tab, self.presheaves, "T"),
            by_map(t_map_tab, "T"),
            by_obj(s_obj_tab, self.presheaves, "S"),
            by_map(s_map_tab, "S"),
            nat(unit_tab, "unit"),
            nat(counit_tab, "counit"),
        )

    def option(self, key: str, override, fallback):
        """Command option resolution: explicit flag, else instance default."""
        if override is not None:
            return override
        return self.options.get(key, fallback)


def _parse_generators(name: str, data: dict, maps: dict[str, PresheafMap]) -> GeneratorDiagram:
    shape_data = data.get("shape", "discrete")
    arrows = {}
    for obj, mname in data.get("arrows", {}).items():
        if mname not in maps:
            raise ValidationError(f"generators.{name}.arrows.{obj}", f"unknown map {mname}")
        arrows[obj] = ArrowObject(maps[mname])
    if shape_data == "discrete":
        diagram = GeneratorDiagram.discrete(arrows)
    else:
        shape = FiniteCategory.from_json(shape_data)
        squares = {}
        for mor, sq in data.get("squares", {}).items():
            top, bottom = sq["top"], sq["bottom"]
            for m in (top, bottom):
                if m not in maps:
                    raise ValidationError(
                        f"generators.{name}.squares.{mor}", f"unknown map {m}"
                    )
            squares[mor] = Square(
                arrows[shape.src(mor)], arrows[shape.dst(mor)], maps[top], maps[bottom]
            )
        diagram = GeneratorDiagram(shape, arrows, squares)
    diagram.validate(f"generators.{name}")
    return diagram


def from_json(data: dict) -> InstanceFile:
    """Parse and exhaustively validate an instance document."""
    bases: dict[str, FiniteCategory] = {}
    base_field = data.get("base")
    if base_field is not None:
        bases["main"] = FiniteCategory.from_json(base_field)
    for bname, bdata in data.get("bases", {}).items():
        bases[bname] = FiniteCategory.from_json(bdata)
    if "main" not in bases:
        raise ValidationError("base", "missing main base category")
    for bname, cat in bases.items():
        try:
            cat.validate()
        except ValidationError as exc:
            raise ValidationError(f"bases.{bname}.{exc.path}", exc.message) from None

    presheaves: dict[str, Presheaf] = {}
    presheaf_base: dict[str, str] = {}
    for pname, pdata in data.get("presheaves", {}).items():
        bname = pdata.get("base", "main")
        if bname not in bases:
            raise ValidationError(f"presheaves.{pname}.base", f"unknown base {bname}")
        p = Presheaf.from_json(bases[bname], pdata, f"presheaves.{pname}")
        p.validate(f"presheaves.{pname}")
        presheaves[pname] = p
        presheaf_base[pname] = bname

    maps: dict[str, PresheafMap] = {}
    for mname, mdata in data.get("maps", {}).items():
        for end in ("src", "dst"):
            if mdata[end] not in presheaves:
                raise ValidationError(f"maps.{mname}.{end}", f"unknown presheaf {mdata[end]}")
        src, dst = presheaves[mdata["src"]], presheaves[mdata["dst"]]
        try:
            m = PresheafMap.from_tables(src, dst, mdata["components"])
        except (KeyError, ValidationError) as exc:
            raise ValidationError(f"maps.{mname}", str(exc)) from None
        m.validate(f"maps.{mname}")
        maps[mname] = m

    generators = {
        gname: _parse_generators(gname, gdata, maps)
        for gname, gdata in data.get("generators", {}).items()
    }

    weq = WeqPredicate.from_json(data.get("weq"), maps)

    taus: dict[str, TauData] = {}
    for tname, tdata in data.get("taus", {}).items():
        for end in ("src", "dst"):
            if tdata[end] not in generators:
                raise ValidationError(f"taus.{tname}.{end}", f"unknown generators {tdata[end]}")
        tau = TauData(
            generators[tdata["src"]],
            generators[tdata["dst"]],
            dict(tdata.get("objects", {})),
            dict(tdata.get("morphisms", {})),
        )
        tau.validate(f"taus.{tname}")
        taus[tname] = tau

    adjunctions = dict(data.get("adjunctions", {}))
    for aname, desc in adjunctions.items():
        kind = desc.get("kind")
        if kind not in ("identity", "lan_res", "explicit"):
            raise ValidationError(f"adjunctions.{aname}.kind", f"unsupported kind {kind!r}")
        if kind == "lan_res":
            if desc.get("from_base") not in bases:
                raise ValidationError(f"adjunctions.{aname}.from_base", "unknown base")
            FunctorData(
                bases[desc["from_base"]],
                bases[desc.get("to_base", "main")],
                dict(desc["functor"].get("objects", {})),
                dict(desc["functor"].get("morphisms", {})),
            ).validate(f"adjunctions.{aname}.functor")

    return InstanceFile(
        bases=bases,
        presheaves=presheaves,
        presheaf_base=presheaf_base,
        maps=maps,
        generators=generators,
        weq=weq,
        taus=taus,
        adjunctions=adjunctions,
        options=dict(data.get("options", {})),
        raw=data,
    )


def load(path: str) -> InstanceFile:
    with open(path, "r", encoding="utf-8") as handle:
        data = json.load(handle)
    return from_json(data)


def build_raw(
    bases: dict[str, FiniteCategory],
    presheaves: dict[str, tuple[str, Presheaf]],
    maps: dict[str, tuple[str, str, PresheafMap]],
    generators: dict[str, dict] | None = None,
    weq=None,
    taus: dict[str, dict] | None = None,
    adjunctions: dict[str, dict] | None = None,
    options: dict | None = None,
) -> dict:
    """Assemble a raw instance document from constructed objects.

    presheaves: name -> (base name, presheaf); maps: name -> (src name, dst
    name, map).
    """
    out: dict = {}
    base_items = dict(bases)
    out["base"] = base_items.pop("main").to_json()
    if base_items:
        out["bases"] = {n: c.to_json() for n, c in base_items.items()}
    out["presheaves"] = {}
    for pname, (bname, p) in presheaves.items():
        entry = p.to_json()
        if bname != "main":
            entry["base"] = bname
        out["presheaves"][pname] = entry
    out["maps"] = {
        mname: {"src": s, "dst": d, "components": m.table_json()}
        for mname, (s, d, m) in maps.items()
    }
    if generators:
        out["generators"] = generators
    if weq is not None:
        out["weq"] = weq
    if taus:
        out["taus"] = taus
    if adjunctions:
        out["adjunctions"] = adjunctions
    if options:
        out["options"] = options
    return out
