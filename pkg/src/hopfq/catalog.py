"""The example catalog: builders for every bundled structure file.

``python -m hopfq.catalog [DIR]`` regenerates the frozen files (default: the
package data directory). Tests compare the shipped files against a rebuild.
"""
from __future__ import annotations

import sys
from importlib import resources
from pathlib import Path
from typing import Callable

import numpy as np

from .comodule import AnchorMorphism, ComoduleMagma
from .constructions import (
    cyclic_group,
    direct_sum_whq,
    elementary_abelian,
    find_ip_loop,
    group_algebra,
    groupoid_algebra,
    groupoid_union,
    loop_algebra,
    octonion_loop,
    opposite_comodule_magma,
    pair_groupoid,
    projection_comodule,
    quaternion_loop,
    sign_action,
    smash_product,
)
from .exactlin import Mat, identity
from .fileformat import StructureFile, dump, load, parse, serialize
from .functors import EquivalenceExample, RightModule
from .hopfmod import StrongHopfModule
from .structures import WeakHopfQuasigroup

__all__ = ["BUNDLES", "build", "bundled_path", "load_bundled", "write_bundles", "equivalence_examples",
           "self_bundle", "CLASS_BUNDLES"]


def self_bundle(name: str, H: WeakHopfQuasigroup, description: str) -> StructureFile:
    """H as a comodule magma over itself, anchored by the identity, with M = H and N = B^coH."""
    doc = StructureFile(name=name, description=description)
    doc.add_whq("H", H)
    B = ComoduleMagma.regular(H)
    doc.add_comodule_magma("B", B, "H")
    anchor = AnchorMorphism(identity(H.dim), H, B)
    _finish(doc, anchor, "B")
    return doc


def _finish(doc: StructureFile, anchor: AnchorMorphism, target: str) -> None:
    doc.add_anchor("h", anchor, "H", target)
    doc.add_module("M", StrongHopfModule.regular(anchor), "h")
    doc.add_right_module("N", RightModule.regular(anchor), "h")


def kz2() -> StructureFile:
    return self_bundle("kz2", group_algebra(cyclic_group(2)), "group algebra of Z2")


def kz2x2() -> StructureFile:
    return self_bundle("kz2x2", group_algebra(elementary_abelian(2)), "group algebra of Z2 x Z2")


def octonion() -> StructureFile:
    return self_bundle("octonion", loop_algebra(octonion_loop()),
                       "loop algebra of the 16-element unit octonion loop")


def groupoid() -> StructureFile:
    return self_bundle("groupoid", groupoid_algebra(pair_groupoid(2)),
                       "groupoid algebra of the pair groupoid on 2 objects")


def groupoid_z2_z3() -> StructureFile:
    G = groupoid_algebra(groupoid_union([cyclic_group(2), cyclic_group(3)]))
    return self_bundle("groupoid_z2_z3", G, "groupoid algebra of the disjoint union of Z2 and Z3")


def loop7_plus_k() -> StructureFile:
    H = direct_sum_whq(loop_algebra(find_ip_loop(7)), group_algebra(cyclic_group(1)))
    return self_bundle("loop7_plus_k", H,
                       "direct sum of the order-7 IP loop algebra and the ground field: "
                       "nonassociative and weak")


def octonion_op() -> StructureFile:
    doc = StructureFile(name="octonion_op", description="opposite of the octonion loop algebra, anchored by the antipode")
    H = loop_algebra(octonion_loop())
    doc.add_whq("H", H)
    B, anchor = opposite_comodule_magma(H)
    doc.add_comodule_magma("Hop", B, "H")
    _finish(doc, anchor, "Hop")
    return doc


def smash() -> StructureFile:
    doc = StructureFile(name="smash",
                        description="smash product of K[Z2 x Z2] with the quaternion loop algebra under the sign action")
    A = group_algebra(elementary_abelian(2))
    H = loop_algebra(quaternion_loop())
    doc.add_whq("A", A)
    doc.add_whq("H", H)
    B, anchor = smash_product(A.magma, H, sign_action(2, H.dim), name="A#H")
    doc.add_comodule_magma("AH", B, "H")
    _finish(doc, anchor, "AH")
    return doc


def projection() -> StructureFile:
    """B = K[Z2 x Z2] over H = KZ2 through the first-coordinate projection."""
    doc = StructureFile(name="projection", description="K[Z2 x Z2] projecting onto KZ2 with a section")
    Bq = group_algebra(elementary_abelian(2))
    H = group_algebra(cyclic_group(2))
    g = np.zeros((2, 4), dtype=np.int64)
    f = np.zeros((4, 2), dtype=np.int64)
    for x in range(4):
        g[x & 1, x] = 1
    f[0, 0] = f[1, 1] = 1
    C, anchor = projection_comodule(Bq, H, Mat(g), Mat(f), name="B")
    doc.add_whq("H", H)
    doc.add_comodule_magma("B", C, "H")
    _finish(doc, anchor, "B")
    return doc


def builders() -> StructureFile:
    """Every builder section, for the parser and the CLI."""
    doc = StructureFile(name="builders", description="structures given by tables and parameters")
    doc.add_builder("group_table", "KZ3", cyclic_group(3).to_json())
    doc.add_builder("loop_table", "KL7", find_ip_loop(7).to_json())
    doc.add_builder("groupoid", "KP3", {"pair": 3})
    doc.add_builder("cochain", "KO", {"cayley_dickson": 3})
    doc.add_builder("comodule_magma", "O", {"regular": "KO"})
    doc.add_builder("smash", "AQ", {"A": "KZ2x2", "H": "KQ8", "action": sign_action(2, 8)})
    doc.add_builder("group_table", "KZ2x2", elementary_abelian(2).to_json())
    doc.add_builder("loop_table", "KQ8", quaternion_loop().to_json())
    doc.add_builder("modules", "AQ", {"anchor": "AQ", "regular": True})
    return parse_roundtrip(doc)


def parse_roundtrip(doc: StructureFile) -> StructureFile:
    """Resolve builder-only sections into live objects."""
    return parse(serialize(doc))


BUNDLES: dict[str, Callable[[], StructureFile]] = {
    "kz2": kz2,
    "kz2x2": kz2x2,
    "octonion": octonion,
    "groupoid": groupoid,
    "groupoid_z2_z3": groupoid_z2_z3,
    "loop7_plus_k": loop7_plus_k,
    "octonion_op": octonion_op,
    "smash": smash,
    "projection": projection,
    "builders": builders,
}

# one bundle per class of the equivalence corollary
CLASS_BUNDLES = {"i": "kz2", "ii": "groupoid", "iii": "octonion", "iv": "loop7_plus_k"}


def build(name: str) -> StructureFile:
    return BUNDLES[name]()


def bundled_path(name: str) -> Path:
    return Path(str(resources.files("hopfq") / "data" / f"{name}.struct"))


def load_bundled(name: str) -> StructureFile:
    return load(bundled_path(name))


def equivalence_examples(doc: StructureFile) -> list[EquivalenceExample]:
    out = []
    for an, A in doc.anchor.items():
        out.append(EquivalenceExample(f"{doc.name}:{an}" if doc.name else an, A,
                                      doc.modules_over(an), doc.right_modules_over(an)))
    return out


def write_bundles(directory: Path | None = None, names=None) -> list[Path]:
    directory = Path(directory) if directory else bundled_path("x").parent
    directory.mkdir(parents=True, exist_ok=True)
    written = []
    for name in names or BUNDLES:
        path = directory / f"{name}.struct"
        dump(build(name), path)
        written.append(path)
    return written


if __name__ == "__main__":
    for p in write_bundles(sys.argv[1] if len(sys.argv) > 1 else None):
        print(p)
