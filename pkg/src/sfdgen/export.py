"""Machine-readable layout document: one JSON file mirroring the module tree.

The document is canonical (sorted keys, fixed separators), so exporting
a re-imported document reproduces the original bytes.
"""

from __future__ import annotations

import json

from .arcs import ArcSpec
from .community import Module, ModuleTree
from .diagram import Diagram

FORMAT_VERSION = 1


def _point(p) -> list[float] | None:
    return None if p is None else [float(p[0]), float(p[1])]


def _link_record(link: ArcSpec) -> dict:
    return {
        "source": link.source,
        "target": link.target,
        "source_element": link.source_element,
        "target_element": link.target_element,
        "kind": link.kind,
        "start": _point(link.start),
        "end": _point(link.end),
        "center": _point(link.center),
        "radius": None if link.radius is None else float(link.radius),
        "sweep": link.sweep,
        "loop": list(link.loop_nodes),
    }


def _module_record(module: Module, parent: int | None,
                   diagram: Diagram | None) -> dict:
    record = {
        "id": module.module_id,
        "label": module.label,
        "parent": parent,
        "irreducible": module.irreducible,
        "clustering_q": module.clustering_q,
        "members": list(module.member_ids),
        "children": [c.module_id for c in module.children],
        "entities": [],
        "links": [],
    }
    if diagram is not None:
        record["entities"] = [
            {
                "id": e.element_id,
                "shape": e.shape,
                "x": e.x,
                "y": e.y,
                "half_w": e.half_w,
                "half_h": e.half_h,
                "label": e.label,
                "polyline": None if e.polyline is None else [list(p) for p in e.polyline],
                "module_ref": e.module_ref,
            }
            for e in diagram.entities
        ]
        record["links"] = [_link_record(link) for link in diagram.links]
    return record


def export_layout(tree: ModuleTree, diagrams: dict[int, Diagram]) -> str:
    """Serialize the whole layout; loadable again via :func:`read_layout`."""
    parents: dict[int, int | None] = {tree.root.module_id: None}
    for module in tree.modules():
        for child in module.children:
            parents[child.module_id] = module.module_id
    records = [
        _module_record(m, parents[m.module_id], diagrams.get(m.module_id))
        for m in tree.modules()
    ]
    doc = {
        "format_version": FORMAT_VERSION,
        "clustering": tree.algo,
        "modules": records,
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def read_layout(text: str) -> dict:
    doc = json.loads(text)
    version = doc.get("format_version")
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported layout format version: {version!r}")
    return doc


def reexport_layout(doc: dict) -> str:
    """Canonical re-serialization of a loaded layout document."""
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"
