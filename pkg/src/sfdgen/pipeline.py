"""End-to-end pipeline: parse, chain, modularize, lay out, render, export.

Stages run in a fixed order and any failure aborts with the stage name
attached. The pure :func:`generate` drives everything in memory (used by
the HTTP service); :func:`run_pipeline` adds file input and artifact
writing for the CLI.
"""

from __future__ import annotations

import re
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import render
from .community import Module, ModuleTree, recursive_modularize
from .diagram import (Diagram, assemble_module_diagram, assemble_parent_diagram,
                      build_links, module_placeholder, sized_node_for)
from .export import export_layout
from .geometry import ChainLayoutParams, LayoutParams
from .mainchain import LayoutGraph, detect_main_chains, layout_main_chain, redirect_edges
from .model import ModelError, ModelGraph, parse_model, validate
from .overlap import remove_overlaps_voronoi, remove_overlaps_vpsc
from .stress import SizedNode, build_stress_model, minimize_stress

STAGES = ("parse", "validate", "detect-chains", "chain-layout", "redirect-edges",
          "modularize", "stress-layout", "overlap-removal", "curve-edges",
          "assemble", "render", "export")


class PipelineError(Exception):
    def __init__(self, stage: str, message: str, element: str | None = None):
        detail = f"[{stage}] {message}"
        if element:
            detail += f" (element: {element})"
        super().__init__(detail)
        self.stage = stage
        self.element = element


class ValidationFailure(PipelineError):
    """Input is syntactically or structurally invalid (CLI exit code 2)."""

    def __init__(self, message: str, diagnostics: list | None = None,
                 stage: str = "validate"):
        super().__init__(stage, message)
        self.diagnostics = diagnostics or []


@dataclass
class GenerateOptions:
    format: str = "model-json"
    cluster: str = "cnm"            # cnm | gn | none
    threshold: int = 75
    overlap: str = "vpsc"           # vpsc | voronoi | none
    seed: int = 42
    hints_text: str | None = None
    chain_params: ChainLayoutParams = field(default_factory=ChainLayoutParams)
    layout_params: LayoutParams = field(default_factory=LayoutParams)

    def check(self) -> None:
        if self.format not in ("model-json", "edge-list"):
            raise ValueError(f"unknown format: {self.format!r}")
        if self.cluster not in ("cnm", "gn", "none"):
            raise ValueError(f"unknown clustering algorithm: {self.cluster!r}")
        if self.overlap not in ("vpsc", "voronoi", "none"):
            raise ValueError(f"unknown overlap remover: {self.overlap!r}")
        if self.threshold < 2:
            raise ValueError("threshold must be at least 2")


@dataclass
class RunConfig:
    """File-level configuration for one CLI run."""

    input_path: str
    out_dir: str
    format: str = "model-json"
    cluster: str = "cnm"
    threshold: int = 75
    overlap: str = "vpsc"
    seed: int = 42
    hints_path: str | None = None
    chain_params: ChainLayoutParams = field(default_factory=ChainLayoutParams)
    layout_params: LayoutParams = field(default_factory=LayoutParams)

    def options(self, hints_text: str | None) -> GenerateOptions:
        return GenerateOptions(
            format=self.format, cluster=self.cluster, threshold=self.threshold,
            overlap=self.overlap, seed=self.seed, hints_text=hints_text,
            chain_params=self.chain_params, layout_params=self.layout_params)


@dataclass
class ModuleStats:
    module_id: int
    label: str
    node_count: int
    stress: float
    is_leaf: bool
    irreducible: bool


@dataclass
class ClusteringStats:
    module_id: int
    algorithm: str
    q: float
    communities: int


@dataclass
class RunReport:
    variable_count: int
    chain_count: int
    layout_node_count: int
    module_count: int
    top_level_modules: int
    modules: list[ModuleStats]
    clusterings: list[ClusteringStats]
    timings: dict[str, float]
    seed: int
    cluster: str
    overlap: str
    threshold: int

    def to_text(self) -> str:
        lines = [
            "diagram generation report",
            f"  variables: {self.variable_count}  chains: {self.chain_count}  "
            f"layout nodes: {self.layout_node_count}",
            f"  cluster={self.cluster} threshold={self.threshold} "
            f"overlap={self.overlap} seed={self.seed}",
            f"  modules: {self.module_count} (top level: {self.top_level_modules})",
        ]
        if self.clusterings:
            lines.append("  clusterings:")
            for c in self.clusterings:
                lines.append(f"    module {c.module_id}: {c.algorithm} "
                             f"Q={c.q:.4f} communities={c.communities}")
        lines.append("  per-module:")
        for m in self.modules:
            kind = "leaf" if m.is_leaf else "interior"
            extra = " irreducible" if m.irreducible else ""
            lines.append(f"    [{m.module_id}] {m.label}: {kind} "
                         f"nodes={m.node_count} stress={m.stress:.4f}{extra}")
        lines.append("  timings:")
        for stage in STAGES:
            if stage in self.timings:
                lines.append(f"    {stage}: {self.timings[stage]:.3f}s")
        return "\n".join(lines) + "\n"


@dataclass
class DiagramArtifact:
    filename: str
    module_id: int
    label: str
    diagram: Diagram
    svg: str


@dataclass
class GenerateResult:
    report: RunReport
    diagrams: list[DiagramArtifact]
    layout_text: str


def _slug(label: str) -> str:
    slug = re.sub(r"[^A-Za-z0-9]+", "_", label).strip("_").lower()
    return slug or "module"


def parse_hints(text: str, lg: LayoutGraph) -> list[tuple[str, list[str]]]:
    """``label: id, id, ...`` per line; ids follow edge-list numbering."""
    groups: list[tuple[str, list[str]]] = []
    ids = lg.node_ids
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise ValueError(f"hints line {lineno}: expected 'label: id, id, ...'")
        label, rest = line.split(":", 1)
        members = []
        for token in re.split(r"[\s,]+", rest.strip()):
            if not token:
                continue
            try:
                idx = int(token)
            except ValueError:
                raise ValueError(f"hints line {lineno}: invalid id {token!r}") from None
            if not 0 <= idx < len(ids):
                raise ValueError(f"hints line {lineno}: unknown id {idx}")
            members.append(ids[idx])
        if not members:
            raise ValueError(f"hints line {lineno}: empty module")
        groups.append((label.strip(), members))
    return groups


def _descendant_members(module: Module, memo: dict[int, list[str]]) -> list[str]:
    if module.module_id in memo:
        return memo[module.module_id]
    if module.is_leaf:
        out = list(module.member_ids)
    else:
        out = []
        for child in module.children:
            out.extend(_descendant_members(child, memo))
    memo[module.module_id] = out
    return out


def _module_edges(lg: LayoutGraph, members: set[str],
                  remap: dict[str, str] | None = None
                  ) -> dict[tuple[str, str], list[tuple[str, str]]]:
    """Edges of one module's diagram, in the layout graph's stable order.

    With ``remap``, endpoints collapse onto child-module placeholders and
    duplicates merge; edges leaving the member set are dropped either way.
    """
    out: dict[tuple[str, str], list[tuple[str, str]]] = {}
    for (a, b), originals in lg.edges.items():
        if a not in members or b not in members:
            continue
        if remap is not None:
            ra, rb = remap[a], remap[b]
            if ra == rb:
                continue
            out.setdefault((ra, rb), []).extend(originals)
        else:
            out.setdefault((a, b), []).extend(originals)
    return out


class _Clock:
    """Accumulates wall time per stage."""

    def __init__(self) -> None:
        self.timings: dict[str, float] = {}

    def add(self, stage: str, t0: float) -> None:
        self.timings[stage] = self.timings.get(stage, 0.0) + time.perf_counter() - t0


def _layout_module(node_list: list[SizedNode],
                   edges: dict[tuple[str, str], list[tuple[str, str]]],
                   options: GenerateOptions, module_id: int,
                   clock: _Clock) -> tuple[dict[str, SizedNode], float]:
    lp = options.layout_params
    index = {n.node_id: i for i, n in enumerate(node_list)}
    pairs = sorted({(index[a], index[b]) for a, b in edges})

    t0 = time.perf_counter()
    model = build_stress_model(node_list, pairs, lp.unit_length)
    result = minimize_stress(model, seed=options.seed + module_id,
                             tol=lp.stress_tol,
                             max_iter=lp.max_iter_per_node * len(node_list))
    for node, (x, y) in zip(node_list, result.positions):
        node.x, node.y = float(x), float(y)
    clock.add("stress-layout", t0)

    t0 = time.perf_counter()
    if options.overlap == "vpsc":
        node_list = remove_overlaps_vpsc(node_list)
    elif options.overlap == "voronoi":
        node_list = remove_overlaps_voronoi(node_list)
    clock.add("overlap-removal", t0)
    return {n.node_id: n for n in node_list}, result.stress


def generate(source: str, options: GenerateOptions) -> GenerateResult:
    """Run the whole pipeline in memory and return every artifact."""
    options.check()
    clock = _Clock()
    stage = "parse"
    try:
        t0 = time.perf_counter()
        model: ModelGraph = parse_model(source, format=options.format)
        clock.add("parse", t0)

        stage = "validate"
        t0 = time.perf_counter()
        problems = validate(model)
        if problems:
            raise ValidationFailure("; ".join(str(p) for p in problems), problems)
        if not model.variables:
            raise ValidationFailure("empty model")
        clock.add("validate", t0)

        stage = "detect-chains"
        t0 = time.perf_counter()
        chains = detect_main_chains(model)
        clock.add(stage, t0)

        stage = "chain-layout"
        t0 = time.perf_counter()
        chains = [layout_main_chain(c, options.chain_params) for c in chains]
        clock.add(stage, t0)

        stage = "redirect-edges"
        t0 = time.perf_counter()
        lg = redirect_edges(model, chains)
        clock.add(stage, t0)

        stage = "modularize"
        t0 = time.perf_counter()
        if options.cluster == "none":
            tree = ModuleTree(Module(0, "Model", list(lg.node_ids)), "none")
        else:
            hints = parse_hints(options.hints_text, lg) if options.hints_text else None
            tree = recursive_modularize(lg, threshold=options.threshold,
                                        algo=options.cluster, hints=hints)
        clock.add(stage, t0)

        lookup = {n.node_id: n for n in lg.nodes}
        memo: dict[int, list[str]] = {}
        diagrams: dict[int, Diagram] = {}
        stats: list[ModuleStats] = []

        for module in tree.modules():
            stage = "stress-layout"
            if module.is_leaf:
                nodes = [sized_node_for(lookup[m], options.chain_params)
                         for m in module.member_ids]
                edges = _module_edges(lg, set(module.member_ids))
                placed, stress_val = _layout_module(nodes, edges, options,
                                                    module.module_id, clock)
                stage = "curve-edges"
                t0 = time.perf_counter()
                links = build_links(edges, placed, lookup, options.layout_params)
                clock.add(stage, t0)
                stage = "assemble"
                t0 = time.perf_counter()
                diagrams[module.module_id] = assemble_module_diagram(
                    module, placed, links, lookup, options.chain_params)
                clock.add(stage, t0)
                stats.append(ModuleStats(module.module_id, module.label,
                                         len(module.member_ids), stress_val,
                                         True, module.irreducible))
            else:
                remap: dict[str, str] = {}
                children: dict[str, Module] = {}
                nodes = []
                for child in module.children:
                    placeholder = module_placeholder(child, options.chain_params)
                    children[placeholder.node_id] = child
                    nodes.append(placeholder)
                    for member in _descendant_members(child, memo):
                        remap[member] = placeholder.node_id
                edges = _module_edges(lg, set(remap), remap=remap)
                placed, stress_val = _layout_module(nodes, edges, options,
                                                    module.module_id, clock)
                stage = "curve-edges"
                t0 = time.perf_counter()
                links = build_links(edges, placed, {}, options.layout_params)
                clock.add(stage, t0)
                stage = "assemble"
                t0 = time.perf_counter()
                diagrams[module.module_id] = assemble_parent_diagram(
                    module, placed, links, children)
                clock.add(stage, t0)
                stats.append(ModuleStats(module.module_id, module.label,
                                         len(module.children), stress_val,
                                         False, module.irreducible))

        stage = "render"
        t0 = time.perf_counter()
        artifacts = []
        for module in tree.modules():
            d = diagrams[module.module_id]
            filename = f"module_{module.module_id}_{_slug(module.label)}.svg"
            artifacts.append(DiagramArtifact(filename, module.module_id,
                                             module.label, d, render.render_svg(d)))
        clock.add(stage, t0)

        stage = "export"
        t0 = time.perf_counter()
        layout_text = export_layout(tree, diagrams)
        clock.add(stage, t0)
    except PipelineError:
        raise
    except ModelError as exc:
        raise ValidationFailure(str(exc), stage=stage) from exc
    except Exception as exc:
        raise PipelineError(stage, str(exc)) from exc

    clusterings = [
        ClusteringStats(m.module_id, tree.algo, m.clustering_q, len(m.children))
        for m in tree.modules() if m.clustering_q is not None
    ]
    report = RunReport(
        variable_count=len(model.variables),
        chain_count=len(chains),
        layout_node_count=len(lg.nodes),
        module_count=len(tree.modules()),
        top_level_modules=len(tree.root.children) or 1,
        modules=stats,
        clusterings=clusterings,
        timings=clock.timings,
        seed=options.seed,
        cluster=options.cluster,
        overlap=options.overlap,
        threshold=options.threshold,
    )
    return GenerateResult(report, artifacts, layout_text)


def run_pipeline(cfg: RunConfig) -> RunReport:
    """File-driven pipeline: read inputs, generate, write artifacts."""
    try:
        source = Path(cfg.input_path).read_text()
    except OSError as exc:
        raise PipelineError("parse", f"cannot read input: {exc}") from exc
    hints_text = None
    if cfg.hints_path:
        try:
            hints_text = Path(cfg.hints_path).read_text()
        except OSError as exc:
            raise PipelineError("modularize", f"cannot read hints: {exc}") from exc

    result = generate(source, cfg.options(hints_text))

    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for artifact in result.diagrams:
        (out / artifact.filename).write_text(artifact.svg)
    (out / "layout.json").write_text(result.layout_text)
    return result.report
