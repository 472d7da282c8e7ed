"""Model ingestion: parse equation-level model descriptions into a graph.

Two input formats are supported. ``model-json`` carries typed variables
(stock / flow / auxiliary) with dependency lists and stock-flow
attachments; ``edge-list`` is a plain ``source target`` line format for
untyped causal-loop graphs. Parsing yields a :class:`ModelGraph` whose
dependency edges mean "source appears in target's equation".
"""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

VALID_KINDS = ("stock", "flow", "auxiliary")


class Kind(str, enum.Enum):
    STOCK = "stock"
    FLOW = "flow"
    AUXILIARY = "auxiliary"


class FlowDirection(str, enum.Enum):
    INTO = "into"
    OUT_OF = "out_of"


class ModelError(Exception):
    """Base class for model ingestion failures."""


class ModelParseError(ModelError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        loc = ""
        if line is not None:
            loc = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + loc)
        self.line = line
        self.column = column


@dataclass
class Diagnostic:
    rule: str
    variable: str
    message: str

    def __str__(self) -> str:
        return f"[{self.rule}] {self.variable}: {self.message}"


@dataclass(frozen=True)
class VariableDecl:
    name: str
    kind: Kind
    depends_on: tuple[str, ...] = ()
    inflows: tuple[str, ...] = ()
    outflows: tuple[str, ...] = ()


@dataclass
class ModelGraph:
    """A validated model: typed variables plus dependency structure.

    ``variables`` preserves declaration order and is the determinism
    anchor for every later stage. ``dep_edges`` holds (source, target)
    pairs; ``flow_links`` holds (flow, stock, direction) attachments.
    Both are order-free sets so structural equality ignores byte order.
    """

    variables: list[VariableDecl] = field(default_factory=list)
    dep_edges: frozenset[tuple[str, str]] = frozenset()
    flow_links: frozenset[tuple[str, str, FlowDirection]] = frozenset()

    def __post_init__(self) -> None:
        self._by_name = {v.name: v for v in self.variables}

    def variable(self, name: str) -> VariableDecl:
        return self._by_name[name]

    def has(self, name: str) -> bool:
        return name in self._by_name

    @property
    def names(self) -> list[str]:
        return [v.name for v in self.variables]

    def stocks(self) -> list[VariableDecl]:
        return [v for v in self.variables if v.kind is Kind.STOCK]

    def flows(self) -> list[VariableDecl]:
        return [v for v in self.variables if v.kind is Kind.FLOW]

    def sorted_dep_edges(self) -> list[tuple[str, str]]:
        """Dependency edges in a stable order (independent of set hashing)."""
        order = {v.name: i for i, v in enumerate(self.variables)}
        key = lambda name: (order.get(name, len(order)), name)
        return sorted(self.dep_edges, key=lambda e: (key(e[0]), key(e[1])))

    def sorted_flow_links(self) -> list[tuple[str, str, FlowDirection]]:
        order = {v.name: i for i, v in enumerate(self.variables)}
        key = lambda name: (order.get(name, len(order)), name)
        return sorted(self.flow_links, key=lambda l: (key(l[0]), key(l[1]), l[2].value))


def _build_graph(decls: list[VariableDecl]) -> ModelGraph:
    dep_edges = set()
    flow_links = set()
    for v in decls:
        for src in v.depends_on:
            if src != v.name:  # self-reference carries no layout information
                dep_edges.add((src, v.name))
        for f in v.inflows:
            flow_links.add((f, v.name, FlowDirection.INTO))
        for f in v.outflows:
            flow_links.add((f, v.name, FlowDirection.OUT_OF))
    return ModelGraph(decls, frozenset(dep_edges), frozenset(flow_links))


def parse_model(source: str, format: str = "model-json") -> ModelGraph:
    """Parse model text into a validated :class:`ModelGraph`.

    Raises :class:`ModelParseError` on syntax problems (with position)
    and :class:`ModelError` when the parsed content violates a model
    invariant (unresolved names, duplicates, over-attached flows).
    """
    if format == "model-json":
        graph = _parse_model_json(source)
    elif format == "edge-list":
        graph = _parse_edge_list(source)
    else:
        raise ValueError(f"unknown input format: {format!r}")
    problems = validate(graph)
    if problems:
        raise ModelError("; ".join(str(p) for p in problems))
    return graph


def _parse_model_json(source: str) -> ModelGraph:
    try:
        doc = json.loads(source)
    except json.JSONDecodeError as exc:
        raise ModelParseError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from exc
    if not isinstance(doc, dict) or "variables" not in doc:
        raise ModelParseError("top-level object must contain a 'variables' array")
    entries = doc["variables"]
    if not isinstance(entries, list):
        raise ModelParseError("'variables' must be an array")

    decls = []
    for i, entry in enumerate(entries):
        if not isinstance(entry, dict):
            raise ModelParseError(f"variables[{i}] is not an object")
        try:
            name = entry["name"]
            kind = entry["kind"]
        except KeyError as exc:
            raise ModelParseError(f"variables[{i}] missing required field {exc.args[0]!r}") from exc
        if not isinstance(name, str) or not name:
            raise ModelParseError(f"variables[{i}] name must be a nonempty string")
        if kind not in VALID_KINDS:
            raise ModelParseError(
                f"variables[{i}] ({name}): unknown kind {kind!r}; expected one of {VALID_KINDS}")
        depends = _string_list(entry.get("depends_on", []), i, "depends_on")
        inflows = _string_list(entry.get("inflows", []), i, "inflows")
        outflows = _string_list(entry.get("outflows", []), i, "outflows")
        if kind != "stock" and (inflows or outflows):
            raise ModelParseError(
                f"variables[{i}] ({name}): inflows/outflows are only permitted on stocks")
        decls.append(VariableDecl(name, Kind(kind), depends, inflows, outflows))
    return _build_graph(decls)


def _string_list(raw: object, index: int, fieldname: str) -> tuple[str, ...]:
    if not isinstance(raw, list) or not all(isinstance(x, str) for x in raw):
        raise ModelParseError(f"variables[{index}].{fieldname} must be an array of strings")
    return tuple(raw)


def _parse_edge_list(source: str) -> ModelGraph:
    """One ``source target`` pair per line; everything is an auxiliary."""
    order: dict[str, list[str]] = {}
    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ModelParseError(
                f"expected 'source target', got {line!r}", line=lineno)
        src, dst = parts
        order.setdefault(src, [])
        deps = order.setdefault(dst, [])
        if src not in deps:
            deps.append(src)
    decls = [VariableDecl(name, Kind.AUXILIARY, tuple(deps))
             for name, deps in order.items()]
    return _build_graph(decls)


def serialize_model(model: ModelGraph) -> str:
    """Emit model-json; ``parse_model(serialize_model(m)) == m``."""
    entries = []
    for v in model.variables:
        entry: dict[str, object] = {
            "name": v.name,
            "kind": v.kind.value,
            "depends_on": list(v.depends_on),
        }
        if v.kind is Kind.STOCK:
            entry["inflows"] = list(v.inflows)
            entry["outflows"] = list(v.outflows)
        entries.append(entry)
    return json.dumps({"variables": entries}, indent=2) + "\n"


def validate(model: ModelGraph) -> list[Diagnostic]:
    """Check every ModelGraph invariant; one diagnostic per violation."""
    problems: list[Diagnostic] = []
    seen: set[str] = set()
    for v in model.variables:
        if not v.name:
            problems.append(Diagnostic("empty-name", v.name, "variable name is empty"))
        if v.name in seen:
            problems.append(Diagnostic("duplicate-name", v.name, "name declared more than once"))
        seen.add(v.name)

    declared = {v.name for v in model.variables}

    def check_ref(owner: str, ref: str, what: str) -> bool:
        if ref not in declared:
            problems.append(Diagnostic(
                "unresolved-identifier", owner, f"{what} references undeclared {ref!r}"))
            return False
        return True

    for v in model.variables:
        for dep in v.depends_on:
            check_ref(v.name, dep, "depends_on")
        if v.kind is not Kind.STOCK and (v.inflows or v.outflows):
            problems.append(Diagnostic(
                "flows-on-non-stock", v.name, "inflows/outflows present on non-stock"))
        for f in v.inflows + v.outflows:
            if check_ref(v.name, f, "flow attachment"):
                target = model.variable(f)
                if target.kind is not Kind.FLOW:
                    problems.append(Diagnostic(
                        "attachment-not-flow", v.name,
                        f"attachment {f!r} has kind {target.kind.value}, expected flow"))

    for src, dst in model.sorted_dep_edges():
        if src == dst:
            problems.append(Diagnostic("self-loop", src, "dependency edge loops onto itself"))
        for end in (src, dst):
            if end not in declared:
                problems.append(Diagnostic(
                    "unresolved-identifier", end, "dependency edge endpoint undeclared"))

    # A flow may drain at most one stock and fill at most one stock.
    upstream: dict[str, list[str]] = {}
    downstream: dict[str, list[str]] = {}
    for flow, stock, direction in model.sorted_flow_links():
        side = downstream if direction is FlowDirection.INTO else upstream
        side.setdefault(flow, []).append(stock)
    for flow, stocks in sorted(upstream.items()):
        if len(stocks) > 1:
            problems.append(Diagnostic(
                "flow-over-attached", flow, f"flow drains {len(stocks)} stocks: {', '.join(stocks)}"))
    for flow, stocks in sorted(downstream.items()):
        if len(stocks) > 1:
            problems.append(Diagnostic(
                "flow-over-attached", flow, f"flow fills {len(stocks)} stocks: {', '.join(stocks)}"))
    return problems
