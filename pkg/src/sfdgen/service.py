"""HTTP service wrapping the diagram generation pipeline.

One stateless endpoint does the full run: the client posts model text
plus options and receives the report, every rendered SVG, and the
machine-readable layout document. File handling stays client-side.
"""

from __future__ import annotations

from typing import Literal

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .model import parse_model, validate
from .pipeline import GenerateOptions, PipelineError, ValidationFailure, generate


class GenerateRequest(BaseModel):
    source: str
    format: Literal["model-json", "edge-list"] = "model-json"
    cluster: Literal["cnm", "gn", "none"] = "cnm"
    threshold: int = Field(default=75, ge=2)
    overlap: Literal["vpsc", "voronoi", "none"] = "vpsc"
    seed: int = 42
    hints: str | None = None

    def options(self) -> GenerateOptions:
        return GenerateOptions(
            format=self.format, cluster=self.cluster, threshold=self.threshold,
            overlap=self.overlap, seed=self.seed, hints_text=self.hints)


class ModuleStatsOut(BaseModel):
    module_id: int
    label: str
    node_count: int
    stress: float
    is_leaf: bool
    irreducible: bool


class ClusteringOut(BaseModel):
    module_id: int
    algorithm: str
    q: float
    communities: int


class ReportOut(BaseModel):
    variable_count: int
    chain_count: int
    layout_node_count: int
    module_count: int
    top_level_modules: int
    modules: list[ModuleStatsOut]
    clusterings: list[ClusteringOut]
    timings: dict[str, float]
    seed: int
    cluster: str
    overlap: str
    threshold: int


class DiagramOut(BaseModel):
    filename: str
    module_id: int
    label: str
    svg: str


class GenerateResponse(BaseModel):
    report: ReportOut
    report_text: str
    diagrams: list[DiagramOut]
    layout: str
    layout_filename: str = "layout.json"


class ValidateRequest(BaseModel):
    source: str
    format: Literal["model-json", "edge-list"] = "model-json"


class DiagnosticOut(BaseModel):
    rule: str
    variable: str
    message: str


class ValidateResponse(BaseModel):
    valid: bool
    diagnostics: list[DiagnosticOut]


app = FastAPI(
    title="sfdgen",
    version=__version__,
    description="Stock-flow / causal-loop diagram generation from "
                "equation-only system dynamics models.",
)


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/validate", response_model=ValidateResponse)
def validate_endpoint(req: ValidateRequest) -> ValidateResponse:
    try:
        model = parse_model(req.source, format=req.format)
    except Exception as exc:
        return ValidateResponse(
            valid=False,
            diagnostics=[DiagnosticOut(rule="parse", variable="", message=str(exc))])
    problems = validate(model)
    diagnostics = [DiagnosticOut(rule=p.rule, variable=p.variable, message=p.message)
                   for p in problems]
    if not model.variables:  # generate would refuse it; say so up front
        diagnostics.append(DiagnosticOut(rule="empty-model", variable="",
                                         message="model declares no variables"))
    return ValidateResponse(valid=not diagnostics, diagnostics=diagnostics)


@app.post("/generate", response_model=GenerateResponse)
def generate_endpoint(req: GenerateRequest) -> GenerateResponse:
    try:
        result = generate(req.source, req.options())
    except ValidationFailure as exc:
        raise HTTPException(status_code=400, detail={
            "stage": exc.stage,
            "message": str(exc),
            "diagnostics": [str(d) for d in exc.diagnostics],
        }) from exc
    except PipelineError as exc:
        raise HTTPException(status_code=422, detail={
            "stage": exc.stage,
            "message": str(exc),
        }) from exc
    report = result.report
    return GenerateResponse(
        report=ReportOut(
            variable_count=report.variable_count,
            chain_count=report.chain_count,
            layout_node_count=report.layout_node_count,
            module_count=report.module_count,
            top_level_modules=report.top_level_modules,
            modules=[ModuleStatsOut(module_id=m.module_id, label=m.label,
                                    node_count=m.node_count, stress=m.stress,
                                    is_leaf=m.is_leaf, irreducible=m.irreducible)
                     for m in report.modules],
            clusterings=[ClusteringOut(module_id=c.module_id, algorithm=c.algorithm,
                                       q=c.q, communities=c.communities)
                         for c in report.clusterings],
            timings=report.timings,
            seed=report.seed,
            cluster=report.cluster,
            overlap=report.overlap,
            threshold=report.threshold,
        ),
        report_text=report.to_text(),
        diagrams=[DiagramOut(filename=d.filename, module_id=d.module_id,
                             label=d.label, svg=d.svg)
                  for d in result.diagrams],
        layout=result.layout_text,
    )
