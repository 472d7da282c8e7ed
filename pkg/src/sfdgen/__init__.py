"""sfdgen: automated stock-flow / causal-loop diagram generation.

Turns equation-only system dynamics models into fully laid-out
diagrams: stock-flow main chains are detected and agglomerated,
large models are partitioned into modules by community detection,
content is positioned by stress-minimizing layout with overlap
removal, feedback edges are curved, and the result is exported as
SVG plus a machine-readable layout document.
"""

__version__ = "0.1.0"

from .model import ModelGraph, parse_model, serialize_model, validate  # noqa: F401
from .pipeline import (GenerateOptions, RunConfig, generate,  # noqa: F401
                       run_pipeline)
