"""Beam interpretation and analytical beam solver.

Documents are accepted as JSON text or as already-parsed dicts; results are
returned as parsed JSON.
"""

import json

from . import _pbs
from ._pbs import PbsError, __version__

__all__ = ["PbsError", "__version__", "diagram", "infer", "run_cli", "schema", "solve", "summary", "validate"]


def _text(doc):
    return doc if isinstance(doc, str) else json.dumps(doc)


def schema():
    """BeamSpec JSON schema as a dict."""
    return json.loads(_pbs.schema())


def validate(spec):
    """List of (code, path, message) problems; empty when the beam is valid."""
    return _pbs.validate(_text(spec))


def solve(spec, ei=None):
    """Reactions, integration constants and term lists for a BeamSpec."""
    return json.loads(_pbs.solve(_text(spec), ei))


def diagram(spec, kind, samples=1000, ei=None):
    """Sampled 'shear', 'moment' or 'deflection' series with its critical points."""
    return json.loads(_pbs.diagram(_text(spec), kind, samples, ei))


def summary(spec, ei=None):
    """Plain-text solution summary, identical to `pbs solve` output."""
    return _pbs.summary(_text(spec), ei)


def infer(detections, confidence=0.25, iou=0.45):
    """Inference report (spec, warnings, needs_review) for a detections document."""
    return json.loads(_pbs.infer(_text(detections), confidence, iou))


def run_cli(*args):
    """Run the pbs command in-process; returns (exit_code, stdout, stderr)."""
    return _pbs.run_cli([str(a) for a in args])
