"""Beam-step kernel selection.

The compiled extension is preferred when it imported cleanly; the numpy
fallback is always available. MINTOX_PURE_PYTHON=1 forces the fallback,
which the parity tests and the benchmark use to pin down both paths.
"""

from __future__ import annotations

import os

from .beamstep_py import beam_step as beam_step_python

try:
    from ._beamstep import beam_step as beam_step_compiled
except ImportError:
    beam_step_compiled = None

if beam_step_compiled is not None and not os.environ.get("MINTOX_PURE_PYTHON"):
    beam_step = beam_step_compiled
    KERNEL_BACKEND = "compiled"
else:
    beam_step = beam_step_python
    KERNEL_BACKEND = "python"

__all__ = ["KERNEL_BACKEND", "beam_step", "beam_step_compiled", "beam_step_python"]
