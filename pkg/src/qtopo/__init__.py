"""SU(2)_q colored link polynomials, quantum 3-manifold invariants, and
their compilation to simulated qubit circuits."""

from .qnum import QContext, Spin, casimir

__version__ = "0.1.0"

__all__ = ["QContext", "Spin", "casimir", "__version__"]
