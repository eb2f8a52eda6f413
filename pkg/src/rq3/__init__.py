"""Exact symbolic construction of the quantum Euclidean space R^3_q.

Subpackages build on each other: qscalar (the field Q(sqrt q)), rmat (braid
matrix, metric, projectors), ncalg (the normal-ordering engine), omega
(forms and tensors), geom (frames, connections, curvature), climit (the
q -> 1 limit) and qcli (parser + command line).
"""

from .qscalar import Scalar, Series, PoleAtOne
from .ncalg import Algebra, Element

__all__ = ["Scalar", "Series", "PoleAtOne", "Algebra", "Element"]
