"""Affine automorphic functions of entire functions.

Thin package around the compiled core: parse a closed-form entire
function, locate critical points, enumerate and verify the candidate
maps Phi(z) = e^{i pi theta} z + b with f(Phi(z)) = f(z), and inspect
orbits and group closures.
"""

from ._core import *  # noqa: F401,F403
from ._core import __version__  # noqa: F401
