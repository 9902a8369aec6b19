"""Affine group convolutions, Haar quadrature and invariance criteria over ℝ² ⋊ GL₂(ℝ)."""
__version__ = "0.1.0"

from .errors import *
from .client import *
from .models import *
from .codecs import *
from .modules import *
