"""affgroup modules."""

from .affine import *
from .signal import *
from .workers import *
from .haarquad import *
from .bank import *
from .lifting import *
from .gconv import *
from .invariance import *
from .align import *
from .synth import *
from .studies import *
