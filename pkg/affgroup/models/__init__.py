"""affgroup models."""

from .group import *
from .grid import *
from .chart import *
from .kernel import *
from .lifted import *
from .config import *
from .report import *
