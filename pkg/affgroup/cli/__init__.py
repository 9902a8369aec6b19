"""Command-line interface."""
from .core import *
from .dependencies import *
