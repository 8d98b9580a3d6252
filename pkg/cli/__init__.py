from .parser import build_parser
from .commands import commands
