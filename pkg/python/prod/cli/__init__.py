from .command import Command
from .run_command import RunCommand
from .main import build_parser, main
