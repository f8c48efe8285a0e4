"""Command-line front end (``scatsize ladder|estimate|oracle|sweep|selftest``)."""
from .commands import main
from .config import RunConfig

__all__ = ["main", "RunConfig"]
