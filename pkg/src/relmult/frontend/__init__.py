"""Problem documents: parsing, printing and command dispatch."""

from .dsl import Command, ProblemDocument, format_problem, parse_problem
from .runner import RunFlags, run

__all__ = ["Command", "ProblemDocument", "RunFlags", "format_problem", "parse_problem", "run"]
