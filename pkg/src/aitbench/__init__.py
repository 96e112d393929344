"""Executable toolkit for halting probabilities, prefix codes and query-bounded reductions
on small concrete prefix-free machines."""

from .errors import AitError
from .machine import InterpMachine, TableMachine, load_machine, parse_machine

__version__ = "0.1.0"

__all__ = ["AitError", "InterpMachine", "TableMachine", "load_machine", "parse_machine"]
