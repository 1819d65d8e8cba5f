"""Compile 3-CNF formulas into Roma boards whose solutions match the models one to one."""

from .arrange import Arc, Arrangement, block_arrangement, direct_arrangement, stack_arrangement
from .cnf import Cnf, CnfError, parse_dimacs, to_dimacs
from .compiler import VarMap, arrangement_for, compile, decode, realize, side_bound, size_constant
from .layout import PlanarLayout, Polyline, insert_crossovers, layout
from .tiles import (
    CORNER,
    FANOUT,
    NEG_LITERAL,
    POS_LITERAL,
    STRAIGHT,
    VARIABLE,
    GadgetTile,
    chain,
    variable_item,
)

__all__ = [
    "Arc",
    "Arrangement",
    "CORNER",
    "Cnf",
    "CnfError",
    "FANOUT",
    "GadgetTile",
    "NEG_LITERAL",
    "POS_LITERAL",
    "PlanarLayout",
    "Polyline",
    "STRAIGHT",
    "VARIABLE",
    "VarMap",
    "arrangement_for",
    "block_arrangement",
    "chain",
    "compile",
    "decode",
    "direct_arrangement",
    "insert_crossovers",
    "layout",
    "parse_dimacs",
    "realize",
    "side_bound",
    "size_constant",
    "stack_arrangement",
    "to_dimacs",
    "variable_item",
]
