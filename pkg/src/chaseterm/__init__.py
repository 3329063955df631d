"""Deciding termination of the semi-oblivious chase for linear TGDs."""
from .depgraph import DependencyGraph, build_dep_graph, reverse_reachable
from .model import TGD, Atom, Database, Position, Predicate, Term, classify_rule_set, const, var
from .oracle import ChaseResult, naive_wa_check, run_chase
from .ruleio import (
    FactSource,
    ParseError,
    SQLiteStore,
    load_database,
    parse_facts_text,
    parse_rules,
    parse_rules_text,
)
from .scc import SpecialSCC, find_special_scc
from .shapes import Shape, enumerate_shapes, find_shapes_memory, find_shapes_sql, unique_and_id
from .simplify import applicable, dyn_simplification, simplify_rule, specializations, static_simplify
from .termination import (
    FINITE,
    INFINITE,
    TerminationReport,
    is_chase_finite,
    is_chase_finite_l,
    is_chase_finite_sl,
)

__version__ = "0.1.0"
