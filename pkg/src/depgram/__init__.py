"""Dependency grammar toolkit.

Trees are built from nuclei (possibly discontiguous word groups) joined
by labelled connexions, checked against the tree axioms, analysed for
projectivity, produced by Gaifman dependency grammars, and read and
written in the line-oriented FDG text format.
"""
from .coordination import (CoordinationChain, GapFrame, apply_gapping, detect_chains,
                           expand_combinations, realize)
from .fdg import read_fdg, read_stream, write_fdg, write_stream
from .gaifman import (GaifmanGrammar, GaifmanRule, enumerate_language, parse_all, parse_grammar,
                      recognize, to_cfg)
from .nucleus import (enumerate_projective_linearizations, expand_contraction, linearization_count,
                      load_rules, segment)
from .projectivity import crossing_arcs, is_projective, marcus_violations
from .render import render_ascii, render_dot
from .tree import (ROOT, Connexion, DependencyTree, FunctionInventory, Nucleus, TreeError, WordSegment,
                   build_tree, simple_tree, validate_axioms)

__all__ = [
    "ROOT", "Connexion", "CoordinationChain", "DependencyTree", "FunctionInventory", "GaifmanGrammar",
    "GaifmanRule", "GapFrame", "Nucleus", "TreeError", "WordSegment", "apply_gapping", "build_tree",
    "crossing_arcs", "detect_chains", "enumerate_language", "enumerate_projective_linearizations",
    "expand_combinations", "expand_contraction", "is_projective", "linearization_count", "load_rules",
    "marcus_violations", "parse_all", "parse_grammar", "read_fdg", "read_stream", "realize",
    "recognize", "render_ascii", "render_dot", "segment", "simple_tree", "to_cfg", "validate_axioms", "write_fdg",
    "write_stream",
]
