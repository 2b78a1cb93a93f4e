"""Text descriptors for tree instances.

Grammar:
    full:<n> | path:<n> | comb:<n> | hash:<n>:<q>:<seed> | cnf:<path>

``cnf:`` reads a DIMACS file; its budget is the variable count.
"""

from __future__ import annotations

from pathlib import Path

from . import trees
from .cnf import cnf_tree, parse_dimacs
from .trees import SuccinctTree


class DescriptorError(ValueError):
    pass


def tree_from_descriptor(text: str) -> SuccinctTree:
    kind, _, rest = text.partition(":")
    try:
        if kind == "full":
            return trees.full_tree(int(rest))
        if kind == "path":
            return trees.path_tree(int(rest))
        if kind == "comb":
            return trees.comb_tree(int(rest))
        if kind == "hash":
            n_s, q_s, seed_s = rest.split(":")
            return trees.hash_random_tree(int(seed_s), int(n_s), float(q_s))
        if kind == "cnf":
            path = Path(rest)
            formula = parse_dimacs(path.read_text())
            return cnf_tree(formula, label=f"cnf:{rest}")
    except DescriptorError:
        raise
    except (ValueError, OSError) as exc:
        raise DescriptorError(f"bad tree descriptor {text!r}: {exc}") from exc
    raise DescriptorError(
        f"unknown tree descriptor {text!r} "
        "(expected full:<n> | path:<n> | comb:<n> | hash:<n>:<q>:<seed> | cnf:<path>)"
    )
