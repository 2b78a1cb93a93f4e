import pytest

from levelwalk import Cnf, DimacsParseError, cnf_tree, exact_count, parse_dimacs
from levelwalk.cnf import render_dimacs

from conftest import random_cnf


def brute_force_count(cnf: Cnf, n: int) -> int:
    """Independent oracle: test every address of the ambient tree directly."""

    def alive(addr: str) -> bool:
        assignment = {v + 1: addr[v] == "1" for v in range(len(addr))}
        for clause in cnf.clauses:
            if all(
                abs(l) in assignment and assignment[abs(l)] != (l > 0)
                for l in clause
            ):
                return False
        return True

    count = 0
    stack = [""]
    while stack:
        a = stack.pop()
        if alive(a):
            count += 1
            if len(a) < n:
                stack += [a + "0", a + "1"]
    return count


def test_parse_simple():
    got = parse_dimacs("p cnf 2 1\n1 2 0")
    assert got == Cnf(2, ((1, 2),))


def test_parse_with_comment_and_negation():
    got = parse_dimacs("c comment\np cnf 1 1\n-1 0")
    assert got == Cnf(1, ((-1,),))


def test_parse_rejects_empty_clause():
    with pytest.raises(DimacsParseError) as err:
        parse_dimacs("p cnf 1 1\n0")
    assert err.value.line == 2


def test_parse_rejects_clause_count_mismatch():
    with pytest.raises(DimacsParseError):
        parse_dimacs("p cnf 2 2\n1 0")
    with pytest.raises(DimacsParseError):
        parse_dimacs("p cnf 2 1\n1 0\n2 0")


def test_parse_rejects_out_of_range_literal():
    with pytest.raises(DimacsParseError):
        parse_dimacs("p cnf 2 1\n3 0")


def test_parse_rejects_missing_header():
    with pytest.raises(DimacsParseError):
        parse_dimacs("1 2 0")


def test_parse_rejects_unterminated_clause():
    with pytest.raises(DimacsParseError):
        parse_dimacs("p cnf 2 1\n1 2")


def test_parse_multiline_clause():
    got = parse_dimacs("p cnf 3 1\n1\n2 3 0")
    assert got.clauses == ((1, 2, 3),)


def test_roundtrip():
    cnf = random_cnf(3, 5, 4)
    assert parse_dimacs(render_dimacs(cnf)) == cnf


def test_cnf_tree_membership_example():
    tree = cnf_tree(parse_dimacs("p cnf 2 1\n1 2 0"))
    assert tree.member("00") is False  # both literals false
    assert tree.member("01") is True
    assert tree.member("1") is True


def test_cnf_tree_single_positive_literal():
    tree = cnf_tree(parse_dimacs("p cnf 1 1\n1 0"))
    assert tree.member("0") is False
    assert tree.member("1") is True


def test_cnf_tree_no_clauses_is_full():
    tree = cnf_tree(Cnf(3, ()))
    assert exact_count(tree) == 2**4 - 1


def test_cnf_tree_count_matches_brute_force():
    cnf = parse_dimacs("p cnf 2 1\n1 2 0")
    tree = cnf_tree(cnf)
    assert exact_count(tree) == brute_force_count(cnf, 2) == 6


@pytest.mark.parametrize("seed", [1, 2, 5])
def test_random_cnf_tree_matches_brute_force(seed):
    cnf = random_cnf(seed, 6, 5)
    assert exact_count(cnf_tree(cnf)) == brute_force_count(cnf, 6)


def test_clause_order_invariance():
    cnf = random_cnf(11, 5, 4)
    reordered = Cnf(cnf.num_vars, tuple(reversed(cnf.clauses)))
    a = cnf_tree(cnf)
    b = cnf_tree(reordered)
    for k in range(1, 2**6):
        addr = bin(k)[3:]
        assert a.member(addr) == b.member(addr)


def test_variable_order_changes_shape_not_validity():
    cnf = parse_dimacs("p cnf 2 1\n1 0")
    ident = cnf_tree(cnf)
    swapped = cnf_tree(cnf, order=(2, 1))
    assert ident.member("0") is False  # depth 0 assigns x1
    assert swapped.member("0") is True  # depth 0 assigns x2
    assert exact_count(ident) == 4 and exact_count(swapped) == 5  # shapes differ


def test_bad_order_rejected():
    cnf = parse_dimacs("p cnf 2 1\n1 0")
    with pytest.raises(ValueError):
        cnf_tree(cnf, order=(1, 1))


def test_empty_clause_rejected_in_constructor():
    with pytest.raises(ValueError):
        Cnf(2, ((),))
