import json
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings

from conftest import identities
from ut3check import finite
from ut3check.finite import (MN_TO_TA21, TA21_MATRICES, ClosureCapExceeded, SemigroupError, build_validated,
                             check_iso, closure_with_ideal, d3, d3_pm, holds, idempotents, is_zero, mn_quotient,
                             ta21)
from ut3check.identities import Z4
from ut3check.suites import ZETA_PAIR
from ut3check.triangular import num_eval_word
from ut3check.words import parse_identity


def brute_holds(s, ident):
    """Direct product over assignments with plain Python loops."""
    letters = ident.alphabet()
    for vals in product(range(len(s)), repeat=len(letters)):
        asg = dict(zip(letters, vals))
        if s.evaluate(ident.lhs, asg) != s.evaluate(ident.rhs, asg):
            return False
    return True


def test_d3_shape():
    s = d3()
    assert len(s) == 8
    assert len(idempotents(s)) == 8
    assert is_zero(s, s.index("000"))
    assert s.names[s.star[s.index("100")]] == "001"
    assert s.names[s.mul(s.index("110"), s.index("011"))] == "010"


def test_d3pm_idempotents():
    s = d3_pm()
    assert len(s) == 27
    idem = {s.names[i] for i in idempotents(s)}
    assert len(idem) == 8 and idem == {"".join(p) for p in product("01", repeat=3)}


def test_ta21_structure():
    s = ta21()
    assert len(s) == 6
    assert {s.names[i] for i in idempotents(s)} == {"0", "E11", "L", "R", "I"}
    assert is_zero(s, s.index("0"))
    assert s.names[s.star[s.index("E11")]] == "R"
    assert s.names[s.star[s.index("L")]] == "L"


def test_ta21_table_matches_matrices():
    s = ta21()
    mats = {k: [list(r) for r in m] for k, m in TA21_MATRICES.items()}
    for a, b in product(s.names, repeat=2):
        prod = [[sum(mats[a][i][k] * mats[b][k][j] for k in range(2)) for j in range(2)] for i in range(2)]
        assert prod == mats[s.names[s.mul(s.index(a), s.index(b))]]


def test_non_associative_table_rejected():
    # x*y = y*... right-zero with one twist
    with pytest.raises(SemigroupError, match="not associative"):
        build_validated(["a", "b"], [[1, 0], [0, 0]])


def test_bad_star_rejected():
    # left-zero band: xy = x; the identity map reverses nothing, so it is not an anti-automorphism
    with pytest.raises(SemigroupError, match="anti-automorphism"):
        build_validated(["a", "b"], [[0, 0], [1, 1]], star=[0, 1])
    with pytest.raises(SemigroupError, match="involutive"):
        build_validated(["a", "b", "c"], [[0] * 3] * 3, star=[1, 2, 0])


def test_bad_shape_rejected():
    with pytest.raises(SemigroupError):
        build_validated(["a", "b"], [[0, 0]])
    with pytest.raises(SemigroupError):
        build_validated(["a", "b"], [[0, 2], [0, 0]])
    with pytest.raises(SemigroupError):
        build_validated(["a", "a"], [[0, 0], [0, 0]])


def test_holds_examples():
    assert holds(d3(), parse_identity("x1 x2 = x2 x1")).passed
    assert holds(d3(), parse_identity("x1 x1 = x1")).passed
    assert not holds(ta21(), parse_identity("x1 x2 = x2 x1")).passed


def test_ta21_fails_z4_with_witness():
    s = ta21()
    ident = parse_identity(Z4)
    rep = holds(s, ident)
    assert rep.status == "fail"
    asg = {int(k[1:]): s.index(v) for k, v in rep.witness["assignment"].items()}
    assert s.evaluate(ident.lhs, asg) != s.evaluate(ident.rhs, asg)
    # the witness also separates the sides as matrices
    mats = {k: [list(r) for r in TA21_MATRICES[s.names[i]]] for k, i in asg.items()}
    assert num_eval_word(ident.lhs, mats) != num_eval_word(ident.rhs, mats)


def test_holds_involutory():
    s = ta21()
    rep = holds(s, parse_identity("x1 x1* = x1* x1"))
    assert rep.passed == brute_holds(s, parse_identity("x1 x1* = x1* x1"))
    with pytest.raises(SemigroupError):
        holds(build_validated(["a"], [[0]]), parse_identity("x1* = x1"))


@settings(max_examples=40, deadline=None)
@given(identities(max_letter=3, max_len=6, stars=True))
def test_holds_matches_brute_force(ident):
    s = ta21()
    assert holds(s, ident).passed == brute_holds(s, ident)


@settings(max_examples=15, deadline=None)
@given(identities(max_letter=3, max_len=6))
def test_holds_invariant_under_renaming(ident):
    s = ta21()
    perm = [3, 0, 5, 1, 4, 2]          # new index of old element i
    inv = np.argsort(perm)
    table = [[perm[s.table[inv[a], inv[b]]] for b in range(6)] for a in range(6)]
    star = [perm[s.star[inv[a]]] for a in range(6)]
    t = build_validated([s.names[inv[a]] + "'" for a in range(6)], table, star)
    assert holds(s, ident).passed == holds(t, ident).passed


def test_holds_worker_independence():
    ident = parse_identity("x1 x2 x3 x1 = x1 x3 x2 x1")
    a, b = holds(d3_pm(), ident, workers=1), holds(d3_pm(), ident, workers=3)
    assert a.status == b.status and a.witness == b.witness


def test_cayley_file_roundtrip(tmp_path):
    s = ta21()
    path = tmp_path / "ta21.json"
    finite.dump(s, path)
    data = json.loads(path.read_text())
    assert set(data) == {"elements", "table", "star"}
    t = finite.load(path)
    assert t.names == s.names and (t.table == s.table).all() and (t.star == s.star).all()
    assert finite.resolve(str(path)).names == s.names


def test_check_iso_identity_and_swapped():
    s = ta21()
    assert check_iso(s, s, list(range(6))).passed
    swapped = {n: n for n in s.names} | {"L": "R", "R": "L"}
    assert not check_iso(s, s, swapped).passed
    assert not check_iso(s, s, [0, 0, 1, 2, 3, 4]).passed


def test_mn_construction():
    m = mn_quotient()
    assert m.names == ("e", "x", "y", "xy", "yx", "0")
    assert check_iso(m, ta21(), MN_TO_TA21).passed


def test_mn_construction_wrong_map_fails():
    wrong = dict(MN_TO_TA21) | {"xy": "E11", "yx": "R"}
    assert not check_iso(mn_quotient(), ta21(), wrong).passed


def test_closure_cap_for_zeta():
    zeta, zeta_d = ZETA_PAIR
    with pytest.raises(ClosureCapExceeded):
        closure_with_ideal([zeta, zeta_d], lambda m: False, cap=50, involution=False)


def test_closure_rejects_non_ideal():
    e = ((1, 0), (0, 1))
    a = ((1, 1), (0, 0))
    with pytest.raises(SemigroupError, match="not closed"):
        # diagonal 00 is not absorbing here: a * ((0,1),(0,0)) -> itself, a * e -> a
        closure_with_ideal([e, a, ((0, 1), (0, 0))], lambda m: m == ((0, 1), (0, 0)), involution=False)


def test_closure_small_example():
    # the two-element idempotent diagonal semigroup {I, diag(1,0)} plus the zero it never reaches
    s = closure_with_ideal([((1, 0), (0, 1)), ((1, 0), (0, 0))], lambda m: m[0][0] == 0, involution=False)
    assert s.names == ("g1", "g2", "0")
    assert s.names[s.mul(1, 1)] == "g2"

