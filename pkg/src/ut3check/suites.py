"""Multi-step checks: the class-2 derivation of the Z4 identity, bounded isoterm
and freeness scans, the Mal'cev-product witness, and the full batch run."""

from __future__ import annotations

import time
from functools import partial
from typing import Callable, Mapping, Sequence

import numpy as np

from . import finite, identities, rees, triangular
from .finite import FiniteSemigroup, _eval_vector, _letter_values
from .parallel import first_hit
from .poly import EntryVar, Poly
from .report import ABORTED, FAIL, PASS, CheckReport, combine
from .triangular import ALPHABET_01, ALPHABET_0PM1, LetterAssignment, eval_word, num_mul, num_skew
from .words import Identity, Letter, Word, is_balanced, parse_identity, substitute, zimin

DEFAULT_ISOTERM_CAP = 10**7
DEFAULT_FREENESS_CAP = 10**6

CASE8_SIGMA = {1: Word.of(1), 3: Word.of(3), 2: Word.of(1, 2, 1), 4: Word.of(4)}


def derivation_case8(sigma: Mapping[int, Word] | None = None) -> CheckReport:
    """Substitute into the class-2 identity, pad with x1x2 / x2x1, compare with the Z4 identity.

    Purely syntactic: no matrices are involved.
    """
    sigma = CASE8_SIGMA if sigma is None else sigma
    class2 = parse_identity(identities.CLASS2)
    target = parse_identity(identities.Z4)
    left, right = Word.of(1, 2), Word.of(2, 1)
    lhs = left * substitute(class2.lhs, sigma) * right
    rhs = left * substitute(class2.rhs, sigma) * right
    parts = [
        CheckReport("left side", PASS if lhs == target.lhs else FAIL, str(lhs),
                    witness=None if lhs == target.lhs else {"derived": str(lhs), "expected": str(target.lhs)}),
        CheckReport("right side", PASS if rhs == target.rhs else FAIL, str(rhs),
                    witness=None if rhs == target.rhs else {"derived": str(rhs), "expected": str(target.rhs)}),
    ]
    mapping = ", ".join(f"x{k} -> {w}" for k, w in sorted(sigma.items()))
    return combine("derive-case8", parts, f"substitution {mapping} into {class2}, then x1 x2 . _ . x2 x1")


# -- isoterm scan -----------------------------------------------------------

def _count_words(m: int, max_len: int) -> int:
    return sum(m ** l for l in range(1, max_len + 1))


def _dedup(vectors: np.ndarray, members: np.ndarray, owners: np.ndarray):
    """Collapse equal value vectors, keeping each class's two smallest member indices.

    ``members[i]`` is a word index whose value vector is ``vectors[owners[i]]``.
    """
    as_bytes = np.ascontiguousarray(vectors).view(np.dtype((np.void, vectors.shape[1] * vectors.itemsize))).ravel()
    _, first_pos, inverse = np.unique(as_bytes, return_index=True, return_inverse=True)
    groups = inverse[owners]
    order = np.lexsort((members, groups))
    g_sorted, m_sorted = groups[order], members[order]
    starts = np.flatnonzero(np.r_[True, g_sorted[1:] != g_sorted[:-1]])
    firsts = m_sorted[starts]
    seconds = np.full(len(starts), -1, dtype=np.int64)
    has_two = np.r_[starts[1:], len(g_sorted)] - starts > 1
    seconds[has_two] = m_sorted[starts[has_two] + 1]
    return vectors[first_pos], firsts, seconds


def _isoterm_subtree(space, first_symbols_start, first_symbols_stop):
    """Scan words whose first symbol index lies in the given range.

    Returns ((length, index), None) for the first partner found, by length then index.
    """
    table, symvecs, target, v_len, v_index, max_len = space
    m = len(symvecs)
    firsts_sym = np.arange(first_symbols_start, first_symbols_stop, dtype=np.int64)
    if not len(firsts_sym):
        return None
    vecs = symvecs[firsts_sym]
    members = firsts_sym
    vecs, first, second = _dedup(vecs, members, np.arange(len(members)))
    length = 1
    while True:
        hit = np.flatnonzero((vecs == target).all(axis=1))
        if len(hit):
            c = int(hit[0])
            partner = int(first[c])
            if length == v_len and partner == v_index:
                partner = int(second[c])
            if partner >= 0:
                return ((length, partner), None)
        if length == max_len:
            return None
        # extend every kept representative by every symbol
        ext = table[vecs[:, None, :], symvecs[None, :, :]].reshape(-1, vecs.shape[1])
        owners_f = np.arange(len(ext))
        sym = np.tile(np.arange(m), len(vecs))
        memb_f = np.repeat(first, m) * m + sym
        sec = np.repeat(second, m)
        keep = sec >= 0
        members = np.concatenate([memb_f, sec[keep] * m + sym[keep]])
        owners = np.concatenate([owners_f, owners_f[keep]])
        vecs, first, second = _dedup(ext, members, owners)
        length += 1


def _decode(index: int, length: int, symbols: Sequence[Letter]) -> Word:
    m = len(symbols)
    out = []
    for _ in range(length):
        index, r = divmod(index, m)
        out.append(symbols[r])
    return Word(tuple(reversed(out)))


def isoterm_scan(s: FiniteSemigroup, v: Word, max_len: int, cap: int = DEFAULT_ISOTERM_CAP,
                 involutory: bool | None = None, workers: int = 1) -> CheckReport:
    """Look for a word v' != v, |v'| <= max_len, such that v = v' holds in s.

    Candidates use the letters of v (and their stars when involutory) and are
    ordered by length, then lexicographically with x1 < x1* < x2 < ...  Each
    candidate is represented by its value vector over all assignments; words with
    equal vectors are merged, keeping the two smallest, which leaves the first
    partner in that order unchanged.
    """
    if involutory is None:
        involutory = s.star is not None
    if involutory and s.star is None:
        raise finite.SemigroupError("involutory scan needs a semigroup with involution")
    letters = v.alphabet()
    symbols = [Letter(k, st) for k in letters for st in ((False, True) if involutory else (False,))]
    m = len(symbols)
    total = _count_words(m, max_len) - (1 if len(v) <= max_len else 0)
    kind = "involutory" if involutory else "plain"
    head = (f"{kind} words over {{{', '.join(map(str, symbols))}}} of length <= {max_len} "
            f"against v = {v}; {len(s) ** len(letters)} assignments")
    if total > cap:
        return CheckReport("isoterm-scan", ABORTED, f"{head}\naborted: cap ({total} candidates > cap {cap})")
    n_asg = len(s) ** len(letters)
    vals = _letter_values(len(s), len(letters), 0, n_asg)
    dtype = np.uint8 if len(s) <= 256 else np.int64
    table = s.table.astype(dtype)
    symvecs = []
    for a in symbols:
        col = vals[:, letters.index(a.index)]
        symvecs.append(s.star[col] if a.starred else col)
    symvecs = np.array(symvecs, dtype=dtype)
    target = _eval_vector(s, v, letters, vals).astype(dtype)
    v_index = 0
    for a in v:
        v_index = v_index * m + symbols.index(a)
    space = (table, symvecs, target, len(v), v_index, max_len)
    hit = first_hit(partial(_isoterm_subtree, space), m, workers, chunk=1)
    details = f"{head}\n{total} candidates; scan bound L = {max_len}"
    if hit is None:
        return CheckReport("isoterm-scan", PASS, details + "\nno partner word: v is an isoterm up to this bound")
    length, index = hit[0]
    partner = _decode(index, length, symbols)
    return CheckReport("isoterm-scan", FAIL, details + f"\npartner found: {partner}",
                       witness={"partner": str(partner), "length": length, "index": index})


# -- freeness scan ----------------------------------------------------------

def _encode(m) -> bytes:
    return ",".join(str(x) for row in m for x in row).encode()


def freeness_scan(generators: Sequence, max_len: int, cap: int = DEFAULT_FREENESS_CAP) -> CheckReport:
    """All products of at most ``max_len`` generators must be pairwise distinct."""
    if max_len < 1 or not generators:
        raise ValueError("need at least one generator and max_len >= 1")
    gens = [[list(map(int, row)) for row in g] for g in generators]
    k = len(gens)
    total = _count_words(k, max_len)
    head = f"{k} generator(s), products of length <= {max_len}"
    if total > cap:
        return CheckReport("free-scan", ABORTED, f"{head}\naborted: cap ({total} matrices > cap {cap})")
    seen: dict[bytes, tuple] = {}
    level = [((i,), g) for i, g in enumerate(gens)]
    for length in range(1, max_len + 1):
        if length > 1:
            level = [(seq + (i,), num_mul(m, g)) for seq, m in level for i, g in enumerate(gens)]
        for seq, m in level:
            key = _encode(m)
            if key in seen:
                return CheckReport("free-scan", FAIL, f"{head}\ncollision at length {length}",
                                   witness={"first": [f"g{i + 1}" for i in seen[key]],
                                            "second": [f"g{i + 1}" for i in seq]})
            seen[key] = seq
    return CheckReport("free-scan", PASS, f"{head}\n{len(seen)} pairwise distinct products",
                       witness=None)


T2_GENERATORS = [((2, 0), (0, 1)), ((2, 1), (0, 1))]
ZETA = ((2, 0, 0), (0, 1, 1), (0, 0, 2))
ZETA_PAIR = [ZETA, tuple(map(tuple, num_skew(ZETA)))]
FREE_GENERATORS = {"t2": T2_GENERATORS, "zeta": ZETA_PAIR}


# -- the Mal'cev product witness --------------------------------------------

def idempotent_classes(alphabet: Sequence[int]) -> list[tuple]:
    d = finite.diagonal_semigroup(3, alphabet)
    return [triangular.parse_pattern(d.names[i]) for i in finite.idempotents(d)]


def hypotheses_check(identity: Identity) -> CheckReport:
    """Balanced, nontrivial, and of the form Z_n = v."""
    balanced = is_balanced(identity)
    n = len(identity.lhs.alphabet())
    zimin_form = identity.lhs == zimin(n)
    ok = balanced and zimin_form and not identity.is_trivial()
    return CheckReport("hypotheses", PASS if ok else FAIL,
                       f"balanced: {balanced}; left side is Z{n}: {zimin_form}; nontrivial: {not identity.is_trivial()}",
                       witness=None if ok else {"identity": str(identity)})


def malcev_witness_report(alphabet: Sequence[int] = ALPHABET_01, identity: Identity | None = None) -> CheckReport:
    identity = identity or parse_identity(identities.Z4)
    d = finite.diagonal_semigroup(3, alphabet)
    idem = idempotent_classes(alphabet)
    parts = [triangular.diag_hom_check(3, alphabet)]
    parts[0].check = "diag-congruence"
    parts.append(CheckReport(
        "idempotent-classes", PASS if len(idem) == 8 and set(idem) == set(triangular.all_patterns(3)) else FAIL,
        f"{len(finite.idempotents(d))} of {len(d)} diagonal matrices are idempotent; "
        f"their classes are the subsemigroup classes"))
    classes = triangular.verify_uniform(3, idem, identity)
    classes.check = "classes-satisfy"
    parts.append(classes)
    parts.append(hypotheses_check(identity))
    note = ("quotient by Diag is the diagonal semigroup, the subsemigroup classes satisfy the identity, "
            "and the identity has the balanced Zimin form.\nLocal finiteness of the varieties involved is "
            "cited theory and is not computed here.")
    label = "0pm1" if -1 in alphabet else "01"
    return combine(f"malcev-report[{label}]", parts, note)


# -- small composite checks -------------------------------------------------

def expected_epsilon() -> Poly:
    """8a13 + 4b13 + 2c13 + d13 + a12(4b23 + 2c23 + d23) + (4b12 + 2c12 + d12)a23,
    with a, b, c, d the matrices of x1..x4."""
    def v(letter, i, j):
        return Poly.var(EntryVar(letter, i, j))
    return (8 * v(1, 1, 3) + 4 * v(2, 1, 3) + 2 * v(3, 1, 3) + v(4, 1, 3)
            + v(1, 1, 2) * (4 * v(2, 2, 3) + 2 * v(3, 2, 3) + v(4, 2, 3))
            + (4 * v(2, 1, 2) + 2 * v(3, 1, 2) + v(4, 1, 2)) * v(1, 2, 3))


def case6_epsilon_check() -> CheckReport:
    ident = parse_identity(identities.Z4)
    asg = LetterAssignment.generic(3, {k: (1, 0, 1) for k in ident.alphabet()})
    parts = []
    for side, w in (("Z4", ident.lhs), ("right side", ident.rhs)):
        m = eval_word(w, asg)
        got = m.entry(1, 3)
        ok = got == expected_epsilon() and str(got) == str(expected_epsilon()) \
            and m.entry(1, 2) == Poly.var(EntryVar(1, 1, 2)) and m.entry(2, 3) == Poly.var(EntryVar(1, 2, 3))
        parts.append(CheckReport(side, PASS if ok else FAIL, f"(1,3): {got}",
                                 witness=None if ok else {"got": str(got), "expected": str(expected_epsilon())}))
    return combine("case6-epsilon", parts, "101 class: (1,2) = x1_12, (2,3) = x1_23, (1,3) = epsilon")


def case3_anomaly_check() -> CheckReport:
    """In the 010 class, xyx = x fails at (1,3) while the Z4 identity holds."""
    xyx = triangular.verify_uniform(3, [(0, 1, 0)], parse_identity("x1 x2 x1 = x1"))
    z4 = triangular.verify_uniform(3, [(0, 1, 0)], parse_identity(identities.Z4))
    expected_entry = [1, 3]
    fails_as_computed = (not xyx.passed and xyx.parts[0].witness["entry"] == expected_entry
                         and xyx.parts[0].witness["lhs"] == "x1_12*x1_23" and xyx.parts[0].witness["rhs"] == "x1_13")
    parts = [CheckReport("xyx=x fails", PASS if fails_as_computed else FAIL, xyx.parts[0].details,
                         witness=xyx.parts[0].witness),
             CheckReport("z4 holds", z4.status, "Z4 identity on the 010 class")]
    return combine("case3-anomaly", parts,
                   "products of length >= 2 in the 010 class depend only on their first and last factors")


def expect_failure(report: CheckReport, name: str, accept: Callable[[CheckReport], bool] | None = None,
                   note: str = "") -> CheckReport:
    """Negative control: passes exactly when the inner check fails with a witness."""
    ok = report.status == FAIL and report.witness is not None and (accept is None or accept(report))
    inner = report.details.splitlines()[-1] if report.details else ""
    return CheckReport(name, PASS if ok else FAIL,
                       f"expected failure; inner status {report.status}" + (f"; {inner}" if inner else "")
                       + (f"\n{note}" if note else ""),
                       witness=report.witness)


def _entries_in(w: dict, allowed) -> bool:
    return all(x in allowed for m in w["matrices"].values() for row in m for x in row)


def mixed_negative_control(workers: int = 1) -> CheckReport:
    ident = parse_identity(identities.Z4)
    rep = triangular.verify_mixed(3, ALPHABET_01, ident, workers=workers)

    def accept(r):
        num = r.witness.get("numeric")
        if not num or not _entries_in(num, {0, 1, 2}):
            return False
        mats = {int(k[1:]): v for k, v in num["matrices"].items()}
        return triangular.num_eval_word(ident.lhs, mats) != triangular.num_eval_word(ident.rhs, mats)

    return expect_failure(rep, "mixed-dim3-z4", accept, "numeric witness re-evaluated: sides differ")


def malcev_identities_check(workers: int = 1) -> CheckReport:
    class2 = parse_identity(identities.CLASS2)
    class3 = parse_identity(identities.CLASS3)
    p2 = triangular.verify_uniform(3, [(1, 1, 1)], class2)
    p2.check = "class2-dim3"
    p3 = triangular.verify_uniform(4, [(1, 1, 1, 1)], class3)
    p3.check = "class3-dim4"
    w = triangular.find_numeric_counterexample(4, (1,), class2, (0, 1, 2), patterns=[(1, 1, 1, 1)],
                                               uniform=True, workers=workers)
    if w is not None and w.recheck(class2):
        neg = CheckReport("class2-dim4-fails", PASS, "numeric 4x4 unitriangular witness with entries in {0, 1, 2}",
                          witness=w.as_dict())
    else:
        neg = CheckReport("class2-dim4-fails", FAIL, "no numeric witness found")
    return combine("malcev-identities", [p2, p3, neg])


def construction_check() -> CheckReport:
    try:
        q = finite.mn_quotient()
    except (finite.ClosureCapExceeded, finite.SemigroupError) as exc:
        return CheckReport("mn-quotient", FAIL, str(exc))
    sink = q.index(finite.SINK)
    parts = [
        CheckReport("closure", PASS if len(q) == 6 and finite.is_zero(q, sink) else FAIL,
                    f"elements: {', '.join(q.names)}; sink is a two-sided zero: {finite.is_zero(q, sink)}"),
        CheckReport("star", PASS if q.names[int(q.star[q.index('xy')])] == "yx" else FAIL,
                    "skew transpose swaps xy and yx"),
    ]
    iso = finite.check_iso(q, finite.ta21(), finite.MN_TO_TA21)
    iso.check = "iso-ta21"
    parts.append(iso)
    return combine("mn-quotient", parts, "closure of e, x, y with the ideal (1,3) > 0 collapsed")


def d3pm_idempotents_check() -> CheckReport:
    d = finite.d3_pm()
    idem = [d.names[i] for i in finite.idempotents(d)]
    ok = len(d) == 27 and len(idem) == 8 and all("-" not in n for n in idem)
    return CheckReport("d3pm-idempotents", PASS if ok else FAIL,
                       f"{len(idem)} idempotents among {len(d)} elements: {', '.join(idem)}")


def _timed(fn, *args, **kwargs) -> CheckReport:
    start = time.perf_counter()
    rep = fn(*args, **kwargs)
    rep.duration = time.perf_counter() - start
    return rep


def paper_suite(workers: int = 1, seed: int = 0) -> list[CheckReport]:
    """Every finite computation of the nonfinite-basis argument, in order."""
    z4 = parse_identity(identities.Z4)
    ta = finite.ta21()
    theta = _timed(triangular.verify_uniform, 3, triangular.all_patterns(3), z4, samples=5, seed=seed)
    theta.check = "theta-classes"
    mixed2 = _timed(triangular.verify_mixed, 2, ALPHABET_01, parse_identity(identities.Z4_NEW), workers=workers)
    mixed2.check = "mixed-dim2-z4new"
    reports = [
        theta,
        _timed(case6_epsilon_check),
        mixed2,
        _timed(mixed_negative_control, workers),
        _timed(malcev_identities_check, workers),
        _timed(derivation_case8),
        _timed(rees.abelian_rees_criterion, z4),
        _timed(rees.s101_iso_check),
        _timed(rees.corpus_cross_check, 200, seed),
        _timed(construction_check),
    ]
    for n, length in ((1, 7), (2, 7), (3, 8)):
        rep = _timed(isoterm_scan, ta, zimin(n), length, workers=workers)
        rep.check = f"isoterm-ta21-z{n}-L{length}"
        reports.append(rep)
    reports.append(_timed(lambda: expect_failure(finite.holds(ta, z4, workers), "ta21-refutes-z4")))
    for name, length in (("t2", 12), ("zeta", 10)):
        rep = _timed(freeness_scan, FREE_GENERATORS[name], length)
        rep.check = f"free-scan-{name}-L{length}"
        reports.append(rep)
    for label, alph in (("01", ALPHABET_01), ("0pm1", ALPHABET_0PM1)):
        rep = _timed(triangular.diag_hom_check, 3, alph)
        rep.check = f"diag-hom-{label}"
        reports.append(rep)
    reports += [
        _timed(d3pm_idempotents_check),
        _timed(triangular.embedding_check),
        _timed(case3_anomaly_check),
        _timed(malcev_witness_report, ALPHABET_01),
        _timed(malcev_witness_report, ALPHABET_0PM1),
    ]
    return reports
