"""Rees matrix semigroup over the additive rationals with sandwich P(r, s) = r*s.

Elements are triples (s, g, r) multiplying as
(s1, g, r1)(s2, h, r2) = (s1, g + r1*s2 + h, r2).  The arithmetic is generic,
so the same code runs on Fractions and on symbolic polynomials.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Any, NamedTuple

from .report import FAIL, PASS, CheckReport, combine
from .triangular import fresh_symbolic, mat_mul, num_mul, verify_uniform
from .words import Identity, Letter, Word, occurrence_stats

S101 = (1, 0, 1)


class ReesElement(NamedTuple):
    left: Any    # row index s
    middle: Any  # group element g
    right: Any   # column index r


def rees_mul(a: ReesElement, b: ReesElement) -> ReesElement:
    return ReesElement(a.left, a.middle + a.right * b.left + b.middle, b.right)


def s101_to_rees(m, order=("23", "13", "12")) -> ReesElement:
    """(1, a12, a13; 0, a23; 1) -> (a23, a13, a12); ``order`` picks other coordinates for controls."""
    return ReesElement(*(m.entry(int(p[0]), int(p[1])) for p in order))


def s101_iso_check(order=("23", "13", "12")) -> CheckReport:
    """phi(ab) = phi(a)phi(b) on generic symbolic elements of the 101 class."""
    a, b = fresh_symbolic(3, S101, 1), fresh_symbolic(3, S101, 2)
    via_matrix = s101_to_rees(mat_mul(a, b), order)
    via_rees = rees_mul(s101_to_rees(a, order), s101_to_rees(b, order))
    labels = ("left", "middle", "right")
    bad = [(k, str(u), str(v)) for k, u, v in zip(labels, via_matrix, via_rees) if u != v]
    name = "rees-iso"
    if bad:
        k, u, v = bad[0]
        return CheckReport(name, FAIL, f"{k} component differs: {u}  vs  {v}",
                           witness={"component": k, "matrix_route": u, "rees_route": v})
    return CheckReport(name, PASS, f"both routes give middle component {via_rees.middle}")


def abelian_rees_criterion(identity: Identity) -> CheckReport:
    """Same first letter, same last letter, same counts of every adjacent pair."""
    if identity.involutory:
        raise ValueError("the criterion applies to plain identities")
    u, v = occurrence_stats(identity.lhs), occurrence_stats(identity.rhs)
    parts = [
        CheckReport("first letter", PASS if u.first == v.first else FAIL, f"{u.first} / {v.first}",
                    witness=None if u.first == v.first else [str(u.first), str(v.first)]),
        CheckReport("last letter", PASS if u.last == v.last else FAIL, f"{u.last} / {v.last}",
                    witness=None if u.last == v.last else [str(u.last), str(v.last)]),
    ]
    diff = sorted(p for p in set(u.pairs) | set(v.pairs) if u.pairs[p] != v.pairs[p])
    parts.append(CheckReport(
        "pair counts", FAIL if diff else PASS,
        f"{sum(u.pairs.values())} adjacent pairs on each side" if not diff
        else f"{len(diff)} pair(s) with different counts",
        witness=[{"pair": f"{a} {b}", "lhs": u.pairs[(a, b)], "rhs": v.pairs[(a, b)]} for a, b in diff] or None))
    return combine("rees-criterion", parts, f"identity {identity}")


# -- corpus cross-check -----------------------------------------------------

def _random_word(rng: random.Random, letters: int, length: int) -> Word:
    return Word.of(*(rng.randint(1, letters) for _ in range(length)))


def _random_trail(rng: random.Random, w: Word) -> Word:
    """Random walk through the adjacent-pair multigraph of w using every edge once.

    Hierholzer's algorithm with shuffled edges; because the multigraph comes from a
    walk, the result starts and ends where w does and has the same pair counts.
    """
    out_edges: dict[Letter, list[Letter]] = {}
    for a, b in zip(w.letters, w.letters[1:]):
        out_edges.setdefault(a, []).append(b)
    for edges in out_edges.values():
        rng.shuffle(edges)
    stack, trail = [w.letters[0]], []
    while stack:
        top = stack[-1]
        if out_edges.get(top):
            stack.append(out_edges[top].pop())
        else:
            trail.append(stack.pop())
    return Word(tuple(reversed(trail)))


def _endpoint_shuffle(rng: random.Random, w: Word) -> Word:
    inner = list(w.letters[1:-1])
    rng.shuffle(inner)
    return Word((w.letters[0], *inner, w.letters[-1]))


def generate_corpus(size: int, seed: int = 0):
    """Random identities split into criterion passes and endpoint-matching pair-count failures."""
    rng = random.Random(seed)
    passing, failing = [], []
    while len(passing) + len(failing) < size:
        u = _random_word(rng, rng.randint(2, 4), rng.randint(3, 10))
        if len(passing) <= len(failing):
            v = _random_trail(rng, u)
            if v != u:
                passing.append(Identity(u, v))
        else:
            v = _endpoint_shuffle(rng, u)
            if occurrence_stats(u).pairs != occurrence_stats(v).pairs:
                failing.append(Identity(u, v))
    return passing, failing


def corpus_cross_check(size: int = 200, seed: int = 0) -> CheckReport:
    """Criterion verdicts against symbolic verification on the 101 class."""
    passing, failing = generate_corpus(size, seed)
    exceptions = []
    counts_implied = True
    labelled = [(i, True) for i in passing] + [(i, False) for i in failing]
    for ident, expect_pass in labelled:
        crit = abelian_rees_criterion(ident)
        sym = verify_uniform(3, [S101], ident)
        pair_ok = crit.parts[2].passed
        ends_ok = crit.parts[0].passed and crit.parts[1].passed
        if expect_pass and not (crit.passed and sym.passed):
            exceptions.append({"identity": str(ident), "criterion": crit.status, "s101": sym.status})
        if not expect_pass and not (ends_ok and not pair_ok and not sym.passed):
            exceptions.append({"identity": str(ident), "criterion": crit.status, "s101": sym.status})
        if crit.passed:
            u, v = occurrence_stats(ident.lhs), occurrence_stats(ident.rhs)
            counts_implied &= u.letters == v.letters
    ok = not exceptions and counts_implied
    details = (f"{len(passing)} criterion-passing and {len(failing)} pair-count-failing identities (seed {seed}); "
               f"{len(exceptions)} exceptions; letter counts implied: {counts_implied}")
    return CheckReport("rees-corpus", PASS if ok else FAIL, details, witness=exceptions[:5] or None)


def numeric_iso_sample(rng: random.Random) -> bool:
    """Both routes agree on one random pair of rational 101-class matrices."""
    def sample():
        r = [Fraction(rng.randint(-20, 20), rng.randint(1, 7)) for _ in range(3)]
        return [[1, r[0], r[1]], [0, 0, r[2]], [0, 0, 1]]

    def to_rees(m):
        return ReesElement(m[1][2], m[0][2], m[0][1])

    a, b = sample(), sample()
    return to_rees(num_mul(a, b)) == rees_mul(to_rees(a), to_rees(b))
