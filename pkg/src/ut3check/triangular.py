"""Symbolic upper triangular matrices with constant diagonals.

A matrix assigned to letter x_k carries a fixed diagonal pattern (entries from
{0, 1} or {0, 1, -1}) and an independent symbol ``EntryVar(k, i, j)`` at every
strictly upper position.  Evaluating both sides of an identity and comparing
the resulting polynomial entries decides whether the identity holds on every
matrix with those diagonals, with no sampling involved.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from functools import partial
from itertools import combinations, product
from typing import Iterable, Mapping, Sequence

from .parallel import first_hit
from .poly import ZERO, EntryVar, Poly
from .report import ABORTED, FAIL, PASS, CheckReport, combine
from .words import Identity, Letter, Word

ALPHABET_01 = (0, 1)
ALPHABET_0PM1 = (0, 1, -1)
ALPHABETS = {"01": ALPHABET_01, "0pm1": ALPHABET_0PM1}

DEFAULT_MIXED_CAP = 10**6
DEFAULT_SEARCH = (0, 1, 2)

Pattern = tuple  # tuple[int, ...]


def parse_pattern(text: str) -> Pattern:
    """``"101"`` -> (1, 0, 1); ``"1-10"`` -> (1, -1, 0)."""
    out = []
    i = 0
    while i < len(text):
        if text[i] == "-":
            if i + 1 >= len(text) or text[i + 1] not in "01":
                raise ValueError(f"bad diagonal pattern {text!r}")
            out.append(-int(text[i + 1]))
            i += 2
        elif text[i] in "01":
            out.append(int(text[i]))
            i += 1
        else:
            raise ValueError(f"bad diagonal pattern {text!r}")
    if not out:
        raise ValueError("empty diagonal pattern")
    return tuple(out)


def format_pattern(p: Sequence[int]) -> str:
    return "".join(str(d) for d in p)


def all_patterns(dim: int, alphabet: Sequence[int] = ALPHABET_01) -> list[Pattern]:
    return list(product(alphabet, repeat=dim))


@dataclass(frozen=True)
class SymMatrix:
    dim: int
    diagonal: Pattern
    upper: Mapping[tuple, Poly]  # (i, j) -> entry, 1-based, i < j

    def __post_init__(self):
        if self.dim < 1 or len(self.diagonal) != self.dim:
            raise ValueError(f"diagonal {self.diagonal} does not fit dimension {self.dim}")

    def entry(self, i: int, j: int):
        if i == j:
            return self.diagonal[i - 1]
        if i > j:
            return 0
        return self.upper.get((i, j), ZERO)

    def positions(self) -> list[tuple]:
        return upper_positions(self.dim)

    def __eq__(self, other):
        if not isinstance(other, SymMatrix):
            return NotImplemented
        return (self.dim == other.dim and self.diagonal == other.diagonal
                and all(self.entry(*p) == other.entry(*p) for p in self.positions()))

    def __hash__(self):
        return hash((self.dim, self.diagonal, tuple(self.entry(*p) for p in self.positions())))

    def __matmul__(self, other: "SymMatrix") -> "SymMatrix":
        return mat_mul(self, other)

    def variables(self) -> list[EntryVar]:
        return sorted({v for p in self.positions() for v in self.entry(*p).variables()})

    def substitute(self, values: Mapping[EntryVar, int | Fraction]) -> list[list]:
        """Numeric matrix (full list of rows) at the given entry values."""
        n = self.dim
        rows = [[0] * n for _ in range(n)]
        for i in range(1, n + 1):
            rows[i - 1][i - 1] = self.diagonal[i - 1]
            for j in range(i + 1, n + 1):
                rows[i - 1][j - 1] = self.entry(i, j).eval(values)
        return rows

    def render(self) -> str:
        lines = [f"diag {format_pattern(self.diagonal)}"]
        lines += [f"({i},{j}): {self.entry(i, j)}" for i, j in self.positions()]
        return "\n".join(lines)


def upper_positions(dim: int) -> list[tuple]:
    return [(i, j) for i in range(1, dim + 1) for j in range(i + 1, dim + 1)]


def _scale(d: int, p: Poly) -> Poly:
    if d == 0 or not p:
        return ZERO
    if d == 1:
        return p
    if d == -1:
        return -p
    return p * d


def fresh_symbolic(dim: int, pattern: Sequence[int], letter: int) -> SymMatrix:
    pattern = tuple(pattern)
    if len(pattern) != dim:
        raise ValueError(f"pattern {format_pattern(pattern)} has length {len(pattern)}, expected {dim}")
    upper = {(i, j): Poly.var(EntryVar(letter, i, j)) for i, j in upper_positions(dim)}
    return SymMatrix(dim, pattern, upper)


def constant_matrix(rows: Sequence[Sequence[int]]) -> SymMatrix:
    """Integer upper triangular matrix as a (constant) SymMatrix."""
    n = len(rows)
    for i in range(n):
        for j in range(i):
            if rows[i][j]:
                raise ValueError("matrix is not upper triangular")
    upper = {(i, j): Poly.const(rows[i - 1][j - 1]) for i, j in upper_positions(n)}
    return SymMatrix(n, tuple(rows[i][i] for i in range(n)), upper)


def mat_mul(a: SymMatrix, b: SymMatrix) -> SymMatrix:
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    n = a.dim
    da, db = a.diagonal, b.diagonal
    au, bu = a.upper, b.upper
    upper = {}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            s = _scale(da[i - 1], bu.get((i, j), ZERO)) + _scale(db[j - 1], au.get((i, j), ZERO))
            for k in range(i + 1, j):
                x = au.get((i, k), ZERO)
                if x:
                    y = bu.get((k, j), ZERO)
                    if y:
                        s = s + x * y
            upper[(i, j)] = s
    return SymMatrix(n, tuple(x * y for x, y in zip(da, db)), upper)


def dense_mul(a: SymMatrix, b: SymMatrix) -> list[list]:
    """Full n x n textbook product, lower triangle included.  Used as a cross-check."""
    n = a.dim
    out = []
    for i in range(1, n + 1):
        row = []
        for j in range(1, n + 1):
            s = ZERO
            for k in range(1, n + 1):
                s = s + _as_poly(a.entry(i, k)) * _as_poly(b.entry(k, j))
            row.append(s)
        out.append(row)
    return out


def _as_poly(x) -> Poly:
    return x if isinstance(x, Poly) else Poly.const(x)


def skew_transpose(a: SymMatrix) -> SymMatrix:
    """Reflection across the secondary diagonal: entry (i, j) moves to (n+1-j, n+1-i)."""
    n = a.dim
    upper = {(n + 1 - j, n + 1 - i): a.entry(i, j) for i, j in upper_positions(n)}
    return SymMatrix(n, tuple(reversed(a.diagonal)), upper)


def diag_of(a: SymMatrix) -> Pattern:
    return a.diagonal


class LetterAssignment:
    """Images of plain letters; a starred letter evaluates to the skew transpose."""

    def __init__(self, images: Mapping[int, SymMatrix]):
        dims = {m.dim for m in images.values()}
        if len(dims) > 1:
            raise ValueError("all images must share one dimension")
        self.images = dict(images)
        self._starred: dict[int, SymMatrix] = {}

    def __getitem__(self, letter: Letter) -> SymMatrix:
        try:
            m = self.images[letter.index]
        except KeyError:
            raise KeyError(f"no matrix assigned to x{letter.index}") from None
        if not letter.starred:
            return m
        if letter.index not in self._starred:
            self._starred[letter.index] = skew_transpose(m)
        return self._starred[letter.index]

    @classmethod
    def generic(cls, dim: int, patterns: Mapping[int, Sequence[int]]) -> "LetterAssignment":
        return cls({k: fresh_symbolic(dim, p, k) for k, p in patterns.items()})


def eval_word(w: Word, asg: LetterAssignment) -> SymMatrix:
    letters = list(w)
    result = asg[letters[0]]
    for a in letters[1:]:
        result = mat_mul(result, asg[a])
    return result


def differing_entries(a: SymMatrix, b: SymMatrix) -> list[tuple]:
    """Positions (row-major, diagonal included) where two matrices differ."""
    out = []
    n = a.dim
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            if a.entry(i, j) != b.entry(i, j):
                out.append((i, j))
    return out


# -- numeric route (independent of the polynomial code) ---------------------

def num_mul(a: list[list], b: list[list]) -> list[list]:
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]


def num_skew(a: list[list]) -> list[list]:
    n = len(a)
    return [[a[n - 1 - j][n - 1 - i] for j in range(n)] for i in range(n)]


def num_eval_word(w: Word, mats: Mapping[int, list[list]]) -> list[list]:
    result = None
    for a in w:
        m = mats[a.index]
        if a.starred:
            m = num_skew(m)
        result = m if result is None else num_mul(result, m)
    return result


def random_rational(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-9, 9), rng.randint(1, 5))


# -- uniform verification ---------------------------------------------------

def _evaluate_sides(identity: Identity, dim: int, patterns: Mapping[int, Pattern]):
    asg = LetterAssignment.generic(dim, patterns)
    return eval_word(identity.lhs, asg), eval_word(identity.rhs, asg), asg


def _sample_numeric(identity, dim, patterns, rng, samples) -> list[list]:
    """Evaluate both sides on random rational matrices; return the unequal samples."""
    bad = []
    for _ in range(samples):
        mats = {}
        for k, p in patterns.items():
            m = [[0] * dim for _ in range(dim)]
            for i in range(dim):
                m[i][i] = p[i]
                for j in range(i + 1, dim):
                    m[i][j] = random_rational(rng)
            mats[k] = m
        if num_eval_word(identity.lhs, mats) != num_eval_word(identity.rhs, mats):
            bad.append(mats)
    return bad


def _pattern_part(identity, dim, pattern, samples, rng) -> CheckReport:
    name = f"pattern {format_pattern(pattern)}"
    patterns = {k: pattern for k in identity.alphabet()}
    lhs, rhs, _ = _evaluate_sides(identity, dim, patterns)
    diff = differing_entries(lhs, rhs)
    if not diff:
        details = lhs.render()
        if samples:
            bad = _sample_numeric(identity, dim, patterns, rng, samples)
            if bad:
                return CheckReport(name, FAIL, "symbolic pass contradicted by numeric sample",
                                   witness={"pattern": format_pattern(pattern), "matrices": bad[0]})
            details += f"\nnumeric cross-check: {samples} random rational samples agree"
        return CheckReport(name, PASS, details)
    i, j = diff[0]
    witness = {"pattern": format_pattern(pattern), "entry": [i, j],
               "lhs": str(lhs.entry(i, j)), "rhs": str(rhs.entry(i, j))}
    details = f"first difference at ({i},{j}): {lhs.entry(i, j)}  vs  {rhs.entry(i, j)}"
    if samples:
        d = _as_poly(lhs.entry(i, j)) - _as_poly(rhs.entry(i, j))
        vals = {v: random_rational(rng) for v in d.variables()}
        tries = 1
        while d.eval(vals) == 0 and tries < samples:
            vals = {v: random_rational(rng) for v in d.variables()}
            tries += 1
        details += f"\nnumeric cross-check: difference nonzero at sample {tries}" if d.eval(vals) != 0 \
            else "\nnumeric cross-check: difference vanished on all samples"
    return CheckReport(name, FAIL, details, witness=witness)


def verify_uniform(dim: int, patterns: Iterable[Sequence[int]], identity: Identity,
                   samples: int = 0, seed: int = 0) -> CheckReport:
    """Check the identity on each class of matrices sharing one diagonal pattern."""
    patterns = [tuple(p) for p in patterns]
    if not patterns:
        raise ValueError("no diagonal patterns given")
    rng = random.Random(seed)
    parts = [_pattern_part(identity, dim, p, samples, rng) for p in patterns]
    npass = sum(p.passed for p in parts)
    return combine("verify-uniform", parts,
                   f"dim {dim}, identity {identity}\n{npass}/{len(parts)} diagonal classes pass")


# -- mixed verification -----------------------------------------------------

class Combinations:
    """Indexed assignments of diagonal patterns to letters.

    Mixed mode counts in base |patterns| with the lowest letter most significant;
    uniform mode gives each letter the same pattern.
    """

    def __init__(self, dim, alphabet, letters, patterns=None, uniform=False):
        self.dim = dim
        self.letters = list(letters)
        self.patterns = [tuple(p) for p in patterns] if patterns is not None else all_patterns(dim, alphabet)
        self.uniform = uniform

    def __len__(self):
        if self.uniform:
            return len(self.patterns)
        return len(self.patterns) ** len(self.letters)

    def __getitem__(self, idx: int) -> dict[int, Pattern]:
        if self.uniform:
            return {k: self.patterns[idx] for k in self.letters}
        base = len(self.patterns)
        out = {}
        for k in reversed(self.letters):
            idx, r = divmod(idx, base)
            out[k] = self.patterns[r]
        return dict(sorted(out.items()))


def _scan_symbolic(identity, combos: Combinations, start: int, stop: int):
    for idx in range(start, stop):
        lhs, rhs, _ = _evaluate_sides(identity, combos.dim, combos[idx])
        if differing_entries(lhs, rhs):
            return (idx, None)
    return None


def verify_mixed(dim: int, alphabet: Sequence[int], identity: Identity, cap: int = DEFAULT_MIXED_CAP,
                 workers: int = 1, search: Sequence[int] = DEFAULT_SEARCH) -> CheckReport:
    """Check the identity with every letter's diagonal chosen independently."""
    combos = Combinations(dim, alphabet, identity.alphabet())
    total = len(combos)
    head = f"dim {dim}, alphabet {{{', '.join(map(str, alphabet))}}}, identity {identity}"
    if total > cap:
        return CheckReport("verify-mixed", ABORTED,
                           f"{head}\naborted: cap ({total} combinations > cap {cap})")
    hit = first_hit(partial(_scan_symbolic, identity, combos), total, workers)
    if hit is None:
        return CheckReport("verify-mixed", PASS, f"{head}\nall {total} diagonal combinations agree")
    idx = hit[0]
    pats = combos[idx]
    lhs, rhs, _ = _evaluate_sides(identity, dim, pats)
    i, j = differing_entries(lhs, rhs)[0]
    witness = {"combination": idx,
               "patterns": {f"x{k}": format_pattern(p) for k, p in pats.items()},
               "entry": [i, j], "lhs": str(lhs.entry(i, j)), "rhs": str(rhs.entry(i, j))}
    details = (f"{head}\nfirst failing combination #{idx} of {total}: "
               + ", ".join(f"x{k}->{format_pattern(p)}" for k, p in pats.items())
               + f"\nfirst difference at ({i},{j})")
    num = _guided_search(identity, dim, idx, pats, search)
    if num is not None:
        witness["numeric"] = num.as_dict()
        details += f"\nnumeric witness with entries in {{{', '.join(map(str, search))}}}"
    return CheckReport("verify-mixed", FAIL, details, witness=witness)


# -- numeric counterexamples ------------------------------------------------

@dataclass
class NumericWitness:
    combination: int
    matrices: dict[int, list[list]]
    lhs: list[list]
    rhs: list[list]

    def as_dict(self) -> dict:
        return {"combination": self.combination,
                "matrices": {f"x{k}": m for k, m in sorted(self.matrices.items())},
                "lhs": self.lhs, "rhs": self.rhs}

    def recheck(self, identity: Identity) -> bool:
        """True when the stored matrices really separate the two sides."""
        return num_eval_word(identity.lhs, self.matrices) != num_eval_word(identity.rhs, self.matrices)


def _support_points(variables: list, search: Sequence[int]):
    """Points of search^variables, fewest non-background coordinates first."""
    background = 0 if 0 in search else search[0]
    others = [s for s in search if s != background]
    for size in range(len(variables) + 1):
        for chosen in combinations(variables, size):
            for vals in product(others, repeat=size):
                point = dict.fromkeys(variables, background)
                point.update(zip(chosen, vals))
                yield point


def _guided_search(identity, dim, idx, pats, search) -> NumericWitness | None:
    lhs, rhs, asg = _evaluate_sides(identity, dim, pats)
    diffs = [_as_poly(lhs.entry(*p)) - _as_poly(rhs.entry(*p)) for p in differing_entries(lhs, rhs)]
    if not diffs:
        return None
    all_vars = sorted({v for m in asg.images.values() for v in m.variables()})
    background = 0 if 0 in search else search[0]
    target = diffs[0]
    for point in _support_points(target.variables(), search):
        if target.eval(point) == 0:
            continue
        values = dict.fromkeys(all_vars, background)
        values.update(point)
        mats = {k: m.substitute(values) for k, m in asg.images.items()}
        w = NumericWitness(idx, mats, num_eval_word(identity.lhs, mats), num_eval_word(identity.rhs, mats))
        if w.lhs != w.rhs:
            return w
    return None


def _scan_exhaustive(identity, combos: Combinations, search, start, stop):
    dim = combos.dim
    pos = [(i - 1, j - 1) for i, j in upper_positions(dim)]
    for idx in range(start, stop):
        pats = combos[idx]
        letters = list(pats)
        for vals in product(search, repeat=len(letters) * len(pos)):
            mats = {}
            it = iter(vals)
            for k in letters:
                m = [[0] * dim for _ in range(dim)]
                for i in range(dim):
                    m[i][i] = pats[k][i]
                for i, j in pos:
                    m[i][j] = next(it)
                mats[k] = m
            l, r = num_eval_word(identity.lhs, mats), num_eval_word(identity.rhs, mats)
            if l != r:
                return (idx, NumericWitness(idx, mats, l, r))
    return None


def _scan_guided(identity, combos: Combinations, search, start, stop):
    for idx in range(start, stop):
        found = _guided_search(identity, combos.dim, idx, combos[idx], search)
        if found is not None:
            return (idx, found)
    return None


def find_numeric_counterexample(dim: int, alphabet: Sequence[int], identity: Identity,
                                search: Sequence[int] = DEFAULT_SEARCH, *,
                                patterns: Iterable[Sequence[int]] | None = None,
                                uniform: bool = False, exhaustive: bool = False,
                                workers: int = 1) -> NumericWitness | None:
    """First integer assignment (entries drawn from ``search``) separating the two sides.

    Diagonal combinations are scanned in their enumeration order.  By default each
    combination is first decided symbolically and only failing ones are searched,
    over the variables of the first differing entry, fewest nonzero coordinates
    first.  ``exhaustive=True`` instead walks every integer assignment in
    lexicographic order with purely numeric products.
    """
    search = tuple(search)
    if not search:
        raise ValueError("empty search range")
    combos = Combinations(dim, alphabet, identity.alphabet(), patterns, uniform)
    scan = _scan_exhaustive if exhaustive else _scan_guided
    hit = first_hit(partial(scan, identity, combos, search), len(combos), workers)
    return None if hit is None else hit[1]


# -- structural checks ------------------------------------------------------

def diag_hom_check(dim: int, alphabet: Sequence[int] = ALPHABET_01) -> CheckReport:
    """Diag(ab) = Diag(a)Diag(b) for every pair of diagonal patterns.

    The product is formed with the full textbook formula so the check does not
    rely on how ``mat_mul`` builds diagonals; both products are compared too.
    """
    pats = all_patterns(dim, alphabet)
    for p, q in product(pats, repeat=2):
        a, b = fresh_symbolic(dim, p, 1), fresh_symbolic(dim, q, 2)
        dense = dense_mul(a, b)
        diag = tuple(dense[i][i] for i in range(dim))
        want = tuple(Poly.const(x * y) for x, y in zip(p, q))
        lower_zero = all(not dense[i][j] for i in range(dim) for j in range(i))
        fast = mat_mul(a, b)
        agree = all(_as_poly(fast.entry(i + 1, j + 1)) == dense[i][j] for i in range(dim) for j in range(dim))
        if diag != want or not lower_zero or not agree:
            return CheckReport("diag-hom", FAIL, f"pattern pair {format_pattern(p)}, {format_pattern(q)}",
                               witness={"left": format_pattern(p), "right": format_pattern(q)})
    image = {tuple(x * y for x, y in zip(p, q)) for p, q in product(pats, repeat=2)}
    onto = image == set(pats)
    status = PASS if onto else FAIL
    return CheckReport("diag-hom", status,
                       f"dim {dim}, alphabet {{{', '.join(map(str, alphabet))}}}: "
                       f"{len(pats) ** 2} pattern pairs multiply diagonally; "
                       f"image has {len(image)} diagonal matrices")


def embed_ut2(a: SymMatrix) -> SymMatrix:
    """UT2 -> UT3: corners kept, middle row and column zero."""
    if a.dim != 2:
        raise ValueError("embedding is defined on 2x2 matrices")
    upper = {(1, 2): ZERO, (1, 3): a.entry(1, 2), (2, 3): ZERO}
    return SymMatrix(3, (a.diagonal[0], 0, a.diagonal[1]), upper)


def embedding_check() -> CheckReport:
    # letter 2's variables are x2_12, kept distinct from letter 1's
    pats = all_patterns(2, ALPHABET_01)
    parts = []
    bad = None
    for p, q in product(pats, repeat=2):
        a, b = fresh_symbolic(2, p, 1), fresh_symbolic(2, q, 2)
        if embed_ut2(mat_mul(a, b)) != mat_mul(embed_ut2(a), embed_ut2(b)):
            bad = bad or {"left": format_pattern(p), "right": format_pattern(q)}
    parts.append(CheckReport("multiplicative", FAIL if bad else PASS,
                             f"{len(pats) ** 2} UT2 pattern pairs", witness=bad))
    bad = None
    for p in pats:
        a = fresh_symbolic(2, p, 1)
        if embed_ut2(skew_transpose(a)) != skew_transpose(embed_ut2(a)):
            bad = bad or {"pattern": format_pattern(p)}
    parts.append(CheckReport("involution", FAIL if bad else PASS,
                             f"{len(pats)} UT2 patterns", witness=bad))
    image = embed_ut2(fresh_symbolic(2, (1, 1), 1))
    targets = [image.entry(1, 3)]
    # distinct source coordinates land on distinct target coordinates
    coords = {(1, 1): (1, 1), (1, 2): (1, 3), (2, 2): (3, 3)}
    injective = len(set(coords.values())) == len(coords) and targets[0] == Poly.var(EntryVar(1, 1, 2))
    parts.append(CheckReport("injective", PASS if injective else FAIL,
                             "coordinates (1,1)->(1,1), (1,2)->(1,3), (2,2)->(3,3)"))
    return combine("embedding", parts, "UT2 -> UT3 corner embedding")
