"""Finite semigroups, optionally with involution, given by Cayley tables."""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import partial
from itertools import product
from pathlib import Path
from typing import Callable, Mapping, Sequence

import numpy as np

from .parallel import first_hit
from .report import FAIL, PASS, CheckReport
from .triangular import num_mul, num_skew
from .words import Identity, Word

Matrix = tuple  # tuple of row tuples of ints


class SemigroupError(ValueError):
    pass


class ClosureCapExceeded(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class FiniteSemigroup:
    names: tuple[str, ...]
    table: np.ndarray        # table[i, j] = index of product
    star: np.ndarray | None  # star[i] = index of the involute

    def __len__(self):
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no element named {name!r}") from None

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def evaluate(self, w: Word, assignment: Mapping[int, int]) -> int:
        acc = None
        for a in w:
            v = assignment[a.index]
            if a.starred:
                v = int(self.star[v])
            acc = v if acc is None else int(self.table[acc, v])
        return acc

    def to_dict(self) -> dict:
        out = {"elements": list(self.names), "table": self.table.tolist()}
        if self.star is not None:
            out["star"] = self.star.tolist()
        return out


def build_validated(names: Sequence[str], table, star=None) -> FiniteSemigroup:
    names = tuple(str(n) for n in names)
    n = len(names)
    if n == 0:
        raise SemigroupError("a semigroup needs at least one element")
    if len(set(names)) != n:
        raise SemigroupError("element names must be distinct")
    t = np.asarray(table, dtype=np.int64)
    if t.shape != (n, n):
        raise SemigroupError(f"table must be {n}x{n}, got shape {t.shape}")
    if t.min() < 0 or t.max() >= n:
        raise SemigroupError("table entry out of range")
    # (ab)c against a(bc) for all n^3 triples at once
    left = t[t, :]                 # left[a, b, c] = (ab)c
    right = t[:, t]                # right[a, b, c] = a(bc)
    bad = np.argwhere(left != right)
    if len(bad):
        a, b, c = (int(x) for x in bad[0])
        raise SemigroupError(f"not associative: ({names[a]}{names[b]}){names[c]} != {names[a]}({names[b]}{names[c]})")
    s = None
    if star is not None:
        s = np.asarray(star, dtype=np.int64)
        if s.shape != (n,) or s.min() < 0 or s.max() >= n:
            raise SemigroupError("star must list one element index per element")
        bad = np.flatnonzero(s[s] != np.arange(n))
        if len(bad):
            raise SemigroupError(f"star is not involutive at {names[bad[0]]}")
        bad = np.argwhere(s[t] != t[s[:, None], s[None, :]].T)
        if len(bad):
            a, b = (int(x) for x in bad[0])
            raise SemigroupError(f"star is not an anti-automorphism at ({names[a]}, {names[b]})")
    t.setflags(write=False)
    if s is not None:
        s.setflags(write=False)
    return FiniteSemigroup(names, t, s)


def from_matrices(names: Sequence[str], matrices: Sequence, star: Callable | None = None) -> FiniteSemigroup:
    """Cayley table of a set of integer matrices closed under product (and ``star``)."""
    mats = [_freeze(m) for m in matrices]
    where = {m: i for i, m in enumerate(mats)}
    if len(where) != len(mats):
        raise SemigroupError("duplicate matrices")
    table = []
    for a in mats:
        row = []
        for b in mats:
            p = _freeze(num_mul(a, b))
            if p not in where:
                raise SemigroupError("matrix set is not closed under multiplication")
            row.append(where[p])
        table.append(row)
    star_idx = None
    if star is not None:
        star_idx = [where[_freeze(star(m))] for m in mats]
    return build_validated(names, table, star_idx)


def _freeze(m) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in m)


def load(path: str | Path) -> FiniteSemigroup:
    data = json.loads(Path(path).read_text())
    return build_validated(data["elements"], data["table"], data.get("star"))


def dump(s: FiniteSemigroup, path: str | Path) -> None:
    Path(path).write_text(json.dumps(s.to_dict(), indent=2) + "\n")


# -- the concrete semigroups ------------------------------------------------

def diagonal_semigroup(dim: int = 3, alphabet: Sequence[int] = (0, 1)) -> FiniteSemigroup:
    """All diagonal matrices over the alphabet, with the skew transpose as star."""
    pats = list(product(alphabet, repeat=dim))
    mats = [[[p[i] if i == j else 0 for j in range(dim)] for i in range(dim)] for p in pats]
    names = ["".join(str(d) for d in p) for p in pats]
    return from_matrices(names, mats, star=num_skew)


def d3() -> FiniteSemigroup:
    return diagonal_semigroup(3, (0, 1))


def d3_pm() -> FiniteSemigroup:
    return diagonal_semigroup(3, (0, 1, -1))


TA21_MATRICES = {
    "0": ((0, 0), (0, 0)),
    "E11": ((1, 0), (0, 0)),
    "E12": ((0, 1), (0, 0)),
    "L": ((1, 0), (1, 0)),
    "R": ((0, 1), (0, 1)),
    "I": ((1, 0), (0, 1)),
}
_TA21_STAR = {"E11": "R", "R": "E11"}


def ta21() -> FiniteSemigroup:
    """Six 0/1 matrices; the star swaps E11 with R = [[0,1],[0,1]] and fixes the rest."""
    names = list(TA21_MATRICES)
    by_matrix = {m: k for k, m in TA21_MATRICES.items()}

    def star(m):
        k = by_matrix[_freeze(m)]
        return TA21_MATRICES[_TA21_STAR.get(k, k)]

    return from_matrices(names, list(TA21_MATRICES.values()), star=star)


BUILTIN_SEMIGROUPS = {"d3": d3, "d3pm": d3_pm, "ta21": ta21}


def resolve(name_or_path: str) -> FiniteSemigroup:
    key = name_or_path.lower()
    if key in BUILTIN_SEMIGROUPS:
        return BUILTIN_SEMIGROUPS[key]()
    return load(name_or_path)


# -- identity checking ------------------------------------------------------

_CHUNK = 1 << 16


def _letter_values(n: int, k: int, start: int, stop: int) -> np.ndarray:
    """Row r holds, per letter, the element assigned at enumeration index start + r."""
    idx = np.arange(start, stop, dtype=np.int64)
    out = np.empty((stop - start, k), dtype=np.int64)
    for pos in range(k - 1, -1, -1):
        idx, out[:, pos] = np.divmod(idx, n)
    return out


def _eval_vector(s: FiniteSemigroup, w: Word, letters: list[int], vals: np.ndarray) -> np.ndarray:
    col = {k: i for i, k in enumerate(letters)}
    acc = None
    for a in w:
        v = vals[:, col[a.index]]
        if a.starred:
            v = s.star[v]
        acc = v if acc is None else s.table[acc, v]
    return acc


def _holds_scan(s, identity, letters, start, stop):
    n, k = len(s), len(letters)
    for a in range(start, stop, _CHUNK):
        b = min(stop, a + _CHUNK)
        vals = _letter_values(n, k, a, b)
        diff = np.flatnonzero(_eval_vector(s, identity.lhs, letters, vals)
                              != _eval_vector(s, identity.rhs, letters, vals))
        if len(diff):
            return (a + int(diff[0]), None)
    return None


def holds(s: FiniteSemigroup, identity: Identity, workers: int = 1) -> CheckReport:
    """Evaluate both sides under every assignment of elements to the plain letters.

    Assignments are counted in base |S| with the lowest letter most significant;
    a failure carries the first separating assignment in that order.
    """
    uses_star = identity.lhs.has_stars or identity.rhs.has_stars
    if uses_star and s.star is None:
        raise SemigroupError("involutory identity needs a semigroup with involution")
    letters = identity.alphabet()
    total = len(s) ** len(letters)
    hit = first_hit(partial(_holds_scan, s, identity, letters), total, workers, chunk=max(_CHUNK, total // 8 + 1))
    head = f"identity {identity} on {len(s)} elements, {total} assignments"
    if hit is None:
        return CheckReport("holds", PASS, head)
    idx = hit[0]
    vals = _letter_values(len(s), len(letters), idx, idx + 1)[0]
    asg = {k: int(v) for k, v in zip(letters, vals)}
    lhs, rhs = s.evaluate(identity.lhs, asg), s.evaluate(identity.rhs, asg)
    witness = {"index": idx, "assignment": {f"x{k}": s.names[v] for k, v in asg.items()},
               "lhs": s.names[lhs], "rhs": s.names[rhs]}
    return CheckReport("holds", FAIL, head + f"\nfails at assignment #{idx}", witness=witness)


def idempotents(s: FiniteSemigroup) -> list[int]:
    return [i for i in range(len(s)) if s.table[i, i] == i]


def is_zero(s: FiniteSemigroup, z: int) -> bool:
    return bool((s.table[z, :] == z).all() and (s.table[:, z] == z).all())


def check_iso(s: FiniteSemigroup, t: FiniteSemigroup, mapping: Mapping[str, str] | Sequence[int]) -> CheckReport:
    """Check that the element map is a bijective (involution) homomorphism."""
    if isinstance(mapping, Mapping):
        phi = [t.index(mapping[name]) for name in s.names]
    else:
        phi = list(mapping)
    if len(phi) != len(s) or sorted(phi) != list(range(len(t))):
        return CheckReport("check-iso", FAIL, "map is not a bijection", witness={"map": phi})
    phi_arr = np.array(phi)
    bad = np.argwhere(phi_arr[s.table] != t.table[phi_arr[:, None], phi_arr[None, :]])
    if len(bad):
        a, b = (int(x) for x in bad[0])
        return CheckReport("check-iso", FAIL, "product not preserved",
                           witness={"pair": [s.names[a], s.names[b]],
                                    "image_of_product": t.names[phi[s.mul(a, b)]],
                                    "product_of_images": t.names[t.mul(phi[a], phi[b])]})
    if (s.star is None) != (t.star is None):
        return CheckReport("check-iso", FAIL, "only one side has an involution")
    if s.star is not None:
        bad = np.flatnonzero(phi_arr[s.star] != t.star[phi_arr])
        if len(bad):
            a = int(bad[0])
            return CheckReport("check-iso", FAIL, "star not preserved", witness={"element": s.names[a]})
    return CheckReport("check-iso", PASS,
                       f"{len(s)} elements, {len(s) ** 2} products"
                       + (", star preserved" if s.star is not None else ""))


# -- closure with an ideal collapsed to a point -----------------------------

SINK = "0"


def closure_with_ideal(generators: Sequence, ideal: Callable[[Matrix], bool], cap: int = 100,
                       names: Sequence[str] | None = None, involution: bool = True) -> FiniteSemigroup:
    """Close integer matrices under product (and skew transpose), gluing the ideal to one sink.

    Each new product is tested against ``ideal`` before interning, so only the
    complement of the ideal is ever stored.  The sink is the last element.
    Raises ClosureCapExceeded if more than ``cap`` non-sink elements appear.
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    gens = [_freeze(g) for g in generators]
    names = list(names) if names is not None else [f"g{i + 1}" for i in range(len(gens))]
    elements: list[Matrix] = []
    labels: list[str] = []
    where: dict[Matrix, int] = {}
    reps: list[Matrix] = []
    seen_reps: set = set()

    def intern(m, label):
        if ideal(m):
            if m not in seen_reps:
                seen_reps.add(m)
                reps.append(m)
            return
        if m in where:
            return
        if len(elements) >= cap:
            raise ClosureCapExceeded(f"more than {cap} elements outside the ideal")
        where[m] = len(elements)
        elements.append(m)
        labels.append(label)

    for g, label in zip(gens, names):
        intern(g, label)
    if involution:
        for g, label in zip(gens, names):
            intern(_freeze(num_skew(g)), f"{label}*")
    k = 0
    while k < len(elements):
        a = elements[k]
        for j in range(k + 1):
            b = elements[j]
            intern(_freeze(num_mul(b, a)), labels[j] + labels[k])
            intern(_freeze(num_mul(a, b)), labels[k] + labels[j])
        if involution:
            intern(_freeze(num_skew(a)), f"({labels[k]})*")
        k += 1
    if SINK in labels:
        raise SemigroupError(f"element label {SINK!r} is reserved for the sink")
    # the collapsed part must absorb everything it meets
    for r in reps:
        for e in elements:
            if not ideal(_freeze(num_mul(r, e))) or not ideal(_freeze(num_mul(e, r))):
                raise SemigroupError("ideal predicate is not closed under multiplication")
        if involution and not ideal(_freeze(num_skew(r))):
            raise SemigroupError("ideal predicate is not closed under the involution")
    n = len(elements)
    sink = n
    table = [[sink] * (n + 1) for _ in range(n + 1)]
    for i, a in enumerate(elements):
        for j, b in enumerate(elements):
            table[i][j] = where.get(_freeze(num_mul(a, b)), sink)
    star = None
    if involution:
        star = [where.get(_freeze(num_skew(a)), sink) for a in elements] + [sink]
    return build_validated(labels + [SINK], table, star)


def mn_quotient() -> FiniteSemigroup:
    """The involution subsemigroup generated by e, x, y in UT3, modulo the ideal (1,3) > 0."""
    e = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    x = ((1, 0, 0), (0, 0, 0), (0, 0, 1))
    y = ((1, 1, 0), (0, 0, 1), (0, 0, 1))
    return closure_with_ideal([e, x, y], lambda m: m[0][2] > 0, cap=100, names=["e", "x", "y"])


# e -> I, x -> [[1,0],[1,0]], y -> E12, xy -> [[0,1],[0,1]], yx -> E11, sink -> 0
MN_TO_TA21 = {"e": "I", "x": "L", "y": "E12", "xy": "R", "yx": "E11", SINK: "0"}
