"""Acceptance criteria 1-11, each at its stated tolerance.

Every test prints one line ``criterion N: PASS|FAIL  <summary>`` (visible
without ``-s``) before asserting.
"""

import json
import time

import pytest

from ut3check import finite, identities, rees, suites, triangular
from ut3check.cli import main
from ut3check.suites import expected_epsilon
from ut3check.words import parse_identity, zimin


@pytest.fixture
def verdict(capsys):
    def emit(n, ok, summary):
        with capsys.disabled():
            print(f"\ncriterion {n}: {'PASS' if ok else 'FAIL'}  {summary}")
        assert ok, summary
    return emit


def cli_json(capsys, *argv):
    code = main([*argv, "--format", "structured"])
    return code, json.loads(capsys.readouterr().out)


def test_criterion_01_theta_classes(capsys, verdict):
    start = time.perf_counter()
    code, records = cli_json(capsys, "verify", "theta-classes", "--identity", "z4")
    elapsed = time.perf_counter() - start
    parts = [r for r in records if r["check"].startswith("theta-classes/pattern ")]
    all_pass = code == 0 and len(parts) == 8 and all(r["status"] == "pass" for r in parts)
    case6 = next(r for r in parts if r["check"].endswith("101"))
    entry13 = next(line for line in case6["details"].splitlines() if line.startswith("(1,3): "))[7:]
    eps_ok = entry13 == str(expected_epsilon())
    verdict(1, all_pass and eps_ok and elapsed < 5,
            f"8/8 patterns pass: {all_pass}; 101 (1,3) entry matches epsilon: {eps_ok}; {elapsed:.2f}s < 5s")


def test_criterion_02_mixed_dim2(capsys, verdict):
    start = time.perf_counter()
    code, records = cli_json(capsys, "verify", "mixed", "--dim", "2", "--identity", "z4new")
    elapsed = time.perf_counter() - start
    ok = code == 0 and records[0]["status"] == "pass" and "all 256 diagonal combinations" in records[0]["details"]
    verdict(2, ok and elapsed < 10, f"256 combinations agree: {ok}; {elapsed:.2f}s < 10s")


def test_criterion_03_negative_control(capsys, verdict):
    code, records = cli_json(capsys, "verify", "mixed", "--dim", "3", "--identity", "z4")
    z4 = parse_identity(identities.Z4)
    num = (records[0].get("witness") or {}).get("numeric")
    ok = code == 1 and num is not None
    if ok:
        mats = {int(k[1:]): m for k, m in num["matrices"].items()}
        small = all(x in (0, 1, 2) for m in mats.values() for row in m for x in row)
        lhs, rhs = triangular.num_eval_word(z4.lhs, mats), triangular.num_eval_word(z4.rhs, mats)
        ok = small and lhs != rhs and lhs == num["lhs"] and rhs == num["rhs"]
    verdict(3, ok, f"fails with numeric witness at combination #{records[0]['witness']['combination']}, "
                   f"entries in {{0,1,2}}, sides re-evaluate unequal: {ok}")


def test_criterion_04_malcev(verdict):
    start = time.perf_counter()
    class2, class3 = parse_identity(identities.CLASS2), parse_identity(identities.CLASS3)
    three = triangular.verify_uniform(3, [(1, 1, 1)], class2).passed
    four = triangular.verify_uniform(4, [(1, 1, 1, 1)], class3).passed
    fails = not triangular.verify_uniform(4, [(1, 1, 1, 1)], class2).passed
    w = triangular.find_numeric_counterexample(4, (1,), class2, (0, 1, 2), patterns=[(1, 1, 1, 1)], uniform=True)
    witness_ok = w is not None and w.recheck(class2) and \
        all(x in (0, 1, 2) for m in w.matrices.values() for row in m for x in row)
    elapsed = time.perf_counter() - start
    verdict(4, three and four and fails and witness_ok and elapsed < 60,
            f"class-2 on 3x3: {three}; class-3 on 4x4: {four}; class-2 fails on 4x4 with "
            f"small witness: {fails and witness_ok}; {elapsed:.2f}s < 60s")


def test_criterion_05_derivation(capsys, verdict):
    code, records = cli_json(capsys, "derive", "--check", "case8")
    z4 = parse_identity(identities.Z4)
    sides = {r["check"]: r["details"] for r in records}
    ok = code == 0 and sides["derive-case8/left side"] == str(zimin(4)) \
        and sides["derive-case8/right side"] == str(z4.rhs)
    verdict(5, ok, f"both sides byte-identical to Z4 and the parsed right side: {ok}")


def test_criterion_06_rees(verdict):
    crit = rees.abelian_rees_criterion(parse_identity(identities.Z4))
    iso = rees.s101_iso_check()
    corpus = rees.corpus_cross_check(200, seed=0)
    ok = crit.passed and len(crit.parts) == 3 and iso.passed and corpus.passed
    verdict(6, ok, f"criterion: {crit.status}; symbolic iso: {iso.status}; corpus: {corpus.details}")


def test_criterion_07_construction(verdict):
    q = finite.mn_quotient()
    iso = finite.check_iso(q, finite.ta21(), finite.MN_TO_TA21)
    ok = len(q) == 6 and iso.passed and "star preserved" in iso.details
    verdict(7, ok, f"closure has {len(q)} elements; iso to TA21 with star: {iso.status}")


def test_criterion_08_isoterms(verdict):
    ta = finite.ta21()
    results = {(n, length): suites.isoterm_scan(ta, zimin(n), length) for n, length in ((1, 7), (2, 7), (3, 8))}
    scans_ok = all(r.passed for r in results.values())
    refute = finite.holds(ta, parse_identity(identities.Z4))
    refute_ok = refute.status == "fail" and refute.witness is not None
    verdict(8, scans_ok and refute_ok,
            "no partner for " + ", ".join(f"Z{n} (L={length}): {r.passed}" for (n, length), r in results.items())
            + f"; TA21 refutes Z4 with witness: {refute_ok}")


@pytest.mark.parametrize("name, length, expected", [("t2", 12, 8190), ("zeta", 10, 2046)])
def test_criterion_09_freeness(verdict, name, length, expected):
    start = time.perf_counter()
    rep = suites.freeness_scan(suites.FREE_GENERATORS[name], length)
    elapsed = time.perf_counter() - start
    ok = rep.passed and f"{expected} pairwise distinct products" in rep.details
    verdict(9, ok and elapsed < 30, f"{name} at L={length}: {expected} distinct products: {ok}; {elapsed:.2f}s < 30s")


def test_criterion_10_structural(verdict):
    hom = all(triangular.diag_hom_check(3, a).passed for a in (triangular.ALPHABET_01, triangular.ALPHABET_0PM1))
    d = finite.d3_pm()
    idem_ok = len(d) == 27 and len(finite.idempotents(d)) == 8
    emb = triangular.embedding_check().passed
    anomaly = suites.case3_anomaly_check()
    xyx_fails = anomaly.parts[0].passed
    z4_holds = anomaly.parts[1].passed
    verdict(10, hom and idem_ok and emb and xyx_fails and z4_holds,
            f"diag-hom both alphabets: {hom}; 8 idempotents of 27: {idem_ok}; embedding: {emb}; "
            f"xyx=x fails in S010: {xyx_fails}; Z4 holds in S010: {z4_holds}")


def test_criterion_11_determinism(capsys, verdict, tmp_path):
    outputs = {}
    for workers in (1, 3):
        path = tmp_path / f"w{workers}.json"
        main(["paper-suite", "--workers", str(workers), "--format", "structured", "--out", str(path)])
        outputs[workers] = path.read_bytes()
    capsys.readouterr()
    same = outputs[1] == outputs[3]
    verdict(11, same, f"structured paper-suite with 1 and 3 workers byte-identical: {same} "
                      f"({len(outputs[1])} bytes)")
