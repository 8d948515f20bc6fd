"""Command-line front end: ``ut3check <subcommand> ...``.

Exit status: 0 when every check passes, 1 when one fails, 3 when a check was
aborted at its cap, 2 for bad input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import finite, identities, rees, suites, triangular
from .report import ABORTED, FAIL, PASS, CheckReport, render_structured
from .words import IdentitySyntaxError, parse_word, zimin

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_ABORTED = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _identity(text):
    try:
        return identities.resolve(text)
    except (KeyError, IdentitySyntaxError) as exc:
        raise UsageError(str(exc)) from None


def _alphabet(label):
    return triangular.ALPHABETS[label]


def _semigroup(spec):
    try:
        return finite.resolve(spec)
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot load semigroup {spec!r}: {exc}") from None


def _generators(spec):
    if spec in suites.FREE_GENERATORS:
        return suites.FREE_GENERATORS[spec]
    try:
        return json.loads(Path(spec).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot load generators {spec!r}: {exc}") from None


# -- subcommands ------------------------------------------------------------

def cmd_verify(args) -> list[CheckReport]:
    ident = _identity(args.identity) if args.identity else None
    kind = args.kind
    if kind == "theta-classes":
        ident = ident or _identity("z4")
        if args.patterns:
            try:
                pats = [triangular.parse_pattern(p) for p in args.patterns.split(",")]
            except ValueError as exc:
                raise UsageError(str(exc)) from None
        else:
            pats = triangular.all_patterns(args.dim, _alphabet(args.alphabet))
        rep = triangular.verify_uniform(args.dim, pats, ident, samples=args.samples, seed=args.seed)
        rep.check = "theta-classes"
        return [rep]
    if kind == "mixed":
        ident = ident or _identity("z4new")
        cap = args.cap or triangular.DEFAULT_MIXED_CAP
        return [triangular.verify_mixed(args.dim, _alphabet(args.alphabet), ident, cap=cap, workers=args.workers)]
    if kind == "unitriangular":
        ident = ident or _identity("class2")
        rep = triangular.verify_uniform(args.dim, [(1,) * args.dim], ident, samples=args.samples, seed=args.seed)
        rep.check = f"unitriangular-dim{args.dim}"
        if not rep.passed:
            w = triangular.find_numeric_counterexample(args.dim, (1,), ident, patterns=[(1,) * args.dim],
                                                       uniform=True, workers=args.workers)
            if w is not None:
                rep.witness = {"numeric": w.as_dict()}
        return [rep]
    if kind == "diag-hom":
        return [triangular.diag_hom_check(args.dim, _alphabet(args.alphabet))]
    if kind == "embedding":
        return [triangular.embedding_check()]
    raise UsageError(f"unknown verify target {kind}")


def cmd_check_finite(args):
    s = _semigroup(args.semigroup)
    if args.identity:
        try:
            return [finite.holds(s, _identity(args.identity), workers=args.workers)]
        except finite.SemigroupError as exc:
            raise UsageError(str(exc)) from None
    idem = [s.names[i] for i in finite.idempotents(s)]
    return [CheckReport("check-finite", PASS,
                        f"{len(s)} elements, associative{', with involution' if s.star is not None else ''}; "
                        f"idempotents: {', '.join(idem)}")]


def cmd_rees(args):
    if args.kind == "criterion":
        return [rees.abelian_rees_criterion(_identity(args.identity or "z4"))]
    if args.kind == "iso":
        return [rees.s101_iso_check()]
    return [rees.corpus_cross_check(args.size, args.seed)]


def cmd_derive(args):
    return [suites.derivation_case8()]


def cmd_isoterm(args):
    s = _semigroup(args.semigroup)
    try:
        v = parse_word(args.word) if args.word else zimin(args.zimin)
    except (IdentitySyntaxError, ValueError) as exc:
        raise UsageError(str(exc)) from None
    cap = args.cap or suites.DEFAULT_ISOTERM_CAP
    try:
        return [suites.isoterm_scan(s, v, args.max_len, cap=cap, involutory=False if args.plain else None,
                                    workers=args.workers)]
    except finite.SemigroupError as exc:
        raise UsageError(str(exc)) from None


def cmd_free_scan(args):
    cap = args.cap or suites.DEFAULT_FREENESS_CAP
    return [suites.freeness_scan(_generators(args.generators), args.max_len, cap=cap)]


def cmd_malcev(args):
    return [suites.malcev_witness_report(_alphabet(args.alphabet))]


def cmd_zimin(args):
    if args.n < 1:
        raise UsageError("Zimin words are indexed from 1")
    w = zimin(args.n)
    return [CheckReport(f"zimin-{args.n}", PASS, str(w))]


def cmd_paper_suite(args):
    return suites.paper_suite(workers=args.workers, seed=args.seed)


# -- parser -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workers", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="write the rendered reports here instead of stdout")
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--timing", action="store_true", help="record durations in structured output")
    common.add_argument("--cap", type=int, default=None)

    p = argparse.ArgumentParser(prog="ut3check", description="Identity checks for triangular 0/1-diagonal matrix semigroups.")
    sub = p.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", parents=[common], help="symbolic matrix identity checks")
    v.add_argument("kind", choices=("theta-classes", "mixed", "unitriangular", "diag-hom", "embedding"))
    v.add_argument("--identity")
    v.add_argument("--dim", type=int, default=None)
    v.add_argument("--alphabet", choices=tuple(triangular.ALPHABETS), default="01")
    v.add_argument("--patterns", help="comma-separated diagonal patterns, e.g. 101,010")
    v.add_argument("--samples", type=int, default=0, help="random rational cross-check samples per class")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("check-finite", parents=[common], help="identity checking in a finite semigroup")
    c.add_argument("--semigroup", required=True, help="d3, d3pm, ta21, or a Cayley table JSON file")
    c.add_argument("--identity")
    c.set_defaults(func=cmd_check_finite)

    r = sub.add_parser("rees", parents=[common], help="Rees matrix criterion and isomorphism")
    r.add_argument("kind", choices=("criterion", "iso", "corpus"))
    r.add_argument("--identity")
    r.add_argument("--size", type=int, default=200)
    r.set_defaults(func=cmd_rees)

    d = sub.add_parser("derive", parents=[common], help="syntactic derivation of the Z4 identity")
    d.add_argument("--check", choices=("case8",), default="case8")
    d.set_defaults(func=cmd_derive)

    i = sub.add_parser("isoterm", parents=[common], help="bounded isoterm scan")
    i.add_argument("--semigroup", default="ta21")
    group = i.add_mutually_exclusive_group()
    group.add_argument("--zimin", type=int, default=2)
    group.add_argument("--word")
    i.add_argument("--max-len", type=int, default=7)
    i.add_argument("--plain", action="store_true", help="scan plain words only")
    i.set_defaults(func=cmd_isoterm)

    f = sub.add_parser("free-scan", parents=[common], help="bounded freeness scan")
    f.add_argument("--generators", default="t2", help="t2, zeta, or a JSON file with a list of matrices")
    f.add_argument("--max-len", type=int, default=12)
    f.set_defaults(func=cmd_free_scan)

    m = sub.add_parser("malcev-report", parents=[common], help="Mal'cev product witness")
    m.add_argument("--alphabet", choices=tuple(triangular.ALPHABETS), default="01")
    m.set_defaults(func=cmd_malcev)

    z = sub.add_parser("zimin", parents=[common], help="print a Zimin word")
    z.add_argument("n", type=int)
    z.set_defaults(func=cmd_zimin)

    s = sub.add_parser("paper-suite", parents=[common], help="run every check in one batch")
    s.set_defaults(func=cmd_paper_suite)
    return p


_DEFAULT_DIM = {"theta-classes": 3, "mixed": 2, "unitriangular": 3, "diag-hom": 3, "embedding": 2}


def exit_status(reports: list[CheckReport]) -> int:
    statuses = {r.status for r in reports}
    if ABORTED in statuses:
        return EXIT_ABORTED
    if FAIL in statuses:
        return EXIT_FAIL
    return EXIT_PASS


def summary_table(reports: list[CheckReport]) -> str:
    width = max(len(r.check) for r in reports)
    lines = [f"{'check':<{width}}  status   seconds", "-" * (width + 19)]
    for r in reports:
        secs = f"{r.duration:7.3f}" if r.duration is not None else "      -"
        lines.append(f"{r.check:<{width}}  {r.status:<7}  {secs}")
    npass = sum(r.passed for r in reports)
    lines.append(f"{npass}/{len(reports)} checks pass")
    return "\n".join(lines)


def render(reports, fmt: str, timing: bool, command: str) -> str:
    if fmt == "structured":
        return render_structured(reports, timing)
    text = "\n".join(r.render_text() for r in reports) + "\n"
    if command == "paper-suite":
        text += "\n" + summary_table(reports) + "\n"
    return text


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "dim", "absent") is None:
        args.dim = _DEFAULT_DIM[args.kind]
    try:
        reports = args.func(args)
    except UsageError as exc:
        print(f"ut3check: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except finite.ClosureCapExceeded as exc:
        reports = [CheckReport(args.command, ABORTED, str(exc))]
    out = render(reports, args.format, args.timing, args.command)
    if args.out:
        Path(args.out).write_text(out)
    else:
        sys.stdout.write(out)
    return exit_status(reports)


if __name__ == "__main__":
    sys.exit(main())
