"""Command-line interface: ``cleftgp {validate,build,axioms,gp,criteria,corpus}``.

Exit codes: 0 when every check passes, 1 when a check fails, 2 on input errors.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .algebra import LeftModule
from .cleft import check_cleft_axioms, sample_objects, tmodule_to_pair
from .criteria import (
    COMPAT_FAILURE,
    DEFECT,
    GP,
    INCONCLUSIVE as CRIT_INCONCLUSIVE,
    NECESSARY_ONLY,
    NOT_GP as CRIT_NOT_GP,
    EquivalenceViolation,
    compat_check_q,
    eta_vanishing,
    morita_check,
    quad_to_pair,
    tensorring_necessary,
    classify_pair,
    triangular_check,
    compatibility_by_dimensions,
)
from .exactla import Field
from .fileformat import Document, ParseError, SemanticError, format_algebra, format_field, load, parse
from .gp import WindowError, ab_test, complete_window, default_depth, verify_window
from .report import FAIL, INCONCLUSIVE, PASS, check, dumps, make_report

CORPUS_ENV = "CLEFTGP_CORPUS_DIR"
DEFAULT_WINDOW = 3
EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(ValueError):
    """Bad file, unknown name, or a target of the wrong shape."""


@dataclass
class Outcome:
    report: dict
    code: int


def _code(report: dict) -> int:
    return EXIT_FAIL if report["status"] == FAIL else EXIT_OK


def _finish(command, checks, timing, **extra) -> Outcome:
    rep = make_report(command, checks, timing=timing, **extra)
    return Outcome(rep, _code(rep))


def _input_error(command, exc: Exception) -> Outcome:
    err = {"kind": type(exc).__name__, "message": str(exc)}
    for attr in ("line", "col", "block"):
        if getattr(exc, attr, None) is not None:
            err[attr] = getattr(exc, attr)
    return Outcome(make_report(command, [], status="error", error=err), EXIT_INPUT)


def corpus_dir() -> Path:
    env = os.environ.get(CORPUS_ENV)
    return Path(env) if env else Path(__file__).with_name("corpus")


# -- target resolution -------------------------------------------------------------------

def resolve_module(doc: Document, name: str) -> LeftModule:
    """A named module, pair (as a T-module) or quad (as a module over the context ring)."""
    if name in doc.modules:
        return doc.modules[name]
    if name in doc.pairs:
        return doc.pairs[name].tmodule
    if name in doc.quads:
        return quad_to_pair(doc.quads[name]).tmodule
    raise InputError(f"unknown module {name!r}")


def _extension_of(doc: Document, module: LeftModule):
    for ext in list(doc.extensions.values()) + [c.ext for c in doc.contexts.values()]:
        if module.alg is ext.t:
            return ext
    return None


def _pair_for(doc: Document, name: str):
    if name in doc.pairs:
        return doc.pairs[name]
    if name in doc.modules:
        ext = _extension_of(doc, doc.modules[name])
        if ext is None:
            raise InputError(f"module {name!r} is not over an extension ring")
        return tmodule_to_pair(ext, doc.modules[name], name=name)
    raise InputError(f"{name!r} is not a pair or a module over an extension ring")


# -- commands ----------------------------------------------------------------------------

def cmd_validate(path: str, field: Field | None = None, timing: bool = False) -> Outcome:
    command = ["validate", str(path)]
    t0 = time.perf_counter()
    try:
        text = Path(path).read_text()
    except OSError as exc:
        return _input_error(command, exc)
    try:
        doc = parse(text, field)
    except ParseError as exc:
        return _input_error(command, exc)
    except SemanticError as exc:
        # a block that parses but does not validate is a failed check
        partial = _blocks_before(text, field, exc)
        checks = partial + [check(f"{_kind_at(text, exc.line)}:{exc.block}", FAIL, message=exc.message,
                                  line=exc.line)]
        return _finish(command, checks, _elapsed(t0, timing))
    checks = [check(f"{kind}:{name}", PASS, line=line) for kind, name, line in doc.blocks]
    return _finish(command, checks, _elapsed(t0, timing), field=str(doc.field))


def _blocks_before(text: str, field, exc: SemanticError) -> list[dict]:
    if exc.line is None:
        return []
    head = "\n".join(text.splitlines()[: exc.line - 1])
    try:
        doc = parse(head, field)
    except (ParseError, SemanticError):
        return []
    return [check(f"{kind}:{name}", PASS, line=line) for kind, name, line in doc.blocks]


def _kind_at(text: str, line: int | None) -> str:
    if line is None:
        return "block"
    words = text.splitlines()[line - 1].split()
    return words[0] if words else "block"


def _elapsed(t0: float, timing: bool) -> float | None:
    return time.perf_counter() - t0 if timing else None


def _load(command, path, field) -> Document | Outcome:
    try:
        return load(path, field)
    except (OSError, ParseError, SemanticError) as exc:
        return _input_error(command, exc)


def build_block(doc: Document, ext_name: str) -> str:
    ext = doc.extension_for(ext_name)
    return format_algebra(ext.t, name=f"{ext_name}_T")


def cmd_build(doc: Document, ext_name: str, command, timing=False, append: str | None = None) -> Outcome:
    t0 = time.perf_counter()
    try:
        ext = doc.extension_for(ext_name)
    except KeyError:
        raise InputError(f"unknown extension {ext_name!r}") from None
    block = build_block(doc, ext_name)
    # the emitted block must re-validate on its own
    try:
        again = parse(format_field(doc.field) + block).algebras[f"{ext_name}_T"]
        roundtrip = bool((again.mult == ext.t.mult).all())
    except (ParseError, SemanticError):
        roundtrip = False
    checks = [check("build_T", PASS, dim=ext.t.dim, base_dim=ext.base.dim, bimodule_dim=ext.m.dim),
              check("roundtrip", roundtrip)]
    if append:
        with open(append, "a") as fh:
            fh.write(block)
    return _finish(command, checks, _elapsed(t0, timing), algebra_block=block)


def run_axioms(doc: Document, ext_name: str, sample_size: int, seed: int) -> dict:
    try:
        ext = doc.extension_for(ext_name)
    except KeyError:
        raise InputError(f"unknown extension {ext_name!r}") from None
    pairs, modules = sample_objects(ext, seed, sample_size)
    return check_cleft_axioms(ext, pairs, modules).to_dict()


def cmd_axioms(doc: Document, ext_name: str, sample_size: int, seed: int, command, timing=False) -> Outcome:
    t0 = time.perf_counter()
    res = run_axioms(doc, ext_name, sample_size, seed)
    checks = [check(name, c["passed"] == c["total"], passed=c["passed"], total=c["total"])
              for name, c in res["checks"].items()]
    return _finish(command, checks, _elapsed(t0, timing), failures=res["failures"],
                   sample_size=sample_size, seed=seed)


def run_gp(doc: Document, name: str, depth: int | None, window: int = DEFAULT_WINDOW) -> list[dict]:
    x = resolve_module(doc, name)
    verdict = ab_test(x, depth)
    checks = [check("oracle", PASS, verdict=verdict.label(), reason=verdict.reason, depth=verdict.depth,
                    evidence=verdict.evidence, witness=verdict.witness)]
    if verdict.positive:
        try:
            w = complete_window(x, window)
            v = verify_window(w)
            checks.append(check("window", v["ok"], degrees=list(w.degrees), term_dims=[t.dim for t in w.terms],
                                homology=v["homology"], dual_homology=v["dual_homology"]))
        except WindowError as exc:
            checks.append(check("window", FAIL, message=str(exc), witness=exc.witness))
    return checks


def cmd_gp(doc: Document, name: str, depth: int | None, command, timing=False,
           window: int = DEFAULT_WINDOW) -> Outcome:
    t0 = time.perf_counter()
    return _finish(command, run_gp(doc, name, depth, window), _elapsed(t0, timing))


def _verdict_result(verdict: str) -> str:
    if verdict == DEFECT:
        return FAIL
    if verdict == CRIT_INCONCLUSIVE:
        return INCONCLUSIVE
    return PASS


def run_criteria(doc: Document, target: str, depth: int | None, compat_asserted: bool) -> tuple[str, list[dict]]:
    """Dispatch by target shape; return the overall verdict and the checks."""
    checks = []
    if target in doc.quads:
        q = doc.quads[target]
        ctx = q.ctx
        pair = quad_to_pair(q)
        if ctx.triangular:
            z = compatibility_by_dimensions(ctx, depth or default_depth(ctx.a))
            asserted = compat_asserted or z["compatible"]
            checks.append(check("compatibility", PASS, **z))
            tri = triangular_check(q, depth)
            try:
                rep = classify_pair(pair, depth=depth, compat_asserted=asserted)
            except EquivalenceViolation as exc:
                return DEFECT, checks + [check("quotient_sequence_equivalence", FAIL, message=str(exc))]
            checks.append(check("quotient_sequence_equivalence", PASS))
            checks.append(check("triangular", tri.get("agree", True), **tri))
            verdict = rep.logic_verdict
            checks.append(check("classification", _verdict_result(verdict), verdict=verdict, **rep.to_dict()))
            return verdict, checks
        try:
            res = morita_check(q, depth)
        except EquivalenceViolation as exc:
            return DEFECT, [check("quotient_sequence_equivalence", FAIL, message=str(exc))]
        checks.append(check("quotient_sequence_equivalence", PASS))
        checks.append(check("morita", _verdict_result(res["verdict"]), **res))
        return res["verdict"], checks
    p = _pair_for(doc, target)
    ez = eta_vanishing(p.ext)
    checks.append(check("eta", PASS, **ez))
    try:
        rep = classify_pair(p, depth=depth, compat_asserted=compat_asserted)
    except EquivalenceViolation as exc:
        return DEFECT, checks + [check("quotient_sequence_equivalence", FAIL, message=str(exc))]
    checks.append(check("quotient_sequence_equivalence", PASS))
    checks.append(check("classification", _verdict_result(rep.logic_verdict), verdict=rep.logic_verdict,
                        **rep.to_dict()))
    if not ez["eta_zero"]:
        nec = tensorring_necessary(p, depth)
        checks.append(check("tensor_ring_necessary", PASS, **nec))
        return NECESSARY_ONLY, checks
    return rep.logic_verdict, checks


def cmd_criteria(doc: Document, target: str, depth: int | None, compat_asserted: bool, command,
                 timing=False) -> Outcome:
    t0 = time.perf_counter()
    verdict, checks = run_criteria(doc, target, depth, compat_asserted)
    return _finish(command, checks, _elapsed(t0, timing), verdict=verdict)


# -- expectations and the corpus runner -------------------------------------------------

def evaluate_expectation(doc: Document, exp, seed: int, sample_size: int, depth: int | None) -> str:
    """Observed value for an ``expect`` line, in the vocabulary of that line."""
    kind, target = exp.command, exp.target
    if kind == "build":
        ext = doc.extension_for(target)
        ref = doc.algebras[exp.value]
        same = ext.t.dim == ref.dim and bool((ext.t.mult == ref.mult).all()) and bool(
            (ext.t.unit == ref.unit).all())
        return exp.value if same else "mismatch"
    if kind == "axioms":
        return PASS if run_axioms(doc, target, sample_size, seed)["ok"] else FAIL
    if kind == "eta":
        return "zero" if eta_vanishing(doc.extension_for(target))["eta_zero"] else "nonzero"
    if kind == "gp":
        return ab_test(resolve_module(doc, target), depth).status
    if kind == "criteria":
        return run_criteria(doc, target, depth, False)[0]
    if kind == "compat_q":
        p = _pair_for(doc, target)
        w = complete_window(p.tmodule, DEFAULT_WINDOW)
        return PASS if compat_check_q(w, p.ext, DEFAULT_WINDOW)["ok"] else FAIL
    if kind == "compatibility":
        ctx = doc.contexts[target]
        return "compatible" if compatibility_by_dimensions(ctx, depth or default_depth(ctx.a))["compatible"] else "incompatible"
    raise InputError(f"unknown expectation kind {kind!r} (line {exp.line})")


def run_example(path: str, field: Field | None, seed: int, sample_size: int, depth: int | None) -> dict:
    name = Path(path).stem
    command = ["corpus", name]
    try:
        doc = load(path, field)
    except (ParseError, SemanticError) as exc:
        return _input_error(command, exc).report
    checks = [check("validate", PASS, blocks=len(doc.blocks))]
    for exp in doc.expectations:
        try:
            got = evaluate_expectation(doc, exp, seed, sample_size, depth)
        except (InputError, KeyError) as exc:
            checks.append(check(f"{exp.command}:{exp.target}", FAIL, expected=exp.value, error=str(exc)))
            continue
        checks.append(check(f"{exp.command}:{exp.target}", got == exp.value, expected=exp.value, observed=got))
    return make_report(command, checks, seed=seed, sample_size=sample_size)


def _run_example_args(args):
    return run_example(*args)


def cmd_corpus(out_dir: str | None, field: Field | None, seed: int, sample_size: int, depth: int | None,
               jobs: int = 1, timing: bool = False) -> Outcome:
    t0 = time.perf_counter()
    files = sorted(corpus_dir().glob("*.cgp"))
    work = [(str(f), field, seed, sample_size, depth) for f in files]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_run_example_args, work))
    else:
        reports = [_run_example_args(w) for w in work]
    summary_checks = [check(Path(f).stem, r["status"] == PASS, status=r["status"]) for f, r in zip(files, reports)]
    summary = make_report(["corpus"], summary_checks, timing=_elapsed(t0, timing), seed=seed,
                          sample_size=sample_size)
    if out_dir:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        for f, r in zip(files, reports):
            (out / f"{Path(f).stem}.json").write_text(dumps(r))
        (out / "summary.json").write_text(dumps(summary))
    summary["examples"] = {Path(f).stem: r for f, r in zip(files, reports)}
    code = EXIT_OK if summary["status"] == PASS else (
        EXIT_INPUT if any(r["status"] == "error" for r in reports) else EXIT_FAIL)
    return Outcome(summary, code)


# -- argument parsing --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", type=int, default=None, help="override the file's prime field")
    common.add_argument("--depth", type=int, default=None, help="homological depth for bounded checks")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled objects")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")
    common.add_argument("--timing", action="store_true", help="include wall-clock timing in reports")

    ap = argparse.ArgumentParser(prog="cleftgp", description="Exact checks for Gorenstein projectivity over cleft extensions.",
                                 epilog=__doc__.splitlines()[2])
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("validate", parents=[common], help="load and validate every block")
    p.add_argument("file")

    p = sub.add_parser("build", parents=[common], help="emit the algebra block of an extension ring")
    p.add_argument("file")
    p.add_argument("extension")
    p.add_argument("--append", default=None, metavar="PATH", help="append the emitted block to this file")

    p = sub.add_parser("axioms", parents=[common], help="check the cleft-extension axioms on samples")
    p.add_argument("file")
    p.add_argument("extension")
    p.add_argument("--sample-size", type=int, default=25, help="objects sampled per axiom check")

    p = sub.add_parser("gp", parents=[common], help="run the Gorenstein-projectivity oracle")
    p.add_argument("file")
    p.add_argument("module", help="a module, pair or quad name")
    p.add_argument("--window", type=int, default=DEFAULT_WINDOW, help="half-length of the complete window")

    p = sub.add_parser("criteria", parents=[common], help="evaluate the structural criteria")
    p.add_argument("file")
    p.add_argument("target", help="a pair, a quad, or a module over an extension ring")
    p.add_argument("--compat-asserted", action="store_true",
                   help="treat the extension as compatible when choosing the verdict logic")

    p = sub.add_parser("corpus", parents=[common], help=f"run every bundled example (override with ${CORPUS_ENV})")
    p.add_argument("--sample-size", type=int, default=25, help="objects sampled per axiom check")
    p.add_argument("--jobs", type=int, default=1, help="worker processes")
    return ap


def dispatch(args: argparse.Namespace) -> Outcome:
    try:
        field = Field(args.field) if args.field is not None else None
    except ValueError as exc:
        return _input_error([args.cmd], exc)
    if args.cmd == "validate":
        return cmd_validate(args.file, field, args.timing)
    if args.cmd == "corpus":
        return cmd_corpus(args.out, field, args.seed, args.sample_size, args.depth, args.jobs, args.timing)
    target = getattr(args, "extension", None) or getattr(args, "module", None) or getattr(args, "target", None)
    command = [args.cmd, args.file, target]
    doc = _load(command, args.file, field)
    if isinstance(doc, Outcome):
        return doc
    try:
        if args.cmd == "build":
            return cmd_build(doc, args.extension, command, args.timing, args.append)
        if args.cmd == "axioms":
            return cmd_axioms(doc, args.extension, args.sample_size, args.seed, command, args.timing)
        if args.cmd == "gp":
            return cmd_gp(doc, args.module, args.depth, command, args.timing, args.window)
        return cmd_criteria(doc, args.target, args.depth, args.compat_asserted, command, args.timing)
    except (InputError, ValueError) as exc:
        return _input_error(command, exc)


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    outcome = dispatch(args)
    text = dumps(outcome.report)
    if args.out and args.cmd != "corpus":
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return outcome.code


__all__ = ["main", "build_parser", "dispatch", "Outcome", "InputError", "cmd_validate", "cmd_build", "cmd_axioms",
           "cmd_gp", "cmd_criteria", "cmd_corpus", "run_criteria", "run_gp", "run_axioms", "run_example",
           "evaluate_expectation", "corpus_dir", "CORPUS_ENV"]
