"""Command-line front end.  Every run prints (or writes) one JSON document.

Exit codes: 0 success, 1 a check was refuted, 2 inconclusive, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict, dataclass
from fractions import Fraction

from .rewrite import DEFAULT_BUDGET
from .rootdata import RootDatum, RootDatumError
from .scalars import DEFAULT_TRUNCATION, ONE, ScalarParseError, format_scalar, parse_scalar
from .suites import seconds_text

SCHEMA_VERSION = 1
EXIT_OK, EXIT_REFUTED, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 64

IDENTITY_SUITES = ("appendix-a", "lemma-A2", "lemma-4.2", "appendix-bc-chains", "qbracket-free")
DEFAULT_WINDOWS = {"verify-relations": 2, "verify-identities": 2, "natural-module": 3, "loop": 4}


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    M: int
    N: int
    window: int
    trunc: int = DEFAULT_TRUNCATION
    budget: int = DEFAULT_BUDGET
    param: str = "1"
    b: str = "0"
    suite: str | None = None
    jobs: int = 1
    relation_window: int = 2
    trivial: bool = False
    corrupt: bool = False

    def validate(self) -> None:
        if self.M < 1 or self.N < 1:
            raise UsageError("M and N must be positive")
        if self.M == self.N == 1:
            raise UsageError("M = N = 1 is not supported")
        if self.window < 0:
            raise UsageError("window must be >= 0")
        if self.trunc < 1:
            raise UsageError("truncation must be >= 1")
        if self.budget < 1:
            raise UsageError("budget must be positive")
        if self.relation_window < 0:
            raise UsageError("relation window must be >= 0")
        if not self.param_value():
            raise UsageError("evaluation parameter must be nonzero")
        self.b_value()

    def param_value(self):
        try:
            return parse_scalar(self.param)
        except (ScalarParseError, ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad --param {self.param!r}: {exc}") from None

    def b_value(self) -> Fraction:
        try:
            return Fraction(self.b)
        except (ValueError, ZeroDivisionError) as exc:
            raise UsageError(f"bad --b {self.b!r}: {exc}") from None

    def header(self) -> dict:
        out = {k: v for k, v in asdict(self).items() if v is not None}
        return out


def _root(cfg: RunConfig) -> RootDatum:
    try:
        return RootDatum(cfg.M, cfg.N)
    except RootDatumError as exc:
        raise UsageError(str(exc)) from None


# ----------------------------------------------------------------------
# commands
# ----------------------------------------------------------------------

def _run_instances(cfg: RunConfig, rd: RootDatum, instances, timing: bool) -> tuple:
    from .modules import build_natural_evaluation_module, check_identities_on_module
    from .suites import run_suite

    t0 = time.perf_counter_ns()
    results = run_suite(instances, rd, budget=cfg.budget, jobs=cfg.jobs)
    proved = [inst for inst, r in zip(instances, results) if r.proved]
    # soundness: every Proved identity must hold on the natural modules
    refuted = []
    for a in (ONE, parse_scalar("q")):
        mod = build_natural_evaluation_module(rd, a, window=1)
        rep = check_identities_on_module(mod, proved)
        refuted += [f"{c.name}@a={format_scalar(a)}" for c in rep.failures]
    inconclusive = [r.name for r in results if not r.proved]
    body = {
        "instances": len(results),
        "proved": len(proved),
        "inconclusive": inconclusive,
        "soundness": {"modules": ["natural(a=1)", "natural(a=q)"], "checked": len(proved), "refuted": refuted},
        "results": [r.to_json(timing) for r in results],
    }
    if timing:
        body["elapsed"] = seconds_text(time.perf_counter_ns() - t0)
    if refuted:
        code = EXIT_REFUTED
    elif inconclusive:
        code = EXIT_INCONCLUSIVE
    else:
        code = EXIT_OK
    return code, body


def cmd_verify_relations(cfg: RunConfig, timing: bool = False) -> tuple:
    from .suites import definition_relations

    rd = _root(cfg)
    return _run_instances(cfg, rd, definition_relations(rd, cfg.window), timing)


def cmd_verify_identities(cfg: RunConfig, timing: bool = False, corpus: str | None = None) -> tuple:
    from .suites import Instance, build_suite

    rd = _root(cfg)
    if corpus is not None:
        instances = _read_corpus(corpus, rd)
    else:
        if cfg.suite not in IDENTITY_SUITES:
            raise UsageError(f"unknown suite {cfg.suite!r}; choose from {', '.join(IDENTITY_SUITES)}")
        instances = build_suite(cfg.suite, rd, cfg.window)
    return _run_instances(cfg, rd, instances, timing)


def _read_corpus(path: str, rd: RootDatum) -> list:
    from .expr import ExprParseError, parse_identity
    from .suites import Instance

    out = []
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read corpus: {exc}") from None
    for k, line in enumerate(lines, 1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        try:
            lhs, rhs = parse_identity(text, rd)
        except (ExprParseError, ValueError) as exc:
            raise UsageError(f"{path}:{k}: {exc}") from None
        out.append(Instance(f"corpus[line={k}]", lhs, rhs, "corpus"))
    return out


def _vec(v) -> list:
    return [format_scalar(x) for x in v]


def cmd_natural_module(cfg: RunConfig, timing: bool = False) -> tuple:
    from .drinfeld import (DependenceNotFound, NoMatch, extract_drinfeld_data, highest_weight_report,
                           phi_series_from_brackets, phi_eigenseries, round_trip)
    from .lemmas import verify_lemma_instances
    from .modules import (ModuleError, ModuleRelationError, build_natural_evaluation_module,
                          check_relations_on_module, find_highest_weight_vectors, integrability_report,
                          trivial_module)

    rd = _root(cfg)
    t0 = time.perf_counter_ns()
    body: dict = {}
    if cfg.trivial:
        mod = trivial_module(rd)
        gate = check_relations_on_module(mod, cfg.window)
    else:
        try:
            mod = build_natural_evaluation_module(rd, cfg.param_value(), window=cfg.window, corrupt=cfg.corrupt)
        except ModuleRelationError as exc:
            body["module"] = {"label": "natural-corrupt" if cfg.corrupt else "natural", "dim": rd.M + rd.N}
            body["gate"] = exc.report.to_json()
            body["error"] = str(exc)
            return EXIT_REFUTED, body
        gate = mod.gate
    body["module"] = mod.to_json()
    body["gate"] = gate.to_json()
    integ = integrability_report(mod, cfg.window)
    body["integrability"] = integ.to_json()
    hw = find_highest_weight_vectors(mod, 1)
    body["highest_weight"] = {"window": 1, "lines": len(hw), "vectors": [_vec(v) for v in hw]}
    code = EXIT_OK if gate.passed and integ.integrable else EXIT_REFUTED
    data_out = []
    for v in hw:
        try:
            data = extract_drinfeld_data(mod, v, cfg.trunc)
        except (NoMatch, DependenceNotFound) as exc:
            data_out.append({"vector": _vec(v), "error": str(exc)})
            if code == EXIT_OK:
                code = EXIT_INCONCLUSIVE
            continue
        except ModuleError as exc:
            data_out.append({"vector": _vec(v), "error": str(exc)})
            code = EXIT_REFUTED
            continue
        rt = round_trip(mod, v, data)
        direct = {}
        for i in rd.index_set:
            direct[str(i)] = all(phi_eigenseries(mod, i, s, v, cfg.trunc) == phi_series_from_brackets(mod, i, s, v, cfg.trunc)
                                 for s in (1, -1))
        entry = {
            "vector": _vec(v),
            "drinfeld": data.to_json(),
            "report": highest_weight_report(mod, v, data).to_json(),
            "round_trip": {str(i): {"zero": a, "infinity": b} for i, (a, b) in sorted(rt.items())},
            "phi_log_vs_brackets": direct,
        }
        if not all(a and b for a, b in rt.values()) or not all(direct.values()):
            code = EXIT_REFUTED
        data_out.append(entry)
    body["drinfeld_data"] = data_out
    body["lemma_instances"] = [r.to_json() for r in verify_lemma_instances(mod, min(cfg.window, 2))]
    if any(r["status"] == "fail" for r in body["lemma_instances"]):
        code = EXIT_REFUTED
    if timing:
        body["elapsed"] = seconds_text(time.perf_counter_ns() - t0)
    return code, body


def cmd_loop(cfg: RunConfig, timing: bool = False) -> tuple:
    from .loop import (InconclusiveWindow, build_loop_module, check_evaluation_map, check_relations_on_loop_module,
                       hw_vector_in_component, loop_decompose)
    from .modules import build_natural_evaluation_module, find_highest_weight_vectors, trivial_module

    rd = _root(cfg)
    t0 = time.perf_counter_ns()
    V = trivial_module(rd) if cfg.trivial else build_natural_evaluation_module(rd, cfg.param_value(), window=1)
    w = cfg.window
    lm = build_loop_module(V, cfg.b_value(), (-w, w))
    body: dict = {"loop_module": lm.to_json(),
                  "d_exponents": [{"slice": s, "exponent": lm.d_exponent_text(s)} for s in lm.slices]}
    try:
        rel = check_relations_on_loop_module(lm, cfg.relation_window)
        hw = find_highest_weight_vectors(V, 1)
        if len(hw) != 1:
            body["error"] = f"base module has {len(hw)} highest weight lines; need exactly one"
            return EXIT_INCONCLUSIVE, body
        dec = loop_decompose(lm, hw[0])
    except InconclusiveWindow as exc:
        body["error"] = str(exc)
        body["status"] = "inconclusive: window"
        return EXIT_INCONCLUSIVE, body
    body["relations"] = rel.to_json()
    body["decomposition"] = dec.to_json(V.dim)
    comps = []
    ok = rel.passed and body["decomposition"]["direct_sum"]
    for c in dec.components:
        if c.start not in dec.interior:
            continue
        ev = check_evaluation_map(lm, c, dec.interior)
        found = hw_vector_in_component(lm, c, dec.interior, 2)
        entry = {"residue": c.residue, "evaluation_map": ev,
                 "hw_vector": None if found is None else {"slice": found[0], "vector": _vec(found[1])}}
        comps.append(entry)
        ok = ok and ev["intertwines"] and ev["full_rank"] and found is not None
    body["components"] = comps
    if timing:
        body["elapsed"] = seconds_text(time.perf_counter_ns() - t0)
    if not rel.conclusive:
        return EXIT_INCONCLUSIVE, body
    return (EXIT_OK if ok else EXIT_REFUTED), body


# ----------------------------------------------------------------------
# argument parsing
# ----------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qasa", description="Exact computations in the Drinfeld loop presentation of U_q(sl^(M|N)).")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("--m", type=int, default=1, help="M (default 1)")
        sp.add_argument("--n", type=int, default=2, help="N (default 2)")
        sp.add_argument("--window", type=int, default=None, help="loop-index window")
        sp.add_argument("--trunc", type=int, default=DEFAULT_TRUNCATION, help="series truncation order T")
        sp.add_argument("--budget", type=int, default=None, help="rewrite step budget (env QASA_BUDGET)")
        sp.add_argument("--param", default="1", help="evaluation parameter a, e.g. 'q^2'")
        sp.add_argument("--b", default="0", help="loop shift b, an exact rational such as 1/2")
        sp.add_argument("--jobs", type=int, default=1, help="worker processes for suites")
        sp.add_argument("--json-out", default=None, help="write the report here instead of stdout")
        sp.add_argument("--timing", action="store_true", help="include wall-clock times (breaks byte equality)")

    sp = sub.add_parser("verify-relations", help="reduce every defining relation instance")
    common(sp)
    sp = sub.add_parser("verify-identities", help="prove a named identity suite")
    common(sp)
    sp.add_argument("--suite", default="appendix-a", help=", ".join(IDENTITY_SUITES))
    sp.add_argument("--corpus", default=None, help="file of 'LHS == RHS' lines instead of a suite")
    sp = sub.add_parser("natural-module", help="natural evaluation module and its Drinfeld data")
    common(sp)
    sp.add_argument("--trivial", action="store_true", help="use the trivial module instead")
    sp.add_argument("--corrupt", action="store_true", help="flip the sign of X^-_1 (gate mutation test)")
    sp = sub.add_parser("loop", help="quantum loop module of the natural module")
    common(sp)
    sp.add_argument("--relation-window", type=int, default=2, help="loop indices for the relation check")
    sp.add_argument("--trivial", action="store_true", help="use the trivial module as base")
    return p


def _budget(args) -> int:
    if args.budget is not None:
        return args.budget
    env = os.environ.get("QASA_BUDGET")
    if env:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"QASA_BUDGET must be an integer, got {env!r}") from None
    return DEFAULT_BUDGET


def config_from_args(args) -> RunConfig:
    window = args.window if args.window is not None else DEFAULT_WINDOWS[args.command]
    cfg = RunConfig(
        command=args.command, M=args.m, N=args.n, window=window, trunc=args.trunc, budget=_budget(args),
        param=args.param, b=args.b, suite=getattr(args, "suite", None), jobs=max(1, args.jobs),
        relation_window=getattr(args, "relation_window", 2), trivial=getattr(args, "trivial", False),
        corrupt=getattr(args, "corrupt", False),
    )
    cfg.validate()
    return cfg


COMMANDS = {
    "verify-relations": cmd_verify_relations,
    "verify-identities": cmd_verify_identities,
    "natural-module": cmd_natural_module,
    "loop": cmd_loop,
}


def render(cfg: RunConfig, code: int, body: dict) -> str:
    doc = {"schema_version": SCHEMA_VERSION, "config": cfg.header(), "exit_code": code}
    doc.update(body)
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
        fn = COMMANDS[cfg.command]
        if cfg.command == "verify-identities":
            code, body = fn(cfg, args.timing, getattr(args, "corpus", None))
        else:
            code, body = fn(cfg, args.timing)
    except UsageError as exc:
        print(f"qasa: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = render(cfg, code, body)
    if args.json_out:
        with open(args.json_out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
