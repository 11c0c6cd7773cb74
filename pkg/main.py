"""
Rarefied Thue-Morse sums - command-line entry point.

Sub-commands:
  sum KIND B J N           exact f_{b,j}(n) (KIND f) or g_{b,j}(n) (KIND g)
  infer TARGET             guess, verify and save the automaton for f30, mf31, mf32, f50, f51, g30 (or id, zero)
  verify ID|all            run theorem checks, write reports, exit 0 iff every report passes
  query FILE               run a query script against the store-backed environment
  export NAME              write an automaton as DOT or text
  table TARGET             CSV of n, h(n), pseudopower, bound values, h(n)/n^e

Environment Variables (prefix RTM_, also read from .env):
  RTM_OUTPUT_DIR      output directory (default: out)
  RTM_SEED            negative-sample seed (default: 20240607)
  RTM_LOG_LEVEL       logging level (default: INFO)
  RTM_INFER_START / RTM_INFER_CEILING / RTM_INFER_GROWTH
  RTM_SWEEP_BASE4 / RTM_SWEEP_BASE16 / RTM_CONSTANTS_SWEEP / RTM_BND_N_MAX / RTM_TIGHTNESS_K
  RTM_STATE_CAP       largest automaton a construction may build
  RTM_WORKERS         threads for `verify all`

Usage:
  python main.py sum f 3 0 8
  python main.py infer f30
  python main.py verify all --workers 4
"""
from __future__ import annotations

import argparse
import csv
import io
import logging
import math
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

from automata.dfa import live_states
from automata.io import atomic_write, dumps, dumps_dfao, export_dot
from graph import InferenceConfig, VerificationFailed, infer_and_verify
from inference import InferenceError, LearnerConfig
from logic import CompileOptions, ParseError, ScriptRunner, parse
from numeration.digits import NumerationError
from numeration.pseudopower import exponent, pseudopower_array
from numeration.sequences import rarefied_f, rarefied_g
from theorems import (
    SELF_TESTS,
    TARGETS,
    THEOREMS,
    AutomatonStore,
    StoreConfig,
    TheoremContext,
    get_target,
    prelude_environment,
    run_all,
    run_theorem,
    write_report,
)

load_dotenv()
logger = logging.getLogger(__name__)


# ============================================================================
# Configuration
# ============================================================================

class AppConfig(BaseSettings):
    """Application configuration from RTM_* environment variables."""

    model_config = SettingsConfigDict(env_prefix="RTM_", extra="ignore")

    output_dir: Path = Field(Path("out"), description="reports, automata and tables go here")
    seed: int = Field(20240607, description="seed for negative samples and wrong-value sweeps")
    log_level: str = Field("INFO")

    sweep_base4: int = Field(4**7, ge=1)
    sweep_base16: int = Field(16**4, ge=1)
    constants_sweep: int = Field(4**8, ge=1)
    bnd_n_max: int = Field(10**5, ge=1)
    tightness_k: int = Field(10, ge=1)

    infer_start: int = Field(4096, ge=1)
    infer_ceiling: int = Field(2**20, ge=1)
    infer_growth: int = Field(4, ge=2)

    state_cap: int = Field(10**6, ge=1)
    workers: int = Field(1, ge=1)

    def compile_options(self) -> CompileOptions:
        return CompileOptions(state_cap=self.state_cap)

    def inference(self) -> InferenceConfig:
        return InferenceConfig(
            start=self.infer_start,
            ceiling=self.infer_ceiling,
            growth=self.infer_growth,
            seed=self.seed,
            learner=LearnerConfig(seed=self.seed),
            compile=self.compile_options(),
        )

    def store(self) -> AutomatonStore:
        return AutomatonStore(StoreConfig(directory=self.output_dir / "automata", inference=self.inference()))

    def theorem_context(self) -> TheoremContext:
        return TheoremContext(
            store=self.store(),
            sweep_base4=self.sweep_base4,
            sweep_base16=self.sweep_base16,
            constants_sweep=self.constants_sweep,
            bnd_n_max=self.bnd_n_max,
            tightness_k=self.tightness_k,
            seed=self.seed,
        )


# ============================================================================
# Commands
# ============================================================================

def cmd_sum(args: argparse.Namespace, config: AppConfig) -> int:
    fn = rarefied_f if args.kind == "f" else rarefied_g
    print(fn(args.b, args.j, args.n))
    return 0


def cmd_infer(args: argparse.Namespace, config: AppConfig) -> int:
    store = config.store()
    if args.target in SELF_TESTS:
        test = SELF_TESTS[args.target]
        dfa = infer_and_verify(test.name, test.oracle, test.signature, test.verifier, prelude_environment(), config.inference())
    else:
        dfa = store.infer(args.target)
    store.put(args.target, dfa)
    print(f"{args.target}: {live_states(dfa)} states")
    return 0


def cmd_verify(args: argparse.Namespace, config: AppConfig) -> int:
    ctx = config.theorem_context()
    if args.theorem == "all":
        reports = run_all(ctx, args.workers or config.workers)
    else:
        reports = [run_theorem(args.theorem, ctx)]
    for report in reports:
        write_report(report, config.output_dir / "reports")
        sys.stdout.write(report.to_text())
    passed = all(r.passed for r in reports)
    print("PASS" if passed else "FAIL")
    return 0 if passed else 1


def cmd_query(args: argparse.Namespace, config: AppConfig) -> int:
    path = Path(args.script)
    script = parse(path.read_text(encoding="utf-8"))
    runner = ScriptRunner(config.store().environment(), config.compile_options(), base_dir=path.parent)
    report = runner.run(script)
    for line in report.lines():
        print(line)
    ok = report.ok and all(report.verdicts().values())
    return 0 if ok else 1


def cmd_export(args: argparse.Namespace, config: AppConfig) -> int:
    env = config.store().environment()
    automaton = env.dfao(args.name) if env.has_dfao(args.name) else env.automaton(args.name)
    if args.format == "dot":
        text = export_dot(automaton, args.name)
    else:
        text = dumps_dfao(automaton) if env.has_dfao(args.name) else dumps(automaton)
    path = Path(args.output) if args.output else config.output_dir / f"{args.name}.{args.format}"
    atomic_write(path, text)
    print(path)
    return 0


# p_{a,b}(|h(n)|) bounds per target, as functions of n
TABLE_BOUNDS: Dict[str, Tuple[Callable[[np.ndarray], np.ndarray], Callable[[np.ndarray], np.ndarray]]] = {
    "f30": (lambda n: n, lambda n: (3 * n - 1) / 2),
    "mf31": (lambda n: n / 2, lambda n: (3 * n - 1) / 2),
    "mf32": (lambda n: 0 * n, lambda n: (3 * n + 1) / 4),
    "f50": (lambda n: (47 * n + 140) / 176, lambda n: (15 * n - 11) / 4),
    "f51": (lambda n: 0 * n, lambda n: (5 * n - 3) / 2),
    "g30": (lambda n: 0 * n, lambda n: (3 * n + 2) / 4),
}

TABLE_HEADER = ["n", "h", "pseudopower", "lower", "upper", "ratio"]


def bound_table(name: str, n_max: int) -> List[List[str]]:
    target = get_target(name)
    ns = np.arange(n_max + 1, dtype=np.int64)
    h = target.table(ns.size)
    a, b = target.out_system.radix, target.arg_system.radix
    p = pseudopower_array(a, b, np.abs(h))
    e = exponent(b, a)
    lower, upper = TABLE_BOUNDS[name]
    nf = ns.astype(np.float64)
    lo, hi = lower(nf), upper(nf)
    rows = []
    for i in range(ns.size):
        ratio = "" if i == 0 else repr(round(abs(int(h[i])) / math.pow(i, e), 6))
        rows.append([str(i), str(int(h[i])), str(int(p[i])), repr(round(float(lo[i]), 6)), repr(round(float(hi[i]), 6)), ratio])
    return rows


def cmd_table(args: argparse.Namespace, config: AppConfig) -> int:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TABLE_HEADER)
    writer.writerows(bound_table(args.target, args.n_max))
    if args.output:
        atomic_write(Path(args.output), buf.getvalue())
        print(args.output)
    else:
        sys.stdout.write(buf.getvalue())
    return 0


# ============================================================================
# Argument parsing
# ============================================================================

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rtm", description="Rarefied Thue-Morse sums via synchronized automata")
    parser.add_argument("--output-dir", type=Path, help="override RTM_OUTPUT_DIR")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sum", help="exact rarefied sum")
    p.add_argument("kind", choices=["f", "g"])
    p.add_argument("b", type=int)
    p.add_argument("j", type=int)
    p.add_argument("n", type=int)
    p.set_defaults(handler=cmd_sum)

    p = sub.add_parser("infer", help="infer and verify a synchronized automaton")
    p.add_argument("target", choices=[*TARGETS, *SELF_TESTS])
    p.set_defaults(handler=cmd_infer)

    p = sub.add_parser("verify", help="run theorem checks")
    p.add_argument("theorem", choices=[*THEOREMS, "all"])
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("query", help="run a query script")
    p.add_argument("script")
    p.set_defaults(handler=cmd_query)

    p = sub.add_parser("export", help="export an automaton")
    p.add_argument("name")
    p.add_argument("--format", choices=["dot", "txt"], default="dot")
    p.add_argument("--output", default=None)
    p.set_defaults(handler=cmd_export)

    p = sub.add_parser("table", help="CSV table of values and bounds")
    p.add_argument("target", choices=list(TARGETS))
    p.add_argument("--n-max", type=int, default=4**7)
    p.add_argument("--output", default=None)
    p.set_defaults(handler=cmd_table)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    config = AppConfig()
    if args.output_dir is not None:
        config = config.model_copy(update={"output_dir": args.output_dir})
    logging.basicConfig(level=config.log_level.upper(), format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    try:
        return args.handler(args, config)
    except (ParseError, NumerationError, InferenceError, VerificationFailed, KeyError, ValueError, RuntimeError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        logger.error(f"✗ {args.command} failed: {e}")
        return 1


if __name__ == "__main__":
    sys.exit(main())
