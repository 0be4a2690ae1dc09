"""
Project: Turán Workbench - exact simplicial Turán computations at desk scale
File: app.py
Description:
    This is the Central Hub (Entry Point) of the workbench.
    It is responsible for:
    1. Loading configuration (settings.ini, suites.toml, optional .env).
    2. Wiring the services (cliques, containment, analysis, extremal search, verification).
    3. Dispatching the command-line surface to them and emitting results.
    4. Mapping failures to the exit-code contract: 0 pass, 1 failure, 2 usage or
       input error, 3 budget exhausted.
"""

import argparse
import configparser
import json
import logging
import os
import sys

from dotenv import find_dotenv, load_dotenv

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

import core.canonical as canonical
from context.cache_manager import CacheManager
from core.errors import InvalidStructureError, TuranError, UnsupportedSizeError
from core.hypergraph import Complex, UniformHypergraph, downward_closure, edge_counts
from services.analysis_service import AnalysisService
from services.clique_service import CliqueService
from services.containment_service import ContainmentService
from services.extremal_service import LOWER_BOUND_ONLY, ExtremalService
from services.verify_service import VerifyService
from tools import constructions as cons
from tools.formulas import REGISTRY
from utils.file_handler import FORMATS, FileLoader, emit

# ==========================================
# Observability & Logging Configuration
# ==========================================
logging.basicConfig(level=logging.WARNING, format='%(asctime)s - %(message)s')
logging.getLogger("networkx").setLevel(logging.ERROR)

logger = logging.getLogger("App")

SERVICE_LOGGERS = (
    "CliqueService",
    "ContainmentService",
    "AnalysisService",
    "ExtremalService",
    "VerifyService",
    "CacheManager",
    "SearchContext",
    "Constructions",
    "Canonical",
    "FileLoader",
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


def configure_logging(verbose: bool) -> None:
    level = logging.DEBUG if verbose else logging.INFO
    logger.setLevel(level)
    for name in SERVICE_LOGGERS:
        logging.getLogger(name).setLevel(level)


# ==========================================
# Configuration Helpers
# ==========================================
def load_settings(ini_path=None):
    """Loads limits, search defaults and cache location from the INI file (missing file = code defaults)."""
    load_dotenv(find_dotenv(usecwd=True))
    ini_path = ini_path or os.getenv("TURAN_SETTINGS", "settings.ini")
    config = configparser.ConfigParser()
    if os.path.exists(ini_path):
        config.read(ini_path, encoding='utf-8')
    else:
        logger.warning(f"Settings file not found: {ini_path}; using defaults")
    for section in ("Limits", "Search", "Cache", "Output"):
        if not config.has_section(section):
            config.add_section(section)
    return config


def load_suites(file_path="suites.toml"):
    """Loads verify-suite defaults and the known-deviation table from TOML."""
    if not os.path.exists(file_path):
        logger.warning(f"Suite file not found: {file_path}")
        return {}
    try:
        with open(file_path, "rb") as f:
            return tomllib.load(f)
    except Exception as e:
        logger.error(f"Failed to parse suites: {e}")
        return {}


def _pick(flag, config: configparser.ConfigParser, section: str, key: str, fallback, cast=int):
    """Command-line flag > INI value > code default."""
    if flag is not None:
        return flag
    if cast is bool:
        return config.getboolean(section, key, fallback=fallback)
    return cast(config.get(section, key, fallback=str(fallback)))


# ==========================================
# Argument Parsing
# ==========================================
def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=None, help="Output format")
    common.add_argument("--out", default=None, help="Write output to this file")
    common.add_argument("--time-limit", type=float, default=None, help="Seconds per search (0 = unlimited)")
    common.add_argument("--threads", type=int, default=None, help="Worker processes")
    common.add_argument("--seed", type=int, default=None, help="Seed for randomized suites")
    common.add_argument("--no-cache", action="store_true", help="Bypass the result cache")
    common.add_argument("--cache-file", default=None, help="JSON-lines cache file")
    common.add_argument("--snapshot-dir", default=None, help="Dump each search's merged task state here")
    common.add_argument("--settings", default=None, help="Alternative settings.ini")
    common.add_argument("--verbose", action="store_true", help="Debug logging")

    parser = argparse.ArgumentParser(prog="turan", description="Exact simplicial Turán computations at desk scale.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("construct", parents=[common], help="Print a named construction")
    p.add_argument("name")
    p.add_argument("--closure", action="store_true", help="Close uniform constructions downward")

    p = sub.add_parser("closure", parents=[common], help="Edge counts of a downward closure")
    p.add_argument("source", help="File or pattern name")

    p = sub.add_parser("cliques", parents=[common], help="Clique counts of a k-uniform hypergraph")
    p.add_argument("source")
    p.add_argument("--min-order", type=int, default=1)

    p = sub.add_parser("contains", parents=[common], help="Complex (or Berge) containment")
    p.add_argument("host")
    p.add_argument("pattern")
    p.add_argument("--berge", action="store_true", help="Berge containment of a uniform pattern")

    p = sub.add_parser("analyze", parents=[common], help="Structural predicates and peeling")
    p.add_argument("mode", choices=("degenerate", "full", "peel", "profile"))
    p.add_argument("source")
    p.add_argument("--l", dest="ell", type=int, default=2)
    p.add_argument("--r", dest="order", type=int, default=None)

    p = sub.add_parser("ex", parents=[common], help="ex(n,F) for a pattern complex")
    p.add_argument("pattern")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--strategy", choices=("auto", "exhaustive", "bnb"), default="auto")

    p = sub.add_parser("ex-cliques", parents=[common], help="Maximum clique count over forbidden-free k-graphs")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--forbidden", action="append", default=[], help="Forbidden k-graph (repeatable)")
    p.add_argument("--forbidden-complex", default=None, help="Exclude hosts whose closure contains this complex")
    p.add_argument("--mode", choices=("all", "geq_k"), default="geq_k")
    p.add_argument("--strategy", choices=("auto", "exhaustive", "bnb"), default="auto")

    p = sub.add_parser("ex-copies", parents=[common], help="Generalized Turán number ex_k(n,T,H)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--forbidden", action="append", required=True)
    p.add_argument("--strategy", choices=("auto", "exhaustive", "bnb"), default="auto")

    p = sub.add_parser("formula", parents=[common], help="Evaluate a closed form")
    p.add_argument("name", choices=sorted(REGISTRY))
    p.add_argument("params", nargs="*", help="Positional values or key=value pairs")

    p = sub.add_parser("verify", parents=[common], help="Run a verification suite")
    p.add_argument("suite")
    p.add_argument("--max-n", type=int, default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--t", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--n-range", default=None, help="a..b")
    p.add_argument("--n-values", default=None, help="Comma-separated n values")
    p.add_argument("--cases", type=int, default=None)
    p.add_argument("--param", action="append", default=[], help="Extra key=value suite parameter")
    return parser


# ==========================================
# Workbench wiring
# ==========================================
class Workbench:
    """
    Services bound to one configuration.

    Args:
        args: Parsed command-line namespace.
        config: Settings from settings.ini.
        suites: Parsed suites.toml.
    """

    def __init__(self, args, config, suites):
        self.args = args
        self.config = config
        self.suites = suites
        self.files = FileLoader()

        canonical.canonical_max_n = _pick(None, config, "Limits", "canonical_max_n", canonical.DEFAULT_CANONICAL_MAX_N)
        self.full_closure_max_n = _pick(None, config, "Limits", "full_closure_max_n", 20)
        time_limit = _pick(args.time_limit, config, "Search", "time_limit", 0, float)
        threads = _pick(args.threads, config, "Search", "threads", 1)

        cache_enabled = _pick(None, config, "Cache", "enabled", True, bool) and not args.no_cache
        cache_file = args.cache_file or config.get("Cache", "cache_file", fallback="results/cache.jsonl")
        self.cache = CacheManager(cache_file, enabled=cache_enabled)

        self.cliques = CliqueService(workers=threads)
        self.containment = ContainmentService(
            max_pattern=_pick(None, config, "Limits", "containment_max_pattern", 12),
            berge_max_edges=_pick(None, config, "Limits", "berge_max_edges", 8),
            time_limit=time_limit,
        )
        self.analysis = AnalysisService(ordering_max_edges=_pick(None, config, "Limits", "ordering_max_edges", 12))
        self.extremal = ExtremalService(
            threads=threads,
            split_depth=_pick(None, config, "Search", "split_depth", 6),
            time_limit=time_limit,
            exhaustive_max_candidates=_pick(None, config, "Search", "exhaustive_max_candidates", 21),
            cache=self.cache,
            snapshot_dir=args.snapshot_dir or config.get("Search", "snapshot_dir", fallback=""),
        )
        self.verifier = VerifyService(self.extremal, suites, self.containment, self.analysis)
        self.format = args.format or config.get("Output", "default_format", fallback="table")

    # ------------------------------------------------------------------
    def load(self, source: str):
        """A file path (text format) or a pattern name."""
        if os.path.exists(source):
            return self.files.load_any(source)
        return cons.build(source)

    def load_uniform(self, source: str) -> UniformHypergraph:
        obj = self.load(source)
        if not isinstance(obj, UniformHypergraph):
            raise InvalidStructureError(f"{source} is a complex; a k-uniform hypergraph is required")
        return obj

    def load_complex(self, source: str) -> Complex:
        obj = self.load(source)
        return obj if isinstance(obj, Complex) else downward_closure(obj)

    def output(self, obj) -> None:
        text = emit(obj, self.format)
        if self.args.out:
            self.files.save(text, self.args.out)
        else:
            sys.stdout.write(text)


# ==========================================
# Command handlers
# ==========================================
def cmd_construct(bench: Workbench, args) -> int:
    obj = cons.named_complex(args.name) if args.closure else cons.build(args.name)
    bench.output(obj)
    return EXIT_OK


def cmd_closure(bench: Workbench, args) -> int:
    c = bench.load_complex(args.source)
    if c.n > bench.full_closure_max_n:
        raise UnsupportedSizeError(f"closure counts limited to n <= {bench.full_closure_max_n}, got n={c.n}")
    counts = edge_counts(c)
    bench.output({
        "n": c.n,
        "dimension": c.dimension,
        "generators": len(c.generator_masks),
        "total": counts.total,
        "by_size": counts.by_size,
        "at_least": counts.at_least,
    })
    return EXIT_OK


def cmd_cliques(bench: Workbench, args) -> int:
    bench.output(bench.cliques.count(bench.load_uniform(args.source), args.min_order))
    return EXIT_OK


def cmd_contains(bench: Workbench, args) -> int:
    host = bench.load_complex(args.host)
    if args.berge:
        pattern = bench.load_uniform(args.pattern)
        via_closure, direct = bench.containment.berge(host, pattern)
        bench.output({"berge": via_closure, "direct": direct, "agree": via_closure == direct})
        return EXIT_OK if via_closure == direct else EXIT_FAIL
    found = bench.containment.contains(host, bench.load_complex(args.pattern))
    bench.output({"contained": found is not None, "embedding": str(found) if found is not None else ""})
    return EXIT_OK


def cmd_analyze(bench: Workbench, args) -> int:
    g = bench.load_uniform(args.source)
    if args.mode == "degenerate":
        order = bench.analysis.degenerate(g)
        bench.output({"edge_degenerate": order is not None, "ordering": " | ".join(repr(e) for e in order or [])})
    elif args.mode == "full":
        bench.output({"l": args.ell, "l_full": bench.analysis.full(g, args.ell)})
    elif args.mode == "peel":
        report = bench.analysis.peel(g, args.ell, args.order if args.order is not None else g.k)
        bench.output({
            "l": report.ell,
            "r": report.clique_order,
            "iterations": len(report.iterations),
            "remaining_edges": len(report.remaining.edges),
            "total_destroyed_geq_k": report.total_destroyed_geq_k,
            "step_bound": report.bound,
            "violations": len(report.violations()),
        })
        return EXIT_FAIL if report.violations() else EXIT_OK
    else:
        check = bench.analysis.profile(g)
        bench.output({"profile": sorted(check.profile), "bound": check.bound, "count": check.count, "holds": check.holds})
        return EXIT_OK if check.holds else EXIT_FAIL
    return EXIT_OK


def _search_exit(bench: Workbench, result) -> int:
    bench.output(result)
    return EXIT_BUDGET if result.status == LOWER_BOUND_ONLY else EXIT_OK


def cmd_ex(bench: Workbench, args) -> int:
    result = bench.extremal.max_edges_pattern_free(args.n, bench.load_complex(args.pattern), strategy=args.strategy)
    return _search_exit(bench, result)


def cmd_ex_cliques(bench: Workbench, args) -> int:
    forbidden = [bench.load_uniform(f) for f in args.forbidden]
    forbidden_complex = bench.load_complex(args.forbidden_complex) if args.forbidden_complex else None
    result = bench.extremal.max_cliques_forbidden(
        args.n, args.k, forbidden, args.mode, forbidden_complex=forbidden_complex, strategy=args.strategy
    )
    return _search_exit(bench, result)


def cmd_ex_copies(bench: Workbench, args) -> int:
    forbidden = [bench.load_uniform(f) for f in args.forbidden]
    result = bench.extremal.max_copies(args.n, args.k, bench.load_uniform(args.target), forbidden, strategy=args.strategy)
    return _search_exit(bench, result)


def _value(text: str):
    """Integer, JSON list (e.g. extra=[[3,2,6]] or extra=[]) or plain string."""
    try:
        return int(text)
    except ValueError:
        pass
    if text.startswith("["):
        try:
            return json.loads(text)
        except json.JSONDecodeError as e:
            raise InvalidStructureError(f"malformed list parameter {text!r}: {e}") from e
    return text


def cmd_formula(bench: Workbench, args) -> int:
    fn, names = REGISTRY[args.name]
    values = {}
    positional = [p for p in args.params if "=" not in p]
    for name, raw in zip(names, positional):
        values[name] = _value(raw)
    for item in args.params:
        if "=" in item:
            key, raw = item.split("=", 1)
            values[key.strip()] = _value(raw.strip())
    missing = [n for n in names if n not in values]
    if missing or len(positional) > len(names):
        raise InvalidStructureError(f"{args.name} expects parameters {', '.join(names)}")
    result = fn(*(values[n] for n in names))
    bench.output(result if not isinstance(result, int) else {"value": result})
    return EXIT_OK


def _suite_overrides(args) -> dict:
    overrides = {"max_n": args.max_n, "k": args.k, "t": args.t, "n": args.n, "cases": args.cases, "seed": args.seed}
    if args.n_range:
        low, _, high = args.n_range.partition("..")
        overrides["n_min"], overrides["n_max"] = int(low), int(high or low)
    if args.n_values:
        overrides["n_values"] = [int(v) for v in args.n_values.split(",") if v.strip()]
    for item in args.param:
        key, _, raw = item.partition("=")
        overrides[key.strip().replace("-", "_")] = _value(raw.strip())
    return overrides


def cmd_verify(bench: Workbench, args) -> int:
    report = bench.verifier.run(args.suite, _suite_overrides(args))
    bench.output(report)
    return report.exit_code


COMMANDS = {
    "construct": cmd_construct,
    "closure": cmd_closure,
    "cliques": cmd_cliques,
    "contains": cmd_contains,
    "analyze": cmd_analyze,
    "ex": cmd_ex,
    "ex-cliques": cmd_ex_cliques,
    "ex-copies": cmd_ex_copies,
    "formula": cmd_formula,
    "verify": cmd_verify,
}


# ==========================================
# Main Execution Loop
# ==========================================
def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_USAGE
    configure_logging(args.verbose)

    try:
        config = load_settings(args.settings)
        suites = load_suites(config.get("Output", "suites_file", fallback="suites.toml"))
        bench = Workbench(args, config, suites)
        return COMMANDS[args.command](bench, args)
    except TuranError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except (ValueError, TypeError) as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
