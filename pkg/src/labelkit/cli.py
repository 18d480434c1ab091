"""Command-line frontend: ``labelkit <command> [options]``.

Exit status is 0 on success, 1 when an audit reports FAIL and 2 on usage or
input errors.  Every report starts with a manifest (tool version, command,
validated configuration, seed); nothing time-dependent is written, so equal
configurations give byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import os
import sys
from dataclasses import asdict, dataclass, field
from functools import lru_cache
from pathlib import Path

from . import __version__, audit, iso, wl
from .formats import GraphFormatError, parse_edge_list, parse_graph_file, parse_target
from .graph import GraphError, NodePoset
from .heuristics import scores
from .labeling import (TRICKS, LabelingError, get_trick, set_labeling_distinguishes,
                       subset_pooling_distinguishes)
from .predictor import READOUTS, VARIANTS, Hyperparams, PredictorError

log = logging.getLogger("labelkit")

COMMANDS = ("refine", "label", "distinguish", "score", "audit", "benchmark", "predict")
ENGINES = ("wl", "oracle", "subset")


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    graph: str | None = None
    graph2: str | None = None
    fmt: str | None = None            # input graph format, inferred when None
    directed: bool = False
    zero_based: bool = False
    allow_empty: bool = False
    labeling: str | None = None
    target: str | None = None
    target2: str | None = None
    engine: str = "wl"
    layers: str = wl.CONVERGE
    h: int | None = None
    depth: int = 3
    k: int = 1
    l: int = 1
    readout: str = "target"
    seed: int = 0
    seeds: int = 5
    n_max: int | None = None
    claim: str = "all"
    pairs: str | None = None
    labelings: list = field(default_factory=list)
    epochs: int = 50
    rate: float = 0.1
    l2: float = 1e-4
    output: str | None = None
    out_format: str = "csv"
    manifest_path: str | None = None

    def validate(self) -> None:
        """Reject bad values before any work starts."""
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}; choose from {', '.join(COMMANDS)}")
        needs_graph = self.command in ("refine", "label", "distinguish", "score", "predict")
        if needs_graph and not self.graph:
            raise UsageError(f"{self.command} needs --graph")
        for path in (self.graph, self.graph2, self.pairs):
            if path and not Path(path).is_file():
                raise UsageError(f"no such file: {path}")
        if self.out_format not in ("csv", "json"):
            raise UsageError("--format must be csv or json")
        if self.command in ("label", "distinguish") or (self.command == "refine" and self.labeling):
            names = list(TRICKS) + (["none"] if self.command != "label" else [])
            if self.labeling not in names:
                raise UsageError(f"unknown labeling {self.labeling!r}; choose from {', '.join(names)}")
        if self.command in ("predict", "benchmark"):
            for lab in self.labelings or [self.labeling or "zo"]:
                if lab not in VARIANTS:
                    raise UsageError(f"unknown labeling {lab!r}; choose from {', '.join(VARIANTS)}")
            if self.readout not in READOUTS:
                raise UsageError(f"unknown readout {self.readout!r}; choose from {', '.join(READOUTS)}")
            if self.epochs < 0 or self.rate <= 0 or self.l2 < 0:
                raise UsageError("need epochs >= 0, rate > 0 and l2 >= 0")
            if self.seeds < 1:
                raise UsageError("--seeds must be at least 1")
        if self.command in ("label", "distinguish") and not self.target:
            raise UsageError(f"{self.command} needs --target")
        if self.command == "distinguish" and self.engine not in ENGINES:
            raise UsageError(f"unknown engine {self.engine!r}; choose from {', '.join(ENGINES)}")
        if self.command == "audit" and self.claim not in audit.CLAIMS + ("all",):
            raise UsageError(f"unknown claim {self.claim!r}; choose from "
                             f"{', '.join(audit.CLAIMS)} or all")
        if self.layers != wl.CONVERGE and not (self.layers.isdigit() and int(self.layers) >= 0):
            raise UsageError("--layers must be a non-negative integer or 'converge'")
        for name in ("depth", "k", "l"):
            if getattr(self, name) < (0 if name == "depth" else 1):
                raise UsageError(f"--{name} is out of range")
        if self.h is not None and self.h < 0:
            raise UsageError("--h must be non-negative")
        if self.n_max is not None and self.n_max < 1:
            raise UsageError("--n-max must be positive")
        threads = os.environ.get("LABELKIT_THREADS")
        if threads is not None and not (threads.isdigit() and int(threads) >= 1):
            raise UsageError(f"LABELKIT_THREADS must be a positive integer, got {threads!r}")

    @property
    def rounds(self):
        return self.layers if self.layers == wl.CONVERGE else int(self.layers)

    def manifest(self) -> dict:
        keep = _command_options().get(self.command, set())
        config = {k: v for k, v in asdict(self).items() if k in keep and v not in (None, [])}
        return {"tool": "labelkit", "version": __version__, "command": self.command,
                "seed": self.seed, "config": config}


# -- reporting ------------------------------------------------------------------------------

def _csv(rows: list, header: list) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit(cfg: RunConfig, result: dict, table: str | None) -> None:
    """Write JSON (manifest + result) or CSV (``#`` manifest lines + table)."""
    manifest = cfg.manifest()
    if cfg.out_format == "json" or table is None:
        text = json.dumps({"manifest": manifest, "result": result}, indent=2, sort_keys=True) + "\n"
    else:
        text = (f"# labelkit {__version__} command={cfg.command} seed={cfg.seed}\n"
                f"# config={json.dumps(manifest['config'], sort_keys=True)}\n" + table)
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)


def _load(cfg: RunConfig, path: str):
    # JSON input ignores the edge-list options other than allow_empty
    return parse_graph_file(path, cfg.fmt, one_based=not cfg.zero_based, directed=cfg.directed,
                            allow_empty=cfg.allow_empty)


def _pairs(cfg: RunConfig, g) -> list:
    if cfg.pairs:
        pg = parse_edge_list(Path(cfg.pairs).read_text(), one_based=not cfg.zero_based,
                             directed=True, n=g.n)
        return sorted(pg.edges)
    return [(i, j) for i in g.nodes for j in g.nodes if i < j]


# -- commands ---------------------------------------------------------------------------------

def cmd_refine(cfg: RunConfig) -> int:
    g = _load(cfg, cfg.graph)
    s = parse_target(cfg.target) if cfg.target else NodePoset.of_set([])
    labels = None
    if cfg.target:
        # a target without --labeling means zero-one marks; "--labeling none" opts out
        labels = get_trick(cfg.labeling or "zero_one").fn(s, g) if cfg.labeling != "none" else None
    if cfg.k == 1:
        col = wl.wl_refine(g, labels, cfg.rounds)
        _emit(cfg, col.report(), col.to_csv())
        return 0
    tc = wl.kwl_refine(g, cfg.k, labels.labels if labels else None)
    rows = [[" ".join(map(str, t)), c] for t, c in sorted(tc.colors.items())]
    result = {"k": cfg.k, "rounds": tc.rounds, "converged": tc.converged,
              "histogram": {str(c): n for c, n in sorted(tc.histogram().items())}}
    _emit(cfg, result, _csv(rows, ["tuple", "color"]))
    return 0


def cmd_label(cfg: RunConfig) -> int:
    g = _load(cfg, cfg.graph)
    lab = get_trick(cfg.labeling).fn(parse_target(cfg.target), g)
    _emit(cfg, {"labeling": cfg.labeling, "labels": [list(r) for r in lab.labels]}, lab.to_csv())
    return 0


def cmd_distinguish(cfg: RunConfig) -> int:
    g1 = _load(cfg, cfg.graph)
    g2 = _load(cfg, cfg.graph2) if cfg.graph2 else g1
    s1 = parse_target(cfg.target)
    s2 = parse_target(cfg.target2) if cfg.target2 else s1
    if cfg.engine == "subset":
        verdict = subset_pooling_distinguishes(g1, s1, g2, s2, cfg.k, layers=cfg.rounds)
    elif cfg.engine == "oracle":
        verdict = not iso.are_substructures_isomorphic(s1, g1, s2, g2)
    elif cfg.labeling in (None, "none"):
        verdict = wl.wl_distinguishes(g1, None, s1, g2, None, s2, cfg.rounds)
    else:
        verdict = set_labeling_distinguishes(g1, s1, g2, s2, get_trick(cfg.labeling).fn,
                                             layers=cfg.rounds)
    result = {"distinguished": verdict, "engine": cfg.engine,
              "labeling": cfg.labeling or "none", "targets": [repr(s1), repr(s2)]}
    _emit(cfg, result, None)
    return 0


def cmd_score(cfg: RunConfig) -> int:
    g = _load(cfg, cfg.graph)
    rows = []
    for i, j in _pairs(cfg, g):
        sc = scores(g, i, j)
        rows.append([i, j, sc["cn"], "nan" if sc["aa"] != sc["aa"] else repr(float(sc["aa"])),
                     repr(float(sc["ra"]))])
    _emit(cfg, {"pairs": len(rows), "rows": rows}, _csv(rows, ["i", "j", "cn", "aa", "ra"]))
    return 0


def cmd_audit(cfg: RunConfig) -> int:
    claims = audit.CLAIMS if cfg.claim == "all" else (cfg.claim,)
    results = [audit.run_audit(c, seed=cfg.seed, n_max=cfg.n_max) for c in claims]
    for r in results:
        log.info("%s: %s (%d instances)", r.claim, r.verdict, r.instances)
    passed = all(r.passed for r in results)
    result = {"verdict": "PASS" if passed else "FAIL", "audits": [r.as_dict() for r in results]}
    cfg.out_format = "json"
    _emit(cfg, result, None)
    return 0 if passed else 1


def _hyper(cfg: RunConfig) -> Hyperparams:
    return Hyperparams(rate=cfg.rate, l2=cfg.l2, epochs=cfg.epochs)


def cmd_benchmark(cfg: RunConfig) -> int:
    from .predictor import BENCHMARK_H, benchmark
    g = _load(cfg, cfg.graph) if cfg.graph else None
    report = benchmark(g, cfg.labelings or list(VARIANTS),
                       h=cfg.h if cfg.h is not None else BENCHMARK_H, depth=cfg.depth,
                       seeds=list(range(cfg.seed, cfg.seed + cfg.seeds)), hyper=_hyper(cfg),
                       source=cfg.graph, readout=cfg.readout)
    report.manifest["labelkit"] = cfg.manifest()
    if cfg.manifest_path:
        Path(cfg.manifest_path).write_text(report.to_json() + "\n")
    _emit(cfg, {"rows": report.rows, "benchmark": report.manifest}, report.to_csv())
    return 0


def cmd_predict(cfg: RunConfig) -> int:
    from .predictor import fit
    g = _load(cfg, cfg.graph)
    model = fit(g, cfg.labeling or "zo", h=cfg.h if cfg.h is not None else 1, depth=cfg.depth,
                hyper=_hyper(cfg), seed=cfg.seed, readout=cfg.readout)
    pairs = _pairs(cfg, g)
    probs = model.score(pairs)
    rows = [[i, j, f"{p:.6f}"] for (i, j), p in zip(pairs, probs)]
    _emit(cfg, {"rows": rows}, _csv(rows, ["i", "j", "score"]))
    return 0


DISPATCH = {"refine": cmd_refine, "label": cmd_label, "distinguish": cmd_distinguish,
            "score": cmd_score, "audit": cmd_audit, "benchmark": cmd_benchmark,
            "predict": cmd_predict}


def run(cfg: RunConfig) -> int:
    try:
        cfg.validate()
        return DISPATCH[cfg.command](cfg)
    except (UsageError, GraphFormatError, GraphError, LabelingError, PredictorError,
            wl.BudgetExceeded) as exc:
        print(f"labelkit {cfg.command}: error: {exc}", file=sys.stderr)
        return 2


# -- argument parsing -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="labelkit",
                                     description="Labeling tricks, WL refinement and audits.")
    parser.add_argument("--version", action="version", version=f"labelkit {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    def common(p, graph=True):
        if graph:
            p.add_argument("--graph", help="edge list or .json graph file")
            p.add_argument("--input-format", dest="fmt", choices=("edgelist", "json"))
            p.add_argument("--directed", action="store_true", help="read edge lists as directed")
            p.add_argument("--zero-based", action="store_true", help="edge list indices start at 0")
            p.add_argument("--allow-empty", action="store_true", help="accept a graph with no nodes")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--output", "-o", help="write the report here instead of stdout")
        p.add_argument("--format", dest="out_format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("refine", help="1-WL (or k-WL) colours of a graph")
    common(p)
    p.add_argument("--labeling", "--trick", dest="labeling")
    p.add_argument("--target", "--set", dest="target")
    p.add_argument("--layers", default=wl.CONVERGE)
    p.add_argument("--k", type=int, default=1)

    p = sub.add_parser("label", help="node labels of a labeling trick")
    common(p)
    p.add_argument("--labeling", "--trick", dest="labeling", required=True)
    p.add_argument("--target", "--set", "--poset", dest="target", required=True)

    p = sub.add_parser("distinguish", help="whether two targets get different representations")
    common(p)
    p.add_argument("--graph2")
    p.add_argument("--target", "--set", dest="target", required=True)
    p.add_argument("--target2", "--set2", dest="target2")
    p.add_argument("--labeling", "--trick", dest="labeling", default="none")
    p.add_argument("--engine", default="wl", choices=ENGINES)
    p.add_argument("--layers", default=wl.CONVERGE)
    p.add_argument("--k", type=int, default=1, help="subset size for --engine subset")

    p = sub.add_parser("score", help="CN, AA and RA for node pairs")
    common(p)
    p.add_argument("--pairs", help="edge list of pairs to score (default: every pair)")

    p = sub.add_parser("audit", help="run expressivity audits")
    common(p, graph=False)
    p.add_argument("--claim", default="all")
    p.add_argument("--n-max", type=int, dest="n_max")

    for name, helptext in (("benchmark", "labeling comparison by test AUC"),
                           ("predict", "train on a graph and score pairs")):
        p = sub.add_parser(name, help=helptext)
        common(p)
        if name == "benchmark":
            p.add_argument("--labelings", nargs="+", default=[], metavar="LABELING")
            p.add_argument("--seeds", type=int, default=5, help="number of seeds from --seed")
            p.add_argument("--manifest", dest="manifest_path", help="also write a JSON run manifest")
        else:
            p.add_argument("--labeling", default="zo")
            p.add_argument("--pairs", help="edge list of pairs to score (default: every pair)")
        p.add_argument("--h", type=int)
        p.add_argument("--depth", type=int, default=3)
        p.add_argument("--readout", default="target")
        p.add_argument("--epochs", type=int, default=50)
        p.add_argument("--rate", type=float, default=0.1)
        p.add_argument("--l2", type=float, default=1e-4)
    return parser


@lru_cache(maxsize=1)
def _command_options() -> dict:
    """Option names each subcommand accepts; the manifest records only these.

    Output destinations are left out: where a report goes does not change it.
    """
    sub = next(a for a in build_parser()._actions if isinstance(a, argparse._SubParsersAction))
    skip = {"help", "output", "manifest_path"}
    return {name: {a.dest for a in p._actions if a.dest not in skip}
            for name, p in sub.choices.items()}


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    fields = RunConfig.__dataclass_fields__
    return RunConfig(**{k: v for k, v in vars(ns).items() if k in fields})


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
