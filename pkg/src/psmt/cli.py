"""Command line front end.

Subcommands:

* ``fixtures`` — list the built-in example topologies or dump one as JSON.
* ``analyze``  — connectivity analysis of a fixture or a topology file.
* ``simulate`` — run a protocol for many trials against an adversary.
* ``privacy``  — bound the adversary's view distance for two messages.

Options may also be supplied through a JSON config file (``--config``);
explicit command line flags override config entries.  Reports are
emitted as deterministic JSON on stdout (or ``--out``) with a short
human-readable table on stderr.

Exit codes: 0 success, 1 protocol precondition violated, 2 invalid
parameters or malformed input, 3 file I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import fixtures, protocols, strategies, topology
from .errors import ParamError, PreconditionError, PsmtError
from .field import GF
from .netsim import AdversarySpec
from .privacy import monte_carlo_distance, shared_rng_runner, view_distance
from .randomness import Randomness, derive_trial_seed
from .topology import Digraph, Hypergraph, NeighborNet


# ---------------------------------------------------------------------------
# argument handling


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="psmt",
        description="secure message transmission protocols and analyzers")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", help="JSON file with default option values")
        p.add_argument("--out", help="write the JSON report to this file")

    p = sub.add_parser("fixtures", help="list or export example topologies")
    common(p)
    p.add_argument("--name", help="dump this fixture instead of listing")

    p = sub.add_parser("analyze", help="connectivity analysis of a topology")
    common(p)
    p.add_argument("--fixture", help="name of a built-in topology")
    p.add_argument("--topology-file", help="JSON topology description")
    p.add_argument("--k", type=int, default=1,
                   help="corruption bound used in the connectivity questions")

    for name in ("simulate", "privacy"):
        p = sub.add_parser(
            name,
            help="run protocol trials" if name == "simulate"
            else "bound the adversary view distance between two messages")
        common(p)
        p.add_argument("--protocol", help="one of: " + ", ".join(protocols.names()))
        p.add_argument("--field", type=int, help="field order (prime power)")
        p.add_argument("--k", type=int, help="corruption bound")
        p.add_argument("--u", type=int, help="number of feedback channels")
        p.add_argument("--n-forward", type=int, dest="n_forward")
        p.add_argument("--n-backward", type=int, dest="n_backward")
        p.add_argument("--fixture", help="topology fixture (graph protocols)")
        p.add_argument("--topology-file", help="JSON topology description")
        p.add_argument("--corrupt", default="",
                       help="comma list of channels (AB0,BA1) or node names")
        p.add_argument("--seed", type=int, default=0, help="master seed")
        if name == "simulate":
            p.add_argument("--adversary", default="passive",
                           help="tampering strategy: "
                           + ", ".join(sorted(strategies.BUILTIN))
                           + ", constant:<int>")
            p.add_argument("--trials", type=int, default=100)
            p.add_argument("--message", type=int,
                           help="fixed message value (default: per-trial uniform)")
            p.add_argument("--delta-r", type=float, default=0.0, dest="delta_r",
                           help="idealized reliable channel failure probability")
        else:
            p.add_argument("--m0", type=int, required=False)
            p.add_argument("--m1", type=int, required=False)
            group = p.add_mutually_exclusive_group()
            group.add_argument("--exact", action="store_true",
                               help="exact enumeration (default)")
            group.add_argument("--estimate", action="store_true",
                               help="Monte Carlo estimate only")
            p.add_argument("--limit", type=int, default=200_000,
                           help="per-component state-space cap for enumeration")
            p.add_argument("--samples", type=int, default=4000,
                           help="Monte Carlo samples per message")
    return parser


def _apply_config(args: argparse.Namespace, argv: list[str]) -> None:
    """Fill unset options from the JSON config; explicit flags win."""
    if not args.config:
        return
    try:
        with open(args.config, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise _IOFailure(f"cannot read config {args.config}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParamError(f"invalid config JSON: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ParamError("config must be a JSON object")
    given = {tok.split("=", 1)[0].lstrip("-").replace("-", "_")
             for tok in argv if tok.startswith("--")}
    for key, value in cfg.items():
        attr = str(key).replace("-", "_")
        if not hasattr(args, attr):
            raise ParamError(f"unknown config option {key!r}")
        if attr not in given:
            setattr(args, attr, value)


class _IOFailure(Exception):
    pass


def _load_graph(args):
    if getattr(args, "topology_file", None):
        try:
            with open(args.topology_file, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise _IOFailure(f"cannot read {args.topology_file}: {exc}") from exc
        return fixtures.loads(text)
    if getattr(args, "fixture", None):
        return fixtures.get(args.fixture)
    return None


def _parse_corrupt(text: str, kind: str) -> frozenset:
    if not text:
        return frozenset()
    out = []
    for token in str(text).split(","):
        token = token.strip()
        if not token:
            continue
        if kind == "channels":
            if token[:2] not in ("AB", "BA") or not token[2:].isdigit():
                raise ParamError(
                    f"corrupted channel {token!r} must look like AB0 or BA1")
            out.append((token[:2], int(token[2:])))
        else:
            out.append(token)
    return frozenset(out)


# ---------------------------------------------------------------------------
# subcommands


def _cmd_fixtures(args) -> dict:
    if args.name:
        return fixtures.to_dict(fixtures.get(args.name))
    return {"fixtures": fixtures.names()}


def _cmd_analyze(args) -> dict:
    g = _load_graph(args)
    if g is None:
        raise ParamError("analyze needs --fixture or --topology-file")
    k = args.k
    report: dict = {"topology": fixtures.to_dict(g), "k": k}
    if isinstance(g, Digraph):
        ps = topology.max_disjoint_paths(g)
        sep = topology.min_vertex_separator(g)
        report["disjoint_paths"] = [list(p) for p in ps.paths]
        report["max_disjoint_paths"] = len(ps.paths)
        report["min_vertex_separator"] = sorted(sep) if sep is not None else None
    elif isinstance(g, Hypergraph):
        sep, witness = topology.is_k_separable(g, 2 * k)
        report["strongly_k_connected"] = topology.strongly_k_connected(g, k)
        report["weakly_k_connected"] = topology.weakly_k_connected(g, k)
        report["2k_separable"] = sep
        report["separator_witness"] = sorted(witness) if sep else None
        report["max_disjoint_paths"] = len(topology.max_disjoint_paths(g).paths)
    elif isinstance(g, NeighborNet):
        report["hierarchy"] = topology.connectivity_hierarchy(g, k)
        h = topology.to_hypergraph(g)
        sep, witness = topology.is_k_separable(h, k)
        report["k_separable_as_hypergraph"] = sep
        report["separator_witness"] = sorted(witness) if sep else None
        report["max_disjoint_paths"] = len(topology.max_disjoint_paths(h).paths)
    else:  # pragma: no cover - fixtures only yield the three kinds
        raise ParamError(f"cannot analyze {type(g).__name__}")
    return report


def _protocol_kwargs(desc, args, graph):
    kw: dict = {}
    if desc.needs_k:
        if getattr(args, "k", None) is None:
            raise ParamError(f"protocol {desc.name} requires --k")
        kw["k"] = args.k
    if desc.needs_u:
        if getattr(args, "u", None) is None:
            raise ParamError(f"protocol {desc.name} requires --u")
        kw["u"] = args.u
    if desc.needs_graph:
        if graph is None:
            raise ParamError(
                f"protocol {desc.name} requires --fixture or --topology-file")
        if not isinstance(graph, Hypergraph):
            if isinstance(graph, NeighborNet):
                graph = topology.to_hypergraph(graph)
            else:
                raise ParamError(f"protocol {desc.name} needs a hypergraph")
        kw["graph"] = graph
    if desc.name == "subset-exchange":
        if args.n_forward is None or args.n_backward is None:
            raise ParamError(
                "subset-exchange requires --n-forward and --n-backward")
        kw["n_forward"] = args.n_forward
        kw["n_backward"] = args.n_backward
    elif desc.name == "oneway" and args.n_forward is not None:
        kw["n_forward"] = args.n_forward
    if desc.name == "neighbor-exchange" and getattr(args, "delta_r", 0.0):
        kw["delta_r"] = args.delta_r
    return kw


def _field(args):
    if getattr(args, "field", None) is None:
        raise ParamError("missing --field")
    return GF(int(args.field))


def _cmd_simulate(args) -> dict:
    desc = protocols.get(args.protocol or "")
    spec = _field(args)
    graph = _load_graph(args)
    kw = _protocol_kwargs(desc, args, graph)
    corrupted = _parse_corrupt(args.corrupt, desc.kind)
    strategy = strategies.build(args.adversary, spec)

    trials = int(args.trials)
    successes = failures = wrong = 0
    rounds_hist: dict[int, int] = {}
    for t in range(trials):
        seed_t = derive_trial_seed(args.seed, t)
        if args.message is not None:
            message = spec.element(int(args.message) % spec.order)
        else:
            # per-trial message drawn from the master seed, not the parties'
            message = spec.sample(Randomness((args.seed, "msg", t)))
        adversary = AdversarySpec(corrupted, strategy, seed=seed_t)
        outcome = desc.run(message, adversary=adversary, seed=seed_t, **kw)
        rounds_hist[outcome.rounds] = rounds_hist.get(outcome.rounds, 0) + 1
        if outcome.succeeded:
            successes += 1
        elif outcome.failed:
            failures += 1
        else:
            wrong += 1
    bad = failures + wrong
    rate = bad / trials if trials else 0.0
    # normal-approximation 95% interval, clamped to [0, 1]
    half = 1.96 * math.sqrt(rate * (1 - rate) / trials) if trials else 0.0
    report = {
        "protocol": desc.name,
        "field": spec.order,
        "adversary": args.adversary,
        "corrupted": sorted(map(str, corrupted)),
        "trials": trials,
        "successes": successes,
        "detected_failures": failures,
        "wrong_deliveries": wrong,
        "failures": bad,
        "failure_rate": rate,
        "failure_rate_ci95": [max(0.0, rate - half), min(1.0, rate + half)],
        "rounds_histogram": {str(r): c for r, c in sorted(rounds_hist.items())},
        "rounds_max": max(rounds_hist, default=0),
        "seed": args.seed,
    }
    for key in ("k", "u"):
        if getattr(args, key, None) is not None:
            report[key] = getattr(args, key)
    return report


def _cmd_privacy(args) -> dict:
    desc = protocols.get(args.protocol or "")
    if not desc.private:
        raise ParamError(f"protocol {desc.name} makes no privacy claim")
    spec = _field(args)
    graph = _load_graph(args)
    kw = _protocol_kwargs(desc, args, graph)
    corrupted = _parse_corrupt(args.corrupt, desc.kind)
    if args.m0 is None or args.m1 is None:
        raise ParamError("privacy needs --m0 and --m1")
    m0 = spec.element(int(args.m0) % spec.order)
    m1 = spec.element(int(args.m1) % spec.order)
    adversary = AdversarySpec(corrupted)  # privacy is against eavesdropping
    run = shared_rng_runner(desc.run, adversary=adversary, seed=args.seed, **kw)
    if args.estimate:
        rep = monte_carlo_distance(run, m0, m1, seed=args.seed,
                                   samples=args.samples)
    else:
        rep = view_distance(run, m0, m1, seed=args.seed, limit=args.limit,
                            samples=args.samples)
    report = {
        "protocol": desc.name,
        "field": spec.order,
        "corrupted": sorted(map(str, corrupted)),
        "m0": m0.value,
        "m1": m1.value,
        "method": rep.method,
        "lower": rep.lower,
        "upper": rep.upper,
        "components": rep.components,
        "component_distances": rep.component_tv,
        "samples": rep.samples,
        "perfectly_private": rep.perfectly_private,
        "note": rep.note,
        "seed": args.seed,
    }
    if rep.method == "monte-carlo":
        report["estimate"] = rep.component_tv[0] if rep.component_tv else None
        report["confidence"] = ("uncertified plug-in estimate over "
                                f"{rep.samples} samples per message")
    return report


# ---------------------------------------------------------------------------


def _emit(report: dict, args) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if getattr(args, "out", None):
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise _IOFailure(f"cannot write {args.out}: {exc}") from exc
    else:
        sys.stdout.write(text)
    width = max((len(k) for k in report), default=0)
    for key in sorted(report):
        value = report[key]
        if isinstance(value, (dict, list)):
            value = json.dumps(value, sort_keys=True)
        print(f"  {key:<{width}}  {value}", file=sys.stderr)


_COMMANDS = {
    "fixtures": _cmd_fixtures,
    "analyze": _cmd_analyze,
    "simulate": _cmd_simulate,
    "privacy": _cmd_privacy,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        _apply_config(args, argv)
        report = _COMMANDS[args.command](args)
        _emit(report, args)
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return 1
    except (ParamError, PsmtError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _IOFailure as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
