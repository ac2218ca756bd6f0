"""Batch front-end: seeded reproducible runs with JSON reports.

Subcommands: gen, certify, pack-pseudo, pack-random, pack-bootstrap,
bounds, verify.  Every option can come from a flat key-value JSON config
file (--config); command-line flags win over the file, which wins over the
TREEPACK_SEED environment variable for the seed.  Reports are emitted as
canonical JSON (sorted keys, no timestamps), so identical configs and
seeds produce byte-identical files.

Exit codes: 0 success, 1 verification failure, 2 config violation,
3 I/O or parse error, 4 divisibility error.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
from fractions import Fraction

from . import __version__
from .bounds import chernoff_tail, permutation_tail
from .errors import ConfigError, DivisibilityError, FormatError, TreepackError
from .graphs import Graph, certify_regular, generate_gnp, read_edge_list, write_edge_list
from .matching import fk_random_delta
from .pipeline import (
    PackingResult,
    check_feasibility,
    make_bootstrap_plan,
    pack_bootstrap,
    pack_pseudo,
    pack_random,
)
from .trees import TFactor, TreeTemplate, read_tree, verify_tfactor

_CONFIG_KEYS = {
    "n": int,
    "t": int,
    "tau": int,
    "p": float,
    "epsilon": float,
    "seed": int,
    "scale": float,
    "r_override": int,
    "slack": float,
    "input": str,
    "output": str,
    "tree": str,
    "factors": str,
    "csv": str,
    "kappa_csv": str,
    "outer_epsilon": float,
    "outer_scale": float,
    "outer_r_override": int,
    "mu": float,
    "tail_epsilon": float,
    "perm_n": int,
    "perm_c": float,
    "perm_t": float,
    "fk_nu": int,
    "fk_p": float,
    "denominator": str,
}

_DEFAULTS = {"scale": 1.0, "slack": 1.0, "epsilon": 0.5, "outer_scale": 1.0}


def _load_config_file(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise FormatError(f"cannot read config file: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file is not valid JSON: {exc}") from None
    if not isinstance(raw, dict):
        raise ConfigError("config file must hold a flat JSON object")
    out = {}
    for key, value in raw.items():
        if key == "mode":
            continue
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"unknown config key {key!r}")
        try:
            out[key] = _CONFIG_KEYS[key](value)
        except (TypeError, ValueError):
            raise ConfigError(f"config key {key!r} has invalid value {value!r}") from None
    return out


def resolve_config(args: argparse.Namespace) -> dict:
    """Merge defaults, environment, config file, and CLI flags (flags win)."""
    cfg = dict(_DEFAULTS)
    env_seed = os.environ.get("TREEPACK_SEED")
    if env_seed is not None:
        try:
            cfg["seed"] = int(env_seed)
        except ValueError:
            raise ConfigError(f"TREEPACK_SEED must be an integer, got {env_seed!r}") from None
    if getattr(args, "config", None):
        cfg.update(_load_config_file(args.config))
    for key in _CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            cfg[key] = value
    cfg.setdefault("seed", 0)
    cfg["mode"] = args.mode
    return cfg


def _require(cfg: dict, *keys: str) -> None:
    missing = [k for k in keys if cfg.get(k) is None]
    if missing:
        raise ConfigError(f"mode {cfg['mode']} requires: {', '.join(missing)}")


def _validate_common(cfg: dict) -> None:
    if "p" in cfg and not 0.0 <= cfg["p"] <= 1.0:
        raise ConfigError(f"p must be in [0, 1], got {cfg['p']}")
    if "epsilon" in cfg and not 0.0 < cfg["epsilon"] < 1.0:
        raise ConfigError(f"epsilon must be in (0, 1), got {cfg['epsilon']}")
    if cfg.get("scale") is not None and cfg["scale"] <= 0:
        raise ConfigError(f"scale must be positive, got {cfg['scale']}")
    if cfg.get("slack") is not None and cfg["slack"] <= 0:
        raise ConfigError(f"slack must be positive, got {cfg['slack']}")
    if cfg.get("r_override") is not None and cfg["r_override"] < 0:
        raise ConfigError(f"r_override must be non-negative, got {cfg['r_override']}")
    n, t, tau = cfg.get("n"), cfg.get("t"), cfg.get("tau")
    if n is not None and n <= 0:
        raise ConfigError(f"n must be positive, got {n}")
    if t is not None and t < 2:
        raise ConfigError(f"t must be at least 2, got {t}")
    if n is not None and t is not None and n % t != 0:
        raise DivisibilityError(f"t={t} does not divide n={n}")
    if tau is not None:
        if t is not None and tau % t != 0:
            raise DivisibilityError(f"t={t} does not divide tau={tau}")
        if n is not None and n % tau != 0:
            raise DivisibilityError(f"tau={tau} does not divide n={n}")


def _coverage_dict(cov: Fraction) -> dict:
    return {
        "numerator": cov.numerator,
        "denominator": cov.denominator,
        "value": float(cov),
    }


def _emit(report: dict, output: str | None) -> None:
    text = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if output:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load_host(cfg: dict) -> Graph:
    if cfg.get("input"):
        try:
            g = read_edge_list(cfg["input"])
        except OSError as exc:
            raise FormatError(f"cannot read {cfg['input']}: {exc}") from None
        if cfg.get("n") is not None and cfg["n"] != g.n:
            raise ConfigError(f"config n={cfg['n']} does not match input graph n={g.n}")
        cfg["n"] = g.n
        return g
    _require(cfg, "n", "p")
    return generate_gnp(cfg["n"], cfg["p"], cfg["seed"])


def _load_template(cfg: dict) -> TreeTemplate:
    if cfg.get("tree"):
        try:
            template = read_tree(cfg["tree"])
        except OSError as exc:
            raise FormatError(f"cannot read {cfg['tree']}: {exc}") from None
        if cfg.get("t") is not None and cfg["t"] != template.t:
            raise ConfigError(f"config t={cfg['t']} does not match tree file t={template.t}")
        cfg["t"] = template.t
        return template
    _require(cfg, "t")
    return TreeTemplate.path(cfg["t"])


def _host_density(cfg: dict, g: Graph) -> float:
    if cfg.get("p") is not None:
        return cfg["p"]
    pairs = g.n * (g.n - 1) // 2
    return g.num_edges / pairs if pairs else 0.0


def _factors_payload(result: PackingResult, n: int) -> dict:
    return {
        "n": n,
        "t": result.template.t,
        "tree_edges": [list(e) for e in result.template.edges],
        "factors": [
            [
                {"vertices": list(verts), "edges": [list(e) for e in edges]}
                for verts, edges in factor.copies
            ]
            for factor in result.factors
        ],
    }


def _write_factors(result: PackingResult, n: int, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_factors_payload(result, n), fh, sort_keys=True, indent=2)
        fh.write("\n")


def _read_factors(path: str) -> tuple[int, TreeTemplate, list[TFactor]]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise FormatError(f"factors file is not valid JSON: {exc}") from None
    try:
        n = int(payload["n"])
        template = TreeTemplate(
            int(payload["t"]), tuple((int(u), int(v)) for u, v in payload["tree_edges"])
        )
        factors = [
            TFactor(
                tuple(
                    (
                        tuple(int(x) for x in copy["vertices"]),
                        tuple((int(u), int(v)) for u, v in copy["edges"]),
                    )
                    for copy in factor
                )
            )
            for factor in payload["factors"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed factors file: {exc}") from None
    return n, template, factors


def _write_blowup_csv(result: PackingResult, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["blowup", "pair_lo", "pair_hi", "edges", "matchings", "factors"])
        for stats in result.per_blowup:
            for se in stats.super_edges:
                writer.writerow(
                    [stats.index, se.pair[0], se.pair[1], se.edges, se.matchings, stats.factors]
                )


def _write_kappa_csv(result: PackingResult, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["appearance_count", "edges"])
        if result.kappa is not None:
            for count, edges in enumerate(result.kappa.histogram):
                writer.writerow([count, edges])


def _pack_report(cfg: dict, g: Graph, result: PackingResult) -> dict:
    density = _host_density(cfg, g)
    feasibility = (
        check_feasibility(g.n, density, cfg["epsilon"], cfg["slack"]).to_dict()
        if g.n >= 2
        else {}
    )
    report = {
        "config": {k: v for k, v in sorted(cfg.items()) if v is not None},
        "feasibility": feasibility,
        "kappa_summary": result.kappa.to_dict() if result.kappa is not None else None,
        "per_blowup": [s.to_dict() for s in result.per_blowup],
        "factors_count": result.factors_count,
        "covered_edges": result.covered_edges,
        "total_edges": result.total_edges,
        "coverage": _coverage_dict(result.coverage),
        "seed": cfg["seed"],
        "version": __version__,
        "target": result.target,
        "diagnostics": list(result.diagnostics),
    }
    if result.loss_breakdown is not None:
        report["loss_breakdown"] = result.loss_breakdown.to_dict()
    return report


# -- subcommand drivers --------------------------------------------------------------


def _run_gen(cfg: dict) -> tuple[int, dict]:
    _require(cfg, "n", "p", "output")
    g = generate_gnp(cfg["n"], cfg["p"], cfg["seed"])
    write_edge_list(g, cfg["output"])
    report = {
        "config": {k: v for k, v in sorted(cfg.items()) if v is not None},
        "n": g.n,
        "m": g.num_edges,
        "output": cfg["output"],
        "seed": cfg["seed"],
        "version": __version__,
    }
    sys.stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    return 0, report


def _run_certify(cfg: dict) -> tuple[int, dict]:
    _require(cfg, "input", "p")
    g = _load_host(cfg)
    report_obj = certify_regular(g, cfg["epsilon"], cfg["p"])
    report = {
        "config": {k: v for k, v in sorted(cfg.items()) if v is not None},
        "regularity": report_obj.to_dict(),
        "n": g.n,
        "m": g.num_edges,
        "seed": cfg["seed"],
        "version": __version__,
    }
    _emit(report, cfg.get("output"))
    return 0, report


def _run_pack(cfg: dict) -> tuple[int, dict]:
    g = _load_host(cfg)
    template = _load_template(cfg)
    if g.n % template.t != 0:
        raise DivisibilityError(f"t={template.t} does not divide n={g.n}")
    mode = cfg["mode"]
    if mode == "pack-pseudo":
        result = pack_pseudo(
            g, template, cfg["epsilon"], cfg["seed"],
            scale=cfg["scale"], r_override=cfg.get("r_override"),
        )
    elif mode == "pack-random":
        result = pack_random(
            g, template, cfg["epsilon"], cfg["seed"],
            scale=cfg["scale"], r_override=cfg.get("r_override"),
        )
    else:
        _require(cfg, "tau")
        plan = make_bootstrap_plan(
            g.n,
            template,
            cfg["tau"],
            cfg["epsilon"],
            outer_r_override=cfg.get("outer_r_override"),
            outer_scale=cfg.get("outer_scale", 1.0),
            outer_epsilon=cfg.get("outer_epsilon"),
            slack=cfg["slack"],
        )
        result = pack_bootstrap(g, template, plan, cfg["epsilon"], cfg["seed"])
    report = _pack_report(cfg, g, result)
    _emit(report, cfg.get("output"))
    if cfg.get("factors"):
        _write_factors(result, g.n, cfg["factors"])
    if cfg.get("csv"):
        _write_blowup_csv(result, cfg["csv"])
    if cfg.get("kappa_csv"):
        _write_kappa_csv(result, cfg["kappa_csv"])
    return 0, report


def _run_bounds(cfg: dict) -> tuple[int, dict]:
    values: dict = {}
    if cfg.get("mu") is not None:
        eps = cfg.get("tail_epsilon", cfg["epsilon"])
        values["chernoff"] = dict(
            chernoff_tail(cfg["mu"], eps).to_dict(), mu=cfg["mu"], epsilon=eps
        )
    if cfg.get("perm_n") is not None:
        _require(cfg, "perm_c", "perm_t")
        denom = cfg.get("denominator", "n")
        values["permutation"] = dict(
            permutation_tail(cfg["perm_n"], cfg["perm_c"], cfg["perm_t"], denom).to_dict(),
            n=cfg["perm_n"],
            c=cfg["perm_c"],
            t=cfg["perm_t"],
            denominator=denom,
        )
    if cfg.get("fk_nu") is not None:
        _require(cfg, "fk_p")
        slack = fk_random_delta(cfg["fk_nu"], cfg["fk_p"])
        values["fk_delta"] = {
            "value": slack.value,
            "vacuous": slack.vacuous,
            "nu": cfg["fk_nu"],
            "p": cfg["fk_p"],
        }
    if not values:
        raise ConfigError("bounds mode needs at least one of: mu, perm_n, fk_nu")
    report = {
        "config": {k: v for k, v in sorted(cfg.items()) if v is not None},
        "bounds": values,
        "version": __version__,
    }
    _emit(report, cfg.get("output"))
    return 0, report


def _run_verify(cfg: dict) -> tuple[int, dict]:
    _require(cfg, "input", "factors")
    g = _load_host(cfg)
    n, template, factors = _read_factors(cfg["factors"])
    if n != g.n:
        raise ConfigError(f"factors file n={n} does not match graph n={g.n}")
    verdicts = []
    ok = True
    claimed: dict[tuple[int, int], int] = {}
    clash = None
    for fi, factor in enumerate(factors):
        verdict = verify_tfactor(g, template, factor)
        verdicts.append(verdict.to_dict())
        ok = ok and verdict.ok
        for edge in sorted(factor.edge_set()):
            if edge in claimed and clash is None:
                clash = {"edge": list(edge), "factors": [claimed[edge], fi]}
            claimed.setdefault(edge, fi)
    disjoint = clash is None
    report = {
        "config": {k: v for k, v in sorted(cfg.items()) if v is not None},
        "factors_count": len(factors),
        "verdicts": verdicts,
        "edge_disjoint": disjoint,
        "edge_clash": clash,
        "ok": ok and disjoint,
        "version": __version__,
    }
    _emit(report, cfg.get("output"))
    return (0 if report["ok"] else 1), report


_DRIVERS = {
    "gen": _run_gen,
    "certify": _run_certify,
    "pack-pseudo": _run_pack,
    "pack-random": _run_pack,
    "pack-bootstrap": _run_pack,
    "bounds": _run_bounds,
    "verify": _run_verify,
}


def run(cfg: dict) -> tuple[int, dict]:
    """Execute a resolved configuration; returns (exit_code, report)."""
    _validate_common(cfg)
    return _DRIVERS[cfg["mode"]](cfg)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treepack",
        description="Pack edge-disjoint tree factors into random and pseudo-random graphs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="mode", required=True)

    def add_common(sp):
        sp.add_argument("--config", help="flat key-value JSON config file")
        sp.add_argument("--n", type=int)
        sp.add_argument("--t", type=int)
        sp.add_argument("--p", type=float)
        sp.add_argument("--epsilon", type=float)
        sp.add_argument("--seed", type=int)
        sp.add_argument("--scale", type=float)
        sp.add_argument("--slack", type=float)
        sp.add_argument("--input", help="edge-list file for the host graph")
        sp.add_argument("--output", help="write the JSON report here instead of stdout")
        sp.add_argument("--tree", help="tree template file (default: path on t vertices)")

    for name, text in [
        ("gen", "generate a G(n, p) host graph and write it as an edge list"),
        ("certify", "check degree/co-degree regularity of a graph file"),
        ("pack-pseudo", "pack tree factors via the labeled blow-up family"),
        ("pack-random", "pack-pseudo with random-pair matching targets"),
        ("pack-bootstrap", "pack tree factors via the complete quotient construction"),
        ("bounds", "evaluate tail-bound calculators"),
        ("verify", "re-verify an exported factors file against a graph"),
    ]:
        sp = sub.add_parser(name, help=text)
        add_common(sp)
        if name in ("pack-pseudo", "pack-random", "pack-bootstrap"):
            sp.add_argument("--r-override", dest="r_override", type=int)
            sp.add_argument("--factors", help="export factors to this JSON file")
            sp.add_argument("--csv", help="write per-blow-up matching stats CSV")
            sp.add_argument("--kappa-csv", dest="kappa_csv", help="write multiplicity histogram CSV")
        if name == "pack-bootstrap":
            sp.add_argument("--tau", type=int)
            sp.add_argument("--outer-epsilon", dest="outer_epsilon", type=float)
            sp.add_argument("--outer-scale", dest="outer_scale", type=float)
            sp.add_argument("--outer-r-override", dest="outer_r_override", type=int)
        if name == "bounds":
            sp.add_argument("--mu", type=float)
            sp.add_argument("--tail-epsilon", dest="tail_epsilon", type=float)
            sp.add_argument("--perm-n", dest="perm_n", type=int)
            sp.add_argument("--perm-c", dest="perm_c", type=float)
            sp.add_argument("--perm-t", dest="perm_t", type=float)
            sp.add_argument("--denominator", choices=["n", "n-1"])
            sp.add_argument("--fk-nu", dest="fk_nu", type=int)
            sp.add_argument("--fk-p", dest="fk_p", type=float)
        if name == "verify":
            sp.add_argument("--factors", help="factors JSON file to verify")
    return parser


_ERROR_CATEGORIES = [
    (DivisibilityError, "divisibility", 4),
    (FormatError, "io", 3),
    (ConfigError, "config", 2),
    (OSError, "io", 3),
]


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        code, _ = run(cfg)
        return code
    except TreepackError as exc:
        for klass, category, code in _ERROR_CATEGORIES:
            if isinstance(exc, klass):
                break
        else:
            category, code = "error", 2
        sys.stderr.write(
            json.dumps({"error": {"category": category, "message": str(exc)}}) + "\n"
        )
        return code
    except OSError as exc:
        sys.stderr.write(json.dumps({"error": {"category": "io", "message": str(exc)}}) + "\n")
        return 3


if __name__ == "__main__":
    sys.exit(main())
