"""Command-line entry point: ``python3 -m loqc_parity <command> [flags]``.

Commands write CSV (tables) or JSON (reports) to ``--out`` or stdout.  Every
artifact carries the library version, the fully resolved configuration and a
provenance tag per value (formula, monte-carlo or paper-reference), and
contains no timestamps, so identical configurations give byte-identical
output.

Exit status: 0 on success, 1 if a verification or statistical check fails,
2 on an invalid configuration.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__, gates, montecarlo, verify
from .gates import ConfigError, FactoryCostModel, GateConfig
from .reference import FACTORY_95, KLM_CS_95_WIDTH, PRIMITIVES_95, RESOURCES_W4
from .rng import RngStream
from .walk import DomainError

COMMANDS = ("figscale", "resources", "factory", "mc", "verify", "klm-compare")

#: Per-command defaults for options left unset by both the config file and flags.
DEFAULTS = {
    "figscale": {"ptot": 0.99, "w": 30, "nt": 1, "format": "csv"},
    "resources": {"ptot": 0.95, "na": 3, "nr": 2, "nt": 1, "w": 4, "format": "csv"},
    "factory": {"ptot": 0.95, "nt": 1, "format": "csv"},
    "mc": {"ptot": 0.95, "na": 3, "nr": 2, "nt": 1, "w": 4, "trials": 100_000, "seed": 1,
           "format": "json"},
    "verify": {"format": "json"},
    "klm-compare": {"format": "csv", "w": 4},
}

FIGSCALE_ORDERS = (1, 2, 3, 4)
FACTORY_ORDERS = range(2, 6)
KLM_F0 = Fraction(1, 4)


@dataclass(frozen=True)
class RunConfig:
    command: str
    ptot: Optional[float] = None
    na: Optional[int] = None
    nr: Optional[int] = None
    nt: Optional[int] = None
    w: Optional[int] = None
    trials: Optional[int] = None
    seed: Optional[int] = None
    out: Optional[str] = None
    format: Optional[str] = None
    factory_model: dict = field(default_factory=dict)

    def resolved(self) -> "RunConfig":
        fill = {k: v for k, v in DEFAULTS[self.command].items() if getattr(self, k) is None}
        return replace(self, **fill)

    def public(self) -> dict:
        """Configuration echoed into artifacts (the output path is excluded)."""
        d = asdict(self)
        d.pop("out")
        return d


_TYPES = {
    "ptot": float, "na": int, "nr": int, "nt": int, "w": int, "trials": int, "seed": int,
    "out": str, "format": str, "factory_model": dict,
}


def _check_value(key: str, value):
    want = _TYPES[key]
    if want is float and isinstance(value, int) and not isinstance(value, bool):
        return float(value)
    if not isinstance(value, want) or isinstance(value, bool):
        raise ConfigError(f"config key {key!r} must be {want.__name__}, got {type(value).__name__}")
    return value


def load_config(path: Optional[str], command: str, overrides: Optional[dict] = None) -> RunConfig:
    """Merge a JSON config file with flag overrides (flags win)."""
    data: dict = {}
    if path is not None:
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config file must hold a JSON object")
    for key in data:
        if key not in _TYPES:
            raise ConfigError(f"unknown config key {key!r}")
    merged = {k: _check_value(k, v) for k, v in data.items()}
    merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
    if command not in COMMANDS:
        raise ConfigError(f"unknown command {command!r}")
    cfg = RunConfig(command=command, **merged).resolved()
    if cfg.format not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {cfg.format!r}")
    FactoryCostModel.from_dict(cfg.factory_model)
    return cfg


# ------------------------------------------------------------------ output


def _clean(v):
    if isinstance(v, Fraction):
        return float(v)
    if isinstance(v, float) and not math.isfinite(v):
        return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
    if isinstance(v, dict):
        return {k: _clean(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_clean(x) for x in v]
    return v


@dataclass
class Artifact:
    header: list[str]
    rows: list[list]
    provenance: dict[str, str]
    extra: dict = field(default_factory=dict)
    failed: bool = False


def render(cfg: RunConfig, art: Artifact) -> str:
    if cfg.format == "json":
        doc = {
            "version": __version__,
            "config": cfg.public(),
            "provenance": art.provenance,
            "rows": [dict(zip(art.header, r)) for r in art.rows],
            **art.extra,
        }
        return json.dumps(_clean(doc), indent=2, sort_keys=True) + "\n"
    buf = io.StringIO()
    buf.write(f"# loqc_parity {__version__}\n")
    buf.write(f"# config: {json.dumps(_clean(cfg.public()), sort_keys=True)}\n")
    buf.write(f"# provenance: {json.dumps(art.provenance, sort_keys=True)}\n")
    for key, value in sorted(art.extra.items()):
        buf.write(f"# {key}: {json.dumps(_clean(value), sort_keys=True)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(art.header)
    for row in art.rows:
        writer.writerow([repr(float(x)) if isinstance(x, (float, Fraction)) else x
                         for x in _clean(row)])
    return buf.getvalue()


# ------------------------------------------------------------------ commands


def _gate_config(cfg: RunConfig) -> GateConfig:
    return GateConfig(cfg.na, cfg.nr, cfg.nt, cfg.w, cfg.ptot)


def cmd_figscale(cfg: RunConfig) -> Artifact:
    if cfg.na is not None or cfg.nr is not None:
        combos = [(cfg.na or cfg.nr, cfg.nr or cfg.na)]
    else:
        combos = [(n, n) for n in FIGSCALE_ORDERS]
    rows = []
    for n_a, n_r in combos:
        for w in range(1, cfg.w + 1):
            g = GateConfig(n_a, n_r, cfg.nt, w, cfg.ptot)
            rows.append([n_a, n_r, cfg.nt, w, gates.gate_budget(g)])
    return Artifact(["n_a", "n_r", "n_t", "w", "gate_budget"], rows, {"gate_budget": "formula"})


def cmd_resources(cfg: RunConfig) -> Artifact:
    g = _gate_config(cfg)
    rc = gates.resource_count(g, FactoryCostModel.from_dict(cfg.factory_model))
    header = ["source", "n_a", "n_r", "n_t", "w", "p_gate_cnot", "p_gate_cnot_exact",
              "t_g", "e_add", "e_re", "n_cs", "n_elim", "bell_states", "elim_states"]
    rows = [["formula", g.n_a, g.n_r, g.n_t, g.w, gates.p_gate_cnot(g),
             gates.p_gate_cnot_exact(g), rc.t_g, rc.e_add, rc.e_re, rc.n_cs, rc.n_elim,
             rc.bell_states, rc.elim_states]]
    if (g.n_a, g.n_r, g.n_t, g.w) == (3, 2, 1, 4):
        ref = {k: v.value for k, v in RESOURCES_W4.items()}
        ref.update({k: v.value for k, v in PRIMITIVES_95.items()})
        rows.append(["paper-reference", g.n_a, g.n_r, g.n_t, g.w, "", "", ref["t_g"],
                     ref["e_add"], ref["e_re"], ref["n_cs"], ref["n_elim"], "", ""])
    return Artifact(header, rows, {"formula": "row source=formula",
                                   "paper-reference": "row source=paper-reference"})


def cmd_factory(cfg: RunConfig) -> Artifact:
    model = FactoryCostModel.from_dict(cfg.factory_model)
    grid = gates.factory_grid(cfg.ptot, FACTORY_ORDERS, cfg.nt, model)
    rows = [[r.n_a, r.n_r, r.n_t, r.w, r.p_enc, r.bell_states, r.elim_states] for r in grid]
    best = min(grid, key=lambda r: (r.bell_states, r.elim_states))
    extra = {
        "minimum": {"n_a": best.n_a, "n_r": best.n_r, "w": best.w,
                    "bell_states": best.bell_states, "elim_states": best.elim_states},
        "reference_minimum": {k: v.value for k, v in FACTORY_95.items()},
        "cost_model": model.to_dict(),
    }
    return Artifact(["n_a", "n_r", "n_t", "w", "p_gate_cnot", "bell_states", "elim_states"],
                    rows, {"bell_states": "formula", "elim_states": "formula",
                           "reference_minimum": "paper-reference"}, extra)


def cmd_mc(cfg: RunConfig) -> Artifact:
    g = _gate_config(cfg)
    rows = montecarlo.mc_report(g, cfg.trials, RngStream(cfg.seed),
                                FactoryCostModel.from_dict(cfg.factory_model))
    failed = any(r.gated and not abs(r.z) <= montecarlo.Z_GATE for r in rows)
    header = list(montecarlo.ReportRow._fields)
    return Artifact(header, [list(r) for r in rows],
                    {"analytic": "formula or paper-reference (see source)",
                     "empirical": "monte-carlo"},
                    {"z_gate": montecarlo.Z_GATE}, failed)


def cmd_verify(cfg: RunConfig) -> Artifact:
    checks = verify.run_verification()
    return Artifact(["name", "passed", "detail"], [list(c) for c in checks],
                    {"checks": "formula"}, failed=not all(c.passed for c in checks))


def cmd_klm_compare(cfg: RunConfig) -> Artifact:
    rows = []
    for level in range(cfg.w + 1):
        f, cs = gates.klm_concat(KLM_F0, level)
        rows.append([level, float(KLM_F0), f, cs])
    elim, cs = gates.klm_resource_bound()
    extra = {
        "klm_resource_bound": {"elimination_circuits": elim, "cs_circuits": cs},
        "reference_cs95_width": KLM_CS_95_WIDTH.value,
    }
    return Artifact(["level", "f0", "f", "cs_success"], rows,
                    {"f": "formula", "cs_success": "formula",
                     "klm_resource_bound": "paper-reference",
                     "reference_cs95_width": "paper-reference"}, extra)


HANDLERS = {
    "figscale": cmd_figscale,
    "resources": cmd_resources,
    "factory": cmd_factory,
    "mc": cmd_mc,
    "verify": cmd_verify,
    "klm-compare": cmd_klm_compare,
}

HELP = {
    "figscale": "gate budget vs width for T_1/2 .. T_4/5 encoders (default ptot 0.99, w up to 30)",
    "resources": "expected uses, primitive counts and factory states (default 3,2,1, w=4)",
    "factory": "factory Bell/elimination states over n_a, n_r in 2..5 (default ptot 0.95)",
    "mc": "Monte Carlo vs analytic report (default 3,2,1, w=4, 1e5 trials, seed 1)",
    "verify": "elimination-circuit, |t_n> and parity-code golden checks",
    "klm-compare": "iterated KLM failure probability from f0 = 1/4 (levels 0..w, default 4)",
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ptot", type=float, help="target total success probability")
    common.add_argument("--na", type=int, help="adding-encoder teleporter order n_a")
    common.add_argument("--nr", type=int, help="re-encoder teleporter order n_r")
    common.add_argument("--nt", type=int, help="gate teleporter order n_t")
    common.add_argument("--w", type=int, help="encoding width (maximum width for figscale)")
    common.add_argument("--trials", type=int, help="Monte Carlo trials")
    common.add_argument("--seed", type=int, help="Monte Carlo seed")
    common.add_argument("--out", help="output file (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), help="output format")
    common.add_argument("--config", help="JSON config file; flags override its keys")
    parser = argparse.ArgumentParser(
        prog="loqc_parity", description="Parity-encoded linear-optics gate analysis"
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common], help=HELP[name], description=HELP[name])
    return parser


def run_command(argv: Sequence[str] | None = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    overrides = {k: getattr(args, k) for k in _TYPES if hasattr(args, k)}
    try:
        cfg = load_config(args.config, args.command, overrides)
        art = HANDLERS[cfg.command](cfg)
    except (ConfigError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    text = render(cfg, art)
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return 1 if art.failed else 0


def main() -> None:
    sys.exit(run_command())
