"""Scenario runner: honest runs, single attacks or the whole defense suite.

Exit status is 0 when every outcome matches what the scheme is known to
allow, 1 for a bad command line and 2 when an invariant is violated (an
honest run rejected, an original-scheme attack failed, an improved-scheme
attack succeeded at a significant rate, or an internal consistency check
tripped).
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass

from . import attacks
from .attacks import CATALOG, AttackOutcome, AttackParams
from .common import ProtocolError
from .qsim import EncodingBasis, QuantumError

EXIT_OK, EXIT_USAGE, EXIT_INVARIANT = 0, 1, 2
SCENARIOS = ("honest", *CATALOG, "defense-suite")
# improved-scheme attacks whose success CI sits wholly above this count as a break
SIGNIFICANT_SUCCESS = 0.05


class UsageError(ValueError):
    pass


@dataclass(frozen=True)
class ScenarioConfig:
    scheme: str = "original"
    scenario: str = "honest"
    n: int = 8
    t: int = 3
    l: int = 16
    b: float = math.cos(math.pi / 8)
    trials: int = 1000
    seed: int = 0
    format: str = "text"
    workers: int = 1

    def validate(self) -> "ScenarioConfig":
        if self.scheme not in attacks.SCHEMES:
            raise UsageError(f"unknown scheme {self.scheme!r}; choose from {', '.join(attacks.SCHEMES)}")
        if self.scenario not in SCENARIOS:
            raise UsageError(f"unknown scenario {self.scenario!r}; catalog: {', '.join(SCENARIOS)}")
        if self.scenario == "defense-suite" and self.scheme != "improved":
            raise UsageError("defense-suite runs against the improved scheme only")
        for name in ("n", "t", "trials", "workers"):
            if getattr(self, name) < 1:
                raise UsageError(f"{name} must be at least 1")
        if self.scheme == "improved":
            if self.l < 1:
                raise UsageError("l must be at least 1")
            if not 0 < self.b < 1:
                raise UsageError("b must lie strictly between 0 and 1")
            if self.basis.is_balanced:
                raise UsageError("b = 1/sqrt(2) gives a balanced basis, which the improved scheme rejects")
        if self.format not in ("text", "json"):
            raise UsageError("format must be text or json")
        return self

    @property
    def basis(self) -> EncodingBasis:
        return EncodingBasis.from_b(self.b)

    def params(self) -> AttackParams:
        return AttackParams(n=self.n, t=self.t, l=self.l, basis=self.basis)

    def as_dict(self) -> dict:
        out = {k: getattr(self, k) for k in ("scheme", "scenario", "n", "t", "trials", "seed")}
        improved = self.scheme == "improved"
        out["l"] = self.l if improved else None
        out["b"] = self.b if improved else None
        return out


def run_scenario(config: ScenarioConfig) -> list[AttackOutcome]:
    config.validate()
    params = config.params()
    if config.scenario == "defense-suite":
        return attacks.defense_suite(config.trials, config.seed, params, config.workers)
    return attacks.run_attack(config.scenario, config.scheme, config.trials, config.seed, params, config.workers)


def violations(outcomes: list[AttackOutcome]) -> list[str]:
    """Outcomes that contradict what the scheme is known to allow."""
    found = []
    for o in outcomes:
        tag = o.attack if o.variant is None else f"{o.attack}[{o.variant}]"
        if o.attack == "honest":
            if o.acceptance_rate != 1.0:
                found.append(f"{tag}: honest acceptance {o.acceptance_rate}")
        elif o.scheme == "original":
            if o.success_rate != 1.0:
                found.append(f"{tag}: attack success {o.success_rate} on the original scheme")
        elif o.success_ci[0] > SIGNIFICANT_SUCCESS:
            found.append(f"{tag}: attack success {o.success_rate} on the improved scheme")
    return found


def build_report(config: ScenarioConfig, outcomes: list[AttackOutcome]) -> dict:
    problems = violations(outcomes)
    return {
        "config": config.as_dict(),
        "results": [o.as_dict() for o in outcomes],
        "violations": problems,
        "status": "violation" if problems else "ok",
    }


def render_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _fmt(x) -> str:
    return "-" if x is None else f"{x:.4f}"


def render_text(report: dict) -> str:
    cfg = report["config"]
    lines = [" ".join(f"{k}={cfg[k]}" for k in sorted(cfg) if cfg[k] is not None)]
    for r in report["results"]:
        name = r["attack"] if r["variant"] is None else f"{r['attack']}[{r['variant']}]"
        lines.append(
            f"{name:<28} {r['scheme']:<9} trials={r['trials']} "
            f"success={_fmt(r['success_rate'])} [{_fmt(r['success_ci'][0])}, {_fmt(r['success_ci'][1])}] "
            f"detection={_fmt(r['detection_rate'])} [{_fmt(r['detection_ci'][0])}, {_fmt(r['detection_ci'][1])}] "
            f"expected={_fmt(r['expected_detection'])} accept={_fmt(r['acceptance_rate'])}"
        )
        lines.append(f"    transcript {r['transcript_digest']}")
    for v in report["violations"]:
        lines.append(f"VIOLATION {v}")
    lines.append(f"status: {report['status']}")
    return "\n".join(lines) + "\n"


def list_scenarios() -> str:
    rows = [("honest", "both schemes run with no adversary")]
    rows += [(spec.name, spec.summary) for spec in CATALOG.values()]
    rows.append(("defense-suite", "every attack above against the improved scheme"))
    return "\n".join(f"{name:<22} {text}" for name, text in rows) + "\n"


def build_parser() -> argparse.ArgumentParser:
    d = ScenarioConfig()
    p = argparse.ArgumentParser(prog="qbmbs", description="Simulate the broadcasting multiple blind signature schemes and attacks on them.")
    p.add_argument("--scheme", default=d.scheme, choices=attacks.SCHEMES)
    p.add_argument("--scenario", default=d.scenario, help="honest, an attack id or defense-suite (see --list)")
    p.add_argument("--n", type=int, default=d.n, help="message length in bits")
    p.add_argument("--t", type=int, default=d.t, help="number of signatories")
    p.add_argument("--l", type=int, default=d.l, help="decoy pairs per channel (improved scheme)")
    p.add_argument("--b", type=float, default=d.b, help="encoding basis parameter, c = sqrt(1 - b^2)")
    p.add_argument("--trials", type=int, default=d.trials)
    p.add_argument("--seed", type=int, default=d.seed)
    p.add_argument("--format", default=d.format, choices=("text", "json"))
    p.add_argument("--workers", type=int, default=d.workers, help="worker processes for trials")
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--list", action="store_true", help="print the scenario catalog and exit")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.list:
        sys.stdout.write(list_scenarios())
        return EXIT_OK
    fields = {k: getattr(args, k) for k in ("scheme", "scenario", "n", "t", "l", "b", "trials", "seed", "format", "workers")}
    config = ScenarioConfig(**fields)
    try:
        config.validate()
    except (UsageError, QuantumError) as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        outcomes = run_scenario(config)
    except (ProtocolError, QuantumError) as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    report = build_report(config, outcomes)
    text = render_json(report) if config.format == "json" else render_text(report)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_INVARIANT if report["violations"] else EXIT_OK
