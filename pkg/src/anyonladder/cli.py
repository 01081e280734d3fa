"""Command-line surface: run experiments, list presets, self-check.

Exit codes: 0 success, 1 config error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

import numpy as np

from .config import ConfigError, ExperimentConfig, parse_config_text
from .dynamics import QuenchConfig, evolve, evolve_stepping, initial_state
from .hamiltonian import ModelParams, build_full, build_full_via_anyons, make_basis
from .operators import check_anyon_commutators
from .presets import list_presets, preset_configs
from .spectral import eig
from .sweeps import NumericalError, run
from .symmetry import build_K, residual


def _apply_overrides(mapping: dict[str, str], overrides: list[str]) -> dict[str, str]:
    out = dict(mapping)
    for item in overrides:
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ConfigError("override", f"expected key=value, got {item!r}")
        out[key.strip()] = value.strip()
    return out


def _load_configs(target: str, overrides: list[str]) -> list[tuple[str, ExperimentConfig]]:
    """Resolve a preset name or config file into labeled configs."""
    try:
        labeled = preset_configs(target)
    except KeyError:
        path = Path(target)
        if not path.is_file():
            raise ConfigError(
                "target", f"{target!r} is neither a preset nor a config file"
            ) from None
        mapping = parse_config_text(path.read_text(), source=str(path))
        labeled = [(path.stem, mapping)]
    out = []
    for label, mapping in labeled:
        merged = _apply_overrides(mapping, overrides)
        cfg = ExperimentConfig.from_mapping(merged)
        out.append((merged.get("label") or label, cfg))
    return out


def _cmd_run(args) -> int:
    for label, cfg in _load_configs(args.target, args.override):
        path = run(cfg, args.out, label=label, jobs=args.jobs, force=args.force)
        print(path)
    return 0


def _cmd_list_presets(_args) -> int:
    names = list_presets()
    width = max(len(n) for n, _ in names)
    for name, desc in names:
        print(f"{name:<{width}}  {desc}")
    return 0


def _cmd_check(_args) -> int:
    """Fast invariant battery over small instances."""
    failures = 0

    def report(name: str, value: float, tol: float):
        nonlocal failures
        ok = value <= tol
        failures += 0 if ok else 1
        print(f"{'ok  ' if ok else 'FAIL'} {name}: {value:.3e} (tol {tol:g})")

    t0 = time.time()
    worst = max(
        check_anyon_commutators(3, 3, th)
        for th in (0.0, 0.3, np.pi / 2, 0.8 * np.pi, np.pi)
    )
    report("deformed commutators (L=3, cap=3)", worst, 1e-12)

    worst = 0.0
    for L in (2, 3):
        for th in (0.0, 0.4 * np.pi, np.pi):
            p = ModelParams(L=L, N=2, Jp=0.1, theta=th)
            basis = make_basis(p)
            d = build_full_via_anyons(p, basis).entries - build_full(p, basis).entries
            worst = max(worst, float(np.abs(d).max()))
    report("direct build vs anyon-operator build", worst, 1e-12)

    p = ModelParams(L=6, N=2, Jp=0.1, theta=0.4 * np.pi)
    basis = make_basis(p)
    H = build_full(p, basis)
    K = build_K(basis, p.theta)
    worst = max(
        residual(K, H.term("intra_A") + H.term("intra_B") + H.term("onsite")),
        residual(build_K(basis, 0.0), build_full(p.with_(theta=0.0), basis).term("inter")),
    )
    report("antiunitary conjugation residual", worst, 1e-12)

    p = ModelParams(L=4, N=2, Jp=0.04, theta=0.4 * np.pi)
    basis = make_basis(p)
    H = build_full(p, basis, keep_terms=False)
    spec = eig(H)
    psi0, _, _ = initial_state(eig(build_full(p.with_(Jp=0.035), basis, keep_terms=False)))
    times = np.array([0.0, 1.0, 5.0, 20.0])
    d = evolve(spec, psi0, times) - evolve_stepping(H, psi0, times)
    report("spectral vs stepping propagation", float(np.abs(d).max()), 1e-8)

    print(f"{'all checks passed' if failures == 0 else f'{failures} check(s) failed'} "
          f"({time.time() - t0:.1f}s)")
    return 0 if failures == 0 else 2


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="anyonladder",
        description="Spectra, symmetries, and quench dynamics of a non-reciprocal anyon ladder.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run a preset or a key=value config file")
    p_run.add_argument("target", help="preset name or path to a config file")
    p_run.add_argument("--out", default="out", help="output directory (default: out)")
    p_run.add_argument("--jobs", type=int, default=None, help="worker threads (default: all cores)")
    p_run.add_argument(
        "--override", action="append", default=[], metavar="KEY=VALUE",
        help="override a config value (repeatable; highest precedence)",
    )
    p_run.add_argument("--force", action="store_true", help="ignore cached results")
    p_run.set_defaults(func=_cmd_run)

    p_list = sub.add_parser("list-presets", help="list available presets")
    p_list.set_defaults(func=_cmd_list_presets)

    p_check = sub.add_parser("check", help="run the fast invariant battery")
    p_check.set_defaults(func=_cmd_check)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
