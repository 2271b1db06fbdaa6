"""Command-line pipeline driver.

Subcommands:

* ``swt map -c config.json``     fermionic model -> qubit Hamiltonian
* ``swt run -c config.json``     full transformation -> SwtReport JSON
* ``swt verify -c config.json``  oracle equivalences + scaling laws,
                                 with scaling.csv and scaling.png artifacts

Exit codes: 0 success, 2 configuration/IO error, 3 infeasible first-order
elimination (degenerate energy denominators), 4 verification failure.

Configs are JSON.  A model config carries {"model", "U", "mu", "eps", "V"}
and may embed "tol", "max_closure_depth" and "verify" (booleans/numbers;
command-line flags win).  ``run`` also accepts a qubit-Hamiltonian JSON
(the output of ``map``) directly.  All JSON artifacts are written with a
fixed key order and shortest round-trip float formatting, so identical
configs produce byte-identical outputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .dense import MAX_DENSE_QUBITS, exact_generator_dense
from .fermions import jw_map
from .models import model_from_config
from .pauli import PauliSum
from .swt import (
    DEFAULT_MAX_DEPTH,
    DEFAULT_TOL,
    ClosureError,
    GeneratorInfeasibleError,
    SwtReport,
    compute_eta,
    build_ansatz,
    effective_hamiltonian,
    solve_generator,
    split,
)
from .verify import verify_config
from . import report as report_artifacts

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_VERIFY = 4

VERIFY_AUTO_MAX_QUBITS = 10


class ConfigError(Exception):
    pass


def _load_config(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config {path!r} must be a JSON object")
    return data


def _resolve(args, config: dict) -> tuple[float, int, bool | None]:
    """Merge CLI flags over config-embedded settings; flags win."""
    tol = args.tol if args.tol is not None else float(config.get("tol", DEFAULT_TOL))
    depth = args.depth if args.depth is not None else int(config.get("max_closure_depth", DEFAULT_MAX_DEPTH))
    if args.no_verify:
        verify = False
    elif "verify" in config:
        verify = bool(config["verify"])
    else:
        verify = None  # auto: on for small registers
    return tol, depth, verify


def _hamiltonian_from_config(config: dict) -> PauliSum:
    if "model" in config:
        return jw_map(model_from_config(config))
    if "n_qubits" in config and "terms" in config:
        return PauliSum.from_json_dict(config)
    raise ConfigError(
        "config must be a model config ({'model', ...}) or a qubit-Hamiltonian "
        "JSON ({'n_qubits', 'terms'})"
    )


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2) + "\n")


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_map(args) -> int:
    config = _load_config(args.config)
    if "model" not in config:
        raise ConfigError("`map` requires a model config with a 'model' key")
    h = jw_map(model_from_config(config))
    out = _out_dir(args)
    _write_json(out / "qubit_hamiltonian.json", h.to_json_dict())
    (out / "qubit_hamiltonian.txt").write_text(h.render_text() + "\n")
    if args.format == "json":
        print(json.dumps(h.to_json_dict(), indent=2))
    else:
        print(h.render_text())
    return EXIT_OK


def _attach_degeneracies(parts, swt_report: SwtReport) -> SwtReport:
    _, degeneracies = exact_generator_dense(parts)
    return SwtReport(
        eta=swt_report.eta,
        generator=swt_report.generator,
        h_eff=swt_report.h_eff,
        constraint_residual=swt_report.constraint_residual,
        closure_depth=swt_report.closure_depth,
        degenerate_pairs=degeneracies.pairs,
    )


def cmd_run(args) -> int:
    config = _load_config(args.config)
    tol, depth, verify = _resolve(args, config)
    h = _hamiltonian_from_config(config)
    oracle_on = verify if verify is not None else h.n_qubits <= VERIFY_AUTO_MAX_QUBITS
    if h.n_qubits > MAX_DENSE_QUBITS:
        oracle_on = False

    parts = split(h)
    eta = compute_eta(parts)
    basis = build_ansatz(eta, parts.h0, depth)
    infeasible: GeneratorInfeasibleError | None = None
    try:
        generator, residual = solve_generator(basis, parts, tol)
    except GeneratorInfeasibleError as exc:
        generator, residual = exc.generator, exc.residual
        infeasible = exc
    swt_report = SwtReport(
        eta=eta,
        generator=generator,
        h_eff=effective_hamiltonian(parts, generator),
        constraint_residual=residual,
        closure_depth=basis.closure_depth,
    )
    if oracle_on:
        swt_report = _attach_degeneracies(parts, swt_report)

    out = _out_dir(args)
    _write_json(out / "swt_report.json", swt_report.to_json_dict(include_degeneracies=oracle_on))
    if args.format == "json":
        print(json.dumps(swt_report.to_json_dict(include_degeneracies=oracle_on), indent=2))
    else:
        print(f"residual = {residual:.6e}")
        print(f"closure_depth = {basis.closure_depth}")
        print(f"generator_terms = {len(swt_report.generator)}")
        print(f"h_eff_terms = {len(swt_report.h_eff)}")
    if infeasible is not None:
        unmatched = ", ".join(s.label for s in infeasible.unmatched)
        print(f"infeasible: unmatched off-diagonal strings: {unmatched}", file=sys.stderr)
        if oracle_on and swt_report.degenerate_pairs:
            print(
                f"degenerate basis-state pairs: {len(swt_report.degenerate_pairs)}",
                file=sys.stderr,
            )
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_verify(args) -> int:
    config = _load_config(args.config)
    tol, depth, _ = _resolve(args, config)
    if "model" not in config:
        raise ConfigError("`verify` requires a model config (scaling tests rebuild at V/2)")
    report = verify_config(config, tol=tol, max_depth=depth)

    out = _out_dir(args)
    _write_json(out / "verify_report.json", report.to_json_dict())
    report_artifacts.write_scaling_csv(out / "scaling.csv", report.scaling)
    report_artifacts.render_scaling_figure(out / "scaling.png", report.scaling)

    if args.format == "json":
        print(json.dumps(report.to_json_dict(), indent=2))
    else:
        for check in report.checks:
            print(check.line())
        if report.degenerate_pairs:
            print(f"degenerate basis-state pairs: {len(report.degenerate_pairs.pairs)}")
    return EXIT_OK if report.passed else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="swt",
        description="Schrieffer-Wolff transformation pipeline for qubit-mapped fermionic models.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func, helptext in (
        ("map", cmd_map, "map a fermionic model to its qubit Hamiltonian"),
        ("run", cmd_run, "run the full transformation and write the report"),
        ("verify", cmd_verify, "cross-check against the dense oracle and scaling laws"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("-c", "--config", required=True, help="JSON config path")
        p.add_argument("--tol", type=float, default=None, help="residual tolerance (default 1e-10)")
        p.add_argument("--depth", type=int, default=None, help="max ansatz closure depth (default 4)")
        p.add_argument("--no-verify", action="store_true", help="disable the dense oracle attachment")
        p.add_argument("--out", default=".", help="output directory (default: current)")
        p.add_argument("--format", choices=("json", "text"), default="text", help="stdout format")
        p.set_defaults(func=func)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ClosureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
