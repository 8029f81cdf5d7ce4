"""Command-line entry point ``dsqs``.

Exit codes: 0 success, 1 usage error, 2 numerical conditioning, 3 validation failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import circuit, entropy, kernels, phase_space, states
from .errors import (
    DomainError,
    IllConditionedKernelError,
    InvalidDistributionError,
    NumericalConsistencyError,
    SingularityError,
    StateSpecError,
)
from .numerics import EPS_TAIL, LatticeDims
from .validate import REFERENCE_ENTROPIES, run_validation

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_VALIDATION = 0, 1, 2, 3
COMPUTE = ("wavefunction", "kernel", "wigner", "husimi", "pfunction", "charfunc", "overlap", "entropy", "circuit")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    N: int = 3
    s: float = 1.0
    state: dict = field(default_factory=lambda: {"type": "fock", "n": 0})
    output_path: Optional[str] = None
    format: str = "json"
    cache_path: Optional[str] = None
    eps_tail: float = EPS_TAIL
    seed: int = 0

    def __post_init__(self):
        LatticeDims(self.N)
        if not self.s > 0:
            raise DomainError(f"squeezing parameter must be positive, got {self.s}")
        if self.format not in ("json", "csv"):
            raise DomainError(f"format must be json or csv, got {self.format}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def write_atomic(path: Optional[str], text: str):
    """Write ``text`` to ``path`` through a temporary file; ``None`` means stdout."""
    if path is None or path == "-":
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    directory = os.path.dirname(os.path.abspath(path))
    os.makedirs(directory, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _squeeze(args) -> float:
    given = [v is not None for v in (args.squeeze, args.squeeze_sq, args.squeeze_invsq)]
    if sum(given) > 1:
        raise UsageError("use only one of --squeeze, --squeeze-sq, --squeeze-invsq")
    if args.squeeze_sq is not None:
        return math.sqrt(args.squeeze_sq)
    if args.squeeze_invsq is not None:
        return 1 / math.sqrt(args.squeeze_invsq)
    return 1.0 if args.squeeze is None else args.squeeze


def _parse_scan(text: str):
    try:
        smin, smax, pts = text.split(":")
        return float(smin), float(smax), int(pts)
    except ValueError:
        raise UsageError(f"--scan expects smin:smax:points, got {text!r}") from None


def _state_arg(text: Optional[str]):
    if text is None:
        return {"type": "fock", "n": 0}
    if text.startswith("@"):
        with open(text[1:]) as fh:
            text = fh.read()
    return text


def _vector_payload(d: LatticeDims, vec, fmt: str, **meta) -> str:
    if fmt == "csv":
        lines = ["kappa,re,im"] + [f"{int(k)},{float(z.real)!r},{float(z.imag)!r}" for k, z in zip(d.labels, vec)]
        return "\n".join(lines) + "\n"
    payload = {"N": d.N, **meta, "values": [[float(z.real), float(z.imag)] for z in vec]}
    return json.dumps(payload)


def _grid_payload(g: phase_space.PhaseSpaceFunction, fmt: str, kind: Optional[str] = None, **extra) -> str:
    if fmt == "csv":
        return g.to_csv()
    if kind is not None:
        g = phase_space.PhaseSpaceFunction(g.dims, kind, np.array(g.values), g.order, g.s)
    return g.to_json(**extra)


# --------------------------------------------------------------------------
# commands


def cmd_compute(args, cfg: RunConfig) -> str:
    d = LatticeDims(cfg.N)
    cmd = cfg.command
    s = cfg.s
    if cmd == "wavefunction":
        vec = states.squeezed_number_state(d, args.level, s)
        return _vector_payload(d, vec, cfg.format, s=s, n=args.level, kind="wavefunction")
    if cmd == "kernel":
        kind = args.kernel_kind
        if kind in ("vacuum", "squeezed"):
            table = kernels.kernel_vacuum(d, 1.0 if kind == "vacuum" else s)
        elif kind == "number":
            table = kernels.kernel_number(d, args.level, args.route)
        else:
            table = kernels.kernel_ratio(d, s)
        g = phase_space.PhaseSpaceFunction(d, table.kind, np.array(table.values, dtype=complex), None, s)
        return g.to_csv() if cfg.format == "csv" else g.to_json(n=table.n)
    if cmd == "overlap":
        g = phase_space.overlap_Pn(d, args.level, s)
        return _grid_payload(g, cfg.format)

    rho = states.density_from_spec(cfg.state, d)
    if cmd in ("wigner", "husimi", "pfunction", "charfunc"):
        order = {"wigner": 0, "husimi": -1, "pfunction": 1}.get(cmd, getattr(args, "order", 0))
        if cmd == "husimi" and args.frame == "displaced":
            g = phase_space.squeezed_husimi(rho, s)
        elif cmd == "charfunc":
            g = phase_space.char_function(rho, order, s)
        else:
            g = phase_space.quasi_distribution(rho, order, s)
        return _grid_payload(g, cfg.format)
    if cmd == "entropy":
        s_grid = entropy.default_s_grid(*_parse_scan(args.scan_ref)) if args.scan_ref else None
        if args.scan:
            values = entropy.default_s_grid(*_parse_scan(args.scan))
        else:
            values = [s]
        reports = entropy.entropy_scan(rho, values, args.min_ref, args.min_value, s_grid)
        if cfg.format == "csv":
            return entropy.scan_to_csv(reports)
        return reports[0].to_json() if len(reports) == 1 else entropy.scan_to_json(reports)
    if cmd == "circuit":
        g, synth = circuit.scan_circuit(d, rho, s, args.mode, shots=args.shots, rng=cfg.seed if args.shots else None)
        return _grid_payload(g, cfg.format, source="circuit", synthesized_ft=synth)
    raise UsageError(f"unknown command {cmd}")


def reproduce(target: str, outdir: str) -> list:
    """Write the data behind a figure or table; returns the written paths."""
    written = []

    def put(name, text):
        path = os.path.join(outdir, name)
        write_atomic(path, text)
        written.append(path)

    if target == "fig1":
        d = LatticeDims(17)
        for n in (0, 1):
            for tag, s in (("s1", 1.0), ("s2_5", math.sqrt(5)), ("sinv2_5", 1 / math.sqrt(5))):
                put(f"fig1_P{n}_{tag}.csv", phase_space.overlap_Pn(d, n, s).to_csv())
    elif target == "fig3":
        rho = states.pure_density(states.number_state(3, 0))
        grid = entropy.default_s_grid()
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            reports = entropy.entropy_scan(rho, np.geomspace(0.2, 5.0, 97), "A", s_grid=grid)
        lines = ["s,E_joint,E_Q,E_R,correlation"]
        lines += [f"{r.s!r},{r.E_joint!r},{r.E_Q!r},{r.E_R!r},{r.correlation!r}" for r in reports]
        put("fig3_scan.csv", "\n".join(lines) + "\n")
    elif target == "entropy-table":
        rows = []
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            for N, ref in REFERENCE_ENTROPIES.items():
                rho = states.pure_density(states.number_state(N, 0))
                rep = entropy.entropy_report(rho, 1.0, min_ref="A")
                rows.append(
                    {
                        "N": N,
                        "E_at_s1": rep.E_joint,
                        "reference": ref,
                        "deviation": abs(rep.E_joint - ref),
                        "min_E_over_s": rep.min_E_joint,
                        "s_at_min": rep.s_at_min,
                    }
                )
        put("entropy_table.json", json.dumps({"rows": rows}, indent=1))
    else:
        raise UsageError(f"unknown reproduce target {target!r}")
    return written


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="dsqs", description="Discrete squeezed states on the N x N phase space.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp, state=True):
        sp.add_argument("--n-dim", type=int, default=3, help="odd Hilbert-space dimension N >= 3")
        g = sp.add_argument_group("squeezing")
        g.add_argument("--squeeze", type=float, help="squeezing parameter s")
        g.add_argument("--squeeze-sq", type=float, help="give s^2 instead of s")
        g.add_argument("--squeeze-invsq", type=float, help="give s^-2 instead of s")
        if state:
            sp.add_argument("--state", help="StateSpec JSON text, or @file")
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--output", help="output file (default stdout)")
        sp.add_argument("--cache", default=os.environ.get("DSQS_CACHE"), help="kernel cache file (default $DSQS_CACHE)")
        sp.add_argument("--seed", type=int, default=0)

    r = sub.add_parser("reproduce", help="write figure/table data")
    r.add_argument("target", choices=("fig1", "fig3", "entropy-table"))
    r.add_argument("--output", default=".", help="output directory")
    v = sub.add_parser("validate", help="run the invariant suite")
    v.add_argument("level", choices=("fast", "full"), nargs="?", default="fast")
    v.add_argument("--output")
    v.add_argument("--seed", type=int, default=0)

    for name in COMPUTE:
        sp = sub.add_parser(name)
        common(sp, state=name not in ("wavefunction", "kernel", "overlap"))
        if name in ("wavefunction", "kernel", "overlap"):
            sp.add_argument("--level", type=int, default=0, help="number-state level n")
        if name == "kernel":
            sp.add_argument("--kind", dest="kernel_kind", choices=kernels.KINDS, default="vacuum")
            sp.add_argument("--route", choices=("coeff", "jet"), default="coeff")
        if name == "charfunc":
            sp.add_argument("--order", type=int, choices=(-1, 0, 1), default=0)
        if name == "husimi":
            sp.add_argument("--frame", choices=("displaced", "transformed"), default="displaced",
                            help="squeezed state (transformed) or displaced squeezed vacua (displaced)")
        if name == "entropy":
            sp.add_argument("--scan", help="smin:smax:points for the report rows")
            sp.add_argument("--scan-ref", help="smin:smax:points grid for the reference minimum")
            sp.add_argument("--min-ref", choices=entropy.MIN_REFS, default="A")
            sp.add_argument("--min-value", type=float, help="reference minimum for --min-ref B")
        if name == "circuit":
            sp.add_argument("--mode", choices=("char", "wigner"), default="char")
            sp.add_argument("--shots", type=int)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        if args.command == "reproduce":
            for path in reproduce(args.target, args.output):
                print(path)
            return EXIT_OK
        if args.command == "validate":
            report = run_validation(args.level, args.seed)
            write_atomic(args.output, json.dumps(report, indent=1))
            return EXIT_OK if report["passed"] else EXIT_VALIDATION
        cfg = RunConfig(
            command=args.command,
            N=args.n_dim,
            s=_squeeze(args),
            state=_state_arg(getattr(args, "state", None)),
            output_path=args.output,
            format=args.format,
            cache_path=args.cache,
            seed=args.seed,
        )
        if cfg.cache_path and os.path.exists(cfg.cache_path):
            kernels.load_cache(cfg.cache_path)
        text = cmd_compute(args, cfg)
        write_atomic(cfg.output_path, text)
        if cfg.cache_path:
            kernels.save_cache(cfg.cache_path)
        return EXIT_OK
    except StateSpecError as exc:
        print(f"dsqs: invalid state specification: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, DomainError) as exc:
        print(f"dsqs: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (IllConditionedKernelError, NumericalConsistencyError, SingularityError, InvalidDistributionError) as exc:
        print(f"dsqs: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
