"""Command-line entry point: samplers, verifiers, the CLT harness, and
the linearization sweep, emitting CSV/JSON artifacts with pass/fail
reports.  Exit code is 0 iff every requested check passes.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__, fluct, serialize, symgroup
from .chebyshev import lsvk_shape
from .interlacing import (
    Diagram,
    InterlacingPair,
    markov_forward,
    markov_inverse,
    rescale_diagram,
)
from .jacobi import (
    critical_points,
    de_sample,
    spectral_pair,
    trace_formula_check,
    tridiag_eigenvalues,
)
from .plancherel import (
    Partition,
    partition_diagram,
    plancherel_grow,
    verify_dims,
)
from .seeds import DEFAULT_SEED, STREAM_DE, derive_seed
from .wigner import (
    EnsembleKind,
    EnsembleSpec,
    build_diagrams,
    hermitian_eigenvalues,
    sample,
)

_CLT_ALIASES = {
    "gue": "gue-trace",
    "unimodular": "unimodular-trace",
    "unif": "unimodular-trace",
    "plancherel": "plancherel-transition",
}

_DEFAULT_GRID = "-3:3:601"
_DEFAULT_Z_GRID = "3,-3,2+2j,-2.5+0.5j,1j"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="markovlab",
        description="Interlacing sequences, the Markov transform, and "
        "fluctuation experiments.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int, default=None)
        p.add_argument("--out", default=None)
        p.add_argument("--format", choices=["csv", "json"], default=None)
        p.add_argument("--config", default=None)
        p.add_argument("--threads", type=int, default=None)

    p = sub.add_parser("markov", help="forward or inverse Markov transform")
    p.add_argument("direction", choices=["fwd", "inv"])
    p.add_argument("--in", dest="input", required=True)
    common(p)

    p = sub.add_parser("sample", help="draw a random matrix")
    p.add_argument("kind", choices=["de", "gue", "unif"])
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--beta", type=float, default=None)
    common(p)

    p = sub.add_parser("grow", help="Plancherel growth chain")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--chain", action="store_true")
    common(p)

    p = sub.add_parser("diagrams", help="continual diagrams and limit-shape distances")
    p.add_argument("--ensemble", choices=["gue", "unif", "de"], default=None)
    p.add_argument("--partition", default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--grid", default=None)
    common(p)

    p = sub.add_parser("clt", help="Monte Carlo CLT harness")
    p.add_argument("--ensemble", required=True)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--M", type=int, default=None)
    p.add_argument("--kmax", type=int, default=None)
    common(p)

    p = sub.add_parser("verify", help="exact identity suites")
    p.add_argument(
        "--suite",
        choices=[
            "jm-path", "trace-transition", "nonbacktracking", "bass",
            "trace-formula", "dims", "all",
        ],
        default="all",
    )
    p.add_argument("--l", type=int, default=None)
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--M", type=int, default=None)
    p.add_argument("--kmax", type=int, default=None)
    p.add_argument("--beta", type=float, default=None)
    common(p)

    p = sub.add_parser("linearize", help="linearized transport residual sweep")
    p.add_argument("--epsilon", type=float, default=None)
    p.add_argument("--nodes", type=int, default=None)
    p.add_argument("--grid", default=None)
    common(p)

    return parser


def load_config(path: str) -> dict:
    """Plain key=value configuration file; '#' starts a comment."""
    out = {}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, _, value = line.partition("=")
            out[key.strip()] = value.strip()
    return out


_CONFIG_TYPES = {
    "n": int, "M": int, "kmax": int, "l": int, "m": int,
    "nodes": int, "seed": int, "threads": int,
    "beta": float, "epsilon": float,
}


def effective(args, name: str, default):
    """CLI flag if given, else config file entry, else the default."""
    value = getattr(args, name, None)
    if value is not None and value is not False:
        return value
    config = getattr(args, "_config", {})
    if name in config:
        caster = _CONFIG_TYPES.get(name, str)
        return caster(config[name])
    return default


def _parse_grid(text: str) -> np.ndarray:
    lo, hi, count = text.split(":")
    return np.linspace(float(lo), float(hi), int(count))


def _parse_z_grid(text: str) -> np.ndarray:
    return np.array([complex(tok) for tok in text.split(",")])


def _write_out(args, writer) -> None:
    out = effective(args, "out", None)
    if out is None:
        writer(sys.stdout)
    else:
        with open(out, "w", newline="") as fh:
            writer(fh)


def _finish(args, command: str, params: dict, checks: list, csv_payload=None) -> int:
    """Emit the artifact (CSV payload or JSON report) and return the exit code."""
    fmt = effective(args, "format", "csv" if csv_payload else "json")
    if fmt == "json":
        _write_out(
            args,
            lambda fh: serialize.write_report(fh, command, params, checks),
        )
        if effective(args, "out", None) is not None:
            serialize.print_checks(checks)
    else:
        if csv_payload is not None:
            header, rows = csv_payload
            _write_out(
                args,
                lambda fh: serialize.write_csv(fh, header, rows, params.get("seed")),
            )
        else:
            rows = [
                (c["name"], c["residual_or_stat"], c["target"], c["tolerance"],
                 c["pass"])
                for c in checks
            ]
            _write_out(
                args,
                lambda fh: serialize.write_csv(
                    fh,
                    ["name", "residual_or_stat", "target", "tolerance", "pass"],
                    rows,
                    params.get("seed"),
                ),
            )
        if checks and effective(args, "out", None) is not None:
            serialize.print_checks(checks)
    return 0 if serialize.all_pass(checks) else 1


# ---------------------------------------------------------------------------
# Subcommands.


def cmd_markov(args) -> int:
    seed = effective(args, "seed", DEFAULT_SEED)
    _, rows, _ = serialize.read_csv(args.input)
    if args.direction == "fwd":
        pair = serialize.parse_pair(rows)
        mu = markov_forward(pair)
        payload = (serialize.MEASURE_HEADER, list(serialize.measure_rows(mu)))
    else:
        mu = serialize.parse_measure(rows)
        pair = markov_inverse(mu)
        payload = (serialize.MEASURE_HEADER, list(serialize.pair_rows(pair)))
    header, rows_out = payload
    _write_out(args, lambda fh: serialize.write_csv(fh, header, rows_out, seed))
    return 0


def cmd_sample(args) -> int:
    seed = effective(args, "seed", DEFAULT_SEED)
    n = effective(args, "n", 10)
    if args.kind == "de":
        beta = effective(args, "beta", 2.0)
        j = de_sample(n, beta, seed)
        rows = [
            (i, j.diag[i], j.offdiag[i] if i < n - 1 else "")
            for i in range(n)
        ]
        payload = (serialize.JACOBI_HEADER, rows)
    else:
        kind = EnsembleKind.GUE if args.kind == "gue" else EnsembleKind.UNIMODULAR
        h = sample(EnsembleSpec(kind, n), seed)
        eigs = hermitian_eigenvalues(h)
        sub = hermitian_eigenvalues(h.submatrix())
        crit = critical_points(eigs)
        rows = (
            [("eigenvalue", i, v) for i, v in enumerate(eigs)]
            + [("submatrix_eigenvalue", i, v) for i, v in enumerate(sub)]
            + [("critical_point", i, v) for i, v in enumerate(crit)]
        )
        payload = (serialize.SPECTRUM_HEADER, rows)
    header, rows_out = payload
    _write_out(args, lambda fh: serialize.write_csv(fh, header, rows_out, seed))
    return 0


def cmd_grow(args) -> int:
    seed = effective(args, "seed", DEFAULT_SEED)
    n = effective(args, "n", 100)
    if args.chain:
        chain = plancherel_grow(n, seed, return_chain=True)
        rows = [(i, str(p)) for i, p in enumerate(chain)]
    else:
        rows = [(n, str(plancherel_grow(n, seed)))]
    _write_out(
        args,
        lambda fh: serialize.write_csv(fh, ["step", "partition"], rows, seed),
    )
    return 0


def cmd_diagrams(args) -> int:
    seed = effective(args, "seed", DEFAULT_SEED)
    grid = _parse_grid(effective(args, "grid", _DEFAULT_GRID))
    partition = effective(args, "partition", None)
    checks = []
    if partition is not None:
        p = Partition.parse(partition)
        omega = partition_diagram(p)
        rows = [
            (x, ov, "", abs(x))
            for x, ov in zip(grid, omega.eval(grid))
        ]
    else:
        ensemble = effective(args, "ensemble", "gue")
        n = effective(args, "n", 50)
        scale = float(np.sqrt(n))
        if ensemble == "de":
            beta = effective(args, "beta", 2.0)
            j = de_sample(n, beta, seed)
            pair = spectral_pair(j)
            eigs = tridiag_eigenvalues(j)
            omega = Diagram(pair)
            varpi = Diagram(InterlacingPair(eigs, critical_points(eigs)))
        else:
            kind = EnsembleKind.GUE if ensemble == "gue" else EnsembleKind.UNIMODULAR
            h = sample(EnsembleSpec(kind, n), seed)
            omega, varpi = build_diagrams(h)
        omega = rescale_diagram(omega, scale)
        varpi = rescale_diagram(varpi, scale)
        limit = lsvk_shape(grid)
        ov = omega.eval(grid)
        pv = varpi.eval(grid)
        rows = list(zip(grid, ov, pv, limit))
        checks = [
            serialize.check(
                "sup_distance_submatrix_diagram",
                float(np.max(np.abs(ov - limit))), 0.0, 0.2,
            ),
            serialize.check(
                "sup_distance_critical_diagram",
                float(np.max(np.abs(pv - limit))), 0.0, 0.2,
            ),
        ]
    params = {
        "seed": seed,
        "grid": effective(args, "grid", _DEFAULT_GRID),
        "partition": partition,
        "ensemble": effective(args, "ensemble", None),
        "n": effective(args, "n", None),
    }
    return _finish(
        args, "diagrams", params, checks,
        csv_payload=(["x", "omega", "varpi", "limit"], rows),
    )


def cmd_clt(args) -> int:
    ensemble = _CLT_ALIASES.get(args.ensemble, args.ensemble)
    if ensemble not in fluct.ENSEMBLES:
        raise SystemExit(f"--ensemble: unknown ensemble {args.ensemble!r}")
    seed = effective(args, "seed", DEFAULT_SEED)
    n = effective(args, "n", 100)
    M = effective(args, "M", 200)
    k_max = effective(args, "kmax", 5)
    threads = effective(args, "threads", 1)
    stats = fluct.clt_run(ensemble, n, M, k_max, seed, threads)
    summaries = fluct.clt_summary(stats)
    rows = [
        (s.ensemble, s.k, s.n, s.M, s.mean, s.var, s.var_lo, s.var_hi,
         s.target, s.passed)
        for s in summaries
    ]
    checks = [
        serialize.check(
            f"{s.ensemble}_var_k{s.k}",
            s.var,
            s.target,
            0.15 * s.target if s.target > 0 else 0.05,
        )
        for s in summaries
    ]
    params = {"seed": seed, "n": n, "M": M, "kmax": k_max, "ensemble": ensemble}
    return _finish(
        args, "clt", params, checks, csv_payload=(serialize.CLT_HEADER, rows)
    )


def _verify_checks(args, suite: str, seed: int) -> list:
    checks = []
    if suite in ("jm-path", "all"):
        l = effective(args, "l", None)
        m = effective(args, "m", None)
        cases = (
            [(l, m)]
            if l is not None and m is not None
            else [(a, b) for b in range(2, 5) for a in range(0, 4)]
        )
        for a, b in cases:
            ok = symgroup.verify_jm_path_lemma(a, b)
            checks.append(
                serialize.check(f"jm_path_l{a}_m{b}", 0.0 if ok else 1.0, 0.0, 0.0)
            )
    if suite in ("trace-transition", "all"):
        n = effective(args, "n", 5) if suite != "all" else 5
        k_max = effective(args, "kmax", 6)
        residual = symgroup.verify_trace_vs_transition(k_max, n)
        checks.append(
            serialize.check("trace_vs_transition", float(residual), 0.0, 1e-12)
        )
    if suite in ("nonbacktracking", "all"):
        n = effective(args, "n", 6) if suite != "all" else 6
        k_max = effective(args, "kmax", 6)
        h = sample(EnsembleSpec(EnsembleKind.UNIMODULAR, n), seed)
        for k in range(1, k_max + 1):
            residual = symgroup.nonbacktracking_trace_identity(h, k)
            checks.append(
                serialize.check(f"nonbacktracking_k{k}", residual, 0.0, 1e-9)
            )
    if suite in ("bass", "all"):
        n = effective(args, "n", 5) if suite != "all" else 5
        degree = effective(args, "kmax", 8) if suite != "all" else 8
        h = sample(EnsembleSpec(EnsembleKind.UNIMODULAR, n), seed)
        residual = symgroup.bass_series_check(h, degree)
        checks.append(serialize.check("bass_series", residual, 0.0, 1e-8))
    if suite in ("trace-formula", "all"):
        n = effective(args, "n", 40) if suite != "all" else 40
        count = effective(args, "M", 5) if suite != "all" else 5
        beta = effective(args, "beta", 2.0)
        worst_mu = worst_rho = 0.0
        for i in range(count):
            j = de_sample(n, beta, derive_seed(seed, STREAM_DE, i))
            res_mu, res_rho = trace_formula_check(j)
            worst_mu = max(worst_mu, res_mu)
            worst_rho = max(worst_rho, res_rho)
        checks.append(serialize.check("trace_formula_mu", worst_mu, 0.0, 1e-8))
        checks.append(serialize.check("trace_formula_rho", worst_rho, 0.0, 1e-8))
    if suite in ("dims", "all"):
        n = effective(args, "n", 10) if suite != "all" else 10
        ok = all(verify_dims(m) for m in range(1, n + 1))
        checks.append(
            serialize.check("dimension_identities", 0.0 if ok else 1.0, 0.0, 0.0)
        )
    return checks


def cmd_verify(args) -> int:
    seed = effective(args, "seed", DEFAULT_SEED)
    checks = _verify_checks(args, args.suite, seed)
    params = {"seed": seed, "suite": args.suite}
    if effective(args, "out", None) is None and effective(args, "format", None) is None:
        serialize.print_checks(checks)
        return 0 if serialize.all_pass(checks) else 1
    return _finish(args, "verify", params, checks)


def cmd_linearize(args) -> int:
    seed = effective(args, "seed", DEFAULT_SEED)
    epsilon = effective(args, "epsilon", 1e-3)
    nodes = effective(args, "nodes", 200)
    z_grid = _parse_z_grid(effective(args, "grid", _DEFAULT_Z_GRID))
    directions = {
        "c2": fluct.FluctCoeffs([0.0, 1.0]),
        "c3": fluct.FluctCoeffs([0.0, 0.0, 1.0]),
    }
    rows = []
    checks = []
    for name, direction in directions.items():
        for eps in (epsilon, epsilon / 10.0):
            residual = fluct.fluct_lemma_residual(direction, eps, nodes, z_grid)
            rows.append((name, eps, nodes, residual))
        big, small = rows[-2][3], rows[-1][3]
        checks.append(serialize.check(f"linearize_residual_{name}", big, 0.0, 0.05))
        checks.append(
            serialize.check(
                f"linearize_shrink_{name}",
                small / big if big else 0.0,
                0.0,
                0.2,
            )
        )
    params = {"seed": seed, "epsilon": epsilon, "nodes": nodes}
    return _finish(
        args, "linearize", params, checks,
        csv_payload=(["direction", "epsilon", "nodes", "residual"], rows),
    )


_COMMANDS = {
    "markov": cmd_markov,
    "sample": cmd_sample,
    "grow": cmd_grow,
    "diagrams": cmd_diagrams,
    "clt": cmd_clt,
    "verify": cmd_verify,
    "linearize": cmd_linearize,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    config = {}
    if getattr(args, "config", None):
        config = load_config(args.config)
    args._config = config
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
