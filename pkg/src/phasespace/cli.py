"""Command-line front end.

Exit codes: 0 success, 1 a check or bound failed, 2 usage, config, or
state-file errors.  All numeric output is printed with 17 significant
digits so identical inputs produce byte-identical files.
"""

import argparse
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from .bounds import BoundContext
from .grid import Grid, PhaseSpaceFn
from .multiindex import as_index
from .seminorms import SeminormReport, seminorm
from .states import as_mixed, demo_state, load_state
from .transforms import husimi, matel, quasichar, wigner
from .verify import (
    CSV_HEADER,
    DEFAULT_TOLERANCES,
    run_suite,
    suggest_grid,
)

DEMO_NAMES = ("vacuum", "fock1", "plateau", "heavy-tail")

BOUND_HEADER = "a,b,lhs,rhs,ratio,pass"
SEMINORM_HEADER = "family,a,b,value,N,L,band"


@dataclass
class RunConfig:
    grid_n: int = 256
    grid_l: float = 12.0
    seed: int = 0
    band: float = 0.1
    threads: int = 0
    out: str = ""
    tolerances: dict = field(default_factory=dict)


def _config_value(key, value, where):
    if key == "grid.N":
        n_pts = int(value)
        if not (8 <= n_pts <= 65536):
            raise ValueError(f"{where}: grid.N out of range [8, 65536]: {n_pts}")
        return "grid_n", n_pts
    if key == "grid.L":
        half = float(value)
        if not (0.0 < half <= 1e4):
            raise ValueError(f"{where}: grid.L out of range (0, 1e4]: {half}")
        return "grid_l", half
    if key == "seed":
        seed = int(value)
        if seed < 0:
            raise ValueError(f"{where}: seed must be >= 0: {seed}")
        return "seed", seed
    if key == "band":
        band = float(value)
        if not (0.0 < band <= 0.5):
            raise ValueError(f"{where}: band out of range (0, 0.5]: {band}")
        return "band", band
    if key == "threads":
        n_workers = int(value)
        if n_workers < 0:
            raise ValueError(f"{where}: threads must be >= 0: {n_workers}")
        return "threads", n_workers
    if key == "out":
        return "out", str(value)
    if key.startswith("tol."):
        name = key[4:]
        if name not in DEFAULT_TOLERANCES:
            raise ValueError(f"{where}: unknown check in config key {key!r}")
        tol = float(value)
        if tol <= 0:
            raise ValueError(f"{where}: tolerance must be positive: {tol}")
        return ("tol", name), tol
    raise ValueError(f"{where}: unknown config key {key!r}")


def parse_config(path):
    """`key = value` lines; '#' comments; unknown keys are rejected."""
    cfg = RunConfig()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, value = (part.strip() for part in line.split("=", 1))
            where = f"{path}:{lineno}"
            try:
                slot, parsed = _config_value(key, value, where)
            except ValueError as exc:
                if str(exc).startswith(where):
                    raise
                raise ValueError(f"{where}: bad value for {key!r}: {value!r}")
            if isinstance(slot, tuple):
                cfg.tolerances[slot[1]] = parsed
            else:
                setattr(cfg, slot, parsed)
    return cfg


# ---------------------------------------------------------------------------
# CSV export


def _fmt(value):
    return f"{value:.17g}"


def _fn_rows(fn):
    axis = fn.grid.axis()
    mesh = np.stack(np.meshgrid(*(axis,) * fn.grid.dim, indexing="ij"), -1)
    coords = mesh.reshape(-1, fn.grid.dim)
    values = fn.values.reshape(-1)
    complex_vals = np.iscomplexobj(values)
    if fn.grid.dim == 2:
        head = ["x", "p"]
    else:
        head = [f"c{k}" for k in range(fn.grid.dim)]
    head += ["re", "im"] if complex_vals else ["value"]
    yield ",".join(head)
    for pt, val in zip(coords, values):
        cells = [_fmt(c) for c in pt]
        if complex_vals:
            cells += [_fmt(val.real), _fmt(val.imag)]
        else:
            cells.append(_fmt(val))
        yield ",".join(cells)


def export_csv(obj, path, header=None):
    """Write a grid function or a report list; values keep full precision."""
    if isinstance(obj, PhaseSpaceFn):
        lines = _fn_rows(obj)
    else:
        reports = list(obj)
        if header is None and reports:
            header = getattr(type(reports[0]), "CSV_HEADER", None) or CSV_HEADER
        lines = [header if header is not None else CSV_HEADER]
        for rep in reports:
            lines.append(rep.row() if hasattr(rep, "row") else rep.record())
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            for line in lines:
                fh.write(line + "\n")
    except OSError as exc:
        raise ValueError(f"cannot write {path}: {exc.strerror}")


def read_csv_values(path):
    """Round-trip reader for exported grid functions (testing aid)."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip().split(",")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    cols = np.array(
        [[float(cell) for cell in row] for row in rows]
    ) if rows else np.empty((0, len(header)))
    return header, cols


# ---------------------------------------------------------------------------
# shared argument plumbing


def _add_state_flags(parser, with_chi=False):
    parser.add_argument(
        "--demo", choices=DEMO_NAMES, help="built-in state (no file needed)"
    )
    parser.add_argument("--state", help="state JSON file")
    parser.add_argument(
        "--K", type=int, default=None, help="heavy-tail truncation (demo only)"
    )
    parser.add_argument(
        "--grid", default=None, help="N,L lattice: points per axis, half extent"
    )
    parser.add_argument("--out", default=None, help="CSV output path")
    parser.add_argument("--seed", type=int, default=0, help="sampling seed")
    if with_chi:
        parser.add_argument(
            "--chi",
            default="vacuum",
            help="reference wavepacket: vacuum, fock1, or a state JSON file",
        )


def _resolve_state(args):
    if (args.demo is None) == (args.state is None):
        raise ValueError("exactly one of --demo or --state is required")
    if args.demo is not None:
        return demo_state(args.demo, K=args.K), args.demo.replace("-", "_")
    return load_state(args.state), None


def _resolve_chi(args):
    name = getattr(args, "chi", "vacuum")
    if name in ("vacuum", "fock1"):
        chi = demo_state(name)
    else:
        chi = load_state(name)
    if not hasattr(chi, "atoms") or chi.atoms is None:
        raise ValueError("--chi must be a pure analytic state")
    return chi.normalized()


def _resolve_grid(args, state):
    if args.grid is None:
        return suggest_grid(state)
    parts = args.grid.split(",")
    if len(parts) != 2:
        raise ValueError(f"--grid expects N,L, got {args.grid!r}")
    n_pts, half = int(parts[0]), float(parts[1])
    return Grid(2 * as_mixed(state).n, n_pts, half)


def _parse_point(text, flag):
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"{flag} expects x,p, got {text!r}")
    return np.array([float(parts[0]), float(parts[1])])


def _parse_index(text, flag):
    try:
        return as_index(tuple(int(part) for part in text.split(",")))
    except ValueError:
        raise ValueError(f"{flag} expects comma-separated integers, got {text!r}")


# ---------------------------------------------------------------------------
# subcommands


def _cmd_transform(args, which):
    state, _ = _resolve_state(args)
    grid = _resolve_grid(args, state)
    if which == "wigner":
        fn = wigner(state, grid)
    elif which == "quasichar":
        fn = quasichar(state, grid)
    else:
        fn = husimi(state, _resolve_chi(args), grid)
    quad = grid.quadrature(fn.values)
    print(
        f"{which}: N={grid.n_points} L={_fmt(grid.half_extent)} "
        f"quadrature={_fmt(quad.real if np.iscomplexobj(quad) else quad)}"
    )
    if args.out:
        export_csv(fn, args.out)
        print(f"wrote {args.out}")
    return 0


def _cmd_matel(args):
    state, _ = _resolve_state(args)
    chi = _resolve_chi(args)
    alpha = _parse_point(args.alpha, "--alpha")
    beta = _parse_point(args.beta, "--beta")
    value = complex(matel(state, chi, alpha, beta))
    print(f"matel = {_fmt(value.real)} {'+' if value.imag >= 0 else '-'} "
          f"{_fmt(abs(value.imag))}j")
    if args.out:
        line = ",".join(
            [_fmt(alpha[0]), _fmt(alpha[1]), _fmt(beta[0]), _fmt(beta[1]),
             _fmt(value.real), _fmt(value.imag)]
        )
        try:
            with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
                fh.write("alpha_x,alpha_p,beta_x,beta_p,re,im\n" + line + "\n")
        except OSError as exc:
            raise ValueError(f"cannot write {args.out}: {exc.strerror}")
        print(f"wrote {args.out}")
    return 0


def _cmd_seminorm(args):
    state, _ = _resolve_state(args)
    grid = _resolve_grid(args, state)
    a = _parse_index(args.a, "--a")
    b = _parse_index(args.b, "--b")
    if args.rep == "wigner":
        fn = wigner(state, grid)
    elif args.rep == "quasichar":
        fn = quasichar(state, grid)
    else:
        fn = husimi(state, _resolve_chi(args), grid)
    value = seminorm(fn, a, b, band=args.band)
    report = SeminormReport(
        args.rep, (a, b), value, grid.n_points, grid.half_extent, args.band
    )
    print(f"seminorm[{args.rep}] a={args.a} b={args.b} value={_fmt(value)}")
    if args.out:
        export_csv([report], args.out, header=SEMINORM_HEADER)
        print(f"wrote {args.out}")
    return 0


def _cmd_bound_check(args):
    state, _ = _resolve_state(args)
    chi = _resolve_chi(args)
    ctx = BoundContext(state, chi=chi, max_total_order=args.order_cap)
    names = {"theorem": ["theorem"], "husimi": ["husimi"],
             "both": ["theorem", "husimi"]}[args.variant]
    reports = []
    for name in names:
        for a, b in ctx.index_pairs():
            reports.append(
                ctx.theorem_report(a, b) if name == "theorem"
                else ctx.husimi_report(a, b)
            )
    all_pass = all(rep.passed for rep in reports)
    for rep in reports:
        print(rep.row())
    print(f"bound-check: {len(reports)} rows, "
          f"{'all pass' if all_pass else 'VIOLATIONS found'}")
    if args.out:
        export_csv(reports, args.out, header=BOUND_HEADER)
        print(f"wrote {args.out}")
    return 0 if all_pass else 1


def _cmd_verify(args):
    state, demo = _resolve_state(args)
    chi = _resolve_chi(args)
    cfg = parse_config(args.config) if args.config else RunConfig()
    if args.seed:
        cfg.seed = args.seed
    reports = run_suite(state, chi, cfg, demo=demo)
    print(CSV_HEADER)
    for rep in reports:
        print(rep.row())
    all_pass = all(rep.passed for rep in reports)
    out = args.out or cfg.out
    if out:
        export_csv(reports, out, header=CSV_HEADER)
        print(f"wrote {out}")
    print(f"verify: {'all checks pass' if all_pass else 'CHECK FAILURES'}")
    return 0 if all_pass else 1


def _cmd_demo(args):
    from .verify import check_heavy_tail_trend, check_plateau_decay

    code = 0
    if args.which in ("plateau", "all"):
        rep = check_plateau_decay()
        print(f"plateau: sup_x |W(x,p)| ~ p^-{rep.info['exponent']:.4f} "
              f"on p in [4, 10] (polynomial, not rapid, decay)")
        code = max(code, 0 if rep.passed else 1)
    if args.which in ("heavy-tail", "all"):
        rep = check_heavy_tail_trend(args.K or 6)
        vals = ", ".join(f"{k}: {_fmt(v)}" for k, v in rep.info.items())
        print("heavy-tail: first decay seminorm grows with K -> no uniform "
              "Schwartz control")
        print(f"  {vals}")
        code = max(code, 0 if rep.passed else 1)
    return code


def build_parser():
    parser = argparse.ArgumentParser(
        prog="phasespace",
        description="Phase-space representations, seminorms, and decay bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    for which in ("wigner", "quasichar", "husimi"):
        sp = sub.add_parser(which, help=f"compute the {which} representation")
        _add_state_flags(sp, with_chi=(which == "husimi"))
        sp.set_defaults(func=lambda a, w=which: _cmd_transform(a, w))

    sp = sub.add_parser("matel", help="matrix element in the coherent family")
    _add_state_flags(sp, with_chi=True)
    sp.add_argument("--alpha", required=True, help="x,p of the left label")
    sp.add_argument("--beta", required=True, help="x,p of the right label")
    sp.set_defaults(func=_cmd_matel)

    sp = sub.add_parser("seminorm", help="weighted sup-seminorm of a representation")
    _add_state_flags(sp, with_chi=True)
    sp.add_argument("--a", required=True, help="decay multi-index, e.g. 1,0")
    sp.add_argument("--b", required=True, help="derivative multi-index")
    sp.add_argument(
        "--rep", choices=("wigner", "quasichar", "husimi"), default="wigner"
    )
    sp.add_argument("--band", type=float, default=0.1,
                    help="edge fraction excluded from the sup")
    sp.set_defaults(func=_cmd_seminorm)

    sp = sub.add_parser("bound-check", help="decay-bound sweep over (a, b)")
    _add_state_flags(sp, with_chi=True)
    sp.add_argument("--order-cap", type=int, default=4,
                    help="max |a|+|b| in the sweep")
    sp.add_argument("--variant", choices=("theorem", "husimi", "both"),
                    default="both")
    sp.set_defaults(func=_cmd_bound_check)

    sp = sub.add_parser("verify", help="run the identity-check suite")
    _add_state_flags(sp, with_chi=True)
    sp.add_argument("--config", default=None, help="key = value config file")
    sp.set_defaults(func=_cmd_verify)

    sp = sub.add_parser("demo", help="reproduce the counterexample diagnostics")
    sp.add_argument("--which", choices=("plateau", "heavy-tail", "all"),
                    default="all")
    sp.add_argument("--K", type=int, default=None)
    sp.set_defaults(func=_cmd_demo)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    threads = os.environ.get("PHASESPACE_THREADS", "0")
    if not threads.lstrip("-").isdigit():
        print(f"PHASESPACE_THREADS must be an integer, got {threads!r}",
              file=sys.stderr)
        return 2
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except FileNotFoundError as exc:
        print(f"error: {exc.filename}: not found", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
