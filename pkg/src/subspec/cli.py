"""Command-line front end.

Artifacts are written atomically (temp file plus rename) and removed again if
a later step of the same run fails, so an output directory never holds a
partial run.  Exit codes: 0 success, 2 configuration or validation problem,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .errors import (
    DomainError,
    NumericalError,
    ResourceLimitError,
    SearchExhaustedError,
    ValidationError,
)
from . import fileformats as ff
from . import models as model_catalog
from .floquet import floquet_spectrum
from .lowernorm import block_sigma_table, nu_N, nu_N_half_axis
from .operators import half_axis
from .spectra import (
    GridSpec,
    SpectralSet,
    convergence_study,
    hausdorff,
    resolvent_field,
    sublevel_set,
)
from .words import de_bruijn, subword_set

CONFIG_ERRORS = (ValidationError, DomainError, ResourceLimitError, SearchExhaustedError)


class _Artifacts:
    """Tracks written files so a failing run can clean up after itself."""

    def __init__(self):
        self.written = []

    def write(self, path, text, summary):
        directory = os.path.dirname(path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        ff.atomic_write(path, text)
        self.written.append(path)
        print(f"wrote {path} ({summary})")

    def discard_all(self):
        for path in self.written:
            try:
                os.remove(path)
            except OSError:
                pass


def _add_model_args(p):
    p.add_argument("--model", help="catalog model name")
    p.add_argument("--spec-file", help="operator file instead of a catalog model")
    p.add_argument("--m", type=int, default=None, help="approximant index")
    p.add_argument("--q", type=int, default=None, help="state count for the hopping model")


def _resolve_spec(args):
    if args.spec_file:
        with open(args.spec_file, "r", encoding="utf-8") as f:
            spec, potentials = ff.parse_operator_file(f.read())
        return spec, potentials
    if not args.model:
        raise ValidationError("model: give --model or --spec-file")
    if args.m is None:
        raise ValidationError("m: catalog models need --m")
    params = {}
    if args.q is not None:
        params["q"] = args.q
    built = model_catalog.build(args.model, args.m, **params)
    return built.spec, built.potentials


def _grid_from(args) -> GridSpec:
    g = args.grid
    return GridSpec(g[0], g[1], g[2], g[3], int(g[4]), int(g[5]))


def _eps_list(text):
    try:
        eps = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ValidationError(f"eps: cannot parse {text!r}")
    if not eps or any(e <= 0 for e in eps):
        raise ValidationError("eps: need positive values")
    return eps


def _parse_lambda(text):
    return ff.parse_complex(text, "lam")


def _out_path(args, name):
    return os.path.join(args.out, name) if args.out else name


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_words(args, artifacts):
    if args.de_bruijn:
        k, n = args.de_bruijn
        word = de_bruijn(int(k), int(n))
        source = None
        text = ff.dump_word_file(word)
        label = f"de_bruijn k={k} n={n} length={len(word)}"
    else:
        spec, potentials = _resolve_spec(args)
        name = args.potential_name
        if name not in potentials:
            raise ValidationError(
                f"potential-name: {name!r} not in {sorted(potentials)}")
        source = potentials[name]
        text = ff.dump_word_file(source)
        label = f"{name} period={source.period}"
    artifacts.write(_out_path(args, "potential.words"), text, label)
    if args.subwords and source is not None:
        ss = subword_set(source, args.subwords)
        print(f"subwords N={args.subwords}: {len(ss)} distinct")
    return 0


def cmd_blocks(args, artifacts):
    spec, _ = _resolve_spec(args)
    if args.half_axis:
        spec = half_axis(spec)
    lam = _parse_lambda(args.lam)
    rows = block_sigma_table(spec, args.N, lam)
    artifacts.write(_out_path(args, "blocks.csv"), ff.sigma_table_csv(rows),
                    f"{len(rows)} blocks, N={args.N}")
    return 0


def cmd_nu(args, artifacts):
    spec, _ = _resolve_spec(args)
    fn = nu_N
    if args.half_axis:
        spec = half_axis(spec)
        fn = nu_N_half_axis
    lam = _parse_lambda(args.lam)
    res = fn(spec, args.N, lam, skip_adjoint=args.skip_adjoint)
    adj = "skipped" if res.nu_N_adjoint is None else ff.fmt_float(res.nu_N_adjoint)
    print(f"nu_N={ff.fmt_float(res.nu_N)} adjoint={adj} "
          f"combined={ff.fmt_float(res.combined)} blocks={res.block_count} "
          f"exact={res.exact}")
    if args.out:
        text = ("N,lam_re,lam_im,nu,nu_adj,combined\n"
                + ",".join([str(res.N), ff.fmt_float(lam.real), ff.fmt_float(lam.imag),
                            ff.fmt_float(res.nu_N), adj if adj != "skipped" else "",
                            ff.fmt_float(res.combined)]) + "\n")
        artifacts.write(_out_path(args, "nu.csv"), text, "1 row")
    return 0


def cmd_pseudospec(args, artifacts):
    spec, _ = _resolve_spec(args)
    if args.half_axis:
        spec = half_axis(spec)
    grid = _grid_from(args)
    eps = _eps_list(args.eps)
    fld = resolvent_field(spec, grid, args.N, skip_adjoint=args.skip_adjoint,
                          threads=args.threads)
    artifacts.write(_out_path(args, "field.csv"), ff.field_csv(fld),
                    f"{grid.nx * grid.ny} nodes, N={args.N}")
    levels = [(e, sublevel_set(fld, e)) for e in eps]
    for e, sset in levels:
        artifacts.write(_out_path(args, f"sublevel_eps{ff.fmt_float(e)}.csv"),
                        ff.spectral_set_csv(sset), f"{len(sset)} nodes inside")
    artifacts.write(_out_path(args, "sigma_eps.svg"), ff.field_svg(fld, levels),
                    f"{sum(len(s.polylines) for _, s in levels)} contour paths")
    if fld.holes:
        print(f"warning: {len(fld.holes)} failed nodes recorded as holes")
    return 0


def cmd_floquet(args, artifacts):
    spec, _ = _resolve_spec(args)
    fs = floquet_spectrum(spec, args.theta)
    sset = SpectralSet(fs.points, provenance="floquet", theta_index=fs.theta_index)
    artifacts.write(_out_path(args, "spectrum.csv"),
                    ff.spectral_set_csv(sset, with_theta=True),
                    f"{len(sset)} eigenvalues, {fs.samples} phases")
    for t, reason in fs.holes:
        print(f"warning: phase index {t} failed: {reason}")
    return 0


def cmd_hausdorff(args, artifacts):
    sets = []
    for path in (args.a, args.b):
        try:
            with open(path, "r", encoding="utf-8") as f:
                sets.append(ff.parse_spectral_set_csv(f.read()))
        except OSError as exc:
            raise ValidationError(f"file: cannot read {path}: {exc}")
    rep = hausdorff(sets[0], sets[1])
    print(f"directed_ab={ff.fmt_float(rep.directed_ab)} "
          f"directed_ba={ff.fmt_float(rep.directed_ba)} "
          f"distance={ff.fmt_float(rep.distance)}")
    return 0


def cmd_study(args, artifacts):
    if not args.model:
        raise ValidationError("model: the study command needs a catalog model")
    params = {}
    if args.q is not None:
        params["q"] = args.q
    model = model_catalog.get_model(args.model, **params)
    ms = [int(tok) for tok in args.ms.split(",") if tok.strip()]
    if not ms:
        raise ValidationError("ms: need a comma-separated list of indices")
    grid = _grid_from(args)
    eps = _eps_list(args.eps)

    reference = None
    if args.reference:
        with open(args.reference, "r", encoding="utf-8") as f:
            reference = ff.parse_spectral_set_csv(f.read())
    elif model.reference_samples is not None:
        reference = model.reference_samples(args.reference_step)

    if args.assume_normal:
        sets = {}
        for m in ms:
            built = model.build(m)
            fs = floquet_spectrum(built.spec, args.theta)
            sets[m] = SpectralSet(fs.points, provenance="floquet")
        lines = ["m,eps,d_ab,d_ba,d"]
        for m in ms:
            target = reference if reference is not None else sets[ms[-1]]
            rep = hausdorff(sets[m], target)
            lines.append(ff.hausdorff_csv_row(m, 0.0, rep))
        artifacts.write(_out_path(args, "study.csv"), "\n".join(lines) + "\n",
                        f"{len(ms)} spectra compared")
        return 0

    n_rule = (lambda m: args.N) if args.N else model.default_N
    result = convergence_study(
        lambda m: model.build(m).spec, ms, grid, n_rule, eps,
        reference=reference, condition_for_m=model.check_condition,
        skip_adjoint=args.skip_adjoint, threads=args.threads)
    lines = ["m,eps,d_ab,d_ba,d"]
    for row in result.rows:
        if row.annotation:
            print(f"note: m={row.m} eps={ff.fmt_float(row.eps)}: {row.annotation}")
        if row.report is not None:
            lines.append(ff.hausdorff_csv_row(row.m, row.eps, row.report))
        else:
            lines.append(f"{row.m},{ff.fmt_float(row.eps)},nan,nan,nan")
    artifacts.write(_out_path(args, "study.csv"), "\n".join(lines) + "\n",
                    f"{len(result.rows)} rows")
    for (m, e), sset in result.sublevel_sets.items():
        artifacts.write(
            _out_path(args, f"sublevel_m{m}_eps{ff.fmt_float(e)}.csv"),
            ff.spectral_set_csv(sset), f"{len(sset)} nodes inside")
    for e, mono in result.monotone.items():
        trend = "non-increasing" if mono else "not monotone"
        print(f"eps={ff.fmt_float(e)}: distances {trend}")
    return 0


def cmd_models(args, artifacts):
    if args.action == "list":
        for name in model_catalog.MODEL_NAMES:
            print(name)
        return 0
    if not args.name:
        raise ValidationError("name: models dump needs --name")
    if args.m is None:
        raise ValidationError("m: models dump needs --m")
    params = {}
    if args.q is not None:
        params["q"] = args.q
    built = model_catalog.build(args.name, args.m, **params)
    artifacts.write(_out_path(args, f"{args.name}_m{args.m}.spec"),
                    ff.dump_operator_file(built.spec, built.potentials),
                    f"{len(built.spec.diagonals)} diagonals")
    for pname, src in built.potentials.items():
        artifacts.write(_out_path(args, f"{args.name}_m{args.m}_{pname}.words"),
                        ff.dump_word_file(src), f"period={src.period}")
    return 0


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="subspec",
        description="Spectra and pseudospectra of band operators from the "
                    "finite subwords of their potentials.")
    parser.add_argument("--version", action="version", version=f"subspec {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    default_threads = int(os.environ.get("SUBSPEC_THREADS", "1"))

    def common(p, grid=False, eps=False, n=False):
        _add_model_args(p)
        p.add_argument("--out", default="", help="output directory")
        p.add_argument("--threads", type=int, default=default_threads)
        p.add_argument("--skip-adjoint", action="store_true")
        p.add_argument("--half-axis", action="store_true")
        if grid:
            p.add_argument("--grid", type=float, nargs=6, required=True,
                           metavar=("RMIN", "RMAX", "IMIN", "IMAX", "NX", "NY"))
        if eps:
            p.add_argument("--eps", required=True,
                           help="comma-separated positive levels")
        if n:
            p.add_argument("--N", type=int, required=True, help="window length")

    p = sub.add_parser("words", help="emit a potential word file")
    common(p)
    p.add_argument("--de-bruijn", type=int, nargs=2, metavar=("K", "N"))
    p.add_argument("--potential-name", default="b")
    p.add_argument("--subwords", type=int, default=0,
                   help="also count distinct subwords of this length")
    p.set_defaults(run=cmd_words)

    p = sub.add_parser("blocks", help="per-block smallest singular values")
    common(p, n=True)
    p.add_argument("--lam", default="0", help="complex shift, e.g. 0.5+2j")
    p.set_defaults(run=cmd_blocks)

    p = sub.add_parser("nu", help="localized lower norm at one shift")
    common(p, n=True)
    p.add_argument("--lam", default="0")
    p.set_defaults(run=cmd_nu)

    p = sub.add_parser("pseudospec", help="resolvent-bound field and sublevel sets")
    common(p, grid=True, eps=True, n=True)
    p.set_defaults(run=cmd_pseudospec)

    p = sub.add_parser("floquet", help="spectrum of a periodic operator")
    common(p)
    p.add_argument("--theta", type=int, default=512, help="phase sample count")
    p.set_defaults(run=cmd_floquet)

    p = sub.add_parser("hausdorff", help="distance between two point CSV files")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(run=cmd_hausdorff)

    p = sub.add_parser("study", help="convergence study over approximants")
    common(p, grid=True, eps=True)
    p.add_argument("--N", type=int, default=0,
                   help="fixed window length (default: the model's schedule)")
    p.add_argument("--ms", required=True, help="comma-separated approximant indices")
    p.add_argument("--reference", help="reference point CSV")
    p.add_argument("--reference-step", type=float, default=1e-3)
    p.add_argument("--assume-normal", action="store_true",
                   help="compare periodic spectra instead of sublevel sets")
    p.add_argument("--theta", type=int, default=512)
    p.set_defaults(run=cmd_study)

    p = sub.add_parser("models", help="list the catalog or dump one model")
    p.add_argument("action", choices=("list", "dump"))
    p.add_argument("--name")
    p.add_argument("--m", type=int)
    p.add_argument("--q", type=int)
    p.add_argument("--out", default="")
    p.set_defaults(run=cmd_models)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    artifacts = _Artifacts()
    try:
        return args.run(args, artifacts)
    except CONFIG_ERRORS as exc:
        artifacts.discard_all()
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        artifacts.discard_all()
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
