"""Command-line front end.

Exit codes: 0 success, 2 usage error, 3 domain error.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import os
import random
import shlex
import sys
import tempfile
from dataclasses import dataclass, field

import numpy as np

from . import horseshoe as hs
from .errors import DomainError, EscapeError
from .image import cat_image, image_order, read_pgm, write_pgm
from .manifolds import (
    contraction_profile,
    i_proximal_witness,
    proximal,
    proximal_cell,
)
from .symbolic import (
    BiSeq,
    Cylinder,
    load_sft,
    mixing_gap,
    seq_asymptotic,
    seq_in_sft,
    seq_proximal,
    sft_periodic_count,
    sft_primitivity,
)
from .toral import (
    IntMat2,
    TorusPoint,
    cat_apply,
    cat_matrix,
    fixed_point_count,
    mat_pow,
    orbit,
    period,
)
from .ultralimit import (
    LimitProbe,
    idempotent_stage_check,
    inverse_slope_limit_table,
    plim_probe,
    recurrence_times,
    slope_limit_table,
)

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN = 0, 2, 3


class UsageError(Exception):
    pass


# output helpers


def _write_text(path: str | None, text: str) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        os.unlink(tmp)
        raise


def _json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _point(text: str) -> TorusPoint:
    try:
        return TorusPoint.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _square_point(text: str) -> hs.SquarePoint:
    try:
        return hs.SquarePoint.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _seq(text: str) -> BiSeq:
    try:
        return BiSeq.parse(text)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _matrix(args) -> IntMat2:
    if getattr(args, "matrix", None) is None:
        return cat_matrix()
    try:
        return IntMat2.parse(args.matrix)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _hs_params(args) -> hs.HorseshoeParams:
    if getattr(args, "config", None) is None:
        return hs.HorseshoeParams()
    with open(args.config) as fh:
        try:
            return hs.HorseshoeParams.from_config(fh.read())
        except ValueError as exc:
            raise UsageError(str(exc)) from exc


def _word(text: str) -> tuple:
    text = "".join(text.split())
    if not text:
        raise UsageError("empty word")
    try:
        if "," in text:
            return tuple(int(t) for t in text.split(","))
        return tuple(int(ch, 36) for ch in text)
    except ValueError as exc:
        raise UsageError(f"bad symbol word {text!r}") from exc


def _sft(name: str):
    try:
        return load_sft(name)
    except OSError as exc:
        raise UsageError(f"cannot read SFT {name!r}: {exc}") from exc


# cat


def cmd_cat_pow(args):
    return str(mat_pow(_matrix(args), args.n)) + "\n"


def cmd_cat_apply(args):
    return str(cat_apply(mat_pow(_matrix(args), args.n), _point(args.point))) + "\n"


def cmd_cat_orbit(args):
    pts = orbit(_point(args.point), args.n_from, args.n_to, _matrix(args))
    ns = range(args.n_from, args.n_to + 1)
    if args.format == "json":
        return _json([{"n": n, "x": str(p.x), "y": str(p.y)} for n, p in zip(ns, pts)])
    rows = []
    for n, p in zip(ns, pts):
        fx, fy = p.to_floats()
        rows.append([n, str(p.x), str(p.y), repr(fx), repr(fy)])
    return _csv(["n", "x", "y", "x_float", "y_float"], rows)


def cmd_cat_period(args):
    return f"{period(_point(args.point), _matrix(args))}\n"


def cmd_cat_fixcount(args):
    return f"{fixed_point_count(args.n, _matrix(args))}\n"


def cmd_cat_image(args):
    m = _matrix(args)
    if args.input:
        try:
            img = read_pgm(args.input)
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read image: {exc}") from exc
    elif args.side:
        s = args.side
        img = np.arange(s * s, dtype=np.uint16 if s * s > 256 else np.uint8).reshape(s, s)
    else:
        raise UsageError("give --input or --side")
    if img.shape[0] != img.shape[1]:
        raise UsageError(f"image must be square, got {img.shape[1]}x{img.shape[0]}")
    if args.order:
        return f"{image_order(img.shape[0], m)}\n"
    if not args.output:
        raise UsageError("--output is required for image output")
    out = cat_image(img, args.n, m)
    write_pgm(args.output, out, 255 if out.dtype == np.uint8 else 65535)
    return ""


# prox


def cmd_prox_check(args):
    v = proximal(_point(args.x), _point(args.y), semicascade=args.semicascade)
    return _json(v.to_json())


def cmd_prox_cell(args):
    return _json(proximal_cell(_point(args.x)).to_json())


def cmd_prox_profile(args):
    prof = contraction_profile(_point(args.x), _point(args.y), args.direction, args.n)
    if args.format == "json":
        return _json([{"n": n, "distance": d} for n, d in prof])
    return _csv(["n", "distance"], [[n, repr(d)] for n, d in prof])


def cmd_prox_iprox(args):
    rep = i_proximal_witness([_point(p) for p in args.point], args.direction, args.steps)
    return _json({
        "passed": rep.passed,
        "direction": rep.direction.value,
        "final_max": rep.final_max,
        "max_distances": rep.max_distances,
    })


# shift


def cmd_shift_prox(args):
    x, y = _seq(args.x), _seq(args.y)
    v = seq_proximal(x, y, two_sided=args.two_sided)
    return _json({
        "proximal": v.proximal,
        "side": v.side,
        "window_start": v.start,
        "window_period": v.period,
        "asymptotic": seq_asymptotic(x, y),
    })


def cmd_shift_mix(args):
    u = Cylinder(_word(args.u), args.u_start)
    v = Cylinder(_word(args.v), args.v_start)
    n = mixing_gap(_sft(args.sft), u, v, args.n_max)
    return f"{'none' if n is None else n}\n"


def cmd_shift_primitive(args):
    k = sft_primitivity(_sft(args.sft), args.k_max)
    return f"{'none' if k is None else k}\n"


def cmd_shift_count(args):
    return f"{sft_periodic_count(_sft(args.sft), args.n)}\n"


def cmd_shift_member(args):
    sft = _sft(args.sft)
    try:
        s = BiSeq.parse(args.seq, alphabet_size=sft.alphabet_size)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return f"{str(seq_in_sft(s, sft)).lower()}\n"


def cmd_shift_apply(args):
    return f"{_seq(args.seq).shift(args.n)}\n"


# hs


def cmd_hs_apply(args):
    params = _hs_params(args)
    p = _square_point(args.point)
    step = hs.hs_inverse if args.inverse else hs.hs_apply
    for _ in range(args.n):
        p = step(params, p)
    return f"{p}\n"


def cmd_hs_encode(args):
    return f"{hs.encode(_hs_params(args), _square_point(args.point), args.depth)}\n"


def cmd_hs_decode(args):
    try:
        window = hs.SymbolWindow.parse(args.window)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    return _json(hs.decode(_hs_params(args), window).to_json())


def cmd_hs_check(args):
    params = _hs_params(args)
    if (args.point is None) == (args.code is None):
        raise UsageError("give exactly one of --point or --code")
    p = _square_point(args.point) if args.point else hs.periodic_point(params, _word(args.code))
    return f"{str(hs.conjugacy_check(params, p, args.depth)).lower()}\n"


def _hs_prox_json(res: hs.HsProximity) -> dict:
    return {
        "symbolic": res.symbolic,
        "geometric": res.geometric,
        "corroborated": res.corroborated,
        "min_distance": res.min_distance,
        "tail_max": res.tail_max,
        "tolerance": res.tolerance,
    }


def cmd_hs_prox(args):
    res = hs.hs_proximal(_hs_params(args), _seq(args.x), _seq(args.y), args.depth, args.horizon)
    out = _hs_prox_json(res)
    out["distances"] = res.distances
    return _json(out)


def _random_code(rng: random.Random, max_period: int, max_center: int) -> BiSeq:
    def word(lo, hi):
        return tuple(rng.randrange(2) for _ in range(rng.randint(lo, hi)))

    center = word(0, max_center)
    return BiSeq(word(1, max_period), center, word(1, max_period), rng.randint(0, len(center)))


def cmd_hs_sweep(args):
    """Random code pairs: how often symbolic and geometric verdicts agree."""
    params = _hs_params(args)
    rng = random.Random(args.seed)
    agree = prox = 0
    for _ in range(args.count):
        x = _random_code(rng, args.max_period, args.max_center)
        if rng.random() < 0.5:
            # share the right tail so proximal pairs are well represented
            y = _splice_right_tail(rng, x, args)
        else:
            y = _random_code(rng, args.max_period, args.max_center)
        res = hs.hs_proximal(params, x, y, args.depth, args.horizon)
        agree += res.corroborated
        prox += res.symbolic
    return _json({"pairs": args.count, "symbolic_proximal": prox, "agreements": agree, "seed": args.seed})


def _splice_right_tail(rng, x: BiSeq, args) -> BiSeq:
    """A code that agrees with ``x`` from index ``max(0, tail start)`` on."""
    start = max(0, x.right_tail_start)
    prefix = tuple(rng.randrange(2) for _ in range(rng.randint(0, args.max_center)))
    left = tuple(rng.randrange(2) for _ in range(rng.randint(1, args.max_period)))
    center = prefix + x.window(0, start)
    return BiSeq(left, center, x.window(start, start + len(x.right)), len(prefix))


# ultra


def cmd_ultra_probe(args):
    probe = LimitProbe.arithmetic(args.start, args.step, args.count, args.tol)
    return _json(plim_probe(_point(args.point), probe).to_json())


def cmd_ultra_slope(args):
    rows = (inverse_slope_limit_table if args.inverse else slope_limit_table)(args.n_max)
    return _csv(["n", "ratio_exact", "ratio_float", "error_float", "bound_float"], [r.csv_row() for r in rows])


def cmd_ultra_idem(args):
    return f"{str(idempotent_stage_check(_point(args.point), args.stages)).lower()}\n"


def cmd_ultra_recur(args):
    rep = recurrence_times(_point(args.point), args.horizon, args.eps)
    return _json({"times": rep.times, "gaps": rep.gaps, "max_gap": rep.max_gap})


# batch runner


@dataclass
class ExperimentConfig:
    name: str
    command: str
    parameters: dict = field(default_factory=dict)
    output_path: str | None = None
    format: str | None = None

    FORMATS = ("json", "csv", "pgm")

    def argv(self) -> list[str]:
        argv = shlex.split(self.command)
        for key, value in self.parameters.items():
            dashes = "-" if len(key) == 1 else "--"
            argv += [dashes + key.replace("_", "-"), value]
        if self.format is not None and self.format != "pgm":
            argv += ["--format", self.format]
        if self.output_path is not None:
            argv += ["--output", self.output_path]
        return argv


def load_experiments(text: str) -> list[ExperimentConfig]:
    """One ``[section]`` per experiment; ``command`` is required.

    Every other key becomes a ``--key value`` option of that command, so
    keys the command does not know are rejected by the parser.
    """
    cp = configparser.ConfigParser(interpolation=None, default_section="\0none")
    cp.optionxform = str
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise UsageError(f"bad config: {exc}") from exc
    out = []
    for name in cp.sections():
        sec = dict(cp[name])
        if "command" not in sec:
            raise UsageError(f"experiment [{name}] has no command")
        fmt = sec.pop("format", None)
        if fmt is not None and fmt not in ExperimentConfig.FORMATS:
            raise UsageError(f"experiment [{name}]: unknown format {fmt!r}")
        command, output = sec.pop("command"), sec.pop("output", None)
        out.append(ExperimentConfig(name, command, sec, output, fmt))
    return out


def cmd_run(args):
    try:
        with open(args.config) as fh:
            experiments = load_experiments(fh.read())
    except OSError as exc:
        raise UsageError(f"cannot read config: {exc}") from exc
    parser = build_parser()
    report = []
    for exp in experiments:
        try:
            sub = parser.parse_args(exp.argv())
        except _ParseError as exc:
            raise UsageError(f"experiment [{exp.name}]: {exc}") from exc
        if sub.func is cmd_run:
            raise UsageError("experiments cannot nest 'run'")
        text = sub.func(sub)
        if exp.output_path is None:
            report.append(f"[{exp.name}]\n{text}")
        else:
            if text:
                _write_text(exp.output_path, text)
            report.append(f"[{exp.name}] -> {exp.output_path}\n")
    return "".join(report)


# parser


class _ParseError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def __init__(self, *args, **kwargs):
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message):
        raise _ParseError(f"{self.prog}: {message}")


def _add(sub, name, func, help_text):
    p = sub.add_parser(name, help=help_text, description=help_text)
    p.set_defaults(func=func)
    return p


def _out(p, formats=None):
    p.add_argument("-o", "--output", help="write to this file instead of stdout")
    if formats:
        p.add_argument("--format", choices=formats, default=formats[0])


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="hypdyn", description="Exact experiments with the cat map and the Smale horseshoe.")
    top = parser.add_subparsers(dest="group", required=True, parser_class=_Parser)

    cat = top.add_parser("cat", help="cat map on the torus").add_subparsers(dest="cmd", required=True)
    p = _add(cat, "pow", cmd_cat_pow, "print the n-th power of the matrix")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--matrix", help="integer matrix, default [[2,1],[1,1]]")
    _out(p)
    p = _add(cat, "apply", cmd_cat_apply, "apply the n-th iterate to a point")
    p.add_argument("-p", "--point", required=True)
    p.add_argument("-n", type=int, default=1)
    p.add_argument("--matrix")
    _out(p)
    p = _add(cat, "orbit", cmd_cat_orbit, "orbit segment as CSV rows (n, x, y, floats)")
    p.add_argument("-p", "--point", required=True)
    p.add_argument("--from", dest="n_from", type=int, default=0)
    p.add_argument("--to", dest="n_to", type=int, required=True)
    p.add_argument("--matrix")
    _out(p, ["csv", "json"])
    p = _add(cat, "period", cmd_cat_period, "least period of a rational point")
    p.add_argument("-p", "--point", required=True)
    p.add_argument("--matrix")
    _out(p)
    p = _add(cat, "fixcount", cmd_cat_fixcount, "number of points fixed by the n-th iterate")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--matrix")
    _out(p)
    p = _add(cat, "image", cmd_cat_image, "apply the map to a square PGM image on its pixel lattice")
    p.add_argument("-i", "--input", help="square P5 PGM")
    p.add_argument("--side", type=int, help="synthesize a side x side image with distinct pixel values")
    p.add_argument("-n", type=int, default=1)
    p.add_argument("--order", action="store_true", help="print the recurrence time instead")
    p.add_argument("--matrix")
    _out(p, ["pgm"])

    prox = top.add_parser("prox", help="proximality on the torus").add_subparsers(dest="cmd", required=True)
    p = _add(prox, "check", cmd_prox_check, "decide whether two points are proximal")
    p.add_argument("-x", required=True)
    p.add_argument("-y", required=True)
    p.add_argument("--semicascade", action="store_true", help="forward iterates only")
    _out(p, ["json"])
    p = _add(prox, "cell", cmd_prox_cell, "describe the proximal cell of a point")
    p.add_argument("-x", required=True)
    _out(p, ["json"])
    p = _add(prox, "profile", cmd_prox_profile, "orbit distances of a pair")
    p.add_argument("-x", required=True)
    p.add_argument("-y", required=True)
    p.add_argument("--direction", choices=["forward", "backward"], default="forward")
    p.add_argument("-n", type=int, default=20)
    _out(p, ["csv", "json"])
    p = _add(prox, "iprox", cmd_prox_iprox, "check that points on one leaf collapse together")
    p.add_argument("-p", "--point", action="append", required=True)
    p.add_argument("--direction", choices=["stable", "unstable"], default="stable")
    p.add_argument("--steps", type=int, default=30)
    _out(p, ["json"])

    sh = top.add_parser("shift", help="shift spaces").add_subparsers(dest="cmd", required=True)
    p = _add(sh, "prox", cmd_shift_prox, "decide proximality of two eventually periodic sequences")
    p.add_argument("-x", required=True)
    p.add_argument("-y", required=True)
    p.add_argument("--two-sided", action="store_true", help="also accept agreement of left tails")
    _out(p, ["json"])
    p = _add(sh, "mix", cmd_shift_mix, "mixing gap between two cylinders")
    p.add_argument("--sft", default="full")
    p.add_argument("-u", required=True)
    p.add_argument("-v", required=True)
    p.add_argument("--u-start", type=int, default=0)
    p.add_argument("--v-start", type=int, default=0)
    p.add_argument("--n-max", type=int, default=20)
    _out(p)
    p = _add(sh, "primitive", cmd_shift_primitive, "primitivity exponent of the adjacency matrix")
    p.add_argument("--sft", required=True, help="adler-weiss, full, full:K, golden or a matrix file")
    p.add_argument("--k-max", type=int, default=50)
    _out(p)
    p = _add(sh, "count", cmd_shift_count, "number of points of period dividing n")
    p.add_argument("--sft", required=True)
    p.add_argument("-n", type=int, required=True)
    _out(p)
    p = _add(sh, "member", cmd_shift_member, "is the sequence a point of the SFT")
    p.add_argument("--sft", required=True)
    p.add_argument("--seq", required=True)
    _out(p)
    p = _add(sh, "apply", cmd_shift_apply, "shift a sequence n places")
    p.add_argument("--seq", required=True)
    p.add_argument("-n", type=int, default=1)
    _out(p)

    hsp = top.add_parser("hs", help="Smale horseshoe").add_subparsers(dest="cmd", required=True)

    def hs_parser(name, func, help_text):
        q = _add(hsp, name, func, help_text)
        q.add_argument("--config", help="key = value file with contraction, expansion, fold")
        return q

    p = hs_parser("apply", cmd_hs_apply, "apply the map (or its inverse) n times")
    p.add_argument("-p", "--point", required=True)
    p.add_argument("-n", type=int, default=1)
    p.add_argument("--inverse", action="store_true")
    _out(p)
    p = hs_parser("encode", cmd_hs_encode, "itinerary window of a point")
    p.add_argument("-p", "--point", required=True)
    p.add_argument("--depth", type=int, default=3)
    _out(p)
    p = hs_parser("decode", cmd_hs_decode, "rectangle of points with a given window")
    p.add_argument("-w", "--window", required=True)
    _out(p, ["json"])
    p = hs_parser("check", cmd_hs_check, "check that coding commutes with the shift")
    p.add_argument("-p", "--point")
    p.add_argument("--code", help="periodic code word; its exact periodic point is used")
    p.add_argument("--depth", type=int, default=6)
    _out(p)
    p = hs_parser("prox", cmd_hs_prox, "symbolic proximality of two codes with a geometric witness")
    p.add_argument("-x", required=True)
    p.add_argument("-y", required=True)
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--horizon", type=int, default=40)
    _out(p, ["json"])
    p = hs_parser("sweep", cmd_hs_sweep, "random sweep comparing symbolic and geometric proximality")
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-period", type=int, default=4)
    p.add_argument("--max-center", type=int, default=4)
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--horizon", type=int, default=40)
    _out(p, ["json"])

    ul = top.add_parser("ultra", help="finite-stage limit probes").add_subparsers(dest="cmd", required=True)
    p = _add(ul, "probe", cmd_ultra_probe, "iterate along an arithmetic progression and classify the tail")
    p.add_argument("-p", "--point", required=True)
    p.add_argument("--start", type=int, default=1)
    p.add_argument("--step", type=int, default=1)
    p.add_argument("--count", type=int, default=40)
    p.add_argument("--tol", type=float, default=1e-9)
    _out(p, ["json"])
    p = _add(ul, "slope", cmd_ultra_slope, "Fibonacci slope ratios against their golden-ratio limit")
    p.add_argument("--n-max", type=int, default=20)
    p.add_argument("--inverse", action="store_true", help="ratios of inverse iterates")
    _out(p, ["csv"])
    p = _add(ul, "idem", cmd_ultra_idem, "idempotent signature on a periodic point")
    p.add_argument("-p", "--point", required=True)
    p.add_argument("--stages", type=int, default=5)
    _out(p)
    p = _add(ul, "recur", cmd_ultra_recur, "return times to an eps-ball")
    p.add_argument("-p", "--point", required=True)
    p.add_argument("--horizon", type=int, default=20)
    p.add_argument("--eps", type=float, default=1e-9)
    _out(p, ["json"])

    p = top.add_parser("run", help="run the experiments in a config file")
    p.add_argument("config")
    p.set_defaults(func=cmd_run, output=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _ParseError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    try:
        text = args.func(args)
        if text:
            _write_text(getattr(args, "output", None), text)
    except UsageError as exc:
        print(f"hypdyn: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EscapeError as exc:
        print(f"hypdyn: {exc} (escape time {exc.escape_time}, {exc.direction})", file=sys.stderr)
        return EXIT_DOMAIN
    except DomainError as exc:
        print(f"hypdyn: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
