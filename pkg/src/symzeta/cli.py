"""Command-line front end emitting machine-readable result envelopes.

Subcommands
-----------
    symzeta zeta riemann   --s S
    symzeta zeta hurwitz   --s S --p P
    symzeta zeta quadratic --form "a,b;c,d" --s S
    symzeta zeta torus     --dim D --s S
    symzeta sum fp         --symbol EXPR --dim D [--form ...]
    symzeta integral cutoff --symbol EXPR --dim D [--form ...]
    symzeta residue symbol --symbol EXPR --dim D [--form ...]
    symzeta det torus      --dim D
    symzeta sweep laurent  --symbol EXPR --dim D [--form ...] [--slope B]
                           [--target sum|integral]

Symbol grammar: ``pow(norm2(x), A)`` (norm2 is the *squared* euclidean norm,
so the symbol order is 2 A) and ``pow(q(x), A)`` with the form matrix given
row-major via ``--form "a,b;c,d"`` (entries may be rationals like ``1/2``).
Complex numbers are written ``a+bi``; e.g. ``--s "0.5-2i"``.

Output: JSON by default, CSV with ``--out csv``.  All floats carry 17
significant digits; two identical invocations produce byte-identical output
except for the ``runtime_ms`` diagnostic.  Exit codes: 0 success, 2 usage
error, 3 accuracy/fit failure (a document with diagnostics is still
emitted).
"""

from __future__ import annotations

import argparse
import re
import sys
import time
from typing import Dict, List, Optional, Tuple

from . import __version__
from .errors import (
    AccuracyError,
    IllConditionedError,
    NonSimplePoleError,
    ParameterError,
    PoorFitError,
    PreconditionError,
)
from .meromorphic import SweepOptions, laurent_fit
from .reg_integral import cutoff_integral, noncommutative_residue
from .reg_sum import LatticeSumOptions, cutoff_sum_1d, cutoff_sum_lattice
from .symbols import ClassicalSymbol, QuadraticForm, quadratic_symbol, riesz_family
from .zeta import (
    ZetaOptions,
    hurwitz_zeta_reg,
    quadratic_zeta,
    riemann_zeta_reg,
    torus_zeta,
    torus_zeta_determinant,
)


class UsageError(Exception):
    pass


def parse_complex(text: str) -> complex:
    t = text.strip().replace(" ", "").replace("i", "j")
    if t.endswith("j") or "j" in t:
        try:
            return complex(t)
        except ValueError as exc:
            raise UsageError(f"cannot parse complex number {text!r}") from exc
    try:
        return complex(float(t))
    except ValueError as exc:
        raise UsageError(f"cannot parse number {text!r}") from exc


def parse_form(text: str) -> QuadraticForm:
    try:
        rows = [[e for e in row.split(",")] for row in text.strip().split(";")]
        return QuadraticForm.from_rows(rows)
    except (ValueError, ParameterError, ZeroDivisionError) as exc:
        raise UsageError(f"cannot parse form matrix {text!r}: {exc}") from exc


_SYMBOL_RE = re.compile(
    r"^pow\(\s*(norm2\(x\)|q\(x\))\s*,\s*([^)]+)\)$"
)


def parse_symbol(expr: str, dim: int, form: Optional[QuadraticForm]) -> ClassicalSymbol:
    m = _SYMBOL_RE.match(expr.strip())
    if not m:
        raise UsageError(
            f"cannot parse symbol {expr!r}; grammar: pow(norm2(x), A) | pow(q(x), A)"
        )
    base, power_text = m.group(1), m.group(2)
    a = parse_complex(power_text)
    if base == "norm2(x)":
        form = QuadraticForm.identity(dim)
        return quadratic_symbol(form, -a)
    if form is None:
        raise UsageError("pow(q(x), A) requires --form")
    if form.dimension != dim:
        raise UsageError("--form dimension does not match --dim")
    return quadratic_symbol(form, -a)


def _fmt(x: float) -> str:
    if x != x:
        return '"nan"'
    if x in (float("inf"), float("-inf")):
        return '"inf"' if x > 0 else '"-inf"'
    if x == int(x) and abs(x) < 1e15:
        # keep integral floats readable but exact
        return format(x, ".1f")
    return format(x, ".17g")


def _emit_json(obj) -> str:
    if isinstance(obj, dict):
        inner = ",".join(f'"{k}":{_emit_json(v)}' for k, v in obj.items())
        return "{" + inner + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ",".join(_emit_json(v) for v in obj) + "]"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return _fmt(obj)
    if isinstance(obj, complex):
        return '{"re":%s,"im":%s}' % (_fmt(obj.real), _fmt(obj.imag))
    return '"' + str(obj).replace("\\", "\\\\").replace('"', '\\"') + '"'


def make_envelope(command: str, inputs: Dict, value: complex, *, is_pole=False,
                  residue: Optional[complex] = None, diagnostics: Optional[Dict] = None,
                  runtime_ms: float = 0.0, rows: Optional[List] = None) -> Dict:
    diag = {"pipeline": None, "residual": None, "condition": None, "nmax": None}
    diag.update(diagnostics or {})
    diag["runtime_ms"] = runtime_ms
    env = {
        "command": command,
        "inputs": inputs,
        "value": complex(value),
        "is_pole": bool(is_pole),
    }
    if residue is not None:
        env["residue"] = complex(residue)
    env["diagnostics"] = diag
    env["version"] = __version__
    if rows is not None:
        env["points"] = rows
    return env


_CSV_HEADER = "command,index,z_re,z_im,value_re,value_im,is_pole,residue_re,residue_im\n"


def render(env: Dict, out: str) -> str:
    if out == "json":
        return _emit_json(env) + "\n"
    # CSV: one row per contour point for sweeps, a single row otherwise
    lines = [_CSV_HEADER.rstrip("\n")]
    res = env.get("residue")
    res_re = _fmt(res.real) if isinstance(res, complex) else ""
    res_im = _fmt(res.imag) if isinstance(res, complex) else ""
    pole = "true" if env["is_pole"] else "false"
    points = env.get("points")
    if points:
        for i, (z, v) in enumerate(points):
            lines.append(
                f'{env["command"]},{i},{_fmt(z.real)},{_fmt(z.imag)},'
                f"{_fmt(v.real)},{_fmt(v.imag)},{pole},{res_re},{res_im}"
            )
    else:
        v = env["value"]
        lines.append(
            f'{env["command"]},0,,,{_fmt(v.real)},{_fmt(v.imag)},{pole},{res_re},{res_im}'
        )
    return "\n".join(lines) + "\n"


_PROFILES = {
    "default": None,
    "coarse": {1: (16, 24, 32, 48, 64), 2: (8, 12, 16, 24, 32, 48, 64), 3: (4, 5, 6, 8, 10, 12)},
    "fine": {
        1: (32, 48, 64, 96, 128, 192, 256, 384, 512, 768),
        2: (64, 80, 96, 128, 160, 192, 224, 256, 320, 384, 448, 512, 640, 768, 896, 1024, 1280),
        3: (4, 5, 6, 8, 10, 12, 14, 16),
    },
}


def _lattice_options(args, dim: int) -> LatticeSumOptions:
    opts = LatticeSumOptions()
    preset = _PROFILES.get(args.profile)
    if preset is not None:
        opts.N_range = preset[dim]
    if args.nmax is not None:
        base = list(opts.N_range) if opts.N_range else None
        if base:
            opts.N_range = tuple(n for n in base if n <= args.nmax) or (args.nmax,)
    if args.prec is not None:
        opts.dps = args.prec
    if args.tol is not None:
        opts.fit_tol = args.tol
    return opts


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="symzeta", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="group", required=True)

    def common(sp):
        sp.add_argument("--out", choices=("json", "csv"), default="json")
        sp.add_argument("--nmax", type=int, default=None, help="cap on lattice ladder radii")
        sp.add_argument("--prec", type=int, default=None, help="working precision (decimal digits)")
        sp.add_argument("--tol", type=float, default=None, help="fit tolerance (error if exceeded)")
        sp.add_argument("--profile", choices=tuple(_PROFILES), default="default",
                        help="sample-radius ladder preset")
        sp.add_argument("--seed", type=int, default=None, help="accepted and ignored")

    zeta = sub.add_parser("zeta", help="zeta-function evaluations").add_subparsers(
        dest="which", required=True
    )
    for name in ("riemann", "hurwitz", "quadratic", "torus"):
        sp = zeta.add_parser(name)
        sp.add_argument("--s", required=True, help="argument, complex as a+bi")
        if name == "hurwitz":
            sp.add_argument("--p", required=True, help="shift parameter > 0")
        if name == "quadratic":
            sp.add_argument("--form", required=True, help='matrix "a,b;c,d"')
        if name == "torus":
            sp.add_argument("--dim", type=int, required=True)
        common(sp)

    sum_p = sub.add_parser("sum", help="regularized sums").add_subparsers(dest="which", required=True)
    sp = sum_p.add_parser("fp")
    sp.add_argument("--symbol", required=True)
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--form", default=None)
    common(sp)

    int_p = sub.add_parser("integral", help="regularized integrals").add_subparsers(dest="which", required=True)
    sp = int_p.add_parser("cutoff")
    sp.add_argument("--symbol", required=True)
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--form", default=None)
    common(sp)

    res_p = sub.add_parser("residue", help="noncommutative residue").add_subparsers(dest="which", required=True)
    sp = res_p.add_parser("symbol")
    sp.add_argument("--symbol", required=True)
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--form", default=None)
    common(sp)

    det_p = sub.add_parser("det", help="zeta determinants").add_subparsers(dest="which", required=True)
    sp = det_p.add_parser("torus")
    sp.add_argument("--dim", type=int, required=True)
    common(sp)

    sweep_p = sub.add_parser("sweep", help="Laurent sweeps near z = 0").add_subparsers(dest="which", required=True)
    sp = sweep_p.add_parser("laurent")
    sp.add_argument("--symbol", required=True)
    sp.add_argument("--dim", type=int, required=True)
    sp.add_argument("--form", default=None)
    sp.add_argument("--slope", type=float, default=-1.0, help="order slope b of the family")
    sp.add_argument("--target", choices=("sum", "integral"), default="sum")
    sp.add_argument("--radius", type=float, default=0.25)
    sp.add_argument("--npoints", type=int, default=16)
    common(sp)
    return p


def _diag_from_zeta(res) -> Dict:
    d = dict(res.diagnostics)
    diag = {
        "pipeline": d.pop("pipeline", None),
        "residual": d.pop("residual", None),
        "condition": d.pop("condition", None),
        "nmax": d.pop("nmax", None),
    }
    for k, v in d.items():
        if isinstance(v, (int, float, str, bool, complex)) or v is None:
            diag[k] = v
    return diag


def run(argv: Optional[List[str]] = None) -> Tuple[int, str]:
    """Execute one invocation; returns (exit_code, document)."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse already printed usage; normalize the code
        return (0 if exc.code == 0 else 2), ""

    t0 = time.perf_counter()
    try:
        env = _dispatch(args, t0)
        return 0, render(env, args.out)
    except UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2, ""
    except (AccuracyError, PoorFitError, IllConditionedError, NonSimplePoleError) as exc:
        estimate = getattr(exc, "estimate", None)
        result = getattr(exc, "result", None)
        if estimate is None and result is not None:
            estimate = result.constant
        env = make_envelope(
            _command_name(args),
            {},
            complex(estimate) if estimate is not None else complex("nan"),
            diagnostics={
                "pipeline": "failed",
                "error": f"{type(exc).__name__}: {exc}",
                "condition": getattr(exc, "condition", None),
            },
            runtime_ms=(time.perf_counter() - t0) * 1e3,
        )
        return 3, render(env, args.out)
    except (ParameterError, PreconditionError) as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 2, ""


def _command_name(args) -> str:
    return f"{args.group}.{args.which}"


def _dispatch(args, t0: float) -> Dict:
    name = _command_name(args)
    ms = lambda: (time.perf_counter() - t0) * 1e3

    if args.group == "zeta":
        zopts = ZetaOptions()
        if args.tol is not None:
            zopts.tol = args.tol
        s = parse_complex(args.s)
        if args.which == "riemann":
            res = riemann_zeta_reg(s, zopts)
            inputs = {"s": s}
        elif args.which == "hurwitz":
            pval = float(parse_complex(args.p).real)
            res = hurwitz_zeta_reg(s, pval, zopts)
            inputs = {"s": s, "p": pval}
        elif args.which == "quadratic":
            form = parse_form(args.form)
            zopts.lattice = _lattice_options(args, form.dimension)
            if args.profile == "default" and args.nmax is None and args.prec is None and args.tol is None:
                zopts.lattice = None
            res = quadratic_zeta(form, s, zopts)
            inputs = {"form": args.form, "s": s}
        else:
            if not 1 <= args.dim <= 3:
                raise UsageError("torus dimension must be 1..3")
            zopts.lattice = None
            res = torus_zeta(args.dim, s, zopts)
            inputs = {"dim": args.dim, "s": s}
        return make_envelope(
            name, inputs, res.value, is_pole=res.is_pole,
            residue=res.residue_in_z if res.is_pole else None,
            diagnostics=_diag_from_zeta(res), runtime_ms=ms(),
        )

    if args.group == "det":
        if not 1 <= args.dim <= 2:
            raise UsageError("determinant implemented for dim 1 and 2")
        val = torus_zeta_determinant(args.dim)
        return make_envelope(
            name, {"dim": args.dim}, complex(val),
            diagnostics={"pipeline": "richardson_derivative"}, runtime_ms=ms(),
        )

    form = parse_form(args.form) if getattr(args, "form", None) else None
    sigma = parse_symbol(args.symbol, args.dim, form)
    inputs = {"symbol": args.symbol, "dim": args.dim}
    if getattr(args, "form", None):
        inputs["form"] = args.form

    if args.group == "sum":
        if args.dim == 1:
            val = cutoff_sum_1d(sigma)
            return make_envelope(name, inputs, val,
                                 diagnostics={"pipeline": "em"}, runtime_ms=ms())
        res = cutoff_sum_lattice(sigma, _lattice_options(args, args.dim))
        diag = {
            "pipeline": res.diagnostics.get("engine"),
            "residual": res.residual_norm,
            "condition": res.condition,
            "nmax": max(res.diagnostics.get("ladder", (0,))),
        }
        return make_envelope(name, inputs, res.constant, diagnostics=diag, runtime_ms=ms())

    if args.group == "integral":
        res = cutoff_integral(sigma)
        return make_envelope(
            name, inputs, res.value,
            diagnostics={"pipeline": "constant_term",
                         "had_log_obstruction": res.flags["had_log_obstruction"]},
            runtime_ms=ms(),
        )

    if args.group == "residue":
        val = noncommutative_residue(sigma)
        return make_envelope(name, inputs, val,
                             diagnostics={"pipeline": "sphere_quadrature"}, runtime_ms=ms())

    if args.group == "sweep":
        family = riesz_family(sigma, args.slope)
        recorded: List[Tuple[complex, complex]] = []
        sw = SweepOptions(radius=args.radius, npoints=args.npoints)
        if args.dim == 1:
            base_f = lambda z: cutoff_sum_1d(family.symbol_at(z))
        elif args.target == "sum":
            lat = _lattice_options(args, args.dim)
            base_f = lambda z: cutoff_sum_lattice(family.symbol_at(z), lat).constant
        else:
            from .reg_integral import cutoff_integral_family

            base_f = lambda z: cutoff_integral_family(family, z).value
        if args.target == "integral" and args.dim == 1:
            from .reg_integral import cutoff_integral_family

            base_f = lambda z: cutoff_integral_family(family, z).value

        def F(z):
            v = base_f(z)
            recorded.append((complex(z), complex(v)))
            return v

        fit = laurent_fit(F, sw.radius, sw.npoints)
        pole = abs(fit.c_minus1) > 1e-6 * max(1.0, abs(fit.c0))
        inputs["slope"] = args.slope
        inputs["target"] = args.target
        return make_envelope(
            name, inputs, fit.c0, is_pole=pole,
            residue=fit.c_minus1 if pole else None,
            diagnostics={"pipeline": f"{args.target}_sweep",
                         "residual": fit.max_aliasing_estimate,
                         "nmax": None,
                         "radius": fit.radius, "npoints": fit.npoints},
            runtime_ms=ms(), rows=recorded,
        )

    raise UsageError(f"unknown command {name}")


def main(argv: Optional[List[str]] = None) -> int:
    code, doc = run(argv)
    if doc:
        sys.stdout.write(doc)
    return code


if __name__ == "__main__":
    sys.exit(main())
