"""Command-line interface: ``dessin-rh <command> [options]``.

Exit codes: 0 on success, 1 for domain errors (no solution, unsupported
degree, ...), 2 for unreadable or malformed input.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import io
from .annihilator import DegreeBoundExceeded, fuchsian_annihilator, sampled_annihilator
from .dessin import (
    NotATreeError,
    NotConnectedError,
    classify_tree,
    has_linear_rep_dim_le_2,
    moebius_representation,
)
from .exact import ExactPolynomial
from .monodromy import TrackingError, recover_dessin, shabat_for_tree, verify_riemann_hilbert
from .shabat import ComplexPolynomial, NoSolutionError, NotShabatError
from .universal import universal_annihilator

PRECISIONS = (53, 106, 212)


class DomainError(Exception):
    pass


@dataclass(frozen=True)
class Config:
    precision: int = 53
    tolerance: float = 1e-10
    max_coeff_degree: int | None = None
    seeds: int = 32
    seed_base: int = 0

    def __post_init__(self):
        if self.precision not in PRECISIONS:
            raise ValueError(f"precision must be one of {PRECISIONS}")
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if self.seeds < 1:
            raise ValueError("at least one seed is required")


def _read(path: str):
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise io.FormatError(f"{path}: {exc.strerror}") from exc
    return io.load_json(text)


def _fmt_complex(z: complex) -> str:
    z = complex(z)
    if abs(z.imag) < 1e-12 * max(1.0, abs(z)):
        return f"{z.real:.12g}"
    return f"{z.real:.12g}{z.imag:+.12g}i"


def _fmt_coef(z: complex) -> str:
    text = _fmt_complex(z)
    return f"({text})" if text.endswith("i") else text


def _fmt_moebius(t) -> str:
    a, b, c, d = (_fmt_coef(v) for v in (t.a, t.b, t.c, t.d))
    return f"z -> ({a}*z + {b}) / ({c}*z + {d})"


def _emit(args, payload: dict, pretty: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, indent=2))
    else:
        print(pretty)


# -- commands ----------------------------------------------------------------------


def cmd_classify(args, cfg: Config) -> None:
    d = io.dessin_from_json(_read(args.tree))
    cls = classify_tree(d)
    rep = moebius_representation(d)
    low = has_linear_rep_dim_le_2(d)
    yn = {True: "yes", False: "no"}
    pretty = f"{cls}; Möbius: {yn[rep is not None]}; dim ≤ 2 rep: {yn[low]}"
    payload = {"class": str(cls), "moebius": rep is not None, "dim_le_2": low}
    if rep is not None:
        pretty += f"\n  black: {_fmt_moebius(rep.black)}\n  white: {_fmt_moebius(rep.white)}"
        payload["transforms"] = {"black": _fmt_moebius(rep.black), "white": _fmt_moebius(rep.white)}
    _emit(args, payload, pretty)


def _solve_tree(d, cfg: Config):
    precision = cfg.precision
    while True:
        try:
            return shabat_for_tree(
                d, seeds_per_round=cfg.seeds, seed_base=cfg.seed_base,
                tol=cfg.tolerance, precision=precision,
            )
        except (TrackingError, NoSolutionError) as exc:
            higher = [p for p in PRECISIONS if p > precision]
            if not higher:
                raise DomainError(str(exc)) from exc
            print(f"warning: {exc}; retrying at {higher[0]} bits", file=sys.stderr)
            precision = higher[0]


def cmd_shabat(args, cfg: Config) -> None:
    d = io.dessin_from_json(_read(args.tree))
    sol, _ = _solve_tree(d, cfg)
    payload = io.shabat_solution_to_json(sol)
    coeffs = " ".join(_fmt_complex(c) for c in sol.poly.coeffs)
    pretty = (
        f"coefficients (lowest first): {coeffs}\n"
        f"critical values: {', '.join(_fmt_complex(v) for v in sol.critical_values)}\n"
        f"black vertices: {', '.join(f'{_fmt_complex(z)} ({m})' for z, m in sol.black_vertices)}\n"
        f"white vertices: {', '.join(f'{_fmt_complex(z)} ({m})' for z, m in sol.white_vertices)}\n"
        f"residual: {sol.residual:.3g}"
    )
    _emit(args, payload, pretty)


def _annihilate_poly(p, cfg: Config):
    if isinstance(p, ComplexPolynomial):
        exact = p.to_exact()
        p = exact if exact is not None else p
    if isinstance(p, ExactPolynomial):
        return fuchsian_annihilator(p, cfg.max_coeff_degree)
    return sampled_annihilator(p.coeffs, max_degree=cfg.max_coeff_degree, precision=cfg.precision)


def cmd_annihilate(args, cfg: Config) -> None:
    obj = _read(args.input)
    if isinstance(obj, dict) and "edges" in obj:
        sol, _ = _solve_tree(io.dessin_from_json(obj), cfg)
        p = sol.poly
    else:
        p = io.polynomial_from_json(obj)
    L = _annihilate_poly(p, cfg)
    _emit(args, io.operator_to_json(L), str(L))


def cmd_universal(args, cfg: Config) -> None:
    D = universal_annihilator(args.n)
    _emit(args, io.universal_to_json(D), D.pretty())


def _as_complex(p) -> ComplexPolynomial:
    if isinstance(p, ExactPolynomial):
        return ComplexPolynomial(tuple(complex(c) for c in p.coeffs))
    return p


def cmd_verify(args, cfg: Config) -> None:
    d = io.dessin_from_json(_read(args.tree))
    p = _as_complex(io.polynomial_from_json(_read(args.poly)))
    ok, iso = verify_riemann_hilbert(d, p, cfg.tolerance)
    result = recover_dessin(p, cfg.tolerance)
    payload = {"match": ok, "monodromy": io.monodromy_to_json(result)}
    if iso is not None:
        payload["relabeling"] = list(iso.relabeling)
        payload["swapped"] = iso.swapped
    pretty = (
        f"match: {'yes' if ok else 'no'}\n"
        f"sigma_0: {result.sigma_0}\nsigma_1: {result.sigma_1}\n"
        f"certificate: {result.certificate:.3g}"
    )
    _emit(args, payload, pretty)


# -- argument parsing --------------------------------------------------------------


def _default_precision() -> int:
    env = os.environ.get("DESSIN_RH_PRECISION")
    if env is None:
        return 53
    try:
        value = int(env)
    except ValueError:
        return 53
    return value if value in PRECISIONS else 53


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--precision", type=int, choices=PRECISIONS, default=_default_precision(),
                        help="working precision in bits (default from DESSIN_RH_PRECISION, else 53)")
    common.add_argument("--tol", type=float, default=1e-10, help="numeric tolerance")
    common.add_argument("--max-degree", type=int, default=None, help="coefficient degree bound")
    common.add_argument("--seeds", type=int, default=32, help="Newton seeds per round")
    common.add_argument("--seed-base", type=int, default=0, help="first seed")
    common.add_argument("--format", choices=("json", "pretty"), default="pretty")

    parser = argparse.ArgumentParser(
        prog="dessin-rh", description="Plane trees, Shabat polynomials and annihilating operators."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("classify", parents=[common], help="classify a plane tree")
    p.add_argument("tree", help="dessin JSON file ('-' for stdin)")
    p.set_defaults(func=cmd_classify)
    p = sub.add_parser("shabat", parents=[common], help="Shabat polynomial of a plane tree")
    p.add_argument("tree")
    p.set_defaults(func=cmd_shabat)
    p = sub.add_parser("annihilate", parents=[common], help="operator annihilating the inverses")
    p.add_argument("input", help="polynomial or dessin JSON file")
    p.set_defaults(func=cmd_annihilate)
    p = sub.add_parser("universal", parents=[common], help="universal operator of degree n")
    p.add_argument("n", type=int)
    p.set_defaults(func=cmd_universal)
    p = sub.add_parser("verify", parents=[common], help="compare a tree with a polynomial's monodromy")
    p.add_argument("tree")
    p.add_argument("poly")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = Config(args.precision, args.tol, args.max_degree, args.seeds, args.seed_base)
        args.func(args, cfg)
    except io.FormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, NotATreeError, NotConnectedError, NotShabatError, NoSolutionError,
            DegreeBoundExceeded, TrackingError, ValueError, ArithmeticError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
