"""JSON formats for dessins, polynomials, operators and monodromy results."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .dessin import Dessin, Permutation
from .diffop import LinearDifferentialOperator, NumericDifferentialOperator
from .exact import ExactPolynomial
from .monodromy import MonodromyResult
from .shabat import ComplexPolynomial, ShabatSolution
from .universal import MultivariatePolynomial, UniversalOperator, coefficient_names


class FormatError(ValueError):
    """Malformed input; the message names the offending line or field."""


def load_json(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _field(obj: Any, name: str, where: str) -> Any:
    if not isinstance(obj, dict):
        raise FormatError(f"{where}: expected a JSON object")
    if name not in obj:
        raise FormatError(f"{where}: missing field '{name}'")
    return obj[name]


def _complex_pair(z: complex) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _parse_complex(v: Any, where: str) -> complex:
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(isinstance(x, (int, float)) for x in v):
        return complex(v[0], v[1])
    raise FormatError(f"{where}: expected a number or a [re, im] pair")


# -- dessins -------------------------------------------------------------------


def _cycles(p: Permutation) -> list:
    return [list(c) for c in p.cycles()]


def dessin_to_json(d: Dessin) -> dict:
    return {"edges": d.edges, "black": _cycles(d.black), "white": _cycles(d.white)}


def dessin_from_json(obj: Any) -> Dessin:
    e = _field(obj, "edges", "dessin")
    if not isinstance(e, int) or isinstance(e, bool) or e < 1:
        raise FormatError("dessin.edges: expected a positive integer")
    perms = []
    for name in ("black", "white"):
        cyc = _field(obj, name, "dessin")
        if not isinstance(cyc, list) or not all(
            isinstance(c, list) and all(isinstance(i, int) and not isinstance(i, bool) for i in c) for c in cyc
        ):
            raise FormatError(f"dessin.{name}: expected a list of integer cycles")
        try:
            perms.append(Permutation.from_cycles(cyc, e))
        except ValueError as exc:
            raise FormatError(f"dessin.{name}: {exc}") from exc
    try:
        return Dessin(*perms)
    except ValueError as exc:
        raise FormatError(f"dessin: {exc}") from exc


# -- polynomials -----------------------------------------------------------------


def polynomial_to_json(p) -> dict:
    if isinstance(p, ExactPolynomial):
        return {"coeffs": [_rational(c) for c in p.coeffs]}
    p = ComplexPolynomial.coerce(p)
    return {"coeffs": [_complex_pair(c) for c in p.coeffs]}


def _exact_entry(v: Any) -> Fraction | None:
    # floats are floating point; only integral ones count as exact
    if isinstance(v, bool):
        return None
    if isinstance(v, int):
        return Fraction(v)
    if isinstance(v, float):
        return Fraction(int(v)) if v.is_integer() else None
    if isinstance(v, str):
        try:
            return Fraction(v)
        except ValueError:
            return None
    if isinstance(v, list) and len(v) == 2:
        if all(isinstance(x, str) for x in v):
            try:
                return Fraction(int(v[0]), int(v[1]))
            except (ValueError, ZeroDivisionError):
                return None
        if not isinstance(v[1], str) and v[1] == 0:
            return _exact_entry(v[0]) if not isinstance(v[0], str) else None
    return None


def polynomial_from_json(obj: Any):
    """ExactPolynomial when every coefficient is an exact rational, else ComplexPolynomial.

    Coefficients may be ``[re, im]`` pairs, plain numbers, strings such as
    ``"-3/4"`` or ``["num", "den"]`` string pairs. Integers and integral
    floats are exact; any other float makes the whole polynomial numeric.
    """
    coeffs = _field(obj, "coeffs", "polynomial")
    if not isinstance(coeffs, list) or not coeffs:
        raise FormatError("polynomial.coeffs: expected a nonempty list")
    exact = [_exact_entry(v) for v in coeffs]
    if all(c is not None for c in exact):
        p = ExactPolynomial(exact)
        if p.is_zero():
            raise FormatError("polynomial.coeffs: polynomial is zero")
        return p
    vals = []
    for i, v in enumerate(coeffs):
        if isinstance(v, str) or (isinstance(v, list) and any(isinstance(x, str) for x in v)):
            raise FormatError(f"polynomial.coeffs[{i}]: cannot mix rational strings with complex entries")
        vals.append(_parse_complex(v, f"polynomial.coeffs[{i}]"))
    return ComplexPolynomial(tuple(vals))


def _vertices(vs) -> list:
    return [[_complex_pair(z), int(m)] for z, m in vs]


def shabat_solution_to_json(sol: ShabatSolution) -> dict:
    val = sol.valency_data()
    return {
        "coeffs": [_complex_pair(c) for c in sol.poly.coeffs],
        "black_vertices": _vertices(sol.black_vertices),
        "white_vertices": _vertices(sol.white_vertices),
        "valencies": {"black": list(val.alpha), "white": list(val.beta)},
        "critical_values": [_complex_pair(v) for v in sol.critical_values],
        "residual": sol.residual,
        "seed": sol.seed,
    }


# -- operators -------------------------------------------------------------------


def _rational(c: Fraction) -> list:
    return [str(c.numerator), str(c.denominator)]


def operator_to_json(L) -> dict:
    if isinstance(L, NumericDifferentialOperator):
        return {"numeric": True, "coeffs": [[_complex_pair(c) for c in q] for q in L.to_complex()]}
    return {"coeffs": [[_rational(c) for c in q.coeffs] for q in L.coeffs]}


def operator_from_json(obj: Any):
    coeffs = _field(obj, "coeffs", "operator")
    if not isinstance(coeffs, list) or not coeffs:
        raise FormatError("operator.coeffs: expected a nonempty list")
    if obj.get("numeric"):
        return NumericDifferentialOperator(
            [[_parse_complex(v, f"operator.coeffs[{j}]") for v in q] for j, q in enumerate(coeffs)]
        )
    qs = []
    for j, q in enumerate(coeffs):
        try:
            qs.append(ExactPolynomial([Fraction(int(n), int(d)) for n, d in q]))
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise FormatError(f"operator.coeffs[{j}]: expected [\"num\", \"den\"] pairs") from exc
    return LinearDifferentialOperator(qs)


def universal_to_json(D: UniversalOperator) -> dict:
    return {
        "n": D.n,
        "variables": list(D.variables),
        "orders": [
            {"order": k, "terms": [[list(e), f"{c.numerator}/{c.denominator}"] for e, c in D[k].terms.items()]}
            for k in range(1, D.n + 1)
        ],
    }


def universal_from_json(obj: Any) -> UniversalOperator:
    n = _field(obj, "n", "universal")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise FormatError("universal.n: expected a positive integer")
    names = coefficient_names(n)
    if _field(obj, "variables", "universal") != list(names):
        raise FormatError("universal.variables: expected a_0..a_{n-1}")
    orders = _field(obj, "orders", "universal")
    if not isinstance(orders, list) or not all(isinstance(o, dict) and isinstance(o.get("order"), int) for o in orders):
        raise FormatError("universal.orders: expected objects with an integer 'order'")
    orders = sorted(orders, key=lambda o: o["order"])
    if [o["order"] for o in orders] != list(range(1, n + 1)):
        raise FormatError(f"universal.orders: expected orders 1..{n}")
    coeffs = []
    for o in orders:
        try:
            terms = {tuple(e): Fraction(c) for e, c in o["terms"]}
            coeffs.append(MultivariatePolynomial(names, terms))
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"universal.orders[{o['order']}]: bad term list") from exc
    try:
        return UniversalOperator(n, coeffs)
    except ValueError as exc:
        raise FormatError(f"universal: {exc}") from exc


# -- monodromy -------------------------------------------------------------------


def monodromy_to_json(r: MonodromyResult) -> dict:
    return {
        "sigma_0": _cycles(r.sigma_0),
        "sigma_1": _cycles(r.sigma_1),
        "critical_values": [_complex_pair(v) for v in r.critical_values],
        "base_point": _complex_pair(r.base_point),
        "fibre": [_complex_pair(t) for t in r.fibre],
        "certificate": r.certificate,
    }
