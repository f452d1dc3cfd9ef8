"""Exact symbolic calculus over jet variables: formal partial derivatives of a
single scalar field phi(x, y, t).

A monomial multiplies an exact rational coefficient, an integer power of phi,
a multiset of proper-derivative factors (phi_x, phi_xy, ...), and a multiset
of formal symbols f^(n), g^(n) standing for derivatives of two undetermined
functions of phi.  Polynomials are kept in a canonical normal form, and every
operation is exact: no floating point enters this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import factorial
from typing import Mapping, NamedTuple

__all__ = [
    "MAX_ORDER",
    "Branch",
    "JetIndex",
    "CoeffSymbol",
    "Monomial",
    "JetPoly",
    "OrderLimitError",
    "SpecializationError",
    "total_derivative",
    "specialize_log",
    "reduce_heat",
    "degree_decompose",
]

# Derivations in this package never exceed total order 4; the cap leaves
# headroom while turning runaway differentiation into a detected error.
MAX_ORDER = 8

_AXES = ("x", "y", "t")


class OrderLimitError(Exception):
    """A rewrite would push a jet factor or symbol order above MAX_ORDER."""


class SpecializationError(Exception):
    """Logarithmic specialization hit an unsupported or leftover symbol."""


class Branch(Enum):
    """Coupled upper/lower sign choice.

    The seed constraint phi_t + sign*phi_xx = 0 pairs with u = sign*2*phi_x/phi
    and with the matching sign in the exponential seeds; no mixed-sign
    configuration is constructible.
    """

    PLUS = 1
    MINUS = -1

    @property
    def sign(self) -> int:
        return self.value

    @classmethod
    def from_name(cls, name: str) -> "Branch":
        try:
            return cls[name.upper()]
        except KeyError:
            raise ValueError(
                f"unknown branch {name!r} (expected 'plus' or 'minus')"
            ) from None


class JetIndex(NamedTuple):
    """Derivative orders (i, j, k) in x, y and t; (0, 0, 0) is phi itself."""

    i: int
    j: int
    k: int

    @property
    def order(self) -> int:
        return self.i + self.j + self.k

    def bumped(self, direction: str) -> "JetIndex":
        axis = _AXES.index(direction)
        return JetIndex(*(n + 1 if pos == axis else n for pos, n in enumerate(self)))

    def render(self) -> str:
        if self.order == 0:
            return "phi"
        return "phi_" + "x" * self.i + "y" * self.j + "t" * self.k


class CoeffSymbol(NamedTuple):
    """Formal n-th derivative of one of the two ansatz functions.

    Family "F" collects derivatives of f, family "G" derivatives of g.
    """

    family: str
    order: int

    def render(self) -> str:
        base = "f" if self.family == "F" else "g"
        if 1 <= self.order <= 3:
            return base + "'" * self.order
        return f"{base}^({self.order})"


@dataclass(frozen=True)
class Monomial:
    """One normalized term of a JetPoly."""

    coeff: Fraction
    phi_power: int
    jets: tuple[JetIndex, ...]
    syms: tuple[CoeffSymbol, ...]

    @property
    def degree(self) -> int:
        """Homogeneous degree: the count of proper-derivative factors."""
        return len(self.jets)

    def render(self) -> str:
        factors = []
        if self.phi_power:
            factors.append("phi" if self.phi_power == 1 else f"phi^{self.phi_power}")
        factors.extend(idx.render() for idx in self.jets)
        factors.extend(sym.render() for sym in self.syms)
        if not factors:
            return str(self.coeff)
        body = "*".join(factors)
        if self.coeff == 1:
            return body
        if self.coeff == -1:
            return "-" + body
        return f"{self.coeff}*{body}"


_Key = tuple[int, tuple[JetIndex, ...], tuple[CoeffSymbol, ...]]
_ZERO = Fraction(0)


def _jet_key(idx: JetIndex):
    # conventional factor order: phi_x, phi_xx, phi_y, phi_xy, ..., phi_t, ...
    return (idx.k, idx.j, idx.i)


def _canonical_key(phi_power, jets, syms) -> _Key:
    jets = tuple(sorted((JetIndex(*idx) for idx in jets), key=_jet_key))
    syms = tuple(sorted(CoeffSymbol(*sym) for sym in syms))
    for idx in jets:
        if min(idx) < 0 or idx.order == 0:
            raise ValueError(f"invalid jet factor {idx}")
        if idx.order > MAX_ORDER:
            raise ValueError(f"jet factor {idx} exceeds order cap {MAX_ORDER}")
    for sym in syms:
        if sym.family not in ("F", "G"):
            raise ValueError(f"invalid symbol family {sym.family!r}")
        if not 0 <= sym.order <= MAX_ORDER:
            raise ValueError(f"symbol order {sym.order} outside [0, {MAX_ORDER}]")
    return (int(phi_power), jets, syms)


def _term_order(key: _Key):
    phi_power, jets, syms = key
    return (-len(jets), -phi_power, jets, syms)


class JetPoly:
    """Exact polynomial in jet variables, phi powers and coefficient symbols.

    Instances are immutable and canonical: factor tuples sorted, like terms
    merged, zero coefficients dropped, term order deterministic.  Arithmetic
    accepts ints and Fractions as scalars.
    """

    __slots__ = ("_terms",)

    def __init__(self, terms: Mapping[_Key, Fraction | int] | None = None):
        merged: dict[_Key, Fraction] = {}
        if terms:
            for (phi_power, jets, syms), coeff in terms.items():
                key = _canonical_key(phi_power, jets, syms)
                value = merged.get(key, _ZERO) + Fraction(coeff)
                if value:
                    merged[key] = value
                elif key in merged:
                    del merged[key]
        self._terms = {key: merged[key] for key in sorted(merged, key=_term_order)}

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "JetPoly":
        return cls()

    @classmethod
    def constant(cls, value: Fraction | int) -> "JetPoly":
        return cls({(0, (), ()): Fraction(value)})

    @classmethod
    def one(cls) -> "JetPoly":
        return cls.constant(1)

    @classmethod
    def phi_power(cls, power: int) -> "JetPoly":
        return cls({(power, (), ()): Fraction(1)})

    @classmethod
    def jet(cls, i: int, j: int, k: int) -> "JetPoly":
        if i == j == k == 0:
            return cls.phi_power(1)
        return cls({(0, (JetIndex(i, j, k),), ()): Fraction(1)})

    @classmethod
    def symbol(cls, family: str, order: int) -> "JetPoly":
        return cls({(0, (), (CoeffSymbol(family, order),)): Fraction(1)})

    # -- inspection --------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def monomials(self) -> tuple[Monomial, ...]:
        return tuple(
            Monomial(coeff, *key) for key, coeff in self._terms.items()
        )

    def has_symbols(self) -> bool:
        return any(syms for _, _, syms in self._terms)

    def render(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for key, coeff in self._terms.items():
            text = Monomial(coeff, *key).render()
            if not parts:
                parts.append(text)
            elif text.startswith("-"):
                parts.append("- " + text[1:])
            else:
                parts.append("+ " + text)
        return " ".join(parts)

    def __str__(self) -> str:
        return self.render()

    def __repr__(self) -> str:
        return f"JetPoly({self.render()})"

    def __eq__(self, other) -> bool:
        if not isinstance(other, JetPoly):
            return NotImplemented
        return self._terms == other._terms

    __hash__ = None  # mutable mapping inside; equality is structural

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "JetPoly") -> "JetPoly":
        if not isinstance(other, JetPoly):
            return NotImplemented
        terms = dict(self._terms)
        for key, coeff in other._terms.items():
            value = terms.get(key, _ZERO) + coeff
            if value:
                terms[key] = value
            elif key in terms:
                del terms[key]
        return JetPoly(terms)

    def __neg__(self) -> "JetPoly":
        return JetPoly({key: -coeff for key, coeff in self._terms.items()})

    def __sub__(self, other: "JetPoly") -> "JetPoly":
        if not isinstance(other, JetPoly):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other) -> "JetPoly":
        if isinstance(other, (int, Fraction)):
            if not other:
                return JetPoly()
            return JetPoly(
                {key: coeff * other for key, coeff in self._terms.items()}
            )
        if not isinstance(other, JetPoly):
            return NotImplemented
        out: dict[_Key, Fraction] = {}
        for (p1, jets1, syms1), c1 in self._terms.items():
            for (p2, jets2, syms2), c2 in other._terms.items():
                key = (
                    p1 + p2,
                    tuple(sorted(jets1 + jets2, key=_jet_key)),
                    tuple(sorted(syms1 + syms2)),
                )
                value = out.get(key, _ZERO) + c1 * c2
                if value:
                    out[key] = value
                elif key in out:
                    del out[key]
        return JetPoly(out)

    def __rmul__(self, other) -> "JetPoly":
        return self.__mul__(other)

    def __pow__(self, n: int) -> "JetPoly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("JetPoly powers must be nonnegative integers")
        result = JetPoly.one()
        for _ in range(n):
            result = result * self
        return result


def _accumulate(out: dict, key: _Key, coeff: Fraction) -> None:
    value = out.get(key, _ZERO) + coeff
    if value:
        out[key] = value
    elif key in out:
        del out[key]


def _with_replaced(factors: tuple, old, new) -> tuple:
    items = list(factors)
    items.remove(old)
    items.append(new)
    return tuple(sorted(items))


def _with_inserted(factors: tuple, new) -> tuple:
    return tuple(sorted(factors + (new,)))


def total_derivative(p: JetPoly, direction: str) -> JetPoly:
    """Total derivative along x, y or t.

    phi and every jet variable are treated as functions of (x, y, t), so a
    factor phi^e contributes e*phi^(e-1)*phi_d, a jet factor gets its order
    bumped, and a symbol C_n contributes C_(n+1)*phi_d by the chain rule.
    """
    if direction not in _AXES:
        raise ValueError(f"unknown direction {direction!r}")
    unit = JetIndex(0, 0, 0).bumped(direction)
    out: dict[_Key, Fraction] = {}
    for (phi_power, jets, syms), coeff in p._terms.items():
        if phi_power:
            _accumulate(
                out, (phi_power - 1, _with_inserted(jets, unit), syms), coeff * phi_power
            )
        for idx in set(jets):
            bumped = idx.bumped(direction)
            if bumped.order > MAX_ORDER:
                raise OrderLimitError(
                    f"derivative order above {MAX_ORDER} while differentiating "
                    f"{Monomial(coeff, phi_power, jets, syms).render()}"
                )
            _accumulate(
                out,
                (phi_power, _with_replaced(jets, idx, bumped), syms),
                coeff * jets.count(idx),
            )
        for sym in set(syms):
            raised = CoeffSymbol(sym.family, sym.order + 1)
            if raised.order > MAX_ORDER:
                raise OrderLimitError(
                    f"symbol order above {MAX_ORDER} while differentiating "
                    f"{Monomial(coeff, phi_power, jets, syms).render()}"
                )
            _accumulate(
                out,
                (
                    phi_power,
                    _with_inserted(jets, unit),
                    _with_replaced(syms, sym, raised),
                ),
                coeff * syms.count(sym),
            )
    return JetPoly(out)


def specialize_log(p: JetPoly, branch: Branch) -> JetPoly:
    """Substitute the logarithmic resolution of the ansatz functions.

    Every F_n becomes sign*2*(-1)^(n-1)*(n-1)!*phi^(-n) and every G_n becomes
    2*(-1)^(n-1)*(n-1)!*phi^(-n), for n >= 1.  Zeroth-order symbols are
    rejected: the undifferentiated logarithm never appears in final
    expressions.
    """
    out: dict[_Key, Fraction] = {}
    for (phi_power, jets, syms), coeff in p._terms.items():
        power = phi_power
        value = coeff
        for family, order in syms:
            if order == 0:
                raise SpecializationError(
                    f"cannot specialize zeroth-order symbol {family}_0"
                )
            value *= 2 * (-1) ** (order - 1) * factorial(order - 1)
            if family == "F":
                value *= branch.sign
            power -= order
        _accumulate(out, (power, jets, ()), value)
    return JetPoly(out)


def reduce_heat(p: JetPoly, branch: Branch) -> JetPoly:
    """Rewrite all t-derivatives through the constraint phi_t = -sign*phi_xx.

    Each jet factor (i, j, k) with k >= 1 becomes (-sign)^k * (i+2k, j, 0);
    the rewrite is a substitution on independent generators, so it is
    confluent and idempotent.  Requires a symbol-free (already specialized)
    polynomial.
    """
    if p.has_symbols():
        raise SpecializationError("reduce_heat requires a symbol-free polynomial")
    out: dict[_Key, Fraction] = {}
    for (phi_power, jets, _), coeff in p._terms.items():
        factor = 1
        new_jets = []
        for idx in jets:
            if idx.k:
                rewritten = JetIndex(idx.i + 2 * idx.k, idx.j, 0)
                if rewritten.order > MAX_ORDER:
                    raise OrderLimitError(
                        f"derivative order above {MAX_ORDER} while rewriting "
                        f"{Monomial(coeff, phi_power, jets, ()).render()}"
                    )
                factor *= (-branch.sign) ** idx.k
                new_jets.append(rewritten)
            else:
                new_jets.append(idx)
        _accumulate(out, (phi_power, tuple(sorted(new_jets)), ()), coeff * factor)
    return JetPoly(out)


def degree_decompose(p: JetPoly) -> dict[int, JetPoly]:
    """Partition terms by homogeneous degree (count of proper jet factors)."""
    buckets: dict[int, dict[_Key, Fraction]] = {}
    for key, coeff in p._terms.items():
        buckets.setdefault(len(key[1]), {})[key] = coeff
    return {degree: JetPoly(terms) for degree, terms in sorted(buckets.items())}
