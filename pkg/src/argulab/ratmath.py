"""Exact arithmetic: rationals, binomial coefficients and sparse polynomials.

Rationals are :class:`fractions.Fraction`, which is already canonical
(reduced, positive denominator) after every operation.  The polynomial type
keeps rational coefficients keyed by exponent tuples and supports the handful
of operations needed for iterated definite integration with polynomial
bounds.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational as _RationalABC
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence, Union

__all__ = [
    "Rational",
    "MAX_EXPONENT",
    "as_rational",
    "binom_coeff",
    "SparsePoly",
    "poly_integrate",
    "poly_eval",
]

Rational = Fraction

# exponents are treated as unsigned 32-bit values
MAX_EXPONENT = 2**32 - 1

Scalar = Union[int, Fraction]


def as_rational(x) -> Fraction:
    """Convert an int, Fraction or decimal string to a Fraction.

    Floats are rejected because they silently carry binary rounding error.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def binom_coeff(n: int, k: int) -> int:
    """C(n, k) for naturals, returning 0 when k > n."""
    if not all(isinstance(v, int) and not isinstance(v, bool) for v in (n, k)):
        raise TypeError("binom_coeff takes integers")
    if n < 0 or k < 0:
        raise ValueError("binom_coeff takes naturals")
    return math.comb(n, k)


def _check_exponent(e: int) -> None:
    if e > MAX_EXPONENT:
        raise OverflowError(f"exponent {e} exceeds {MAX_EXPONENT}")


class SparsePoly:
    """Multivariate polynomial with Fraction coefficients.

    ``variables`` is an ordered tuple of names and ``terms`` maps exponent
    tuples (one entry per variable) to nonzero coefficients.  Instances are
    immutable; every operation returns a new polynomial.  Operands over
    different variable lists are aligned to the ordered union of both lists.
    """

    __slots__ = ("_vars", "_terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[Sequence[int], Scalar] | None = None):
        vs = tuple(variables)
        if len(set(vs)) != len(vs):
            raise ValueError(f"duplicate variable names in {vs}")
        clean: dict[tuple[int, ...], Fraction] = {}
        for exps, coef in (terms or {}).items():
            e = tuple(int(x) for x in exps)
            if len(e) != len(vs):
                raise ValueError(f"exponent vector {e} does not match variables {vs}")
            for x in e:
                if x < 0:
                    raise ValueError("negative exponent")
                _check_exponent(x)
            c = as_rational(coef)
            if c:
                clean[e] = clean.get(e, Fraction(0)) + c
        self._vars = vs
        self._terms = {e: c for e, c in clean.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, variables: tuple[str, ...], terms: dict) -> "SparsePoly":
        # trusted constructor: terms already clean
        obj = cls.__new__(cls)
        obj._vars = variables
        obj._terms = terms
        obj._hash = None
        return obj

    @classmethod
    def constant(cls, value: Scalar, variables: Sequence[str] = ()) -> "SparsePoly":
        vs = tuple(variables)
        c = as_rational(value)
        return cls._raw(vs, {(0,) * len(vs): c} if c else {})

    @classmethod
    def var(cls, name: str, variables: Sequence[str] | None = None) -> "SparsePoly":
        vs = tuple(variables) if variables is not None else (name,)
        if name not in vs:
            raise ValueError(f"{name!r} not among {vs}")
        e = tuple(1 if v == name else 0 for v in vs)
        return cls._raw(vs, {e: Fraction(1)})

    @classmethod
    def linear(cls, coeffs: Mapping[str, Scalar], const: Scalar, variables: Sequence[str]) -> "SparsePoly":
        """Build ``const + sum(coeffs[v] * v)``."""
        vs = tuple(variables)
        terms: dict = {}
        c0 = as_rational(const)
        if c0:
            terms[(0,) * len(vs)] = c0
        for name, c in coeffs.items():
            c = as_rational(c)
            if c:
                i = vs.index(name)
                e = [0] * len(vs)
                e[i] = 1
                terms[tuple(e)] = c
        return cls._raw(vs, terms)

    @property
    def variables(self) -> tuple[str, ...]:
        return self._vars

    @property
    def terms(self) -> Mapping[tuple[int, ...], Fraction]:
        return MappingProxyType(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError("polynomial is not constant")
        return next(iter(self._terms.values()), Fraction(0))

    def degree(self, var: str | None = None) -> int:
        if not self._terms:
            return -1
        if var is None:
            return max(sum(e) for e in self._terms)
        if var not in self._vars:
            return 0
        i = self._vars.index(var)
        return max(e[i] for e in self._terms)

    def mentions(self, var: str) -> bool:
        """True when ``var`` occurs with a nonzero exponent."""
        if var not in self._vars:
            return False
        i = self._vars.index(var)
        return any(e[i] for e in self._terms)

    # alignment -------------------------------------------------------------

    def with_variables(self, variables: Sequence[str]) -> "SparsePoly":
        vs = tuple(variables)
        if vs == self._vars:
            return self
        missing = [v for v in self._vars if v not in vs]
        for v in missing:
            if self.mentions(v):
                raise ValueError(f"cannot drop variable {v!r} that occurs in the polynomial")
        idx = [self._vars.index(v) if v in self._vars else None for v in vs]
        terms = {tuple(e[i] if i is not None else 0 for i in idx): c for e, c in self._terms.items()}
        return SparsePoly._raw(vs, terms)

    def _align(self, other: "SparsePoly") -> tuple["SparsePoly", "SparsePoly"]:
        if self._vars == other._vars:
            return self, other
        union = self._vars + tuple(v for v in other._vars if v not in self._vars)
        return self.with_variables(union), other.with_variables(union)

    def _coerce(self, other) -> "SparsePoly | None":
        if isinstance(other, SparsePoly):
            return other
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return SparsePoly.constant(other, self._vars)
        return None

    # arithmetic ------------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b = self._align(o)
        terms = dict(a._terms)
        for e, c in b._terms.items():
            s = terms.get(e, 0) + c
            if s:
                terms[e] = s
            else:
                terms.pop(e, None)
        return SparsePoly._raw(a._vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly._raw(self._vars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, c: Scalar) -> "SparsePoly":
        c = as_rational(c)
        if not c:
            return SparsePoly._raw(self._vars, {})
        return SparsePoly._raw(self._vars, {e: v * c for e, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return self.scale(other)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        a, b = self._align(other)
        if a._terms and b._terms:
            for i in range(len(a._vars)):
                _check_exponent(max(e[i] for e in a._terms) + max(e[i] for e in b._terms))
        out: dict = {}
        get = out.get
        for e1, c1 in a._terms.items():
            for e2, c2 in b._terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                out[e] = get(e, 0) + c1 * c2
        return SparsePoly._raw(a._vars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("only natural powers are supported")
        if self._terms:
            _check_exponent(self.degree() * n)
        result = SparsePoly.constant(1, self._vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        o = self._coerce(other) if not isinstance(other, SparsePoly) else other
        if o is None:
            return NotImplemented
        a, b = self._align(o)
        return a._terms == b._terms

    def __hash__(self):
        if self._hash is None:
            # hash is independent of unused variables so that equal polys hash equal
            used = [i for i in range(len(self._vars)) if any(e[i] for e in self._terms)]
            key = frozenset(
                (tuple((self._vars[i], e[i]) for i in used if e[i]), c) for e, c in self._terms.items()
            )
            self._hash = hash(key)
        return self._hash

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for e, c in sorted(self._terms.items(), reverse=True):
            mono = "*".join(f"{v}^{x}" if x > 1 else v for v, x in zip(self._vars, e) if x)
            parts.append(f"{c}*{mono}" if mono else f"{c}")
        return " + ".join(parts)

    # calculus --------------------------------------------------------------

    def derivative(self, var: str) -> "SparsePoly":
        if var not in self._vars:
            return SparsePoly._raw(self._vars, {})
        i = self._vars.index(var)
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        return SparsePoly._raw(self._vars, out)

    def _group_by_power(self, i: int) -> dict[int, dict]:
        groups: dict[int, dict] = {}
        for e, c in self._terms.items():
            k = e[i]
            e2 = e[:i] + (0,) + e[i + 1:]
            g = groups.setdefault(k, {})
            g[e2] = g.get(e2, 0) + c
        return groups

    def substitute(self, var: str, value: "SparsePoly | Scalar") -> "SparsePoly":
        """Replace ``var`` by a polynomial (or scalar) not mentioning it."""
        if var not in self._vars:
            return self
        v = value if isinstance(value, SparsePoly) else SparsePoly.constant(value, self._vars)
        if v.mentions(var):
            raise ValueError(f"substituted value mentions {var!r}")
        p, v = self._align(v)
        groups = p._group_by_power(p._vars.index(var))
        return _horner(groups, v, p._vars)

    def integrate(self, var: str, lower, upper) -> "SparsePoly":
        return poly_integrate(self, var, lower, upper)

    def evaluate(self, assignment: Mapping[str, Scalar]) -> Fraction:
        return poly_eval(self, assignment)


def _horner(groups: dict[int, dict], h: SparsePoly, variables: tuple[str, ...]) -> SparsePoly:
    # sum_k groups[k] * h^k, evaluated Horner style
    if not groups:
        return SparsePoly._raw(variables, {})
    acc = SparsePoly._raw(variables, {})
    for k in range(max(groups), -1, -1):
        if acc._terms:
            acc = acc * h
        g = groups.get(k)
        if g:
            acc = acc + SparsePoly._raw(variables, {e: c for e, c in g.items() if c})
    return acc


def poly_integrate(p: SparsePoly, v: str, lower, upper) -> SparsePoly:
    """Definite integral of ``p`` over ``v`` from ``lower`` to ``upper``.

    The bounds may be scalars or polynomials that do not mention ``v``.  The
    result keeps ``p``'s variable list (``v`` simply no longer occurs).
    """
    if v not in p.variables:
        raise ValueError(f"{v!r} is not a variable of the integrand")
    lo = lower if isinstance(lower, SparsePoly) else SparsePoly.constant(lower, p.variables)
    hi = upper if isinstance(upper, SparsePoly) else SparsePoly.constant(upper, p.variables)
    if lo.mentions(v) or hi.mentions(v):
        raise ValueError(f"integration bounds must not mention {v!r}")
    q, lo = p._align(lo)
    q, hi = q._align(hi)
    i = q.variables.index(v)
    # antiderivative grouped by the new power of v
    groups: dict[int, dict] = {}
    for e, c in q.terms.items():
        k = e[i] + 1
        _check_exponent(k)
        e2 = e[:i] + (0,) + e[i + 1:]
        g = groups.setdefault(k, {})
        g[e2] = g.get(e2, 0) + c / k
    return _horner(groups, hi, q.variables) - _horner(groups, lo, q.variables)


def poly_eval(p: SparsePoly, assignment: Mapping[str, Scalar]) -> Fraction:
    """Evaluate exactly; every variable occurring in ``p`` must be assigned."""
    if not p.terms:
        return Fraction(0)
    missing = [v for v in p.variables if v not in assignment and p.mentions(v)]
    if missing:
        raise KeyError(f"no value for variable(s) {missing}")
    vals = [as_rational(assignment[v]) if v in assignment else Fraction(0) for v in p.variables]
    # cache powers per variable; integer num/den kept separate to avoid repeated gcds
    total = Fraction(0)
    pow_cache: list[dict[int, Fraction]] = [dict() for _ in vals]
    for e, c in p.terms.items():
        term = c
        for i, x in enumerate(e):
            if x:
                cache = pow_cache[i]
                px = cache.get(x)
                if px is None:
                    px = cache[x] = vals[i] ** x
                term *= px
        total += term
    return total


def monomial(exps: Mapping[str, int], variables: Iterable[str], coef: Scalar = 1) -> SparsePoly:
    vs = tuple(variables)
    return SparsePoly(vs, {tuple(exps.get(v, 0) for v in vs): coef})
