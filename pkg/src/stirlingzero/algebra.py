"""Exact scalar, polynomial, and truncated-series arithmetic kernel.

Every number in the engine is a :class:`fractions.Fraction` (re-exported as
``Rational``); there is no floating point anywhere.  On top of that sit two
value types:

* :class:`MultiPoly` -- a sparse multivariate polynomial, stored as a map
  from exponent vectors to nonzero rational coefficients.  A variable may be
  flagged *Laurent*, which permits negative exponents (used for the variable
  that gets divided out of series coefficients); ordinary variables reject
  them.
* :class:`Series` -- a truncated power series in a single expansion variable
  whose coefficients are MultiPoly values.  The truncation order is explicit
  in the type and never inferred; asking for a coefficient beyond it raises
  :class:`PrecisionError` instead of silently returning zero.

All values are immutable after construction and may be shared freely across
threads or pickled to worker processes.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Rational = Fraction
Scalar = Union[int, Fraction]

__all__ = [
    "Rational",
    "MultiPoly",
    "Series",
    "interpolate_in_var",
    "EngineError",
    "PrecisionError",
    "PolynomialityError",
    "ConsistencyError",
    "BudgetError",
]


class EngineError(Exception):
    """Base class for engine-level failures."""


class PrecisionError(EngineError):
    """A coefficient beyond the stored truncation order was requested."""


class PolynomialityError(EngineError):
    """A surplus interpolation sample disagrees with the fitted polynomial."""


class ConsistencyError(EngineError):
    """Two independent computation routes disagree (internal bug trap)."""


class BudgetError(EngineError):
    """The configured budget is too small for the requested computation."""


_VAR_RE = re.compile(r"^([A-Za-z_]+?)(\d*)$")


def _var_key(name: str):
    # "u10" sorts after "u2"; bare names sort before numbered ones
    m = _VAR_RE.match(name)
    if m is None:
        return (name, -1)
    head, digits = m.groups()
    return (head, int(digits) if digits else -1)


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


class MultiPoly:
    """Sparse multivariate polynomial with exact rational coefficients.

    ``vars`` is the ordered registry of variable names, ``laurent`` the subset
    allowed negative exponents, and ``terms`` maps exponent tuples (one slot
    per registered variable) to nonzero Fractions.  Binary operations union
    the registries of their operands automatically.  Equality and hashing are
    semantic: registries that differ only by unused variables compare equal.
    """

    __slots__ = ("vars", "laurent", "terms", "_key")

    def __init__(self, vars: Iterable[str] = (), terms: Mapping | None = None,
                 laurent: Iterable[str] = ()):
        names = tuple(vars)
        if len(set(names)) != len(names):
            raise ValueError("duplicate variable names in registry")
        flags = frozenset(laurent)
        if not flags <= set(names):
            raise ValueError("Laurent flags refer to unregistered variables")
        clean = {}
        if terms:
            width = len(names)
            for exps, coeff in terms.items():
                exps = tuple(exps)
                if len(exps) != width:
                    raise ValueError(
                        f"exponent vector {exps} does not match registry of {width} variables")
                coeff = _as_fraction(coeff)
                if coeff == 0:
                    continue
                for name, e in zip(names, exps):
                    if e < 0 and name not in flags:
                        raise ValueError(
                            f"negative exponent on ordinary variable {name!r}")
                clean[exps] = coeff
        self.vars = names
        self.laurent = flags
        self.terms = clean
        self._key = None

    @classmethod
    def _raw(cls, names, flags, terms) -> "MultiPoly":
        # internal fast path: inputs already canonical (no zero coefficients)
        self = object.__new__(cls)
        self.vars = names
        self.laurent = flags
        self.terms = terms
        self._key = None
        return self

    # ---------------------------------------------------------------- basics

    @classmethod
    def zero(cls) -> "MultiPoly":
        return cls._raw((), frozenset(), {})

    @classmethod
    def constant(cls, value) -> "MultiPoly":
        value = _as_fraction(value)
        if value == 0:
            return cls.zero()
        return cls._raw((), frozenset(), {(): value})

    @classmethod
    def variable(cls, name: str, laurent: bool = False) -> "MultiPoly":
        flags = frozenset({name}) if laurent else frozenset()
        return cls._raw((name,), flags, {(1,): Fraction(1)})

    @classmethod
    def variables(cls, names: Iterable[str], laurent: Iterable[str] = ()):
        flags = frozenset(laurent)
        return [cls.variable(n, laurent=n in flags) for n in names]

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        if not self.is_constant():
            raise ValueError(f"not a constant polynomial: {self}")
        return next(iter(self.terms.values()))

    def used_vars(self) -> frozenset:
        return frozenset(
            name for i, name in enumerate(self.vars)
            if any(e[i] for e in self.terms))

    # ----------------------------------------------------------- arithmetic

    @classmethod
    def _coerce(cls, value):
        if isinstance(value, MultiPoly):
            return value
        if isinstance(value, (int, Fraction)):
            return cls.constant(value)
        return None

    def _aligned(self, other: "MultiPoly"):
        if self.vars == other.vars and self.laurent == other.laurent:
            return self.vars, self.laurent, self.terms, other.terms
        names = tuple(sorted(set(self.vars) | set(other.vars), key=_var_key))
        flags = self.laurent | other.laurent
        return names, flags, self._remap(names), other._remap(names)

    def _remap(self, names):
        if names == self.vars:
            return self.terms
        pos = {n: i for i, n in enumerate(names)}
        width = len(names)
        out = {}
        for exps, coeff in self.terms.items():
            vec = [0] * width
            for name, e in zip(self.vars, exps):
                vec[pos[name]] = e
            out[tuple(vec)] = coeff
        return out

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        names, flags, ta, tb = self._aligned(other)
        out = dict(ta)
        for exps, coeff in tb.items():
            acc = out.get(exps)
            if acc is None:
                out[exps] = coeff
            else:
                acc = acc + coeff
                if acc == 0:
                    del out[exps]
                else:
                    out[exps] = acc
        return MultiPoly._raw(names, flags, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(
            self.vars, self.laurent,
            {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = _as_fraction(other)
            if other == 0:
                return MultiPoly.zero()
            return MultiPoly._raw(
                self.vars, self.laurent,
                {e: c * other for e, c in self.terms.items()})
        if not isinstance(other, MultiPoly):
            return NotImplemented
        names, flags, ta, tb = self._aligned(other)
        out = {}
        for ea, ca in ta.items():
            for eb, cb in tb.items():
                key = tuple(x + y for x, y in zip(ea, eb))
                acc = out.get(key)
                out[key] = ca * cb if acc is None else acc + ca * cb
        return MultiPoly._raw(
            names, flags, {e: c for e, c in out.items() if c != 0})

    __rmul__ = __mul__

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError(
                "only nonnegative integer powers; use times_power for Laurent shifts")
        result = MultiPoly.constant(1)
        base = self
        e = exponent
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # ---------------------------------------------------------- structure

    def _index_of(self, var: str) -> int:
        try:
            return self.vars.index(var)
        except ValueError:
            raise ValueError(f"unknown variable {var!r}") from None

    def with_vars(self, names: Iterable[str], laurent: Iterable[str] = ()) -> "MultiPoly":
        """Extend the registry with ``names`` (at exponent zero everywhere)."""
        extra = MultiPoly(tuple(n for n in names), None,
                          frozenset(laurent) & set(names))
        merged, flags, terms, _ = self._aligned(extra)
        return MultiPoly._raw(merged, flags, terms)

    def degree_in(self, var: str) -> int:
        """Largest exponent of ``var``; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if var not in self.vars:
            return 0
        i = self.vars.index(var)
        return max(e[i] for e in self.terms)

    def coefficient_in(self, var: str, power: int) -> "MultiPoly":
        """Coefficient of ``var**power`` (a polynomial free of ``var``)."""
        i = self._index_of(var)
        out = {}
        for exps, coeff in self.terms.items():
            if exps[i] == power:
                out[exps[:i] + (0,) + exps[i + 1:]] = coeff
        return MultiPoly._raw(self.vars, self.laurent, out)

    def extract_by_degree(self, var: str):
        """Split into ``[(degree, coefficient), ...]`` by the power of ``var``.

        Degrees are listed in descending order; multiplying each coefficient
        by ``var**degree`` and summing reproduces the polynomial exactly.
        """
        i = self._index_of(var)
        buckets = {}
        for exps, coeff in self.terms.items():
            key = exps[i]
            bucket = buckets.setdefault(key, {})
            bucket[exps[:i] + (0,) + exps[i + 1:]] = coeff
        return [
            (deg, MultiPoly._raw(self.vars, self.laurent, terms))
            for deg, terms in sorted(buckets.items(), reverse=True)
        ]

    def coefficient_of_monomial(self, monomial: Mapping[str, int]) -> "MultiPoly":
        """Coefficient of an exact monomial in the listed variables.

        Unlisted variables remain free; the listed slots must match the given
        exponents exactly and are zeroed in the result.
        """
        idx = {self._index_of(name): e for name, e in monomial.items()}
        out = {}
        for exps, coeff in self.terms.items():
            if all(exps[i] == e for i, e in idx.items()):
                vec = list(exps)
                for i in idx:
                    vec[i] = 0
                out[tuple(vec)] = coeff
        return MultiPoly._raw(self.vars, self.laurent, out)

    def times_power(self, var: str, power: int, laurent: bool | None = None) -> "MultiPoly":
        """Multiply by ``var**power``; ``power`` may be negative.

        The variable is added to the registry if absent (flagged Laurent when
        ``laurent`` is true, or when the shift itself is negative).  Negative
        resulting exponents on a non-Laurent variable are rejected.
        """
        if power == 0 and var in self.vars:
            return self
        base = self
        if var not in base.vars:
            base = base.with_vars(
                [var], laurent=[var] if (laurent or power < 0) else [])
        i = base.vars.index(var)
        is_laurent = var in base.laurent
        out = {}
        for exps, coeff in base.terms.items():
            e = exps[i] + power
            if e < 0 and not is_laurent:
                raise ValueError(
                    f"negative exponent on ordinary variable {var!r}")
            out[exps[:i] + (e,) + exps[i + 1:]] = coeff
        return MultiPoly._raw(base.vars, base.laurent, out)

    def substitute(self, values: Mapping[str, object]) -> "MultiPoly":
        """Replace variables by rationals or polynomials; others are kept.

        Numeric values may be raised to negative (Laurent) exponents;
        polynomial values may not.
        """
        hit = [name for name in self.vars if name in values]
        if not hit:
            return self
        keep_idx = [i for i, n in enumerate(self.vars) if n not in values]
        kept = tuple(self.vars[i] for i in keep_idx)
        kept_flags = self.laurent & set(kept)
        result = MultiPoly._raw(kept, kept_flags, {})
        for exps, coeff in self.terms.items():
            scalar = coeff
            poly_factor = None
            for i, name in enumerate(self.vars):
                if name not in values:
                    continue
                e = exps[i]
                if e == 0:
                    continue
                v = values[name]
                if isinstance(v, MultiPoly):
                    if e < 0:
                        raise ValueError(
                            f"cannot raise polynomial value for {name!r} to negative power")
                    piece = v ** e
                    poly_factor = piece if poly_factor is None else poly_factor * piece
                else:
                    scalar = scalar * _as_fraction(v) ** e
            base = MultiPoly._raw(
                kept, kept_flags,
                {tuple(exps[i] for i in keep_idx): scalar} if scalar else {})
            result = result + (base if poly_factor is None else base * poly_factor)
        return result

    # -------------------------------------------------------- canonical form

    def _canonical(self):
        if self._key is None:
            used = [i for i in range(len(self.vars))
                    if any(e[i] for e in self.terms)]
            used.sort(key=lambda i: _var_key(self.vars[i]))
            names = tuple(self.vars[i] for i in used)
            terms = tuple(sorted(
                (tuple(e[i] for i in used), c) for e, c in self.terms.items()))
            self._key = (names, terms)
        return self._key

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            if not self.terms:
                return other == 0
            return self.is_constant() and self.constant_value() == other
        if isinstance(other, MultiPoly):
            return self._canonical() == other._canonical()
        return NotImplemented

    def __hash__(self):
        return hash(self._canonical())

    def canonical_str(self) -> str:
        """Deterministic text form (sorted term list), fit for ledgers/diffs."""
        names, terms = self._canonical()
        if not terms:
            return "0"
        parts = []
        for exps, coeff in terms:
            factors = []
            for name, e in zip(names, exps):
                if e == 0:
                    continue
                factors.append(name if e == 1 else f"{name}^{e}")
            mono = "*".join(factors)
            mag = -coeff if coeff < 0 else coeff
            body = f"{mag}*{mono}" if mono and mag != 1 else (mono or str(mag))
            if not parts:
                parts.append(f"-{body}" if coeff < 0 else body)
            else:
                parts.append(f"- {body}" if coeff < 0 else f"+ {body}")
        return " ".join(parts)

    def __repr__(self):
        return f"MultiPoly({self.canonical_str()})"


class Series:
    """Truncated power series in one expansion variable.

    ``coeffs[k]`` is the MultiPoly coefficient of ``var**k``; the truncation
    order is ``order`` and coefficients beyond it are *unknown*, not zero.
    Binary operations truncate to the smaller operand order.
    """

    __slots__ = ("var", "order", "coeffs")

    def __init__(self, var: str, order: int, coeffs: Sequence = ()):
        if order < 0:
            raise ValueError("truncation order must be nonnegative")
        lst = []
        for c in coeffs[:order + 1]:
            p = MultiPoly._coerce(c)
            if p is None:
                raise TypeError(f"bad series coefficient {c!r}")
            lst.append(p)
        while len(lst) < order + 1:
            lst.append(MultiPoly.zero())
        self.var = var
        self.order = order
        self.coeffs = tuple(lst)

    @classmethod
    def from_dict(cls, var: str, order: int, entries: Mapping[int, object]) -> "Series":
        coeffs = [MultiPoly.zero()] * (order + 1)
        for k, v in entries.items():
            if not 0 <= k <= order:
                raise ValueError(f"coefficient index {k} outside 0..{order}")
            coeffs[k] = v
        return cls(var, order, coeffs)

    def coefficient(self, k: int) -> MultiPoly:
        if k < 0:
            raise ValueError("negative coefficient index")
        if k > self.order:
            raise PrecisionError(
                f"coefficient {k} requested beyond truncation order {self.order}")
        return self.coeffs[k]

    def truncated(self, order: int) -> "Series":
        if order > self.order:
            raise PrecisionError(
                f"cannot extend truncation order {self.order} to {order}")
        return Series(self.var, order, self.coeffs[:order + 1])

    def _check_var(self, other: "Series"):
        if self.var != other.var:
            raise ValueError(
                f"mixed expansion variables {self.var!r} and {other.var!r}")

    def __add__(self, other):
        if isinstance(other, Series):
            self._check_var(other)
            order = min(self.order, other.order)
            return Series(self.var, order,
                          [a + b for a, b in zip(self.coeffs, other.coeffs)])
        p = MultiPoly._coerce(other)
        if p is None:
            return NotImplemented
        coeffs = (self.coeffs[0] + p,) + self.coeffs[1:]
        return Series(self.var, self.order, coeffs)

    __radd__ = __add__

    def __neg__(self):
        return Series(self.var, self.order, [-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, Series):
            self._check_var(other)
            order = min(self.order, other.order)
            return Series(self.var, order,
                          [a - b for a, b in zip(self.coeffs, other.coeffs)])
        p = MultiPoly._coerce(other)
        if p is None:
            return NotImplemented
        return self + (-p)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Series):
            self._check_var(other)
            order = min(self.order, other.order)
            out = [MultiPoly.zero() for _ in range(order + 1)]
            for i, a in enumerate(self.coeffs[:order + 1]):
                if a.is_zero():
                    continue
                for k in range(i, order + 1):
                    b = other.coeffs[k - i]
                    if not b.is_zero():
                        out[k] = out[k] + a * b
            return Series(self.var, order, out)
        p = MultiPoly._coerce(other)
        if p is None:
            return NotImplemented
        return Series(self.var, self.order, [c * p for c in self.coeffs])

    __rmul__ = __mul__

    def exp(self) -> "Series":
        """Exponential of a series with zero constant term.

        Computed by the exact convolution recurrence
        ``k*f_k = sum_{i=1..k} i * s_i * f_{k-i}`` with ``f_0 = 1``.
        """
        if not self.coeffs[0].is_zero():
            raise ValueError("series exponential requires a zero constant term")
        f = [MultiPoly.constant(1)]
        for k in range(1, self.order + 1):
            acc = MultiPoly.zero()
            for i in range(1, k + 1):
                s_i = self.coeffs[i]
                if s_i.is_zero():
                    continue
                acc = acc + (s_i * f[k - i]) * Fraction(i, k)
            f.append(acc)
        return Series(self.var, self.order, f)

    def log(self) -> "Series":
        """Logarithm of a series with constant term one.

        Uses ``g_k = s_k - (1/k) sum_{i=1..k-1} i * g_i * s_{k-i}``.
        """
        if self.coeffs[0] != 1:
            raise ValueError("series logarithm requires constant term equal to 1")
        g = [MultiPoly.zero()]
        for k in range(1, self.order + 1):
            acc = self.coeffs[k]
            for i in range(1, k):
                g_i = g[i]
                if g_i.is_zero():
                    continue
                s = self.coeffs[k - i]
                if s.is_zero():
                    continue
                acc = acc - (g_i * s) * Fraction(i, k)
            g.append(acc)
        return Series(self.var, self.order, g)

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        return (self.var == other.var and self.order == other.order
                and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.var, self.order, self.coeffs))

    def __repr__(self):
        inner = ", ".join(f"{self.var}^{k}: {c.canonical_str()}"
                          for k, c in enumerate(self.coeffs))
        return f"Series[{self.var}; T={self.order}]({inner})"


def _dense_from_nodes(nodes: Sequence[int], skip: int) -> list:
    # coefficients of prod_{m != skip} (X - nodes[m]), low degree first
    coeffs = [Fraction(1)]
    for m, x in enumerate(nodes):
        if m == skip:
            continue
        nxt = [Fraction(0)] * (len(coeffs) + 1)
        for d, c in enumerate(coeffs):
            nxt[d + 1] += c
            nxt[d] -= c * x
        coeffs = nxt
    return coeffs


def interpolate_in_var(samples: Sequence, var: str, degree_bound: int) -> MultiPoly:
    """Exact Lagrange interpolation through polynomial-valued samples.

    ``samples`` is a sequence of ``(integer point, MultiPoly value)`` pairs;
    the first ``degree_bound + 1`` define the unique polynomial in ``var`` of
    degree at most ``degree_bound`` through them.  Every remaining sample is
    then checked against the fit; a disagreement raises
    :class:`PolynomialityError` (never silently dropped).
    """
    if degree_bound < 0:
        raise ValueError("degree bound must be nonnegative")
    if len(samples) < degree_bound + 1:
        raise ValueError(
            f"need at least {degree_bound + 1} samples, got {len(samples)}")
    points = [int(x) for x, _ in samples]
    if len(set(points)) != len(points):
        raise ValueError("sample points must be distinct")
    values = []
    for (_, v) in samples:
        p = MultiPoly._coerce(v)
        if p is None:
            raise TypeError(f"sample value {v!r} is not a polynomial")
        if var in p.used_vars():
            raise ValueError(f"sample values must not involve {var!r}")
        values.append(p)

    nodes = points[:degree_bound + 1]
    result = MultiPoly.zero()
    for i, x_i in enumerate(nodes):
        numer = _dense_from_nodes(nodes, i)
        denom = Fraction(1)
        for m, x_m in enumerate(nodes):
            if m != i:
                denom *= x_i - x_m
        basis = MultiPoly(
            (var,), {(d,): c / denom for d, c in enumerate(numer) if c})
        result = result + values[i] * basis

    for x, value in zip(points[degree_bound + 1:], values[degree_bound + 1:]):
        if result.substitute({var: Fraction(x)}) != value:
            raise PolynomialityError(
                f"surplus sample at {var}={x} deviates from the degree-"
                f"{degree_bound} interpolant")
    return result
