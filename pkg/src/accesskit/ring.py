"""Exact sparse multivariate polynomials and rational functions.

The variable set is partitioned into parameters, states and time-indexed
inputs.  Polynomials store a map from exponent tuple to Fraction; rational
functions keep a fully reduced numerator/denominator pair with a canonical
scaling, so two arithmetic routes to the same value produce identical
representations.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from . import _kernels as K
from .errors import (
    ExactDivisionError,
    IndeterminateError,
    PoleError,
    UnregisteredVariableError,
    ZeroPolynomialError,
)

PARAM = "parameter"
STATE = "state"
INPUT = "input"

_INPUT_NAME = re.compile(r"^(.*)\((\d+)\)$")


def grevlex_key(exp):
    """Sort key: larger key = larger monomial in graded reverse lex."""
    return (sum(exp), tuple(-e for e in reversed(exp)))


class VariableRegistry:
    """Ordered variable set: parameters, states, then inputs by time block.

    Input symbols exist for times ``0 .. horizon-1``; extending the horizon
    appends symbols, so exponent tuples of a smaller registry lift by zero
    padding.
    """

    __slots__ = ("params", "states", "inputs", "horizon", "_index")

    def __init__(self, states, inputs=(), params=(), horizon=1):
        self.params = tuple(params)
        self.states = tuple(states)
        self.inputs = tuple(inputs)
        self.horizon = int(horizon)
        if self.horizon < 0:
            raise ValueError("horizon must be >= 0")
        names = list(self.params) + list(self.states)
        for t in range(self.horizon):
            for u in self.inputs:
                names.append(u if t == 0 else f"{u}({t})")
        if len(set(names)) != len(names):
            raise ValueError("variable names must be unique")
        if not self.states:
            raise ValueError("at least one state variable is required")
        self._index = {n: i for i, n in enumerate(names)}
        for u in self.inputs:
            if self.horizon > 0:
                self._index.setdefault(f"{u}(0)", self._index[u])

    @property
    def arity(self):
        return len(self.params) + len(self.states) + len(self.inputs) * self.horizon

    @property
    def key(self):
        return (self.params, self.states, self.inputs, self.horizon)

    def name(self, i):
        p, n, m = len(self.params), len(self.states), len(self.inputs)
        if i < p:
            return self.params[i]
        if i < p + n:
            return self.states[i - p]
        j = i - p - n
        t, r = divmod(j, m)
        base = self.inputs[r]
        return base if t == 0 else f"{base}({t})"

    def names(self):
        return [self.name(i) for i in range(self.arity)]

    def index(self, name):
        try:
            return self._index[name]
        except KeyError:
            raise UnregisteredVariableError(f"unknown variable {name!r}") from None

    def kind(self, i):
        p, n = len(self.params), len(self.states)
        if i < p:
            return PARAM
        if i < p + n:
            return STATE
        return INPUT

    def input_time(self, i):
        """Time index of an input position (None for non-inputs)."""
        p, n, m = len(self.params), len(self.states), len(self.inputs)
        if i < p + n:
            return None
        return (i - p - n) // m

    def class_indices(self, kind):
        return [i for i in range(self.arity) if self.kind(i) == kind]

    @property
    def param_indices(self):
        return range(len(self.params))

    @property
    def state_indices(self):
        p = len(self.params)
        return range(p, p + len(self.states))

    def input_index(self, base, t):
        p, n, m = len(self.params), len(self.states), len(self.inputs)
        if t >= self.horizon:
            raise UnregisteredVariableError(f"input time {t} beyond horizon {self.horizon}")
        return p + n + t * m + self.inputs.index(base)

    def with_horizon(self, horizon):
        if horizon == self.horizon:
            return self
        return VariableRegistry(self.states, self.inputs, self.params, horizon)

    def compatible(self, other):
        return (self.params, self.states, self.inputs) == (
            other.params,
            other.states,
            other.inputs,
        )

    # -- constructors -----------------------------------------------------

    def zero(self):
        return Polynomial(self, {})

    def one(self):
        return self.const(1)

    def const(self, c):
        c = Fraction(c)
        if not c:
            return Polynomial(self, {})
        return Polynomial(self, {(0,) * self.arity: c})

    def var(self, name):
        i = self.index(name)
        e = [0] * self.arity
        e[i] = 1
        return Polynomial(self, {tuple(e): Fraction(1)})

    def monomial(self, exp, coeff=1):
        coeff = Fraction(coeff)
        if not coeff:
            return self.zero()
        return Polynomial(self, {tuple(exp): coeff})

    def __eq__(self, other):
        return isinstance(other, VariableRegistry) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"VariableRegistry(states={self.states}, inputs={self.inputs}, params={self.params}, horizon={self.horizon})"


def unify(a, b):
    """Lift two polynomials to a common registry (shared base, max horizon)."""
    if a.reg is b.reg or a.reg == b.reg:
        return a, b
    if not a.reg.compatible(b.reg):
        raise UnregisteredVariableError("polynomials over incompatible registries")
    reg = a.reg if a.reg.horizon >= b.reg.horizon else b.reg
    return a.lift(reg), b.lift(reg)


class Polynomial:
    """Immutable sparse polynomial with exact rational coefficients."""

    __slots__ = ("reg", "terms", "_hash")

    def __init__(self, reg, terms, _clean=False):
        self.reg = reg
        if _clean:
            self.terms = terms
        else:
            self.terms = {
                tuple(e): Fraction(c) for e, c in terms.items() if c
            }
        self._hash = None

    # -- basic queries ----------------------------------------------------

    @property
    def is_zero(self):
        return not self.terms

    @property
    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_value(self):
        if self.is_zero:
            return Fraction(0)
        if not self.is_constant:
            raise ValueError("not a constant polynomial")
        return next(iter(self.terms.values()))

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=0)

    def degree_in(self, i):
        return max((e[i] for e in self.terms), default=0)

    def variables_used(self):
        used = set()
        for e in self.terms:
            for i, p in enumerate(e):
                if p:
                    used.add(i)
        return used

    def sorted_terms(self):
        """Terms in descending graded-reverse-lex order (canonical)."""
        return sorted(self.terms.items(), key=lambda t: grevlex_key(t[0]), reverse=True)

    def leading(self):
        if self.is_zero:
            raise ZeroPolynomialError("zero polynomial has no leading term")
        e = max(self.terms, key=grevlex_key)
        return e, self.terms[e]

    def lift(self, reg):
        if reg is self.reg:
            return self
        pad = reg.arity - self.reg.arity
        if pad < 0 or not reg.compatible(self.reg):
            raise UnregisteredVariableError("cannot lift to a smaller/incompatible registry")
        if pad == 0:
            return Polynomial(reg, self.terms, _clean=True)
        z = (0,) * pad
        return Polynomial(reg, {e + z: c for e, c in self.terms.items()}, _clean=True)

    # -- arithmetic -------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return self.reg.const(other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        a, b = unify(self, other)
        return Polynomial(a.reg, K.add_terms(a.terms, b.terms), _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial(self.reg, K.scale_terms(self.terms, Fraction(-1)), _clean=True)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Polynomial(self.reg, K.scale_terms(self.terms, Fraction(other)), _clean=True)
        if not isinstance(other, Polynomial):
            return NotImplemented
        a, b = unify(self, other)
        return Polynomial(a.reg, K.mul_terms(a.terms, b.terms), _clean=True)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be nonnegative integers")
        result = self.reg.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.reg.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        try:
            a, b = unify(self, other)
        except UnregisteredVariableError:
            return False
        return a.terms == b.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.reg.key, frozenset(self.terms.items())))
        return self._hash

    # -- calculus ---------------------------------------------------------

    def diff(self, name):
        i = self.reg.index(name)
        out = {}
        for e, c in self.terms.items():
            p = e[i]
            if p:
                ne = list(e)
                ne[i] = p - 1
                ne = tuple(ne)
                out[ne] = out.get(ne, Fraction(0)) + c * p
        return Polynomial(self.reg, out)

    def evaluate(self, point):
        """Evaluate at a map name -> Fraction; every used variable required."""
        values = [None] * self.reg.arity
        for name, v in point.items():
            values[self.reg.index(name)] = Fraction(v)
        for i in self.variables_used():
            if values[i] is None:
                raise UnregisteredVariableError(
                    f"no value supplied for {self.reg.name(i)!r}"
                )
        vals = tuple(v if v is not None else Fraction(0) for v in values)
        return K.eval_terms(self.terms, vals)

    def substitute(self, bindings):
        """Substitute variables by rational functions; returns RationalFunction."""
        return RationalFunction(self, self.reg.one()).substitute(bindings)

    # -- normalization helpers -------------------------------------------

    def content(self):
        """Positive rational content (0 for the zero polynomial)."""
        if self.is_zero:
            return Fraction(0)
        num = 0
        den = 1
        for c in self.terms.values():
            num = math.gcd(num, c.numerator)
            den = den * c.denominator // math.gcd(den, c.denominator)
        return Fraction(num, den)

    def signed_content(self):
        """Content carrying the sign of the leading (grevlex) coefficient."""
        if self.is_zero:
            return Fraction(0)
        c = self.content()
        _, lc = self.leading()
        return c if lc > 0 else -c

    def primitive(self):
        """(primitive part with positive leading coefficient, signed content)."""
        if self.is_zero:
            return self, Fraction(0)
        c = self.signed_content()
        return self * (1 / c), c

    def coeff_of(self, exp):
        return self.terms.get(tuple(exp), Fraction(0))

    # -- display ----------------------------------------------------------

    def _fmt_monomial(self, e):
        parts = []
        for i, p in enumerate(e):
            if p == 1:
                parts.append(self.reg.name(i))
            elif p:
                parts.append(f"{self.reg.name(i)}^{p}")
        return "*".join(parts)

    def __str__(self):
        if self.is_zero:
            return "0"
        chunks = []
        for e, c in self.sorted_terms():
            mono = self._fmt_monomial(e)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            chunks.append((sign, body))
        first_sign, first_body = chunks[0]
        out = ("-" if first_sign == "-" else "") + first_body
        for sign, body in chunks[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"Polynomial({self})"


# -- polynomial gcd machinery --------------------------------------------


def _to_univar(p, i):
    """View p as univariate in variable i: dict degree -> Polynomial."""
    out = {}
    for e, c in p.terms.items():
        d = e[i]
        ne = list(e)
        ne[i] = 0
        ne = tuple(ne)
        out.setdefault(d, {})[ne] = c
    return {d: Polynomial(p.reg, t, _clean=True) for d, t in out.items()}


def _from_univar(reg, i, coeffs):
    total = reg.zero()
    for d, c in coeffs.items():
        if c.is_zero:
            continue
        shift = [0] * reg.arity
        shift[i] = d
        total = total + Polynomial(
            reg, K.addmul_terms({}, Fraction(1), tuple(shift), c.terms), _clean=True
        )
    return total


def _univar_content(coeffs):
    g = None
    for c in coeffs.values():
        g = c if g is None else poly_gcd(g, c)
        if g.is_constant and not g.is_zero:
            break
    return g


def _univar_div_coeffs(coeffs, d):
    return {k: divexact(c, d) for k, c in coeffs.items()}


def _pseudo_rem(f, g, reg, i):
    """Pseudo remainder of univariate views f mod g (coeffs are Polynomials)."""
    df = max(f)
    dg = max(g)
    lg = g[dg]
    r = dict(f)
    while r:
        dr = max(r)
        if dr < dg:
            break
        lr = r[dr]
        new = {}
        for k, c in r.items():
            if k == dr:
                continue
            new[k] = c * lg
        for k, c in g.items():
            if k == dg:
                continue
            t = k + dr - dg
            sub = c * lr
            new[t] = new.get(t, reg.zero()) - sub
        r = {k: c for k, c in new.items() if not c.is_zero}
    return r


def _heu_eval(terms, i, xi):
    """Evaluate an integer term dict at variable i = xi."""
    out = {}
    for e, c in terms.items():
        d = e[i]
        if d:
            ne = list(e)
            ne[i] = 0
            ne = tuple(ne)
            c = c * xi**d
        else:
            ne = e
        out[ne] = out.get(ne, 0) + c
    return {e: c for e, c in out.items() if c}


def _heu_genpoly(terms, i, xi):
    """Reconstruct variable i from a xi-adic image (balanced digits)."""
    out = {}
    cur = dict(terms)
    half = xi // 2
    d = 0
    while cur:
        if d > 4000:
            return None
        nxt = {}
        for e, c in cur.items():
            m = c % xi
            if m > half:
                m -= xi
            if m:
                ne = list(e)
                ne[i] = d
                out[tuple(ne)] = m
            c = (c - m) // xi
            if c:
                nxt[e] = c
        cur = nxt
        d += 1
    return out


def _divides_int(cand, terms):
    """Integer-exact polynomial division test of terms by cand."""
    ed = max(cand, key=grevlex_key)
    cd = cand[ed]
    r = dict(terms)
    steps = 0
    while r:
        steps += 1
        if steps > 20000:
            return False
        e = max(r, key=grevlex_key)
        c = r[e]
        if any(a < b for a, b in zip(e, ed)) or c % cd:
            return False
        q = c // cd
        s = tuple(a - b for a, b in zip(e, ed))
        for ce, cc in cand.items():
            t = tuple(a + b for a, b in zip(s, ce))
            v = r.get(t, 0) - q * cc
            if v:
                r[t] = v
            else:
                r.pop(t, None)
    return True


def _heu_gcd(reg, fterms, gterms):
    """Heuristic gcd of integer term dicts; None when inconclusive.

    Intermediate results keep their integer content: after evaluation the
    content carries the gcd's dependence on the outer variables, so only
    the caller may take a primitive part.
    """
    vars_ = set()
    for terms in (fterms, gterms):
        for e in terms:
            vars_.update(i for i, x in enumerate(e) if x)
    if not vars_:
        return {(0,) * reg.arity: math.gcd(*(abs(c) for c in fterms.values()),
                                           *(abs(c) for c in gterms.values()))}
    i = max(vars_)
    deg = max(max(e[i] for e in fterms), max(e[i] for e in gterms), 1)
    norm = min(max(abs(c) for c in fterms.values()),
               max(abs(c) for c in gterms.values()))
    xi = 2 * norm + 29
    for _ in range(6):
        if xi.bit_length() * deg > 200000:
            return None
        f1 = _heu_eval(fterms, i, xi)
        g1 = _heu_eval(gterms, i, xi)
        if f1 and g1:
            h1 = _heu_gcd(reg, f1, g1)
            if h1 is not None:
                cand = _heu_genpoly(h1, i, xi)
                if cand and _divides_int(cand, fterms) and _divides_int(
                    cand, gterms
                ):
                    return cand
        xi = xi * 73794 // 27011
    return None


_GCD_CACHE = {}


def poly_gcd(f, g):
    """Full multivariate gcd (primitive, positive leading coefficient)."""
    f, g = unify(f, g)
    reg = f.reg
    if f.is_zero:
        return g.primitive()[0] if not g.is_zero else reg.zero()
    if g.is_zero:
        return f.primitive()[0]
    if f.is_constant or g.is_constant:
        return reg.one()
    key = (f, g) if len(f.terms) <= len(g.terms) else (g, f)
    hit = _GCD_CACHE.get(key)
    if hit is not None:
        return hit
    out = _monomial_and_heu_gcd(f, g)
    if out is None:
        out = _prs_gcd(f, g)
    if len(_GCD_CACHE) > 4096:
        _GCD_CACHE.clear()
    _GCD_CACHE[key] = out
    return out


def _strip_monomial(p):
    mins = None
    for e in p.terms:
        mins = e if mins is None else tuple(min(a, b) for a, b in zip(mins, e))
        if not any(mins):
            return None, p
    stripped = Polynomial(
        p.reg,
        {tuple(a - b for a, b in zip(e, mins)): c for e, c in p.terms.items()},
        _clean=True,
    )
    return mins, stripped


def _monomial_and_heu_gcd(f, g):
    reg = f.reg
    fm, f = _strip_monomial(f)
    gm, g = _strip_monomial(g)
    common = None
    if fm and gm:
        common = tuple(min(a, b) for a, b in zip(fm, gm))
    mono = reg.monomial(common) if common and any(common) else None
    if f.is_constant or g.is_constant:
        core = reg.one()
    else:
        fi = _int_scale(f)
        gi = _int_scale(g)
        cand = _heu_gcd(reg, fi, gi)
        if cand is None:
            return None
        core = Polynomial(
            reg, {e: Fraction(c) for e, c in cand.items()}, _clean=True
        ).primitive()[0]
    return core * mono if mono is not None else core


def _int_scale(p):
    """Term dict of p scaled to integer coefficients."""
    scale = 1
    for c in p.terms.values():
        scale = scale * c.denominator // math.gcd(scale, c.denominator)
    return {e: int(c * scale) for e, c in p.terms.items()}


def _prs_gcd(f, g):
    reg = f.reg
    vf = f.variables_used()
    vg = g.variables_used()
    i = max(vf | vg)
    if i not in vf:
        return poly_gcd(f, _univar_content(_to_univar(g, i)))
    if i not in vg:
        return poly_gcd(_univar_content(_to_univar(f, i)), g)
    fu = _to_univar(f, i)
    gu = _to_univar(g, i)
    cf = _univar_content(fu)
    cg = _univar_content(gu)
    c = poly_gcd(cf, cg)
    fp = _univar_div_coeffs(fu, cf)
    gp = _univar_div_coeffs(gu, cg)
    if max(fp) < max(gp):
        fp, gp = gp, fp
    while True:
        r = _pseudo_rem(fp, gp, reg, i)
        if not r:
            gpoly = _from_univar(reg, i, gp)
            cont = _univar_content(gp)
            return (c * divexact(gpoly, cont)).primitive()[0]
        if max(r) == 0:
            return c.primitive()[0]
        cont = _univar_content(r)
        fp, gp = gp, _univar_div_coeffs(r, cont)


def divexact(p, d):
    """Exact polynomial division; raises ExactDivisionError on failure."""
    p, d = unify(p, d)
    if d.is_zero:
        raise ZeroPolynomialError("division by the zero polynomial")
    if p.is_zero:
        return p
    if d.is_constant:
        return p * (1 / d.constant_value())
    ed, cd = d.leading()
    r = dict(p.terms)
    q = {}
    while r:
        e = max(r, key=grevlex_key)
        c = r[e]
        if any(x < y for x, y in zip(e, ed)):
            raise ExactDivisionError("inexact polynomial division")
        s = tuple(x - y for x, y in zip(e, ed))
        cc = c / cd
        q[s] = cc
        K.addmul_terms(r, -cc, s, d.terms)
    return Polynomial(p.reg, q)


def square_free_part(p):
    """Product of the distinct irreducible factors of p (positive leading)."""
    if not isinstance(p, Polynomial):
        raise TypeError("square_free_part expects a Polynomial")
    if p.is_zero:
        raise ZeroPolynomialError("square-free part of the zero polynomial")
    pp, _ = p.primitive()
    if pp.is_constant:
        return pp.reg.one()
    h = pp
    for i in sorted(pp.variables_used()):
        h = poly_gcd(h, pp.diff(pp.reg.name(i)))
        if h.is_constant:
            return pp
    return divexact(pp, h).primitive()[0]


def collect_by_class(p, kind):
    """Group terms by the monomial in variables of the given class.

    Returns a map (monomial Polynomial in class variables) -> Polynomial in
    the remaining variables; the products summed over the map reconstruct p.
    """
    idx = set(p.reg.class_indices(kind))
    out = {}
    for e, c in p.terms.items():
        key = tuple(x if i in idx else 0 for i, x in enumerate(e))
        rest = tuple(0 if i in idx else x for i, x in enumerate(e))
        out.setdefault(key, {})[rest] = c
    return {
        p.reg.monomial(k): Polynomial(p.reg, t, _clean=True) for k, t in out.items()
    }


class RationalFunction:
    """Reduced fraction of polynomials with canonical normalization.

    The denominator is primitive with integer coefficients and positive
    leading coefficient; numerator and denominator share no factor.
    """

    __slots__ = ("num", "den", "_hash")

    def __init__(self, num, den=None):
        if den is None:
            den = num.reg.one()
        num, den = unify(num, den)
        if den.is_zero:
            raise ZeroPolynomialError("rational function with zero denominator")
        if num.is_zero:
            den = num.reg.one()
        else:
            g = poly_gcd(num, den)
            if not (g.is_constant and g.constant_value() == 1):
                num = divexact(num, g)
                den = divexact(den, g)
            c = den.signed_content()
            if c != 1:
                num = num * (1 / c)
                den = den * (1 / c)
        self.num = num
        self.den = den
        self._hash = None

    @classmethod
    def _reduced(cls, num, den):
        """Build from an already-coprime pair; only normalizes the sign
        and content of the denominator."""
        out = object.__new__(cls)
        if num.is_zero:
            den = num.reg.one()
        else:
            c = den.signed_content()
            if c != 1:
                num = num * (1 / c)
                den = den * (1 / c)
        out.num = num
        out.den = den
        out._hash = None
        return out

    # -- helpers ----------------------------------------------------------

    @property
    def reg(self):
        return self.num.reg

    @property
    def is_zero(self):
        return self.num.is_zero

    @property
    def is_polynomial(self):
        return self.den.is_constant

    @classmethod
    def _coerce(cls, other, reg):
        if isinstance(other, cls):
            return other
        if isinstance(other, Polynomial):
            return cls(other)
        if isinstance(other, (int, Fraction)):
            return cls(reg.const(other))
        return NotImplemented

    def lift(self, reg):
        out = object.__new__(RationalFunction)
        out.num = self.num.lift(reg)
        out.den = self.den.lift(reg)
        out._hash = None
        return out

    # -- arithmetic -------------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other, self.reg)
        if other is NotImplemented:
            return NotImplemented
        n1, d1 = self.num, self.den
        n2, d2 = other.num, other.den
        if d1 == d2:
            num = n1 + n2
            g = poly_gcd(num, d1)
            if g.is_constant:
                return RationalFunction._reduced(num, d1)
            return RationalFunction._reduced(divexact(num, g), divexact(d1, g))
        d = poly_gcd(d1, d2)
        if d.is_constant:
            return RationalFunction._reduced(n1 * d2 + n2 * d1, d1 * d2)
        q2 = divexact(d2, d)
        t = n1 * q2 + n2 * divexact(d1, d)
        g = poly_gcd(t, d)
        if g.is_constant:
            return RationalFunction._reduced(t, d1 * q2)
        return RationalFunction._reduced(
            divexact(t, g), divexact(d1, g) * q2
        )

    __radd__ = __add__

    def __neg__(self):
        out = object.__new__(RationalFunction)
        out.num = -self.num
        out.den = self.den
        out._hash = None
        return out

    def __sub__(self, other):
        other = self._coerce(other, self.reg)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other, self.reg)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return RationalFunction(self.reg.zero())
        n1, d1 = self.num, self.den
        n2, d2 = other.num, other.den
        g1 = poly_gcd(n1, d2)
        if not g1.is_constant:
            n1 = divexact(n1, g1)
            d2 = divexact(d2, g1)
        g2 = poly_gcd(n2, d1)
        if not g2.is_constant:
            n2 = divexact(n2, g2)
            d1 = divexact(d1, g2)
        return RationalFunction._reduced(n1 * n2, d1 * d2)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other, self.reg)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero:
            raise ZeroPolynomialError("division by zero rational function")
        return self * RationalFunction._reduced(other.den, other.num)

    def __rtruediv__(self, other):
        other = self._coerce(other, self.reg)
        if other is NotImplemented:
            return NotImplemented
        return other / self

    def __pow__(self, n):
        if not isinstance(n, int):
            raise ValueError("rational function powers must be integers")
        if n < 0:
            if self.is_zero:
                raise ZeroPolynomialError("zero rational function to a negative power")
            return RationalFunction(self.den ** (-n), self.num ** (-n))
        out = object.__new__(RationalFunction)
        out.num = self.num**n
        out.den = self.den**n
        out._hash = None
        return out

    def __eq__(self, other):
        other = self._coerce(other, self.reg)
        if other is NotImplemented:
            return NotImplemented
        a, b = unify(self.num, other.num)
        c, d = unify(self.den, other.den)
        return a == b and c == d

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.num, self.den))
        return self._hash

    # -- calculus ---------------------------------------------------------

    def diff(self, name):
        """Exact partial derivative (quotient rule, normalized)."""
        self.reg.index(name)
        if self.is_polynomial:
            return RationalFunction(self.num.diff(name), self.den)
        dn = self.num.diff(name)
        dd = self.den.diff(name)
        return RationalFunction(dn * self.den - self.num * dd, self.den * self.den)

    def substitute(self, bindings):
        """Exact composition; bindings map variable name -> value.

        Values may be RationalFunction, Polynomial, Fraction or int.
        Unbound variables are left in place.
        """
        reg = self.reg
        cooked = {}
        for name, v in bindings.items():
            i = reg.index(name)
            v = RationalFunction._coerce(v, reg)
            if v is NotImplemented:
                raise TypeError(f"cannot substitute {name!r} by {bindings[name]!r}")
            cooked[i] = v

        def subs_poly(p):
            regs = [v.reg for v in cooked.values() if v.reg.arity > reg.arity]
            target = max(regs, key=lambda r: r.arity, default=reg)
            total = RationalFunction(target.zero())
            cache = {}

            def power(i, n):
                key = (i, n)
                if key not in cache:
                    if i in cooked:
                        base = cooked[i]
                    else:
                        base = RationalFunction(reg.var(reg.name(i)))
                    cache[key] = base**n
                return cache[key]

            for e, c in p.sorted_terms():
                term = RationalFunction(target.const(c))
                for i, n in enumerate(e):
                    if n:
                        term = term * power(i, n)
                total = total + term
            return total

        new_num = subs_poly(self.num)
        if self.is_polynomial:
            return new_num
        new_den = subs_poly(self.den)
        if new_den.is_zero:
            from .errors import DegenerateDenominatorError

            raise DegenerateDenominatorError(
                "substitution produced an identically zero denominator",
                binding={reg.name(i): str(v) for i, v in cooked.items()},
            )
        return new_num / new_den

    def evaluate(self, point):
        """Exact value at a point; pole and 0/0 are distinct errors."""
        dv = self.den.evaluate(point)
        if dv == 0:
            nv = self.num.evaluate(point)
            if nv == 0:
                raise IndeterminateError(
                    "indeterminate 0/0: numerator and denominator both vanish"
                )
            raise PoleError("pole: denominator vanishes at the evaluation point")
        return self.num.evaluate(point) / dv

    def __str__(self):
        if self.is_polynomial:
            if self.den.constant_value() == 1:
                return str(self.num)
            return f"({self.num})/{self.den.constant_value()}"
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RationalFunction({self})"
