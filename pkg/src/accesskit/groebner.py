"""Ideal arithmetic in the state-variable ring.

Generators are polynomials in the state variables whose coefficients may be
polynomials in the parameters.  All Groebner computations treat parameters
as generic nonzero constants: reductions are fraction-free (pseudo) and the
parameter content of every polynomial is cleared and recorded, so the
resulting bases are bases over the rational-function field in the
parameters.
"""

from __future__ import annotations

import os
import random
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from . import _kernels as K
from .errors import ResourceBudgetError, ZeroPolynomialError
from .realroots import RootBox, real_roots
from .ring import (
    Polynomial,
    RationalFunction,
    VariableRegistry,
    divexact,
    grevlex_key,
    poly_gcd,
    square_free_part,
)

CERT_EXACT = "exact"
CERT_HEURISTIC = "heuristic-radical"

_DEGREE_CAP_ENV = "ACCESSKIT_GB_DEGREE_CAP"
_STEP_CAP_ENV = "ACCESSKIT_GB_STEP_CAP"


def _degree_cap():
    return int(os.environ.get(_DEGREE_CAP_ENV, "64"))


def _step_cap():
    return int(os.environ.get(_STEP_CAP_ENV, "20000"))


@dataclass(frozen=True)
class MonomialOrder:
    """Term order on the state variables."""

    kind: str = "degrevlex"
    permutation: tuple = ()  # state names, most significant first; () = natural

    def __post_init__(self):
        if self.kind not in ("degrevlex", "lex"):
            raise ValueError(f"unknown order kind {self.kind!r}")

    def state_positions(self, reg):
        """Positions (registry indices) of states, most significant first."""
        perm = self.permutation or reg.states
        if sorted(perm) != sorted(reg.states):
            raise ValueError("order permutation must be a bijection on the states")
        return [reg.index(n) for n in perm]

    def key(self, proj):
        """Sort key on a projected state-exponent tuple; larger = bigger."""
        if self.kind == "degrevlex":
            return grevlex_key(proj)
        return tuple(proj)


DEFAULT_ORDER = MonomialOrder()


def _project(e, positions):
    return tuple(e[i] for i in positions)


def _shift_tuple(arity, positions, proj):
    out = [0] * arity
    for i, p in zip(positions, proj):
        out[i] = p
    return tuple(out)


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def to_state_ring(p):
    """Compress a state-ring polynomial into the horizon-0 registry.

    The input may live in any registry of the same system family as long as
    no input variable occurs; ideals store their generators in this compact
    form so bases from different shift horizons compare directly.
    """
    reg = p.reg
    base = VariableRegistry(reg.states, reg.inputs, reg.params, horizon=0)
    if reg.key == base.key:
        return p
    k = base.arity
    for i in p.variables_used():
        if i >= k:
            raise ValueError(
                f"polynomial involves input variable {reg.name(i)!r}; "
                "not a state-ring element"
            )
    return Polynomial(base, {e[:k]: c for e, c in p.terms.items()}, _clean=True)


def clear_param_content(p):
    """Remove the parameter-polynomial content of p.

    Returns (primitive polynomial, cleared content polynomial).  The content
    is the gcd of the coefficient polynomials of p viewed in the state ring,
    together with the rational content; its factors encode parameter
    degeneracy conditions (e.g. a sampling step of zero).
    """
    reg = p.reg
    if p.is_zero:
        return p, reg.zero()
    spos = list(reg.state_indices)
    sset = set(spos)
    groups = {}
    for e, c in p.terms.items():
        s = _project(e, spos)
        rest = tuple(0 if i in sset else x for i, x in enumerate(e))
        groups.setdefault(s, {})[rest] = c
    cont = None
    for t in groups.values():
        cp = Polynomial(reg, t, _clean=True)
        cont = cp if cont is None else poly_gcd(cont, cp)
        if cont.is_constant:
            break
    if cont.is_constant:
        prim, c = p.primitive()
        return prim, reg.const(c)
    cont = cont.primitive()[0]
    prim, c = divexact(p, cont).primitive()
    return prim, cont * c


class _GBPoly:
    """Basis element with cached order data."""

    __slots__ = ("poly", "lead", "lead_coeff", "sugar")

    def __init__(self, poly, order, positions, sugar=None):
        self.poly = poly
        self.sugar = sugar if sugar is not None else poly.total_degree()
        self.lead, self.lead_coeff = _leading_data(poly, order, positions)


def _make_gbpoly(poly, order, positions, sugar=None):
    return _GBPoly(poly, order, positions, sugar)


def _leading_data(p, order, positions):
    lead = None
    for e in p.terms:
        s = _project(e, positions)
        if lead is None or order.key(s) > order.key(lead):
            lead = s
    coeff_terms = {}
    for e, c in p.terms.items():
        if _project(e, positions) == lead:
            rest = tuple(0 if i in positions else x for i, x in enumerate(e))
            coeff_terms[rest] = c
    return lead, Polynomial(p.reg, coeff_terms, _clean=True)


def normal_form(p, basis, order, positions, budget_steps=None, normalize=True):
    """Pseudo normal form of p modulo a list of _GBPoly.

    Membership in the ideal over the parameter-fraction field is preserved:
    the result is zero iff p reduces to zero.  With ``normalize=False`` the
    content-clearing step is skipped so that the result is congruent to p
    modulo the ideal; this requires every reduction step to have a constant
    leading coefficient (always true in the parameter-free case).
    """
    if p.is_zero:
        return p
    reg = p.reg
    steps = 0
    cap = budget_steps or _step_cap()
    tail = {}  # irreducible part
    work = p
    while not work.is_zero:
        steps += 1
        if steps > cap:
            raise ResourceBudgetError(
                "normal-form step budget exceeded", partial=[g.poly for g in basis]
            )
        lead, coeff = _leading_data(work, order, positions)
        red = None
        for g in basis:
            if _divides(g.lead, lead):
                red = g
                break
        if red is None:
            for e, c in work.terms.items():
                if _project(e, positions) == lead:
                    tail[e] = tail.get(e, Fraction(0)) + c
            drop = {
                e: c for e, c in work.terms.items() if _project(e, positions) != lead
            }
            work = Polynomial(reg, drop, _clean=True)
            continue
        shift = _shift_tuple(
            reg.arity, positions, tuple(a - b for a, b in zip(lead, red.lead))
        )
        shifted = Polynomial(
            reg, K.addmul_terms({}, Fraction(1), shift, red.poly.terms), _clean=True
        )
        lc = red.lead_coeff
        if lc.is_constant:
            work = work - (coeff * (1 / lc.constant_value())) * shifted
        else:
            if not normalize:
                raise ValueError(
                    "congruence-preserving normal form needs constant "
                    "leading coefficients"
                )
            work = lc * work - coeff * shifted
            if tail:
                tail = K.mul_terms(tail, lc.terms)
    out = Polynomial(reg, tail)
    if out.is_zero or not normalize:
        return out
    return clear_param_content(out)[0]


def _spoly(f, g, order, positions, reg):
    lcm = tuple(max(a, b) for a, b in zip(f.lead, g.lead))
    sf = _shift_tuple(reg.arity, positions, tuple(a - b for a, b in zip(lcm, f.lead)))
    sg = _shift_tuple(reg.arity, positions, tuple(a - b for a, b in zip(lcm, g.lead)))
    tf = Polynomial(reg, K.addmul_terms({}, Fraction(1), sf, f.poly.terms), _clean=True)
    tg = Polynomial(reg, K.addmul_terms({}, Fraction(1), sg, g.poly.terms), _clean=True)
    s = g.lead_coeff * tf - f.lead_coeff * tg
    return clear_param_content(s)[0] if not s.is_zero else s


def buchberger(generators, order=DEFAULT_ORDER, degree_cap=None, step_cap=None):
    """Reduced Groebner basis via Buchberger with sugar selection.

    Both classic pair criteria (coprime leading monomials; chain criterion)
    are applied.  Raises ResourceBudgetError carrying the partial basis when
    the degree or step budget is exceeded.
    """
    gens = [g for g in generators if not g.is_zero]
    if not gens:
        return []
    reg = gens[0].reg
    gens = [g.lift(reg) if g.reg != reg else g for g in gens]
    positions = order.state_positions(reg)
    degree_cap = degree_cap or _degree_cap()
    step_cap = step_cap or _step_cap()

    seeds = []
    seen = set()
    for g in gens:
        gp = clear_param_content(g)[0]
        if not gp.is_zero and gp not in seen:
            seen.add(gp)
            seeds.append(_make_gbpoly(gp, order, positions))
    seeds.sort(key=lambda g: (g.sugar, len(g.poly.terms), order.key(g.lead)))

    basis = []
    for g in seeds:
        r = g.poly
        if basis:
            r = normal_form(r, basis, order, positions, budget_steps=step_cap)
            if r.is_zero:
                continue
            r = clear_param_content(r)[0]
        basis.append(_make_gbpoly(r, order, positions))

    pairs = set()

    def lcm_of(i, j):
        return tuple(max(a, b) for a, b in zip(basis[i].lead, basis[j].lead))

    def add_pairs(j):
        for i in range(j):
            pairs.add((i, j))

    for j in range(len(basis)):
        add_pairs(j)

    steps = 0
    while pairs:
        steps += 1
        if steps > step_cap:
            raise ResourceBudgetError(
                "Groebner pair budget exceeded", partial=[g.poly for g in basis]
            )

        def pair_sugar(p):
            i, j = p
            lcm = lcm_of(i, j)
            si = basis[i].sugar + sum(lcm) - sum(basis[i].lead)
            sj = basis[j].sugar + sum(lcm) - sum(basis[j].lead)
            return (max(si, sj), order.key(lcm))

        i, j = min(pairs, key=pair_sugar)
        pairs.discard((i, j))
        lcm = lcm_of(i, j)
        # product criterion
        if all(a + b == c for a, b, c in zip(basis[i].lead, basis[j].lead, lcm)):
            continue
        # chain criterion
        skip = False
        for k in range(len(basis)):
            if k in (i, j):
                continue
            if (
                _divides(basis[k].lead, lcm)
                and (min(i, k), max(i, k)) not in pairs
                and (min(j, k), max(j, k)) not in pairs
            ):
                skip = True
                break
        if skip:
            continue
        s = _spoly(basis[i], basis[j], order, positions, reg)
        if s.is_zero:
            continue
        r = normal_form(s, basis, order, positions, budget_steps=step_cap)
        if r.is_zero:
            continue
        if r.total_degree() > degree_cap:
            raise ResourceBudgetError(
                f"Groebner degree budget {degree_cap} exceeded",
                partial=[g.poly for g in basis],
            )
        sugar = max(
            basis[i].sugar + sum(lcm) - sum(basis[i].lead),
            basis[j].sugar + sum(lcm) - sum(basis[j].lead),
        )
        basis.append(_make_gbpoly(r, order, positions, sugar))
        add_pairs(len(basis) - 1)

    return _interreduce(basis, order, positions, reg)


def _interreduce(basis, order, positions, reg):
    # drop elements whose leading monomial is divisible by another's
    keep = []
    for i, g in enumerate(basis):
        dominated = False
        for j, h in enumerate(basis):
            if i == j:
                continue
            if _divides(h.lead, g.lead) and (
                h.lead != g.lead or j < i
            ):
                dominated = True
                break
        if not dominated:
            keep.append(g)
    changed = True
    while changed:
        changed = False
        for i in range(len(keep)):
            others = keep[:i] + keep[i + 1 :]
            if not others:
                continue
            r = normal_form(keep[i].poly, others, order, positions)
            if r.is_zero:
                keep.pop(i)
                changed = True
                break
            if r != keep[i].poly:
                keep[i] = _make_gbpoly(clear_param_content(r)[0], order, positions)
                changed = True
                break
    out = [clear_param_content(g.poly)[0] for g in keep]
    out.sort(key=lambda p: order.key(_leading_data(p, order, positions)[0]))
    return out


class Ideal:
    """Finite generator set in the state ring with a cached reduced basis."""

    def __init__(self, reg, generators, certification=CERT_EXACT):
        self.reg = VariableRegistry(reg.states, reg.inputs, reg.params, horizon=0)
        gens = []
        for g in generators:
            if isinstance(g, RationalFunction):
                g = g.num
            g = to_state_ring(g)
            if not g.is_zero:
                gens.append(clear_param_content(g)[0])
        self.generators = tuple(dict.fromkeys(gens))
        self.certification = certification
        self._gb_cache = {}
        self._lock = threading.Lock()

    @property
    def is_zero_ideal(self):
        return not self.generators

    def groebner_basis(self, order=DEFAULT_ORDER):
        key = (order.kind, order.permutation)
        with self._lock:
            if key not in self._gb_cache:
                self._gb_cache[key] = buchberger(list(self.generators), order)
            return list(self._gb_cache[key])

    def contains(self, p, order=DEFAULT_ORDER):
        """Ideal membership over the parameter-fraction field."""
        if isinstance(p, RationalFunction):
            p = p.num
        p = to_state_ring(p)
        if p.reg.key != self.reg.key:
            raise ValueError("membership test across different state rings")
        if p.is_zero:
            return True
        gb = self.groebner_basis(order)
        if not gb:
            return False
        reg = self.reg
        positions = order.state_positions(reg)
        basis = [_make_gbpoly(g, order, positions) for g in gb]
        return normal_form(p, basis, order, positions).is_zero

    def reduce(self, p, order=DEFAULT_ORDER, normalize=True):
        """Normal form of a state-ring polynomial modulo the cached basis."""
        if isinstance(p, RationalFunction):
            p = p.num
        p = to_state_ring(p)
        if p.reg.key != self.reg.key:
            raise ValueError("reduction across different state rings")
        if p.is_zero:
            return p
        gb = self.groebner_basis(order)
        if not gb:
            return p
        reg = self.reg
        positions = order.state_positions(reg)
        basis = [_make_gbpoly(g, order, positions) for g in gb]
        return normal_form(p, basis, order, positions, normalize=normalize)

    def __le__(self, other):
        return all(other.contains(g) for g in self.generators)

    def equal(self, other, order=DEFAULT_ORDER):
        """True iff the two ideals coincide (mutual containment)."""
        return all(other.contains(g, order) for g in self.generators) and all(
            self.contains(g, order) for g in other.generators
        )

    def __add__(self, other):
        """Ideal sum: concatenated generators, inter-reduced."""
        if self.reg.key != other.reg.key:
            raise ValueError("ideal sum across different state rings")
        reg = self.reg
        gens = list(self.generators) + list(other.generators)
        cert = (
            CERT_EXACT
            if self.certification == CERT_EXACT and other.certification == CERT_EXACT
            else CERT_HEURISTIC
        )
        summed = Ideal(reg, gens, certification=cert)
        reduced = summed.groebner_basis()
        return Ideal(reg, reduced, certification=cert)

    def contains_one(self):
        gb = self.groebner_basis()
        return any(g.is_constant and not g.is_zero for g in gb)

    def is_zero_dimensional(self, order=DEFAULT_ORDER):
        """True iff the state variety is finite (over the complex numbers)."""
        if self.is_zero_ideal:
            return False
        gb = self.groebner_basis(order)
        if any(g.is_constant for g in gb):
            return True  # empty variety
        reg = gb[0].reg
        positions = order.state_positions(reg)
        leads = [_leading_data(g, order, positions)[0] for g in gb]
        for axis in range(len(positions)):
            if not any(
                l[axis] > 0 and all(x == 0 for k, x in enumerate(l) if k != axis)
                for l in leads
            ):
                return False
        return True

    def uses_parameters(self):
        gb = self.groebner_basis()
        for g in gb:
            for i in g.variables_used():
                if g.reg.kind(i) == "parameter":
                    return True
        return False

    def __str__(self):
        if self.is_zero_ideal:
            return "<0>"
        return "<" + ", ".join(str(g) for g in self.generators) + ">"

    def __repr__(self):
        return f"Ideal({self})"


# -- heuristic real-radical reduction -------------------------------------


def _sos_split(g):
    """If g is a sum of even monomials with positive coefficients, return the
    monomial radicals forced to vanish on the real zero set; else None."""
    reg = g.reg
    monos = []
    for e, c in g.terms.items():
        if c <= 0 or any(x % 2 for x in e):
            return None
        support = tuple(1 if x else 0 for x in e)
        if not any(support):
            return None  # positive constant term: no real zeros forced
        monos.append(support)
    return [reg.monomial(s) for s in dict.fromkeys(monos)]


def _is_monomial_set(gens):
    return all(len(g.terms) == 1 for g in gens)


def _radical_of_monomials(gens):
    out = []
    for g in gens:
        (e,) = g.terms
        out.append(g.reg.monomial(tuple(1 if x else 0 for x in e)))
    return out


def _sign_change_witness(q, rng, tries=400):
    """Look for rational points where q is positive and where it is negative."""
    reg = q.reg
    names = [reg.name(i) for i in q.variables_used()]
    seen_pos = seen_neg = False
    for _ in range(tries):
        point = {
            n: Fraction(rng.randint(-60, 60), rng.randint(1, 12)) for n in names
        }
        v = q.evaluate(point)
        seen_pos = seen_pos or v > 0
        seen_neg = seen_neg or v < 0
        if seen_pos and seen_neg:
            return True
    return False


def radical_heuristic(ideal, order=DEFAULT_ORDER, rng=None):
    """Best-effort real-radical reduction.

    Returns (Ideal, certified).  The output J always satisfies
    I <= J <= real-radical(I); `certified` reports whether the pipeline
    established J = real-radical(I).  Sound certification paths: trivial
    ideal, monomial ideals, linear bases, and zero-dimensional ideals with
    rational real points (vanishing ideal reconstruction).  The principal
    square-free case is certified on witness evidence (sign changes plus a
    finite singular locus) and is flagged `heuristic-radical`.
    """
    rng = rng or random.Random(0x5EED)
    reg = ideal.reg
    if ideal.is_zero_ideal:
        return ideal, True

    new_gens = []
    for g in ideal.groebner_basis(order):
        split = _sos_split(g)
        if split is not None:
            new_gens.extend(split)
            continue
        new_gens.append(square_free_part(g))

    J = Ideal(reg, new_gens, certification=CERT_HEURISTIC)
    gb = J.groebner_basis(order)

    # trivial ideal
    if J.contains_one():
        return Ideal(reg, [reg.one()], certification=CERT_EXACT), True
    # monomial ideal: radical is exact
    if _is_monomial_set(gb):
        R = Ideal(reg, _radical_of_monomials(gb), certification=CERT_EXACT)
        return R, True
    # linear basis: real radical equals the ideal itself
    if all(g.total_degree() <= 1 for g in gb):
        return Ideal(reg, gb, certification=CERT_EXACT), True
    # zero-dimensional: rebuild the vanishing ideal of the real points
    if not J.uses_parameters() and J.is_zero_dimensional(order):
        sol = solve_zero_dim(J, order)
        if sol.status == "points":
            if not sol.points:
                return Ideal(reg, [reg.one()], certification=CERT_EXACT), True
            V = vanishing_ideal(reg, sol.points)
            return V, True
    # principal square-free hypersurface: witness-based certification
    if len(gb) == 1 and not J.uses_parameters():
        q = gb[0]
        if square_free_part(q) == q.primitive()[0]:
            sing = Ideal(
                reg,
                [q] + [q.diff(reg.name(i)) for i in sorted(q.variables_used())],
                certification=CERT_HEURISTIC,
            )
            finite_sing = sing.contains_one() or sing.is_zero_dimensional(order)
            if finite_sing and _sign_change_witness(q, rng):
                return J, True
    return J, False


# -- zero-dimensional real solving ----------------------------------------


@dataclass
class SolveResult:
    """Outcome of solve_zero_dim.

    status: 'points' (exact rational points), 'not_zero_dimensional',
    'refused' (parameter-dependent), or 'irrational' (real roots exist but
    are not rational; boxes holds per-variable isolating intervals found
    before giving up).
    """

    status: str
    points: list = field(default_factory=list)
    boxes: list = field(default_factory=list)
    message: str = ""


def vanishing_ideal(reg, points):
    """Vanishing ideal of a finite set of rational state points."""
    state_names = list(reg.states)
    if not points:
        return Ideal(reg, [reg.one()], certification=CERT_EXACT)
    if len(points) > 6:
        raise ValueError("vanishing_ideal supports at most 6 points")
    per_point = [
        [reg.var(n) - reg.const(a) for n, a in zip(state_names, pt)] for pt in points
    ]
    gens = []

    def build(i, acc):
        if i == len(per_point):
            gens.append(acc)
            return
        for lin in per_point[i]:
            build(i + 1, acc * lin)

    build(0, reg.one())
    I = Ideal(reg, gens, certification=CERT_EXACT)
    return Ideal(reg, I.groebner_basis(), certification=CERT_EXACT)


def solve_zero_dim(ideal, order=DEFAULT_ORDER):
    """All real solutions of a zero-dimensional ideal, as exact points.

    Positive-dimensional input is a tagged outcome, not an error; ideals
    whose basis still involves parameters are refused.
    """
    reg = ideal.reg
    if ideal.is_zero_ideal:
        return SolveResult("not_zero_dimensional", message="zero ideal: whole space")
    if ideal.uses_parameters():
        return SolveResult(
            "refused",
            message="basis coefficients depend on symbolic parameters; "
            "bind parameters to rational values first",
        )
    if ideal.contains_one():
        return SolveResult("points", points=[])
    if not ideal.is_zero_dimensional(order):
        return SolveResult(
            "not_zero_dimensional", message="variety has positive dimension"
        )
    lex = MonomialOrder("lex", order.permutation or reg.states)
    gb = ideal.groebner_basis(lex)
    state_names = list(lex.permutation or reg.states)
    boxes = []

    def rec(gens, names, partial):
        """Solve triangular-by-elimination; returns list of dicts or None on irrational."""
        if not names:
            if any(not g.is_zero for g in gens):
                return []
            return [dict(partial)]
        gens = [g for g in gens if not g.is_zero]
        if any(g.is_constant for g in gens):
            return []
        last = names[-1]
        li = reg.index(last)
        univ = [
            g
            for g in gens
            if g.variables_used() <= {li}
        ]
        if not univ:
            # no pure polynomial in the least variable: fall back to solving
            # for any variable that appears alone
            return None
        coeffs_list = []
        for g in univ:
            d = g.degree_in(li)
            coeffs = [Fraction(0)] * (d + 1)
            for e, c in g.terms.items():
                coeffs[e[li]] += c
            coeffs_list.append(coeffs)
        roots = None
        for coeffs in coeffs_list:
            rts = real_roots(coeffs)
            keys = set()
            exact = []
            for r in rts:
                if isinstance(r, RootBox):
                    boxes.append((last, r))
                    exact.append(r)
                else:
                    exact.append(r)
            if roots is None:
                roots = exact
            else:
                roots = [
                    r
                    for r in roots
                    if any(_roots_match(r, s) for s in exact)
                ]
        out = []
        for r in roots:
            if isinstance(r, RootBox):
                return None
            sub = []
            for g in gens:
                if g in univ:
                    continue
                val = _substitute_var(g, li, r)
                sub.append(val)
            res = rec(sub, names[:-1], {**partial, last: r})
            if res is None:
                return None
            out.extend(res)
        return out

    sols = rec([g for g in gb], state_names, {})
    if sols is None:
        return SolveResult(
            "irrational",
            boxes=boxes,
            message="real roots are not all rational; isolating boxes reported",
        )
    points = []
    for s in sols:
        points.append(tuple(s[n] for n in reg.states))
    points = sorted(set(points))
    # exact verification: every point zeroes every generator
    for pt in points:
        binding = dict(zip(reg.states, pt))
        for g in ideal.generators:
            assert g.evaluate(binding) == 0
    return SolveResult("points", points=points)


def _roots_match(a, b):
    if isinstance(a, RootBox) or isinstance(b, RootBox):
        am = a.midpoint() if isinstance(a, RootBox) else a
        bm = b.midpoint() if isinstance(b, RootBox) else b
        return abs(am - bm) < Fraction(1, 2**40)
    return a == b


def _substitute_var(g, idx, value):
    out = {}
    for e, c in g.terms.items():
        ne = list(e)
        p = ne[idx]
        ne[idx] = 0
        ne = tuple(ne)
        out[ne] = out.get(ne, Fraction(0)) + c * value**p
    return Polynomial(g.reg, out)


def groebner_basis(ideal, order=DEFAULT_ORDER):
    """Module-level convenience wrapper."""
    return ideal.groebner_basis(order)


def ideal_equal(a, b, order=DEFAULT_ORDER):
    return a.equal(b, order)


def ideal_sum(a, b):
    return a + b
