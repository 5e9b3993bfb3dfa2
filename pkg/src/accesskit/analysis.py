"""Top-level accessibility decision procedures.

Two symbolic paths decide where a rational discrete-time system can reach:
the stabilized cumulative minor-coefficient ideal (kappa and the singular
set) and the real-radical chain (the accessibility index r*).  Both walk
the same ladder of accessibility matrices M_k.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from .groebner import (
    CERT_EXACT,
    CERT_HEURISTIC,
    Ideal,
    radical_heuristic,
    solve_zero_dim,
    to_state_ring,
)
from itertools import combinations

from .errors import (
    DegenerateDenominatorError,
    IndeterminateError,
    PoleError,
    ZeroPolynomialError,
)
from .ring import Polynomial, RationalFunction, collect_by_class
from .system import (
    bareiss_determinant,
    build_M,
    coefficient_ideal,
    jacobians,
    minors_and_coefficients,
    submersivity_check,
    symbolic_rank,
)


@dataclass
class ChainState:
    """Progress of an ideal chain: current horizon, current ideal, and the
    per-step history as (k, reduced basis, certification) triples."""

    k: int
    ideal: Ideal
    history: list = field(default_factory=list)

    def record(self, k, ideal):
        self.k = k
        self.ideal = ideal
        self.history.append(
            (k, tuple(ideal.groebner_basis()), ideal.certification)
        )


@dataclass
class SingularSet:
    """Description of the non-accessible states.

    kind: 'points' (explicit rational points), 'boxes' (real but irrational,
    isolating intervals), 'generators' (positive-dimensional or undecided,
    described by the ideal basis), 'empty', or 'entire'.
    """

    kind: str
    points: list = field(default_factory=list)
    boxes: list = field(default_factory=list)
    generators: list = field(default_factory=list)
    message: str = ""


@dataclass
class AnalysisReport:
    system_name: str
    mode: str  # 'forward' or 'backward'
    submersive: bool
    generically_accessible: bool
    kappa: int | None = None
    budget_exhausted: bool = False
    r_star: int | None = None
    r_star_certified: bool | None = None
    singular_set: SingularSet | None = None
    excluded_locus: list = field(default_factory=list)
    certification: str = CERT_EXACT
    chain: ChainState | None = None


@dataclass
class PointVerdict:
    point: tuple
    k: int
    in_S_k: bool
    undefined: bool


def default_max_k(sys):
    """No a-priori stabilization bound exists; 2n+4 covers every worked
    case with slack and stays cheap to exhaust."""
    return 2 * sys.n + 4


def _decomposition(sys, k):
    key = ("dec", k)
    if key not in sys._cache:
        sys._cache[key] = minors_and_coefficients(build_M(sys, k), sys)
    return sys._cache[key]


def _step_ideal(sys, k):
    key = ("I_M", k)
    if key not in sys._cache:
        sys._cache[key] = coefficient_ideal(_decomposition(sys, k), sys.reg)
    return sys._cache[key]


def _locus_upto(sys, k):
    out = []
    seen = set()
    for j in range(1, k + 1):
        for p in _decomposition(sys, j).excluded_locus:
            if p not in seen:
                seen.add(p)
                out.append(p)
    return out


def _fast_chain_ok(sys):
    """The reduced-modulo-the-chain engine is exact only when normal forms
    are plain reductions: polynomial transition map, no free parameters."""
    return not sys.params and all(f.is_polynomial for f in sys.phi)


def _mixed_reduce(p, ideal):
    """Normal form of a state/input polynomial modulo a state-ring ideal,
    taken input-monomial coefficient by coefficient."""
    if ideal is None or not ideal.generators or p.is_zero:
        return p
    reg = p.reg
    out = reg.zero()
    for mono, coeff in collect_by_class(p, "input").items():
        nf = ideal.reduce(coeff, normalize=False)
        if not nf.is_zero:
            out = out + mono * nf.lift(reg)
    return out


def _reduced_step_generators(sys, k, current):
    """Generators of the step-k minor-coefficient ideal, computed with all
    intermediate data reduced modulo the chain ideal so far.

    Replacing generators by their normal forms leaves the cumulative ideal
    sum unchanged, and polynomial maps preserve congruences, so reducing
    the shifted states and matrix entries at every stage is exact for the
    chain — while keeping expression growth flat.
    """
    n, m = sys.n, sys.m
    if k * m < n:
        return []
    target = sys.reg.with_horizon(max(k, 1))
    red = lambda p: _mixed_reduce(p, current)

    xs = [[target.var(s) for s in sys.reg.states]]
    for t in range(1, k):
        bindings = dict(zip(sys.reg.states, xs[t - 1]))
        for base in sys.reg.inputs:
            name = base if t == 1 else f"{base}({t - 1})"
            bindings[base] = target.var(name)
        xs.append([red(f.num.substitute(bindings).num) for f in sys.phi])

    A, B = jacobians(sys)

    def shifted(mat, t):
        bindings = dict(zip(sys.reg.states, xs[t]))
        for base in sys.reg.inputs:
            name = base if t == 0 else f"{base}({t})"
            bindings[base] = target.var(name)
        return [
            [red(e.num.substitute(bindings).num) for e in row] for row in mat
        ]

    M = shifted(B, 0)
    for t in range(1, k):
        A_s = shifted(A, t)
        B_s = shifted(B, t)
        M = [
            [
                red(sum((A_s[i][l] * M[l][j] for l in range(n)), target.zero()))
                for j in range(len(M[0]))
            ]
            + B_s[i]
            for i in range(n)
        ]

    gens = []
    for colset in combinations(range(k * m), n):
        sub = [[M[i][j] for j in colset] for i in range(n)]
        det = red(bareiss_determinant(sub))
        if det.is_zero:
            continue
        for coeff in collect_by_class(det, "input").values():
            nf = current.reduce(coeff) if current is not None else coeff
            if not nf.is_zero:
                gens.append(nf)
    return gens


def _next_step_generators(sys, k, current):
    if _fast_chain_ok(sys):
        return _reduced_step_generators(sys, k, current)
    return list(_step_ideal(sys, k).generators)


def generic_accessibility(sys):
    """Generic accessibility: the n-step accessibility matrix must reach
    full generic rank n."""
    M = build_M(sys, sys.n)
    return symbolic_rank(M.entries) == sys.n


def _singular_description(ideal):
    if ideal.contains_one():
        return SingularSet(kind="empty")
    sol = solve_zero_dim(ideal)
    if sol.status == "points":
        return SingularSet(kind="points", points=sol.points)
    gens = [str(g) for g in ideal.groebner_basis()]
    if sol.status == "irrational":
        return SingularSet(
            kind="boxes", boxes=sol.boxes, generators=gens, message=sol.message
        )
    return SingularSet(kind="generators", generators=gens, message=sol.message)


def _entire_report(sys, mode, submersive):
    return AnalysisReport(
        system_name=sys.name,
        mode=mode,
        submersive=submersive,
        generically_accessible=False,
        singular_set=SingularSet(
            kind="entire", message="not generically accessible"
        ),
        excluded_locus=_locus_upto(sys, sys.n),
    )


def algorithm2(sys, max_k=None, mode="forward"):
    """Stabilize the cumulative minor-coefficient ideal: the first horizon
    where adding the next step changes nothing gives kappa, and the zero set
    of the stabilized ideal is the set of never-accessible states."""
    max_k = max_k or default_max_k(sys)
    submersive = submersivity_check(sys)
    if not generic_accessibility(sys):
        return _entire_report(sys, mode, submersive)
    n = sys.n
    fast = _fast_chain_ok(sys)
    current = Ideal(sys.reg, _next_step_generators(sys, n, None))
    chain = ChainState(k=n, ideal=current)
    chain.record(n, current)
    report = AnalysisReport(
        system_name=sys.name,
        mode=mode,
        submersive=submersive,
        generically_accessible=True,
        chain=chain,
    )
    k = n
    while k < max_k:
        gens = _next_step_generators(sys, k + 1, current)
        new = [g for g in gens if not current.contains(g)]
        if not new:
            # the chain is ascending, so one-way containment decides equality
            report.kappa = k
            break
        current = current + Ideal(sys.reg, new)
        k += 1
        chain.record(k, current)
    else:
        report.budget_exhausted = True
    if not fast:
        report.excluded_locus = _locus_upto(sys, min(k + 1, max_k))
    if report.kappa is not None:
        report.singular_set = _singular_description(current)
    return report


def algorithm1(sys, max_k=None):
    """Real-radical chain: the first horizon where the radical of the
    per-step minor-coefficient ideal stops growing is the accessibility
    index r*.  Returns (r_star, final ideal, certified)."""
    max_k = max_k or default_max_k(sys)
    if not generic_accessibility(sys):
        return None, Ideal(sys.reg, []), True
    n = sys.n
    current, cert = radical_heuristic(_step_ideal(sys, n))
    certified = cert
    k = n
    while k < max_k:
        nxt, cert = radical_heuristic(_step_ideal(sys, k + 1))
        certified = certified and cert
        if nxt.equal(current):
            return k, current, certified
        current = nxt
        k += 1
    return None, current, certified


def cumulative_ideal(sys, k):
    """Sum of the minor-coefficient ideals up to horizon k."""
    total = None
    for j in range(1, k + 1):
        step = _step_ideal(sys, j)
        if not step.generators:
            continue
        total = step if total is None else total + step
    return total if total is not None else Ideal(sys.reg, [])


def _point_matrix(sys, x0, k):
    """The k-step accessibility matrix with the state bound to an exact
    rational point; entries depend on inputs (and parameters) only."""
    target = sys.reg.with_horizon(max(k, 1))
    consts = tuple(RationalFunction(target.const(v)) for v in x0)
    xs = [consts]
    for t in range(1, k):
        bindings = dict(zip(sys.reg.states, xs[t - 1]))
        for base in sys.reg.inputs:
            name = base if t == 1 else f"{base}({t - 1})"
            bindings[base] = RationalFunction(target.var(name))
        xs.append(tuple(f.substitute(bindings) for f in sys.phi))

    A, B = jacobians(sys)

    def shifted(mat, t):
        bindings = dict(zip(sys.reg.states, xs[t]))
        for base in sys.reg.inputs:
            name = base if t == 0 else f"{base}({t})"
            bindings[base] = RationalFunction(target.var(name))
        return [[e.substitute(bindings) for e in row] for row in mat]

    n = sys.n
    M = shifted(B, 0)
    for t in range(1, k):
        A_s = shifted(A, t)
        B_s = shifted(B, t)
        M = [
            [
                sum(
                    (A_s[i][l] * M[l][j] for l in range(n)),
                    RationalFunction(target.zero()),
                )
                for j in range(len(M[0]))
            ]
            + B_s[i]
            for i in range(n)
        ]
    return M


def _fraction_rank(rows, n):
    rank, col = 0, 0
    ncols = len(rows[0])
    while rank < n and col < ncols:
        piv = next((r for r in range(rank, n) if rows[r][col] != 0), None)
        if piv is None:
            col += 1
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(rank + 1, n):
            if rows[r][col]:
                f = rows[r][col] / rows[rank][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def _sampled_full_rank(sys, x0, k, trials=3):
    """Certify full rank of the point-pinned matrix by exact sampling.

    The whole recursion is evaluated over the rationals at random
    input/parameter values, so no symbolic expression in the inputs is
    ever built.  The rank at an exact sample bounds the generic rank from
    below: reaching n is a proof, a deficient sample proves nothing and
    the caller falls back to symbolic elimination."""
    rng = random.Random(0x5EED)
    n = sys.n
    A, B = jacobians(sys)
    for _ in range(trials):
        point = {
            p: Fraction(rng.randint(-19, 19), rng.randint(1, 7))
            for p in sys.reg.params
        }
        us = [
            {
                u: Fraction(rng.randint(-19, 19), rng.randint(1, 7))
                for u in sys.reg.inputs
            }
            for _ in range(k)
        ]
        try:
            x = list(x0)
            M = None
            for t in range(k):
                vals = dict(point)
                vals.update(zip(sys.reg.states, x))
                vals.update(us[t])
                A_t = [[e.evaluate(vals) for e in row] for row in A]
                B_t = [[e.evaluate(vals) for e in row] for row in B]
                if M is None:
                    M = B_t
                else:
                    M = [
                        [
                            sum(A_t[i][l] * M[l][j] for l in range(n))
                            for j in range(len(M[0]))
                        ]
                        + B_t[i]
                        for i in range(n)
                    ]
                x = [f.evaluate(vals) for f in sys.phi]
        except (PoleError, IndeterminateError):
            continue
        if _fraction_rank(M, n) == n:
            return True
    return False


def point_status(sys, x0, k):
    """Membership of an exact rational point in the k-step non-accessible
    set: does the accessibility matrix pinned to the point stay rank
    deficient for every input sequence?"""
    x0 = tuple(Fraction(v) for v in x0)
    if len(x0) != sys.n:
        raise ValueError("point dimension does not match the state count")
    try:
        if _sampled_full_rank(sys, x0, k):
            rank = sys.n
        else:
            rank = symbolic_rank(_point_matrix(sys, x0, k))
    except (DegenerateDenominatorError, PoleError, ZeroPolynomialError):
        return PointVerdict(point=x0, k=k, in_S_k=False, undefined=True)
    return PointVerdict(point=x0, k=k, in_S_k=rank < sys.n, undefined=False)


def invariance_check(ideal, sys):
    """Certify that the zero set of the ideal is forward invariant: every
    generator composed with the transition map must land back in the ideal,
    input-monomial coefficient by coefficient."""
    bindings = dict(zip(sys.reg.states, sys.phi))
    for g in ideal.generators:
        composed = RationalFunction(g).substitute(bindings)
        num = composed.num
        if num.is_zero:
            continue
        for coeff in collect_by_class(num, "input").values():
            if not ideal.contains(coeff):
                return False
    return True


def backward_analysis(inverse_sys, max_k=None):
    """Backward accessibility of the original system equals forward
    accessibility of the user-supplied time-inverse system."""
    return algorithm2(inverse_sys, max_k=max_k, mode="backward")
