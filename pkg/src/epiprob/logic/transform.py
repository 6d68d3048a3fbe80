"""Syntactic transformations: reach, translation to the time logic,
clock elimination, conditional normalisation and mixed-time formulas."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from ..errors import UnknownAgent
from ..markov import BOT, PODTMC, obs_prop, state_prop
from .ast import (TRUE, A, And, AgentProbAt, BoundedUntil, Compare, CurProb, ExistsT, ForallSet,
                  ForallT, GlobalProb, Implies, Know, KnowAt, Less, Not, Or, PriorProb, Prop, PropAt,
                  SetAt, Top, Until, X, conj, is_propositional)
from .poly import Poly

UNBOUNDED = float("inf")


# qualitative shapes -----------------------------------------------------------

def _simplify_not(phi):
    return phi.arg if isinstance(phi, Not) else Not(phi)


def path_shape(phi):
    """('F', p) for ``F p`` or ('G', p) for ``G p`` with p propositional, else None."""
    while isinstance(phi, Not) and isinstance(phi.arg, Not):
        phi = phi.arg.arg
    if isinstance(phi, Until) and phi.left == TRUE and is_propositional(phi.right):
        return ("F", phi.right)
    if isinstance(phi, Not) and isinstance(phi.arg, Until):
        inner = phi.arg
        if inner.left == TRUE and is_propositional(inner.right):
            return ("G", _simplify_not(inner.right))
    return None


def qualitative_shape(phi):
    """Recognise the unbounded forms decided by graph analysis.

    Returns ``(kind, agent, path_op, prop)`` where kind is 'A', 'K', 'Pr' or
    'Prior' (agent is None for 'A'), or None.  Probability shapes are a lone
    term compared against 0 or 1.
    """
    if isinstance(phi, A):
        shape = path_shape(phi.arg)
        return ("A", None) + shape if shape else None
    if isinstance(phi, Know):
        shape = path_shape(phi.arg)
        return ("K", phi.agent) + shape if shape else None
    if isinstance(phi, Compare) and len(phi.terms) == 1 and phi.poly == Poly.var(0) and phi.c in (0, 1):
        term = phi.terms[0]
        shape = path_shape(term.arg) if isinstance(term, (CurProb, PriorProb)) else None
        if shape:
            return ("Pr" if isinstance(term, CurProb) else "Prior", term.agent) + shape
    return None


def temporal_depth(phi) -> int | float:
    """How many steps past the current time the truth of `phi` can depend on.

    Qualitative shapes count as depth 0; any other unbounded until makes
    the result ``UNBOUNDED``.
    """
    if qualitative_shape(phi) is not None:
        return 0
    t = type(phi)
    if t in (Top, Prop):
        return 0
    if t in (Not, A, Know, CurProb, PriorProb):
        return temporal_depth(phi.arg)
    if t is And:
        return max(temporal_depth(phi.left), temporal_depth(phi.right))
    if t is X:
        return 1 + temporal_depth(phi.arg)
    if t is BoundedUntil:
        d1, d2 = temporal_depth(phi.left), temporal_depth(phi.right)
        if phi.bound == 0:
            return d2
        return max(phi.bound + d2, phi.bound - 1 + d1)
    if t is Until:
        return UNBOUNDED
    if t is Compare:
        return max((temporal_depth(term) for term in phi.terms), default=0)
    raise TypeError(f"not a branching-time formula: {phi!r}")


def find_unsupported_until(phi):
    """The first unbounded until not covered by a qualitative shape, or None."""
    if qualitative_shape(phi) is not None:
        return None
    if isinstance(phi, Until):
        return phi
    if isinstance(phi, Compare):
        kids = phi.terms
    elif isinstance(phi, (And, BoundedUntil)):
        kids = (phi.left, phi.right)
    elif hasattr(phi, "arg"):
        kids = (phi.arg,)
    else:
        kids = ()
    for k in kids:
        bad = find_unsupported_until(k)
        if bad is not None:
            return bad
    return None


# translation into the time logic ---------------------------------------------

class _Fresh:
    def __init__(self):
        self.count = itertools.count(1)

    def __call__(self, stem="u"):
        return f"{stem}{next(self.count)}"


def successor(t: str, u: str, fresh) -> object:
    """u = t + 1, i.e. t < u and every v > t has u <= v."""
    v = fresh("v")
    return And(Less(t, u), ForallT(v, Implies(Less(t, v), Not(Less(v, u)))))


def is_zero(u: str, fresh) -> object:
    """u = 0, i.e. u is nobody's successor."""
    w = fresh("w")
    return Not(ExistsT(w, successor(w, u, fresh)))


def at_zero(build, fresh) -> object:
    """exists z (z = 0 and build(z))."""
    z = fresh("z")
    return ExistsT(z, And(is_zero(z, fresh), build(z)))


def translate_prop2(phi, semantics: str, model: PODTMC | None = None, var: str = "t"):
    """Time-logic formula with `var` as its only free variable, equivalent to `phi`.

    Under the clock semantics the translation of ``A`` needs the state set,
    so `model` is required when `phi` contains ``A``.
    """
    if semantics not in ("clk", "spr"):
        raise ValueError(f"unknown semantics {semantics!r}")
    fresh = _Fresh()
    return _tr(phi, var, semantics, model, fresh)


def _tr(phi, t, sem, model, fresh):
    ty = type(phi)
    if ty is Top:
        return TRUE
    if ty is Prop:
        return PropAt(phi.name, t)
    if ty is Not:
        return Not(_tr(phi.arg, t, sem, model, fresh))
    if ty is And:
        return And(_tr(phi.left, t, sem, model, fresh), _tr(phi.right, t, sem, model, fresh))
    if ty is X:
        u = fresh()
        return ExistsT(u, And(successor(t, u, fresh), _tr(phi.arg, u, sem, model, fresh)))
    if ty is Know:
        return KnowAt(phi.agent, t, _tr(phi.arg, t, sem, model, fresh))
    if ty is Until:
        u, v = fresh(), fresh("v")
        between = And(Not(Less(v, t)), Less(v, u))
        return ExistsT(u, And(And(Not(Less(u, t)), _tr(phi.right, u, sem, model, fresh)),
                              ForallT(v, Implies(between, _tr(phi.left, v, sem, model, fresh)))))
    if ty is BoundedUntil:
        return _tr(_unroll(phi), t, sem, model, fresh)
    if ty is A:
        body = _tr(phi.arg, t, sem, model, fresh)
        if sem == "spr":
            return KnowAt("top", t, body)
        if model is None:
            raise ValueError("translating A under the clock semantics needs the model's states")
        parts = []
        for s in model.states:
            started = lambda: at_zero(lambda z: PropAt(state_prop(s), z), fresh)
            parts.append(Implies(started(), KnowAt("top", t, Implies(started(), body))))
        return conj(parts)
    if ty is Compare:
        has_prior = any(isinstance(term, PriorProb) for term in phi.terms)
        if not has_prior:
            terms = tuple(_tr_term(term, t, None, sem, model, fresh) for term in phi.terms)
            return Compare(phi.poly, phi.op, phi.c, terms)
        return at_zero(lambda z: Compare(phi.poly, phi.op, phi.c,
                                         tuple(_tr_term(term, t, z, sem, model, fresh) for term in phi.terms)),
                       fresh)
    raise TypeError(f"not a branching-time formula: {phi!r}")


def _tr_term(term, t, zero_var, sem, model, fresh):
    if isinstance(term, CurProb):
        return AgentProbAt(term.agent, t, _tr(term.arg, t, sem, model, fresh))
    return AgentProbAt(term.agent, zero_var, _tr(term.arg, zero_var, sem, model, fresh))


def _unroll(phi: BoundedUntil):
    """φ1 U<=k φ2 as φ2 or (φ1 and X(φ1 U<=k-1 φ2))."""
    if phi.bound == 0:
        return phi.right
    rest = BoundedUntil(phi.left, phi.right, phi.bound - 1)
    return Or(phi.right, And(phi.left, X(rest)))


# clock elimination ------------------------------------------------------------

def eliminate_clock(phi, model: PODTMC):
    """Remove agent knowledge and agent probabilities (clock semantics).

    ``K[i]@t f`` becomes a conjunction over i's observations o of
    ``obs_o@t -> K[bot]@t (obs_o@t -> f)``; comparisons with agent terms are
    split over the observation combinations of their (agent, time) groups
    and the denominators multiplied out.  Observation propositions are the
    derived ``@obs_<agent>_<symbol>`` names, so the model needs no changes.
    """
    ty = type(phi)
    if ty in (Top, PropAt, SetAt, Less):
        return phi
    if ty is Not:
        return Not(eliminate_clock(phi.arg, model))
    if ty is And:
        return And(eliminate_clock(phi.left, model), eliminate_clock(phi.right, model))
    if ty in (ForallT, ExistsT, ForallSet):
        return ty(phi.var if ty is not ForallSet else phi.setvar, eliminate_clock(phi.arg, model))
    if ty is KnowAt:
        body = eliminate_clock(phi.arg, model)
        if phi.agent == BOT:
            return KnowAt(BOT, phi.var, body)
        _check_agent(model, phi.agent)
        parts = []
        for sym in model.observation_symbols(phi.agent):
            seen = PropAt(obs_prop(phi.agent, sym), phi.var)
            parts.append(Implies(seen, KnowAt(BOT, phi.var, Implies(seen, body))))
        return conj(parts)
    if ty is Compare:
        return _eliminate_compare(phi, model)
    raise TypeError(f"not a time-logic formula: {phi!r}")


def _check_agent(model, agent):
    if not model.has_agent(agent):
        raise UnknownAgent(f"unknown agent {agent!r}")


def _eliminate_compare(phi: Compare, model):
    groups: dict = {}
    plain = {}
    for idx, term in enumerate(phi.terms):
        if isinstance(term, AgentProbAt):
            _check_agent(model, term.agent)
            groups.setdefault((term.agent, term.var), []).append(idx)
        else:
            plain[idx] = GlobalProb(eliminate_clock(term.arg, model))
    if not groups:
        return Compare(phi.poly, phi.op, phi.c, tuple(plain[i] for i in range(len(phi.terms))))
    keys = list(groups)
    degrees = {g: _group_degree(phi.poly, groups[g]) for g in keys}
    symbol_lists = [model.observation_symbols(agent) for agent, _ in keys]
    parts = []
    for combo in itertools.product(*symbol_lists):
        seen = {g: PropAt(obs_prop(g[0], sym), g[1]) for g, sym in zip(keys, combo)}
        terms: list = []

        def var_of(term):
            if term not in terms:
                terms.append(term)
            return Poly.var(terms.index(term))

        images = {}
        for i, term in plain.items():
            images[i] = var_of(term)
        denom = {}
        for g in keys:
            denom[g] = var_of(GlobalProb(seen[g]))
            for i in groups[g]:
                body = eliminate_clock(phi.terms[i].arg, model)
                images[i] = var_of(GlobalProb(And(seen[g], body)))
        poly = Poly()
        for mono, coef in phi.poly.terms:
            piece = Poly.const(coef)
            exps = dict(mono)
            for v, e in mono:
                piece = piece * images[v] ** e
            for g in keys:
                used = sum(exps.get(i, 0) for i in groups[g])
                piece = piece * denom[g] ** (degrees[g] - used)
            poly = poly + piece
        scale = Poly.const(1)
        for g in keys:
            scale = scale * denom[g] ** degrees[g]
        if scale.is_constant():
            atom = Compare(poly, phi.op, phi.c * scale.constant_term(), tuple(terms))
        else:
            atom = Compare(poly - phi.c * scale, phi.op, Fraction(0), tuple(terms))
        guards = [seen[g] for g, sym_list in zip(keys, symbol_lists) if len(sym_list) > 1]
        parts.append(Implies(conj(guards), atom) if guards else atom)
    return conj(parts)


def _group_degree(poly: Poly, members) -> int:
    members = set(members)
    return max((sum(e for v, e in mono if v in members) for mono, _ in poly.terms), default=0)


# conditional probabilities ----------------------------------------------------

def normalize_conditional(items, op: str, c) -> Compare:
    """Multiply out the denominators of ``sum a_k P(f_k | g_k) op c``.

    `items` is a sequence of ``(a_k, f_k, g_k)``; a condition equal to
    ``true`` contributes no denominator.
    """
    c = Fraction(c)
    terms: list = []

    def var_of(term):
        if term not in terms:
            terms.append(term)
        return Poly.var(terms.index(term))

    nums, dens = [], []
    for coef, event, given in items:
        if given == TRUE:
            nums.append(var_of(GlobalProb(event)))
            dens.append(None)
        else:
            nums.append(var_of(GlobalProb(And(event, given))))
            dens.append(var_of(GlobalProb(given)))
    poly = Poly()
    for k, (coef, _, _) in enumerate(items):
        piece = Poly.const(coef) * nums[k]
        for j, d in enumerate(dens):
            if j != k and d is not None:
                piece = piece * d
        poly = poly + piece
    scale = Poly.const(1)
    for d in dens:
        if d is not None:
            scale = scale * d
    if scale.is_constant():
        return Compare(poly, op, c, tuple(terms))
    return Compare(poly - c * scale, op, Fraction(0), tuple(terms))


def eval_polynomial(f: Poly, values) -> Fraction:
    if f.variables() and max(f.variables()) >= len(values):
        raise ValueError("not enough values for the polynomial's variables")
    return f.evaluate([Fraction(v) for v in values])


# mixed-time formulas ----------------------------------------------------------

@dataclass(frozen=True)
class MixedTimeFormula:
    """``exists t1..tn . f(P(p_1@t_i1), ...) = 0``.

    ``atoms[j]`` is the (proposition, time variable) behind polynomial
    variable j.
    """

    variables: tuple
    poly: Poly
    atoms: tuple

    def __post_init__(self):
        for prop, var in self.atoms:
            if var not in self.variables:
                raise ValueError(f"atom variable {var!r} is not quantified")
        if self.poly.variables() and max(self.poly.variables()) >= len(self.atoms):
            raise ValueError("polynomial uses a variable without an atom")

    def to_wmlo(self):
        terms = tuple(GlobalProb(PropAt(p, v)) for p, v in self.atoms)
        body = Compare(self.poly, "=", Fraction(0), terms)
        for v in reversed(self.variables):
            body = ExistsT(v, body)
        return body

    def text(self) -> str:
        from .ast import to_text
        return to_text(self.to_wmlo())
