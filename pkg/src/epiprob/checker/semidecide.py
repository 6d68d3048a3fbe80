"""Bounded searches for the questions without a known decision procedure,
plus the exact qualitative cases (threshold 0 or 1)."""
from __future__ import annotations

import itertools
from fractions import Fraction

from ..errors import UnknownProposition
from ..logic.transform import MixedTimeFormula
from ..markov import PODTMC, distribution_vector
from .ctl import compare
from .verdict import Fails, Holds, NoWitnessUpTo, Witness


def prop_mass(model: PODTMC, prop: str, t: int) -> Fraction:
    """P(prop holds at time t)."""
    states = model.prop_states(prop)
    return sum((p for s, p in enumerate(distribution_vector(model, t)) if s in states), Fraction(0))


def support_sequence(model: PODTMC):
    """Supports of the time-t distributions, up to the first repetition.

    Returns (supports, loop_start): supports[t] for t < len(supports), and
    the sequence continues periodically from index loop_start.
    """
    seen: dict = {}
    supports = []
    cur = frozenset(model.initial_support)
    while cur not in seen:
        seen[cur] = len(supports)
        supports.append(cur)
        cur = frozenset(j for s in cur for j, _ in model.successors[s])
    return supports, seen[cur]


def decide_qualitative(model: PODTMC, prop: str, op: str, c) -> bool:
    """Exact answer to "exists t: P(prop at t) op c" for c in {0, 1}.

    Only the support of each time-t distribution matters, and the support
    sequence is eventually periodic, so one pass up to its first repetition
    covers every t.
    """
    c = Fraction(c)
    good = model.prop_states(prop)
    supports, _ = support_sequence(model)
    for sup in supports:
        x_is_zero = not (sup & good)
        x_is_one = sup <= good
        if c == 0:
            if compare(Fraction(0), op, c) if x_is_zero else op in (">", ">="):
                return True
        else:
            if compare(Fraction(1), op, c) if x_is_one else op in ("<", "<="):
                return True
    return False


def check_skolem_form(model: PODTMC, prop: str, op: str, c, T: int):
    """exists t . P(prop@t) op c.

    For c in {0, 1} the answer is exact (Holds/Fails, no bound needed).
    Otherwise t = 0..T is scanned: Witness for the least hit, else
    NoWitnessUpTo(T).
    """
    if not model.knows_proposition(prop):
        raise UnknownProposition(f"unknown proposition {prop!r}")
    c = Fraction(c)
    if c in (0, 1):
        return Holds() if decide_qualitative(model, prop, op, c) else Fails()
    good = model.prop_states(prop)
    v = tuple(model.init)
    for t in range(T + 1):
        if t:
            v = _step(model, v)
        x = sum((p for s, p in enumerate(v) if s in good), Fraction(0))
        if compare(x, op, c):
            return Witness({"t": t})
    return NoWitnessUpTo(T)


def _step(model, v):
    out = [Fraction(0)] * model.n
    for s, p in enumerate(v):
        if p:
            for j, q in model.successors[s]:
                out[j] += p * q
    return tuple(out)


def marginal_table(model: PODTMC, props, T: int) -> dict:
    """(prop, t) -> P(prop at t) for t in 0..T."""
    table = {}
    v = tuple(model.init)
    sets = {p: model.prop_states(p) for p in props}
    for t in range(T + 1):
        if t:
            v = _step(model, v)
        for p, good in sets.items():
            table[(p, t)] = sum((x for s, x in enumerate(v) if s in good), Fraction(0))
    return table


def check_mixed_time(model: PODTMC, psi: MixedTimeFormula, T: int):
    """exists t1..tn in [0,T] with f(P(p@t_i), ...) = 0; lexicographically least witness."""
    props = {p for p, _ in psi.atoms}
    for p in props:
        if not model.knows_proposition(p):
            raise UnknownProposition(f"unknown proposition {p!r}")
    table = marginal_table(model, props, T)
    for values in itertools.product(range(T + 1), repeat=len(psi.variables)):
        tau = dict(zip(psi.variables, values))
        xs = [table[(p, tau[v])] for p, v in psi.atoms]
        if psi.poly.evaluate(xs) == 0:
            return Witness(tau)
    return NoWitnessUpTo(T)


def skolem_form_of(phi):
    """(var, prop, op, c) when `phi` reads ``exists t . P(p@t) op c``, else None."""
    from ..logic.ast import Compare, ExistsT, GlobalProb, PropAt
    from ..logic.poly import Poly

    if not isinstance(phi, ExistsT) or not isinstance(phi.arg, Compare):
        return None
    cmp = phi.arg
    if cmp.poly != Poly.var(0) or len(cmp.terms) != 1:
        return None
    term = cmp.terms[0]
    if isinstance(term, GlobalProb) and isinstance(term.arg, PropAt) and term.arg.var == phi.var:
        return phi.var, term.arg.prop, cmp.op, cmp.c
    return None


def mixed_time_of(phi):
    """The MixedTimeFormula behind ``exists t1..tn . f(P(p@t_i), ...) = c``, else None."""
    from ..logic.ast import Compare, ExistsT, GlobalProb, PropAt
    from ..logic.poly import Poly

    names, body = [], phi
    while isinstance(body, ExistsT):
        names.append(body.var)
        body = body.arg
    if not names or len(set(names)) != len(names) or not isinstance(body, Compare) or body.op != "=":
        return None
    atoms = []
    for term in body.terms:
        if not (isinstance(term, GlobalProb) and isinstance(term.arg, PropAt) and term.arg.var in names):
            return None
        atoms.append((term.arg.prop, term.arg.var))
    return MixedTimeFormula(tuple(names), body.poly - Poly.const(body.c), tuple(atoms))
