"""Command-line front end: check, semidecide, reduce, belief, simulate.

Exit codes: 0 holds/witness, 1 fails, 2 no witness up to the bound, 3 error.
``--format rows`` prints one ``key=value`` record per line.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .checker import (CTLChecker, NoWitnessUpTo, Witness, check_mixed_time, check_skolem_form, eval_wmlo,
                      failing_initial_states, mixed_time_of, prop_mass, simulate_runs, skolem_form_of)
from .checker.verdict import Fails, Holds, describe, format_assignment
from .errors import EpiprobError, HorizonTooSmall
from .logic import parse_ctlkp, parse_wmlo, temporal_depth, to_text
from .logic.ast import CurProb, PriorProb, walk
from .markov import is_stochastic, validate
from .modelfile import format_rational, load_model, write_model
from .semantics import clock_belief, spr_belief

ERROR = 3


class _Parser(argparse.ArgumentParser):
    """Exits with the error code 3 and lets options sit between positionals."""

    _intermixed = False

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(ERROR, f"{self.prog}: error: {message}\n")

    def parse_known_args(self, args=None, namespace=None):
        if self._subparsers is not None or self._intermixed:
            return super().parse_known_args(args, namespace)
        self._intermixed = True
        try:
            return self.parse_known_intermixed_args(args, namespace)
        finally:
            self._intermixed = False


class Output:
    def __init__(self, fmt: str, stream=None):
        self.rows = fmt == "rows"
        self.stream = stream or sys.stdout

    def record(self, human: str, **fields):
        if self.rows:
            print(" ".join(f"{k}={_fmt(v)}" for k, v in fields.items()), file=self.stream)
        else:
            print(human, file=self.stream)


def _fmt(v) -> str:
    if isinstance(v, Fraction):
        return format_rational(v)
    return str(v).replace(" ", "")


def _verdict_fields(v) -> dict:
    fields = {"verdict": describe(v).split()[0]}
    if isinstance(v, (Witness, Fails)) and v.assignment:
        fields.update(v.assignment)
    if isinstance(v, NoWitnessUpTo):
        fields["bound"] = v.bound
        if v.last_negative is not None:
            fields["last_negative"] = v.last_negative
    return fields


def _model(path: str):
    if not path:
        raise ValueError("empty model path")
    model = load_model(path)
    problems = validate(model)
    if problems:
        raise ValueError("invalid model: " + "; ".join(problems))
    return model


def _formula_text(args) -> str:
    if args.formula_file:
        return Path(args.formula_file).read_text(encoding="utf-8").strip()
    if args.formula is None:
        raise ValueError("give a formula or --formula-file")
    return args.formula


def _terms(phi) -> list:
    seen, out = set(), []
    for n in walk(phi):
        if isinstance(n, (CurProb, PriorProb)) and n not in seen:
            seen.add(n)
            out.append(n)
    return out


# subcommands ----------------------------------------------------------------------

def cmd_check(args, out: Output) -> int:
    model = _model(args.model)
    phi = parse_ctlkp(_formula_text(args))
    depth = temporal_depth(phi)
    if args.horizon is not None and depth != float("inf") and args.horizon < depth:
        raise HorizonTooSmall(f"horizon {args.horizon} is below the formula's depth {depth}")
    failing = failing_initial_states(model, args.semantics, phi)
    verdict = Fails() if failing else Holds()
    out.record(f"verdict: {describe(verdict)}", **_verdict_fields(verdict))
    if failing:
        chk = CTLChecker.for_formula(model, args.semantics, phi)
        for s in failing:
            name = model.states[s]
            out.record(f"failing point: {name} at time 0", point=name, time=0)
            ctx = chk.initial_ctx(s)
            for term in _terms(phi):
                try:
                    value = chk.term_value(term, ctx, s)
                except EpiprobError:
                    continue
                out.record(f"  {to_text(term)} = {format_rational(value)}",
                           point=name, term=to_text(term).replace(" ", ""), value=value)
    return 1 if failing else 0


def cmd_semidecide(args, out: Output) -> int:
    model = _model(args.model)
    if args.query_file:
        text = Path(args.query_file).read_text(encoding="utf-8").strip()
    elif args.query:
        text = args.query
    else:
        raise ValueError("give a query or --query-file")
    phi = parse_wmlo(text)
    skolem = skolem_form_of(phi) if args.question in ("auto", "skolem-form") else None
    if args.question == "skolem-form" and skolem is None:
        raise ValueError("not of the form: exists t . P(p@t) op c")
    if skolem is not None:
        var, prop, op, c = skolem
        verdict = check_skolem_form(model, prop, op, c, args.bound)
        if c in (0, 1):
            out.record("decided: qualitative", decided="qualitative")
        elif isinstance(verdict, Witness):
            t = verdict.assignment["t"]
            verdict = Witness({var: t})
            value = prop_mass(model, prop, t)
            out.record(f"witness {var}={t} value={format_rational(value)}",
                       verdict="witness", **{var: t}, value=value)
            return 0
    else:
        mixed = mixed_time_of(phi) if args.question in ("auto", "mixed-time") else None
        if args.question == "mixed-time" and mixed is None:
            raise ValueError("not of the form: exists t1..tn . f(P(p@t1), ...) = c")
        if mixed is not None:
            verdict = check_mixed_time(model, mixed, args.bound)
        else:
            verdict = eval_wmlo(model, args.semantics, phi, args.bound)
    _report(verdict, out)
    return {Holds: 0, Witness: 0, Fails: 1, NoWitnessUpTo: 2}[type(verdict)]


def _report(verdict, out: Output):
    if isinstance(verdict, NoWitnessUpTo):
        human = f"no-witness-up-to {verdict.bound}"
        if verdict.last_negative is not None:
            human += f" (last negative index {verdict.last_negative})"
    else:
        human = describe(verdict)
    out.record(human, **_verdict_fields(verdict))


def _write(outdir: Path, name: str, text: str, out: Output):
    outdir.mkdir(parents=True, exist_ok=True)
    path = outdir / name
    path.write_text(text, encoding="utf-8")
    out.record(f"wrote {path}", wrote=str(path))


def _matrix_text(A) -> str:
    return "".join(" ".join(format_rational(x) for x in row) + "\n" for row in A)


def cmd_reduce(args, out: Output) -> int:
    from .reductions import diophantine_chain, diophantine_to_formula, parse_int_polynomial
    from .reductions.embedding import embedding_model, stochastic_embedding
    from .reductions.lrs import lrs_to_bilinear, parse_lrs
    from .reductions.pfa import emptiness_formula, parse_pfa, pfa_to_podtmc

    text = Path(args.input).read_text(encoding="utf-8")
    outdir = Path(args.outdir)
    if args.kind == "pfa":
        if args.bound is None:
            raise ValueError("reduce pfa needs --bound for the EF<=T query")
        P = parse_pfa(text)
        _write(outdir, "model.txt", write_model(pfa_to_podtmc(P)), out)
        _write(outdir, "formula.txt", emptiness_formula(P, args.bound) + "\n", out)
    elif args.kind == "dioph":
        p = parse_int_polynomial(text)
        _write(outdir, "model.txt", write_model(diophantine_chain()), out)
        _write(outdir, "formula.txt", diophantine_to_formula(p).text() + "\n", out)
    else:
        L = parse_lrs(text)
        v, A, w = lrs_to_bilinear(L)
        dump = ("# u_n = (A^n)[1][k] = v A^n w for n >= 1\n"
                + "v: " + " ".join(format_rational(x) for x in v) + "\n"
                + "w: " + " ".join(format_rational(x) for x in w) + "\n"
                + "A:\n" + _matrix_text(A))
        _write(outdir, "companion.txt", dump, out)
        if all(x.denominator == 1 for row in A for x in row):
            E = stochastic_embedding(A)
            assert is_stochastic(E.B)
            _write(outdir, "model.txt", write_model(embedding_model(E)), out)
            _write(outdir, "formula.txt", f"exists t . P(p@t) = {format_rational(E.c)}\n", out)
        else:
            out.record("companion matrix is not integral; no chain emitted", embedding="skipped")
    return 0


def cmd_belief(args, out: Output) -> int:
    model = _model(args.model)
    if args.semantics == "clk":
        if args.time is None or args.obs is None:
            raise ValueError("clock beliefs need --time and --obs")
        belief = clock_belief(model, args.agent, args.time, args.obs)
    else:
        if not args.history:
            raise ValueError("perfect-recall beliefs need --history o0,o1,...")
        belief = spr_belief(model, args.agent, [h.strip() for h in args.history.split(",")])
    for s in model.states:
        p = belief.posterior[s]
        out.record(f"{s}\t{format_rational(p)}", agent=args.agent, time=belief.time, state=s, prob=p)
    return 0


def cmd_simulate(args, out: Output) -> int:
    model = _model(args.model)
    table = simulate_runs(model, args.horizon, args.n, args.seed)
    for t, row in table.items():
        for s, f in row.items():
            out.record(f"{t}\t{s}\t{f:.6f}", t=t, state=s, freq=f"{f:.6f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="epiprob", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "rows"), default="human")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", parents=[common], help="model-check a branching-time formula")
    p.add_argument("model")
    p.add_argument("formula", nargs="?")
    p.add_argument("--formula-file")
    p.add_argument("--semantics", choices=("clk", "spr"), default="spr")
    p.add_argument("--horizon", type=_natural)
    p.set_defaults(run=cmd_check)

    p = sub.add_parser("semidecide", parents=[common], help="bounded search for time-logic questions")
    p.add_argument("model")
    p.add_argument("query", nargs="?")
    p.add_argument("--query-file")
    p.add_argument("--question", choices=("auto", "skolem-form", "mixed-time"), default="auto")
    p.add_argument("--semantics", choices=("clk", "spr"), default="spr")
    p.add_argument("--bound", type=_natural, required=True)
    p.set_defaults(run=cmd_semidecide)

    p = sub.add_parser("reduce", parents=[common], help="emit a hardness construction as model + query")
    p.add_argument("kind", choices=("pfa", "lrs", "dioph"))
    p.add_argument("input")
    p.add_argument("outdir")
    p.add_argument("--bound", type=_natural)
    p.set_defaults(run=cmd_reduce)

    p = sub.add_parser("belief", parents=[common], help="posterior of an agent")
    p.add_argument("model")
    p.add_argument("--agent", required=True)
    p.add_argument("--semantics", choices=("clk", "spr"), default="spr")
    p.add_argument("--history", help="comma-separated observations from time 0 (spr)")
    p.add_argument("--time", type=_natural)
    p.add_argument("--obs")
    p.set_defaults(run=cmd_belief)

    p = sub.add_parser("simulate", parents=[common], help="Monte Carlo state frequencies")
    p.add_argument("model")
    p.add_argument("--horizon", type=_natural, required=True)
    p.add_argument("-n", type=_natural, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.set_defaults(run=cmd_simulate)
    return parser


def _natural(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return n


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.run(args, Output(args.format))
    except (EpiprobError, ValueError, KeyError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
