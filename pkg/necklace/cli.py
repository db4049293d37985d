"""
Command-line interface.

Exit codes: 0 derivable / holds / member, 1 the negative answer,
2 usage or input errors.
"""

from __future__ import annotations

import json
import logging
import sys
from pathlib import Path
from typing import Optional

import click

from necklace.automata import automaton_to_dict, load_automaton
from necklace.batch import BatchRunner
from necklace.errors import NecklaceError
from necklace.formula import SystemId, check_fragment, parse_formula, parse_sequent, print_formula, print_sequent
from necklace.grammar import (
    dump_grammar,
    enumerate_language,
    import_right_linear,
    load_grammar,
    load_right_linear,
    member,
    split_word,
)
from necklace.hilbert import to_hilbert
from necklace.hlcalc import HlSearchConfig, HlSequent, hl_derive, load_hl_sequent
from necklace.hypergraph import to_dot
from necklace.latex import proof_to_latex
from necklace.proofs import find_invalid_node, proof_from_json, proof_to_json
from necklace.search import DEFAULT_MEMO_LIMIT, SearchConfig, derive
from necklace.semantics import EpsilonMode, Interpretation, SamplerConfig, countermodel_search, holds
from necklace.transforms import (
    FreshSymbolPool,
    box,
    cal_a,
    cal_s,
    cs_embed_grammar,
    e_n,
    evenize_grammar,
    o_n,
    t_n,
    unneck,
    unneck_grammar,
)

LOG = logging.getLogger(__name__)

SYSTEMS = click.Choice([s.value for s in SystemId], case_sensitive=False)
TRANSFORMS = ("box", "eN", "oN", "unneck", "calA", "calS", "tn")


class InputError(click.ClickException):
    exit_code = 2


class NecklaceGroup(click.Group):
    """Turns library input errors into exit code 2."""

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except (NecklaceError, OSError) as exc:
            raise InputError(str(exc)) from exc


def _verdict(ctx: click.Context, ok: bool, yes: str, no: str) -> None:
    click.echo(yes if ok else no)
    ctx.exit(0 if ok else 1)


@click.group(cls=NecklaceGroup)
@click.option("-v", "--verbose", count=True, help="-v for progress, -vv for search statistics.")
def main(verbose: int) -> None:
    """Provers and tools for the Lambek calculus with cyclic shift."""
    level = logging.WARNING if verbose == 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)


# ----------------------------------------------------------------------
# sequent calculus

@main.command()
@click.argument("system", type=SYSTEMS)
@click.argument("sequent")
@click.option("--proof-json", type=click.Path(dir_okay=False, allow_dash=True),
              help="Write the proof as JSON ('-' for stdout).")
@click.option("--cut-budget", type=int, default=None, help="Cuts per branch (Lbrac only).")
@click.option("--memo-limit", type=int, default=DEFAULT_MEMO_LIMIT, show_default=True)
@click.option("--latex", is_flag=True, help="Print the proof as a bussproofs tree.")
@click.pass_context
def prove(ctx: click.Context, system: str, sequent: str, proof_json: Optional[str],
          cut_budget: Optional[int], memo_limit: int, latex: bool) -> None:
    """Decide SEQUENT in SYSTEM."""
    system_id = SystemId.parse(system)
    overrides = {"memo_limit": memo_limit}
    if cut_budget is not None:
        overrides["cut_budget"] = cut_budget
    try:
        config = SearchConfig.for_system(system_id, **overrides)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    proof = derive(parse_sequent(sequent), config)
    if proof is not None:
        if proof_json == "-":
            click.echo(proof_to_json(proof))
        elif proof_json:
            Path(proof_json).write_text(proof_to_json(proof) + "\n", encoding="utf-8")
        if latex:
            click.echo(proof_to_latex(proof))
    _verdict(ctx, proof is not None, "derivable", "underivable")


@main.command()
@click.argument("system", type=SYSTEMS)
@click.argument("proof_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--allow-cut", is_flag=True)
@click.pass_context
def check(ctx: click.Context, system: str, proof_file: str, allow_cut: bool) -> None:
    """Validate a proof JSON file."""
    proof = proof_from_json(Path(proof_file).read_text(encoding="utf-8"))
    problem = find_invalid_node(proof, SystemId.parse(system), allow_cut=allow_cut)
    if problem is None:
        _verdict(ctx, True, "valid", "")
    path, reason = problem
    _verdict(ctx, False, "", f"invalid at {'/'.join(map(str, path)) or 'root'}: {reason}")


@main.command()
@click.argument("sequent")
@click.pass_context
def hilbert(ctx: click.Context, sequent: str) -> None:
    """Print the Hilbert-style derivation of an Lneck sequent."""
    proof = derive(parse_sequent(sequent), SearchConfig(SystemId.LNECK))
    if proof is None:
        _verdict(ctx, False, "", "underivable")
    for i, step in enumerate(to_hilbert(proof)):
        cited = f" from {', '.join(map(str, step.premises))}" if step.premises else ""
        click.echo(f"{i}. {print_sequent(step.sequent)}  [{step.rule.value}]{cited}")


@main.command()
@click.argument("kind", type=click.Choice(TRANSFORMS))
@click.argument("formula")
@click.option("-n", "--N", "n", type=int, default=1, show_default=True, help="Tower height or T_n index.")
def transform(kind: str, formula: str, n: int) -> None:
    """Apply a formula translation."""
    f = parse_formula(formula)
    pool = FreshSymbolPool(f)
    functions = {
        "box": lambda: box(f, pool),
        "eN": lambda: e_n(f, n, pool),
        "oN": lambda: o_n(f, n, pool),
        "unneck": lambda: unneck(f),
        "calA": lambda: cal_a(f),
        "calS": lambda: cal_s(f),
        "tn": lambda: t_n(f, n, pool),
    }
    click.echo(print_formula(functions[kind]()))


# ----------------------------------------------------------------------
# grammars

@main.group()
def grammar() -> None:
    """Categorial grammar tools."""


@grammar.command("member")
@click.argument("grammar_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("word")
@click.pass_context
def grammar_member(ctx: click.Context, grammar_file: str, word: str) -> None:
    g = load_grammar(grammar_file)
    witness = member(g, split_word(word))
    if witness is not None:
        for symbol, f in zip(split_word(word), witness.assignment):
            click.echo(f"{symbol} : {print_formula(f)}")
    _verdict(ctx, witness is not None, "member", "not a member")


@grammar.command("enum")
@click.argument("grammar_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--max-len", type=int, default=3, show_default=True)
def grammar_enum(grammar_file: str, max_len: int) -> None:
    """Print the words up to --max-len, shortest first."""
    for word in sorted(enumerate_language(load_grammar(grammar_file), max_len), key=lambda w: (len(w), w)):
        click.echo(word)


@grammar.command("import")
@click.argument("rl_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--perm", is_flag=True, help="Embed the result into Lneck.")
def grammar_import(rl_file: str, perm: bool) -> None:
    """Turn a right-linear grammar into an L grammar."""
    g = import_right_linear(load_right_linear(rl_file))
    click.echo(dump_grammar(cs_embed_grammar(g) if perm else g), nl=False)


@grammar.command("perm")
@click.argument("grammar_file", type=click.Path(exists=True, dir_okay=False))
def grammar_perm(grammar_file: str) -> None:
    """Embed an L or LCS grammar into Lneck."""
    click.echo(dump_grammar(cs_embed_grammar(load_grammar(grammar_file))), nl=False)


@grammar.command("evenize")
@click.argument("grammar_file", type=click.Path(exists=True, dir_okay=False))
def grammar_evenize(grammar_file: str) -> None:
    click.echo(dump_grammar(evenize_grammar(load_grammar(grammar_file))), nl=False)


@grammar.command("unneck")
@click.argument("grammar_file", type=click.Path(exists=True, dir_okay=False))
def grammar_unneck(grammar_file: str) -> None:
    click.echo(dump_grammar(unneck_grammar(load_grammar(grammar_file))), nl=False)


# ----------------------------------------------------------------------
# semantics

@main.group()
def semantics() -> None:
    """Regular-language interpretations."""


def _epsilon(allow: bool) -> EpsilonMode:
    return EpsilonMode.ALLOW if allow else EpsilonMode.FORBID


@semantics.command("check")
@click.argument("sequent")
@click.option("-m", "--model", "models", multiple=True, metavar="NAME=FILE", help="Automaton JSON per primitive.")
@click.option("--allow-epsilon", is_flag=True)
@click.pass_context
def semantics_check(ctx: click.Context, sequent: str, models: tuple[str, ...], allow_epsilon: bool) -> None:
    assignment = {}
    for item in models:
        name, sep, path = item.partition("=")
        if not sep:
            raise InputError(f"model {item!r} is not NAME=FILE")
        assignment[name.strip()] = load_automaton(path.strip())
    result = holds(parse_sequent(sequent), Interpretation(assignment, _epsilon(allow_epsilon)))
    _verdict(ctx, result, "holds", "fails")


@semantics.command("countermodel")
@click.argument("sequent")
@click.option("--max-states", type=int, default=2, show_default=True)
@click.option("--samples", type=int, default=500, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--alphabet", default="ab", show_default=True, help="Letters, one character each.")
@click.option("--density", type=float, default=0.5, show_default=True)
@click.option("--allow-epsilon", is_flag=True)
@click.pass_context
def semantics_countermodel(ctx: click.Context, sequent: str, max_states: int, samples: int, seed: int,
                           alphabet: str, density: float, allow_epsilon: bool) -> None:
    """Sample small automata until one falsifies SEQUENT."""
    try:
        cfg = SamplerConfig(max_states, tuple(alphabet), samples, seed, _epsilon(allow_epsilon), density)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    model = countermodel_search(parse_sequent(sequent), cfg)
    if model is None:
        _verdict(ctx, False, "", "no countermodel found")
    click.echo(json.dumps({name: automaton_to_dict(m) for name, m in sorted(model.assignment.items())}, indent=2))
    ctx.exit(0)


# ----------------------------------------------------------------------
# hypergraph calculus

@main.group()
def hl() -> None:
    """Hypergraph Lambek calculus."""


@hl.command("prove")
@click.argument("sequent_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--dot", is_flag=True, help="Print the antecedent in DOT first.")
@click.option("--node-limit", type=int, default=HlSearchConfig.node_limit, show_default=True)
@click.option("--show-proof", is_flag=True)
@click.pass_context
def hl_prove(ctx: click.Context, sequent_file: str, dot: bool, node_limit: int, show_proof: bool) -> None:
    s = load_hl_sequent(sequent_file)
    if dot:
        click.echo(to_dot(s.antecedent))
    proof = hl_derive(s, HlSearchConfig(node_limit=node_limit))
    if proof is not None and show_proof:
        click.echo(proof.pretty())
    _verdict(ctx, proof is not None, "derivable", "underivable")


@hl.command("embed")
@click.argument("sequent")
@click.option("--node-limit", type=int, default=HlSearchConfig.node_limit, show_default=True)
@click.pass_context
def hl_embed(ctx: click.Context, sequent: str, node_limit: int) -> None:
    """Translate an Lbrac sequent and decide it in the hypergraph calculus."""
    s = parse_sequent(sequent)
    check_fragment(s, SystemId.LBRAC)
    translated = HlSequent.from_sequent(s)
    click.echo(str(translated))
    proof = hl_derive(translated, HlSearchConfig(node_limit=node_limit))
    _verdict(ctx, proof is not None, "derivable", "underivable")


# ----------------------------------------------------------------------
# batch

@main.command()
@click.argument("system", type=SYSTEMS)
@click.argument("sequent_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--output", type=click.Path(dir_okay=False), default=str(BatchRunner.CSV_FILE), show_default=True)
@click.option("--summary", type=click.Path(dir_okay=False), default=str(BatchRunner.SUMMARY_FILE),
              show_default=True)
@click.pass_context
def batch(ctx: click.Context, system: str, sequent_file: str, output: str, summary: str) -> None:
    """Decide every sequent in SEQUENT_FILE and write a CSV report."""
    runner = BatchRunner(SystemId.parse(system), csv_file=Path(output), summary_file=Path(summary))
    runner.run(sequent_file)
    saved = runner.save()
    saved = runner.save_summary() and saved
    ctx.exit(0 if saved else 2)
