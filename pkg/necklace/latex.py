"""bussproofs rendering of formulas and sequent proofs."""

from __future__ import annotations

from necklace.errors import ProofError
from necklace.formula import Brac, Formula, Over, Prim, Prod, Rev, Sequent, Shift, Under
from necklace.proofs import ProofNode, RuleId

RULE_LABELS: dict[RuleId, str] = {
    RuleId.Ax: "(Ax)",
    RuleId.UnderL: "(\\backslash\\to)",
    RuleId.UnderR: "(\\to\\backslash)",
    RuleId.OverL: "(/\\to)",
    RuleId.OverR: "(\\to/)",
    RuleId.ProdL: "(\\cdot\\to)",
    RuleId.ProdR: "(\\to\\cdot)",
    RuleId.NeckR: "(\\to\\neck)",
    RuleId.NeckL: "(\\neck\\to\\neck)",
    RuleId.NeckRot: "(\\neck)",
    RuleId.CS: "(CS)",
    RuleId.RevRev: "(\\rev\\to\\rev)",
    RuleId.RevRevL: "(\\rev\\rev\\to)",
    RuleId.RevRevR: "(\\to\\rev\\rev)",
    RuleId.BracR: "(\\to\\brac)",
    RuleId.BracL: "(\\brac\\to\\brac)",
    RuleId.BracRot: "(\\brac)",
    RuleId.AxRevBrac: "(Ax^{\\rev\\brac})",
    RuleId.Cut: "(cut)",
    RuleId.OverL2: "(/\\to)_2",
    RuleId.UnderOverL2: "(\\to/)_2",
    RuleId.ProdR2: "(\\to\\cdot)_2",
    RuleId.ProdL2: "(\\cdot\\to)_2",
}

_INFER = {0: "\\UnaryInfC", 1: "\\UnaryInfC", 2: "\\BinaryInfC", 3: "\\TrinaryInfC"}

# minor premise is drawn on the left
_MINOR_FIRST = {RuleId.UnderL, RuleId.OverL}


def latex_preamble() -> str:
    return "\n".join([
        "\\usepackage{bussproofs}",
        "\\newcommand{\\neck}{\\mathord{\\circlearrowleft}}",
        "\\newcommand{\\rev}{\\mathsf{r}}",
        "\\newcommand{\\brac}{\\mathsf{b}}",
    ])


def formula_to_latex(f: Formula) -> str:
    if isinstance(f, Prim):
        name = f.name.lstrip("_")
        return name if f.name == name else f"\\hat{{{name}}}"
    if isinstance(f, (Shift, Rev, Brac)):
        inner = formula_to_latex(f.inner)
        if isinstance(f.inner, (Shift, Rev, Brac)):
            inner = f"({inner})"
        macro = {Shift: "\\neck", Rev: "\\rev", Brac: "\\brac"}[type(f)]
        return f"{inner}^{{{macro}}}"
    op = {Under: "\\backslash", Over: "/", Prod: "\\cdot"}[type(f)]
    return f"({formula_to_latex(f.left)} {op} {formula_to_latex(f.right)})"


def sequent_to_latex(s: Sequent) -> str:
    ant = ", ".join(formula_to_latex(a) for a in s.antecedent)
    return f"{ant} \\to {formula_to_latex(s.succedent)}"


def _lift(node: ProofNode) -> str:
    label = f"\\RightLabel{{${RULE_LABELS.get(node.rule, node.rule.value)}$}}"
    conclusion = f"{{${sequent_to_latex(node.conclusion)}$}}"
    premises = list(node.premises)
    if node.rule in _MINOR_FIRST and len(premises) == 2:
        premises.reverse()
    if len(premises) > 3:
        raise ProofError(f"{node.rule.value} has {len(premises)} premises; bussproofs draws at most three")
    lines = [_lift(p) for p in premises] or ["\\AxiomC{}"]
    lines += [label, _INFER[len(premises)] + conclusion]
    return "\n".join(lines)


def proof_to_latex(proof: ProofNode, *, standalone: bool = False) -> str:
    body = "\\begin{prooftree}\n" + _lift(proof) + "\n\\end{prooftree}"
    if not standalone:
        return body
    return ("\\documentclass{article}\n" + latex_preamble()
            + "\n\\begin{document}\n" + body + "\n\\end{document}\n")
