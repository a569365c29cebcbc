"""Verification workbench for intuitionistic and bi-intuitionistic propositional logic.

Formulas (``formula``, ``parser``, ``families``), finite Kripke frames and
their upset algebras (``frames``, ``algebra_props``), the compactified Fine
space (``fine``, ``fine_suites``), IPC decision procedures (``prover``,
``derivations``) and the command line (``cli``, ``acceptance``).
"""

__version__ = "0.1.0"

from .formula import (BOTTOM, TOP, CoNeg, Coimpl, Conj, Disj, Formula, Iff, Impl, Neg,
                      Var, substitute, to_text)
from .parser import ParseError, parse, parse_sequent
from .families import FamilyName, bb2, e_power, family, sh_axioms, shehtman_e
from .frames import FinitePoset, enumerate_posets, evaluate, validates
from .prover import ProofTask, Verdict, equiv, proves

__all__ = [
    "__version__", "BOTTOM", "TOP", "CoNeg", "Coimpl", "Conj", "Disj", "Formula", "Iff",
    "Impl", "Neg", "Var", "substitute", "to_text", "ParseError", "parse", "parse_sequent",
    "FamilyName", "bb2", "e_power", "family", "sh_axioms", "shehtman_e", "FinitePoset",
    "enumerate_posets", "evaluate", "validates", "ProofTask", "Verdict", "equiv", "proves",
]
