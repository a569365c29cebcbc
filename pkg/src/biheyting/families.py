"""The two-variable formula families, bb2, the Sh axioms and the substitution e.

Families (over variables p, q)::

    beta_0 = q -> p                 gamma_0 = p -> q
    beta_1 = gamma_0 -> beta_0 \\/ q  gamma_1 = beta_0 -> gamma_0 \\/ p
    beta_{n+2}  = gamma_{n+1} -> beta_{n+1} \\/ gamma_n
    gamma_{n+2} = beta_{n+1} -> gamma_{n+1} \\/ beta_n
    alpha_n = beta_{n+2} /\\ gamma_{n+2} -> beta_{n+1} \\/ gamma_{n+1}
    delta_n = alpha_n \\/ alpha_{n+1}
    kappa_n = alpha_{n+1} -> alpha_n \\/ beta_{n+2}
"""
from __future__ import annotations

import enum
from functools import lru_cache
from typing import Dict, List

from .formula import Conj, Disj, Formula, Iff, Impl, Var, substitute, variables

__all__ = [
    "FamilyName", "P", "Q", "R", "family", "alpha", "beta", "gamma", "delta",
    "kappa", "bb2", "sh_axioms", "sh_implication_axiom", "shehtman_e", "e_power",
]

P, Q, R = Var("p"), Var("q"), Var("r")


class FamilyName(enum.Enum):
    ALPHA = "alpha"
    BETA = "beta"
    GAMMA = "gamma"
    DELTA = "delta"
    KAPPA = "kappa"

    @classmethod
    def coerce(cls, name) -> "FamilyName":
        if isinstance(name, cls):
            return name
        greek = {"α": "alpha", "β": "beta", "γ": "gamma", "δ": "delta", "κ": "kappa"}
        key = greek.get(name, str(name).lower())
        return cls(key)


@lru_cache(maxsize=None)
def _bg(n: int):
    """(beta_n, gamma_n)."""
    if n == 0:
        return Impl(Q, P), Impl(P, Q)
    if n == 1:
        b0, g0 = _bg(0)
        return Impl(g0, Disj(b0, Q)), Impl(b0, Disj(g0, P))
    b1, g1 = _bg(n - 1)
    b0, g0 = _bg(n - 2)
    return Impl(g1, Disj(b1, g0)), Impl(b1, Disj(g1, b0))


def beta(n: int) -> Formula:
    return _bg(n)[0]


def gamma(n: int) -> Formula:
    return _bg(n)[1]


def alpha(n: int) -> Formula:
    return Impl(Conj(beta(n + 2), gamma(n + 2)), Disj(beta(n + 1), gamma(n + 1)))


def delta(n: int) -> Formula:
    return Disj(alpha(n), alpha(n + 1))


def kappa(n: int) -> Formula:
    return Impl(alpha(n + 1), Disj(alpha(n), beta(n + 2)))


_BUILDERS = {
    FamilyName.ALPHA: alpha, FamilyName.BETA: beta, FamilyName.GAMMA: gamma,
    FamilyName.DELTA: delta, FamilyName.KAPPA: kappa,
}


def family(name, n: int) -> Formula:
    if n < 0:
        raise ValueError("family index must be non-negative")
    return _BUILDERS[FamilyName.coerce(name)](n)


def bb2() -> Formula:
    def branch(x, y, z):
        yz = Disj(y, z)
        return Impl(Impl(x, yz), yz)
    hyp = Conj(Conj(branch(P, Q, R), branch(Q, P, R)), branch(R, P, Q))
    return Impl(hyp, Disj(Disj(P, Q), R))


def sh_implication_axiom() -> Formula:
    """(alpha_0 -> delta_1) -> delta_0"""
    return Impl(Impl(alpha(0), delta(1)), delta(0))


def sh_axioms() -> List[Formula]:
    return [sh_implication_axiom(), kappa(0), bb2()]


_E_MAP = {"p": Disj(Q, Impl(Q, P)), "q": Disj(P, Impl(P, Q))}
_e_memo: Dict[Formula, Formula] = {}


def shehtman_e(phi: Formula) -> Formula:
    """Apply p := q \\/ (q -> p), q := p \\/ (p -> q) homomorphically."""
    hit = _e_memo.get(phi)
    if hit is not None:
        return hit
    extra = variables(phi) - {"p", "q"}
    if extra:
        raise ValueError(f"e is defined on formulas in p, q only; got {sorted(extra)}")
    out = substitute(phi, _E_MAP)
    _e_memo[phi] = out
    return out


def e_power(n: int, phi: Formula) -> Formula:
    if n < 0:
        raise ValueError("negative iteration count")
    for _ in range(n):
        phi = shehtman_e(phi)
    return phi


def iff_pq() -> Formula:
    return Iff(P, Q)
