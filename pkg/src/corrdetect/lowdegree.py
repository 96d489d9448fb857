"""Low-degree polynomial signal-to-noise diagnostics.

Over the orthonormal (centered edge-indicator) basis, the degree-D advantage
of any polynomial test is governed by

    SNR(s, D)^2 = sum over simple motifs M without isolated vertices,
                  e(M) <= D/2 (the empty motif included), of
                  rho^(2 e(M)) * ( s! (n-v(M))! / ( n! (s-v(M))! ) )^2 ,

which is always >= 1 (the empty motif alone); values close to 1 mean degree-D
polynomials cannot separate the hypotheses. A closed-form cap,

    SNR^2 <= 1 + x^2 exp(x^2),   x = e * rho * D / (2 log(n/s)),

follows from counting motif classes by vertex support, and is finite-sample
valid, so the enumerated value must sit below it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import CapacityError, ParameterError
from .motifs import enumerate_simple_no_isolated


@dataclass(frozen=True)
class SnrTerm:
    vertices: int
    edges: int
    contribution: float


@dataclass(frozen=True)
class SnrReport:
    n: int
    s: int
    rho: float
    degree: int
    snr: float
    terms: tuple

    def to_dict(self) -> dict:
        return {
            "n": self.n, "s": self.s, "rho": self.rho, "degree": self.degree,
            "snr": self.snr,
            "terms": [{"vertices": t.vertices, "edges": t.edges,
                       "contribution": t.contribution} for t in self.terms],
        }


def _falling_ratio(s: int, n: int, v: int) -> float:
    if v > s:
        return 0.0
    r = 1.0
    for i in range(v):
        r *= (s - i) / (n - i)
    return r


def low_degree_snr(n: int, s: int, rho: float, degree: int) -> SnrReport:
    """Exact degree-D SNR by enumerating the motif basis up to D/2 edges."""
    if not 1 <= s <= n:
        raise ParameterError(f"s must lie in [1, n], got s={s}, n={n}")
    if not 0.0 <= rho <= 1.0:
        raise ParameterError(f"rho must lie in [0, 1], got {rho}")
    if degree < 0:
        raise ParameterError(f"degree must be >= 0, got {degree}")
    if degree > 10:
        raise CapacityError(f"degree budgets above 10 need motif classes with "
                            f"more than 5 edges; got {degree}")
    family = enumerate_simple_no_isolated(degree // 2)
    terms = []
    for m in family:
        contrib = (rho ** (2 * m.edge_count)
                   * _falling_ratio(s, n, m.v) ** 2)
        if contrib != 0.0:
            terms.append(SnrTerm(m.v, m.edge_count, contrib))
    value = math.sqrt(math.fsum(t.contribution for t in terms))
    return SnrReport(n, s, rho, degree, value, tuple(terms))


def snr_closed_form_bound(n: int, s: int, rho: float, degree: int) -> float:
    """sqrt(1 + x^2 exp(x^2)) with x = e rho D / (2 log(n/s)); needs s < n."""
    if not 1 <= s < n:
        raise ParameterError(f"the bound needs 1 <= s < n, got s={s}, n={n}")
    if not 0.0 <= rho <= 1.0:
        raise ParameterError(f"rho must lie in [0, 1], got {rho}")
    if degree < 0:
        raise ParameterError(f"degree must be >= 0, got {degree}")
    x = math.e * rho * degree / (2.0 * math.log(n / s))
    x2 = x * x
    return math.sqrt(1.0 + x2 * math.exp(x2))
