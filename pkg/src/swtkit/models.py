"""Single-impurity Anderson model builders.

Two parameterizations are provided:

* ``siam_two_site`` — the minimal model with one impurity level and one
  conduction level per spin,

      H = U n_{imp,dn} n_{imp,up} - mu sum_s n_{imp,s}
          + eps2 sum_s n_{bath,s} + V sum_s (c^dag_{imp,s} c_{bath,s} + h.c.)

* ``siam_chain`` — the impurity hybridized with N bath levels,

      H = sum_{i=1..N,s} V_i (c^dag_{0,s} c_{i,s} + h.c.)
          + U n_{0,dn} n_{0,up} + sum_{i=0..N,s} (eps_i - mu) n_{i,s}

Mode ordering is spin-blocked: all spin-up modes first with the impurity at
mode 0, then all spin-down modes in the same site order.  For the two-site
model that is (imp_up, bath_up, imp_dn, bath_dn) = (0, 1, 2, 3); for the
chain, site i carries modes i (up) and N+1+i (down).  The two builders keep
their distinct on-site parameterizations on purpose (impurity via -mu and
bath via eps2 in the two-site form, a uniform eps_i - mu in the chain form)
so each matches its conventional written form term for term.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .fermions import FermionOperator

__all__ = ["SiamParams", "siam_two_site", "siam_chain", "model_from_config"]


@dataclass(frozen=True)
class SiamParams:
    """Anderson-impurity parameters.

    ``eps`` holds the single bath level for the two-site model, and
    (impurity on-site, bath levels 1..N) for the chain model; ``V`` holds
    one hybridization per bath level in both cases.
    """

    n_bath: int
    U: float
    mu: float
    eps: tuple[float, ...] = field(default_factory=tuple)
    V: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.n_bath < 1:
            raise ValueError(f"n_bath must be >= 1, got {self.n_bath}")
        object.__setattr__(self, "eps", tuple(float(e) for e in self.eps))
        object.__setattr__(self, "V", tuple(float(v) for v in self.V))
        if len(self.V) != self.n_bath:
            raise ValueError(
                f"expected {self.n_bath} hybridizations, got {len(self.V)}"
            )


def _number(mode: int) -> list[tuple[int, bool]]:
    return [(mode, True), (mode, False)]


def siam_two_site(p: SiamParams) -> FermionOperator:
    """Two-site (4-mode) impurity model; requires n_bath == 1 and eps = (eps2,)."""
    if p.n_bath != 1:
        raise ValueError(f"two-site model requires n_bath == 1, got {p.n_bath}")
    if len(p.eps) != 1:
        raise ValueError(f"two-site model takes a single bath level, got {len(p.eps)}")
    eps2 = p.eps[0]
    v = p.V[0]
    imp_up, bath_up, imp_dn, bath_dn = 0, 1, 2, 3
    terms = [
        (p.U, _number(imp_dn) + _number(imp_up)),
        (-p.mu, _number(imp_up)),
        (-p.mu, _number(imp_dn)),
        (eps2, _number(bath_up)),
        (eps2, _number(bath_dn)),
        (v, [(imp_up, True), (bath_up, False)]),
        (v, [(bath_up, True), (imp_up, False)]),
        (v, [(imp_dn, True), (bath_dn, False)]),
        (v, [(bath_dn, True), (imp_dn, False)]),
    ]
    return FermionOperator.build(4, terms)


def siam_chain(p: SiamParams) -> FermionOperator:
    """Impurity + N bath levels per spin on 2(N+1) modes; eps = (eps_0 .. eps_N)."""
    n = p.n_bath
    if len(p.eps) != n + 1:
        raise ValueError(
            f"chain model takes impurity + {n} bath levels ({n + 1} values), got {len(p.eps)}"
        )
    n_modes = 2 * (n + 1)

    def up(site: int) -> int:
        return site

    def down(site: int) -> int:
        return n + 1 + site

    terms = []
    for i in range(1, n + 1):
        vi = p.V[i - 1]
        for spin_mode in (up, down):
            terms.append((vi, [(spin_mode(0), True), (spin_mode(i), False)]))
            terms.append((vi, [(spin_mode(i), True), (spin_mode(0), False)]))
    terms.append((p.U, _number(down(0)) + _number(up(0))))
    for i in range(n + 1):
        onsite = p.eps[i] - p.mu
        terms.append((onsite, _number(up(i))))
        terms.append((onsite, _number(down(i))))
    return FermionOperator.build(n_modes, terms)


_BUILDERS = {"siam2": siam_two_site, "siam_chain": siam_chain}


def model_from_config(config: dict) -> FermionOperator:
    """Build a model from its JSON config dict.

    Schema: ``{"model": "siam2"|"siam_chain", "U": ..., "mu": ...,
    "eps": [...], "V": [...]}``.
    """
    try:
        kind = config["model"]
    except (KeyError, TypeError) as exc:
        raise ValueError("config must carry a 'model' key") from exc
    try:
        builder = _BUILDERS[kind]
    except KeyError:
        raise ValueError(
            f"unknown model {kind!r}; expected one of {sorted(_BUILDERS)}"
        ) from None
    try:
        vs = tuple(float(v) for v in config["V"])
        params = SiamParams(
            n_bath=len(vs) if vs else 1,
            U=float(config["U"]),
            mu=float(config["mu"]),
            eps=tuple(float(e) for e in config["eps"]),
            V=vs,
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed model config: {exc}") from exc
    return builder(params)
