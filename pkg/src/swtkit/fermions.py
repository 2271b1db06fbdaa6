"""Second-quantized operators and the Jordan-Wigner mapping to Pauli sums.

A ``FermionOperator`` is a sum of weighted products of creation/annihilation
factors over indexed modes.  Factors are kept in the user-given order and
mapped one by one — no normal ordering is ever applied, so the written order
is semantically significant.

The mapping sends mode j to qubit j with a Z string on all *lower* modes:

    c_j      ->  Z_0 ... Z_{j-1} (X_j + i Y_j) / 2
    c_j^dag  ->  Z_0 ... Z_{j-1} (X_j - i Y_j) / 2

which makes the number operator come out as n_j = (I - Z_j) / 2, i.e. the
occupied state is the qubit |1> state.  Any consistent string direction
reproduces the same nearest-neighbour hopping expressions; this one is fixed
here so that multi-mode strings are reproducible.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .pauli import PauliString, PauliSum, _I_POW, _mul_strings

__all__ = ["FermionOperator", "FermionTerm", "jw_map"]


@dataclass(frozen=True, slots=True)
class FermionTerm:
    """coeff * product of (mode, dagger) factors, leftmost factor first."""

    coeff: complex
    factors: tuple[tuple[int, bool], ...]

    def conjugated(self) -> "FermionTerm":
        return FermionTerm(
            self.coeff.conjugate(),
            tuple((mode, not dag) for mode, dag in reversed(self.factors)),
        )


@dataclass(frozen=True, slots=True)
class FermionOperator:
    """Sum of products of creation/annihilation operators on n_modes modes."""

    n_modes: int
    terms: tuple[FermionTerm, ...]

    def __post_init__(self):
        if self.n_modes < 1:
            raise ValueError(f"n_modes must be positive, got {self.n_modes}")
        for t in self.terms:
            for mode, _ in t.factors:
                if not 0 <= mode < self.n_modes:
                    raise ValueError(
                        f"mode index {mode} out of range for {self.n_modes} modes"
                    )

    @classmethod
    def build(cls, n_modes: int, terms) -> "FermionOperator":
        """Construct from (coeff, [(mode, dagger), ...]) pairs."""
        return cls(
            n_modes,
            tuple(
                FermionTerm(complex(c), tuple((int(m), bool(d)) for m, d in fs))
                for c, fs in terms
            ),
        )

    def __add__(self, other: "FermionOperator") -> "FermionOperator":
        if self.n_modes != other.n_modes:
            raise ValueError("mode-count mismatch")
        return FermionOperator(self.n_modes, self.terms + other.terms)

    def scale(self, factor: complex) -> "FermionOperator":
        return FermionOperator(
            self.n_modes,
            tuple(FermionTerm(t.coeff * factor, t.factors) for t in self.terms),
        )

    # -- serialization -----------------------------------------------------

    def to_json_dict(self) -> dict:
        return {
            "n_modes": self.n_modes,
            "terms": [
                {
                    "coeff": [t.coeff.real, t.coeff.imag],
                    "ops": [[m, "cdag" if d else "c"] for m, d in t.factors],
                }
                for t in self.terms
            ],
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_json_dict(), indent=indent)

    @classmethod
    def from_json_dict(cls, data: dict) -> "FermionOperator":
        try:
            n = int(data["n_modes"])
            raw = data["terms"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed fermion-operator JSON: {exc}") from exc
        terms = []
        for item in raw:
            re, im = item["coeff"]
            factors = []
            for mode, kind in item["ops"]:
                if kind not in ("c", "cdag"):
                    raise ValueError(f"unknown factor kind {kind!r}")
                factors.append((int(mode), kind == "cdag"))
            terms.append((complex(re, im), factors))
        return cls.build(n, terms)

    @classmethod
    def from_json(cls, text: str) -> "FermionOperator":
        return cls.from_json_dict(json.loads(text))


def _ladder_pauli(n_qubits: int, mode: int, dagger: bool) -> list[tuple[PauliString, complex]]:
    """The two-string expansion of one ladder factor under the mapping."""
    zstring = (1 << mode) - 1
    x_part = PauliString(n_qubits, 1 << mode, zstring)
    y_part = PauliString(n_qubits, 1 << mode, zstring | (1 << mode))
    sign = -0.5j if dagger else 0.5j
    return [(x_part, 0.5 + 0j), (y_part, sign)]


def jw_map(op: FermionOperator) -> PauliSum:
    """Jordan-Wigner image of ``op`` as a canonical ``PauliSum``.

    Each term's ladder factors are expanded into their two-string images and
    multiplied left to right with exact phase tracking; the final sum is
    canonicalized once.
    """
    n = op.n_modes
    collected: list[tuple[PauliString, complex]] = []
    identity = PauliString.identity(n)
    for term in op.terms:
        # (string, coeff) expansion of the running product.
        product: list[tuple[PauliString, complex]] = [(identity, term.coeff)]
        for mode, dagger in term.factors:
            factor = _ladder_pauli(n, mode, dagger)
            nxt = []
            for s_acc, c_acc in product:
                for s_f, c_f in factor:
                    s, k = _mul_strings(s_acc, s_f)
                    nxt.append((s, c_acc * c_f * _I_POW[k]))
            product = nxt
        collected.extend(product)
    return PauliSum(n, collected)
