"""Exact arithmetic on weighted sums of Pauli strings.

An n-qubit Pauli string is encoded symplectically by two bit-masks held in
plain Python integers: bit i of ``x_bits`` / ``z_bits`` describes qubit i,

    (x, z) = (0, 0) -> I,  (1, 0) -> X,  (1, 1) -> Y,  (0, 1) -> Z.

No phase is stored in the string itself; every phase lives in the complex
coefficient of the term carrying the string.  Internally each single
multiplication is resolved as an exact power of i (an integer mod 4) which
is folded into the coefficient through a lookup table, so products such as
X*Z = -iY never pick up floating-point phase noise.

Conventions used throughout the package:

* qubit 0 is the lowest bit index and the leftmost character of a rendered
  label, e.g. ``"XZI"`` is X on qubit 0, Z on qubit 1;
* the dense matrix of a string is kron(P_0, P_1, ..., P_{n-1}) with qubit 0
  the outermost factor (see :mod:`swtkit.dense`);
* a ``PauliSum`` is always canonical: strings strictly sorted by
  (z_bits, x_bits), unique, with negligible coefficients pruned.

All values are immutable after construction and every operation is a pure
function, so objects can be shared freely between threads.  ``commutator``
merges pairwise products through sorted canonicalization, never through
accumulation order, so any parallel evaluation schedule would produce
bit-identical results to the sequential one.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Iterable, Iterator

__all__ = [
    "PauliString",
    "PauliTerm",
    "PauliSum",
    "multiply",
    "commutator",
    "canonicalize",
    "is_diagonal",
    "DEFAULT_REL_TOL",
]

DEFAULT_REL_TOL = 1e-12

_CHAR_TO_XZ = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_XZ_TO_CHAR = {v: k for k, v in _CHAR_TO_XZ.items()}

# Exact values of i**k for k mod 4; never compute 1j**k in floating point.
_I_POW = (1 + 0j, 1j, -1 + 0j, -1j)


@dataclass(frozen=True, slots=True)
class PauliString:
    """Tensor product of single-qubit Paulis in symplectic (x, z) encoding."""

    n_qubits: int
    x_bits: int
    z_bits: int

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be positive, got {self.n_qubits}")
        mask = (1 << self.n_qubits) - 1
        if self.x_bits & ~mask or self.z_bits & ~mask:
            raise ValueError("bit mask exceeds n_qubits")

    @classmethod
    def identity(cls, n_qubits: int) -> "PauliString":
        return cls(n_qubits, 0, 0)

    @classmethod
    def from_label(cls, label: str) -> "PauliString":
        """Parse a label like ``"XIZY"`` (qubit 0 first)."""
        if not label:
            raise ValueError("empty Pauli label")
        x = z = 0
        for i, ch in enumerate(label):
            try:
                xi, zi = _CHAR_TO_XZ[ch]
            except KeyError:
                raise ValueError(f"invalid Pauli character {ch!r} in {label!r}") from None
            x |= xi << i
            z |= zi << i
        return cls(len(label), x, z)

    @property
    def label(self) -> str:
        return "".join(
            _XZ_TO_CHAR[(self.x_bits >> i) & 1, (self.z_bits >> i) & 1]
            for i in range(self.n_qubits)
        )

    @property
    def is_identity(self) -> bool:
        return self.x_bits == 0 and self.z_bits == 0

    @property
    def is_diagonal(self) -> bool:
        """True iff the string is a product of I and Z only."""
        return self.x_bits == 0

    @property
    def weight(self) -> int:
        """Number of non-identity tensor factors."""
        return (self.x_bits | self.z_bits).bit_count()

    @property
    def sort_key(self) -> tuple[int, int]:
        """Total-order key for canonical sorting: (z_bits, x_bits)."""
        return (self.z_bits, self.x_bits)

    def commutes_with(self, other: "PauliString") -> bool:
        """Symplectic-product parity test: strings either commute or anticommute."""
        anti = (self.x_bits & other.z_bits).bit_count() + (self.z_bits & other.x_bits).bit_count()
        return anti % 2 == 0

    def __repr__(self) -> str:
        return f"PauliString({self.label!r})"


def _mul_strings(a: PauliString, b: PauliString) -> tuple[PauliString, int]:
    """Product a*b as (string, k) with the phase i**k, k exact mod 4.

    Derivation: with P(x,z) = i^(x.z) X^x Z^z per qubit, commuting the Z of
    the left factor past the X of the right one yields

        k = w(ax & az) + w(bx & bz) + 2*w(az & bx) - w(cx & cz)   (mod 4)

    where w is the population count and (cx, cz) the symplectic sum.
    """
    cx = a.x_bits ^ b.x_bits
    cz = a.z_bits ^ b.z_bits
    k = (
        (a.x_bits & a.z_bits).bit_count()
        + (b.x_bits & b.z_bits).bit_count()
        + 2 * (a.z_bits & b.x_bits).bit_count()
        - (cx & cz).bit_count()
    ) % 4
    return PauliString(a.n_qubits, cx, cz), k


@dataclass(frozen=True, slots=True)
class PauliTerm:
    """A Pauli string with a complex weight."""

    string: PauliString
    coeff: complex

    @property
    def n_qubits(self) -> int:
        return self.string.n_qubits


def multiply(a: PauliTerm, b: PauliTerm) -> PauliTerm:
    """Exact matrix product of two weighted strings.

    The resulting coefficient is coeff_a * coeff_b * i**k with k tracked as
    an integer mod 4 and folded in through a lookup table.
    """
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"qubit-count mismatch: {a.n_qubits} vs {b.n_qubits}")
    string, k = _mul_strings(a.string, b.string)
    return PauliTerm(string, a.coeff * b.coeff * _I_POW[k])


def is_diagonal(s: PauliString) -> bool:
    """True iff ``s`` is diagonal in the computational basis (I/Z only)."""
    return s.is_diagonal


def _merge(
    n_qubits: int,
    items: Iterable[tuple[PauliString, complex]],
    drop_tolerance: float | None,
    rel_tol: float,
) -> tuple[PauliTerm, ...]:
    """Sort, combine like strings, prune.  The one canonicalization path."""
    acc: dict[tuple[int, int], complex] = {}
    strings: dict[tuple[int, int], PauliString] = {}
    for s, c in items:
        if s.n_qubits != n_qubits:
            raise ValueError(f"qubit-count mismatch: {s.n_qubits} vs {n_qubits}")
        key = s.sort_key
        acc[key] = acc.get(key, 0j) + complex(c)
        strings.setdefault(key, s)
    if drop_tolerance is None:
        largest = max((abs(c) for c in acc.values()), default=0.0)
        cut = rel_tol * largest
    else:
        cut = float(drop_tolerance)
    return tuple(
        PauliTerm(strings[key], acc[key])
        for key in sorted(acc)
        if abs(acc[key]) > cut
    )


class PauliSum:
    """Canonical complex-weighted sum of Pauli strings on a fixed register.

    The term tuple is strictly sorted by (z_bits, x_bits), strings are
    unique, and coefficients below the pruning threshold are dropped.  With
    no explicit ``drop_tolerance`` the threshold is relative,
    ``DEFAULT_REL_TOL`` times the largest |coeff|, so rescaling all
    parameters never changes the term structure.
    """

    __slots__ = ("n_qubits", "terms")

    def __init__(
        self,
        n_qubits: int,
        terms: Iterable[PauliTerm | tuple[PauliString, complex]] = (),
        drop_tolerance: float | None = None,
    ):
        if n_qubits < 1:
            raise ValueError(f"n_qubits must be positive, got {n_qubits}")
        pairs = []
        for t in terms:
            if isinstance(t, PauliTerm):
                pairs.append((t.string, t.coeff))
            else:
                s, c = t
                pairs.append((s, c))
        object.__setattr__(self, "n_qubits", n_qubits)
        object.__setattr__(self, "terms", _merge(n_qubits, pairs, drop_tolerance, DEFAULT_REL_TOL))

    def __setattr__(self, name, value):
        raise AttributeError("PauliSum is immutable")

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n_qubits: int) -> "PauliSum":
        return cls(n_qubits)

    @classmethod
    def from_labels(cls, n_qubits: int, entries: Iterable[tuple[str, complex]]) -> "PauliSum":
        return cls(n_qubits, ((PauliString.from_label(lbl), c) for lbl, c in entries))

    # -- container protocol ------------------------------------------------

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[PauliTerm]:
        return iter(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PauliSum):
            return NotImplemented
        return self.n_qubits == other.n_qubits and self.terms == other.terms

    def __hash__(self):
        return hash((self.n_qubits, self.terms))

    def coeff(self, s: PauliString) -> complex:
        """Coefficient of string ``s`` (0 if absent)."""
        for t in self.terms:
            if t.string == s:
                return t.coeff
        return 0j

    @property
    def strings(self) -> tuple[PauliString, ...]:
        return tuple(t.string for t in self.terms)

    # -- algebra -----------------------------------------------------------

    def _require_same_register(self, other: "PauliSum"):
        if self.n_qubits != other.n_qubits:
            raise ValueError(f"qubit-count mismatch: {self.n_qubits} vs {other.n_qubits}")

    def __add__(self, other: "PauliSum") -> "PauliSum":
        self._require_same_register(other)
        return PauliSum(self.n_qubits, list(self.terms) + list(other.terms))

    def __sub__(self, other: "PauliSum") -> "PauliSum":
        return self + (-other)

    def __neg__(self) -> "PauliSum":
        return self.scale(-1)

    def scale(self, factor: complex) -> "PauliSum":
        return PauliSum(self.n_qubits, ((t.string, t.coeff * factor) for t in self.terms))

    def __mul__(self, other):
        if isinstance(other, PauliSum):
            self._require_same_register(other)
            products = []
            for ta in self.terms:
                for tb in other.terms:
                    s, k = _mul_strings(ta.string, tb.string)
                    products.append((s, ta.coeff * tb.coeff * _I_POW[k]))
            return PauliSum(self.n_qubits, products)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def adjoint(self) -> "PauliSum":
        """Hermitian conjugate (strings are Hermitian; conjugate coefficients)."""
        return PauliSum(self.n_qubits, ((t.string, t.coeff.conjugate()) for t in self.terms))

    @property
    def is_hermitian(self) -> bool:
        return all(t.coeff.imag == 0.0 for t in self.terms)

    @property
    def is_anti_hermitian(self) -> bool:
        return all(t.coeff.real == 0.0 for t in self.terms)

    @property
    def is_diagonal(self) -> bool:
        return all(t.string.is_diagonal for t in self.terms)

    def coeff_norm(self) -> float:
        """2-norm of the coefficient vector."""
        return math.sqrt(sum(abs(t.coeff) ** 2 for t in self.terms))

    def max_abs_coeff(self) -> float:
        return max((abs(t.coeff) for t in self.terms), default=0.0)

    def identity_coefficient(self) -> complex:
        """Weight of the all-identity string (the trace part / 2^n)."""
        return self.coeff(PauliString.identity(self.n_qubits))

    def without_identity(self) -> "PauliSum":
        """The sum with the all-identity term removed (traceless part)."""
        return PauliSum(
            self.n_qubits,
            ((t.string, t.coeff) for t in self.terms if not t.string.is_identity),
        )

    # -- rendering / serialization ----------------------------------------

    def render_text(self) -> str:
        """One ``(re,im) * STRING`` line per term, 17 significant digits."""
        return "\n".join(
            f"({t.coeff.real:.17g},{t.coeff.imag:.17g}) * {t.string.label}"
            for t in self.terms
        )

    def to_json_dict(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "terms": [
                {"pauli": t.string.label, "re": t.coeff.real, "im": t.coeff.imag}
                for t in self.terms
            ],
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_json_dict(), indent=indent)

    @classmethod
    def from_json_dict(cls, data: dict) -> "PauliSum":
        try:
            n = int(data["n_qubits"])
            raw = data["terms"]
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed PauliSum JSON: {exc}") from exc
        entries = []
        for item in raw:
            label = item["pauli"]
            if len(label) != n:
                raise ValueError(
                    f"pauli label {label!r} has length {len(label)}, expected {n}"
                )
            entries.append((PauliString.from_label(label), complex(item["re"], item["im"])))
        return cls(n, entries, drop_tolerance=0.0)

    @classmethod
    def from_json(cls, text: str) -> "PauliSum":
        return cls.from_json_dict(json.loads(text))

    def __repr__(self) -> str:
        if not self.terms:
            return f"PauliSum({self.n_qubits}, <empty>)"
        body = " + ".join(f"({t.coeff:g})*{t.string.label}" for t in self.terms[:6])
        if len(self.terms) > 6:
            body += f" + ... [{len(self.terms)} terms]"
        return f"PauliSum({body})"


def canonicalize(a: PauliSum, drop_tolerance: float | None = None) -> PauliSum:
    """Re-canonicalize ``a``: sorted, merged, pruned; idempotent.

    ``drop_tolerance`` is an absolute threshold when given; when omitted the
    default relative rule (1e-12 of the largest |coeff|) applies.
    """
    if drop_tolerance is not None and drop_tolerance < 0:
        raise ValueError("drop_tolerance must be >= 0")
    return PauliSum(a.n_qubits, a.terms, drop_tolerance=drop_tolerance)


def commutator(a: PauliSum, b: PauliSum) -> PauliSum:
    """Canonical [a, b] = ab - ba.

    Each string pair either commutes (skipped) or anticommutes, in which
    case it contributes 2 * product; the phase bookkeeping stays in exact
    mod-4 integer arithmetic until folded into the coefficient.
    """
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"qubit-count mismatch: {a.n_qubits} vs {b.n_qubits}")
    out = []
    for ta in a.terms:
        for tb in b.terms:
            if ta.string.commutes_with(tb.string):
                continue
            s, k = _mul_strings(ta.string, tb.string)
            out.append((s, 2 * ta.coeff * tb.coeff * _I_POW[k]))
    return PauliSum(a.n_qubits, out)
