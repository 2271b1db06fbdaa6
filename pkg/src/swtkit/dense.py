"""Independent dense-matrix verification of the Pauli-algebra pipeline.

Everything here goes through explicit 2^n x 2^n complex matrices and
numpy/scipy linear algebra, deliberately avoiding the string arithmetic of
:mod:`swtkit.pauli` so the two routes can cross-check each other.  The
tensor convention matches the package: qubit 0 is the outermost kron factor,
i.e. the most significant bit of a computational-basis index.  Sizes are
capped at 14 qubits (dense feasibility); the exponential-conjugation helper
is intended for n <= 10.

``fermion_matrix`` builds the matrix of a second-quantized operator directly
from occupation-number bit algebra (bit i of a basis index = occupation of
mode i, mode 0 most significant, sign from the parity of occupied lower
modes).  It shares no code with the Jordan-Wigner path and serves as its
independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .fermions import FermionOperator
from .pauli import PauliString, PauliSum

__all__ = [
    "MAX_DENSE_QUBITS",
    "to_matrix",
    "pauli_decompose",
    "diagonal_energies",
    "exact_generator_dense",
    "DegeneracyReport",
    "spectral_compare",
    "SpectralReport",
    "conjugate_exact",
    "offdiag_norm",
    "fermion_matrix",
]

MAX_DENSE_QUBITS = 14

_SINGLE = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _check_size(n_qubits: int):
    if n_qubits > MAX_DENSE_QUBITS:
        raise ValueError(
            f"{n_qubits} qubits exceeds the dense feasibility cap of {MAX_DENSE_QUBITS}"
        )


def _string_matrix(s: PauliString) -> np.ndarray:
    m = np.eye(1, dtype=complex)
    for ch in s.label:
        m = np.kron(m, _SINGLE[ch])
    return m


def to_matrix(a: PauliSum) -> np.ndarray:
    """Dense matrix sum(coeff * P_0 x P_1 x ... x P_{n-1}), qubit 0 outermost."""
    _check_size(a.n_qubits)
    dim = 1 << a.n_qubits
    m = np.zeros((dim, dim), dtype=complex)
    for t in a.terms:
        m += t.coeff * _string_matrix(t.string)
    return m


# Matrix-element tensor T[p, r, c] for p in (I, X, Y, Z); used by the
# decomposition transform below.
_BASIS_TENSOR = np.stack([_SINGLE["I"], _SINGLE["X"], _SINGLE["Y"], _SINGLE["Z"]])
_P_TO_XZ = ((0, 0), (1, 0), (1, 1), (0, 1))


def pauli_decompose(m: np.ndarray, rel_tol: float | None = None) -> PauliSum:
    """Expand a 2^n x 2^n matrix over the Pauli basis: coeff = tr(P m) / 2^n.

    Implemented as a per-qubit tensor contraction (O(n 4^n) work instead of
    8^n), which is just the trace formula evaluated one factor at a time.
    Coefficients are pruned with the canonical relative rule, so numerically
    zero entries of an otherwise structured matrix do not survive.
    """
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    dim = m.shape[0]
    n = dim.bit_length() - 1
    if dim != 1 << n or dim < 2:
        raise ValueError(f"dimension {dim} is not a power of two >= 2")
    _check_size(n)

    # Axes (r_0..r_{n-1}, c_0..c_{n-1}); contract qubit q over (r_q, c_q)
    # against conj(T), moving the resulting Pauli axis to the back.
    a = m.reshape((2,) * (2 * n))
    t_conj = np.conj(_BASIS_TENSOR)
    for q in range(n):
        a = np.moveaxis(a, n - q, 1)
        a = np.tensordot(t_conj, a, axes=([1, 2], [0, 1]))
        a = np.moveaxis(a, 0, -1)
    coeffs = a / dim

    flat = coeffs.reshape(-1)
    largest = float(np.max(np.abs(flat))) if flat.size else 0.0
    cut = (1e-12 if rel_tol is None else rel_tol) * largest
    entries = []
    for idx in np.nonzero(np.abs(flat) > cut)[0]:
        digits = idx
        x = z = 0
        # Flattened index is row-major over (p_0 .. p_{n-1}).
        for q in reversed(range(n)):
            xi, zi = _P_TO_XZ[digits & 3]
            digits >>= 2
            x |= xi << q
            z |= zi << q
        entries.append((PauliString(n, x, z), complex(flat[idx])))
    return PauliSum(n, entries, drop_tolerance=0.0)


def diagonal_energies(h0: PauliSum) -> np.ndarray:
    """Diagonal of a Z-only sum, as a real vector over basis indices.

    A Z-string contributes coeff * (-1)^popcount(index & mask) with the mask
    carrying qubit i at bit position n-1-i (qubit 0 = most significant).
    """
    if not h0.is_diagonal:
        raise ValueError("diagonal_energies requires an I/Z-only sum")
    n = h0.n_qubits
    _check_size(n)
    idx = np.arange(1 << n, dtype=np.int64)
    energies = np.zeros(1 << n, dtype=float)
    for t in h0.terms:
        mask = 0
        for i in range(n):
            if (t.string.z_bits >> i) & 1:
                mask |= 1 << (n - 1 - i)
        v = idx & mask
        for shift in (32, 16, 8, 4, 2, 1):
            v ^= v >> shift
        sign = 1.0 - 2.0 * (v & 1)
        energies += t.coeff.real * sign
    return energies


@dataclass(frozen=True)
class DegeneracyReport:
    """Basis-state pairs that obstruct first-order elimination.

    Each entry is (i, j, E, hv_ij) with |E_i - E_j| below the degeneracy
    threshold and a nonzero off-diagonal coupling between them.
    """

    pairs: tuple[tuple[int, int, float, complex], ...]

    def __bool__(self) -> bool:
        return bool(self.pairs)

    def to_json_list(self) -> list:
        return [
            {"i": i, "j": j, "energy": e, "hv_re": c.real, "hv_im": c.imag}
            for i, j, e, c in self.pairs
        ]


def exact_generator_dense(
    split,
    degeneracy_tol: float | None = None,
    coupling_tol: float | None = None,
) -> tuple[np.ndarray, DegeneracyReport]:
    """Closed-form generator from energy denominators.

    S_ij = (Hv)_ij / (E_i - E_j) wherever |E_i - E_j| exceeds the degeneracy
    threshold, zero otherwise; offending coupled pairs are reported rather
    than fatal.  The default threshold is 1e-9 times the spectral range of
    h0 so parameter rescaling is harmless.  On nondegenerate support the
    result satisfies [S, H0] = -Hv exactly.
    """
    h0, hv = split.h0, split.hv
    energies = diagonal_energies(h0)
    hv_mat = to_matrix(hv)

    if degeneracy_tol is None:
        spread = float(energies.max() - energies.min()) if energies.size else 0.0
        degeneracy_tol = 1e-9 * spread
    if coupling_tol is None:
        largest = float(np.max(np.abs(hv_mat))) if hv_mat.size else 0.0
        coupling_tol = 1e-12 * largest

    denom = energies[:, None] - energies[None, :]
    degenerate = np.abs(denom) <= degeneracy_tol
    s = np.zeros_like(hv_mat)
    ok = ~degenerate
    s[ok] = hv_mat[ok] / denom[ok]

    pairs = []
    blocked = degenerate & (np.abs(hv_mat) > coupling_tol)
    for i, j in zip(*np.nonzero(blocked)):
        if i < j:
            pairs.append((int(i), int(j), float(energies[i]), complex(hv_mat[i, j])))
    return s, DegeneracyReport(tuple(pairs))


@dataclass(frozen=True)
class SpectralReport:
    """Sorted eigenvalues of two operators and their per-level gaps."""

    eigenvalues_a: tuple[float, ...]
    eigenvalues_b: tuple[float, ...]
    deltas: tuple[float, ...]
    max_delta: float

    def to_json_dict(self) -> dict:
        return {
            "eigenvalues_a": list(self.eigenvalues_a),
            "eigenvalues_b": list(self.eigenvalues_b),
            "deltas": list(self.deltas),
            "max_delta": self.max_delta,
        }


def _sector_indices(n_qubits: int, occupation: int) -> np.ndarray:
    idx = np.arange(1 << n_qubits, dtype=np.int64)
    counts = np.array([int(i).bit_count() for i in idx])
    return idx[counts == occupation]


def spectral_compare(
    h: PauliSum,
    h_eff: PauliSum,
    occupation: int | None = None,
    lowest: int | None = None,
) -> SpectralReport:
    """Per-level eigenvalue gaps between two operators.

    With ``occupation`` given, both matrices are restricted to the
    basis states with that many set bits (the particle-number sector of a
    number-conserving model) before diagonalization.  ``lowest`` limits the
    max-gap statistic to the lowest k levels.
    """
    if h.n_qubits != h_eff.n_qubits:
        raise ValueError("qubit-count mismatch")
    _check_size(h.n_qubits)
    ma, mb = to_matrix(h), to_matrix(h_eff)
    if occupation is not None:
        sel = _sector_indices(h.n_qubits, occupation)
        ma = ma[np.ix_(sel, sel)]
        mb = mb[np.ix_(sel, sel)]
    ea = np.linalg.eigvalsh(ma)
    eb = np.linalg.eigvalsh(mb)
    deltas = np.abs(ea - eb)
    k = len(deltas) if lowest is None else min(lowest, len(deltas))
    max_delta = float(np.max(deltas[:k])) if k else 0.0
    return SpectralReport(
        tuple(float(x) for x in ea),
        tuple(float(x) for x in eb),
        tuple(float(x) for x in deltas),
        max_delta,
    )


def conjugate_exact(h: PauliSum, generator: PauliSum) -> np.ndarray:
    """exp(S) H exp(-S) on dense matrices (scipy scaling-and-squaring expm)."""
    if h.n_qubits > 10:
        raise ValueError("exponential conjugation is limited to 10 qubits")
    s = to_matrix(generator)
    u = expm(s)
    u_inv = expm(-s)
    return u @ to_matrix(h) @ u_inv


def offdiag_norm(m: np.ndarray, ord=2) -> float:
    """Norm of the off-diagonal (computational-basis) part of a matrix."""
    return float(np.linalg.norm(m - np.diag(np.diag(m)), ord))


def fermion_matrix(op: FermionOperator) -> np.ndarray:
    """Occupation-number matrix of a second-quantized operator.

    Basis state index b encodes occupations with mode 0 at the most
    significant bit; a ladder factor on mode j picks up the sign
    (-1)^(number of occupied modes below j).  Independent of the
    Jordan-Wigner route by construction.
    """
    n = op.n_modes
    _check_size(n)
    dim = 1 << n
    m = np.zeros((dim, dim), dtype=complex)

    def bitpos(mode: int) -> int:
        return n - 1 - mode

    for term in op.terms:
        for b in range(dim):
            state = b
            amp = term.coeff
            dead = False
            for mode, dagger in reversed(term.factors):
                pos = bitpos(mode)
                occupied = (state >> pos) & 1
                if dagger == bool(occupied):
                    dead = True
                    break
                lower_mask = ((1 << n) - 1) ^ ((1 << (pos + 1)) - 1)
                parity = (state & lower_mask).bit_count() & 1
                if parity:
                    amp = -amp
                state ^= 1 << pos
            if not dead:
                m[state, b] += amp
    return m
