"""Schrieffer-Wolff machinery on Pauli sums.

Pipeline: split a Hermitian qubit Hamiltonian into its diagonal part h0
(I/Z-only strings) and off-diagonal part hv, seed an ansatz from
eta = [h0, hv], close the ansatz string set under the double adjoint action
of h0, solve a real least-squares system for the generator coefficients,
and assemble the second-order effective Hamiltonian h0 + [S, hv] / 2.

Sign convention: the generator satisfies [S, h0] = -hv, which makes
h_eff = h0 + [S, hv] / 2 the second-order-correct truncation of
exp(S) H exp(-S) = sum_k ad_S^k(H) / k!.

The generator is constrained anti-Hermitian by construction: S is a real
combination of i * P_k over Hermitian string directions P_k, so the solve
is a real linear least-squares problem.  Ties among equally valid
generators (ad_h0 null directions) are resolved by the minimum-norm
solution, which keeps the output deterministic and, at exactly degenerate
points, zeroes the unreachable channels the same way the closed-form dense
generator does.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import PauliString, PauliSum, PauliTerm, commutator

__all__ = [
    "SplitHamiltonian",
    "AnsatzBasis",
    "SwtReport",
    "ClosureError",
    "GeneratorInfeasibleError",
    "split",
    "compute_eta",
    "build_ansatz",
    "solve_generator",
    "effective_hamiltonian",
    "bch_conjugate",
    "run_swt",
]

DEFAULT_TOL = 1e-10
DEFAULT_MAX_DEPTH = 4


@dataclass(frozen=True)
class SplitHamiltonian:
    """Diagonal / off-diagonal partition of a Hamiltonian; h0 + hv = input."""

    h0: PauliSum
    hv: PauliSum

    @property
    def n_qubits(self) -> int:
        return self.h0.n_qubits

    def total(self) -> PauliSum:
        return self.h0 + self.hv


class ClosureError(RuntimeError):
    """Ansatz string set failed to close within the allowed depth."""

    def __init__(self, depth: int, frontier_size: int):
        super().__init__(
            f"ansatz closure not reached at depth {depth} "
            f"({frontier_size} strings still open)"
        )
        self.depth = depth
        self.frontier_size = frontier_size


class GeneratorInfeasibleError(RuntimeError):
    """First-order elimination infeasible at the requested tolerance.

    Carries the achieved residual, the off-diagonal strings that could not
    be matched (degenerate energy denominators or insufficient closure
    depth), and the best-effort minimum-norm generator.
    """

    def __init__(self, residual: float, unmatched: tuple[PauliString, ...], generator: PauliSum):
        labels = ", ".join(s.label for s in unmatched) or "<none isolated>"
        super().__init__(
            f"first-order elimination infeasible: residual {residual:.3e}, "
            f"unmatched off-diagonal strings: {labels}"
        )
        self.residual = residual
        self.unmatched = unmatched
        self.generator = generator


@dataclass(frozen=True)
class AnsatzBasis:
    """Ordered candidate directions for the generator, with provenance."""

    directions: tuple[PauliString, ...]
    closure_depth: int
    built_from: str

    def __len__(self) -> int:
        return len(self.directions)


@dataclass(frozen=True)
class SwtReport:
    """Everything the transformation produced, plus diagnostics."""

    eta: PauliSum
    generator: PauliSum
    h_eff: PauliSum
    constraint_residual: float
    closure_depth: int
    degenerate_pairs: tuple = ()

    def to_json_dict(self, include_degeneracies: bool = False) -> dict:
        out = {
            "eta": self.eta.to_json_dict(),
            "generator": self.generator.to_json_dict(),
            "h_eff": self.h_eff.to_json_dict(),
            "residual": self.constraint_residual,
            "closure_depth": self.closure_depth,
        }
        if include_degeneracies:
            out["degenerate_pairs"] = [
                {"i": i, "j": j, "energy": e, "hv_re": c.real, "hv_im": c.imag}
                for i, j, e, c in self.degenerate_pairs
            ]
        return out


def split(h: PauliSum) -> SplitHamiltonian:
    """Partition by string diagonality; both parts stay canonical."""
    diag = [(t.string, t.coeff) for t in h.terms if t.string.is_diagonal]
    off = [(t.string, t.coeff) for t in h.terms if not t.string.is_diagonal]
    return SplitHamiltonian(
        PauliSum(h.n_qubits, diag, drop_tolerance=0.0),
        PauliSum(h.n_qubits, off, drop_tolerance=0.0),
    )


def compute_eta(s: SplitHamiltonian) -> PauliSum:
    """The ansatz seed [h0, hv]; every resulting string is off-diagonal."""
    return commutator(s.h0, s.hv)


def _single(string: PauliString) -> PauliSum:
    return PauliSum(string.n_qubits, [PauliTerm(string, 1.0 + 0j)])


def _hermitian_to_roundoff(s: PauliSum, rel_tol: float = 1e-12) -> bool:
    """Hermitian up to coefficient roundoff dust (mapping chains may leave ~1e-17)."""
    cut = rel_tol * s.max_abs_coeff()
    return all(abs(t.coeff.imag) <= cut for t in s.terms)


def build_ansatz(eta: PauliSum, h0: PauliSum, max_depth: int = DEFAULT_MAX_DEPTH) -> AnsatzBasis:
    """Close the eta string set under the double adjoint action of h0.

    Seed directions are the distinct strings of eta.  Each augmentation
    round adds the off-diagonal strings of [[P, h0], h0] for every frontier
    direction P: commuting with the diagonal h0 flips a direction-type
    string into hopping type and back, so new Z-dressed variants of the
    seed directions surface after two steps while the basis keeps the
    anti-Hermitian generator parity.  Raises :class:`ClosureError` if the
    set is still growing at ``max_depth``.
    """
    if max_depth < 1:
        raise ValueError(f"max_depth must be >= 1, got {max_depth}")
    directions: dict[PauliString, None] = {t.string: None for t in eta.terms}
    seed_size = len(directions)
    depth = 1
    frontier = list(directions)
    while frontier:
        new: dict[PauliString, None] = {}
        for p in frontier:
            mid = commutator(_single(p), h0)
            for q in mid.strings:
                back = commutator(_single(q), h0)
                for r in back.strings:
                    if not r.is_diagonal and r not in directions and r not in new:
                        new[r] = None
        if not new:
            break
        if depth >= max_depth:
            raise ClosureError(depth, len(new))
        directions.update(new)
        frontier = list(new)
        depth += 1
    return AnsatzBasis(
        tuple(directions),
        depth,
        f"eta[{seed_size}] closed at depth {depth}",
    )


def solve_generator(
    basis: AnsatzBasis,
    s: SplitHamiltonian,
    tol: float = DEFAULT_TOL,
) -> tuple[PauliSum, float]:
    """Least-squares generator over the ansatz directions.

    Writes S = sum_k (i a_k) P_k with real a_k (anti-Hermitian by
    construction) and minimizes || sum_k c_k [P_k, h0] + hv ||_2 in the
    Pauli-coefficient vector norm.  Since [P, h0] of Hermitian inputs has
    purely imaginary coefficients, the system is real: columns are the
    imaginary parts of the [P_k, h0] coefficient vectors over the union of
    occurring strings, the target is the hv coefficient vector, and
    numpy's lstsq returns the minimum-norm solution.

    Raises :class:`GeneratorInfeasibleError` when the achieved residual
    exceeds ``tol``, carrying the unmatched hv strings.
    """
    n = s.n_qubits
    if not (_hermitian_to_roundoff(s.h0) and _hermitian_to_roundoff(s.hv)):
        raise ValueError("solve_generator requires Hermitian h0 and hv")
    if not basis.directions:
        if not s.hv:
            return PauliSum.zero(n), 0.0
        residual = s.hv.coeff_norm()
        raise GeneratorInfeasibleError(residual, s.hv.strings, PauliSum.zero(n))

    columns = [commutator(_single(p), s.h0) for p in basis.directions]
    row_index: dict[tuple[int, int], int] = {}
    row_strings: list[PauliString] = []
    for col in columns:
        for st in col.strings:
            if st.sort_key not in row_index:
                row_index[st.sort_key] = len(row_strings)
                row_strings.append(st)
    for st in s.hv.strings:
        if st.sort_key not in row_index:
            row_index[st.sort_key] = len(row_strings)
            row_strings.append(st)

    m = np.zeros((len(row_strings), len(columns)))
    for k, col in enumerate(columns):
        for t in col.terms:
            m[row_index[t.string.sort_key], k] = t.coeff.imag
    b = np.zeros(len(row_strings))
    for t in s.hv.terms:
        b[row_index[t.string.sort_key]] = t.coeff.real

    a, *_ = np.linalg.lstsq(m, b, rcond=None)
    r = m @ a - b
    residual = float(np.linalg.norm(r))

    generator = PauliSum(
        n, ((p, 1j * a[k]) for k, p in enumerate(basis.directions))
    )
    if residual > tol:
        hv_keys = {st.sort_key for st in s.hv.strings}
        unmatched = tuple(
            st
            for st in row_strings
            if st.sort_key in hv_keys and abs(r[row_index[st.sort_key]]) > tol
        )
        raise GeneratorInfeasibleError(residual, unmatched, generator)
    return generator, residual


def effective_hamiltonian(s: SplitHamiltonian, generator: PauliSum) -> PauliSum:
    """Second-order effective Hamiltonian h0 + [S, hv] / 2."""
    return s.h0 + commutator(generator, s.hv).scale(0.5)


def bch_conjugate(h: PauliSum, generator: PauliSum, order: int) -> PauliSum:
    """Truncated conjugation sum_{k<=order} ad_S^k(h) / k! by nested commutators."""
    if order < 0:
        raise ValueError(f"order must be >= 0, got {order}")
    acc = h
    nested = h
    for k in range(1, order + 1):
        nested = commutator(generator, nested).scale(1.0 / k)
        acc = acc + nested
    return acc


def run_swt(
    h: PauliSum,
    tol: float = DEFAULT_TOL,
    max_depth: int = DEFAULT_MAX_DEPTH,
) -> SwtReport:
    """Full pipeline: split, eta, ansatz closure, solve, effective Hamiltonian.

    Propagates :class:`GeneratorInfeasibleError` (degenerate denominators)
    and :class:`ClosureError` unchanged; callers that want the best-effort
    generator can read it off the exception.
    """
    parts = split(h)
    eta = compute_eta(parts)
    basis = build_ansatz(eta, parts.h0, max_depth)
    generator, residual = solve_generator(basis, parts, tol)
    h_eff = effective_hamiltonian(parts, generator)
    return SwtReport(
        eta=eta,
        generator=generator,
        h_eff=h_eff,
        constraint_residual=residual,
        closure_depth=basis.closure_depth,
    )
