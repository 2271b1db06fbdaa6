"""Engine tests: split, eta seed, ansatz closure, generator solve, h_eff, BCH."""

import numpy as np
import pytest

from swtkit.dense import (
    conjugate_exact,
    exact_generator_dense,
    pauli_decompose,
    to_matrix,
)
from swtkit.fermions import jw_map
from swtkit.models import SiamParams, siam_chain, siam_two_site
from swtkit.pauli import PauliString, PauliSum, commutator
from swtkit.swt import (
    ClosureError,
    GeneratorInfeasibleError,
    bch_conjugate,
    build_ansatz,
    compute_eta,
    effective_hamiltonian,
    run_swt,
    solve_generator,
    split,
)

GOLDEN = SiamParams(n_bath=1, U=4.0, mu=1.0, eps=(0.5,), V=(0.2,))
# mu + eps2 = 0 makes one elimination channel exactly degenerate and the
# generator collapse to the scalar +-V/4U pattern.
SYMMETRIC = SiamParams(n_bath=1, U=4.0, mu=0.3, eps=(-0.3,), V=(0.2,))

ETA_STRINGS = {
    "YXII", "XYII", "YXZI", "XYZI",  # spin-up block, bare and Z2-dressed
    "IIYX", "IIXY", "ZIYX", "ZIXY",  # spin-down block, bare and Z0-dressed
}


def golden_hamiltonian():
    return jw_map(siam_two_site(GOLDEN))


def lbl(s):
    return PauliString.from_label(s)


class TestSplit:
    def test_golden_partition(self):
        parts = split(golden_hamiltonian())
        assert {t.string.label for t in parts.h0.terms} == {
            "IIII", "ZIII", "IZII", "IIZI", "IIIZ", "ZIZI"
        }
        assert {t.string.label for t in parts.hv.terms} == {"XXII", "YYII", "IIXX", "IIYY"}

    def test_reconstruction(self):
        h = golden_hamiltonian()
        parts = split(h)
        assert parts.h0 + parts.hv == h

    def test_fully_diagonal(self):
        h = PauliSum.from_labels(2, [("ZZ", 1.0), ("ZI", 0.5)])
        parts = split(h)
        assert not parts.hv
        assert parts.h0 == h

    def test_fully_offdiagonal(self):
        h = PauliSum.from_labels(2, [("XX", 0.5), ("YY", 0.5)])
        parts = split(h)
        assert not parts.h0
        assert parts.hv == h


class TestEta:
    def test_empty_hv_gives_empty_eta(self):
        parts = split(PauliSum.from_labels(2, [("ZZ", 1.0)]))
        assert not compute_eta(parts)

    def test_string_set(self):
        eta = compute_eta(split(golden_hamiltonian()))
        assert {s.label for s in eta.strings} == ETA_STRINGS

    def test_golden_coefficients(self):
        # iUV/4 on the dressed strings, iV(mu/2 - U/4 + eps2/2) on the bare.
        u, mu, eps2, v = GOLDEN.U, GOLDEN.mu, GOLDEN.eps[0], GOLDEN.V[0]
        dressed = u * v / 4
        bare = v * (mu / 2 - u / 4 + eps2 / 2)
        eta = compute_eta(split(golden_hamiltonian()))
        assert eta.coeff(lbl("YXZI")) == pytest.approx(1j * dressed, abs=1e-12)
        assert eta.coeff(lbl("XYZI")) == pytest.approx(-1j * dressed, abs=1e-12)
        assert eta.coeff(lbl("ZIYX")) == pytest.approx(1j * dressed, abs=1e-12)
        assert eta.coeff(lbl("YXII")) == pytest.approx(1j * bare, abs=1e-12)
        assert eta.coeff(lbl("XYII")) == pytest.approx(-1j * bare, abs=1e-12)

    def test_against_dense_commutator(self):
        parts = split(golden_hamiltonian())
        eta = compute_eta(parts)
        m0, mv = to_matrix(parts.h0), to_matrix(parts.hv)
        oracle = pauli_decompose(m0 @ mv - mv @ m0)
        assert (eta - oracle).max_abs_coeff() <= 1e-10

    def test_all_strings_offdiagonal(self):
        eta = compute_eta(split(golden_hamiltonian()))
        assert not any(s.is_diagonal for s in eta.strings)


class TestAnsatz:
    def test_two_site_closure_is_the_eta_set(self):
        parts = split(golden_hamiltonian())
        basis = build_ansatz(compute_eta(parts), parts.h0)
        assert {s.label for s in basis.directions} == ETA_STRINGS
        assert len(basis) == 8
        assert basis.closure_depth == 1

    def test_empty_eta_gives_empty_basis(self):
        h0 = PauliSum.from_labels(2, [("ZZ", 1.0)])
        basis = build_ansatz(PauliSum.zero(2), h0)
        assert len(basis) == 0

    def test_chain_direction_patterns(self):
        p = SiamParams(n_bath=3, U=4.0, mu=1.0, eps=(0.0, 0.5, -0.7, 1.1), V=(0.2, 0.15, 0.1))
        parts = split(jw_map(siam_chain(p)))
        basis = build_ansatz(compute_eta(parts), parts.h0)
        labels = {s.label for s in basis.directions}
        # hop to bath 3, spin up: Z-tailed pattern and its Z4 dressing
        assert "XZZYIIII" in labels
        assert "YZZXIIII" in labels
        assert "XZZYZIII" in labels
        # spin-down copy dressed with Z0
        assert "IIIIXZZY" in labels
        assert "ZIIIXZZY" in labels
        assert len(basis) == 8 * p.n_bath
        assert basis.closure_depth == 1

    def test_directions_distinct_and_offdiagonal(self):
        parts = split(golden_hamiltonian())
        basis = build_ansatz(compute_eta(parts), parts.h0)
        assert len(set(basis.directions)) == len(basis.directions)
        assert not any(s.is_diagonal for s in basis.directions)

    def test_deeper_closure_discovers_dressings(self):
        # Seeding with the bare Y0 only: the Z1 dressing surfaces one round later.
        h0 = PauliSum.from_labels(2, [("ZZ", 1.0), ("ZI", 0.7)])
        basis = build_ansatz(PauliSum.from_labels(2, [("YI", 1.0)]), h0)
        assert {s.label for s in basis.directions} == {"YI", "YZ"}
        assert basis.closure_depth == 2

    def test_closure_error_reports_frontier(self):
        h0 = PauliSum.from_labels(2, [("ZZ", 1.0), ("ZI", 0.7)])
        with pytest.raises(ClosureError) as err:
            build_ansatz(PauliSum.from_labels(2, [("YI", 1.0)]), h0, max_depth=1)
        assert err.value.depth == 1
        assert err.value.frontier_size == 1

    def test_invalid_depth(self):
        with pytest.raises(ValueError):
            build_ansatz(PauliSum.zero(1), PauliSum.zero(1), max_depth=0)


class TestSolveGenerator:
    def test_empty_hv(self):
        h = PauliSum.from_labels(2, [("ZZ", 1.0)])
        parts = split(h)
        basis = build_ansatz(compute_eta(parts), parts.h0)
        gen, residual = solve_generator(basis, parts)
        assert not gen
        assert residual == 0.0

    def test_golden_coefficients(self):
        # Energy denominators d(z2) = U(1-z2)/2 - (mu+eps2) give the exact
        # fractions 1/75 (bare) and 4/75 (dressed) at the golden parameters.
        parts = split(golden_hamiltonian())
        basis = build_ansatz(compute_eta(parts), parts.h0)
        gen, residual = solve_generator(basis, parts)
        assert residual <= 1e-12
        assert gen.coeff(lbl("YXII")) == pytest.approx(1j / 75, abs=1e-12)
        assert gen.coeff(lbl("XYII")) == pytest.approx(-1j / 75, abs=1e-12)
        assert gen.coeff(lbl("YXZI")) == pytest.approx(4j / 75, abs=1e-12)
        assert gen.coeff(lbl("XYZI")) == pytest.approx(-4j / 75, abs=1e-12)
        assert gen.coeff(lbl("IIYX")) == pytest.approx(1j / 75, abs=1e-12)
        assert gen.coeff(lbl("ZIYX")) == pytest.approx(4j / 75, abs=1e-12)

    def test_matches_dense_generator(self):
        parts = split(golden_hamiltonian())
        basis = build_ansatz(compute_eta(parts), parts.h0)
        gen, _ = solve_generator(basis, parts)
        s_dense, report = exact_generator_dense(parts)
        assert not report
        assert (gen - pauli_decompose(s_dense)).max_abs_coeff() <= 1e-10

    def test_anti_hermitian_exactly(self):
        parts = split(golden_hamiltonian())
        basis = build_ansatz(compute_eta(parts), parts.h0)
        gen, _ = solve_generator(basis, parts)
        assert gen.is_anti_hermitian

    def test_constraint_identity(self):
        parts = split(golden_hamiltonian())
        basis = build_ansatz(compute_eta(parts), parts.h0)
        gen, residual = solve_generator(basis, parts, tol=1e-10)
        assert (commutator(gen, parts.h0) + parts.hv).coeff_norm() <= 10 * 1e-10

    def test_symmetric_point_scalar_form(self):
        # The feasible channel alone survives; every direction carries V/4U.
        parts = split(jw_map(siam_two_site(SYMMETRIC)))
        basis = build_ansatz(compute_eta(parts), parts.h0)
        with pytest.raises(GeneratorInfeasibleError) as err:
            solve_generator(basis, parts)
        gen = err.value.generator
        v4u = SYMMETRIC.V[0] / (4 * SYMMETRIC.U)
        assert gen.coeff(lbl("YXII")) == pytest.approx(-1j * v4u, abs=1e-12)
        assert gen.coeff(lbl("XYII")) == pytest.approx(1j * v4u, abs=1e-12)
        assert gen.coeff(lbl("YXZI")) == pytest.approx(1j * v4u, abs=1e-12)
        assert gen.coeff(lbl("IIYX")) == pytest.approx(-1j * v4u, abs=1e-12)
        for t in gen.terms:
            assert abs(t.coeff) == pytest.approx(v4u, abs=1e-12)

    def test_degenerate_carries_unmatched_strings(self):
        parts = split(jw_map(siam_two_site(SYMMETRIC)))
        basis = build_ansatz(compute_eta(parts), parts.h0)
        with pytest.raises(GeneratorInfeasibleError) as err:
            solve_generator(basis, parts)
        assert {s.label for s in err.value.unmatched} == {"XXII", "YYII", "IIXX", "IIYY"}
        assert err.value.residual == pytest.approx(
            np.sqrt(8) * SYMMETRIC.V[0] / 4, rel=1e-10
        )

    def test_loose_tolerance_accepts_partial_elimination(self):
        parts = split(jw_map(siam_two_site(SYMMETRIC)))
        basis = build_ansatz(compute_eta(parts), parts.h0)
        gen, residual = solve_generator(basis, parts, tol=1.0)
        assert residual > 1e-10
        assert gen

    def test_rejects_non_hermitian(self):
        from swtkit.swt import SplitHamiltonian

        h0 = PauliSum.from_labels(1, [("Z", 1j)])
        hv = PauliSum.from_labels(1, [("X", 1.0)])
        basis = build_ansatz(PauliSum.from_labels(1, [("Y", 1.0)]), h0)
        with pytest.raises(ValueError, match="Hermitian"):
            solve_generator(basis, SplitHamiltonian(h0, hv))


class TestEffectiveHamiltonian:
    def test_zero_generator(self):
        parts = split(golden_hamiltonian())
        assert effective_hamiltonian(parts, PauliSum.zero(4)) == parts.h0

    def test_hermitian_exactly(self):
        report = run_swt(golden_hamiltonian())
        assert report.h_eff.is_hermitian

    def test_matches_dense_second_order(self):
        parts = split(golden_hamiltonian())
        report = run_swt(golden_hamiltonian())
        s_dense, _ = exact_generator_dense(parts)
        hv = to_matrix(parts.hv)
        oracle = to_matrix(parts.h0) + 0.5 * (s_dense @ hv - hv @ s_dense)
        assert np.max(np.abs(to_matrix(report.h_eff) - oracle)) <= 1e-10

    def test_symmetric_point_single_z_structure(self):
        # [S, hv] carries -V^2/2U on impurity qubits and +V^2/2U on bath
        # qubits; the half used in h_eff carries half of each.
        parts = split(jw_map(siam_two_site(SYMMETRIC)))
        basis = build_ansatz(compute_eta(parts), parts.h0)
        gen, _ = solve_generator(basis, parts, tol=1.0)
        v2_2u = SYMMETRIC.V[0] ** 2 / (2 * SYMMETRIC.U)
        comm = commutator(gen, parts.hv)
        assert comm.coeff(lbl("ZIII")) == pytest.approx(-v2_2u, abs=1e-12)
        assert comm.coeff(lbl("IZII")) == pytest.approx(v2_2u, abs=1e-12)
        assert comm.coeff(lbl("IIZI")) == pytest.approx(-v2_2u, abs=1e-12)
        assert comm.coeff(lbl("IIIZ")) == pytest.approx(v2_2u, abs=1e-12)


class TestBch:
    def test_order_zero(self):
        h = golden_hamiltonian()
        assert bch_conjugate(h, PauliSum.zero(4), 0) == h

    def test_first_order_cancels_hv_exactly(self):
        h = golden_hamiltonian()
        report = run_swt(h)
        order1 = bch_conjugate(h, report.generator, 1)
        for label in ("XXII", "YYII", "IIXX", "IIYY"):
            assert order1.coeff(lbl(label)) == 0j  # string-level cancellation

    def test_order8_matches_exponential(self):
        # V = 0.08 keeps the generator inside the ||S|| <= 0.1 regime where
        # the order-8 truncation is entrywise 1e-8 accurate.
        p = SiamParams(n_bath=1, U=4.0, mu=1.0, eps=(0.5,), V=(0.08,))
        h = jw_map(siam_two_site(p))
        report = run_swt(h)
        assert np.linalg.norm(to_matrix(report.generator), 2) <= 0.1
        bch = bch_conjugate(h, report.generator, 8)
        exact = conjugate_exact(h, report.generator)
        assert np.max(np.abs(to_matrix(bch) - exact)) <= 1e-8

    def test_negative_order_rejected(self):
        with pytest.raises(ValueError):
            bch_conjugate(PauliSum.zero(1), PauliSum.zero(1), -1)


class TestScalingInvariants:
    def test_generator_linear_and_shift_quadratic_in_v(self):
        lam = 3.0
        base = run_swt(jw_map(siam_two_site(GOLDEN)))
        scaled_params = SiamParams(
            n_bath=1, U=GOLDEN.U, mu=GOLDEN.mu, eps=GOLDEN.eps, V=(lam * GOLDEN.V[0],)
        )
        scaled = run_swt(jw_map(siam_two_site(scaled_params)))
        gen_diff = (scaled.generator - base.generator.scale(lam)).max_abs_coeff()
        assert gen_diff <= 1e-10
        shift_base = base.h_eff - split(jw_map(siam_two_site(GOLDEN))).h0
        shift_scaled = scaled.h_eff - split(jw_map(siam_two_site(scaled_params))).h0
        assert (shift_scaled - shift_base.scale(lam**2)).max_abs_coeff() <= 1e-10


class TestRunSwt:
    def test_report_fields_and_json_schema(self):
        report = run_swt(golden_hamiltonian())
        assert report.constraint_residual <= 1e-12
        assert report.closure_depth == 1
        assert report.generator.is_anti_hermitian
        assert report.h_eff.is_hermitian
        payload = report.to_json_dict()
        assert set(payload) == {"eta", "generator", "h_eff", "residual", "closure_depth"}
        payload = report.to_json_dict(include_degeneracies=True)
        assert "degenerate_pairs" in payload

    def test_chain_end_to_end(self):
        p = SiamParams(n_bath=3, U=4.0, mu=1.0, eps=(0.0, 0.8, -0.9, 1.3), V=(0.12, 0.1, 0.08))
        h = jw_map(siam_chain(p))
        report = run_swt(h)
        assert report.constraint_residual <= 1e-10
        parts = split(h)
        s_dense, deg = exact_generator_dense(parts)
        assert not deg
        assert (report.generator - pauli_decompose(s_dense)).max_abs_coeff() <= 1e-10
