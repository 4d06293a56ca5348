import numpy as np
import pytest
from numpy.testing import assert_allclose

from meanking import attack as atk, qmath, retrodiction as rd

from oracles import intercept_resend_detection, probe_detection


@pytest.fixture(scope="module")
def ideal2():
    return atk.identity_attack(2)


class TestWeyl:
    def test_identity(self):
        assert_allclose(atk.weyl(2, 0, 0).matrix, np.eye(2))

    def test_shift_times_clock(self):
        # multiplied by hand: X Z = [[0, -1], [1, 0]]
        assert_allclose(atk.weyl(2, 1, 1).matrix, np.array([[0, -1], [1, 0]]), atol=1e-15)

    def test_orders(self):
        for d in (2, 3, 5):
            x = atk.weyl(d, 1, 0).matrix
            z = atk.weyl(d, 0, 1).matrix
            assert_allclose(np.linalg.matrix_power(x, d), np.eye(d), atol=1e-12)
            assert_allclose(np.linalg.matrix_power(z, d), np.eye(d), atol=1e-12)

    @pytest.mark.parametrize("d,n", [(2, 1), (3, 1), (2, 2)])
    def test_entangled_basis_orthonormal(self, d, n):
        dd = d**n
        vecs = np.array(
            [
                atk.entangled_basis_vector(d, n, m, l)
                for m in range(dd)
                for l in range(dd)
            ]
        )
        gram = vecs.conj() @ vecs.T
        assert np.max(np.abs(gram - np.eye(dd * dd))) < 1e-12


class TestDecomposeSource:
    def test_ideal_source_single_coefficient(self):
        psi = np.kron(rd.omega(2), [1.0, 0.0])
        c = atk.decompose_source(psi, 2, 1, 2)
        expect = np.zeros((2, 2, 2), dtype=complex)
        expect[0, 0, 0] = 1.0
        assert_allclose(c, expect, atol=1e-14)

    def test_basis_states(self):
        for m in range(2):
            for l in range(2):
                psi = np.kron(atk.entangled_basis_vector(2, 1, m, l), [0.0, 1.0])
                c = atk.decompose_source(psi, 2, 1, 2)
                assert abs(c[m, l, 1] - 1.0) < 1e-12
                c[m, l, 1] = 0.0
                assert np.max(np.abs(c)) < 1e-12

    def test_reconstruction(self):
        rng = np.random.default_rng(43)
        for d, n, de in [(2, 1, 3), (3, 1, 2), (2, 2, 2)]:
            psi = atk.random_state(d ** (2 * n) * de, rng)
            c = atk.decompose_source(psi, d, n, de)
            assert abs(np.sum(np.abs(c) ** 2) - 1.0) < 1e-12
            back = atk.source_from_coefficients(c, d, n)
            assert np.linalg.norm(psi - back) < 1e-10


class TestModelValidation:
    def test_broken_kraus_rejected(self):
        with pytest.raises(ValueError):
            atk.AttackModel(d=2, n=1, d_eve=1, psi_abe=rd.omega(2), kraus=(0.5 * np.eye(2),))

    def test_unnormalized_source_rejected(self):
        with pytest.raises(ValueError):
            atk.AttackModel(d=2, n=1, d_eve=1, psi_abe=2 * rd.omega(2), kraus=(np.eye(2),))

    def test_resource_guard(self):
        with pytest.raises(ValueError):
            atk.AttackModel(
                d=2, n=4, d_eve=32,
                psi_abe=np.zeros(2**8 * 32), kraus=(np.eye(2**4 * 32),),
            )


class TestProjectedState:
    def test_ideal_probabilities_and_state(self, mub2, ideal2):
        for b in range(3):
            for i in range(2):
                state, prob = atk.bob_projected_state(ideal2, mub2, b, i)
                assert abs(prob - 0.5) < 1e-12
                hat = atk.phi_hat_product(mub2, (b,), (i,), 1)
                assert np.linalg.norm(state - np.sqrt(2) * np.kron(hat, [1.0])) < 1e-12

    def test_outcome_probabilities_sum_to_one(self, mub2):
        rng = np.random.default_rng(47)
        am = atk.random_attack(2, 1, 2, 2, rng)
        for b in range(3):
            total = sum(atk._projected_raw(am, mub2, (b,), (i,))[1] for i in range(2))
            assert abs(total - 1.0) < 1e-10

    def test_two_routes_agree(self, mub2):
        rng = np.random.default_rng(53)
        for _ in range(10):
            am = atk.random_attack(2, 1, 2, 2, rng)
            for b in range(3):
                for i in range(2):
                    s1, p1 = atk.bob_projected_state(am, mub2, b, i)
                    s2, p2 = atk.bob_projected_state_bell_form(am, mub2, b, i)
                    assert abs(p1 - p2) < 1e-12
                    assert np.linalg.norm(s1 - s2) < 1e-10

    def test_zero_probability_raises(self, mub2):
        # source with Bob's factor pinned to |0>, measured against |1>
        psi = np.kron(np.kron([1.0, 0.0], [1.0, 0.0]), [1.0])
        am = atk.AttackModel(d=2, n=1, d_eve=1, psi_abe=psi, kraus=(np.eye(2),))
        with pytest.raises(atk.ZeroProbabilityOutcome):
            atk.bob_projected_state(am, mub2, 0, 1)


class TestFeedback:
    def test_trivial_channel(self, mub2, ideal2):
        state, _ = atk.bob_projected_state(ideal2, mub2, 1, 0)
        rho = atk.apply_feedback(ideal2, state)
        assert_allclose(rho, np.outer(state, state.conj()), atol=1e-14)

    def test_depolarizing_marginal(self, mub2):
        p = 1.0  # full depolarizing on the returned qubit
        paulis = [np.eye(2), atk.weyl(2, 1, 0).matrix,
                  atk.weyl(2, 0, 1).matrix, atk.weyl(2, 1, 1).matrix]
        ops = [np.sqrt(1 - 3 * p / 4) * paulis[0]] + [np.sqrt(p / 4) * m for m in paulis[1:]]
        am = atk.AttackModel(d=2, n=1, d_eve=1, psi_abe=rd.omega(2), kraus=tuple(ops))
        state, _ = atk.bob_projected_state(am, mub2, 0, 0)
        rho = atk.apply_feedback(am, state)
        marginal = qmath.partial_trace(rho, (2, 2, 1), 1)
        assert_allclose(marginal, np.eye(2) / 2, atol=1e-12)

    def test_trace_preserved(self, mub2):
        rng = np.random.default_rng(59)
        am = atk.random_attack(2, 1, 2, 3, rng)
        for _ in range(5):
            v = atk.random_state(8, rng)
            rho = atk.apply_feedback(am, v)
            assert abs(np.trace(rho).real - 1.0) < 1e-12


class TestAliceState:
    def test_no_attack_conditional(self, mub2, ideal2):
        for b in range(3):
            for i in range(2):
                rho = atk.alice_state(ideal2, mub2, b, i)
                hat = atk.phi_hat_product(mub2, (b,), (i,), 1)
                assert np.max(np.abs(rho - 2 * np.outer(hat, hat.conj()))) < 1e-12

    def test_psd_unit_trace(self, mub2):
        rng = np.random.default_rng(61)
        for _ in range(5):
            am = atk.random_attack(2, 1, 2, 2, rng)
            rho = atk.alice_state(am, mub2, 1, 1)
            assert abs(np.trace(rho).real - 1.0) < 1e-10
            assert np.linalg.eigvalsh(rho).min() > -1e-10


class TestEOperators:
    def test_no_attack_single_identity(self, ideal2):
        ops = atk.build_E_operators(ideal2)
        assert ops.shape == (1, 1, 4, 4)
        assert np.max(np.abs(ops[0, 0] - np.eye(4))) < 1e-12

    def test_reconstruction_random_attacks(self, mub2):
        rng = np.random.default_rng(67)
        for trial in range(15):
            d_eve = int(rng.choice([1, 2, 4]))
            am = atk.random_attack(2, 1, d_eve, 2, rng)
            ops = atk.build_E_operators(am)
            for b in range(3):
                for i in range(2):
                    direct, _ = atk.alice_state_unnormalized(am, mub2, b, i)
                    recon = atk.reconstruct_alice_state(am, mub2, b, i, ops)
                    assert np.max(np.abs(direct - recon)) < 1e-9, trial

    def test_scalar_attacks_have_scalar_operators(self):
        rng = np.random.default_rng(71)
        for _ in range(5):
            am = atk.eve_local_attack(
                2, atk.random_channel(3, 2, rng), eve_state=atk.random_state(3, rng)
            )
            ops = atk.build_E_operators(am)
            for l in range(ops.shape[0]):
                for k in range(ops.shape[1]):
                    assert atk.scalar_deviation(ops[l, k]) < 1e-9


class TestGuessProbability:
    def test_no_attack_correct_digit(self, strategy_d2, mub2, ideal2):
        x = (0, 1, 0)
        assert abs(atk.guess_probability(strategy_d2, ideal2, (x,), (1,), (1,)) - 1.0) < 1e-9

    def test_no_attack_wrong_digit(self, strategy_d2, ideal2):
        x = (0, 1, 0)  # x(0) = 0 but Bob saw i = 1
        assert atk.guess_probability(strategy_d2, ideal2, (x,), (0,), (1,)) < 1e-12

    def test_intercept_resend_against_oracle(self, strategy_d2, mub2):
        am = atk.intercept_resend(mub2, 0)
        # aggregate over outcomes reproduces 1 - detection
        det = atk.detection_probability(strategy_d2, am)
        agree = 0.0
        for b in range(3):
            for i in range(2):
                _, prob = atk.alice_state_unnormalized(am, mub2, (b,), (i,))
                x_match = (i, i, i)  # any x with x(b) = i
                agree += prob * atk.guess_probability(
                    strategy_d2, am, (x_match,), (b,), (i,)
                )
        assert abs(agree / 3 - (1 - det)) < 1e-10


class TestDetectionAndLeakage:
    def test_no_attack(self, strategy_d2, mub2, ideal2):
        assert atk.detection_probability(strategy_d2, ideal2) < 1e-12
        assert atk.leakage(ideal2, mub2) < 1e-12

    def test_intercept_resend(self, strategy_d2, mub2):
        for bstar in range(3):
            am = atk.intercept_resend(mub2, bstar)
            det = atk.detection_probability(strategy_d2, am)
            oracle = intercept_resend_detection(strategy_d2, bstar)
            assert abs(det - oracle) < 1e-10
            assert det > 0.01
            assert atk.leakage(am, mub2) > 0.1

    def test_intercept_resend_d3(self, strategy_d3, mub3):
        am = atk.intercept_resend(mub3, 1)
        det = atk.detection_probability(strategy_d3, am)
        assert abs(det - intercept_resend_detection(strategy_d3, 1)) < 1e-10
        assert det > 0.01

    def test_probe_against_oracle(self, strategy_d2):
        for theta in (0.3, 0.6, 1.0):
            am = atk.probe_entangle(2, theta)
            det = atk.detection_probability(strategy_d2, am)
            assert abs(det - probe_detection(strategy_d2, theta)) < 1e-10

    def test_swap_like_source_attack_detected(self, strategy_d2):
        am = atk.source_replace(2, 0.4)
        assert atk.detection_probability(strategy_d2, am) > 0.01

    def test_scalar_attacks_invisible(self, strategy_d2, mub2):
        rng = np.random.default_rng(73)
        for _ in range(8):
            am = atk.eve_local_attack(
                2, atk.random_channel(2, 2, rng), eve_state=atk.random_state(2, rng)
            )
            assert atk.detection_probability(strategy_d2, am) < 1e-10
            assert atk.leakage(am, mub2) < 1e-8

    def test_scalarized_random_attacks_invisible(self, strategy_d2, mub2):
        rng = np.random.default_rng(79)
        for _ in range(5):
            raw = atk.random_attack(2, 1, 2, 2, rng)
            am = atk.scalarized_attack(raw)
            assert atk.detection_probability(strategy_d2, am) < 1e-10
            assert atk.leakage(am, mub2) < 1e-8

    def test_detect_leak_curve(self, strategy_d2, mub2):
        # detectable canned attacks: leakage > 0 comes with detection > 0
        curve = []
        for theta in np.linspace(0.2, 1.2, 6):
            am = atk.probe_entangle(2, float(theta))
            curve.append(
                (atk.detection_probability(strategy_d2, am), atk.leakage(am, mub2))
            )
        for det, leak in curve:
            assert det > 1e-4 and leak > 1e-4
        assert curve == sorted(curve)  # monotone over this range


class TestEveFinalState:
    def test_no_attack_pure_and_constant(self, mub2, ideal2):
        states = [
            atk.eve_final_state(ideal2, mub2, b, i) for b in range(3) for i in range(2)
        ]
        for rho in states:
            assert_allclose(rho, np.array([[1.0]]), atol=1e-12)

    def test_scalar_attack_outcome_independent(self, mub2):
        rng = np.random.default_rng(83)
        am = atk.eve_local_attack(
            2, atk.random_channel(2, 2, rng), eve_state=atk.random_state(2, rng)
        )
        states = [atk.eve_final_state(am, mub2, b, i) for b in range(3) for i in range(2)]
        for rho in states[1:]:
            assert atk.trace_distance(states[0], rho) < 1e-9

    def test_intercept_resend_depends_on_outcome(self, mub2):
        am = atk.intercept_resend(mub2, 0)
        r0 = atk.eve_final_state(am, mub2, 0, 0)
        r1 = atk.eve_final_state(am, mub2, 0, 1)
        assert atk.trace_distance(r0, r1) > 0.1


class TestAttackFile:
    def test_roundtrip(self, tmp_path):
        rng = np.random.default_rng(89)
        am = atk.random_attack(2, 1, 2, 2, rng)
        path = tmp_path / "attack.json"
        atk.save_attack(am, path)
        back = atk.load_attack(path)
        assert back.d == 2 and back.n == 1 and back.d_eve == 2
        assert_allclose(back.psi_abe, am.psi_abe)
        for v1, v2 in zip(back.kraus, am.kraus):
            assert_allclose(v1, v2)


class TestReportObject:
    def test_evaluate_attack(self, strategy_d2, mub2):
        am = atk.intercept_resend(mub2, 0)
        report = atk.evaluate_attack(strategy_d2, am)
        assert abs(
            report.detection_probability - atk.detection_probability(strategy_d2, am)
        ) < 1e-12
        assert report.leakage > 0.1
        assert len(report.per_outcome) == 6
        probs = sum(entry["prob"] for entry in report.per_outcome)
        assert abs(probs - 3.0) < 1e-9  # one unit of mass per basis
        for entry in report.per_outcome:
            assert 0.0 <= entry["guess_error"] <= 1.0 + 1e-10
