import numpy as np
import pytest

from fibwalk.errors import DimensionError, NonSU2Error
from fibwalk.schedule import fibonacci_word
from fibwalk.spin import (
    IDENTITY,
    MomentumState,
    SpinMatrix,
    bloch_matrix,
    coin_matrix,
    evolve_momentum,
    fibonacci_matrix,
    from_momentum,
    half_trace,
    momentum_grid,
    to_momentum,
    word_matrix,
)
from fibwalk.walk import WalkerState, evolve, make_cyclic_state, step

R2 = 1 / np.sqrt(2)


def direct_transform(state):
    """O(N^2) oracle: F_j = sum_n exp(i n phi_j) a_n."""
    phi = momentum_grid(state.capacity)
    kernel = np.exp(1j * np.outer(phi, state.positions))
    return phi, kernel @ state.a, kernel @ state.b


def random_ring_state(n, rng):
    a = rng.normal(size=n) + 1j * rng.normal(size=n)
    b = rng.normal(size=n) + 1j * rng.normal(size=n)
    nrm = np.sqrt(np.sum(abs(a) ** 2 + abs(b) ** 2))
    return WalkerState(a / nrm, b / nrm, 0, periodic=True)


@pytest.mark.parametrize("theta", [0.0, 0.3, np.pi / 4, 2.0])
def test_phi_half_pi_is_rotation(theta):
    m = coin_matrix(np.pi / 2, theta).entries
    c, s = np.cos(theta), np.sin(theta)
    assert np.allclose(m, [[c, s], [-s, c]], atol=1e-15)
    sy = np.array([[0, -1j], [1j, 0]])
    assert np.allclose(m, c * IDENTITY + 1j * s * sy, atol=1e-15)


def test_phi_half_pi_theta_zero_is_identity():
    assert np.allclose(coin_matrix(np.pi / 2, 0.0).entries, IDENTITY, atol=1e-15)


@pytest.mark.parametrize(
    "phi, theta, expected",
    [(np.pi / 2, np.pi / 3, 0.5), (np.pi / 6, np.pi / 4, 0.3535533905932738)],
)
def test_half_trace_values(phi, theta, expected):
    assert half_trace(coin_matrix(phi, theta)) == pytest.approx(expected, abs=1e-12)
    assert np.sin(phi) * np.cos(theta) == pytest.approx(expected, abs=1e-12)


def test_half_trace_identity_and_rejection():
    assert half_trace(SpinMatrix(IDENTITY)) == 1.0
    with pytest.raises(NonSU2Error):
        half_trace(SpinMatrix(1j * IDENTITY))


def test_su2_and_bloch_invariants():
    rng = np.random.default_rng(1)
    for phi, theta in rng.uniform(-np.pi, np.pi, size=(200, 2)):
        m = coin_matrix(phi, theta)
        assert m.is_unitary(1e-12)
        assert abs(m.det - 1) < 1e-12
        assert np.allclose(m.entries, bloch_matrix(phi, theta), atol=1e-12)
        scalar, u = m.bloch()
        assert abs(scalar - np.cos(theta) * np.sin(phi)) < 1e-12
        assert np.allclose(
            u,
            [np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta) * np.cos(phi)],
            atol=1e-12,
        )


def test_trace_identities_random():
    rng = np.random.default_rng(2)
    for t1, t2, p2 in rng.uniform(-np.pi, np.pi, size=(1000, 3)):
        m1 = coin_matrix(np.pi / 2, t1)
        m2 = coin_matrix(p2, t2)
        assert abs(half_trace(m1) - np.cos(t1)) < 1e-12
        assert abs(half_trace(m2) - np.sin(p2) * np.cos(t2)) < 1e-12
        assert abs(half_trace(m2 @ m1) - np.sin(p2) * np.cos(t2 + t1)) < 1e-12


def test_fibonacci_matrix_base_cases():
    p = (np.pi / 2, np.pi / 3, np.pi / 6, np.pi / 4)
    assert np.array_equal(fibonacci_matrix(1, *p).entries, coin_matrix(p[0], p[1]).entries)
    assert np.array_equal(fibonacci_matrix(2, *p).entries, coin_matrix(p[2], p[3]).entries)
    assert half_trace(fibonacci_matrix(3, *p)) == pytest.approx(0.5 * np.cos(np.radians(105)), abs=1e-12)
    assert half_trace(fibonacci_matrix(3, *p)) == pytest.approx(-0.129410, abs=1e-6)


def test_fibonacci_matrix_stays_in_su2():
    rng = np.random.default_rng(3)
    for params in rng.uniform(-np.pi, np.pi, size=(20, 4)):
        for k in (10, 20, 30):
            m = fibonacci_matrix(k, *params)
            assert m.is_unitary(1e-9)
            assert abs(m.det - 1) < 1e-9
            assert abs(half_trace(m, tol=1e-9)) <= 1 + 1e-12


def test_word_product_reproduces_recursion():
    rng = np.random.default_rng(4)
    for params in rng.uniform(-np.pi, np.pi, size=(10, 4)):
        for k in range(1, 18):
            w = word_matrix(fibonacci_word(k), *params).entries
            assert np.allclose(w, fibonacci_matrix(k, *params).entries, atol=1e-10)


def test_fft_transform_matches_direct_sum():
    rng = np.random.default_rng(5)
    for n in (1, 2, 7, 64, 65):
        s = random_ring_state(n, rng)
        ms = to_momentum(s)
        phi, F, G = direct_transform(s)
        assert np.allclose(ms.phi, phi)
        assert np.allclose(ms.F, F, atol=1e-12) and np.allclose(ms.G, G, atol=1e-12)
        assert ms.norm() == pytest.approx(s.norm(), abs=1e-10)
        back = from_momentum(ms, s)
        assert np.allclose(back.a, s.a, atol=1e-13) and np.allclose(back.b, s.b, atol=1e-13)


def test_single_walk_step_is_minus_i_M():
    rng = np.random.default_rng(6)
    s = random_ring_state(16, rng)
    theta = 0.77
    _, F1, G1 = direct_transform(step(s, theta))
    phi, F0, G0 = direct_transform(s)
    for j in range(16):
        m = -1j * coin_matrix(phi[j], theta).entries
        assert np.allclose(m @ [F0[j], G0[j]], [F1[j], G1[j]], atol=1e-12)


def test_evolve_momentum_empty_word_is_identity():
    ms = to_momentum(make_cyclic_state(8))
    out = evolve_momentum(ms, "", 0.3, 0.4)
    assert np.array_equal(out.F, ms.F) and np.array_equal(out.G, ms.G)


def test_evolve_momentum_single_pulse_at_half_pi():
    ms = MomentumState([np.pi / 2], [0.6], [0.8j])
    t1 = 0.4
    out = evolve_momentum(ms, "1", t1, 1.0)
    rot = np.array([[np.cos(t1), np.sin(t1)], [-np.sin(t1), np.cos(t1)]])
    assert np.allclose([out.F[0], out.G[0]], rot @ [0.6, 0.8j], atol=1e-15)


def test_word_12_matches_two_position_steps():
    rng = np.random.default_rng(8)
    s = random_ring_state(64, rng)
    t1, t2 = 0.4, 1.3
    pos = evolve(s, "12", (t1, t2)).state
    phi, F, G = direct_transform(s)
    mom = evolve_momentum(MomentumState(phi, F, G), "12", t1, t2, walk_phase=True)
    _, Fp, Gp = direct_transform(pos)
    assert np.max(np.abs(mom.F - Fp)) < 1e-10 and np.max(np.abs(mom.G - Gp)) < 1e-10


def test_grid_mismatch():
    ms = to_momentum(make_cyclic_state(8))
    with pytest.raises(DimensionError):
        from_momentum(ms, make_cyclic_state(10))
    with pytest.raises(DimensionError):
        MomentumState([0.0, 1.0], [1.0], [0.0])


def test_to_reals_layout():
    m = SpinMatrix(np.array([[1 + 2j, 3 + 4j], [5 + 6j, 7 + 8j]]))
    assert m.to_reals() == [1, 2, 3, 4, 5, 6, 7, 8]
