import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from qprivacy.cases import random_channel_case
from qprivacy.channels import (
    PAULI_Z,
    amplitude_damping,
    apply,
    choi_matrix,
    complementary_apply,
    dephasing,
    depolarizing,
    environment_matrix,
    erasure,
    family_channel,
    identity,
    joint_output,
    make_channel,
    random_channel,
    remix_kraus,
    split_environment,
    stinespring,
    zoo,
)
from qprivacy.errors import DomainError, NotAChannelError
from qprivacy.qmath import binary_entropy, make_rng, partial_trace, random_density, random_pure_state, random_unitary, von_neumann_entropy
from qprivacy.states import DensityOperator

seeds = st.integers(0, 2**32 - 1)
H = np.array([[1, 1], [1, -1]]) / math.sqrt(2)


def max_diff(a, b):
    return float(np.abs(np.asarray(a) - np.asarray(b)).max())


def test_make_channel_identity():
    ch = make_channel([np.eye(2)])
    assert (ch.dim_in, ch.dim_out, ch.dim_env) == (2, 2, 1)


def test_make_channel_not_trace_preserving():
    with pytest.raises(NotAChannelError) as err:
        make_channel([np.eye(2) / 2])
    assert err.value.residual == pytest.approx(0.75)
    assert "0.75" in str(err.value)


def test_make_channel_dephasing_by_hand():
    p = 0.3
    ks = [math.sqrt(1 - p) * np.eye(2), math.sqrt(p) * PAULI_Z]
    ch = make_channel(ks)
    assert max_diff(sum(k.conj().T @ k for k in ch.kraus), np.eye(2)) < 1e-15


def test_make_channel_trims_zero_operators():
    ch = make_channel([np.eye(2), np.zeros((2, 2)), 1e-14 * np.eye(2)])
    assert ch.dim_env == 1


def test_too_many_kraus():
    ks = [np.eye(1) / math.sqrt(2)] * 2
    with pytest.raises(DomainError):
        make_channel(ks)


def test_apply_identity_exact():
    rho = random_density(3, 3, 1)
    np.testing.assert_array_equal(apply(identity(3), rho).matrix, rho)


def test_apply_fully_depolarizing():
    rho = random_density(2, 2, 4)
    assert max_diff(apply(depolarizing(1.0), rho).matrix, np.eye(2) / 2) < 1e-12


def test_amplitude_damping_excited():
    g = 0.37
    out = apply(amplitude_damping(g), np.diag([0, 1])).matrix
    assert max_diff(out, np.diag([g, 1 - g])) < 1e-15


def test_stinespring_identity():
    v = stinespring(identity(2))
    assert v.dim_env == 1
    np.testing.assert_array_equal(v.matrix, np.eye(2))


def test_stinespring_isometry_and_env_dim():
    assert stinespring(dephasing(0.2)).dim_env == 2
    ch = random_channel(3, 3, 3, 8)
    v = stinespring(ch).matrix
    assert max_diff(v.conj().T @ v, np.eye(3)) < 1e-9
    rho = random_density(3, 3, 9)
    red = partial_trace(v @ rho @ v.conj().T, (3, 3), [0])
    assert max_diff(red, apply(ch, rho).matrix) < 1e-10


def test_joint_output_identity():
    rho = random_density(2, 2, 3)
    np.testing.assert_allclose(joint_output(identity(2), rho).matrix, rho, atol=0)


@pytest.mark.parametrize("ch", zoo(), ids=lambda c: c.name)
def test_joint_output_pure_stays_pure(ch):
    v = random_pure_state(ch.dim_in, 13)
    w = np.linalg.eigvalsh(joint_output(ch, DensityOperator.from_vector(v)).matrix)
    assert abs(w[-1] - 1) < 1e-10


def test_complementary_examples():
    env = complementary_apply(identity(2), random_density(2, 2, 1))
    assert env.dim == 1 and von_neumann_entropy(env.matrix) == 0.0
    p = 0.3
    env = complementary_apply(dephasing(p), np.eye(2) / 2)
    assert max_diff(env.matrix, np.diag([1 - p, p])) < 1e-15
    assert von_neumann_entropy(env.matrix) == pytest.approx(binary_entropy(p), abs=1e-12)
    env = complementary_apply(depolarizing(1.0), np.eye(2) / 2)
    assert max_diff(env.matrix, np.eye(4) / 4) < 1e-15
    assert von_neumann_entropy(env.matrix) == pytest.approx(2.0, abs=1e-12)


def _random_channels(n=50):
    r = make_rng(2024)
    return [random_channel_case(r, max_dim=3, max_kraus=4) for _ in range(n)]


@pytest.mark.parametrize("ch", zoo() + _random_channels(), ids=lambda c: c.name)
def test_dilation_consistency(ch):
    r = make_rng(ch.dim_in * 100 + ch.dim_env)
    for _ in range(3):
        rho = random_density(ch.dim_in, int(r.integers(1, ch.dim_in + 1)), r)
        joint = joint_output(ch, rho).matrix
        dims = (ch.dim_out, ch.dim_env)
        assert max_diff(apply(ch, rho).matrix, partial_trace(joint, dims, [0])) < 1e-10
        assert max_diff(complementary_apply(ch, rho).matrix, partial_trace(joint, dims, [1])) < 1e-10


def test_environment_matrix_definition():
    ch = random_channel(2, 3, 3, 1)
    rho = random_density(2, 2, 2)
    w = environment_matrix(ch, rho)
    for j, kj in enumerate(ch.kraus):
        for k, kk in enumerate(ch.kraus):
            assert abs(w[j, k] - np.trace(kj @ rho @ kk.conj().T)) < 1e-14


def test_split_environment_trivial_cases():
    ch = random_channel(2, 2, 3, 5)
    rho = random_density(2, 2, 6)
    full = split_environment(ch, ch.dim_env)
    assert full.dims == (3, 1)
    assert max_diff(full.eve_state(rho).matrix, complementary_apply(ch, rho).matrix) < 1e-15
    one = split_environment(ch, 1)
    np.testing.assert_allclose(one.eve_state(rho).matrix, [[1]], atol=1e-14)
    with pytest.raises(DomainError):
        split_environment(ch, 4)
    with pytest.raises(DomainError):
        split_environment(ch, 0)


def test_split_environment_dephasing_no_op():
    ch = dephasing(0.3)
    rho = random_density(2, 2, 3)
    split = split_environment(ch, 2)
    w1 = np.linalg.eigvalsh(split.environment_state(rho).matrix)
    w2 = np.linalg.eigvalsh(complementary_apply(ch, rho).matrix)
    np.testing.assert_allclose(w1, w2, atol=1e-12)


@given(seeds, st.integers(1, 5))
def test_split_padding_preserves_spectrum(seed, d_dim):
    r = make_rng(seed)
    ch = random_channel(2, 3, 5, r)
    d_dim = min(d_dim, ch.dim_env)
    rho = random_density(2, 2, r)
    split = split_environment(ch, d_dim)
    assert split.d_dim * split.rest_dim >= ch.dim_env
    padded = np.sort(np.linalg.eigvalsh(split.environment_state(rho).matrix))
    plain = np.sort(np.linalg.eigvalsh(complementary_apply(ch, rho).matrix))
    np.testing.assert_allclose(padded[-len(plain):], plain, atol=1e-10)
    assert np.all(np.abs(padded[: len(padded) - len(plain)]) < 1e-10)


def test_zoo_parameters():
    assert depolarizing(0.0).dim_env == 1
    np.testing.assert_allclose(depolarizing(0.0).kraus[0], np.eye(2))
    for rho in (random_density(2, 2, 1), random_density(2, 1, 2)):
        assert max_diff(apply(amplitude_damping(1.0), rho).matrix, np.diag([1, 0])) < 1e-15
    with pytest.raises(DomainError):
        dephasing(1.2)
    with pytest.raises(DomainError):
        family_channel("bitflip", 0.1)


@pytest.mark.parametrize("p", [0.0, 0.25, 0.6, 1.0])
def test_erasure_block_structure(p):
    rho = random_density(2, 2, 10)
    expected = np.zeros((3, 3), dtype=complex)
    expected[:2, :2] = (1 - p) * rho
    expected[2, 2] = p
    assert max_diff(apply(erasure(p), rho).matrix, expected) < 1e-15


def test_depolarizing_qutrit_is_depolarizing():
    p = 0.4
    rho = random_density(3, 3, 3)
    out = apply(depolarizing(p, d=3), rho).matrix
    assert max_diff(out, (1 - p) * rho + p * np.eye(3) / 3) < 1e-14


def test_choi_examples():
    c = choi_matrix(identity(2))
    omega = np.array([1, 0, 0, 1])
    np.testing.assert_allclose(c, np.outer(omega, omega))
    assert np.trace(c).real == pytest.approx(2)
    np.testing.assert_allclose(choi_matrix(depolarizing(1.0)), np.eye(4) / 2, atol=1e-15)


def test_choi_matches_definition():
    ch = random_channel(2, 3, 2, 4)
    direct = np.zeros((6, 6), dtype=complex)
    for i in range(2):
        for j in range(2):
            eij = np.zeros((2, 2))
            eij[i, j] = 1
            out = sum(k @ eij @ k.conj().T for k in ch.kraus)
            direct += np.kron(eij, out)
    assert max_diff(choi_matrix(ch), direct) < 1e-14


@pytest.mark.parametrize("ch", zoo() + _random_channels(20), ids=lambda c: c.name)
def test_choi_psd_and_trace(ch):
    c = choi_matrix(ch)
    assert np.linalg.eigvalsh(c).min() >= -1e-10
    assert abs(np.trace(c) - ch.dim_in) < 1e-10


def test_remix_identity_and_hadamard():
    ch = dephasing(0.3)
    same = remix_kraus(ch, np.eye(2))
    for a, b in zip(same.kraus, ch.kraus):
        np.testing.assert_array_equal(a, b)
    mixed = remix_kraus(ch, H)
    assert max_diff(mixed.kraus[0], ch.kraus[0]) > 0.1
    assert max_diff(choi_matrix(mixed), choi_matrix(ch)) < 1e-10
    rho = random_density(2, 2, 0)
    assert max_diff(apply(mixed, rho).matrix, apply(ch, rho).matrix) < 1e-10
    with pytest.raises(DomainError):
        remix_kraus(ch, np.eye(2) * 2)


@given(seeds)
def test_remix_preserves_channel_and_env_entropy(seed):
    r = make_rng(seed)
    ch = random_channel_case(r, 3, 4)
    u = random_unitary(ch.dim_env, r)
    mixed = remix_kraus(ch, u)
    assert max_diff(choi_matrix(mixed), choi_matrix(ch)) < 1e-10
    rho = random_density(ch.dim_in, ch.dim_in, r)
    s1 = von_neumann_entropy(complementary_apply(ch, rho).matrix)
    s2 = von_neumann_entropy(complementary_apply(mixed, rho).matrix)
    assert abs(s1 - s2) < 1e-8
