import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from beltnot.belt import BeltRegion
from beltnot.gate import branch_state, realize_optimal
from beltnot.mps import (ExemplarState, MpsChain, contract_chain, exemplar_chain, exemplar_lambdas,
                         generic_chain, isometry_residuals, schmidt_spectrum, verify_chain)
from beltnot.symmetric import expand_to_qubits

GAMMAS = [round(0.1 * i, 1) for i in range(11)]


def exemplar_vector(m, gamma):
    return expand_to_qubits(ExemplarState(m, gamma).joint_state())


def test_first_cut_values():
    lam = exemplar_lambdas(ExemplarState(3, 1.0), 1)
    np.testing.assert_allclose(lam, [math.sqrt(2 / 3), math.sqrt(1 / 3)], atol=1e-15)
    # the first coefficient is gamma (M+1)/(2M) at every odd M
    for m in (1, 3, 5, 7):
        lam = exemplar_lambdas(ExemplarState(m, 0.37), 1)
        assert lam[0] ** 2 == pytest.approx(0.37 * (m + 1) / (2 * m), abs=1e-15)


@pytest.mark.parametrize("m", [1, 3, 5, 7])
def test_gamma_zero_is_product(m):
    for n in range(1, m + 1):
        lam = exemplar_lambdas(ExemplarState(m, 0.0), n)
        assert sorted(lam[lam > 0]) == [1.0]
    assert exemplar_chain(ExemplarState(m, 0.0)).bond_dims == [1] * (m + 2)


def test_midchain_values_against_svd():
    lam = exemplar_lambdas(ExemplarState(5, 0.5), 3)
    assert np.sum(lam ** 2) == pytest.approx(1, abs=1e-15)
    spec = schmidt_spectrum(exemplar_vector(5, 0.5), 6, 3)
    np.testing.assert_allclose(np.sort(lam)[::-1], spec[: lam.size], atol=1e-12)


@pytest.mark.parametrize("m", [1, 3, 5, 7, 9, 11])
def test_lambdas_match_schmidt_spectrum(m):
    for gamma in GAMMAS:
        vec = exemplar_vector(m, gamma)
        for n in range(1, m + 1):
            lam = exemplar_lambdas(ExemplarState(m, gamma), n)
            assert np.all(lam >= 0)
            assert np.sum(lam ** 2) == pytest.approx(1, abs=1e-12)
            spec = schmidt_spectrum(vec, m + 1, n)
            padded = np.zeros(max(spec.size, lam.size))
            padded[: lam.size] = np.sort(lam)[::-1]
            ref = np.zeros_like(padded)
            ref[: spec.size] = spec
            np.testing.assert_allclose(padded, ref, atol=1e-10)


def test_exemplar_m1_gamma1_reconstructs():
    chain = exemplar_chain(ExemplarState(1, 1.0))
    assert chain.site_count == 2
    np.testing.assert_allclose(contract_chain(chain), [-1, 0, 0, 0], atol=1e-15)


def test_exemplar_m3_gamma1_sign_and_overlap():
    chain = exemplar_chain(ExemplarState(3, 1.0))
    vec = contract_chain(chain)
    ref = exemplar_vector(3, 1.0)
    assert np.vdot(ref, vec).real == pytest.approx(1, abs=1e-12)  # sign preserved, not just modulus
    assert vec[0b001] == pytest.approx(-1 / math.sqrt(3))
    assert verify_chain(chain, ref).passed


@pytest.mark.parametrize("m", [1, 3, 5, 7, 9, 11])
def test_exemplar_chain_isometries_and_overlap(m):
    for gamma in GAMMAS:
        chain = exemplar_chain(ExemplarState(m, gamma))
        cert = verify_chain(chain, exemplar_vector(m, gamma))
        assert cert.passed, (m, gamma, cert)
        assert cert.max_residual < 1e-12
        assert chain.bond_dims[0] == chain.bond_dims[-1] == 1


def test_exemplar_schmidt_data():
    chain = exemplar_chain(ExemplarState(5, 0.3))
    data = chain.schmidt
    assert len(data.lambdas) == 5
    for lam in data.lambdas:
        assert np.sum(lam ** 2) == pytest.approx(1, abs=1e-12)
        assert np.all(lam > 0)
    assert [len(lam) for lam in data.lambdas] == chain.bond_dims[1:-1]


def test_generic_bond_profile_matches_exemplar():
    m, gamma = 5, 0.3
    chain = generic_chain(exemplar_vector(m, gamma), m + 1)
    expected = [1] + [int(np.count_nonzero(exemplar_lambdas(ExemplarState(m, gamma), n))) for n in range(1, m + 1)] + [1]
    assert chain.bond_dims == expected
    assert chain.bond_dims == exemplar_chain(ExemplarState(m, gamma)).bond_dims
    lam = np.sort(exemplar_lambdas(ExemplarState(m, gamma), 3))[::-1]
    np.testing.assert_allclose(chain.schmidt.lambdas[2], lam[lam > 0], atol=1e-12)


def test_generic_ghz_and_product():
    ghz = np.zeros(8)
    ghz[0] = ghz[7] = 1 / math.sqrt(2)
    assert generic_chain(ghz, 3).bond_dims == [1, 2, 2, 1]
    prod = np.zeros(8)
    prod[0b010] = 1
    chain = generic_chain(prod, 3)
    assert chain.bond_dims == [1, 1, 1, 1]
    assert verify_chain(chain, prod).passed


def test_generic_single_qubit():
    vec = np.array([0.6, 0.8j])
    assert verify_chain(generic_chain(vec, 1), vec).passed


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_generic_chain_random_eight_qubits(seed):
    rng = np.random.default_rng(seed)
    vec = rng.normal(size=256) + 1j * rng.normal(size=256)
    vec /= np.linalg.norm(vec)
    chain = generic_chain(vec, 8)
    cert = verify_chain(chain, vec)
    assert cert.passed
    assert chain.bond_dims == [1, 2, 4, 8, 16, 8, 4, 2, 1]


@settings(max_examples=15, deadline=None)
@given(st.floats(0, math.pi), st.floats(0, math.pi), st.integers(1, 6), st.integers(0, 1))
def test_generic_chain_on_gate_outputs(a, b, m, bit):
    region = BeltRegion(min(a, b), max(a, b))
    spec = realize_optimal(region, m)
    if spec.anc_dim > 2:
        return
    vec = expand_to_qubits(branch_state(spec, bit))
    assert verify_chain(generic_chain(vec, m + 1), vec).passed


def test_tampered_chain_fails():
    chain = exemplar_chain(ExemplarState(3, 0.6))
    tensors = list(chain.tensors)
    v0, v1 = tensors[1]
    tensors[1] = (1.01 * v0, 1.01 * v1)
    bad = MpsChain(tensors, chain.boundary_in, chain.boundary_out)
    cert = verify_chain(bad, exemplar_vector(3, 0.6))
    assert not cert.passed
    assert cert.residuals[1] == pytest.approx(1.01 ** 2 - 1, abs=1e-12)
    assert isometry_residuals(bad)[0] < 1e-12


def test_generic_and_exemplar_agree_up_to_phase():
    vec = exemplar_vector(7, 0.45)
    a = contract_chain(exemplar_chain(ExemplarState(7, 0.45)))
    b = contract_chain(generic_chain(vec, 8))
    assert abs(np.vdot(a, b)) == pytest.approx(1, abs=1e-10)


def test_input_validation():
    with pytest.raises(ValueError):
        ExemplarState(4, 0.5)
    with pytest.raises(ValueError):
        ExemplarState(3, 1.5)
    with pytest.raises(ValueError):
        exemplar_lambdas(ExemplarState(3, 0.5), 4)
    with pytest.raises(ValueError):
        generic_chain(np.ones(8), 3)
    with pytest.raises(ValueError):
        generic_chain(np.ones(8) / math.sqrt(8), 4)
    with pytest.raises(ValueError):
        generic_chain(np.ones(2**15) / 2**7.5, 15)
    with pytest.raises(ValueError):
        verify_chain(exemplar_chain(ExemplarState(3, 0.5)), np.ones(8))


def test_chain_shape_checks():
    eye = np.eye(2)
    with pytest.raises(ValueError):
        MpsChain([(eye, np.eye(3))], [1, 0], [1, 0])
    with pytest.raises(ValueError):
        MpsChain([(eye, eye)], [1], [1, 0])
    with pytest.raises(ValueError):
        MpsChain([(np.ones((2, 1)), np.ones((2, 1))), (np.ones((1, 3)), np.ones((1, 3)))], [1], [1])
    with pytest.raises(ValueError):
        MpsChain([], [1], [1])
