import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import ACCEPTANCE, EXTRA, jts, label, random_z
from tkkcones.errors import DomainError, StructuralError
from tkkcones.jts import HermitianJts

ALL = ACCEPTANCE + EXTRA


def unit(Z, i, j=None):
    k = Z._slots.index((i, j) if j is not None else (i,))
    return Z.basis_vector(k)


def jts_residuals(Z, u, v, w, x, y):
    T = Z.triple
    sym = np.abs(T(u, v, w) - T(w, v, u)).max()
    lhs = Z.box(u, v) @ Z.box(x, y) - Z.box(x, y) @ Z.box(u, v)
    rhs = Z.box(T(u, v, x), y) - Z.box(x, T(y, u, v))
    scale = max(1.0, np.abs(Z.box(u, v)).max() * np.abs(Z.box(x, y)).max())
    return sym, np.abs(lhs - rhs).max() / scale


@pytest.mark.parametrize("d", ALL, ids=label)
def test_axioms(d, rng):
    Z = jts(d)
    for _ in range(20):
        sym, five = jts_residuals(Z, *(random_z(rng, Z) for _ in range(5)))
        assert sym < 1e-12 and five < 1e-10
    for _ in range(10):
        u, v, x, y = (random_z(rng, Z) for _ in range(4))
        lhs = Z.inner(Z.box(u, v) @ x, y)
        assert abs(lhs - Z.inner(x, Z.box(v, u) @ y)) < 1e-10 * (1 + abs(lhs))


def test_type_i_values():
    Z = jts(("I", 2, 2))
    E11, E12, E21, E22 = (unit(Z, i, j) for i, j in ((0, 0), (0, 1), (1, 0), (1, 1)))
    np.testing.assert_allclose(Z.triple(E11, E11, E11), E11)
    # oracle: 1/2 (x y* z + z y* x) evaluated on 2x2 matrices
    X, Y = Z.native(E11), Z.native(E12)
    np.testing.assert_allclose(Z.native(Z.triple(E11, E11, E12)), 0.5 * (X @ X.conj().T @ Y + Y @ X.conj().T @ X))
    np.testing.assert_allclose(Z.triple(E11, E11, E12), 0.5 * E12)
    np.testing.assert_allclose(Z.triple(E11, E12, np.zeros(4)), 0)
    np.testing.assert_allclose(Z.box(E11, E11), np.diag([1, 0.5, 0.5, 0]))
    np.testing.assert_allclose(Z.box(E11, np.zeros(4)), 0)
    np.testing.assert_allclose(jts(("I", 1, 1)).box(np.ones(1), np.ones(1)), np.eye(1))
    assert Z.is_tripotent(E11 + E22) and Z.rank_of(E11 + E22) == 2
    assert not Z.is_tripotent(2 * E11)
    assert Z.is_tripotent(np.zeros(4)) and Z.rank_of(np.zeros(4)) == 0
    assert Z.orthogonal(E11, E22) and not Z.orthogonal(E11, E12)
    assert Z.leq(E11, E11 + E22) and Z.leq(E11, E11) and not Z.leq(E11 + E22, E11)
    p = Z.peirce(E11)
    assert [p[k].shape[1] for k in (0.0, 0.5, 1.0)] == [1, 2, 1]
    assert abs(abs(np.vdot(p[0.0][:, 0], E22)) - 1) < 1e-12
    assert Z.peirce(E11 + E22)[0.0].shape[1] == 0
    assert Z.peirce(np.zeros(4))[0.0].shape[1] == 4
    X1 = Z.real_form_x1(E11 + E22)
    assert X1.dim == 4 and X1.rank == 2
    assert jts(("I", 1, 1)).real_form_x1(np.ones(1)).dim == 1
    assert Z.real_form_x1(E11).dim == 1
    with pytest.raises(DomainError):
        Z.rank_of(2 * E11)


@pytest.mark.parametrize("d", ALL, ids=label)
def test_frames(d):
    Z = jts(d)
    expected = {"I": lambda p, q: min(p, q), "II": lambda n: n // 2, "III": lambda n: n, "IV": lambda n: 2}
    assert Z.rank == expected[d[0]](*d[1:])
    fr = Z.find_frame().members
    assert len(fr) == Z.rank
    for i, e in enumerate(fr):
        assert Z.is_tripotent(e) and Z.rank_of(e) == 1
        assert abs(Z.inner(e, e) - 1) < 1e-12
        for c in fr[i + 1:]:
            assert Z.orthogonal(e, c)
    blocks = Z.joint_peirce(fr)
    assert sum(b.shape[1] for b in blocks.values()) == Z.n
    # Peirce rule {Z_0(e) Z_1(e) Z} = 0
    e = fr[0]
    p = Z.peirce(e)
    for a in p[0.0].T:
        for b in p[1.0].T:
            for k in range(Z.n):
                assert np.abs(Z.triple(a, b, Z.basis_vector(k))).max() < 1e-12


def test_frame_i23():
    Z = jts(("I", 2, 3))
    fr = Z.find_frame().members
    np.testing.assert_allclose(fr[0], unit(Z, 0, 0))
    np.testing.assert_allclose(fr[1], unit(Z, 1, 1))


@pytest.mark.parametrize("d", ALL, ids=label)
def test_automorphisms(d, rng):
    Z = jts(d)
    k = Z.random_automorphism(rng)
    for _ in range(5):
        u, v, w = (random_z(rng, Z) for _ in range(3))
        lhs = k(Z.triple(u, v, w))
        assert np.abs(lhs - Z.triple(k(u), k(v), k(w))).max() < 1e-10 * (1 + np.abs(lhs).max())
    for s in Z.frame_symmetries():
        image = [s(e) for e in Z.standard_frame()]
        for e in image:
            assert Z.is_tripotent(e) and Z.rank_of(e) == 1


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_support_tripotent_rank(seed):
    Z = jts(("I", 2, 3))
    r = np.random.default_rng(seed)
    k = Z.random_automorphism(r)
    e = k(Z.standard_frame()[0])
    z = 2.5 * e
    s = Z.support_tripotent(z)
    np.testing.assert_allclose(s, e, atol=1e-8)


def test_descriptor_errors():
    with pytest.raises(StructuralError):
        HermitianJts("IV", 2)
    with pytest.raises(StructuralError):
        HermitianJts("V", 3)
    Z = HermitianJts.from_descriptor({"kind": "spin", "n": 3})
    assert Z.kind == "IV" and Z.rank == 2
    with pytest.raises(StructuralError):
        Z.triple(np.zeros(2), np.zeros(3), np.zeros(3))
