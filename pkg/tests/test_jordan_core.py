import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tkkcones.errors import DomainError, StructuralError
from tkkcones.jordan_core import (EuclideanJordanAlgebra, cone_face, cone_membership,
                                  jordan_product, peirce_decompose_eja, spectral_decompose)

ALGEBRAS = [("sym", 2), ("sym", 3), ("herm", 2), ("herm", 3), ("spin", 3), ("spin", 5)]


def build(kind, n):
    return EuclideanJordanAlgebra.from_descriptor({"kind": kind, "n": n})


def sym2():
    return EuclideanJordanAlgebra.sym(2)


def m2(A, rows):
    return A.from_matrix(np.array(rows, dtype=float))


def test_sym2_products():
    A = sym2()
    E11, E12 = m2(A, [[1, 0], [0, 0]]), m2(A, [[0, 1], [1, 0]])
    np.testing.assert_allclose(jordan_product(A, E11, E11), E11, atol=1e-14)
    # oracle: 1/2 (xy + yx) computed on matrices
    x, y = A.to_matrix(E11), A.to_matrix(E12)
    np.testing.assert_allclose(A.to_matrix(jordan_product(A, E11, E12)), 0.5 * (x @ y + y @ x), atol=1e-14)
    np.testing.assert_allclose(jordan_product(A, E11, E12), 0.5 * E12, atol=1e-14)


@pytest.mark.parametrize("kind,n", ALGEBRAS)
def test_structure_axioms(kind, n, rng):
    A = build(kind, n)
    E = np.eye(A.dim)
    for i in range(A.dim):
        for j in range(A.dim):
            np.testing.assert_allclose(A.product(E[i], E[j]), A.product(E[j], E[i]), atol=1e-12)
    for _ in range(20):
        x, y = rng.normal(size=A.dim), rng.normal(size=A.dim)
        x2 = A.product(x, x)
        lhs = A.product(x2, A.product(x, y))
        rhs = A.product(x, A.product(x2, y))
        assert np.abs(lhs - rhs).max() <= 1e-10 * (1 + np.abs(lhs).max())
        u, v, w = rng.normal(size=(3, A.dim))
        assert abs(A.inner(A.product(u, v), w) - A.inner(v, A.product(u, w))) < 1e-10
    np.testing.assert_allclose(A.product(A.unit, E[0]), E[0], atol=1e-14)
    T = np.array([[A.trace_form(a, b) for b in E] for a in E])
    assert np.linalg.eigvalsh(T).min() > 0
    assert abs(A.inner(A.unit, A.unit) - A.rank) < 1e-12


def test_sym2_spectral_and_membership():
    A = sym2()
    pairs = spectral_decompose(A, m2(A, [[3, 0], [0, -1]]))
    got = sorted((round(lam, 12), tuple(np.round(A.to_matrix(c).ravel().real, 12))) for lam, c in pairs)
    assert got == [(-1.0, (0.0, 0.0, 0.0, 1.0)), (3.0, (1.0, 0.0, 0.0, 0.0))]
    assert spectral_decompose(A, np.zeros(A.dim)) == []
    (lam, c), = spectral_decompose(A, A.unit)
    assert abs(lam - 1) < 1e-12 and np.allclose(c, A.unit)
    assert str(cone_membership(A, A.unit)) == "Interior"
    assert str(cone_membership(A, m2(A, [[1, 0], [0, 0]]))) == "Boundary(1)"
    assert str(cone_membership(A, m2(A, [[1, 0], [0, -1]]))) == "Outside"


@pytest.mark.parametrize("kind,n", ALGEBRAS)
def test_spectral_reconstructs(kind, n, rng):
    A = build(kind, n)
    for _ in range(10):
        x = rng.normal(size=A.dim)
        pairs = spectral_decompose(A, x)
        np.testing.assert_allclose(sum(lam * c for lam, c in pairs), x, atol=1e-9)
        for _, c in pairs:
            assert A.is_idempotent(c)
        s = cone_membership(A, A.product(x, x)).status
        assert s in ("interior", "boundary")


def test_sym2_peirce_and_face():
    A = sym2()
    E11, E12, E22 = m2(A, [[1, 0], [0, 0]]), m2(A, [[0, 1], [1, 0]]), m2(A, [[0, 0], [0, 1]])
    sp = peirce_decompose_eja(A, E11)
    for key, v in ((0.0, E22), (0.5, E12), (1.0, E11)):
        assert sp[key].shape[1] == 1
        q = sp[key][:, 0]
        assert abs(abs(A.inner(q, v)) - A.norm(q) * A.norm(v)) < 1e-12
    assert peirce_decompose_eja(A, A.unit)[1.0].shape[1] == A.dim
    assert peirce_decompose_eja(A, np.zeros(A.dim))[0.0].shape[1] == A.dim
    face = cone_face(A, E11)
    np.testing.assert_allclose(face.dual_idempotent, E22, atol=1e-14)
    assert face.contains(2 * E22) and not face.contains(E11) and not face.contains(-E22)
    # brute force over the PSD slice: points of the cone orthogonal to E11
    for t in np.linspace(-1, 1, 9):
        for s in np.linspace(0, 2, 5):
            x = m2(A, [[0, t], [t, s]])
            in_cone = cone_membership(A, x).status != "outside"
            assert face.contains(x) == (in_cone and abs(A.inner(x, E11)) < 1e-12)
    assert cone_face(A, np.zeros(A.dim)).dim == A.dim
    assert cone_face(A, A.unit).dim == 0


@pytest.mark.parametrize("kind,n", ALGEBRAS)
def test_peirce_rules(kind, n):
    A = build(kind, n)
    c = spectral_decompose(A, np.arange(1, A.dim + 1, dtype=float))[0][1]
    sp = peirce_decompose_eja(A, c)
    for a in sp[1.0].T:
        for b in sp[0.0].T:
            assert np.abs(A.product(a, b)).max() < 1e-10
    for i, j in ((0.0, 0.5), (0.0, 1.0), (0.5, 1.0)):
        assert np.abs(sp[i].T @ A.gram @ sp[j]).max(initial=0.0) < 1e-10
    # face duality: the face of c is exposed by c and its complement is dual
    face = cone_face(A, c)
    dual = cone_face(A, A.unit - c)
    for x in face.x0_basis.T:
        assert abs(A.inner(x, c)) < 1e-10
    assert face.dim + dual.dim <= A.dim


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=3, max_size=3))
def test_squares_in_cone(vals):
    A = sym2()
    x = np.array(vals)
    assert cone_membership(A, A.product(x, x)).status != "outside"


def test_errors():
    A = sym2()
    with pytest.raises(StructuralError):
        A.product(np.zeros(2), np.zeros(3))
    with pytest.raises(DomainError):
        peirce_decompose_eja(A, 2 * A.unit)
    with pytest.raises(StructuralError):
        EuclideanJordanAlgebra.from_descriptor({"kind": "octonion", "n": 3})
