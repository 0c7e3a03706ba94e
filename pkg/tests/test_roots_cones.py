import numpy as np
import pytest
from flint import fmpq
from hypothesis import given, settings, strategies as st
from scipy.optimize import nnls

from conftest import ACCEPTANCE, EXTRA, jts, label, lie, roots
from tkkcones import roots_cones as rc

ALL = ACCEPTANCE + EXTRA

# frozen from the exact double description (Cartan coordinates, primitive integer rays)
OMEGA_MINUS = {
    ("I", 1, 1): {"rays": 1, "facets": 1, "faces": 2},
    ("I", 2, 2): {"rays": 4, "facets": 4, "faces": 10},
    ("I", 2, 3): {"rays": 6, "facets": 5, "faces": 22},
    ("III", 2): {"rays": 2, "facets": 2, "faces": 4},
    ("IV", 4): {"rays": 4, "facets": 4, "faces": 10},
    ("II", 4): {"rays": 6, "facets": 8, "faces": 28},
}
I22_RAYS = {(0, 1, 0), (1, 0, 0), (2, 2, -1), (2, 2, 1)}


def ints(v):
    return tuple(int(fmpq(x).p) for x in v)


def extreme_oracle(gens):
    """Indices of generators not in the cone of the others (nonnegative least squares)."""
    G = np.array(gens, dtype=float)
    out = []
    for i in range(len(G)):
        others = np.delete(G, i, axis=0)
        if others.size == 0:
            out.append(i)
            continue
        _, res = nnls(others.T, G[i])
        if res > 1e-9:
            out.append(i)
    return out


@pytest.mark.parametrize("d", ALL, ids=label)
def test_root_counts(d):
    g, rsd = lie(d), roots(d)
    Z = jts(d)
    assert len(rsd.roots) + rsd.t.dim == g.dim
    assert len(rsd.noncompact) == 2 * Z.n
    assert len(rsd.positive_noncompact) == Z.n
    assert len(rsd.compact) + len(rsd.noncompact) == len(rsd.roots)
    assert rsd.t.centralizer_dim() == rsd.t.dim
    assert rsd.t.abelian_residual() == 0
    assert rsd.coroot_check() == 0
    assert rsd.strongly_orthogonal()
    assert len(rsd.gammas) == Z.rank
    # gamma_k(i e_l box e_l) = delta_kl
    for k, gm in enumerate(rsd.gammas):
        for l, e in enumerate(Z.standard_frame()):
            x = rsd.t.coords_exact(g.exact(g.element_c(1j * Z.box(e, e))))
            val = sum((a * b for a, b in zip(gm, x)), fmpq(0))
            assert val == (1 if k == l else 0)
    for a in rsd.roots:
        h0 = sum((x * y for x, y in zip(a.exact, rsd.h0_coords)), fmpq(0))
        assert h0 in (-1, 0, 1) and a.compact == (h0 == 0)


def test_root_values():
    rsd = roots(("I", 2, 2))
    assert (len(rsd.roots), len(rsd.compact), len(rsd.noncompact)) == (12, 4, 8)
    rsd = roots(("I", 1, 1))
    assert len(rsd.roots) == 2 and not rsd.compact


@pytest.mark.parametrize("d", list(OMEGA_MINUS), ids=label)
def test_omega_cones(d):
    rsd = roots(d)
    wm, wp = rc.omega_cones(rsd)
    exp = OMEGA_MINUS[d]
    assert (len(wm.rays), len(wm.facets), len(wm.faces())) == (exp["rays"], exp["facets"], exp["faces"])
    assert wp.contains_cone(wm)
    # double description against an independent extreme-ray oracle
    gens = [a.coroot_exact for a in rsd.positive_noncompact]
    ext = {tuple(np.array([float(x) for x in gens[i]]) / np.linalg.norm([float(x) for x in gens[i]])) for i in extreme_oracle(gens)}
    rays = {tuple(np.array(r, dtype=float) / np.linalg.norm(np.array(r, dtype=float))) for r in wm.rays}
    assert {tuple(np.round(v, 12)) for v in ext} == {tuple(np.round(v, 12)) for v in rays}
    # duality: omega_plus is the dual of omega_minus for -B on t
    dual = rc.dual_in_t(rsd, wm)
    assert dual.contains_cone(wp) and wp.contains_cone(dual)
    assert wm.membership(rsd.t.coords(lie(d).h0)) == "Interior"


def test_omega_values():
    wm, wp = rc.omega_cones(roots(("I", 2, 2)))
    assert {ints(r) for r in wm.rays} == I22_RAYS
    assert not wm.contains_cone(wp)
    wm1, wp1 = rc.omega_cones(roots(("I", 1, 1)))
    assert len(wm1.rays) == 1 and wm1.contains_cone(wp1) and wp1.contains_cone(wm1)
    # type III: the short coroot is the sum of the long ones and is not extreme
    rsd = roots(("III", 2))
    wm3, _ = rc.omega_cones(rsd)
    cor = [tuple(a.coroot_exact) for a in rsd.positive_noncompact]

    def direction(v):
        v = np.array([float(x) for x in v])
        return tuple(np.round(v / np.linalg.norm(v), 12))

    ray_dirs = {direction(r) for r in wm3.rays}
    longs = [c for c in cor if direction(c) in ray_dirs]
    assert len(longs) == 2
    short = [c for c in cor if c not in longs]
    assert short == [tuple(a + b for a, b in zip(*longs))]


@pytest.mark.parametrize("d", ACCEPTANCE, ids=label)
def test_frame_symmetry_invariance(d):
    g, rsd = lie(d), roots(d)
    wm, _ = rc.omega_cones(rsd)
    rays = {tuple(np.round(np.array(r, float) / np.linalg.norm(np.array(r, float)), 10)) for r in wm.rays}
    for s in jts(d).frame_symmetries():
        A = g.Ad_automorphism(s)
        for r in wm.rays:
            y = rsd.t.coords(A @ rsd.t.element([float(x) for x in r]))
            assert tuple(np.round(y / np.linalg.norm(y), 10)) in rays


@pytest.mark.parametrize("d", [("I", 2, 2), ("III", 2)], ids=label)
def test_oracles(d):
    g = lie(d)
    e = jts(d).standard_frame()[0]
    X = g.X_plus(e)
    res = rc.certify_in_minimal(g, X)
    assert res.found is not None and res.found.terms == 1
    assert rc.certify_in_minimal(g, g.h0, budget=400).found is not None
    assert rc.certify_in_minimal(g, -X).found is None
    wit = rc.refute_in_maximal(g, -X)
    assert wit.found is not None and wit.found.pairing < 0
    for x, cert in rc.certified_samples(g, 20):
        assert rc.refute_in_maximal(g, x, budget=200).found is None
        np.testing.assert_allclose(cert.generators @ cert.weights, x, atol=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(1, 20), min_size=3, max_size=3))
def test_interior_membership(weights):
    rsd = roots(("I", 2, 2))
    wm, wp = rc.omega_cones(rsd)
    x = [sum(fmpq(w) * fmpq(r[i]) for w, r in zip(weights + [1], wm.rays)) for i in range(3)]
    assert wm.contains_exact(x) and wp.contains_exact(x)
    assert wm.membership([float(t) for t in x]) == "Interior"
    assert wm.membership([-float(t) for t in x]) == "Outside"
