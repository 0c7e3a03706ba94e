"""Acceptance suite: one PASS/FAIL line per criterion over the desk-scale algebras."""
import numpy as np
import pytest

from conftest import ACCEPTANCE, classes, context, jts, label, lie, random_z, roots
from tkkcones import _exact as ex
from tkkcones import faces as F
from tkkcones import roots_cones as rc
from tkkcones import semigroup as S
from tkkcones.tkk_lie import closed_form_dim

SEED = 0xC0FFEE
# dimension formulas per type, written out independently of the library
DIM_FORMULA = {
    "I": lambda p, q: (p + q) ** 2 - 1,
    "II": lambda n: n * (2 * n - 1),
    "III": lambda n: n * (2 * n + 1),
    "IV": lambda n: (n + 2) * (n + 1) // 2,
}


def report(capsys, number, title, failures):
    status = "PASS" if not failures else "FAIL"
    detail = "" if not failures else "  [" + "; ".join(failures) + "]"
    with capsys.disabled():
        print(f"\ncriterion {number:>2} {title}: {status}{detail}")
    assert not failures, failures


def partial_sums(Z):
    fr = Z.standard_frame()
    return [sum(fr[:k]) for k in range(1, len(fr) + 1)]


def test_criterion_01_jts_axioms(capsys):
    bad = []
    for d in ACCEPTANCE:
        Z, rng = jts(d), np.random.default_rng(SEED)
        T, worst = Z.triple, 0.0
        for _ in range(100):
            u, v, w, x, y = (random_z(rng, Z) for _ in range(5))
            s = np.linalg.norm(u) * np.linalg.norm(v) * np.linalg.norm(w)
            worst = max(worst, np.abs(T(u, v, w) - T(w, v, u)).max() / s)
            lhs = Z.box(u, v) @ Z.box(x, y) - Z.box(x, y) @ Z.box(u, v)
            rhs = Z.box(T(u, v, x), y) - Z.box(x, T(y, u, v))
            scale = np.abs(Z.box(u, v)).max() * np.abs(Z.box(x, y)).max()
            worst = max(worst, np.abs(lhs - rhs).max() / scale)
        if worst > 1e-10:
            bad.append(f"{label(d)} residual {worst:.2e}")
    report(capsys, 1, "JTS axioms", bad)


def jacobi_residual(C):
    J = (np.einsum("ijm,mkl->ijkl", C, C) + np.einsum("jkm,mil->ijkl", C, C)
         + np.einsum("kim,mjl->ijkl", C, C))
    return np.abs(J).max()


def test_criterion_02_lie_construction(capsys):
    bad = []
    for d in ACCEPTANCE:
        g = lie(d)
        jac = jacobi_residual(g.structure)
        expected = DIM_FORMULA[d[0]](*d[1:])
        if jac > 1e-9:
            bad.append(f"{label(d)} Jacobi {jac:.2e}")
        if not g.dim == expected == closed_form_dim(g.Z):
            bad.append(f"{label(d)} dim {g.dim} != {expected}")
    report(capsys, 2, "Lie construction", bad)


def test_criterion_03_killing(capsys):
    bad = []
    for d in ACCEPTANCE:
        g, rng = lie(d), np.random.default_rng(SEED)
        worst = 0.0
        for _ in range(50):
            x, y = rng.normal(size=(2, g.dim))
            kb, kc = g.killing(x, y), g.killing_closed_form(x, y)
            worst = max(worst, abs(kb - kc) / max(1.0, abs(kb)))
        # p^+ and p^- are the +-i eigenspaces of ad h0; B is complex bilinear there
        w, V = np.linalg.eig(g.ad(g.h0))
        K = g.killing_matrix
        iso = 0.0
        for lam in (1j, -1j):
            P = V[:, np.abs(w - lam) < 1e-8]
            P = P / np.linalg.norm(P, axis=0)
            iso = max(iso, np.abs(P.T @ K @ P).max())
            if P.shape[1] != g.Z.n:
                bad.append(f"{label(d)} dim p = {P.shape[1]}")
        if worst > 1e-8:
            bad.append(f"{label(d)} Killing relative error {worst:.2e}")
        if iso > 1e-9:
            bad.append(f"{label(d)} isotropy {iso:.2e}")
    report(capsys, 3, "Killing cross-check", bad)


def test_criterion_04_cayley(capsys):
    bad = []
    for d in ACCEPTANCE:
        g, rng = lie(d), np.random.default_rng(SEED)
        Z = g.Z
        for e in list(Z.standard_frame()) + partial_sums(Z)[1:]:
            t = g.cayley_elements(e)
            rel = max(t_ for t_ in g.cayley_relations(t).values())
            found = g.cayley_test(t.x_plus)
            if rel > 1e-9:
                bad.append(f"{label(d)} relations {rel:.2e}")
            if found is None or not found.h1:
                bad.append(f"{label(d)} X_e^+ rejected")
                continue
            err = np.abs(g.tripotent_from_cayley(found).e - e).max()
            if err > 1e-9:
                bad.append(f"{label(d)} round trip {err:.2e}")
        accepted = sum(g.cayley_test(rng.normal(size=g.dim)) is not None for _ in range(100))
        if accepted:
            bad.append(f"{label(d)} accepted {accepted} random elements")
    report(capsys, 4, "Cayley suite", bad)


def test_criterion_05_grading_heisenberg(capsys):
    bad = []
    for d in ACCEPTANCE:
        g, rng = lie(d), np.random.default_rng(SEED)
        Z = g.Z
        for e in partial_sums(Z):
            dims = g.grading(e).dims
            x1, zh = Z.real_form_x1(e).dim, 2 * Z.peirce(e)[0.5].shape[1]
            if (dims[0], dims[4], dims[1], dims[3]) != (x1, x1, zh, zh):
                bad.append(f"{label(d)} grading dims {dims}")
            h = g.heisenberg(e)
            res = h.bracket_residual()
            if res > 1e-9:
                bad.append(f"{label(d)} phi bracket {res:.2e}")
            B = h.z_half
            if not B:
                continue
            for _ in range(100):
                u = sum(rng.normal() * b for b in B)
                ok = h.positivity(u).status != "outside" and np.abs(h.h_form(u, u)).max() > 1e-9
                if not ok:
                    bad.append(f"{label(d)} h_e(u,u) outside the cone")
                    break
    report(capsys, 5, "grading and Heisenberg", bad)


def test_criterion_06_roots_cones(capsys):
    bad = []
    rays = {("I", 2, 2): 4, ("III", 2): 2}
    for d in ACCEPTANCE:
        g, rsd = lie(d), roots(d)
        if len(rsd.roots) + rsd.t.dim != g.dim or len(rsd.noncompact) != 2 * g.Z.n:
            bad.append(f"{label(d)} root count {len(rsd.roots)}")
        if len(rsd.compact) + len(rsd.noncompact) != len(rsd.roots):
            bad.append(f"{label(d)} classification not total")
        wm, wp = rc.omega_cones(rsd)
        if not wp.contains_cone(wm):
            bad.append(f"{label(d)} omega^- not inside omega^+")
        if d in rays and len(wm.rays) != rays[d]:
            bad.append(f"{label(d)} {len(wm.rays)} extreme rays")
        if not rsd.strongly_orthogonal():
            bad.append(f"{label(d)} gammas not strongly orthogonal")
    report(capsys, 6, "roots and cones", bad)


def test_criterion_07_face_catalogue(capsys):
    bad = []
    for d in ACCEPTANCE:
        g, ctx, cls = lie(d), context(d), classes(d)
        r = g.Z.rank
        if len(cls) != (r + 1) * (r + 2) // 2:
            bad.append(f"{label(d)} {len(cls)} classes")
        for cl in cls:
            failed = [k for k, v in cl.face.checks.items() if not v]
            if failed:
                bad.append(f"{label(d)} {cl.label} fails {failed}")
        audit = F.cartan_slice_face_audit(g, ctx)
        if not audit["ok"]:
            dims = sorted({u["dim"] for u in audit["unmatched"]})
            bad.append(f"{label(d)} slice audit matched {len(audit['matched'])}/{audit['faces']}, "
                       f"unmatched face dims {dims}")
    report(capsys, 7, "face catalogue", bad)


def test_criterion_08_exposedness(capsys):
    bad = []
    for d in ACCEPTANCE:
        g = lie(d)
        samples = [x for x, _ in rc.certified_samples(g, 500, SEED)]
        for cl in classes(d):
            rep = F.exposedness_check(g, cl.face, samples, tol=1e-9, span_tol=1e-7)
            if rep["samples"] != 500 or rep["violations"] or rep["kernel_outside_span"]:
                bad.append(f"{label(d)} {cl.label}: {rep['violations']} violations, "
                           f"{rep['kernel_outside_span']} off-span kernel samples")
    report(capsys, 8, "exposedness audit", bad)


def test_criterion_09_strata(capsys):
    bad = []
    for d in ACCEPTANCE:
        g, ctx = lie(d), context(d)
        rng = np.random.default_rng(SEED)
        pool = [g.Ad_automorphism(g.Z.random_automorphism(rng), exact=True) for _ in range(20)]
        for cl in classes(d):
            wrong, moved = 0, 0
            for _ in range(20):
                s = F.face_interior_sample(g, cl.face, rng, ctx)
                wrong += F.stratum_of(g, s.xi, s.witness, ctx).astuple() != cl.label
                v = ex.qvec(s.xi)
                for A in pool:
                    col = A * v
                    lab = F.stratum_of(g, [col[i, 0] for i in range(g.dim)], s.witness, ctx).astuple()
                    moved += lab != cl.label
            if wrong or moved:
                bad.append(f"{label(d)} {cl.label}: {wrong} mislabelled, {moved} conjugates relabelled")
    report(capsys, 9, "strata", bad)


def test_criterion_10_semigroup(capsys):
    bad = []
    for d in [("I", 1, 1), ("I", 2, 2)]:
        g, ctx = lie(d), context(d)
        mr = S.build_embedding(g)
        rng = np.random.default_rng(SEED)
        pool = [g.Ad_automorphism(g.Z.random_automorphism(rng), exact=True) for _ in range(10)]
        worst = 0.0
        for i in range(100):
            s = F.face_interior_sample(g, ctx.face(0, 0), rng, ctx)
            col = pool[i % len(pool)] * ex.qvec(s.xi)
            xq = [col[j, 0] for j in range(g.dim)]
            eta = [0.5 * rng.normal(size=g.dim)]
            dec = S.decompose(mr, S.semigroup_exp(mr, eta, xq, s.witness))
            xf = np.array([float(x) for x in xq])
            worst = max(worst, dec.roundtrip, float(np.abs(dec.xi - xf).max()))
        if worst > 1e-8:
            bad.append(f"{label(d)} round trip {worst:.2e}")
        dec = S.decompose(mr, S.group_element(mr, [rng.normal(size=g.dim)]))
        if np.linalg.norm(dec.xi) > 1e-9:
            bad.append(f"{label(d)} group element gives |xi| = {np.linalg.norm(dec.xi):.2e}")
        for k in range(1, g.Z.rank + 1):
            X = ctx.xt.x_plus(ctx.xt.vec(ctx.partial(k)))
            if S.decompose(mr, S.semigroup_exp(mr, None, X, "construction")).xi_exact != X:
                bad.append(f"{label(d)} unipotent case k={k} not exact")
    report(capsys, 10, "semigroup", bad)


def test_criterion_11_fingerprints(capsys):
    bad = []
    for d in ACCEPTANCE:
        fps = context(d).orbit_fingerprints
        r = jts(d).rank
        if sorted(fps) != list(range(r + 1)) or len(set(fps.values())) != r + 1:
            bad.append(f"{label(d)} fingerprints {fps}")
    report(capsys, 11, "orbit fingerprints", bad)
