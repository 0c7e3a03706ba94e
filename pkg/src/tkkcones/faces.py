"""Faces of the minimal invariant cone and the stratification by rank labels.

A face is described by a pair of tripotents ``c <= e``. Its algebra is

    g_F = g_0(e) + h^{e,c},   h^{e,c} = {eta_u^e : u in Z_1/2(e) ∩ Z_1/2(c)} + g^c[2]

when ``rk e < r``, and ``g_F = g^c[2]`` when ``e`` is maximal. Elements are
built in exact rational coordinates wherever they feed the Jordan
decomposition, so that stratum labels never depend on a tolerance.
"""
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

import numpy as np
from flint import fmpq, fmpq_mat

from . import _exact as ex
from .errors import ConsistencyError, DomainError
from .jts import realify_vec
from .roots_cones import PolyhedralCone, build_root_data, omega_cones, pairing
from .tkk_lie import span_residual

RANK_TOL = 1e-9
SPAN_TOL = 1e-7
FINGERPRINT_LENGTH = 5


# -- exact helpers on Z ---------------------------------------------------


class ExactTriple:
    """Exact real-coordinate operations on Z needed to build face algebras."""

    def __init__(self, g):
        self.g = g
        self.Z = g.Z
        self.N = 2 * self.Z.n
        J = fmpq_mat(self.N, self.N)
        for k in range(self.Z.n):
            J[2 * k + 1, 2 * k] = 1
            J[2 * k, 2 * k + 1] = -1
        self.J = J  # multiplication by i

    def vec(self, z):
        """Exact real coordinates of a Gaussian-rational complex vector."""
        return [ex.to_fmpq(ex.snap(x, 10**4, 1e-12)) for x in realify_vec(z)]

    def box(self, u, v):
        B = self.Z.real_box_exact
        out = fmpq_mat(self.N, self.N)
        for a, ua in enumerate(u):
            if ua == 0:
                continue
            for b, vb in enumerate(v):
                if vb != 0:
                    out += B[a][b] * (ua * vb)
        return out

    def apply(self, M, u):
        col = M * ex.qvec(u)
        return [col[i, 0] for i in range(M.nrows())]

    def peirce_projections(self, e):
        L = self.box(e, e)
        eye = ex.qeye(self.N)
        return {
            0.0: (eye - L) * (eye - L * 2),
            0.5: L * (eye - L) * 4,
            1.0: L * (L * 2 - eye),
        }

    def quadratic(self, e):
        """Real matrix of ``z -> {e z e}``."""
        cols = []
        for a in range(self.N):
            x = [fmpq(1) if i == a else fmpq(0) for i in range(self.N)]
            cols.append(self.apply(self.box(e, x), e))
        return ex.qcolumns(cols)

    def x1_basis(self, c):
        """Rational basis of ``X_1(c)`` (empty for c = 0)."""
        if all(x == 0 for x in c):
            return []
        P1 = self.peirce_projections(c)[1.0]
        Q = self.quadratic(c)
        M = (P1 + Q * P1) * fmpq(1, 2)
        return [ex.qcol(M, j) for j in ex.pivots(M)]

    def half_intersection(self, e, c):
        """Rational basis of ``Z_1/2(e) ∩ Z_1/2(c)`` (c <= e, so the projections commute)."""
        if all(x == 0 for x in c) or all(x == 0 for x in e):
            return []
        M = self.peirce_projections(e)[0.5] * self.peirce_projections(c)[0.5]
        return [ex.qcol(M, j) for j in ex.pivots(M)]

    def element(self, D, u):
        g = self.g
        kap = g.aut_coords_exact(D) if D is not None else [fmpq(0)] * g.kdim
        return list(kap) + list(u)

    def eta(self, e, u, sign=1):
        return self.element((self.box(e, u) - self.box(u, e)) * (2 * sign), u)

    def zeta(self, e, u, sign=1):
        return self.element((self.box(e, u) - self.box(u, e)) * sign, u)

    def x_plus(self, e):
        """``X_e^+ = (i e□e, -i e/2)``."""
        if all(x == 0 for x in e):
            return [fmpq(0)] * self.g.dim
        return self.element(self.J * self.box(e, e), [x * fmpq(-1, 2) for x in self.apply(self.J, e)])

    def x_minus(self, e):
        if all(x == 0 for x in e):
            return [fmpq(0)] * self.g.dim
        return self.element(self.J * self.box(e, e) * (-1), [x * fmpq(-1, 2) for x in self.apply(self.J, e)])

    def g0_generators(self, e):
        """Rational spanning set of ``g_0(e)``."""
        P0 = self.peirce_projections(e)[0.0]
        z0 = [ex.qcol(P0, j) for j in ex.pivots(P0)]
        out = []
        for u, v in combinations(z0, 2):
            out.append(self.element(self.box(u, v) - self.box(v, u), [fmpq(0)] * self.N))
        for u in z0:
            out.append(self.element(None, u))
        return out


def _float(vs):
    return np.array([[float(x) for x in v] for v in vs]).T if vs else None


def _rank(cols, tol=RANK_TOL):
    if cols is None or cols.size == 0:
        return 0
    s = np.linalg.svd(cols, compute_uv=False)
    return int((s > tol * max(1.0, s[0])).sum())


def _basis(cols, tol=RANK_TOL):
    """Orthonormal (Euclidean) basis of the column span."""
    if cols is None or cols.size == 0:
        return np.zeros((0, 0))
    u, s, _ = np.linalg.svd(cols, full_matrices=False)
    k = int((s > tol * max(1.0, s[0])).sum())
    return u[:, :k]


def _empty(d):
    return np.zeros((d, 0))


def _qzero(v):
    return all(x == 0 for x in v)


# -- descriptors ------------------------------------------------------------


@dataclass
class FaceDescriptor:
    """Face ``F_{e,c}`` of the minimal cone with its algebra and exposing normal."""

    g: object
    e: np.ndarray
    c: np.ndarray
    label: tuple
    gF: np.ndarray  # basis columns
    sF: np.ndarray  # g_0(e)
    hF: np.ndarray  # nilpotent part
    zF: np.ndarray  # g^c[2]
    normal: np.ndarray
    normal_exact: list
    half_dim: int
    x1_dim: int
    exact_parts: dict = field(repr=False, default_factory=dict)
    checks: dict = field(default_factory=dict)

    @property
    def dim_gF(self):
        return self.gF.shape[1]

    @property
    def dim_zF(self):
        return self.zF.shape[1]

    @property
    def dim_nF(self):
        return self.hF.shape[1]

    def to_json(self):
        return {
            "label": list(self.label),
            "dim_gF": self.dim_gF,
            "dim_zF": self.dim_zF,
            "exposing_normal": [ex.fraction_str(x) for x in self.normal_exact],
        }


def _complement_maximal(Z, e):
    """A tripotent ``e' >= e`` of full rank (``e`` plus a maximal tripotent of ``Z_0(e)``)."""
    z0 = Z.peirce(e)[0.0]
    if z0.shape[1] == 0:
        return np.asarray(e, dtype=complex)
    rng = np.random.default_rng(7)
    z = z0 @ (rng.normal(size=z0.shape[1]) + 1j * rng.normal(size=z0.shape[1]))
    return np.asarray(e, dtype=complex) + Z.support_tripotent(z)


def exposing_normal(g, e, c, xt=None):
    """``n_{e,c} = -X_e^- + X_{e-c}^+`` (exact).

    Paired through ``<x, y> = -B(x, theta y)``, it is nonnegative on the cone
    (because ``theta n`` lies in the minimal cone) and its kernel is ``F_{e,c}``.
    """
    xt = xt or ExactTriple(g)
    eq, cq = xt.vec(e), xt.vec(c)
    dq = [a - b for a, b in zip(eq, cq)]
    xm = xt.x_minus(eq)
    xp = xt.x_plus(dq)
    return [-a + b for a, b in zip(xm, xp)]


def summed_spec_normal(g, e, c, xt=None):
    """The naive normal ``-X_e^- - X_c^-``; kept to show where it fails."""
    xt = xt or ExactTriple(g)
    a, b = xt.x_minus(xt.vec(e)), xt.x_minus(xt.vec(c))
    return [-x - y for x, y in zip(a, b)]


def general_face(g, e, c, xt=None):
    Z = g.Z
    e = np.asarray(e, dtype=complex)
    c = np.asarray(c, dtype=complex)
    zero = np.zeros(Z.n, dtype=complex)
    if not Z.is_tripotent(e) or not Z.is_tripotent(c):
        raise DomainError("faces are indexed by tripotents")
    ce = Z.norm(c) <= 1e-12
    if not ce and not np.allclose(c, e) and not Z.leq(c, e):
        raise DomainError("general_face needs c <= e")
    if Z.norm(e) <= 1e-12 and not ce:
        raise DomainError("general_face needs c <= e")
    xt = xt or ExactTriple(g)
    k = Z.rank_of(e) if Z.norm(e) > 1e-12 else 0
    ell = Z.rank_of(c) if not ce else 0
    eq, cq = xt.vec(e), xt.vec(c)
    d = g.dim

    if k == 0:
        s_gens = [[fmpq(1) if i == j else fmpq(0) for i in range(d)] for j in range(d)]
    elif k < Z.rank:
        s_gens = xt.g0_generators(eq)
    else:
        s_gens = []
    x1 = xt.x1_basis(cq)
    z_gens = [xt.zeta(cq, xt.apply(xt.J, u)) for u in x1]
    half = xt.half_intersection(eq, cq) if k < Z.rank else []
    h_gens = [xt.eta(eq, u) for u in half] + z_gens

    sF = _basis(_float(s_gens)) if s_gens else _empty(d)
    hF = _basis(_float(h_gens)) if h_gens else _empty(d)
    zF = _basis(_float(z_gens)) if z_gens else _empty(d)
    all_gens = s_gens + h_gens
    gF = _basis(_float(all_gens)) if all_gens else _empty(d)
    nq = exposing_normal(g, e, c, xt)
    fd = FaceDescriptor(
        g, e, c, (k, ell), gF, sF, hF, zF, np.array([float(x) for x in nq]), nq,
        len(half), len(x1),
        exact_parts={"s": s_gens, "h": h_gens, "z": z_gens, "half": half, "x1": x1, "e": eq, "c": cq},
    )
    fd.checks = validate_face(g, fd)
    bad = [name for name, ok in fd.checks.items() if not ok]
    if bad:
        raise ConsistencyError(f"face descriptor {fd.label} fails {bad}")
    return fd


def validate_face(g, fd):
    """Integer checks of the structural claims about a face descriptor."""
    Z = g.Z
    k, ell = fd.label
    out = {}
    B = fd.gF
    m = B.shape[1]
    brackets = [g.bracket(B[:, i], B[:, j]) for i in range(m) for j in range(i + 1, m)]
    if brackets:
        out["closed"] = _rank(np.hstack([B, np.array(brackets).T])) == m
    else:
        out["closed"] = True
    gc = g.grading(fd.c).spaces[2] if ell > 0 else _empty(g.dim)
    out["z_is_gc2"] = gc.shape[1] == fd.dim_zF and _rank(np.hstack([gc, fd.zF])) == fd.dim_zF
    out["center_is_z"] = _center_dim(g, B) == fd.dim_zF
    H = fd.hF
    hb = [g.bracket(H[:, i], H[:, j]) for i in range(H.shape[1]) for j in range(i + 1, H.shape[1])]
    if hb and fd.dim_zF:
        out["n_bracket_in_z"] = _rank(np.hstack([fd.zF, np.array(hb).T])) == fd.dim_zF
    else:
        out["n_bracket_in_z"] = all(np.abs(b).max(initial=0.0) < 1e-9 for b in hb)
    if k < Z.rank:
        out["dim_nF"] = fd.dim_nF == fd.half_dim + fd.x1_dim
        out["dim_gF"] = fd.dim_gF == fd.sF.shape[1] + fd.dim_nF
    else:
        out["dim_gF"] = fd.dim_gF == fd.x1_dim
    return out


def _center_dim(g, B):
    """Dimension of the center of the subalgebra spanned by B's columns."""
    m = B.shape[1]
    if m == 0:
        return 0
    blocks = []
    for j in range(m):
        blocks.append(np.array([g.bracket(B[:, i], B[:, j]) for i in range(m)]).T)
    M = np.vstack(blocks)
    return m - _rank(M)


def nilpotent_face(g, e, xt=None):
    """``Omega_1(e)`` as the face ``F_{e', e}`` with ``e' >= e`` maximal."""
    Z = g.Z
    e = np.asarray(e, dtype=complex)
    if Z.norm(e) <= 1e-12:
        zero = np.zeros(Z.n, dtype=complex)
        emax = sum(Z.standard_frame(), zero)
        return general_face(g, emax, zero, xt)
    return general_face(g, _complement_maximal(Z, e), e, xt)


# -- witnessed interior samples -------------------------------------------------


@dataclass
class SampleWitness:
    """How a sample was built: ``Ad(exp eta_1)...Ad(exp eta_m)(H + X)``."""

    label: tuple
    H: list
    X: list
    etas: list


@dataclass
class FaceSample:
    xi: list  # exact coordinates
    witness: SampleWitness

    @property
    def vector(self):
        return np.array([float(t) for t in self.xi])


class FaceContext:
    """Shared data for one algebra: roots, cones, exact helpers, fingerprints."""

    def __init__(self, g, seed=0):
        self.g = g
        self.Z = g.Z
        self.xt = ExactTriple(g)
        self.rsd = build_root_data(g, seed)
        self.t = self.rsd.t
        self.omega_minus, self.omega_plus = omega_cones(self.rsd)
        self.frame = self.Z.standard_frame()
        self._faces = {}
        self._g0_roots = {}

    def partial(self, k):
        return sum(self.frame[:k], np.zeros(self.Z.n, dtype=complex))

    def face(self, k, ell):
        if (k, ell) not in self._faces:
            self._faces[k, ell] = general_face(self.g, self.partial(k), self.partial(ell), self.xt)
        return self._faces[k, ell]

    def omega0_generators(self, k):
        """Exact t coordinates of ``i H_alpha`` for the positive non-compact roots of ``g_0(e_k)``."""
        if k not in self._g0_roots:
            if k == 0:
                roots = self.rsd.positive_noncompact
            elif k >= self.Z.rank:
                roots = []
            else:
                split = self.g.zero_grading_split(self.partial(k))
                P = self.g.inner_matrix
                roots = [
                    a for a in self.rsd.positive_noncompact
                    if span_residual(split.g0, a.vector.real, P) < 1e-7 and span_residual(split.g0, a.vector.imag, P) < 1e-7
                ]
            self._g0_roots[k] = [a.coroot_exact for a in roots]
        return self._g0_roots[k]

    def omega0_cone(self, k):
        gens = self.omega0_generators(k)
        if not gens:
            return PolyhedralCone.from_generators([], self.t.dim)
        return PolyhedralCone.from_generators(gens, self.t.dim)

    @cached_property
    def orbit_fingerprints(self):
        return {k: nilpotent_fingerprint(self.g, self.xt.x_plus(self.xt.vec(self.partial(k)))) for k in range(self.Z.rank + 1)}

    @cached_property
    def stratum_table(self):
        """Noncompact centralizer dimension of canonical samples, per k; must separate the k values.

        For a semisimple part in the stratum of rank ``k`` this count is the real
        dimension of the Peirce 1-space of ``e_k``; accidental eigenvalue
        coincidences only enlarge the compact part of the centralizer.
        """
        table = {}
        rng = np.random.default_rng(12345)
        for k in range(self.Z.rank + 1):
            s = face_interior_sample(self.g, self.face(k, 0), rng, ctx=self, conjugations=0)
            sig = self.g.centralizer_inertia(s.xi)[0]
            if sig in table and table[sig] != k:
                raise ConsistencyError(f"semisimple signatures of k={k} and k={table[sig]} coincide")
            table[sig] = k
        return table


def _rand_q(rng, lo=1, hi=2, den=97):
    num = int(rng.integers(lo * den, hi * den + 1))
    return fmpq(num, den)


def face_interior_sample(g, fd, seed=0, ctx=None, conjugations=2):
    """Witnessed point of the relative interior of a frame-adapted face ``F_{e,c}``.

    ``H`` is a positive rational combination of all generators of ``omega_0^-(e)``,
    ``X`` a positive definite diagonal point of the PSD cone of ``X_1(c)``, and the
    result is conjugated by ``exp(ad eta)`` for random rational ``eta`` in the
    nilpotent part of ``g_F``.
    """
    ctx = ctx or FaceContext(g)
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    k, ell = fd.label
    if not (np.allclose(fd.e, ctx.partial(k)) and np.allclose(fd.c, ctx.partial(ell))):
        raise DomainError("interior samples are built for faces given by frame partial sums")
    t = ctx.t
    coeffs = [fmpq(0)] * t.dim
    for gen in ctx.omega0_generators(k):
        w = _rand_q(rng)
        coeffs = [a + w * b for a, b in zip(coeffs, gen)]
    H = t.element_exact(coeffs)
    X = [fmpq(0)] * g.dim
    for j in range(ell):
        w = _rand_q(rng)
        X = [a + w * b for a, b in zip(X, ctx.xt.x_plus(ctx.xt.vec(ctx.frame[j])))]
    xi = [a + b for a, b in zip(H, X)]
    etas = []
    nil = fd.exact_parts["h"]
    for _ in range(conjugations if nil else 0):
        eta = [fmpq(0)] * g.dim
        for gen in nil:
            w = fmpq(int(rng.integers(-3, 4)), int(rng.integers(1, 4)))
            eta = [a + w * b for a, b in zip(eta, gen)]
        E = g.exp_nilpotent_exact(g.ad_exact(eta))
        col = E * ex.qvec(xi)
        xi = [col[i, 0] for i in range(g.dim)]
        etas.append(eta)
    return FaceSample(xi, SampleWitness((k, ell), H, X, etas))


# -- orbits and strata ----------------------------------------------------------


@dataclass
class NilpotentOrbitDatum:
    rank: int
    representative: list
    fingerprint: tuple
    invariant_checks: int = 0


def nilpotent_fingerprint(g, xq, length=FINGERPRINT_LENGTH):
    """Rank sequence of ``(ad x)^j``, j = 1..length, and the centralizer dimension."""
    seq = g.rank_sequence(xq, length)
    return seq, g.dim - seq[0]


def nilpotent_orbit(g, k, ctx=None, conjugations=50, seed=0xC0FFEE):
    ctx = ctx or FaceContext(g)
    if not 0 <= k <= g.Z.rank:
        raise DomainError("orbit rank out of range")
    rep = ctx.xt.x_plus(ctx.xt.vec(ctx.partial(k)))
    fp = nilpotent_fingerprint(g, rep)
    rng = np.random.default_rng(seed)
    for _ in range(conjugations if k else 0):
        A = g.Ad_automorphism(g.Z.random_automorphism(rng), exact=True)
        col = A * ex.qvec(rep)
        if nilpotent_fingerprint(g, [col[i, 0] for i in range(g.dim)]) != fp:
            raise ConsistencyError("orbit fingerprint is not K-invariant")
    return NilpotentOrbitDatum(k, rep, fp, conjugations if k else 0)


def closure_spot_check(g, k, m, ctx=None, eps=(fmpq(1, 10), fmpq(1, 1000), fmpq(1, 10**6))):
    """For ``k <= m``: ``X_{e_k}^+ + eps X_{e_m - e_k}^+`` lies in the orbit of rank m and tends to ``X_{e_k}^+``."""
    ctx = ctx or FaceContext(g)
    xt = ctx.xt
    a = xt.x_plus(xt.vec(ctx.partial(k)))
    rest = xt.x_plus(xt.vec(ctx.partial(m) - ctx.partial(k)))
    target = ctx.orbit_fingerprints[m]
    ok = True
    for t in eps:
        x = [p + t * q for p, q in zip(a, rest)]
        ok &= nilpotent_fingerprint(g, x) == target
    return ok


@dataclass
class StratumLabel:
    k: int
    l: int

    def astuple(self):
        return (self.k, self.l)


class Unclassified(Exception):
    pass


def stratum_of(g, xi, certificate, ctx=None):
    """Label ``(k, l)`` of a witnessed or certified point of the minimal cone.

    ``xi`` must be exact (a list of rationals). ``l`` is read from the nilpotent
    part's orbit fingerprint, ``k`` from the noncompact part of the semisimple
    part's centralizer.
    """
    if certificate is None:
        raise DomainError("stratum_of needs a membership certificate or construction witness")
    ctx = ctx or FaceContext(g)
    xs, xn = g.jordan_chevalley(xi)
    fp = nilpotent_fingerprint(g, xn)
    ells = [m for m, f in ctx.orbit_fingerprints.items() if f == fp]
    if len(ells) != 1:
        raise Unclassified(f"nilpotent fingerprint {fp} matches {ells}")
    ks = ctx.stratum_table.get(g.centralizer_inertia(xs)[0])
    if ks is None:
        raise Unclassified("centralizer inertia not in the table")
    if ells[0] > ks:
        raise Unclassified(f"inconsistent label ({ks}, {ells[0]})")
    return StratumLabel(ks, ells[0])


# -- enumeration, audits, exports ---------------------------------------------


@dataclass
class FaceClass:
    label: tuple
    face: FaceDescriptor
    conjugacy_checked: bool


def enumerate_face_classes(g, ctx=None):
    ctx = ctx or FaceContext(g)
    Z = g.Z
    r = Z.rank
    syms = Z.frame_symmetries()
    out = []
    for k in range(r + 1):
        for ell in range(k + 1):
            fd = ctx.face(k, ell)
            # second representative: the last k frame members, last l of them for c
            e2 = sum(ctx.frame[r - k:], np.zeros(Z.n, dtype=complex))
            c2 = sum(ctx.frame[r - ell:], np.zeros(Z.n, dtype=complex))
            found = any(np.allclose(s(e2), fd.e) and np.allclose(s(c2), fd.c) for s in syms)
            if found:
                fd2 = general_face(g, e2, c2, ctx.xt)
                found = fd2.label == fd.label and fd2.dim_gF == fd.dim_gF
            out.append(FaceClass((k, ell), fd, found))
    return out


def exposedness_check(g, fd, samples, tol=1e-9, span_tol=SPAN_TOL):
    """Sign and kernel audit of the exposing normal on known cone points.

    ``samples`` are vectors of the minimal cone; each is scaled to unit norm
    before pairing with ``<x, y> = -B(x, theta y)``.
    """
    n = fd.normal / np.linalg.norm(fd.normal) if np.linalg.norm(fd.normal) > 0 else fd.normal
    P = np.eye(g.dim)
    report = {"samples": 0, "violations": 0, "kernel": 0, "kernel_outside_span": 0, "min_pairing": np.inf}
    for s in samples:
        s = np.asarray(s, dtype=float)
        nrm = np.linalg.norm(s)
        report["samples"] += 1
        if nrm == 0:
            report["kernel"] += 1
            continue
        s = s / nrm
        p = g.inner(s, n)
        report["min_pairing"] = min(report["min_pairing"], p)
        if p < -tol:
            report["violations"] += 1
        if p <= tol:
            report["kernel"] += 1
            if span_residual(fd.gF, s, P) > span_tol:
                report["kernel_outside_span"] += 1
    return report


def t_weight_tripotents(g, t):
    """Primitive tripotents spanning the joint eigenlines of t on Z."""
    Z = g.Z
    rng = np.random.default_rng(3)
    M = sum(rng.normal() * g.kappa_of(t.basis[:, i]) for i in range(t.dim))
    _, V = np.linalg.eig(M)
    out = []
    for j in range(V.shape[1]):
        v = V[:, j]
        s = np.vdot(v, Z.triple(v, v, v)) / np.vdot(v, v)
        if abs(s) < 1e-12:
            continue
        e = v / np.sqrt(s.real)
        if Z.is_tripotent(e):
            out.append(e)
    return out


def cartan_slice_face_audit(g, ctx=None):
    """Match every face of ``omega^-`` to ``t ∩ span(g_F) ∩ omega^-`` for some pair (e, c).

    Candidates are orthogonal sums of t-weight primitive tripotents. Since
    ``t ∩ g_F`` only depends on ``e``, only ``e`` is varied. Unmatched faces are
    reported with the subalgebra generated by the ``X_c^+`` (c a t-weight
    primitive) orthogonal to the face's normal.
    """
    ctx = ctx or FaceContext(g)
    Z = g.Z
    t = ctx.t
    wm = ctx.omega_minus
    rays = [t.element([float(x) for x in r]) for r in wm.rays]
    faces = wm.faces()
    prims = t_weight_tripotents(g, t)
    slices = {frozenset(range(len(rays))): ("0", 0)}
    for m in range(1, Z.rank + 1):
        for sub in combinations(range(len(prims)), m):
            e = sum((prims[i] for i in sub), np.zeros(Z.n, dtype=complex))
            if not Z.is_tripotent(e) or Z.rank_of(e) != m:
                continue
            if m == Z.rank:
                slices.setdefault(frozenset(), ("max", m))
                continue
            g0 = g.zero_grading_split(e).g0
            inside = frozenset(i for i, x in enumerate(rays) if span_residual(g0, x, g.inner_matrix) < 1e-8)
            slices.setdefault(inside, (tuple(sub), m))
    matched, unmatched = [], []
    for f in faces:
        if f in slices:
            matched.append((sorted(f), slices[f][1]))
        else:
            unmatched.append({"rays": sorted(f), "dim": wm.face_dim(f), "diagnostic": _unmatched_diagnostic(g, ctx, f, prims)})
    return {"faces": len(faces), "matched": matched, "unmatched": unmatched,
            "ok": not unmatched}


def _unmatched_diagnostic(g, ctx, face, prims):
    """Subalgebra generated by the ``X_c^+`` in the face exposed by the sum of tight facet normals."""
    wm, t = ctx.omega_minus, ctx.t
    R = [list(map(fmpq, r)) for r in wm.rays]
    tight = [n for n in wm.facets if all(sum((fmpq(a) * b for a, b in zip(n, R[i])), fmpq(0)) == 0 for i in face)]
    nvec = np.sum([np.array(n, dtype=float) for n in tight], axis=0)
    lam = t.element(np.linalg.solve(t.gram, nvec))
    gens = []
    for c in prims:
        for ph in (1, -1, 1j, -1j):
            x = g.X_plus(ph * c)
            if abs(pairing(g, x, lam)) < 1e-9:
                gens.append(x)
    if not gens:
        return {"generated_dim": 0}
    B = _basis(np.array(gens).T)
    while True:
        new = [g.bracket(B[:, i], B[:, j]) for i in range(B.shape[1]) for j in range(i + 1, B.shape[1])]
        B2 = _basis(np.hstack([B, np.array(new).T])) if new else B
        if B2.shape[1] == B.shape[1]:
            break
        B = B2
    K = B.T @ g.killing_matrix @ B
    w = np.linalg.eigvalsh(0.5 * (K + K.T))
    return {
        "generated_dim": B.shape[1],
        "killing_nondegenerate": bool(np.abs(w).min() > 1e-8 * np.abs(w).max()),
        "killing_signature": (int((w > 0).sum()), int((w < 0).sum())),
    }


def face_order(ctx, classes, seed=0):
    """Inclusion order between class representatives.

    Both are faces of the minimal cone and ``F_{e',c'}`` is cut out by its
    exposing normal, so ``F_{e,c} ⊆ F_{e',c'}`` iff a relative interior point of
    ``F_{e,c}`` pairs to zero with that normal. The pairing is evaluated exactly.
    """
    g = ctx.g
    P = -(g.killing_exact * ex.qmat(np.diag(g.theta_diag).astype(int).tolist()))
    rng = np.random.default_rng(seed)
    points = {cl.label: ex.qvec(face_interior_sample(g, cl.face, rng, ctx).xi) for cl in classes}
    order = set()
    for a in classes:
        for b in classes:
            if a.label == b.label:
                continue
            val = (ex.qvec(b.face.normal_exact).transpose() * P * points[a.label])[0, 0]
            if val == 0:
                order.add((a.label, b.label))
    return order


def hasse_edges(order):
    edges = set(order)
    for a, b in order:
        for c, d in order:
            if b == c and (a, d) in edges:
                edges.discard((a, d))
    return sorted(edges)


def to_dot(classes, edges, name="faces"):
    lines = [f"digraph {name} {{", "  // inclusion order of face classes (k, l), exposing-normal test"]
    for cl in classes:
        k, ell = cl.label
        lines.append(f'  "{k},{ell}" [label="({k},{ell}) dim g_F={cl.face.dim_gF}"];')
    for a, b in edges:
        lines.append(f'  "{a[0]},{a[1]}" -> "{b[0]},{b[1]}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def to_json(classes):
    return [cl.face.to_json() for cl in classes]
