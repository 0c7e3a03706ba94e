"""Compact Cartan subalgebra, roots, and the Cartan slices of the invariant cones.

The Cartan subalgebra is built from a frame: ``t = t_minus + t_plus`` with
``t_minus`` spanned by ``i e_j □ e_j`` and ``t_plus`` a maximal torus of the
derivations that kill every ``e_j``. A root is stored as the real functional
``a = -i alpha`` on the coordinates of ``t``.

Pairings between elements of g use ``-B`` (B the Killing form). On ``t`` this
coincides with the positive inner product.
"""
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations

import numpy as np
from flint import fmpq, fmpq_mat
from scipy.optimize import nnls

from . import _exact as ex
from .errors import ConsistencyError, DomainError, NumericalError
from .jts import realify_vec

SEPARATION_TOL = 1e-7
MEMBERSHIP_TOL = 1e-10
CERTIFICATE_TOL = 1e-7


# -- Cartan subalgebra -------------------------------------------------------


@dataclass
class CompactCartan:
    """Compact Cartan subalgebra adapted to a frame.

    ``basis_exact`` holds rational coordinate vectors (lists of fmpq); the first
    ``len(frame)`` of them are ``i e_j □ e_j``.
    """

    g: object
    frame: list
    basis_exact: list
    n_minus: int

    @property
    def dim(self):
        return len(self.basis_exact)

    @cached_property
    def basis(self):
        return np.array([[float(t) for t in v] for v in self.basis_exact]).T

    @cached_property
    def gram(self):
        """``-B`` restricted to ``t`` (positive definite)."""
        return -self.basis.T @ self.g.killing_matrix @ self.basis

    @cached_property
    def gram_exact(self):
        B = self.g.killing_exact
        T = ex.qcolumns(self.basis_exact)
        return -(T.transpose() * B * T)

    def coords(self, x, check=True):
        """Coordinates in the t basis of an element of g lying in t."""
        c, *_ = np.linalg.lstsq(self.basis, x, rcond=None)
        if check and np.abs(self.basis @ c - x).max(initial=0.0) > 1e-8 * max(1.0, np.abs(x).max()):
            raise DomainError("element does not lie in t")
        return c

    def coords_exact(self, xq):
        T = ex.qcolumns(self.basis_exact)
        rows = ex.pivots(T.transpose())
        c = ex.submatrix(T, rows, range(self.dim)).solve(ex.qvec([xq[r] for r in rows]))
        out = [c[i, 0] for i in range(self.dim)]
        if T * c != ex.qvec(xq):
            raise DomainError("element does not lie in t")
        return out

    def element(self, c):
        return self.basis @ np.asarray(c, dtype=float)

    def element_exact(self, c):
        out = [fmpq(0)] * self.g.dim
        for ci, v in zip(c, self.basis_exact):
            ci = ex.to_fmpq(ci)
            if ci != 0:
                out = [a + ci * b for a, b in zip(out, v)]
        return out

    def project(self, x):
        """Orthogonal projection ``p_t`` (for the positive inner product)."""
        P = self.g.inner_matrix
        c = np.linalg.solve(self.basis.T @ P @ self.basis, self.basis.T @ P @ np.asarray(x))
        return self.basis @ c

    def abelian_residual(self):
        g = self.g
        worst = 0
        for u, v in combinations(self.basis_exact, 2):
            br = g.ad_exact(u) * ex.qvec(v)
            worst = max(worst, 0 if ex.qis_zero(br) else 1)
        return worst

    def centralizer_dim(self):
        g = self.g
        stack = fmpq_mat(g.dim * self.dim, g.dim)
        for k, v in enumerate(self.basis_exact):
            A = g.ad_exact(v)
            for i in range(g.dim):
                for j in range(g.dim):
                    stack[k * g.dim + i, j] = A[i, j]
        return g.dim - stack.rank()


def cartan_from_frame(g, frame=None):
    """Compact Cartan subalgebra ``t`` adapted to a frame (default: the standard frame)."""
    Z = g.Z
    frame = Z.standard_frame() if frame is None else [np.asarray(e, dtype=complex) for e in frame]
    minus = [g.exact(g.element_c(1j * Z.box(e, e))) for e in frame]

    # derivations d with d e_j = 0 and [d, i e_j □ e_j] = 0
    dk = g.kdim
    rows = []
    for e in frame:
        Ev = ex.qvec([ex.to_fmpq(ex.snap(x, 64)) for x in realify_vec(e)])
        for i in range(2 * Z.n):
            rows.append([(D * Ev)[i, 0] for D in g.aut_exact])
    for m in minus:
        A = g.ad_exact(m)
        for i in range(g.dim):
            rows.append([A[i, j] for j in range(dk)])
    kernel = ex.nullspace(ex.qmat(rows)) if rows else ex.qeye(dk)
    mprime = [ex.qcol(kernel, j) + [fmpq(0)] * (2 * Z.n) for j in range(kernel.ncols())]
    plus = _maximal_torus(g, mprime)
    basis = minus + plus
    t = CompactCartan(g, frame, basis, len(minus))
    if t.abelian_residual():
        raise ConsistencyError("t is not Abelian")
    if t.centralizer_dim() != t.dim:
        raise ConsistencyError("t is not maximal Abelian in g")
    return t


def _maximal_torus(g, space):
    """Greedy maximal Abelian subalgebra of a compact subalgebra given by a rational basis.

    Basis vectors are tried in order and kept when they commute with the
    previous choices; the centralizer is then searched until the choice is
    self-centralizing in ``space``.
    """
    if not space:
        return []
    S = ex.qcolumns(space)
    chosen = []

    def commutes(x):
        return all(ex.qis_zero(g.ad_exact(x) * ex.qvec(y)) for y in chosen)

    for v in space:
        if commutes(v):
            chosen.append(v)
    while True:
        # centralizer of chosen inside span(space)
        blocks = [g.ad_exact(c) * S for c in chosen]
        stack = fmpq_mat(g.dim * len(blocks), S.ncols())
        for k, B in enumerate(blocks):
            for i in range(g.dim):
                for j in range(S.ncols()):
                    stack[k * g.dim + i, j] = B[i, j]
        N = ex.nullspace(stack)
        if N.ncols() == len(chosen):
            return chosen
        C = S * N
        cand = None
        for j in range(C.ncols()):
            v = ex.qcol(C, j)
            T = ex.qcolumns(chosen + [v])
            if T.rank() > len(chosen):
                cand = v
                break
        chosen.append(cand)


# -- roots ---------------------------------------------------------------


@dataclass
class Root:
    functional: np.ndarray  # values of -i alpha on the t basis
    exact: list  # same, as fmpq
    vector: np.ndarray  # complex root vector in g_C
    compact: bool
    positive: bool
    coroot: np.ndarray  # t coordinates of i H_alpha
    coroot_exact: list

    @property
    def noncompact_positive(self):
        return (not self.compact) and self.positive


@dataclass
class RootSystemData:
    t: CompactCartan
    roots: list
    h0_coords: list
    gammas: list = field(default_factory=list)

    @property
    def compact(self):
        return [a for a in self.roots if a.compact]

    @property
    def noncompact(self):
        return [a for a in self.roots if not a.compact]

    @property
    def positive_noncompact(self):
        return [a for a in self.roots if a.noncompact_positive]

    def index_of(self, functional_exact):
        for k, a in enumerate(self.roots):
            if a.exact == list(functional_exact):
                return k
        return None

    def is_root(self, functional_exact):
        return self.index_of(functional_exact) is not None

    def strongly_orthogonal(self):
        """True when no ``gamma_k ± gamma_l`` (k != l) is a root."""
        for a, b in combinations(self.gammas, 2):
            for s in (1, -1):
                if self.is_root([x + s * y for x, y in zip(a, b)]):
                    return False
        return True

    def coroot_check(self):
        """Max of ``|alpha(H_alpha) - 2|``, computed exactly (0 when all hold)."""
        worst = fmpq(0)
        for a in self.roots:
            v = sum((x * y for x, y in zip(a.exact, a.coroot_exact)), fmpq(0))
            worst = max(worst, abs(v - 2))
        return worst


def root_decomposition(g, t, seed=0):
    rng = np.random.default_rng(seed)
    weights = rng.uniform(1.0, 2.0, size=t.dim) * rng.choice([-1, 1], size=t.dim)
    H = t.element(weights)
    A = g.ad(H)
    w, V = np.linalg.eig(A)
    nz = np.abs(w) > SEPARATION_TOL
    vals = np.sort(w[nz].imag)
    if len(vals) > 1 and np.diff(vals).min() < SEPARATION_TOL:
        raise NumericalError("root eigenvalues cluster; perturb the generic Cartan element")
    ads = [g.ad(t.basis[:, i]) for i in range(t.dim)]
    h0 = t.coords_exact(g.exact(g.h0))
    Gq = t.gram_exact.inv()
    roots = []
    for k in np.flatnonzero(nz):
        v = V[:, k]
        nv = np.vdot(v, v).real
        lam = np.array([np.vdot(v, Ai @ v) / nv for Ai in ads])
        a = lam.imag
        resid = max(np.linalg.norm(Ai @ v - l * v) for Ai, l in zip(ads, lam))
        if resid > 1e-7:
            raise NumericalError("root vector is not a joint eigenvector of t")
        try:
            aq = [ex.to_fmpq(f) for f in ex.snap_vec(a, 10**4, tol=1e-9)]
        except ValueError:
            raise NumericalError("root functional is not rational on the t basis") from None
        h0val = sum((x * y for x, y in zip(aq, h0)), fmpq(0))
        # i H_alpha = 2 G^-1 a / (a^T G^-1 a), with G = -B on t
        col = Gq * ex.qvec(aq)
        q = sum((aq[i] * col[i, 0] for i in range(len(aq))), fmpq(0))
        coroot = [col[i, 0] * 2 / q for i in range(len(aq))]
        roots.append(Root(a, aq, v, h0val == 0, h0val > 0, np.array([float(c) for c in coroot]), coroot))
    if len(roots) + t.dim != g.dim:
        raise ConsistencyError("root count does not match dim g - dim t")
    roots.sort(key=lambda r: [(-x) for x in r.exact])
    gammas = []
    for k in range(t.n_minus):
        gammas.append([fmpq(1) if i == k else fmpq(0) for i in range(t.dim)])
    return RootSystemData(t, roots, h0, gammas)


# -- polyhedral cones ---------------------------------------------------------


def _primitive(v):
    """Scale a rational vector to a primitive integer vector (positive direction kept)."""
    fr = [Fraction(int(x.p), int(x.q)) for x in v]
    from math import gcd, lcm

    den = 1
    for f in fr:
        den = lcm(den, f.denominator)
    ints = [int(f * den) for f in fr]
    gg = 0
    for i in ints:
        gg = gcd(gg, abs(i))
    if gg == 0:
        return tuple(ints)
    return tuple(i // gg for i in ints)


def _dot(a, b):
    return sum((x * y for x, y in zip(a, b)), fmpq(0))


class PolyhedralCone:
    """Pointed polyhedral cone in ``Q^d`` with both descriptions kept exactly.

    Build it with ``from_generators`` or ``from_inequalities``; the other
    description is derived by brute-force double description, which is fine
    for the small dimensions met here.
    """

    def __init__(self, dim, rays, facets, equalities, source):
        self.dim = dim
        self.rays = rays  # primitive integer tuples
        self.facets = facets  # normals n with <n, x> >= 0
        self.equalities = equalities  # normals n with <n, x> = 0
        self.source = source

    def __repr__(self):
        return f"PolyhedralCone(dim={self.dim}, rays={len(self.rays)}, facets={len(self.facets)})"

    @property
    def span_dim(self):
        return self.dim - len(self.equalities)

    @property
    def is_solid(self):
        return not self.equalities

    @property
    def is_pointed(self):
        return True

    @classmethod
    def from_generators(cls, gens, dim=None):
        gens = [[ex.to_fmpq(x) for x in v] for v in gens]
        gens = [v for v in gens if any(x != 0 for x in v)]
        d = dim if dim is not None else len(gens[0])
        if not gens:
            return cls(d, [], [], [_unit(d, i) for i in range(d)], "V")
        G = ex.qcolumns(gens)
        eqs = [_primitive(ex.qcol(ex.nullspace(G.transpose()), j)) for j in range(ex.nullspace(G.transpose()).ncols())]
        k = G.rank()
        facets = set()
        for sub in combinations(range(len(gens)), k - 1):
            rowsM = [gens[i] for i in sub] + [list(map(fmpq, e)) for e in eqs]
            M = ex.qmat(rowsM) if rowsM else fmpq_mat(0, d)
            N = ex.nullspace(M) if rowsM else ex.qeye(d)
            if N.ncols() != 1:
                continue
            n = ex.qcol(N, 0)
            vals = [_dot(n, v) for v in gens]
            if all(x >= 0 for x in vals):
                facets.add(_primitive(n))
            elif all(x <= 0 for x in vals):
                facets.add(_primitive([-x for x in n]))
        if k == 1:
            facets = {_primitive(gens[0])}
        if any(all(_dot(list(map(fmpq, n)), v) == 0 for v in gens) for n in facets):
            raise ConsistencyError("degenerate facet")
        dup = _dedupe_rays(gens)
        # a generator is extreme iff the facets tight at it have rank k-1
        rays = []
        for r in dup:
            tight = [list(map(fmpq, n)) for n in facets if _dot(list(map(fmpq, n)), list(map(fmpq, r))) == 0]
            rk = ex.qmat(tight + [list(map(fmpq, e)) for e in eqs]).rank() if (tight or eqs) else 0
            if k == 1 or rk == d - 1:
                rays.append(r)
        if k == 1:
            rays = dup[:1]
            if any(_primitive([-x for x in gens[0]]) == r for r in dup):
                raise DomainError("generators contain a line")
        return cls(d, sorted(rays), sorted(facets), eqs, "V")

    @classmethod
    def from_inequalities(cls, normals, dim=None):
        normals = [[ex.to_fmpq(x) for x in n] for n in normals]
        d = dim if dim is not None else len(normals[0])
        if ex.qmat(normals).rank() < d:
            raise DomainError("inequality cone is not pointed")
        dual = cls.from_generators(normals, d)
        rays = sorted(dual.facets)
        facets = sorted(dual.rays)
        return cls(d, rays, facets, [], "H")

    def dual(self):
        """Dual cone for the standard pairing on coordinates."""
        if self.equalities:
            raise DomainError("dual of a non-solid cone is not pointed")
        return PolyhedralCone.from_generators([list(map(fmpq, n)) for n in self.facets], self.dim)

    def contains_exact(self, x):
        x = [ex.to_fmpq(v) for v in x]
        return all(_dot(list(map(fmpq, n)), x) >= 0 for n in self.facets) and all(
            _dot(list(map(fmpq, n)), x) == 0 for n in self.equalities
        )

    def membership(self, x, tol=MEMBERSHIP_TOL):
        """``Interior``, ``Boundary`` or ``Outside`` (interior relative to the span)."""
        x = np.asarray(x, dtype=float)
        scale = max(1.0, np.abs(x).max(initial=0.0))
        for n in self.equalities:
            nv = np.array(n, dtype=float)
            if abs(nv @ x) > tol * scale * np.linalg.norm(nv):
                return "Outside"
        vals = [np.array(n, dtype=float) @ x / np.linalg.norm(n) for n in self.facets]
        if any(v < -tol * scale for v in vals):
            return "Outside"
        if not self.rays:
            return "Boundary"
        if np.abs(x).max(initial=0.0) <= tol or any(v <= tol * scale for v in vals):
            return "Boundary"
        return "Interior"

    def contains_cone(self, other):
        return all(self.contains_exact(list(map(fmpq, r))) for r in other.rays)

    def faces(self):
        """All faces as frozensets of ray indices (including the zero face and the cone)."""
        found = {frozenset(range(len(self.rays)))}
        F = [list(map(fmpq, n)) for n in self.facets]
        R = [list(map(fmpq, r)) for r in self.rays]
        for m in range(1, len(F) + 1):
            for sub in combinations(range(len(F)), m):
                found.add(frozenset(i for i, r in enumerate(R) if all(_dot(F[j], r) == 0 for j in sub)))
        return sorted(found, key=lambda s: (len(s), sorted(s)))

    def face_dim(self, face):
        if not face:
            return 0
        return ex.qmat([list(map(fmpq, self.rays[i])) for i in face]).rank()

    def to_json(self):
        return {
            "dim": self.dim,
            "rays": [[str(x) for x in r] for r in self.rays],
            "facets": [[str(x) for x in n] for n in self.facets],
            "equalities": [[str(x) for x in n] for n in self.equalities],
        }


def _unit(d, i):
    return tuple(1 if j == i else 0 for j in range(d))


def _dedupe_rays(gens):
    seen, out = set(), []
    for v in gens:
        p = _primitive(v)
        if p not in seen:
            seen.add(p)
            out.append(p)
    return out


def extreme_rays(cone):
    if not cone.is_pointed:
        raise DomainError("extreme rays need a pointed cone")
    return list(cone.rays)


def omega_cones(rsd):
    """``(omega_minus, omega_plus)`` in t coordinates.

    ``omega_minus`` is generated by ``i H_alpha``, ``omega_plus`` is cut out by
    ``-i alpha >= 0``, alpha over the adapted positive non-compact roots.
    Inequalities are taken in the pairing ``-B`` on t, so a functional ``a``
    becomes the normal ``G^-1 a``; with this, ``omega_plus`` is the dual of
    ``omega_minus``.
    """
    pos = rsd.positive_noncompact
    wm = PolyhedralCone.from_generators([a.coroot_exact for a in pos], rsd.t.dim)
    wp = PolyhedralCone.from_inequalities([a.exact for a in pos], rsd.t.dim)
    if not wp.contains_cone(wm):
        raise ConsistencyError("omega_minus is not contained in omega_plus")
    return wm, wp


def omega_membership(cone, H, tol=MEMBERSHIP_TOL):
    return cone.membership(H, tol)


def dual_in_t(rsd, cone):
    """Dual cone of ``cone`` for the pairing ``-B`` restricted to t."""
    G = rsd.t.gram_exact
    normals = []
    for r in cone.rays:
        v = G * ex.qvec(list(map(fmpq, r)))
        normals.append(ex.qcol(v, 0))
    return PolyhedralCone.from_inequalities(normals, rsd.t.dim)


# -- membership oracles for the invariant cones ---------------------------------


@dataclass
class Certificate:
    """``xi = sum_i weights[i] * generators[:, i]`` with each generator in the minimal cone."""

    weights: np.ndarray
    generators: np.ndarray
    residual: float
    tripotents: list = field(default_factory=list)

    @property
    def terms(self):
        return int(np.count_nonzero(self.weights > 0))


@dataclass
class Witness:
    eta: np.ndarray
    pairing: float
    tripotent: np.ndarray


@dataclass
class OracleResult:
    found: object
    inconclusive: bool
    samples: int


def pairing(g, x, y):
    """Invariant pairing ``-B(x, y)`` for which the maximal cone is dual to the minimal one."""
    return -g.killing(x, y)


class NilpotentGenerators:
    """Seeded supply of primitive tripotents and their elements ``X_c^+``."""

    def __init__(self, g, seed=0xC0FFEE):
        self.g = g
        self.rng = np.random.default_rng(seed)
        Z = g.Z
        e = Z.standard_frame()[0]
        self.base = e
        self.tripotents = []
        for k in Z.frame_symmetries():
            for f in Z.standard_frame():
                for ph in (1, -1, 1j, -1j):
                    self.tripotents.append(ph * f)
        self.tripotents = _dedupe_complex(self.tripotents)

    def extend(self, count):
        Z = self.g.Z
        while len(self.tripotents) < count:
            k = Z.random_automorphism(self.rng)
            for f in Z.standard_frame():
                self.tripotents.append(k(f))
        return self.tripotents[:count]

    def matrix(self, count):
        return np.array([self.g.X_plus(c) for c in self.extend(count)]).T


def _dedupe_complex(vs):
    out = []
    for v in vs:
        if not any(np.allclose(v, w) for w in out):
            out.append(v)
    return out


def certify_in_minimal(g, xi, budget=400, seed=0xC0FFEE, supply=None):
    """Try to write ``xi`` as a nonnegative combination of K-conjugates of ``X_c^+``.

    Returns an OracleResult whose ``found`` is a Certificate or None. A None is
    inconclusive and says nothing about non-membership.
    """
    xi = np.asarray(xi, dtype=float)
    supply = supply or NilpotentGenerators(g, seed)
    if np.abs(xi).max(initial=0.0) == 0:
        return OracleResult(Certificate(np.zeros(0), np.zeros((g.dim, 0)), 0.0), False, 0)
    trips = supply.extend(budget)
    M = np.array([g.X_plus(c) for c in trips]).T
    w, res = nnls(M, xi, maxiter=50 * M.shape[1])
    scale = max(1.0, np.linalg.norm(xi))
    if res <= CERTIFICATE_TOL * scale:
        keep = w > 1e-12 * w.max()
        res = float(np.linalg.norm(M[:, keep] @ w[keep] - xi))
        if res <= CERTIFICATE_TOL * scale:
            return OracleResult(Certificate(w[keep], M[:, keep], res, [t for t, k in zip(trips, keep) if k]), False, budget)
    return OracleResult(None, True, budget)


def refute_in_maximal(g, xi, budget=1000, seed=0xC0FFEE, supply=None):
    """Search ``eta = X_c^+`` (c primitive, K-conjugates) with ``-B(xi, eta) < 0``."""
    xi = np.asarray(xi, dtype=float)
    supply = supply or NilpotentGenerators(g, seed)
    trips = supply.extend(budget)
    Bxi = -g.killing_matrix @ xi
    best = None
    for c in trips:
        eta = g.X_plus(c)
        val = float(Bxi @ eta)
        if val < -1e-9 and (best is None or val < best.pairing):
            best = Witness(eta, val, c)
    return OracleResult(best, best is None, len(trips))


def certified_samples(g, count, seed=0xC0FFEE, terms=(1, 4)):
    """Random points of the minimal cone with explicit certificates.

    Each sample is a positive combination of a few ``X_c^+``; the combination
    itself is the certificate.
    """
    rng = np.random.default_rng(seed)
    supply = NilpotentGenerators(g, seed)
    pool = supply.extend(max(4 * count, 64))
    out = []
    for _ in range(count):
        m = int(rng.integers(terms[0], terms[1] + 1))
        idx = rng.choice(len(pool), size=m, replace=False)
        w = rng.uniform(0.1, 1.0, size=m)
        M = np.array([g.X_plus(pool[i]) for i in idx]).T
        out.append((M @ w, Certificate(w, M, 0.0, [pool[i] for i in idx])))
    return out


def build_root_data(g, seed=0):
    t = cartan_from_frame(g)
    rsd = root_decomposition(g, t, seed)
    return rsd
