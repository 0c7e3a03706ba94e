"""The Lie algebra g = aut(Z) + Z of a Hermitian Jordan triple.

An element is a pair (kappa, u): kappa a triple derivation of Z and u in Z,
standing for the vector field kappa + (u - {z u z}) d/dz. The bracket is

    [(k1, u1), (k2, u2)] = ([k1, k2] + 2(u1 □ u2 - u2 □ u1), k1 u2 - k2 u1).

Elements are handled as real coordinate vectors: first the coordinates in a
rational basis of aut(Z) (each basis member is some ``x_a □ x_b - x_b □ x_a``
over the real basis of Z), then the interleaved real coordinates of u.
Structure constants are rational and kept exactly alongside a float copy.
"""
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from flint import fmpq, fmpq_mat
from scipy import linalg

from . import _exact as ex
from .errors import ConsistencyError, DomainError, ModeError
from .jordan_core import cone_membership
from .jts import complexify_mat, complexify_vec, realify_mat, realify_vec

CAYLEY_TOL = 1e-9


@dataclass(frozen=True)
class LieElement:
    """Pair form of an element: complex derivation matrix and Z-part."""

    kappa: np.ndarray
    u: np.ndarray


class LieAlgebraG:
    """Real Lie algebra of complete holomorphic vector fields on the domain of Z."""

    def __init__(self, Z):
        self.Z = Z
        N = 2 * Z.n
        self.zdim = N
        boxq = Z.real_box_exact
        gens, pairs = [], []
        for a in range(N):
            for b in range(a + 1, N):
                gens.append(ex.qflatten(boxq[a][b] - boxq[b][a]))
                pairs.append((a, b))
        piv = ex.pivots(ex.qcolumns(gens))
        self.aut_pairs = [pairs[i] for i in piv]
        self.aut_exact = [boxq[a][b] - boxq[b][a] for a, b in self.aut_pairs]
        self.kdim = len(self.aut_exact)
        self.dim = self.kdim + N
        K = ex.qcolumns([ex.qflatten(D) for D in self.aut_exact])
        self._rows = ex.pivots(K.transpose())
        self._kinv_exact = ex.submatrix(K, self._rows, range(self.kdim)).inv()
        self._K = ex.qfloat(K)
        self._kinv = ex.qfloat(self._kinv_exact)
        self.aut_float = np.array([ex.qfloat(D) for D in self.aut_exact])
        self._build_structure()

    def __repr__(self):
        return f"LieAlgebraG({self.Z.label}, dim={self.dim})"

    # -- coordinates ----------------------------------------------------

    def aut_coords_exact(self, D):
        """Exact aut(Z) coordinates of a rational real derivation matrix."""
        flat = ex.qflatten(D)
        c = self._kinv_exact * ex.qvec([flat[r] for r in self._rows])
        coeffs = [c[i, 0] for i in range(self.kdim)]
        rebuilt = fmpq_mat(self.zdim, self.zdim)
        for x, A in zip(coeffs, self.aut_exact):
            if x != 0:
                rebuilt += A * x
        if rebuilt != D:
            raise ConsistencyError("matrix is not a triple derivation in the span of the aut basis")
        return coeffs

    def aut_coords(self, D, check=True):
        D = np.asarray(D, dtype=float)
        c = self._kinv @ D.ravel()[self._rows]
        if check:
            resid = np.abs(self._K @ c - D.ravel()).max(initial=0.0)
            if resid > 1e-8 * max(1.0, np.abs(D).max(initial=0.0)):
                raise DomainError(f"matrix is not a triple derivation (residual {resid:.2e})")
        return c

    def element(self, kappa=None, u=None, check=True):
        """Coordinates of (kappa, u); kappa a real matrix, u real coordinates."""
        x = np.zeros(self.dim)
        if kappa is not None:
            x[: self.kdim] = self.aut_coords(kappa, check)
        if u is not None:
            x[self.kdim:] = np.asarray(u, dtype=float)
        return x

    def element_c(self, kappa=None, u=None, check=True):
        """Coordinates of (kappa, u) given as a complex matrix and complex Z-vector."""
        return self.element(None if kappa is None else realify_mat(kappa),
                            None if u is None else realify_vec(u), check)

    def xi(self, u):
        """The element (0, u)."""
        return self.element_c(u=u)

    def kappa_real(self, x):
        return np.tensordot(np.asarray(x)[: self.kdim], self.aut_float, axes=1)

    def kappa_of(self, x):
        return complexify_mat(self.kappa_real(x))

    def u_of(self, x):
        return complexify_vec(np.asarray(x)[self.kdim:])

    def pair(self, x):
        return LieElement(self.kappa_of(x), self.u_of(x))

    def from_pair(self, p):
        return self.element_c(p.kappa, p.u)

    # -- structure ------------------------------------------------------

    def _build_structure(self):
        dk, N, d = self.kdim, self.zdim, self.dim
        boxq = self.Z.real_box_exact
        cols = {}
        for i in range(d):
            for j in range(i + 1, d):
                v = [fmpq(0)] * d
                if i < dk and j < dk:
                    A, B = self.aut_exact[i], self.aut_exact[j]
                    v[:dk] = self.aut_coords_exact(A * B - B * A)
                elif i < dk:
                    v[dk:] = ex.qcol(self.aut_exact[i], j - dk)
                else:
                    a, b = i - dk, j - dk
                    v[:dk] = self.aut_coords_exact((boxq[a][b] - boxq[b][a]) * 2)
                cols[i, j] = v
        self.ad_exact_basis = []
        C = np.zeros((d, d, d))
        for i in range(d):
            M = fmpq_mat(d, d)
            for j in range(d):
                if i == j:
                    continue
                v = cols[i, j] if i < j else [-t for t in cols[j, i]]
                for k, t in enumerate(v):
                    if t != 0:
                        M[k, j] = t
                        C[i, j, k] = float(t)
            self.ad_exact_basis.append(M)
        self.structure = C
        self.structure.setflags(write=False)

    def bracket(self, x, y):
        return np.einsum("i,j,ijk->k", x, y, self.structure)

    def bracket_direct(self, x, y):
        """Bracket evaluated on the pair realization, independent of structure constants."""
        k1, k2 = self.kappa_real(x), self.kappa_real(y)
        u1, u2 = np.asarray(x)[self.kdim:], np.asarray(y)[self.kdim:]
        Z = self.Z
        kappa = k1 @ k2 - k2 @ k1 + 2 * (Z.real_box(u1, u2) - Z.real_box(u2, u1))
        return self.element(kappa, k1 @ u2 - k2 @ u1)

    def ad(self, x):
        return np.einsum("i,ijk->kj", x, self.structure)

    def ad_exact(self, xq):
        M = fmpq_mat(self.dim, self.dim)
        for t, A in zip(xq, self.ad_exact_basis):
            if t != 0:
                M += A * t
        return M

    def exact(self, x, max_den=10**4):
        """Snap float coordinates to rationals; raises ModeError when impossible."""
        try:
            return [ex.to_fmpq(f) for f in ex.snap_vec(x, max_den, tol=1e-10)]
        except ValueError as err:
            raise ModeError(str(err)) from None

    @staticmethod
    def to_float(xq):
        return np.array([float(t) for t in xq])

    @cached_property
    def h0(self):
        return self.element_c(kappa=1j * np.eye(self.Z.n))

    @cached_property
    def theta_diag(self):
        return np.concatenate([np.ones(self.kdim), -np.ones(self.zdim)])

    def theta(self, x):
        return self.theta_diag * x

    @cached_property
    def killing_matrix(self):
        C = self.structure
        return np.einsum("ilk,jkl->ij", C, C)

    @cached_property
    def killing_exact(self):
        d = self.dim
        M = fmpq_mat(d, d)
        ads = self.ad_exact_basis
        for i in range(d):
            for j in range(i, d):
                P = ads[i] * ads[j]
                t = sum((P[k, k] for k in range(d)), fmpq(0))
                M[i, j] = t
                M[j, i] = t
        return M

    def killing(self, x, y):
        return float(x @ self.killing_matrix @ y)

    @cached_property
    def inner_matrix(self):
        """Gram matrix of ``<x, y> = -B(x, theta y)``."""
        P = -self.killing_matrix * self.theta_diag[None, :]
        return 0.5 * (P + P.T)

    def inner(self, x, y):
        return float(x @ self.inner_matrix @ y)

    def norm(self, x):
        return float(np.sqrt(max(self.inner(x, x), 0.0)))

    def killing_closed_form(self, x, y):
        """Killing form from triple traces: ``B(d, u□v) = 2 tr((d u)□v)``,
        ``B(xi_u, xi_v) = 4 tr(u□v + v□u)``."""
        Z = self.Z
        R = [Z.real_basis_vector(a) for a in range(self.zdim)]
        d1 = self.kappa_of(x)
        total = 0.0
        for coef, (a, b) in zip(np.asarray(y)[: self.kdim], self.aut_pairs):
            if coef == 0:
                continue
            t = np.trace(Z.box(d1 @ R[a], R[b])) - np.trace(Z.box(d1 @ R[b], R[a]))
            total += coef * 2 * t.real
        u, v = self.u_of(x), self.u_of(y)
        total += 4 * np.trace(Z.box(u, v) + Z.box(v, u)).real
        return float(total)

    # -- automorphisms ------------------------------------------------

    def Ad_automorphism(self, k, exact=False):
        """Matrix of ``(kappa, u) -> (k kappa k^-1, k u)`` on coordinates."""
        R, Ri = k.real_exact, k.real_inverse_exact
        M = fmpq_mat(self.dim, self.dim)
        for j, D in enumerate(self.aut_exact):
            for i, t in enumerate(self.aut_coords_exact(R * D * Ri)):
                M[i, j] = t
        for a in range(self.zdim):
            for b in range(self.zdim):
                M[self.kdim + b, self.kdim + a] = R[b, a]
        return M if exact else ex.qfloat(M)

    @staticmethod
    def exp_nilpotent_exact(A):
        """``exp(A)`` for a nilpotent rational matrix (finite series)."""
        n = A.nrows()
        out, term = ex.qeye(n), ex.qeye(n)
        for k in range(1, n + 1):
            term = term * A * fmpq(1, k)
            if ex.qis_zero(term):
                return out
            out += term
        raise DomainError("matrix is not nilpotent")

    # -- Cayley triples --------------------------------------------------

    def cayley_elements(self, e):
        """(xi_e, X_e^+, X_e^-) with ``X_e^± = (±i e□e, -i e/2)``."""
        Z = self.Z
        if not Z.is_tripotent(e):
            raise DomainError("Cayley elements need a tripotent")
        if Z.norm(e) <= 1e-12:
            raise DomainError("the zero tripotent has no Cayley triple")
        e = np.asarray(e, dtype=complex)
        ee = Z.box(e, e)
        xp = self.element_c(1j * ee, -0.5j * e)
        xm = self.element_c(-1j * ee, -0.5j * e)
        return CayleyTriple(self.xi(e), xp, xm, e, h1=True)

    def X_plus(self, e):
        return self.cayley_elements(e).x_plus

    def X_minus(self, e):
        return self.cayley_elements(e).x_minus

    def cayley_test(self, x, tol=CAYLEY_TOL):
        """Cayley triple ``(-[x, theta x], x, -theta x)`` if ``[[theta x, x], x] = 2x``."""
        x = np.asarray(x, dtype=float)
        scale = max(1.0, self.norm(x))
        if self.norm(x) <= tol:
            return None
        tx = self.theta(x)
        if self.norm(self.bracket(self.bracket(tx, x), x) - 2 * x) > tol * scale ** 3:
            return None
        h = -self.bracket(x, tx)
        h1 = self.norm(self.bracket(self.h0, x) - 0.5 * h) <= tol * scale
        return CayleyTriple(h, x, -tx, None, h1=h1)

    def tripotent_from_cayley(self, t, tol=CAYLEY_TOL):
        if not t.h1:
            raise DomainError("only (H1)-Cayley triples correspond to tripotents")
        if np.abs(t.h[: self.kdim]).max(initial=0.0) > tol:
            raise DomainError("h is not of the form xi_e")
        e = self.u_of(t.h)
        Z = self.Z
        if not Z.is_tripotent(e):
            raise DomainError("h does not come from a tripotent")
        ref = self.cayley_elements(e)
        if self.norm(ref.x_plus - t.x_plus) > tol or self.norm(ref.x_minus - t.x_minus) > tol:
            raise DomainError("triple is not the Cayley triple of its tripotent")
        return Z.tripotent(e)

    def cayley_relations(self, t):
        """Residuals of the sl2 relations, theta-compatibility and (H1)."""
        b = self.bracket
        return {
            "h_xplus": self.norm(b(t.h, t.x_plus) - 2 * t.x_plus),
            "h_xminus": self.norm(b(t.h, t.x_minus) + 2 * t.x_minus),
            "xplus_xminus": self.norm(b(t.x_plus, t.x_minus) - t.h),
            "theta": self.norm(self.theta(t.x_plus) + t.x_minus),
            "h1": self.norm(b(self.h0, t.x_plus) - 0.5 * t.h),
        }

    # -- gradings --------------------------------------------------------

    def eta(self, e, u, sign=1):
        """``eta_u^{±e} = xi_u ± 2(e□u - u□e)``."""
        Z = self.Z
        return self.element_c(2 * sign * (Z.box(e, u) - Z.box(u, e)), u)

    def zeta(self, e, u, sign=1):
        """``zeta_u^{±e} = xi_u ± (e□u - u□e)``."""
        Z = self.Z
        return self.element_c(sign * (Z.box(e, u) - Z.box(u, e)), u)

    def phi(self, e, u, v, sign=1):
        """Heisenberg parametrization ``phi^{±e}(u, v) = eta_u + zeta_{-iv/2}``."""
        u = np.asarray(u, dtype=complex)
        v = np.asarray(v, dtype=complex)
        return self.eta(e, u, sign) + self.zeta(e, -0.5j * v, sign)

    def grading(self, e):
        Z = self.Z
        if not Z.is_tripotent(e):
            raise DomainError("gradings are defined by tripotents")
        A = self.ad(self.xi(e))
        P = self.inner_matrix
        S = P @ A
        w, v = linalg.eigh(0.5 * (S + S.T), P)
        spaces = {j: [] for j in range(-2, 3)}
        for k, lam in enumerate(w):
            j = int(round(lam))
            if j not in spaces or abs(lam - j) > 1e-8:
                raise ConsistencyError(f"ad xi_e has eigenvalue {lam} outside -2..2")
            spaces[j].append(v[:, k])
        spaces = {j: (np.array(c).T if c else np.zeros((self.dim, 0))) for j, c in spaces.items()}
        return Grading(self, np.asarray(e, dtype=complex), spaces)

    def heisenberg(self, e):
        Z = self.Z
        if not Z.is_tripotent(e) or Z.norm(e) <= 1e-12:
            raise DomainError("the Heisenberg algebra needs a non-zero tripotent")
        return Heisenberg(self, np.asarray(e, dtype=complex))

    def zero_grading_split(self, e):
        """Bases of ``g_0(e)``, ``g_1(e)`` and ``m^e`` inside ``g^e[0]``."""
        Z = self.Z
        e = np.asarray(e, dtype=complex)
        pr = Z.peirce_real(e)
        z0 = pr[0.0]
        x1 = Z.real_form_x1(e).embedding if Z.norm(e) > 1e-12 else np.zeros((self.zdim, 0))

        def part(basis):
            cols = []
            m = basis.shape[1]
            for i in range(m):
                for j in range(i + 1, m):
                    u, v = basis[:, i], basis[:, j]
                    cols.append(self.element(Z.real_box(u, v) - Z.real_box(v, u)))
            for i in range(m):
                cols.append(self.element(u=basis[:, i]))
            return _orth_cols(np.array(cols).T if cols else np.zeros((self.dim, 0)), self.inner_matrix)

        g0, g1 = part(z0), part(x1)
        k0 = g0[: self.kdim][:, np.abs(g0[self.kdim:]).max(axis=0, initial=0) < 1e-10] if g0.size else g0
        # k^e: derivations killing e
        Ev = realify_vec(e)
        ke_eq = np.array([D @ Ev for D in self.aut_float]).T
        ke = linalg.null_space(ke_eq) if self.kdim else np.zeros((0, 0))
        ke_full = np.vstack([ke, np.zeros((self.zdim, ke.shape[1]))])
        k01 = np.hstack([_k_part(g0, self.kdim), _k_part(g1, self.kdim)])
        P = self.inner_matrix
        if k01.shape[1]:
            # orthogonal complement of k_0 + k_1 inside k^e
            proj = k01.T @ P @ ke_full
            coef = linalg.null_space(proj) if proj.size else np.eye(ke_full.shape[1])
            m = ke_full @ coef
        else:
            m = ke_full
        return ZeroGradingSplit(self, e, g0, g1, _orth_cols(m, P))

    # -- Jordan–Chevalley ---------------------------------------------

    @cached_property
    def _ad_solver(self):
        cols = [ex.qflatten(A) for A in self.ad_exact_basis]
        M = ex.qcolumns(cols)
        rows = ex.pivots(M.transpose())
        return rows, ex.submatrix(M, rows, range(self.dim)).inv()

    def from_ad_exact(self, S):
        """The unique element whose adjoint is ``S`` (g is semisimple, so ad is faithful)."""
        rows, Minv = self._ad_solver
        flat = ex.qflatten(S)
        c = Minv * ex.qvec([flat[r] for r in rows])
        x = [c[i, 0] for i in range(self.dim)]
        if self.ad_exact(x) != S:
            raise ConsistencyError("matrix is not in the adjoint image")
        return x

    def jordan_chevalley(self, x, snap=False, max_den=10**6):
        """Exact Jordan decomposition ``x = x_s + x_n`` of an element with rational coordinates.

        Args:
            x: coordinates as rationals (Fraction/fmpq/int) or floats with ``snap=True``.
            snap (bool): allow snapping float input to rationals.
            max_den (int): denominator bound for snapping.

        Returns:
            tuple: ``(x_s, x_n)`` as lists of fmpq.
        """
        xq = _as_exact(x, snap, max_den)
        A = self.ad_exact(xq)
        S = semisimple_part(A)
        xs = self.from_ad_exact(S)
        xn = [a - b for a, b in zip(xq, xs)]
        return xs, xn

    # -- orbit invariants -------------------------------------------------

    def rank_sequence(self, xq, length=5):
        A = self.ad_exact(xq)
        out, P = [], A
        for _ in range(length):
            out.append(P.rank())
            P = P * A
        return tuple(out)

    def semisimple_signature(self, xq):
        """(centralizer dimension, sorted multiplicities of distinct ad-eigenvalues).

        Fine but not stable: accidental eigenvalue coincidences change it.
        """
        A = self.ad_exact(xq)
        cdim = self.dim - A.rank()
        _, factors = A.charpoly().factor()
        mults = []
        for f, m in factors:
            mults += [int(m)] * f.degree()
        return cdim, tuple(sorted(mults, reverse=True))

    def centralizer_inertia(self, xq):
        """Inertia ``(n_plus, n_minus, n_zero)`` of the Killing form on the centralizer of ``xq``.

        Exact: the restricted Gram matrix is symmetric, so its characteristic
        polynomial is real-rooted and Descartes' rule counts the signs.
        """
        N = ex.nullspace(self.ad_exact(xq))
        if N.ncols() == 0:
            return (0, 0, 0)
        G = N.transpose() * self.killing_exact * N
        c = [x for x in G.charpoly().coeffs()]
        m = G.nrows()
        zero = next(i for i, x in enumerate(c) if x != 0)
        nz = [x for x in c[zero:] if x != 0]
        plus = sum(1 for a, b in zip(nz, nz[1:]) if (a > 0) != (b > 0))
        return (plus, m - zero - plus, zero)


def semisimple_part(A):
    """Semisimple part of a rational matrix via Newton iteration on the square-free
    part of its characteristic polynomial."""
    p = A.charpoly()
    q = p / p.gcd(p.derivative())
    dq = q.derivative()
    S = A
    for _ in range(64):
        qS = _poly_at(q, S)
        if ex.qis_zero(qS):
            return S
        S = S - qS * _poly_at(dq, S).inv()
    raise ConsistencyError("Newton iteration for the semisimple part did not terminate")


def _poly_at(p, M):
    coeffs = p.coeffs()
    n = M.nrows()
    out = fmpq_mat(n, n)
    eye = ex.qeye(n)
    for c in reversed(coeffs):
        out = out * M + eye * c
    return out


def _as_exact(x, snap, max_den):
    out = []
    for t in x:
        if isinstance(t, (float, np.floating)):
            if not snap:
                raise ModeError("exact Jordan decomposition needs rational coordinates")
            try:
                out.append(ex.to_fmpq(ex.snap(t, max_den, tol=1e-10)))
            except ValueError as err:
                raise ModeError(str(err)) from None
        else:
            out.append(ex.to_fmpq(t))
    return out


def _orth_cols(cols, P, tol=1e-10):
    """P-orthonormal basis of the column span."""
    if cols.shape[1] == 0:
        return cols
    G = cols.T @ P @ cols
    w, v = np.linalg.eigh(0.5 * (G + G.T))
    keep = w > tol * max(1.0, w.max(initial=0.0))
    return cols @ v[:, keep] / np.sqrt(w[keep])


def _k_part(cols, kdim):
    if cols.shape[1] == 0:
        return cols
    mask = np.abs(cols[kdim:]).max(axis=0, initial=0.0) < 1e-10
    return cols[:, mask]


def span_residual(basis, x, P):
    """Distance (in the P-norm) from x to the column span of ``basis``."""
    x = np.asarray(x, dtype=float)
    if basis.shape[1] == 0:
        return float(np.sqrt(max(x @ P @ x, 0.0)))
    q = _orth_cols(basis, P)
    r = x - q @ (q.T @ P @ x)
    return float(np.sqrt(max(r @ P @ r, 0.0)))


@dataclass(frozen=True)
class CayleyTriple:
    h: np.ndarray
    x_plus: np.ndarray
    x_minus: np.ndarray
    e: np.ndarray = None
    h1: bool = True


@dataclass(frozen=True)
class Grading:
    """Eigenspaces ``g^e[j]`` (columns, orthonormal for ``<.,.>``) of ``ad xi_e``."""

    g: LieAlgebraG
    e: np.ndarray
    spaces: dict = field(repr=False)

    @property
    def dims(self):
        return tuple(self.spaces[j].shape[1] for j in range(-2, 3))

    def component(self, x, j):
        q = self.spaces[j]
        return q @ (q.T @ self.g.inner_matrix @ x)

    def eta(self, u, sign=1):
        return self.g.eta(self.e, u, sign)

    def zeta(self, u, sign=1):
        return self.g.zeta(self.e, u, sign)

    def phi(self, u, v, sign=1):
        return self.g.phi(self.e, u, v, sign)

    def parabolic(self):
        return np.hstack([self.spaces[0], self.spaces[1], self.spaces[2]])

    def heisenberg_basis(self):
        return np.hstack([self.spaces[1], self.spaces[2]])


@dataclass(frozen=True)
class Heisenberg:
    """The conal Heisenberg algebra on ``Z_1/2(e) + X_1(e)``."""

    g: LieAlgebraG
    e: np.ndarray

    @cached_property
    def x1(self):
        return self.g.Z.real_form_x1(self.e)

    @cached_property
    def z_half(self):
        """Real basis (complex vectors) of ``Z_1/2(e)``."""
        cols = self.g.Z.peirce(self.e)[0.5]
        out = []
        for k in range(cols.shape[1]):
            out += [cols[:, k], 1j * cols[:, k]]
        return out

    def h_form(self, u, v):
        return 8 * self.g.Z.triple(u, v, self.e)

    def q_form(self, u, v):
        Z = self.g.Z
        return 4j * (Z.triple(v, u, self.e) - Z.triple(u, v, self.e))

    def x1_coords(self, z):
        """Coordinates in X_1(e) of a complex vector lying in X_1(e)."""
        X = self.x1
        return X.embedding.T @ self.g.Z.real_gram @ realify_vec(z)

    def x1_vector(self, c):
        return complexify_vec(self.x1.embedding @ c)

    def positivity(self, u):
        """Membership of ``h_e(u, u)`` in the cone of squares of ``X_1(e)``."""
        return cone_membership(self.x1, self.x1_coords(self.h_form(u, u)), method="krylov")

    def bracket_table(self):
        """``q_e`` on the real basis of ``Z_1/2(e)``, in X_1(e) coordinates."""
        B = self.z_half
        return np.array([[self.x1_coords(self.q_form(a, b)) for b in B] for a in B])

    def bracket_residual(self, samples=None):
        """Max deviation of ``[phi(u,v), phi(u',v')]`` from ``phi(0, q_e(u,u'))``."""
        g, e = self.g, self.e
        B = self.z_half
        V = [self.x1_vector(c) for c in np.eye(self.x1.dim)]
        zero = np.zeros(g.Z.n, dtype=complex)
        pairs = samples or [(a, b) for a in B for b in B]
        worst = 0.0
        for a, b in pairs:
            lhs = g.bracket(g.phi(e, a, zero), g.phi(e, b, zero))
            rhs = g.phi(e, zero, self.q_form(a, b))
            worst = max(worst, g.norm(lhs - rhs))
        for a in B:
            for v in V:
                worst = max(worst, g.norm(g.bracket(g.phi(e, a, zero), g.phi(e, zero, v))))
        for v in V:
            for w in V:
                worst = max(worst, g.norm(g.bracket(g.phi(e, zero, v), g.phi(e, zero, w))))
        return worst


@dataclass(frozen=True)
class ZeroGradingSplit:
    g: LieAlgebraG
    e: np.ndarray
    g0: np.ndarray
    g1: np.ndarray
    m: np.ndarray

    @property
    def dims(self):
        return self.g0.shape[1], self.g1.shape[1], self.m.shape[1]

    def commutation_residual(self):
        g = self.g
        worst = 0.0
        for a in self.g0.T:
            for b in self.g1.T:
                worst = max(worst, g.norm(g.bracket(a, b)))
        return worst


def build_g(Z):
    return LieAlgebraG(Z)


def closed_form_dim(Z):
    """dim g from the classification: su(p,q), so*(2n), sp(2n,R), so(n,2)."""
    if Z.kind == "I":
        p, q = Z.params
        return (p + q) ** 2 - 1
    (n,) = Z.params
    return {"II": n * (2 * n - 1), "III": n * (2 * n + 1), "IV": (n + 2) * (n + 1) // 2}[Z.kind]


def bracket(g, x, y):
    return g.bracket(x, y)


def killing(g, x, y):
    return g.killing(x, y)


def killing_closed_form(g, x, y):
    return g.killing_closed_form(x, y)


def cayley_test(g, x):
    return g.cayley_test(x)


def cayley_elements(g, e):
    return g.cayley_elements(e)


def tripotent_from_cayley(g, t):
    return g.tripotent_from_cayley(t)


def grading(g, e):
    return g.grading(e)


def heisenberg(g, e):
    return g.heisenberg(e)


def zero_grading_split(g, e):
    return g.zero_grading_split(e)


def jordan_chevalley(g, x, snap=False):
    return g.jordan_chevalley(x, snap=snap)
