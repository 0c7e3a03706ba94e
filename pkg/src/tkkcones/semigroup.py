"""Matrix model of the minimal complex semigroup for type I triples.

g = aut(M_{p,q}) + M_{p,q} sits in su(p,q): the derivation z -> Az - zD paired
with u goes to [[A, u], [u*, D]] with tr A + tr D = 0, and then acts on the
domain by Moebius vector fields. The semigroup is G exp(i iota(Omega^-)) inside
SL(p+q, C), and every element splits uniquely as g exp(i iota(xi)).
"""
from dataclasses import dataclass, field

import numpy as np
from flint import fmpq, fmpq_mat
from scipy import linalg

from . import _exact as ex
from .errors import ConsistencyError, DomainError, NotInSemigroup, NumericalError
from .jts import complexify_mat, complexify_vec

HOM_TOL = 1e-9
ROUNDTRIP_TOL = 1e-8
SNAP_DEN = 10**6


def _rvec(M):
    M = np.asarray(M, dtype=complex)
    return np.concatenate([M.real.ravel(), M.imag.ravel()])


def _gauss_rvec(G):
    n, m = G.shape
    return [G.re[i, j] for i in range(n) for j in range(m)] + [G.im[i, j] for i in range(n) for j in range(m)]


@dataclass
class MatrixRealization:
    g: object
    p: int
    q: int
    J: np.ndarray
    images: np.ndarray
    scale: float
    checks: dict = field(default_factory=dict)

    @property
    def size(self):
        return self.p + self.q

    def iota(self, x):
        """Matrix of a g-element given by float coordinates."""
        return np.tensordot(np.asarray(x, dtype=float), self.images, axes=1)

    def iota_exact(self, xq):
        """Gaussian-rational matrix of an exact g-element."""
        N = self.size
        re, im = fmpq_mat(N, N), fmpq_mat(N, N)
        L = self._lift_exact
        flat = L * ex.qvec(xq)
        for i in range(N):
            for j in range(N):
                re[i, j] = flat[i * N + j, 0]
                im[i, j] = flat[N * N + i * N + j, 0]
        return ex.GaussMat(re, im)

    def inverse(self, M, tol=1e-8):
        """Coordinates of the g-element with matrix ``M`` (least squares, residual checked)."""
        A = self._lift_float
        v = _rvec(M)
        x, *_ = np.linalg.lstsq(A, v, rcond=None)
        res = np.linalg.norm(A @ x - v)
        if res > tol * max(1.0, np.linalg.norm(v)):
            raise DomainError(f"matrix is not in the image of g (residual {res:.2e})")
        return x

    def inverse_exact(self, G):
        """Exact coordinates of a Gaussian-rational matrix in the image."""
        col = self._left_inverse_exact * ex.qvec(_gauss_rvec(G))
        x = [col[i, 0] for i in range(self.g.dim)]
        if self.iota_exact(x) != G:
            raise DomainError("matrix is not in the image of g")
        return x

    def star(self, M):
        """J-adjoint ``J M* J``."""
        return self.J @ np.asarray(M).conj().T @ self.J

    @property
    def J_exact(self):
        return ex.GaussMat(ex.qmat(self.J.real.astype(int).tolist()))

    def star_exact(self, G):
        return self.J_exact @ G.H() @ self.J_exact

    @property
    def _lift_float(self):
        return np.array([_rvec(M) for M in self.images]).T

    @property
    def _lift_exact(self):
        if not hasattr(self, "_lq"):
            self._lq = ex.qmat_from_float(self._lift_float, SNAP_DEN)
            if np.abs(ex.qfloat(self._lq) - self._lift_float).max() > 1e-12:
                raise ConsistencyError("embedding images are not rational")
        return self._lq

    @property
    def _left_inverse_exact(self):
        if not hasattr(self, "_li"):
            L = self._lift_exact
            self._li = (L.transpose() * L).inv() * L.transpose()
        return self._li


def _derivation_blocks(kappa, p, q):
    """(A, D) with ``kappa(z) = A z - z D`` and ``tr A + tr D = 0``; slots ordered row-major."""
    K = np.asarray(kappa, dtype=complex)

    def k(a, b, c, d):
        return K[a * q + b, c * q + d]

    A = np.zeros((p, p), dtype=complex)
    D = np.zeros((q, q), dtype=complex)
    for a in range(p):
        for c in range(p):
            if a != c:
                A[a, c] = k(a, 0, c, 0)
    for b in range(q):
        for d in range(q):
            if b != d:
                D[d, b] = -k(0, b, 0, d)
    shift = -(sum(k(i, 0, i, 0) for i in range(p)) + sum(k(0, 0, 0, 0) - k(0, j, 0, j) for j in range(q))) / (p + q)
    for i in range(p):
        A[i, i] = k(i, 0, i, 0) + shift
    for j in range(q):
        D[j, j] = k(0, 0, 0, 0) + shift - k(0, j, 0, j)
    return A, D


def build_embedding(g):
    """Faithful homomorphism g -> su(p, q) for a type I triple."""
    Z = g.Z
    if Z.kind != "I":
        raise DomainError("only type I triples have a matrix realization here")
    p, q = Z.shape
    N = p + q
    J = np.diag(np.concatenate([np.ones(p), -np.ones(q)])).astype(complex)

    def block(A, D, U, s):
        M = np.zeros((N, N), dtype=complex)
        M[:p, :p], M[p:, p:] = A, D
        M[:p, p:], M[p:, :p] = s * U, s * U.conj().T
        return M

    aut = [_derivation_blocks(complexify_mat(D), p, q) for D in g.aut_float]
    zs = [Z.native(complexify_vec(np.eye(g.zdim)[a])) for a in range(g.zdim)]
    zero_p, zero_q, zero_u = np.zeros((p, p)), np.zeros((q, q)), np.zeros((p, q))

    # calibrate s on one Z-Z bracket: iota([u, v]) must equal [iota(u), iota(v)]
    i, j = g.kdim, g.kdim + 1
    w = g.bracket(np.eye(g.dim)[i], np.eye(g.dim)[j])
    kap = np.tensordot(w[: g.kdim], np.array([block(A, D, zero_u, 0) for A, D in aut]), axes=1)
    Mu, Mv = block(zero_p, zero_q, zs[0], 1), block(zero_p, zero_q, zs[1], 1)
    comm = Mu @ Mv - Mv @ Mu
    s2 = np.vdot(comm, kap).real / np.vdot(comm, comm).real
    if not s2 > 0 or np.abs(s2 * comm - kap).max() > HOM_TOL:
        raise ConsistencyError(f"embedding calibration failed (s^2 = {s2})")
    s = float(np.sqrt(s2))

    images = np.array([block(A, D, zero_u, 0) for A, D in aut] + [block(zero_p, zero_q, U, s) for U in zs])
    mr = MatrixRealization(g, p, q, J, images, s)
    mr.checks = embedding_checks(mr)
    if mr.checks["homomorphism"] > HOM_TOL or mr.checks["su_pq"] > HOM_TOL or mr.checks["rank"] != g.dim:
        raise ConsistencyError(f"embedding checks failed: {mr.checks}")
    return mr


def embedding_checks(mr):
    g = mr.g
    E = np.eye(g.dim)
    hom = 0.0
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            lhs = mr.iota(g.bracket(E[i], E[j]))
            rhs = mr.images[i] @ mr.images[j] - mr.images[j] @ mr.images[i]
            hom = max(hom, np.abs(lhs - rhs).max())
    su = max(max(np.abs(M.conj().T @ mr.J + mr.J @ M).max(), abs(np.trace(M))) for M in mr.images)
    rank = int(np.linalg.matrix_rank(mr._lift_float))
    theta = max(np.abs(mr.iota(g.theta(E[i])) + mr.images[i].conj().T).max() for i in range(g.dim))
    return {"homomorphism": float(hom), "su_pq": float(su), "rank": rank, "theta_adjoint": float(theta)}


@dataclass
class SemigroupElement:
    """``gamma`` in SL(p+q, C), with optional exact data from its construction."""

    matrix: np.ndarray
    exact: object = None
    witness: object = None
    xi_exact: list = None
    decomposition: tuple = None

    def conjugate(self, mr, U, V, aut):
        """``u gamma u^-1`` for ``u = diag(U, V)``; ``aut`` is the matching triple automorphism."""
        u = linalg.block_diag(U.to_complex(), V.to_complex())
        M = u @ self.matrix @ u.conj().T
        xq = None
        if self.xi_exact is not None:
            col = mr.g.Ad_automorphism(aut, exact=True) * ex.qvec(self.xi_exact)
            xq = [col[i, 0] for i in range(mr.g.dim)]
        return SemigroupElement(M, None, self.witness, xq)


def group_element(mr, etas):
    """Product of ``exp(iota(eta))`` over the given g-elements."""
    out = np.eye(mr.size, dtype=complex)
    for eta in etas or ():
        out = out @ linalg.expm(mr.iota(eta))
    return out


def exp_nilpotent_gauss(G):
    n = G.shape[0]
    out, term = ex.GaussMat.eye(n), ex.GaussMat.eye(n)
    for k in range(1, n + 1):
        term = (term @ G).scale(fmpq(1, k))
        if term.is_zero():
            return out
        out = out + term
    raise DomainError("matrix is not nilpotent")


def log_unipotent_gauss(G):
    """Exact logarithm of a unipotent Gaussian-rational matrix (finite series)."""
    n = G.shape[0]
    Nm = G - ex.GaussMat.eye(n)
    out, power = ex.GaussMat(fmpq_mat(n, n)), ex.GaussMat.eye(n)
    for k in range(1, n + 1):
        power = power @ Nm
        if power.is_zero():
            return out
        out = out + power.scale(fmpq((-1) ** (k + 1), k))
    if not (power @ Nm).is_zero():
        raise DomainError("matrix is not unipotent")
    return out


def semigroup_exp(mr, g_elt, xi, certificate):
    """``gamma = g_elt exp(i iota(xi))``.

    ``g_elt`` is a list of g-elements whose exponentials are multiplied (None for
    the identity). ``xi`` is exact (list of rationals) or float; ``certificate``
    is a membership certificate or construction witness for ``xi``.
    """
    if certificate is None:
        raise DomainError("semigroup_exp needs a membership certificate or construction witness")
    exact = None
    xq = None
    if len(xi) and not isinstance(xi[0], (float, np.floating)):
        xq = [fmpq(x) if not isinstance(x, fmpq) else x for x in xi]
        xf = np.array([float(x) for x in xq])
        if not g_elt:
            iX = mr.iota_exact(xq).scale(0, 1)
            try:
                exact = exp_nilpotent_gauss(iX)
            except DomainError:
                exact = None
    else:
        xf = np.asarray(xi, dtype=float)
    E = exact.to_complex() if exact is not None else linalg.expm(1j * mr.iota(xf))
    return SemigroupElement(group_element(mr, g_elt) @ E, exact, certificate, xq)


def _principal_log(M):
    w = np.linalg.eigvals(M)
    scale = max(1.0, np.abs(w).max())
    singular = np.abs(w) <= 10 * np.finfo(float).eps * scale
    negative = (w.real < 0) & (np.abs(w.imag) <= 1e-9 * np.abs(w))
    if np.any(singular | negative):
        raise DomainError("spectrum of gamma^* gamma meets the closed negative axis; principal log undefined")
    return linalg.logm(M)


def _eigen_log(M):
    """Principal log through an eigendecomposition; second route for the uniqueness check."""
    w, V = np.linalg.eig(M)
    return V @ np.diag(np.log(w)) @ np.linalg.inv(V)


@dataclass
class Decomposition:
    g_part: np.ndarray
    xi: np.ndarray
    xi_exact: list
    j_unitarity: float
    roundtrip: float


def decompose(mr, gamma, check_cone=False, route="logm"):
    """Split ``gamma = g exp(i iota(xi))`` with ``g`` J-unitary.

    Exact input whose ``gamma^* gamma`` is unipotent is handled by the finite
    log series, so nilpotent cone parts come back exactly.
    """
    ge = gamma if isinstance(gamma, SemigroupElement) else SemigroupElement(np.asarray(gamma, dtype=complex))
    G = ge.matrix
    xq = None
    if ge.exact is not None:
        S = mr.star_exact(ge.exact) @ ge.exact
        try:
            L = log_unipotent_gauss(S)
        except DomainError:
            L = None
        if L is not None:
            xq = mr.inverse_exact(L.scale(0, fmpq(-1, 2)))
    if xq is not None:
        xi = np.array([float(x) for x in xq])
    else:
        M = mr.star(G) @ G
        Lf = _principal_log(M) if route == "logm" else _eigen_log(M)
        # the log is backward stable, so its image residual grows with cond(M)
        tol = max(1e-8, np.finfo(float).eps * np.linalg.cond(M))
        xi = mr.inverse(Lf / 2j, tol=tol)
    E = linalg.expm(-1j * mr.iota(xi))
    gpart = G @ E
    unit = float(np.abs(mr.star(gpart) @ gpart - np.eye(mr.size)).max())
    back = float(np.abs(gpart @ linalg.expm(1j * mr.iota(xi)) - G).max())
    if unit > ROUNDTRIP_TOL * max(1.0, np.abs(G).max() ** 2):
        raise NumericalError(f"g-part is not J-unitary ({unit:.2e})")
    if check_cone:
        from .roots_cones import refute_in_maximal
        res = refute_in_maximal(mr.g, xi, budget=200)
        if res.found is not None:
            raise NotInSemigroup(f"cone part pairs negatively with a nilpotent generator ({res.found.pairing:.3e})")
    dec = Decomposition(gpart, xi, xq, unit, back)
    ge.decomposition = dec
    return dec


def stratum_of_semigroup_element(mr, gamma, ctx=None):
    """Stratum label of ``gamma``, read from its exact or witnessed cone part."""
    from .faces import stratum_of

    ge = gamma if isinstance(gamma, SemigroupElement) else SemigroupElement(np.asarray(gamma, dtype=complex))
    dec = decompose(mr, ge)
    if dec.xi_exact is not None:
        xq, cert = dec.xi_exact, ge.witness if ge.witness is not None else "exact unipotent log"
    elif ge.xi_exact is not None:
        ref = np.array([float(x) for x in ge.xi_exact])
        err = np.abs(dec.xi - ref).max()
        if err > ROUNDTRIP_TOL * max(1.0, np.abs(ref).max()):
            raise ConsistencyError(f"recovered cone part differs from the witness by {err:.2e}")
        xq, cert = ge.xi_exact, ge.witness
    else:
        raise DomainError("stratum labels need an exact or witnessed cone part")
    return stratum_of(mr.g, xq, cert, ctx)
