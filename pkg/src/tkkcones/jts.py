"""Hermitian Jordan triple systems of classical type.

Elements of Z are complex coordinate vectors in a fixed basis whose members
have Gaussian-rational entries. Type I is the rectangular matrix triple
{u v w} = (u v* w + w v* u)/2; types II and III are its alternating and
symmetric subtriples; type IV is the spin triple on C^n.

Real coordinates interleave real and imaginary parts: ``x[2k] = Re z_k``,
``x[2k+1] = Im z_k``.
"""
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations, permutations

import numpy as np
from scipy import linalg

from . import _exact as ex
from .errors import DomainError, StructuralError
from .jordan_core import EuclideanJordanAlgebra, _gram_orthonormal

TRIPOTENT_TOL = 1e-9


def realify_vec(z):
    z = np.asarray(z, dtype=complex)
    out = np.empty(2 * z.shape[0])
    out[0::2], out[1::2] = z.real, z.imag
    return out


def complexify_vec(x):
    x = np.asarray(x, dtype=float)
    return x[0::2] + 1j * x[1::2]


def realify_mat(m):
    """Real matrix of a complex-linear map in interleaved coordinates."""
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    out = np.empty((2 * n, 2 * m.shape[1]))
    out[0::2, 0::2], out[0::2, 1::2] = m.real, -m.imag
    out[1::2, 0::2], out[1::2, 1::2] = m.imag, m.real
    return out


def complexify_mat(r):
    """Inverse of :func:`realify_mat` for complex-linear real matrices."""
    return r[0::2, 0::2] + 1j * r[1::2, 0::2]


def realify_gauss(g):
    """Interleaved real form of a GaussMat, as an exact fmpq_mat."""
    m, n = g.shape
    R = ex.fmpq_mat(2 * m, 2 * n)
    for i in range(m):
        for j in range(n):
            a, b = g.re[i, j], g.im[i, j]
            R[2 * i, 2 * j], R[2 * i, 2 * j + 1] = a, -b
            R[2 * i + 1, 2 * j], R[2 * i + 1, 2 * j + 1] = b, a
    return R


class HermitianJts:
    """Concrete Hermitian Jordan triple of type I(p,q), II(m), III(m) or IV(m).

    Attributes:
        kind (str): ``"I"``, ``"II"``, ``"III"`` or ``"IV"``.
        params (tuple): ``(p, q)`` for type I, ``(m,)`` otherwise.
        n (int): complex dimension.
        rank (int): rank.
        a, b (int): multiplicities of the joint Peirce spaces.
    """

    def __init__(self, kind, *params):
        self.kind = kind
        self.params = tuple(int(x) for x in params)
        if kind == "I":
            p, q = self.params
            if min(p, q) < 1:
                raise StructuralError("type I needs p, q >= 1")
            self.shape = (p, q)
            self._slots = [(i, j) for i in range(p) for j in range(q)]
            self.rank, self.a, self.b = min(p, q), 2, abs(p - q)
        elif kind in ("II", "III"):
            (m,) = self.params
            if m < (2 if kind == "II" else 1):
                raise StructuralError(f"type {kind} size too small")
            self.shape = (m, m)
            if kind == "II":
                self._slots = list(combinations(range(m), 2))
                self.rank, self.a, self.b = m // 2, 4, (0 if m % 2 == 0 else 2)
            else:
                self._slots = [(i, j) for i in range(m) for j in range(i, m)]
                self.rank, self.a, self.b = m, 1, 0
        elif kind == "IV":
            (m,) = self.params
            if m < 3:
                raise StructuralError("type IV needs n >= 3")
            self.shape = (m,)
            self._slots = [(i,) for i in range(m)]
            self.rank, self.a, self.b = 2, m - 2, 0
        else:
            raise StructuralError(f"unknown triple kind {kind!r}")
        self.n = len(self._slots)

    # -- construction helpers --------------------------------------------

    @classmethod
    def type_i(cls, p, q):
        return cls("I", p, q)

    @classmethod
    def type_ii(cls, m):
        return cls("II", m)

    @classmethod
    def type_iii(cls, m):
        return cls("III", m)

    @classmethod
    def type_iv(cls, m):
        return cls("IV", m)

    @classmethod
    def from_descriptor(cls, desc):
        kind = str(desc["kind"]).upper()
        if kind == "SPIN":
            kind = "IV"
        if kind == "I":
            return cls(kind, desc["p"], desc["q"])
        return cls(kind, desc["n"])

    def descriptor(self):
        if self.kind == "I":
            return {"kind": "I", "p": self.params[0], "q": self.params[1]}
        return {"kind": self.kind, "n": self.params[0]}

    def __repr__(self):
        return f"HermitianJts({self.kind}{self.params})"

    @property
    def label(self):
        return f"{self.kind}({','.join(map(str, self.params))})"

    @property
    def real_dim(self):
        return 2 * self.n

    @cached_property
    def labels(self):
        if self.kind == "IV":
            return tuple(f"x{i + 1}" for (i,) in self._slots)
        return tuple(f"E{i + 1}{j + 1}" for i, j in self._slots)

    # -- native realization -------------------------------------------

    def native(self, z):
        """Matrix (types I-III) or vector (type IV) represented by coordinates z."""
        z = self._check(z)
        if self.kind == "IV":
            return z.copy()
        out = np.zeros(self.shape, dtype=complex)
        for c, (i, j) in zip(z, self._slots):
            out[i, j] += c
            if self.kind == "II":
                out[j, i] -= c
            elif self.kind == "III" and i != j:
                out[j, i] += c
        return out

    def coords(self, m):
        m = np.asarray(m, dtype=complex)
        if self.kind == "IV":
            return m.copy()
        return np.array([m[i, j] for i, j in self._slots])

    def basis_vector(self, k):
        z = np.zeros(self.n, dtype=complex)
        z[k] = 1
        return z

    def _check(self, z):
        z = np.asarray(z, dtype=complex)
        if z.shape != (self.n,):
            raise StructuralError(f"expected {self.n} complex coordinates, got shape {z.shape}")
        return z

    # -- triple product and friends ---------------------------------

    def triple(self, u, v, w):
        """{u v w}: complex-linear in u and w, conjugate-linear in v."""
        U, V, W = self.native(u), self.native(v), self.native(w)
        if self.kind == "IV":
            out = (U @ V.conj()) * W + (W @ V.conj()) * U - (U @ W) * V.conj()
            return out
        Vs = V.conj().T
        return self.coords(0.5 * (U @ Vs @ W + W @ Vs @ U))

    def box(self, u, v):
        """Complex matrix of ``w -> {u v w}``."""
        return np.array([self.triple(u, v, self.basis_vector(k)) for k in range(self.n)]).T

    def quadratic(self, z, w):
        """``Q_z(w) = {z w z}`` (conjugate-linear in w)."""
        return self.triple(z, w, z)

    def inner(self, u, v):
        """Canonical inner product, linear in u, conjugate-linear in v."""
        U, V = self.native(u), self.native(v)
        if self.kind == "IV":
            return 2.0 * complex(U @ V.conj())
        s = complex(np.trace(U @ V.conj().T))
        return 0.5 * s if self.kind == "II" else s

    def norm(self, z):
        return float(np.sqrt(max(self.inner(z, z).real, 0.0)))

    @cached_property
    def gram(self):
        """``G[i, j] = <b_i, b_j>`` for the complex basis."""
        B = [self.basis_vector(k) for k in range(self.n)]
        return np.array([[self.inner(a, b) for b in B] for a in B])

    def trace_normalization(self):
        """Constant relating ``<u, v>`` to ``tr_Z(u □ v)``."""
        return 2 * self.rank / (2 * self.n - self.rank * self.b)

    # -- real coordinates ---------------------------------------------

    def real_basis_vector(self, a):
        z = np.zeros(self.n, dtype=complex)
        z[a // 2] = 1 if a % 2 == 0 else 1j
        return z

    @cached_property
    def real_gram(self):
        """Gram matrix of ``Re <., .>`` in interleaved real coordinates."""
        R = [self.real_basis_vector(a) for a in range(2 * self.n)]
        return np.array([[self.inner(x, y).real for y in R] for x in R])

    @cached_property
    def real_tensor(self):
        """``T[a, b, c, :]`` = real coordinates of ``{x_a x_b x_c}`` on the real basis."""
        N = 2 * self.n
        T = np.zeros((N, N, N, N))
        R = [self.real_basis_vector(a) for a in range(N)]
        for a in range(N):
            for b in range(N):
                M = realify_mat(self.box(R[a], R[b]))
                T[a, b] = M.T
        T[np.abs(T) < 1e-14] = 0
        T.setflags(write=False)
        return T

    def real_box(self, x, y):
        """Real matrix of ``w -> {x y w}`` for real-coordinate x, y."""
        return np.einsum("a,b,abcd->dc", x, y, self.real_tensor)

    @cached_property
    def real_box_exact(self):
        """Exact rational real matrices of ``x_a □ x_b`` for all real basis pairs."""
        N = 2 * self.n
        T = self.real_tensor
        return [[ex.qmat_from_float(T[a, b].T, max_den=64, tol=1e-12) for b in range(N)] for a in range(N)]

    # -- tripotents --------------------------------------------------

    def is_tripotent(self, e, tol=TRIPOTENT_TOL):
        e = self._check(e)
        return self.norm(self.triple(e, e, e) - e) <= tol * max(1.0, self.norm(e))

    def rank_of(self, e):
        """Rank of a tripotent: the number of frame members of ``Z_1(e)``."""
        if not self.is_tripotent(e):
            raise DomainError("rank_of needs a tripotent")
        r = self.inner(e, e).real
        k = int(round(r))
        if abs(r - k) > 1e-6:
            raise DomainError(f"<e,e> = {r} is not an integer")
        return k

    def orthogonal(self, e, c):
        if not (self.is_tripotent(e) and self.is_tripotent(c)):
            raise DomainError("orthogonality is defined for tripotents")
        return np.abs(self.box(e, c)).max(initial=0.0) <= TRIPOTENT_TOL

    def leq(self, c, e):
        """``c <= e`` iff ``e - c`` is a tripotent orthogonal to ``c``."""
        if not (self.is_tripotent(e) and self.is_tripotent(c)):
            raise DomainError("the order is defined on tripotents")
        d = np.asarray(e) - np.asarray(c)
        return self.is_tripotent(d) and self.orthogonal(d, c)

    def peirce(self, e):
        """Complex bases (columns) of ``Z_0(e)``, ``Z_1/2(e)``, ``Z_1(e)``."""
        if not self.is_tripotent(e):
            raise DomainError("Peirce decomposition needs a tripotent")
        H = self.gram.T  # <u, v> = v^H H u
        M = self.box(e, e)
        w, v = linalg.eigh(H @ M, H)
        out = {0.0: [], 0.5: [], 1.0: []}
        for k, lam in enumerate(w):
            key = min(out, key=lambda t: abs(t - lam))
            if abs(key - lam) > 1e-8:
                raise DomainError(f"e□e has eigenvalue {lam}; e is not a tripotent")
            out[key].append(v[:, k])
        return {k: (np.array(vs).T if vs else np.zeros((self.n, 0), dtype=complex)) for k, vs in out.items()}

    def peirce_real(self, e):
        """Real bases (interleaved coordinates) of the Peirce spaces."""
        return {k: _real_span(b) for k, b in self.peirce(e).items()}

    def tripotent(self, e):
        e = self._check(e)
        if not self.is_tripotent(e):
            raise DomainError("not a tripotent")
        return Tripotent(self, e, self.rank_of(e), self.peirce(e))

    # -- frames ----------------------------------------------------------

    def standard_frame(self):
        """Deterministic frame of primitive tripotents with Gaussian-rational entries."""
        out = []
        if self.kind == "IV":
            m = self.params[0]
            e1 = np.zeros(m, dtype=complex)
            e1[0], e1[1] = 0.5, 0.5j
            return [e1, e1.conj()]
        for k in range(self.rank):
            M = np.zeros(self.shape, dtype=complex)
            if self.kind == "II":
                M[2 * k, 2 * k + 1], M[2 * k + 1, 2 * k] = 1, -1
            else:
                M[k, k] = 1
            out.append(self.coords(M))
        return out

    def find_frame(self):
        members = self.standard_frame()
        return Frame(self, members, self.joint_peirce(members))

    def joint_peirce(self, frame):
        """Joint Peirce spaces ``Z_ij`` (0 <= i <= j <= r) as complex bases."""
        r = len(frame)
        H = self.gram.T
        gens = np.random.default_rng(0).normal(size=r)
        M = sum(g * self.box(e, e) for g, e in zip(gens, frame))
        _, v = linalg.eigh(H @ M, H)
        out = {}
        for k in range(v.shape[1]):
            col = v[:, k]
            pattern = [float((col.conj() @ H @ self.box(e, e) @ col).real) for e in frame]
            # eigenvalue of e_k□e_k on Z_ij is (δ_ik + δ_jk)/2
            idx = [j + 1 for j, val in enumerate(pattern) if val > 0.25]
            if len(idx) == 1 and abs(max(pattern) - 1) < 1e-8:
                key = (idx[0], idx[0])
            elif len(idx) <= 2:
                key = tuple([0] * (2 - len(idx)) + idx)
            else:
                raise DomainError(f"unexpected joint Peirce pattern {pattern}")
            out.setdefault(key, []).append(col)
        return {k: np.array(v).T for k, v in sorted(out.items())}

    def support_tripotent(self, z, tol=1e-9):
        """The tripotent ``sum_i e_i`` of the spectral decomposition ``z = sum s_i e_i``."""
        z = self._check(z)
        G = self.real_gram
        vecs = [realify_vec(z)]
        p = z
        for _ in range(self.rank + 1):
            p = self.triple(z, p, z)
            vecs.append(realify_vec(p))
        q = _gram_orthonormal(np.array(vecs).T, G)
        zz = realify_mat(self.box(z, z))
        small = q.T @ G @ zz @ q
        w, v = np.linalg.eigh(0.5 * (small + small.T))
        scale = max(np.abs(w).max(initial=0.0), 1e-300)
        out = np.zeros(self.n, dtype=complex)
        for g in _groups(w, 1e-7 * scale):
            lam = np.mean(w[g])
            if lam <= tol * scale:
                continue
            vec = complexify_vec(q @ v[:, g[0]])
            t2 = self.inner(self.triple(vec, vec, vec), vec).real / self.inner(vec, vec).real
            part = vec / np.sqrt(t2)
            if self.inner(z, part).real < 0:
                part = -part
            out += part
        return out

    # -- real form X_1(e) ----------------------------------------------

    def real_form_x1(self, e):
        """``X_1(e)`` with ``z∘w = {z e w}``; ``embedding`` maps into real coordinates of Z."""
        if not self.is_tripotent(e):
            raise DomainError("X_1(e) needs a tripotent")
        if self.norm(e) <= TRIPOTENT_TOL:
            raise DomainError("X_1(0) is trivial")
        Z1 = _real_span(self.peirce(e)[1.0])
        # z -> {e z e} is conjugate-linear, so work in real coordinates
        Q = np.array([realify_vec(self.quadratic(e, complexify_vec(col))) for col in Z1.T]).T
        coef = linalg.null_space(Z1.T @ self.real_gram @ (Q - Z1), rcond=1e-10)
        X = _gram_orthonormal(Z1 @ coef, self.real_gram)
        m = X.shape[1]
        cz = [complexify_vec(col) for col in X.T]
        proj = X.T @ self.real_gram
        P = np.zeros((m, m, m))
        for i in range(m):
            for j in range(m):
                P[i, j] = proj @ realify_vec(self.triple(cz[i], e, cz[j]))
        unit = proj @ realify_vec(e)
        return EuclideanJordanAlgebra.from_structure(P, unit, np.eye(m), embedding=X)

    def domain_face(self, e):
        if not self.is_tripotent(e):
            raise DomainError("faces of the domain are indexed by tripotents")
        return DomainFace(np.asarray(e, dtype=complex), self.peirce(e)[0.0])

    # -- automorphisms -------------------------------------------------

    def automorphism_from_matrices(self, U, V=None, phase=None):
        """Exact coordinate matrix of a triple automorphism.

        Type I: ``z -> U z V*``; types II/III: ``z -> U z U^T``; type IV:
        ``z -> phase * U z`` with U real orthogonal. All inputs are GaussMats.
        """
        if self.kind == "IV":
            M = U if phase is None else U.scale(*phase)
            return TripleAutomorphism(self, M)
        if self.kind == "I":
            return TripleAutomorphism(self, _gauss_kron(U, V.conj()))
        m = self.shape[0]
        full = _gauss_kron(U, U)
        emb = ex.fmpq_mat(m * m, self.n)
        proj = ex.fmpq_mat(self.n, m * m)
        for k, (i, j) in enumerate(self._slots):
            emb[i * m + j, k] = 1
            proj[k, i * m + j] = 1
            if i != j:
                emb[j * m + i, k] = -1 if self.kind == "II" else 1
        E = ex.GaussMat(emb)
        Pm = ex.GaussMat(proj)
        return TripleAutomorphism(self, Pm @ full @ E)

    def random_automorphism(self, rng, bound=2):
        """Exact triple automorphism from Cayley transforms of small integer matrices."""
        if self.kind == "IV":
            O = ex.cayley_unitary(ex.random_skew_symmetric(rng, self.shape[0], bound))
            return self.automorphism_from_matrices(O, phase=ex.pythagorean_phase(rng))
        U = ex.cayley_unitary(ex.random_skew_hermitian(rng, self.shape[0], bound))
        if self.kind == "I":
            V = ex.cayley_unitary(ex.random_skew_hermitian(rng, self.shape[1], bound))
            return self.automorphism_from_matrices(U, V)
        return self.automorphism_from_matrices(U)

    def frame_symmetries(self):
        """Finite set of automorphisms permuting the standard frame."""
        out = []
        r = self.rank
        if self.kind == "IV":
            m = self.shape[0]
            flip = np.eye(m, dtype=int)
            flip[1, 1], flip[2, 2] = -1, -1
            return [self.automorphism_from_matrices(ex.GaussMat(ex.qeye(m))),
                    self.automorphism_from_matrices(ex.GaussMat(ex.qmat(flip.tolist())))]
        for sigma in permutations(range(r)):
            if self.kind == "I":
                U = _perm_gauss(sigma, self.shape[0], 1)
                V = _perm_gauss(sigma, self.shape[1], 1)
                out.append(self.automorphism_from_matrices(U, V))
            else:
                block = 2 if self.kind == "II" else 1
                out.append(self.automorphism_from_matrices(_perm_gauss(sigma, self.shape[0], block)))
        return out


def _perm_gauss(sigma, size, block):
    P = ex.fmpq_mat(size, size)
    moved = set()
    for a, b in enumerate(sigma):
        for t in range(block):
            P[block * b + t, block * a + t] = 1
            moved.add(block * a + t)
    for i in range(size):
        if i not in moved:
            P[i, i] = 1
    return ex.GaussMat(P)


def _gauss_kron(A, B):
    def kron(X, Y):
        m, n = X.nrows(), X.ncols()
        p, q = Y.nrows(), Y.ncols()
        K = ex.fmpq_mat(m * p, n * q)
        for i in range(m):
            for j in range(n):
                x = X[i, j]
                if x == 0:
                    continue
                for k in range(p):
                    for l in range(q):
                        K[i * p + k, j * q + l] = x * Y[k, l]
        return K

    return ex.GaussMat(kron(A.re, B.re) - kron(A.im, B.im), kron(A.re, B.im) + kron(A.im, B.re))


def _real_span(cols):
    """Real basis (interleaved coordinates) of the complex span of the columns."""
    cols = np.asarray(cols, dtype=complex)
    out = []
    for k in range(cols.shape[1]):
        out.append(realify_vec(cols[:, k]))
        out.append(realify_vec(1j * cols[:, k]))
    return np.array(out).T if out else np.zeros((2 * cols.shape[0], 0))


def _groups(vals, tol):
    order = np.argsort(vals)
    groups = []
    for idx in order:
        if groups and abs(vals[groups[-1][-1]] - vals[idx]) <= tol:
            groups[-1].append(idx)
        else:
            groups.append([idx])
    return groups


@dataclass
class TripleAutomorphism:
    """Complex-linear triple automorphism, exact (Gaussian rationals) in coordinates."""

    jts: HermitianJts
    matrix: ex.GaussMat

    @cached_property
    def complex_matrix(self):
        return self.matrix.to_complex()

    @cached_property
    def real_exact(self):
        return realify_gauss(self.matrix)

    @cached_property
    def real_matrix(self):
        return ex.qfloat(self.real_exact)

    @cached_property
    def real_inverse_exact(self):
        return self.real_exact.inv()

    def __call__(self, z):
        return self.complex_matrix @ np.asarray(z, dtype=complex)

    def compose(self, other):
        return TripleAutomorphism(self.jts, self.matrix @ other.matrix)

    def inverse(self):
        return TripleAutomorphism(self.jts, self.matrix.inv())


@dataclass(frozen=True)
class Tripotent:
    """Tripotent with rank and cached Peirce bases (complex columns)."""

    jts: HermitianJts
    e: np.ndarray
    rank: int
    peirce: dict = field(repr=False)


@dataclass(frozen=True)
class Frame:
    """Ordered frame with its joint Peirce spaces ``Z_ij``."""

    jts: HermitianJts
    members: list
    joint: dict = field(repr=False)

    def partial_sum(self, k):
        return sum(self.members[:k], np.zeros(self.jts.n, dtype=complex))

    def __len__(self):
        return len(self.members)


@dataclass(frozen=True)
class DomainFace:
    """The face ``e + D_0(e)`` of the domain, recorded through ``e`` and ``Z_0(e)``."""

    e: np.ndarray
    z0_basis: np.ndarray

    @property
    def dim(self):
        return self.z0_basis.shape[1]


def triple(Z, u, v, w):
    return Z.triple(u, v, w)


def box(Z, u, v):
    return Z.box(u, v)


def is_tripotent(Z, e):
    return Z.is_tripotent(e)


def rank_of(Z, e):
    return Z.rank_of(e)


def orthogonal(Z, e, c):
    return Z.orthogonal(e, c)


def leq(Z, c, e):
    return Z.leq(c, e)


def peirce(Z, e):
    return Z.peirce(e)


def find_frame(Z):
    return Z.find_frame()


def joint_peirce(Z, frame):
    return Z.joint_peirce(frame.members if isinstance(frame, Frame) else frame)


def real_form_x1(Z, e):
    return Z.real_form_x1(e)
