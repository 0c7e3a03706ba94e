"""Euclidean Jordan algebras, their cones of squares, idempotents and faces.

Elements are real coordinate vectors in a fixed basis. Three concrete
families are provided (real symmetric matrices, complex Hermitian matrices
and the spin factor); a generic constructor builds an algebra from its
product tensor, which is how Jordan algebras attached to tripotents are
produced.
"""
from dataclasses import dataclass
from itertools import combinations

import numpy as np
from scipy import linalg

from .errors import DomainError, NumericalError, StructuralError

IDEMPOTENT_TOL = 1e-9
BOUNDARY_TOL = 1e-9


def _sym_basis(n, hermitian):
    basis, labels = [], []
    for i in range(n):
        m = np.zeros((n, n), dtype=complex)
        m[i, i] = 1
        basis.append(m)
        labels.append(f"E{i + 1}{i + 1}")
    for i, j in combinations(range(n), 2):
        m = np.zeros((n, n), dtype=complex)
        m[i, j] = m[j, i] = 1
        basis.append(m)
        labels.append(f"E{i + 1}{j + 1}")
        if hermitian:
            m = np.zeros((n, n), dtype=complex)
            m[i, j], m[j, i] = 1j, -1j
            basis.append(m)
            labels.append(f"iE{i + 1}{j + 1}")
    return basis, labels


class EuclideanJordanAlgebra:
    """Finite-dimensional formally real Jordan algebra.

    Attributes:
        kind (str): ``"sym"``, ``"herm"``, ``"spin"`` or ``"generic"``.
        n (int): matrix size (sym/herm), vector dimension (spin), 0 otherwise.
        rank (int): Jordan rank.
        labels (tuple): basis labels.
        product_tensor (np.ndarray): ``P[i, j, k]`` with ``(x∘y)_k = x_i y_j P[i, j, k]``.
        unit (np.ndarray): coordinates of the identity.
        gram (np.ndarray): Gram matrix of the canonical inner product.
    """

    def __init__(self, kind, n, rank, labels, product_tensor, unit, gram, matrix_basis=None,
                 embedding=None):
        self.kind = kind
        self.embedding = embedding
        self.n = n
        self.rank = int(rank)
        self.labels = tuple(labels)
        self.product_tensor = np.asarray(product_tensor, dtype=float)
        self.unit = np.asarray(unit, dtype=float)
        self.gram = np.asarray(gram, dtype=float)
        self._matrix_basis = matrix_basis
        for a in (self.product_tensor, self.unit, self.gram):
            a.setflags(write=False)

    def __repr__(self):
        return f"EuclideanJordanAlgebra(kind={self.kind!r}, n={self.n}, dim={self.dim}, rank={self.rank})"

    @property
    def dim(self):
        return self.unit.shape[0]

    def descriptor(self):
        return {"kind": self.kind, "n": self.n}

    # -- construction -------------------------------------------------

    @classmethod
    def sym(cls, n):
        return cls._matrix_algebra("sym", n, hermitian=False)

    @classmethod
    def herm(cls, n):
        return cls._matrix_algebra("herm", n, hermitian=True)

    @classmethod
    def _matrix_algebra(cls, kind, n, hermitian):
        basis, labels = _sym_basis(n, hermitian)
        d = len(basis)
        flat = np.array([b.ravel() for b in basis]).T
        # coordinates of a Hermitian matrix: least squares on the (real) span
        solver = np.linalg.pinv(np.vstack([flat.real, flat.imag]))
        P = np.zeros((d, d, d))
        for i, a in enumerate(basis):
            for j, b in enumerate(basis):
                prod = 0.5 * (a @ b + b @ a)
                P[i, j] = solver @ np.concatenate([prod.ravel().real, prod.ravel().imag])
        gram = np.array([[np.trace(a @ b).real for b in basis] for a in basis])
        unit = solver @ np.concatenate([np.eye(n).ravel(), np.zeros(n * n)])
        P[np.abs(P) < 1e-15] = 0
        return cls(kind, n, n, labels, P, unit, gram, matrix_basis=(basis, solver))

    @classmethod
    def spin(cls, n):
        """Spin factor R x R^n with ``(a,x)∘(b,y) = (ab + x.y, ay + bx)``."""
        d = n + 1
        P = np.zeros((d, d, d))
        P[0, 0, 0] = 1
        for k in range(1, d):
            P[0, k, k] = P[k, 0, k] = 1
            P[k, k, 0] = 1
        gram = 2.0 * np.eye(d)
        unit = np.zeros(d)
        unit[0] = 1
        labels = ["1"] + [f"v{k}" for k in range(1, d)]
        return cls("spin", n, 2, labels, P, unit, gram)

    @classmethod
    def from_descriptor(cls, desc):
        kind, n = desc["kind"], int(desc["n"])
        try:
            return {"sym": cls.sym, "herm": cls.herm, "spin": cls.spin}[kind](n)
        except KeyError:
            raise StructuralError(f"unknown algebra kind {kind!r}") from None

    @classmethod
    def from_structure(cls, product_tensor, unit, gram, labels=None, embedding=None):
        """Generic algebra; rank is read off as ``<e, e>`` of the canonical form.

        ``embedding`` optionally records how coordinates map into an ambient space.
        """
        unit = np.asarray(unit, dtype=float)
        gram = np.asarray(gram, dtype=float)
        r = float(unit @ gram @ unit)
        if abs(r - round(r)) > 1e-6:
            raise StructuralError(f"inner product is not canonical: <e,e> = {r}")
        labels = labels or [f"b{k}" for k in range(unit.shape[0])]
        return cls("generic", 0, int(round(r)), labels, product_tensor, unit, gram,
                   embedding=embedding)

    # -- basic operations --------------------------------------------

    def _check(self, x):
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise StructuralError(f"expected a vector of length {self.dim}, got shape {x.shape}")
        return x

    def product(self, x, y):
        return np.einsum("i,j,ijk->k", self._check(x), self._check(y), self.product_tensor)

    def mult_operator(self, x):
        """Matrix of ``M_x : y -> x∘y``."""
        return np.einsum("i,ijk->kj", self._check(x), self.product_tensor)

    def inner(self, x, y):
        return float(self._check(x) @ self.gram @ self._check(y))

    def norm(self, x):
        return float(np.sqrt(max(self.inner(x, x), 0.0)))

    def trace_form(self, x, y):
        return float(np.trace(self.mult_operator(self.product(x, y))))

    def to_matrix(self, x):
        if self._matrix_basis is None:
            raise StructuralError(f"{self.kind} algebra has no matrix realization")
        basis, _ = self._matrix_basis
        return sum(c * b for c, b in zip(self._check(x), basis))

    def from_matrix(self, m):
        if self._matrix_basis is None:
            raise StructuralError(f"{self.kind} algebra has no matrix realization")
        _, solver = self._matrix_basis
        m = np.asarray(m, dtype=complex).ravel()
        return solver @ np.concatenate([m.real, m.imag])

    def is_idempotent(self, c, tol=IDEMPOTENT_TOL):
        c = self._check(c)
        return self.norm(self.product(c, c) - c) <= tol

    def idempotent_rank(self, c):
        return int(round(self.inner(c, self.unit)))

    def subalgebra(self, basis, unit):
        """Jordan subalgebra spanned by the columns of ``basis``."""
        basis = np.atleast_2d(np.asarray(basis, dtype=float))
        if basis.shape[1] == 0:
            return None
        q = _gram_orthonormal(basis, self.gram)
        coords = q.T @ self.gram  # maps ambient to subalgebra coordinates
        P = np.einsum("ai,bj,ijk,ck->abc", q.T, q.T, self.product_tensor, coords)
        return EuclideanJordanAlgebra.from_structure(P, coords @ unit, np.eye(q.shape[1]), embedding=q)


def _gram_orthonormal(cols, gram):
    """Orthonormalize columns with respect to ``gram``; drops dependent ones."""
    m = cols.T @ gram @ cols
    w, v = np.linalg.eigh(m)
    keep = w > 1e-12 * max(1.0, w.max(initial=0.0))
    return cols @ v[:, keep] / np.sqrt(w[keep])


def jordan_product(A, x, y):
    return A.product(x, y)


def _group(vals, tol):
    groups = []
    for idx in np.argsort(vals)[::-1]:
        if groups and abs(vals[groups[-1][-1]] - vals[idx]) <= tol:
            groups[-1].append(idx)
        else:
            groups.append([idx])
    return groups


def spectral_decompose(A, x, method="auto", tol=BOUNDARY_TOL):
    """Spectral decomposition ``x = sum_i lam_i c_i`` with distinct nonzero ``lam_i``.

    Args:
        A (EuclideanJordanAlgebra): the algebra.
        x (np.ndarray): coordinates of the element.
        method (str): ``"dense"`` uses the matrix or closed-form realization,
            ``"krylov"`` diagonalizes ``M_x`` on the associative subalgebra
            generated by ``x``. ``"auto"`` picks dense when available.
        tol (float): relative threshold below which spectral values count as 0.

    Returns:
        list: ``(lam, c)`` pairs sorted by decreasing ``lam``; the ``c`` are
        pairwise orthogonal idempotents.
    """
    x = A._check(x)
    if method == "auto":
        method = "dense" if A.kind in ("sym", "herm", "spin") else "krylov"
    if method == "dense":
        pairs = _spectral_dense(A, x, tol)
    elif method == "krylov":
        pairs = _spectral_krylov(A, x, tol)
    else:
        raise ValueError(f"unknown method {method!r}")
    scale = max([abs(l) for l, _ in pairs], default=0.0)
    return [(l, c) for l, c in pairs if abs(l) > tol * max(scale, 1e-300) and scale > 0]


def _spectral_dense(A, x, tol):
    if A.kind == "spin":
        a, v = x[0], x[1:]
        r = np.linalg.norm(v)
        if r <= tol * max(1.0, abs(a)):
            return [(float(a), A.unit.copy())]
        c_plus = 0.5 * np.concatenate([[1.0], v / r])
        c_minus = 0.5 * np.concatenate([[1.0], -v / r])
        return [(float(a + r), c_plus), (float(a - r), c_minus)]
    m = A.to_matrix(x)
    w, v = np.linalg.eigh(0.5 * (m + m.conj().T))
    scale = max(np.abs(w).max(initial=0.0), 1.0)
    out = []
    for g in _group(w, tol * scale):
        proj = v[:, g] @ v[:, g].conj().T
        out.append((float(np.mean(w[g])), A.from_matrix(proj)))
    return out


def _spectral_krylov(A, x, tol):
    G = A.gram
    vecs = [A.unit]
    q = _gram_orthonormal(np.array(vecs).T, G)
    p = A.unit
    for _ in range(A.dim):
        p = A.product(x, p)
        r = p - q @ (q.T @ G @ p)
        if np.sqrt(max(r @ G @ r, 0.0)) <= 1e-10 * max(1.0, np.sqrt(p @ G @ p)):
            break
        q = np.hstack([q, (r / np.sqrt(r @ G @ r))[:, None]])
    L = A.mult_operator(x)
    small = q.T @ G @ L @ q
    w, v = np.linalg.eigh(0.5 * (small + small.T))
    vecs = q @ v
    # the unit expands as a sum of the idempotents, each proportional to an eigenvector
    a = np.linalg.lstsq(vecs, A.unit, rcond=None)[0]
    resid = np.linalg.norm(A.mult_operator(x) @ vecs - vecs * w)
    if resid > 1e-7 * max(1.0, np.abs(w).max(initial=0.0)):
        raise NumericalError(f"Krylov spectral decomposition residual {resid:.3e}")
    scale = max(np.abs(w).max(initial=0.0), 1.0)
    out = []
    for g in _group(w, tol * scale):
        c = vecs[:, g] @ a[g]
        out.append((float(np.mean(w[g])), c))
    return out


@dataclass(frozen=True)
class ConeMembership:
    """Classification of a point against the cone of squares."""

    status: str  # "interior", "boundary" or "outside"
    rank: int = 0

    def __str__(self):
        return f"Boundary({self.rank})" if self.status == "boundary" else self.status.capitalize()


def spectral_values(A, x, method="auto"):
    """Spectral values with multiplicity (including zeros), decreasing."""
    x = A._check(x)
    if method == "auto":
        method = "dense" if A.kind in ("sym", "herm", "spin") else "krylov"
    if method == "dense" and A.kind in ("sym", "herm"):
        m = A.to_matrix(x)
        return np.sort(np.linalg.eigvalsh(0.5 * (m + m.conj().T)))[::-1]
    pairs = _spectral_dense(A, x, 0.0) if method == "dense" else _spectral_krylov(A, x, 1e-12)
    vals = []
    for lam, c in pairs:
        vals += [lam] * A.idempotent_rank(c)
    vals += [0.0] * (A.rank - len(vals))
    return np.sort(np.array(vals))[::-1]


def cone_membership(A, x, tol=BOUNDARY_TOL, method="auto"):
    """Interior / Boundary(k) / Outside for the cone of squares."""
    vals = spectral_values(A, x, method)
    scale = np.abs(vals).max(initial=0.0)
    thr = tol * (scale if scale > 0 else 1.0)
    if np.any(vals < -thr):
        return ConeMembership("outside")
    k = int(np.sum(vals > thr))
    if k == A.rank:
        return ConeMembership("interior", k)
    return ConeMembership("boundary", k)


def peirce_decompose_eja(A, c):
    """Bases (columns) of ``X_0(c)``, ``X_1/2(c)``, ``X_1(c)``."""
    c = A._check(c)
    if not A.is_idempotent(c):
        raise DomainError("peirce decomposition needs an idempotent")
    L = A.mult_operator(c)
    w, v = linalg.eigh(A.gram @ L, A.gram)
    out = {0.0: [], 0.5: [], 1.0: []}
    for k, lam in enumerate(w):
        key = min(out, key=lambda t: abs(t - lam))
        if abs(key - lam) > 1e-8:
            raise NumericalError(f"M_c has eigenvalue {lam} outside {{0, 1/2, 1}}")
        out[key].append(v[:, k])
    return {k: (np.array(vs).T if vs else np.zeros((A.dim, 0))) for k, vs in out.items()}


@dataclass(frozen=True)
class ConeFace:
    """The face ``Ω ∩ X_0(c)`` of the cone of squares.

    Attributes:
        idempotent: the idempotent ``c``.
        x0_basis: columns spanning ``X_0(c)``.
        rank: rank of ``c``.
        exposing: the vector exposing the face via ``<., exposing>``.
        dual_idempotent: ``e - c``.
    """

    algebra: EuclideanJordanAlgebra
    idempotent: np.ndarray
    x0_basis: np.ndarray
    rank: int
    exposing: np.ndarray
    dual_idempotent: np.ndarray

    @property
    def dim(self):
        return self.x0_basis.shape[1]

    def contains(self, x, tol=BOUNDARY_TOL):
        A = self.algebra
        x = A._check(x)
        if self.dim == 0:
            return np.linalg.norm(x) <= tol
        q = _gram_orthonormal(self.x0_basis, A.gram)
        resid = x - q @ (q.T @ A.gram @ x)
        if A.norm(resid) > 1e-7 * max(1.0, A.norm(x)):
            return False
        return cone_membership(A, x, tol).status != "outside"

    def sub_algebra(self):
        """``X_0(c)`` as a Jordan algebra; its ``embedding`` maps back to the ambient one."""
        if self.dim == 0:
            return None
        return self.algebra.subalgebra(self.x0_basis, self.dual_idempotent)


def cone_face(A, c):
    c = A._check(c)
    spaces = peirce_decompose_eja(A, c)
    return ConeFace(
        algebra=A,
        idempotent=c,
        x0_basis=spaces[0.0],
        rank=A.idempotent_rank(c),
        exposing=c.copy(),
        dual_idempotent=A.unit - c,
    )
