"""Exact rational helpers built on python-flint.

Complex matrices with Gaussian-rational entries are carried as ``GaussMat``
(a pair of rational matrices), which keeps every operation inside
``flint.fmpq_mat``.
"""
from fractions import Fraction

import numpy as np
from flint import fmpq, fmpq_mat


def snap(x, max_den=10**4, tol=1e-9):
    """Nearest rational with denominator ``<= max_den``; raises if far off."""
    f = Fraction(float(x)).limit_denominator(max_den)
    if abs(float(f) - float(x)) > tol * max(1.0, abs(float(x))):
        raise ValueError(f"cannot snap {x!r} to a rational with denominator <= {max_den}")
    return f


def to_fmpq(x):
    if isinstance(x, fmpq):
        return x
    f = Fraction(x)
    return fmpq(f.numerator, f.denominator)


def snap_vec(v, max_den=10**4, tol=1e-9):
    return [snap(x, max_den, tol) for x in np.asarray(v, dtype=float).ravel()]


def qmat(rows):
    """fmpq_mat from a 2-d array-like of ints/Fractions/fmpq."""
    rows = [list(r) for r in rows]
    m, n = len(rows), (len(rows[0]) if rows else 0)
    M = fmpq_mat(m, n)
    for i, r in enumerate(rows):
        for j, x in enumerate(r):
            if x != 0:
                M[i, j] = to_fmpq(x)
    return M


def qmat_from_float(a, max_den=10**4, tol=1e-9):
    a = np.atleast_2d(np.asarray(a, dtype=float))
    return qmat([[snap(x, max_den, tol) for x in row] for row in a])


def qvec(v):
    """Column vector as an fmpq_mat."""
    return qmat([[x] for x in v])


def qzeros(m, n):
    return fmpq_mat(m, n)


def qeye(n):
    M = fmpq_mat(n, n)
    for i in range(n):
        M[i, i] = 1
    return M


def qfloat(M):
    return np.array([[float(M[i, j]) for j in range(M.ncols())] for i in range(M.nrows())])


def qcol(M, j):
    return [M[i, j] for i in range(M.nrows())]


def qflatten(M):
    return [M[i, j] for i in range(M.nrows()) for j in range(M.ncols())]


def qcolumns(cols, nrows=None):
    """Matrix whose columns are the given sequences."""
    if not cols:
        return fmpq_mat(nrows or 0, 0)
    m = len(cols[0])
    M = fmpq_mat(m, len(cols))
    for j, c in enumerate(cols):
        for i, x in enumerate(c):
            if x != 0:
                M[i, j] = to_fmpq(x)
    return M


def qis_zero(M):
    return all(M[i, j] == 0 for i in range(M.nrows()) for j in range(M.ncols()))


def pivots(M):
    """Pivot columns of the reduced row echelon form."""
    R, rank = M.rref()
    piv, row = [], 0
    for j in range(M.ncols()):
        if row < rank and R[row, j] != 0:
            piv.append(j)
            row += 1
    return piv


def nullspace(M):
    """Basis (columns) of the right kernel of M, exact."""
    R, rank = M.rref()
    n = M.ncols()
    piv, row = [], 0
    for j in range(n):
        if row < rank and R[row, j] != 0:
            piv.append(j)
            row += 1
    free = [j for j in range(n) if j not in piv]
    cols = []
    for f in free:
        v = [fmpq(0)] * n
        v[f] = fmpq(1)
        for r, p in enumerate(piv):
            v[p] = -R[r, f]
        cols.append(v)
    return qcolumns(cols, n) if cols else fmpq_mat(n, 0)


def submatrix(M, rows, cols):
    S = fmpq_mat(len(rows), len(cols))
    for a, i in enumerate(rows):
        for b, j in enumerate(cols):
            S[a, b] = M[i, j]
    return S


def hstack(*mats):
    m = mats[0].nrows()
    out = fmpq_mat(m, sum(A.ncols() for A in mats))
    off = 0
    for A in mats:
        for i in range(m):
            for j in range(A.ncols()):
                out[i, off + j] = A[i, j]
        off += A.ncols()
    return out


def fraction_str(x):
    """Render a rational as ``p/q`` (or ``p`` when integral)."""
    x = Fraction(int(x.p), int(x.q)) if isinstance(x, fmpq) else Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


class GaussMat:
    """Matrix with Gaussian-rational entries, stored as ``re + i*im``."""

    def __init__(self, re, im=None):
        self.re = re
        self.im = im if im is not None else fmpq_mat(re.nrows(), re.ncols())

    @classmethod
    def eye(cls, n):
        return cls(qeye(n))

    @classmethod
    def from_complex(cls, a, max_den=10**4):
        a = np.atleast_2d(np.asarray(a, dtype=complex))
        return cls(qmat_from_float(a.real, max_den), qmat_from_float(a.imag, max_den))

    @property
    def shape(self):
        return (self.re.nrows(), self.re.ncols())

    def __add__(self, o):
        return GaussMat(self.re + o.re, self.im + o.im)

    def __sub__(self, o):
        return GaussMat(self.re - o.re, self.im - o.im)

    def __neg__(self):
        return GaussMat(-self.re, -self.im)

    def __matmul__(self, o):
        return GaussMat(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def scale(self, a, b=0):
        """Multiply by the Gaussian rational ``a + b i``."""
        a, b = to_fmpq(a), to_fmpq(b)
        return GaussMat(self.re * a - self.im * b, self.re * b + self.im * a)

    def T(self):
        return GaussMat(self.re.transpose(), self.im.transpose())

    def conj(self):
        return GaussMat(self.re, -self.im)

    def H(self):
        return GaussMat(self.re.transpose(), -self.im.transpose())

    def realify(self):
        """Real block form ``[[re, -im], [im, re]]`` (an algebra homomorphism)."""
        m, n = self.shape
        R = fmpq_mat(2 * m, 2 * n)
        for i in range(m):
            for j in range(n):
                a, b = self.re[i, j], self.im[i, j]
                R[i, j] = a
                R[i, n + j] = -b
                R[m + i, j] = b
                R[m + i, n + j] = a
        return R

    @classmethod
    def from_realified(cls, R):
        m, n = R.nrows() // 2, R.ncols() // 2
        return cls(submatrix(R, range(m), range(n)), submatrix(R, range(m, 2 * m), range(n)))

    def inv(self):
        return GaussMat.from_realified(self.realify().inv())

    def to_complex(self):
        return qfloat(self.re) + 1j * qfloat(self.im)

    def is_zero(self):
        return qis_zero(self.re) and qis_zero(self.im)

    def __eq__(self, o):
        return self.re == o.re and self.im == o.im


def cayley_unitary(S):
    """``(I+S)(I-S)^{-1}`` for skew-Hermitian Gaussian-rational S; exact unitary."""
    n = S.shape[0]
    eye = GaussMat.eye(n)
    return (eye + S) @ (eye - S).inv()


def random_skew_hermitian(rng, n, bound=3):
    """Skew-Hermitian matrix with small integer entries."""
    re = rng.integers(-bound, bound + 1, size=(n, n))
    im = rng.integers(-bound, bound + 1, size=(n, n))
    re = re - re.T
    im = im + im.T
    return GaussMat(qmat(re.tolist()), qmat(im.tolist()))


def random_skew_symmetric(rng, n, bound=3):
    a = rng.integers(-bound, bound + 1, size=(n, n))
    return GaussMat(qmat((a - a.T).tolist()))


def pythagorean_phase(rng):
    """Unit-modulus Gaussian rational ``(m^2-n^2 + 2mn i)/(m^2+n^2)``."""
    m, n = (int(x) for x in rng.integers(1, 5, size=2))
    if rng.random() < 0.5:
        n = -n
    d = m * m + n * n
    return Fraction(m * m - n * n, d), Fraction(2 * m * n, d)
