"""Exact integer and rational linear algebra for expanding endomorphisms.

Everything here that decides anything (determinants, coset membership,
digit selection, frequency preimages) runs in exact integer arithmetic.
Floating point only enters for eigenvalue moduli, where the roots of the
exact characteristic polynomial are located numerically.
"""

import numpy as np

from .errors import InputError, InternalError, NotExpanding, SingularMatrix

EXPANDING_TOL = 1e-9  # strict margin on |eigenvalue| - 1
EIGEN_REL_TOL = 1e-12  # root-finding accuracy on the exact char poly


def _as_int_rows(entries):
    rows = [tuple(int(v) for v in row) for row in entries]
    d = len(rows)
    if d < 1 or any(len(r) != d for r in rows):
        raise InputError("matrix must be square with d >= 1")
    return tuple(rows), d


def mat_mul(a, b):
    """Exact product of two integer matrices (tuples of tuples)."""
    d = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(d)) for j in range(d))
        for i in range(d)
    )


def mat_vec(a, v):
    """Exact matrix-vector product."""
    d = len(a)
    return tuple(sum(a[i][j] * int(v[j]) for j in range(d)) for i in range(d))


def identity(d):
    return tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d))


def mat_pow(a, n):
    """Exact n-th power, n >= 0, by binary exponentiation."""
    if n < 0:
        raise InputError("matrix power wants n >= 0")
    d = len(a)
    result = identity(d)
    base = a
    while n:
        if n & 1:
            result = mat_mul(result, base)
        base = mat_mul(base, base)
        n >>= 1
    return result


def transpose(a):
    d = len(a)
    return tuple(tuple(a[j][i] for j in range(d)) for i in range(d))


def char_poly_and_adjugate(a):
    """Faddeev-LeVerrier: exact char poly coefficients and adjugate.

    Returns ([1, c1, ..., cd], adjugate) with
    p(t) = t^d + c1 t^(d-1) + ... + cd and adj(A) A = det(A) I.
    """
    d = len(a)
    coeffs = [1]
    m = identity(d)
    m_prev = m
    for k in range(1, d + 1):
        am = mat_mul(a, m)
        tr = sum(am[i][i] for i in range(d))
        num = -tr
        if num % k != 0:
            raise InternalError("Faddeev-LeVerrier produced a non-integer coefficient")
        ck = num // k
        coeffs.append(ck)
        m_prev = m
        m = tuple(
            tuple(am[i][j] + (ck if i == j else 0) for j in range(d)) for i in range(d)
        )
    # m is now M_d and must vanish; adj(A) = (-1)^(d-1) M_(d-1).
    if any(any(v != 0 for v in row) for row in m):
        raise InternalError("Faddeev-LeVerrier recursion did not terminate at zero")
    sign = 1 if (d - 1) % 2 == 0 else -1
    adj = tuple(tuple(sign * m_prev[i][j] for j in range(d)) for i in range(d))
    return coeffs, adj


def determinant(a):
    d = len(a)
    coeffs, _ = char_poly_and_adjugate(a)
    return coeffs[d] if d % 2 == 0 else -coeffs[d]


class IntegerMatrix:
    """Exact d x d integer matrix with expanding-spectrum metadata.

    Construct through validate_expanding; the constructor itself does
    not re-check the spectrum.
    """

    def __init__(self, entries, det, lambda_min, lambda_tol, char_coeffs, adjugate):
        self.entries = entries
        self.dim = len(entries)
        self.det = det
        self.det_abs = abs(det)
        self.lambda_min = lambda_min
        self.lambda_tol = lambda_tol
        self.char_coeffs = char_coeffs
        self.adjugate = adjugate

    def as_array(self):
        return np.array(self.entries, dtype=float)

    def power(self, n):
        """Exact integer entries of A^n."""
        return mat_pow(self.entries, n)

    def star(self):
        """Exact transpose entries (the adjoint A* acting on frequencies)."""
        return transpose(self.entries)

    def similarity_factor(self):
        """c with A^T A = c I when A is a similarity, else None. Exact."""
        g = mat_mul(transpose(self.entries), self.entries)
        d = self.dim
        c = g[0][0]
        for i in range(d):
            for j in range(d):
                if g[i][j] != (c if i == j else 0):
                    return None
        return c

    def __repr__(self):
        return "IntegerMatrix(%r)" % (self.entries,)


def validate_expanding(entries):
    """Accept a square integer matrix whose eigenvalues all exceed 1 in modulus.

    Returns an IntegerMatrix carrying exact q = |det A| and the minimum
    eigenvalue modulus lambda computed from the exact characteristic
    polynomial to EIGEN_REL_TOL relative accuracy. q >= 2 then holds
    automatically: the determinant is a nonzero integer of modulus
    prod |eigenvalue| > 1.
    """
    a, d = _as_int_rows(entries)
    coeffs, adj = char_poly_and_adjugate(a)
    det = coeffs[d] if d % 2 == 0 else -coeffs[d]
    if det == 0:
        raise SingularMatrix("matrix is singular (det = 0)")
    roots = np.roots(np.array(coeffs, dtype=float))
    lam = float(np.min(np.abs(roots)))
    if lam <= 1.0 + EXPANDING_TOL:
        raise NotExpanding(
            "matrix is not expanding: min |eigenvalue| = %.12g <= 1 + %g"
            % (lam, EXPANDING_TOL)
        )
    return IntegerMatrix(a, det, lam, EIGEN_REL_TOL, coeffs, adj)


def exact_solve_integral(a_entries, adj, det, target):
    """Solve a x = target over the integers, or return None.

    adj and det must belong to a_entries. The solution is
    adj @ target / det, integral iff det divides every component.
    """
    num = mat_vec(adj, target)
    if any(v % det != 0 for v in num):
        return None
    return tuple(v // det for v in num)


def same_coset(matrix, u, v):
    """True iff u - v lies in A Z^d, decided exactly."""
    if len(u) != matrix.dim or len(v) != matrix.dim:
        raise InputError("vector dimension does not match the matrix")
    diff = tuple(int(u[i]) - int(v[i]) for i in range(matrix.dim))
    return (
        exact_solve_integral(matrix.entries, matrix.adjugate, matrix.det, diff)
        is not None
    )


class DigitSet:
    """q integer representatives of Z^d / A Z^d, zero always first."""

    def __init__(self, matrix, digits):
        self.matrix = matrix
        self.digits = digits

    def as_array(self):
        return np.array(self.digits, dtype=float)

    def __len__(self):
        return len(self.digits)

    def __iter__(self):
        return iter(self.digits)

    def __repr__(self):
        return "DigitSet(%r)" % (list(self.digits),)


def _shell(d, r):
    """Integer vectors with sup-norm exactly r, largest-lex first.

    The listing order is the normalization contract: scanning shells
    outward and taking the lexicographically largest candidates first
    yields {0, 1, -1} for [[3]] and {(0,0), (1,0)} for [[1,-1],[1,1]].
    """
    if r == 0:
        return [tuple([0] * d)]
    vals = list(range(r, -r - 1, -1))
    out = []

    def rec(prefix, hit):
        if len(prefix) == d:
            if hit:
                out.append(tuple(prefix))
            return
        for v in vals:
            rec(prefix + [v], hit or abs(v) == r)

    rec([], False)
    return out


def coset_search_bound(matrix):
    """Provable sup-norm shell containing a representative of every coset.

    q * (max infinity-row-sum of A^-1) equals the max row abs-sum of the
    adjugate, an exact integer.
    """
    d = matrix.dim
    return max(
        sum(abs(matrix.adjugate[i][j]) for j in range(d)) for i in range(d)
    )


def digit_set(matrix):
    """One representative per coset of Z^d / A Z^d, zero included.

    Deterministic: shells of increasing sup-norm, largest-lex first
    inside each shell. Failure to find q cosets inside the provable
    bounding shell is an arithmetic bug, not a user error.
    """
    q = matrix.det_abs
    digits = []
    bound = max(coset_search_bound(matrix), 1)
    for r in range(0, bound + 1):
        for cand in _shell(matrix.dim, r):
            if all(not same_coset(matrix, cand, g) for g in digits):
                digits.append(cand)
                if len(digits) == q:
                    return DigitSet(matrix, tuple(digits))
    raise InternalError(
        "found %d of %d cosets within sup-norm %d" % (len(digits), q, bound)
    )


def parse_matrix(text):
    """Row-major 'a,b;c,d' (or 'a b;c d') matrix spec used by the CLI."""
    rows = []
    for chunk in text.strip().split(";"):
        parts = chunk.replace(",", " ").split()
        if not parts:
            raise InputError("empty matrix row in %r" % text)
        try:
            rows.append([int(p) for p in parts])
        except ValueError:
            raise InputError("matrix entries must be integers: %r" % text) from None
    return validate_expanding(rows)
