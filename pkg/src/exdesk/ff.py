"""Small finite fields GF(p^k) and dense matrix algebra over them.

Elements of GF(p^k) are encoded as integers in [0, p^k): the base-p digits
of a code are the coordinates of the element in the power basis of the
root of the defining polynomial.  Defining polynomials follow the Conway
convention (norm-compatible along subfield chains), computed by brute
force and cached, so root-of-unity embeddings agree across extension
degrees.

Matrices are numpy integer arrays of codes.  GF(p) matrix products go
through BLAS int64 matmul with a single mod; GF(p^k) products decompose
into k^2 GF(p) products on digit planes followed by reduction modulo the
defining polynomial.
"""

from __future__ import annotations

from functools import lru_cache
from math import gcd

import numpy as np

FIELD_SIZE_CAP = 1 << 20


class FieldError(ValueError):
    pass


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


# ---------------------------------------------------------------------------
# polynomial helpers over GF(p), coefficients as python ints low -> high
# ---------------------------------------------------------------------------

def _pp_trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _pp_mulmod(f, g, mod, p):
    """(f*g) mod `mod` over GF(p); mod is monic."""
    res = [0] * (len(f) + len(g) - 1) if f and g else []
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                res[i + j] = (res[i + j] + a * b) % p
    return _pp_divmod(res, mod, p)[1]


def _pp_divmod(f, g, p):
    f = list(f)
    dg = len(g) - 1
    inv_lead = pow(g[-1], p - 2, p)
    q = [0] * max(0, len(f) - dg)
    while len(f) - 1 >= dg and _pp_trim(f):
        shift = len(f) - 1 - dg
        c = (f[-1] * inv_lead) % p
        q[shift] = c
        for i, b in enumerate(g):
            f[shift + i] = (f[shift + i] - c * b) % p
        _pp_trim(f)
    return q, f


def _pp_powmod(f, e, mod, p):
    result = [1]
    base = _pp_divmod(f, mod, p)[1]
    while e:
        if e & 1:
            result = _pp_mulmod(result, base, mod, p)
        base = _pp_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _order_of_root(poly, p, k):
    """Multiplicative order of x modulo the monic polynomial `poly`."""
    q1 = p**k - 1
    for r in _prime_factors(q1):
        if _pp_powmod([0, 1], q1 // r, poly, p) == [1]:
            return False  # order properly divides q1
    return True


@lru_cache(maxsize=None)
def conway_polynomial(p: int, k: int) -> tuple[int, ...]:
    """Defining polynomial of GF(p^k), Conway convention, as a coefficient
    tuple (a0, ..., a_{k-1}, 1).

    Minimal primitive monic polynomial in the Conway word order, subject to
    norm-compatibility with the Conway polynomials of all proper subfields.
    """
    if k == 1:
        # x - g for g the least primitive root mod p; stored monic as (p-g, 1)
        for g in range(1, p):
            if all(pow(g, (p - 1) // r, p) != 1 for r in _prime_factors(p - 1)):
                return ((-g) % p, 1)
        raise FieldError(f"no primitive root mod {p}")

    q1 = p**k - 1
    subs = [d for d in range(1, k) if k % d == 0]
    sub_polys = {d: list(conway_polynomial(p, d)) for d in subs}

    def compatible(poly):
        if not _order_of_root(poly, p, k):
            return False
        for d in subs:
            # x^((p^k-1)/(p^d-1)) must be a root of the degree-d Conway polynomial
            t = q1 // (p**d - 1)
            xt = _pp_powmod([0, 1], t, poly, p)
            val = [0]
            for c in reversed(sub_polys[d]):
                val = _pp_mulmod(val, xt, poly, p)
                val = _pp_add(val, [c], p)
            if _pp_trim(list(val)):
                return False
        return True

    # Conway word order: compare (c_{k-1},...,c_0) with c_i = (-1)^(k-i) a_i
    best = None
    best_word = None
    for word in _words_in_order(p, k):
        a = [((-1) ** (k - i) * word[k - 1 - i]) % p for i in range(k)]
        poly = a + [1]
        if compatible(poly):
            best = tuple(poly)
            best_word = word
            break
    if best is None:
        raise FieldError(f"no Conway polynomial found for GF({p}^{k})")
    del best_word
    return best


def _pp_add(f, g, p):
    n = max(len(f), len(g))
    f = f + [0] * (n - len(f))
    g = g + [0] * (n - len(g))
    return _pp_trim([(a + b) % p for a, b in zip(f, g)])


def _words_in_order(p, k):
    """Yield candidate Conway words (c_{k-1},...,c_0) in lexicographic order."""
    word = [0] * k
    total = p**k
    for n in range(total):
        m = n
        for i in range(k - 1, -1, -1):
            word[i] = m % p
            m //= p
        yield tuple(word)


class FieldSpec:
    """Arithmetic in GF(p^k) with integer-coded elements.

    Immutable after construction; all per-element operations accept and
    return numpy integer arrays (or python ints) of codes.
    """

    def __init__(self, p: int, k: int):
        if not _is_prime(p):
            raise FieldError(f"p = {p} is not prime")
        if k < 1:
            raise FieldError("extension degree must be >= 1")
        if p**k > FIELD_SIZE_CAP:
            raise FieldError(f"field size {p}^{k} exceeds cap {FIELD_SIZE_CAP}")
        self.p = p
        self.k = k
        self.q = p**k
        self.poly = conway_polynomial(p, k)

        # reduction rows: x^(k+i) as a digit vector, i = 0..k-2
        red = np.zeros((max(0, k - 1), k), dtype=np.int64)
        base = [(-c) % p for c in self.poly[:k]]  # x^k
        cur = list(base)
        for i in range(k - 1):
            red[i] = cur
            # multiply by x
            carry = cur[-1]
            cur = [0] + cur[:-1]
            cur = [(c + carry * b) % p for c, b in zip(cur, base)]
        self._red = red

        # discrete log tables via the multiplicative generator x (primitive)
        exp = np.zeros(2 * self.q, dtype=np.int64)
        log = np.zeros(self.q, dtype=np.int64)
        cur_code = 1
        for i in range(self.q - 1):
            exp[i] = cur_code
            log[cur_code] = i
            cur_code = self._mul_by_x(cur_code)
        exp[self.q - 1:2 * (self.q - 1)] = exp[: self.q - 1]
        self._exp = exp
        self._log = log

        # elementwise add/neg lookup tables for small fields
        self._add_table = None
        self._neg_table = None
        if 1 < k and self.q <= 1024:
            digits = np.empty((self.q, k), dtype=np.int64)
            for i in range(k):
                digits[:, i] = (np.arange(self.q) // p**i) % p
            sums = (digits[:, None, :] + digits[None, :, :]) % p
            table = np.zeros((self.q, self.q), dtype=np.int64)
            for i in range(k):
                table += sums[..., i] * p**i
            self._add_table = table
            negs = (-digits) % p
            nt = np.zeros(self.q, dtype=np.int64)
            for i in range(k):
                nt += negs[:, i] * p**i
            self._neg_table = nt

    def _mul_by_x(self, code: int) -> int:
        digits = [(code // self.p**i) % self.p for i in range(self.k)]
        carry = digits[-1]
        digits = [0] + digits[:-1]
        if carry:
            for i in range(self.k):
                digits[i] = (digits[i] + carry * ((-self.poly[i]) % self.p)) % self.p
        return sum(d * self.p**i for i, d in enumerate(digits))

    # -- scalar/array element ops ------------------------------------------

    def digits(self, a):
        """Codes -> digit planes, shape a.shape + (k,)."""
        a = np.asarray(a, dtype=np.int64)
        out = np.empty(a.shape + (self.k,), dtype=np.int64)
        for i in range(self.k):
            out[..., i] = (a // self.p**i) % self.p
        return out

    def codes(self, digits):
        digits = np.asarray(digits, dtype=np.int64) % self.p
        out = np.zeros(digits.shape[:-1], dtype=np.int64)
        for i in range(self.k):
            out += digits[..., i] * self.p**i
        return out

    def add(self, a, b):
        if self.k == 1:
            return (np.asarray(a, dtype=np.int64) + np.asarray(b, dtype=np.int64)) % self.p
        if self._add_table is not None:
            return self._add_table[a, b]
        return self.codes(self.digits(a) + self.digits(b))

    def neg(self, a):
        if self.k == 1:
            return (-np.asarray(a, dtype=np.int64)) % self.p
        if self._neg_table is not None:
            return self._neg_table[a]
        return self.codes(-self.digits(a))

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.k == 1:
            return (a * b) % self.p
        a, b = np.broadcast_arrays(a, b)
        out = self._exp[self._log[a] + self._log[b]]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("zero has no inverse")
        return self._exp[(self.q - 1) - self._log[a]]

    def pow(self, a, e: int):
        a = np.asarray(a, dtype=np.int64)
        if e == 0:
            return np.ones_like(a)
        la = self._log[a] * (e % (self.q - 1))
        out = self._exp[la % (self.q - 1)]
        return np.where(a == 0, 0, out)

    def frobenius(self, a):
        return self.pow(a, self.p)

    def elements(self):
        return range(self.q)

    def generator(self) -> int:
        """The canonical multiplicative generator (the defining root x)."""
        return self.p if self.k > 1 else self._exp[1]

    def root_of_unity(self, n: int) -> int:
        if (self.q - 1) % n != 0:
            raise FieldError(f"GF({self.p}^{self.k}) has no {n}-th roots of unity")
        return int(self._exp[(self.q - 1) // n])

    def embed_codes(self, a, big: "FieldSpec"):
        """Embed codes of this field into `big` (same p, k | big.k)."""
        if big.p != self.p or big.k % self.k != 0:
            raise FieldError("no embedding")
        if big.k == self.k:
            return np.asarray(a, dtype=np.int64)
        a = np.asarray(a, dtype=np.int64)
        t = (big.q - 1) // (self.q - 1)
        out = big._exp[(self._log[a] * t) % (big.q - 1)]
        return np.where(a == 0, 0, out)

    def __repr__(self):
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    def __eq__(self, other):
        return isinstance(other, FieldSpec) and (self.p, self.k) == (other.p, other.k)

    def __hash__(self):
        return hash((self.p, self.k))


@lru_cache(maxsize=None)
def field_make(p: int, k: int) -> FieldSpec:
    """GF(p^k) with the deterministic Conway defining polynomial."""
    return FieldSpec(p, k)


def common_field(F: FieldSpec, G: FieldSpec) -> FieldSpec:
    if F.p != G.p:
        raise FieldError("different characteristics")
    k = F.k * G.k // gcd(F.k, G.k)
    return field_make(F.p, k)


def splitting_field(F: FieldSpec, n: int) -> FieldSpec:
    """Smallest field containing F with n-th roots of unity."""
    if n % F.p == 0:
        raise FieldError(f"n = {n} divisible by characteristic {F.p}")
    d = 1
    while (F.p**d - 1) % n != 0:
        d += 1
    k = F.k * d // gcd(F.k, d)
    return field_make(F.p, k)


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------

class FqMatrix:
    """Dense matrix over a FieldSpec; entries are integer codes.

    Values are immutable by convention: operations return new matrices and
    never write into shared arrays.
    """

    __slots__ = ("field", "a")

    def __init__(self, field: FieldSpec, data):
        self.field = field
        a = np.asarray(data, dtype=np.int64)
        if a.ndim != 2:
            raise ValueError("matrix data must be 2-dimensional")
        self.a = a

    # -- constructors --------------------------------------------------------

    @staticmethod
    def zeros(field, rows, cols):
        return FqMatrix(field, np.zeros((rows, cols), dtype=np.int64))

    @staticmethod
    def identity(field, n):
        return FqMatrix(field, np.eye(n, dtype=np.int64))

    @property
    def rows(self):
        return self.a.shape[0]

    @property
    def cols(self):
        return self.a.shape[1]

    def copy(self):
        return FqMatrix(self.field, self.a.copy())

    def __eq__(self, other):
        return (isinstance(other, FqMatrix) and self.field == other.field
                and self.a.shape == other.a.shape and bool(np.all(self.a == other.a)))

    def __hash__(self):
        return hash((self.field, self.a.shape, self.a.tobytes()))

    def __repr__(self):
        return f"FqMatrix({self.field}, {self.rows}x{self.cols})"

    # -- arithmetic -----------------------------------------------------------

    def __add__(self, other):
        return FqMatrix(self.field, self.field.add(self.a, other.a))

    def __sub__(self, other):
        return FqMatrix(self.field, self.field.sub(self.a, other.a))

    def __neg__(self):
        return FqMatrix(self.field, self.field.neg(self.a))

    def scale(self, c):
        return FqMatrix(self.field, self.field.mul(self.a, c))

    def __matmul__(self, other):
        return FqMatrix(self.field, fq_matmul(self.field, self.a, other.a))

    def kron(self, other):
        F = self.field
        if F.k == 1:
            return FqMatrix(F, np.kron(self.a, other.a) % F.p)
        ra, ca = self.a.shape
        rb, cb = other.a.shape
        prod = F.mul(self.a[:, None, :, None], other.a[None, :, None, :])
        return FqMatrix(F, prod.reshape(ra * rb, ca * cb))

    def transpose(self):
        return FqMatrix(self.field, self.a.T.copy())

    def pow(self, e: int):
        n = self.rows
        result = FqMatrix.identity(self.field, n)
        base = self
        if e < 0:
            base = base.inverse()
            e = -e
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def inverse(self):
        n = self.rows
        if n != self.cols:
            raise ValueError("not square")
        aug = np.concatenate([self.a, np.eye(n, dtype=np.int64)], axis=1)
        rank, red, _ = _rref_array(self.field, aug)
        if rank < n or np.any(red[:n, :n] != np.eye(n, dtype=np.int64)):
            raise ZeroDivisionError("matrix not invertible")
        return FqMatrix(self.field, red[:, n:].copy())

    def embed(self, big: FieldSpec):
        return FqMatrix(big, self.field.embed_codes(self.a, big))

    def order(self, cap: int = 10**7) -> int:
        """Multiplicative order (for invertible matrices)."""
        n = self.rows
        ident = np.eye(n, dtype=np.int64)
        cur = self.a
        for o in range(1, cap + 1):
            if np.array_equal(cur, ident):
                return o
            cur = fq_matmul(self.field, cur, self.a)
        raise ValueError("order exceeds cap")


def fq_matmul(F: FieldSpec, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Matrix product of code arrays over F."""
    if F.k == 1:
        return (A @ B) % F.p
    k = F.k
    dA = F.digits(A)
    dB = F.digits(B)
    conv = np.zeros((2 * k - 1,) + (A.shape[0], B.shape[1]), dtype=np.int64)
    for m in range(k):
        for n in range(k):
            conv[m + n] += dA[..., m] @ dB[..., n]
    conv %= F.p
    out = conv[:k].copy()
    for i in range(k - 1):
        hi = conv[k + i]
        out += hi[None, :, :] * F._red[i].reshape(k, 1, 1)
    out %= F.p
    return F.codes(np.moveaxis(out, 0, -1))


def _rref_array(F: FieldSpec, A: np.ndarray):
    """Reduced row-echelon form; returns (rank, array, pivot columns)."""
    R = A.copy()
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        inv = F.inv(R[r, c])
        R[r] = F.mul(R[r], inv)
        rest = np.nonzero(R[:, c])[0]
        rest = rest[rest != r]
        if rest.size:
            factors = R[rest, c]
            R[rest] = F.sub(R[rest], F.mul(factors[:, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return r, R, pivots


def rref(m: FqMatrix):
    """(rank, reduced matrix, pivot column indices)."""
    rank, R, piv = _rref_array(m.field, m.a)
    return rank, FqMatrix(m.field, R), piv


def nullspace(m: FqMatrix) -> FqMatrix:
    """Rows form a basis of the right null space {x : m x = 0}."""
    F = m.field
    rank, R, piv = _rref_array(F, m.a)
    cols = m.cols
    free = [c for c in range(cols) if c not in piv]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, fcol in enumerate(free):
        basis[i, fcol] = 1
        for r, pcol in enumerate(piv):
            basis[i, pcol] = F.neg(R[r, fcol])
    return FqMatrix(F, basis)


def left_nullspace(m: FqMatrix) -> FqMatrix:
    """Rows v with v m = 0."""
    return nullspace(m.transpose())


def row_space_basis(m: FqMatrix) -> FqMatrix:
    rank, R, _ = rref(m)
    return FqMatrix(m.field, R.a[:rank].copy())


def solve_right(A: FqMatrix, b: np.ndarray):
    """One solution x (1-d array) of A x = b, or None."""
    F = A.field
    aug = np.concatenate([A.a, np.asarray(b, dtype=np.int64).reshape(-1, 1)], axis=1)
    rank, R, piv = _rref_array(F, aug)
    if A.cols in piv:
        return None
    x = np.zeros(A.cols, dtype=np.int64)
    for r, c in enumerate(piv):
        x[c] = R[r, -1]
    return x


# ---------------------------------------------------------------------------
# induced maps on V (x) V, Lambda^2 and S^2 (quotient convention)
# ---------------------------------------------------------------------------

def sym2_index(n: int):
    """Sorted-pair basis (i <= j) and the pair -> index lookup."""
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    lookup = {}
    for idx, (i, j) in enumerate(pairs):
        lookup[(i, j)] = idx
        lookup[(j, i)] = idx
    return pairs, lookup


def induced_maps(m: FqMatrix):
    """Actions induced on V(x)V, Lambda^2(V) and S^2(V) = (V(x)V)/Lambda^2.

    Row-vector convention throughout: v -> v g.  The S^2 quotient basis is
    the image of e_i (x) e_j for i <= j, in all characteristics.
    """
    F = m.field
    n = m.rows
    if n != m.cols:
        raise ValueError("induced maps require a square matrix")
    tensor = m.kron(m)

    ext_basis = [(i, j) for i in range(n) for j in range(i + 1, n)]
    ext_lookup = {pair: idx for idx, pair in enumerate(ext_basis)}
    E = np.zeros((len(ext_basis), len(ext_basis)), dtype=np.int64)
    g = m.a
    for idx, (i, j) in enumerate(ext_basis):
        # (e_i ^ e_j) g = sum_{c<d} (g_ic g_jd - g_id g_jc) e_c ^ e_d
        outer = F.sub(F.mul(g[i][:, None], g[j][None, :]),
                      F.mul(g[j][:, None], g[i][None, :]))
        for (c, d), tidx in ext_lookup.items():
            E[idx, tidx] = outer[c, d]
    ext = FqMatrix(F, E)

    pairs, lookup = sym2_index(n)
    S = np.zeros((len(pairs), len(pairs)), dtype=np.int64)
    for idx, (i, j) in enumerate(pairs):
        outer = F.mul(g[i][:, None], g[j][None, :])
        row = np.zeros(len(pairs), dtype=np.int64)
        for c in range(n):
            for d in range(n):
                row[lookup[(c, d)]] = F.add(row[lookup[(c, d)]], outer[c, d])
        S[idx] = row
    sym = FqMatrix(F, S)
    return tensor, ext, sym


# ---------------------------------------------------------------------------
# eigenvalue profiles
# ---------------------------------------------------------------------------

class EigProfile(tuple):
    """Length-n multiplicity vector of zeta_n^i among the eigenvalues."""

    def order(self):
        return len(self)

    def pushforward(self, j: int) -> "EigProfile":
        n = len(self)
        out = [0] * n
        for i, mult in enumerate(self):
            out[(i * j) % n] += mult
        return EigProfile(out)

    def negate(self) -> "EigProfile":
        return self.pushforward(-1 % len(self)) if len(self) > 1 else self


def eig_profile_of_matrix(m: FqMatrix, n: int) -> EigProfile:
    """Multiplicities of zeta_n^i among eigenvalues of an order-dividing-n
    semisimple matrix, over the splitting field with the Conway-canonical
    root of unity."""
    F = m.field
    if n % F.p == 0:
        raise FieldError(f"order {n} divisible by characteristic {F.p}")
    S = splitting_field(F, n)
    M = m.embed(S)
    zeta = S.root_of_unity(n)
    d = m.rows
    counts = []
    for i in range(n):
        lam = S.pow(zeta, i)
        shifted = M.a.copy()
        idx = np.arange(d)
        shifted[idx, idx] = S.sub(shifted[idx, idx], lam)
        rank, _, _ = _rref_array(S, shifted)
        counts.append(d - rank)
    if sum(counts) != d:
        raise FieldError("matrix is not semisimple of order dividing n")
    return EigProfile(counts)


# ---------------------------------------------------------------------------
# .fqm text format
# ---------------------------------------------------------------------------

def write_fqm(m: FqMatrix) -> str:
    head = f"{m.field.p} {m.field.k} {m.rows} {m.cols}"
    body = "\n".join(" ".join(str(int(x)) for x in row) for row in m.a)
    return head + "\n" + body + "\n"


def read_fqm(text: str) -> FqMatrix:
    toks = text.split()
    p, k, rows, cols = (int(t) for t in toks[:4])
    vals = [int(t) for t in toks[4:4 + rows * cols]]
    if len(vals) != rows * cols:
        raise ValueError("fqm: wrong number of entries")
    F = field_make(p, k)
    a = np.array(vals, dtype=np.int64).reshape(rows, cols)
    if np.any(a < 0) or np.any(a >= F.q):
        raise ValueError("fqm: entry out of range")
    return FqMatrix(F, a)
