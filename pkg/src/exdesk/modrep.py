"""Modules over group algebras: construction, MeatAxe splitting,
isomorphism testing, Hom spaces and Brauer eigenvalue data.

Modules are right modules: vectors are rows and generators act by
v -> v g.  chop follows the Norton/Holt-Rees strategy with caller-supplied
randomness (a 64-bit seed), extending the ground field whenever a factor
is not absolutely irreducible, so returned factors are absolutely
irreducible over (possibly) an extension of the input field.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ff import (FieldSpec, FqMatrix, field_make, fq_matmul, rref, nullspace,
                 solve_right, eig_profile_of_matrix, EigProfile, _rref_array)


class ModuleError(ValueError):
    pass


class GModule:
    """A representation of a finite group by generator matrices over GF(q)."""

    def __init__(self, field: FieldSpec, gens: list[FqMatrix], group_id: str = "?"):
        if not gens:
            raise ModuleError("need at least one generator")
        dim = gens[0].rows
        for g in gens:
            if g.field != field or g.rows != dim or g.cols != dim:
                raise ModuleError("generator size/field mismatch")
        self.field = field
        self.dim = dim
        self.gens = gens
        self.group_id = group_id
        self._inv_cache: list[FqMatrix] | None = None

    def __repr__(self):
        return f"GModule({self.group_id}, dim {self.dim} over {self.field})"

    def gen_inverses(self) -> list[FqMatrix]:
        if self._inv_cache is None:
            self._inv_cache = [g.inverse() for g in self.gens]
        return self._inv_cache

    def check_invertible(self):
        self.gen_inverses()
        return True

    def word(self, w) -> FqMatrix:
        """Evaluate a word given as signed 1-based generator indices."""
        M = FqMatrix.identity(self.field, self.dim)
        for idx in w:
            if idx == 0 or abs(idx) > len(self.gens):
                raise ModuleError(f"bad word letter {idx}")
            g = self.gens[idx - 1] if idx > 0 else self.gen_inverses()[-idx - 1]
            M = M @ g
        return M

    def embed(self, big: FieldSpec) -> "GModule":
        return GModule(big, [g.embed(big) for g in self.gens], self.group_id)


def parse_word(text: str):
    return [int(t) for t in text.split()]


def format_word(w) -> str:
    return " ".join(str(i) for i in w)


# ---------------------------------------------------------------------------
# spinning and echelonized bases
# ---------------------------------------------------------------------------

class _Echelon:
    """Incremental row-echelon basis over a field."""

    def __init__(self, field: FieldSpec, ambient: int):
        self.field = field
        self.ambient = ambient
        self.rows = np.zeros((0, ambient), dtype=np.int64)
        self.pivots: list[int] = []

    def reduce(self, v: np.ndarray) -> np.ndarray:
        F = self.field
        v = v.copy()
        for r, c in enumerate(self.pivots):
            if v[c]:
                v = F.sub(v, F.mul(v[c], self.rows[r]))
        return v

    def insert(self, v: np.ndarray) -> bool:
        """Reduce v and insert if independent; returns True if inserted."""
        F = self.field
        v = self.reduce(v)
        nz = np.nonzero(v)[0]
        if nz.size == 0:
            return False
        c = int(nz[0])
        v = F.mul(v, F.inv(v[c]))
        # keep fully reduced (clear column c above)
        if len(self.pivots):
            col = self.rows[:, c].copy()
            mask = col != 0
            if mask.any():
                self.rows[mask] = F.sub(self.rows[mask], F.mul(col[mask, None], v[None, :]))
        pos = int(np.searchsorted(np.array(self.pivots, dtype=np.int64), c))
        self.rows = np.insert(self.rows, pos, v, axis=0)
        self.pivots.insert(pos, c)
        return True

    @property
    def dim(self):
        return len(self.pivots)

    def basis(self) -> FqMatrix:
        return FqMatrix(self.field, self.rows.copy())


def spin(V: GModule, seeds) -> FqMatrix:
    """Echelonized basis of the smallest submodule containing the seed
    row vector(s), closed under all generators (hence their inverses)."""
    F = V.field
    seeds = np.atleast_2d(np.asarray(seeds, dtype=np.int64))
    if not np.any(seeds):
        raise ModuleError("zero seed")
    ech = _Echelon(F, V.dim)
    for s in seeds:
        ech.insert(s)
    changed = True
    while changed and ech.dim < V.dim:
        changed = False
        for g in V.gens:
            images = fq_matmul(F, ech.rows, g.a)
            for img in images:
                if ech.insert(img):
                    changed = True
    return ech.basis()


def sub_quotient(V: GModule, basis: FqMatrix):
    """(submodule GModule, quotient GModule, data) for an invariant row space.

    `data` holds the pivot/non-pivot columns needed to push vectors to
    quotient coordinates or lift sub coordinates.
    """
    F = V.field
    rank, R, piv = rref(basis)
    E = R.a[:rank]
    piv = list(piv)
    nonpiv = [c for c in range(V.dim) if c not in piv]
    sub_gens = []
    quo_gens = []
    for g in V.gens:
        EG = fq_matmul(F, E, g.a)
        sub_gens.append(FqMatrix(F, EG[:, piv]))
        if nonpiv:
            comp = np.eye(V.dim, dtype=np.int64)[nonpiv]
            CG = fq_matmul(F, comp, g.a)
            # reduce modulo E: subtract pivot-column multiples
            CG = F.sub(CG, fq_matmul(F, CG[:, piv], E))
            quo_gens.append(FqMatrix(F, CG[:, nonpiv]))
    sub = GModule(F, sub_gens, V.group_id)
    quo = GModule(F, quo_gens, V.group_id) if nonpiv else None
    return sub, quo, {"E": E, "piv": piv, "nonpiv": nonpiv}


# ---------------------------------------------------------------------------
# polynomial tooling over a FieldSpec (coefficient lists, low -> high)
# ---------------------------------------------------------------------------

def _poly_trim(f):
    while f and f[-1] == 0:
        f.pop()
    return f


def _poly_add(F, f, g):
    n = max(len(f), len(g))
    f = f + [0] * (n - len(f))
    g = g + [0] * (n - len(g))
    return _poly_trim([int(F.add(a, b)) for a, b in zip(f, g)])


def _poly_mul(F, f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                out[i + j] = int(F.add(out[i + j], F.mul(a, b)))
    return _poly_trim(out)


def _poly_divmod(F, f, g):
    f = list(f)
    dg = len(g) - 1
    inv = int(F.inv(g[-1]))
    q = [0] * max(0, len(f) - dg)
    while _poly_trim(f) and len(f) - 1 >= dg:
        shift = len(f) - 1 - dg
        c = int(F.mul(f[-1], inv))
        q[shift] = c
        for i, b in enumerate(g):
            f[shift + i] = int(F.sub(f[shift + i], F.mul(c, b)))
        _poly_trim(f)
    return q, f


def _poly_gcd(F, f, g):
    f, g = list(f), list(g)
    while g:
        f, g = g, _poly_divmod(F, f, g)[1]
    if f:
        inv = int(F.inv(f[-1]))
        f = [int(F.mul(c, inv)) for c in f]
    return f


def _poly_powmod(F, f, e, mod):
    res = [1]
    base = _poly_divmod(F, f, mod)[1]
    while e:
        if e & 1:
            res = _poly_divmod(F, _poly_mul(F, res, base), mod)[1]
        base = _poly_divmod(F, _poly_mul(F, base, base), mod)[1]
        e >>= 1
    return res


def poly_factor(F: FieldSpec, f, rng) -> list[tuple[list, int]]:
    """Factor a monic squarefree-or-not polynomial into irreducibles with
    multiplicities (distinct-degree + Cantor-Zassenhaus)."""
    inv = int(F.inv(f[-1]))
    f = [int(F.mul(c, inv)) for c in f]
    factors: dict[tuple, int] = {}

    def record(g, mult):
        key = tuple(g)
        factors[key] = factors.get(key, 0) + mult

    def squarefree_split(g, mult):
        # g' and gcd
        d = [int(F.mul(g[i], i % F.p)) for i in range(1, len(g))]
        d = _poly_trim(d)
        if not d:
            # g = h(x^p); take p-th root using x^(q/p) trick on coefficients
            h = []
            for i in range(0, len(g), F.p):
                c = g[i]
                # c^(q/p) is the p-th root of c
                root = int(F.pow(c, F.q // F.p)) if c else 0
                h.append(root)
            squarefree_split(h, mult * F.p)
            return
        c = _poly_gcd(F, g, d)
        w = _poly_divmod(F, g, c)[0]
        # w carries each irreducible whose multiplicity is prime to p, once
        i = 1
        while len(w) > 1:
            y = _poly_gcd(F, w, c)
            z = _poly_divmod(F, w, y)[0]
            if len(z) > 1:
                ddf(z, mult * i)
            i += 1
            w = y
            c = _poly_divmod(F, c, y)[0]
        if len(c) > 1:
            # remaining multiplicities are divisible by p, so c = h(x^p)
            squarefree_split(c, mult)

    def ddf(g, mult):
        # distinct-degree on squarefree g
        d = 1
        h = [0, 1]
        rest = g
        while len(rest) - 1 >= 2 * d:
            h = _poly_powmod(F, h, F.q, rest)
            sub = _poly_add(F, h, [0, int(F.neg(1))])
            gd = _poly_gcd(F, rest, sub)
            if len(gd) > 1:
                edf(gd, d, mult)
                rest = _poly_divmod(F, rest, gd)[0]
                h = _poly_divmod(F, h, rest)[1]
            d += 1
        if len(rest) > 1:
            record(rest, mult)

    def edf(g, d, mult):
        # equal-degree: g = product of irreducibles of degree d
        if len(g) - 1 == d:
            record(g, mult)
            return
        while True:
            r = _poly_trim([int(rng.integers(0, F.q)) for _ in range(len(g) - 1)])
            if not r:
                continue
            if F.p == 2:
                # trace map
                t = list(r)
                cur = list(r)
                for _ in range(d * F.k - 1):
                    cur = _poly_powmod(F, cur, 2, g)
                    t = _poly_add(F, t, cur)
                h = _poly_gcd(F, g, t)
            else:
                e = (F.q**d - 1) // 2
                t = _poly_powmod(F, r, e, g)
                t = _poly_add(F, t, [int(F.neg(1))])
                h = _poly_gcd(F, g, t)
            if 1 <= len(h) - 1 < len(g) - 1:
                edf(h, d, mult)
                edf(_poly_divmod(F, g, h)[0], d, mult)
                return

    squarefree_split(f, 1)
    out = [(list(k), m) for k, m in factors.items()]
    out.sort(key=lambda km: (len(km[0]), km[0]))
    return out


def matrix_minpoly(F: FieldSpec, A: np.ndarray, rng) -> list:
    """Minimal polynomial via Krylov annihilators of random vectors."""
    d = A.shape[0]
    mp = [1]
    tried = 0
    while tried < d + 2:
        v = rng.integers(0, F.q, size=d).astype(np.int64)
        tried += 1
        if not np.any(v):
            continue
        # annihilator of v: first dependency in v, vA, vA^2, ...
        kry = [v]
        cur = v
        while True:
            cur = fq_matmul(F, cur[None, :], A)[0]
            red = cur.copy()
            M = FqMatrix(F, np.vstack(kry).T)
            x = solve_right(M, red)
            if x is not None:
                ann = [int(F.neg(c)) for c in x] + [1]
                break
            kry.append(cur)
        mp = _poly_lcm(F, mp, ann)
        if len(mp) - 1 == d or _matrix_poly_is_zero(F, A, mp):
            return mp
    return mp


def _poly_lcm(F, f, g):
    if not f or not g:
        return []
    gc = _poly_gcd(F, f, g)
    return _poly_mul(F, f, _poly_divmod(F, g, gc)[0])


def matrix_poly_eval(F: FieldSpec, A: np.ndarray, f) -> np.ndarray:
    """f(A) by Horner."""
    d = A.shape[0]
    out = np.zeros((d, d), dtype=np.int64)
    for c in reversed(f):
        out = fq_matmul(F, out, A)
        if c:
            idx = np.arange(d)
            out[idx, idx] = F.add(out[idx, idx], c)
    return out


def _matrix_poly_is_zero(F, A, f):
    return not np.any(matrix_poly_eval(F, A, f))


# ---------------------------------------------------------------------------
# the MeatAxe
# ---------------------------------------------------------------------------

@dataclass
class FactorList:
    """Composition factors as (simple GModule, multiplicity) pairs."""
    factors: list[tuple[GModule, int]]

    def dims(self):
        return sorted((s.dim for s, m in self.factors for _ in range(m)), reverse=True)

    def total_dim(self):
        return sum(s.dim * m for s, m in self.factors)

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)


def _random_algebra_element(V: GModule, rng) -> np.ndarray:
    F = V.field
    d = V.dim
    nmats = len(V.gens)
    out = np.zeros((d, d), dtype=np.int64)
    terms = 2 + int(rng.integers(0, 3))
    for _ in range(terms):
        length = 1 + int(rng.integers(0, 3))
        M = np.eye(d, dtype=np.int64)
        for _ in range(length):
            gi = int(rng.integers(0, nmats))
            M = fq_matmul(F, M, V.gens[gi].a)
        c = int(rng.integers(1, F.q))
        out = F.add(out, F.mul(M, c))
    return out


def try_split(V: GModule, rng, max_attempts: int = 60):
    """One splitting attempt loop: a proper invariant row space (as an
    FqMatrix basis) or None if V is certified irreducible over V.field."""
    F = V.field
    d = V.dim
    if d == 1:
        return None
    dual_gens = None
    for attempt in range(max_attempts):
        theta = _random_algebra_element(V, rng)
        mp = matrix_minpoly(F, theta, rng)
        if len(mp) - 1 == 0:
            continue
        factors = poly_factor(F, mp, rng)
        # prefer low nullity: sort by degree
        for fpoly, _mult in factors:
            N = matrix_poly_eval(F, theta, fpoly)
            ker = nullspace(FqMatrix(F, N.T))  # rows v with v N = 0
            if ker.rows == 0:
                continue
            W = spin(V, ker.a[0])
            if 0 < W.rows < d:
                return W
            # dual side (Norton)
            if dual_gens is None:
                dual_gens = [g.inverse().transpose() for g in V.gens]
            dualV = GModule(F, dual_gens, V.group_id)
            kerT = nullspace(FqMatrix(F, N))   # rows w with w N^T = 0, i.e. N w^T = 0
            if kerT.rows == 0:
                continue
            U = spin(dualV, kerT.a[0])
            if 0 < U.rows < d:
                # perp of U is a proper submodule of V
                perp = nullspace(FqMatrix(F, U.a))
                return FqMatrix(F, perp.a)
            if ker.rows == len(fpoly) - 1:
                # multiplicity-one factor, both spins full: irreducible
                return None
    raise ModuleError(f"MeatAxe failed to decide on {V} after {max_attempts} attempts")


def endo_dim(V: GModule) -> int:
    return hom_space(V, V).rows


def chop(V: GModule, seed: int = 0) -> FactorList:
    """Complete multiset of composition factors; factors are absolutely
    irreducible, over extensions of V.field where necessary.  The returned
    multiset (up to isomorphism) is independent of the seed."""
    rng = np.random.default_rng(seed)
    pending = [V]
    simples: list[GModule] = []
    mults: list[int] = []
    while pending:
        M = pending.pop()
        W = try_split(M, rng)
        if W is not None:
            sub, quo, _ = sub_quotient(M, W)
            pending.append(sub)
            if quo is not None:
                pending.append(quo)
            continue
        # irreducible over M.field; ensure absolute irreducibility
        e = endo_dim(M)
        if e > 1:
            big = field_make(M.field.p, M.field.k * e)
            pending.append(M.embed(big))
            continue
        for i, S in enumerate(simples):
            if S.dim == M.dim and is_isomorphic(S, M) is not None:
                mults[i] += 1
                break
        else:
            simples.append(M)
            mults.append(1)
    order = sorted(range(len(simples)), key=lambda i: (simples[i].dim, i))
    return FactorList([(simples[i], mults[i]) for i in order])


def hom_space(A: GModule, B: GModule) -> FqMatrix:
    """Basis of intertwiners A -> B as rows of vec(X), X of shape (dimA, dimB):
    G_A X = X G_B for all generators."""
    if A.field != B.field:
        raise ModuleError("hom_space requires a common field")
    F = A.field
    if len(A.gens) != len(B.gens):
        raise ModuleError("generator count mismatch")
    blocks = []
    IA = FqMatrix.identity(F, A.dim)
    IB = FqMatrix.identity(F, B.dim)
    for gA, gB in zip(A.gens, B.gens):
        M = gA.kron(IB) - IA.kron(gB.transpose())
        blocks.append(M.a)
    stack = FqMatrix(F, np.concatenate(blocks, axis=0))
    return nullspace(stack)


def hom_dim(A: GModule, B: GModule) -> int:
    return hom_space(A, B).rows


def is_isomorphic(A: GModule, B: GModule):
    """Explicit invertible intertwiner between simple modules, or None."""
    if A.dim != B.dim or A.field != B.field:
        return None
    H = hom_space(A, B)
    if H.rows == 0:
        return None
    X = FqMatrix(A.field, H.a[0].reshape(A.dim, B.dim))
    X.inverse()  # nonzero homs between simples are invertible
    return X


def fixed_points(V: GModule) -> FqMatrix:
    """Basis of V^G = {v : v g = v for all generators}."""
    F = V.field
    eye = np.eye(V.dim, dtype=np.int64)
    stacked = np.concatenate([F.sub(g.a, eye) for g in V.gens], axis=1)
    # v (g - 1) = 0 for all g: rows v with v M = 0 for the horizontal stack M
    return nullspace(FqMatrix(F, stacked.T))


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------

def build_dual(V: GModule) -> GModule:
    gens = [g.inverse().transpose() for g in V.gens]
    return GModule(V.field, gens, V.group_id)


def build_tensor(A: GModule, B: GModule) -> GModule:
    if A.field != B.field:
        raise ModuleError("tensor requires a common field")
    if len(A.gens) != len(B.gens):
        raise ModuleError("generator count mismatch")
    gens = [gA.kron(gB) for gA, gB in zip(A.gens, B.gens)]
    return GModule(A.field, gens, A.group_id)


def build_sym2(V: GModule) -> GModule:
    from .ff import induced_maps
    gens = [induced_maps(g)[2] for g in V.gens]
    return GModule(V.field, gens, V.group_id)


def build_ext2(V: GModule) -> GModule:
    from .ff import induced_maps
    gens = [induced_maps(g)[1] for g in V.gens]
    return GModule(V.field, gens, V.group_id)


def build_restrict(V: GModule, words, group_id: str) -> GModule:
    gens = [V.word(w) for w in words]
    return GModule(V.field, gens, group_id)


def brauer_profile(V: GModule, word, n: int) -> EigProfile:
    """Eigenvalue profile of a p'-element given as a word of order n."""
    M = V.word(word)
    if n % V.field.p == 0:
        raise ModuleError("element order divisible by the characteristic")
    return eig_profile_of_matrix(M, n)


# ---------------------------------------------------------------------------
# bundle file formats
# ---------------------------------------------------------------------------

def write_gens(V: GModule) -> str:
    head = f"{V.field.p} {V.field.k} {V.dim} {len(V.gens)}"
    bodies = []
    for g in V.gens:
        bodies.append("\n".join(" ".join(str(int(x)) for x in row) for row in g.a))
    return head + "\n" + "\n".join(bodies) + "\n"


def read_gens(text: str, group_id: str = "?") -> GModule:
    toks = text.split()
    p, k, n, g = (int(t) for t in toks[:4])
    F = field_make(p, k)
    vals = [int(t) for t in toks[4:]]
    if len(vals) != g * n * n:
        raise ModuleError("gens file: wrong entry count")
    gens = []
    for i in range(g):
        a = np.array(vals[i * n * n:(i + 1) * n * n], dtype=np.int64).reshape(n, n)
        gens.append(FqMatrix(F, a))
    return GModule(F, gens, group_id)


def read_perm(text: str):
    """Permutation generators: header 'deg g', then g lines of images of 1..deg.
    Returns a list of 0-based image tuples."""
    lines = [ln for ln in text.splitlines() if ln.strip() and not ln.startswith("#")]
    deg, g = (int(t) for t in lines[0].split())
    perms = []
    for ln in lines[1:1 + g]:
        images = [int(t) - 1 for t in ln.split()]
        if sorted(images) != list(range(deg)):
            raise ModuleError("perm file: not a permutation")
        perms.append(tuple(images))
    if len(perms) != g:
        raise ModuleError("perm file: wrong generator count")
    return perms


def write_perm(perms) -> str:
    deg = len(perms[0])
    out = [f"{deg} {len(perms)}"]
    for p in perms:
        out.append(" ".join(str(i + 1) for i in p))
    return "\n".join(out) + "\n"


def perm_module(perms, field: FieldSpec, group_id: str = "?") -> GModule:
    """Permutation module over `field` from 0-based permutation images."""
    deg = len(perms[0])
    gens = []
    for p in perms:
        M = np.zeros((deg, deg), dtype=np.int64)
        for i, j in enumerate(p):
            M[i, j] = 1
        gens.append(FqMatrix(field, M))
    return GModule(field, gens, group_id)


def jordan_partition(M: FqMatrix, p: int) -> tuple:
    """Jordan block sizes of a unipotent matrix over characteristic p."""
    F = M.field
    d = M.rows
    N = F.sub(M.a, np.eye(d, dtype=np.int64))
    ranks = [d]
    cur = np.eye(d, dtype=np.int64)
    while True:
        cur = fq_matmul(F, cur, N)
        r, _, _ = _rref_array(F, cur)
        ranks.append(r)
        if r == 0:
            break
    # mult of block size s: r_{s-1} - 2 r_s + r_{s+1}
    ranks.append(0)
    parts = []
    for s in range(1, len(ranks) - 1):
        mult = ranks[s - 1] - 2 * ranks[s] + ranks[s + 1]
        parts.extend([s] * mult)
    parts.sort(reverse=True)
    assert sum(parts) == d
    return tuple(parts)
