"""The bundled group corpus: deterministic generator constructions, simple
module libraries built by chopping seeded constructions, class words,
presentations and 1-cohomology tables.

Simple-module naming: canonical names are the dimension plus a letter
tie-break ('3a' before '3b') ordered by lexicographic comparison of Brauer
profiles over class representatives in a fixed class order; a bundled
dictionary maps conventional labels (subscripts/stars) to canonical names
per group.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

import numpy as np

from .ff import (FieldSpec, FqMatrix, field_make, fq_matmul, nullspace,
                 solve_right, EigProfile)
from .modrep import (GModule, chop, is_isomorphic, build_dual, build_tensor,
                     build_sym2, build_ext2, perm_module, brauer_profile,
                     hom_dim, ModuleError)
from .cohom import GroupPresentation, parse_pres, h1, ext1, certify_order


def _data_text(relpath: str) -> str:
    return resources.files("exdesk.data").joinpath(relpath).read_text()


# ---------------------------------------------------------------------------
# permutation utilities
# ---------------------------------------------------------------------------

def pmul(p, q):
    """Composition acting on the right: i -> q[p[i]]."""
    return tuple(q[i] for i in p)


def pinv(p):
    out = [0] * len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)


def porder(p):
    ident = tuple(range(len(p)))
    o, cur = 1, p
    while cur != ident:
        cur = pmul(cur, p)
        o += 1
    return o


def enumerate_with_words(gens, cap: int = 10**6):
    """BFS over the group: {perm: shortest word (signed 1-based letters)}."""
    ident = tuple(range(len(gens[0])))
    letters = []
    for i, g in enumerate(gens):
        letters.append((i + 1, g))
        letters.append((-(i + 1), pinv(g)))
    words = {ident: ()}
    frontier = [ident]
    while frontier:
        new = []
        for x in frontier:
            wx = words[x]
            for li, g in letters:
                y = pmul(x, g)
                if y not in words:
                    words[y] = wx + (li,)
                    new.append(y)
                    if len(words) > cap:
                        raise ModuleError("group enumeration cap exceeded")
        frontier = new
    return words


def conjugacy_classes(words: dict):
    """Partition into conjugacy classes: list of (representative perm, size),
    representative = minimal word then minimal perm."""
    elems = list(words)
    gens_all = []
    seen_letters = set()
    for w in words.values():
        for li in w:
            seen_letters.add(li)
    # reconstruct generator perms from single-letter words
    letter_perm = {}
    for p, w in words.items():
        if len(w) == 1:
            letter_perm[w[0]] = p
    unassigned = set(elems)
    classes = []
    for x in sorted(elems, key=lambda p: (len(words[p]), words[p], p)):
        if x not in unassigned:
            continue
        orbit = {x}
        frontier = [x]
        while frontier:
            new = []
            for y in frontier:
                for li, g in letter_perm.items():
                    z = pmul(pmul(pinv(g), y), g)
                    if z not in orbit:
                        orbit.add(z)
                        new.append(z)
            frontier = new
        rep = min(orbit, key=lambda p: (len(words[p]), words[p], p))
        classes.append((rep, len(orbit)))
        unassigned -= orbit
    return classes


# ---------------------------------------------------------------------------
# projective geometry helpers
# ---------------------------------------------------------------------------

def proj_norm(v, F: FieldSpec):
    for x in v:
        if x:
            inv = int(F.inv(x))
            return tuple(int(F.mul(y, inv)) for y in v)
    raise ValueError("zero vector")


def proj_points(F: FieldSpec, n: int):
    pts, seen = [], set()
    for tup in itertools.product(range(F.q), repeat=n):
        if not any(tup):
            continue
        nm = proj_norm(tup, F)
        if nm not in seen:
            seen.add(nm)
            pts.append(nm)
    return pts


def perm_from_matrix(M: FqMatrix, points):
    F = M.field
    idx = {p: i for i, p in enumerate(points)}
    out = []
    for pt in points:
        v = np.array(pt, dtype=np.int64)
        img = fq_matmul(F, v[None, :], M.a)[0]
        out.append(idx[proj_norm(tuple(int(x) for x in img), F)])
    return tuple(out)


# ---------------------------------------------------------------------------
# octonion algebra over GF(3) and the G2(3) construction
# ---------------------------------------------------------------------------

G2_3_ORDER = 4_245_696


def _octonion_mul_table():
    """8x8x8 structure constants over GF(3); basis 1, e1..e7 with the cyclic
    Fano lines (i, i+1, i+3)."""
    def fix(i):
        return ((i - 1) % 7) + 1
    lines = [(i, fix(i + 1), fix(i + 3)) for i in range(1, 8)]
    MUL = np.zeros((8, 8, 8), dtype=np.int64)
    MUL[0, :, :] = np.eye(8, dtype=np.int64)
    for i in range(1, 8):
        MUL[i, 0] = np.eye(8, dtype=np.int64)[i]
        MUL[i, i, 0] = 2
    for (a, b, c) in lines:
        for (x, y, z) in ((a, b, c), (b, c, a), (c, a, b)):
            MUL[x, y, z] = 1
            MUL[y, x, z] = 2
    return MUL, lines


def _is_octonion_aut(A: np.ndarray, MUL) -> bool:
    """A acts on the imaginary part e1..e7 and fixes 1."""
    big = np.zeros((8, 8), dtype=np.int64)
    big[0, 0] = 1
    big[1:, 1:] = A
    lhs = np.einsum('ia,jb,abk->ijk', big, big, MUL) % 3
    rhs = np.einsum('ijc,ck->ijk', MUL, big) % 3
    return np.array_equal(lhs, rhs)


def _octonion_derivations(MUL):
    """Basis of {D : D(xy) = D(x)y + x D(y), D(1) = 0} on the imaginary part."""
    F3 = field_make(3, 1)
    rows = []
    for i in range(1, 8):
        for j in range(1, 8):
            prod = MUL[i, j]
            for comp in range(8):
                row = np.zeros(49, dtype=np.int64)
                for r in range(1, 8):
                    if prod[r] and comp >= 1:
                        row[(r - 1) * 7 + (comp - 1)] += prod[r]
                for s in range(1, 8):
                    row[(i - 1) * 7 + (s - 1)] -= MUL[s, j, comp]
                    row[(j - 1) * 7 + (s - 1)] -= MUL[i, s, comp]
                rows.append(row % 3)
    ker = nullspace(FqMatrix(F3, np.array(rows, dtype=np.int64)))
    return [v.reshape(7, 7) for v in ker.a]


def g2_3_generators():
    """Deterministic generators of G2(3) on the 7-dimensional module: the
    Fano 7-cycle, one sign flip, and two exponentials of nilpotent
    derivations."""
    MUL, lines = _octonion_mul_table()

    def fix(i):
        return ((i - 1) % 7) + 1
    P = np.zeros((7, 7), dtype=np.int64)
    for i in range(1, 8):
        P[i - 1, fix(i + 1) - 1] = 1
    sig = np.eye(7, dtype=np.int64)
    for i in range(1, 8):
        if i not in lines[0]:
            sig[i - 1, i - 1] = 2
    assert _is_octonion_aut(P, MUL) and _is_octonion_aut(sig, MUL)

    ders = _octonion_derivations(MUL)
    assert len(ders) == 14
    exps = []
    rng = np.random.default_rng(1)
    while len(exps) < 2:
        c = rng.integers(0, 3, size=len(ders))
        D = np.zeros((7, 7), dtype=np.int64)
        for ci, Di in zip(c, ders):
            D = (D + int(ci) * Di) % 3
        if not np.any(D):
            continue
        D2 = (D @ D) % 3
        if np.any((D2 @ D) % 3):
            continue
        E = (np.eye(7, dtype=np.int64) + D + 2 * D2) % 3
        if _is_octonion_aut(E, MUL):
            exps.append(E)
    F3 = field_make(3, 1)
    gens = [FqMatrix(F3, M) for M in (P, sig, *exps)]
    return gens, ders


def matrix_group_order(gens: list[FqMatrix], dim_cap: int = 16) -> int:
    """Order of a matrix group over GF(p) via a Schreier-Sims stabilizer
    chain on row vectors."""
    F = gens[0].field
    dim = gens[0].rows
    total = 1
    level_gens = [g.a.copy() for g in gens]
    basis_vectors = [np.eye(dim, dtype=np.int64)[i] for i in range(dim)]
    depth = 0
    while level_gens and depth < 3 * dim:
        bp = None
        for v in basis_vectors:
            if any(not np.array_equal(fq_matmul(F, v[None, :], g)[0], v)
                   for g in level_gens):
                bp = v
                break
        if bp is None:
            break
        orb = {tuple(int(x) for x in bp): np.eye(dim, dtype=np.int64)}
        frontier = [tuple(int(x) for x in bp)]
        while frontier:
            new = []
            for t in frontier:
                tv = np.array(t, dtype=np.int64)
                for g in level_gens:
                    img = tuple(int(x) for x in fq_matmul(F, tv[None, :], g)[0])
                    if img not in orb:
                        orb[img] = fq_matmul(F, orb[t], g)
                        new.append(img)
            frontier = new
        total *= len(orb)
        new_gens = []
        seen = set()
        inv_cache = {}
        for t, rep in orb.items():
            tv = np.array(t, dtype=np.int64)
            for g in level_gens:
                img = tuple(int(x) for x in fq_matmul(F, tv[None, :], g)[0])
                key_img = img
                if key_img not in inv_cache:
                    inv_cache[key_img] = FqMatrix(F, orb[key_img]).inverse().a
                sg = fq_matmul(F, fq_matmul(F, rep, g), inv_cache[key_img])
                key = sg.tobytes()
                if key not in seen and not np.array_equal(sg, np.eye(dim, dtype=np.int64)):
                    seen.add(key)
                    new_gens.append(sg)
        level_gens = new_gens
        depth += 1
    return total


def enumerate_matrix_group(gens: list[FqMatrix], cap: int):
    """{matrix bytes: word} closure of a small matrix group."""
    F = gens[0].field
    dim = gens[0].rows
    ident = np.eye(dim, dtype=np.int64)
    inv_gens = [g.inverse().a for g in gens]
    seen = {ident.tobytes(): ()}
    mats = {ident.tobytes(): ident}
    frontier = [ident]
    while frontier:
        new = []
        for M in frontier:
            w = seen[M.tobytes()]
            for i, g in enumerate(gens):
                for li, ga in ((i + 1, g.a), (-(i + 1), inv_gens[i])):
                    N = fq_matmul(F, M, ga)
                    key = N.tobytes()
                    if key not in seen:
                        if len(seen) >= cap:
                            raise ModuleError("matrix group enumeration cap exceeded")
                        seen[key] = w + (li,)
                        mats[key] = N
                        new.append(N)
        frontier = new
    return seen, mats


# ---------------------------------------------------------------------------
# the library
# ---------------------------------------------------------------------------

@dataclass
class ClassData:
    label: str
    order: int
    word: tuple
    size: int


@dataclass
class GroupLibrary:
    group_id: str
    order: int
    p: int
    field: FieldSpec               # library (splitting) field
    gens_core: GModule             # a faithful core representation
    perms: list | None
    presentation: GroupPresentation | None
    simples: list[GModule]
    names: list[str]
    paper_names: dict              # conventional label -> canonical name
    classes: list[ClassData]       # p'-classes in canonical order
    h1_table: dict                 # canonical name -> dim H^1
    profiles: dict                 # (name, class label) -> EigProfile
    self_dual: dict                # canonical name -> bool
    dual_map: dict                 # canonical name -> canonical name
    extras: dict = field(default_factory=dict)

    def simple(self, label: str) -> GModule:
        name = self.paper_names.get(label, label)
        return self.simples[self.names.index(name)]

    def canonical(self, label: str) -> str:
        return self.paper_names.get(label, label)

    def dims(self) -> dict:
        return {n: s.dim for n, s in zip(self.names, self.simples)}

    def h1_of(self, label: str) -> int:
        return self.h1_table[self.canonical(label)]

    def profile(self, label: str, class_label: str) -> EigProfile:
        return self.profiles[(self.canonical(label), class_label)]


def _simple_closure(seeds: list[GModule], wanted_dims, lib_field, group_id,
                    seed: int = 0, max_rounds: int = 6):
    """Chop seeds and tensor/sym/ext closures until the wanted multiset of
    dimensions is found; returns pairwise non-isomorphic simples over
    lib_field."""
    found: list[GModule] = []

    def add(S: GModule):
        if S.field != lib_field:
            if lib_field.k % S.field.k == 0:
                S = S.embed(lib_field)
            else:
                return
        for T in found:
            if T.dim == S.dim and is_isomorphic(T, S) is not None:
                return
        found.append(S)

    queue = list(seeds)
    rounds = 0
    while queue and rounds < max_rounds:
        rounds += 1
        new_queue = []
        for V in queue:
            for S, _m in chop(V, seed):
                add(S)
        have = sorted(s.dim for s in found)
        if _covers(have, wanted_dims):
            break
        # expand: duals, sym/ext squares, pairwise tensors of small simples
        small = [s for s in found if s.dim <= 16]
        for s in found:
            new_queue.append(build_dual(s))
        for s in small:
            if s.dim >= 2:
                new_queue.append(build_sym2(s))
                new_queue.append(build_ext2(s))
        for a in small:
            for b in small:
                if a.dim * b.dim <= 100:
                    new_queue.append(build_tensor(a, b))
        queue = new_queue
    have = sorted(s.dim for s in found)
    if not _covers(have, wanted_dims):
        raise ModuleError(f"{group_id}: closure found dims {have}, wanted {sorted(wanted_dims)}")
    keep = []
    remaining = list(wanted_dims)
    for s in sorted(found, key=lambda s: s.dim):
        if s.dim in remaining:
            remaining.remove(s.dim)
            keep.append(s)
    return keep


def _covers(have, wanted):
    pool = list(have)
    for d in wanted:
        if d in pool:
            pool.remove(d)
        else:
            return False
    return True


def _canonical_names(simples, classes, core_for_words: GModule):
    """Assign canonical names: dimension plus letter tie-breaks ordered by
    lexicographic Brauer-profile comparison in class order."""
    keyed = []
    for S in simples:
        key = []
        for cd in classes:
            try:
                prof = tuple(brauer_profile(S, cd.word, cd.order))
            except Exception:
                prof = ()
            key.append(prof)
        keyed.append((S.dim, tuple(key), S))
    keyed.sort(key=lambda t: (t[0], t[1]))
    names = []
    by_dim: dict[int, int] = {}
    dim_counts: dict[int, int] = {}
    for d, _k, _s in keyed:
        dim_counts[d] = dim_counts.get(d, 0) + 1
    out_simples, out_names = [], []
    for d, _key, S in keyed:
        i = by_dim.get(d, 0)
        by_dim[d] = i + 1
        name = str(d) if dim_counts[d] == 1 else f"{d}{'abcdefgh'[i]}"
        out_simples.append(S)
        out_names.append(name)
    return out_simples, out_names


def _finalize(group_id, order, p, lib_field, core, perms, pres, simples_raw,
              paper_naming, extras=None, classes_from=None, h1_modules=None):
    """Common tail: classes, canonical names, H^1 table, profile table."""
    classes = []
    if classes_from is not None:
        words = enumerate_with_words(classes_from)
        assert len(words) == order, f"{group_id}: perm group order {len(words)}"
        ccs = conjugacy_classes(words)
        pprime = [(rep, size) for rep, size in ccs if porder(rep) % p != 0 or porder(rep) == 1]
        # canonical class order: by element order, then by class size, then by word
        tagged = sorted(pprime, key=lambda t: (porder(t[0]), t[1], words[t[0]]))
        by_order: dict[int, int] = {}
        for rep, size in tagged:
            o = porder(rep)
            i = by_order.get(o, 0)
            by_order[o] = i + 1
            label = f"{o}{'ABCDEFGH'[i]}"
            classes.append(ClassData(label, o, tuple(words[rep]), size))

    simples, names = _canonical_names(simples_raw, classes, core)

    profiles = {}
    for S, name in zip(simples, names):
        for cd in classes:
            profiles[(name, cd.label)] = brauer_profile(S, cd.word, cd.order)

    h1_table = {}
    if pres is not None:
        for S, name in zip(simples, names):
            if h1_modules is not None and name not in h1_modules:
                continue
            h1_table[name] = h1(pres, S)[0]

    dual_map = {}
    self_dual = {}
    for S, name in zip(simples, names):
        dS = build_dual(S)
        for T, tname in zip(simples, names):
            if T.dim == S.dim and is_isomorphic(T, dS) is not None:
                dual_map[name] = tname
                self_dual[name] = tname == name
                break

    return GroupLibrary(group_id, order, p, lib_field, core, perms, pres,
                        simples, names, paper_naming, classes, h1_table,
                        profiles, self_dual, dual_map, extras or {})


def _load_pres(group_id) -> GroupPresentation:
    return parse_pres(_data_text(f"groups/{group_id}.pres"), group_id)


# -- individual groups -------------------------------------------------------

def _build_psl3_2() -> GroupLibrary:
    F2 = field_make(2, 1)
    a = FqMatrix(F2, [[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    b = FqMatrix(F2, [[0, 1, 0], [0, 0, 1], [1, 1, 0]])
    nat = GModule(F2, [a, b], "PSL3_2")
    pts = proj_points(F2, 3)
    perms = [perm_from_matrix(a, pts), perm_from_matrix(b, pts)]
    pres = _load_pres("PSL3_2")
    assert pres.check_module(nat)
    simples = _simple_closure([nat, build_dual(nat), build_tensor(nat, build_dual(nat))],
                              [1, 3, 3, 8], F2, "PSL3_2")
    lib = _finalize("PSL3_2", 168, 2, F2, nat, perms, pres, simples,
                    {}, classes_from=perms)
    # conventional labels: 3 = the natural module, 3* its dual
    nat_name = None
    for S, name in zip(lib.simples, lib.names):
        if S.dim == 3 and is_isomorphic(S, nat) is not None:
            nat_name = name
    lib.paper_names.update({"1": "1", "3": nat_name,
                            "3*": lib.dual_map[nat_name], "8": "8"})
    return lib


def _build_psl2_7() -> GroupLibrary:
    F7 = field_make(7, 1)
    A = FqMatrix(F7, [[0, 6], [1, 0]])
    B = FqMatrix(F7, [[0, 6], [1, 6]])
    nat = GModule(F7, [A, B], "SL2_7")
    V3 = build_sym2(nat)
    pts = proj_points(F7, 2)
    perms = [perm_from_matrix(A, pts), perm_from_matrix(B, pts)]
    pres = _load_pres("PSL2_7")
    assert pres.check_module(V3)
    simples = _simple_closure([V3, build_sym2(V3), build_tensor(V3, build_sym2(V3))],
                              [1, 3, 5, 7], F7, "PSL2_7")
    lib = _finalize("PSL2_7", 168, 7, F7, V3, perms, pres, simples,
                    {"1": "1", "3": "3", "5": "5", "7": "7"}, classes_from=perms)
    return lib


def _build_psl2_9() -> GroupLibrary:
    F9 = field_make(3, 2)
    W = FqMatrix(F9, [[0, int(F9.neg(1))], [1, 0]])
    M = FqMatrix(F9, [[0, 3], [7, 3]])
    nat = GModule(F9, [W, M], "SL2_9")
    V3a = build_sym2(nat)
    V3b = GModule(F9, [FqMatrix(F9, F9.frobenius(g.a)) for g in V3a.gens], "PSL2_9")
    V4 = build_tensor(nat, GModule(F9, [FqMatrix(F9, F9.frobenius(g.a)) for g in nat.gens], "SL2_9"))
    V9 = build_tensor(V3a, V3b)
    pts = proj_points(F9, 2)
    perms = [perm_from_matrix(W, pts), perm_from_matrix(M, pts)]
    pres = _load_pres("PSL2_9")
    assert pres.check_module(V3a) and pres.check_module(V4)
    simples = _simple_closure([V3a, V3b, V4, V9], [1, 3, 3, 4, 9], F9, "PSL2_9")
    lib = _finalize("PSL2_9", 360, 3, F9, V3a, perms, pres, simples, {},
                    classes_from=perms)
    threes = [n for n in lib.names if n.startswith("3")]
    lib.paper_names.update({"1": "1", "4": "4", "9": "9",
                            "3_1": threes[0], "3_2": threes[1]})
    return lib


def _build_psl3_3() -> GroupLibrary:
    F3 = field_make(3, 1)
    a = FqMatrix(F3, [[1, 1, 0], [0, 1, 0], [0, 0, 1]])
    b = FqMatrix(F3, [[0, 1, 0], [0, 0, 1], [2, 1, 0]]).scale(2)
    nat = GModule(F3, [a, b], "PSL3_3")
    pts = proj_points(F3, 3)
    perms = [perm_from_matrix(a, pts), perm_from_matrix(b, pts)]
    pres = _load_pres("PSL3_3")
    assert pres.check_module(nat)
    dual = build_dual(nat)
    six = build_sym2(dual)          # S^2(3*), simple of dimension 6
    fifteen = build_ext2(build_dual(six))
    seeds = [nat, dual, build_tensor(nat, dual), six, fifteen,
             build_tensor(nat, fifteen)]
    simples = _simple_closure(seeds, [1, 3, 3, 6, 6, 7, 15, 15, 27], F3, "PSL3_3")
    lib = _finalize("PSL3_3", 5616, 3, F3, nat, perms, pres, simples, {},
                    classes_from=perms)
    # conventions: fix 3 = natural; 6 = S^2(3*); 15 = Lambda^2(6*)
    def canon_of(V):
        for S, n in zip(lib.simples, lib.names):
            if S.dim == V.dim and is_isomorphic(S, V) is not None:
                return n
        raise ModuleError("module not in library")
    n3 = canon_of(nat)
    n6 = canon_of(six)
    n15 = canon_of(fifteen)
    lib.paper_names.update({
        "1": "1", "3": n3, "3*": lib.dual_map[n3],
        "6": n6, "6*": lib.dual_map[n6],
        "7": "7", "15": n15, "15*": lib.dual_map[n15], "27": "27",
    })
    return lib


def _det3(F, M):
    a = M.a
    t = 0
    for (i, j, k), sgn in ((((0, 1, 2)), 1), ((0, 2, 1), -1), ((1, 0, 2), -1),
                           ((1, 2, 0), 1), ((2, 0, 1), 1), ((2, 1, 0), -1)):
        term = int(F.mul(F.mul(a[0, i], a[1, j]), a[2, k]))
        t = int(F.add(t, term if sgn > 0 else F.neg(term)))
    return t


def _su3_3_matrices():
    """SU3(3) generators: the projective pair generating PSU3(3) on the
    Hermitian unital, with the second generator rescaled into SL3."""
    F9 = field_make(3, 2)
    u = FqMatrix(F9, [[1, 1, 1], [0, 1, 2], [0, 0, 1]])
    w0 = FqMatrix(F9, [[0, 0, 3], [0, 1, 0], [6, 0, 0]])
    d = _det3(F9, w0)
    lam = None
    for c in range(1, 9):
        if int(F9.mul(F9.mul(F9.mul(c, c), c), d)) == 1 and int(F9.pow(c, 4)) == 1:
            lam = c
            break
    assert lam is not None
    w = w0.scale(lam)
    assert _det3(F9, u) == 1 and _det3(F9, w) == 1
    return F9, u, w


def _hermitian_isotropic_points(F9):
    J = np.zeros((3, 3), dtype=np.int64)
    J[0, 2] = J[1, 1] = J[2, 0] = 1
    pts = []
    for p in proj_points(F9, 3):
        v = np.array(p, dtype=np.int64)
        cv = F9.frobenius(v)
        s = 0
        for i in range(3):
            for j in range(3):
                if J[i, j]:
                    s = int(F9.add(s, F9.mul(v[i], cv[j])))
        if s == 0:
            pts.append(p)
    return pts


def _build_psu3_3() -> GroupLibrary:
    F9, u, w = _su3_3_matrices()
    nat = GModule(F9, [u, w], "PSU3_3")
    pts = _hermitian_isotropic_points(F9)
    perms = [perm_from_matrix(u, pts), perm_from_matrix(w, pts)]
    pres = _load_pres("PSU3_3")
    assert pres.check_module(nat)
    dual = build_dual(nat)
    six = build_sym2(dual)
    fifteen = build_ext2(build_dual(six))
    seeds = [nat, dual, build_tensor(nat, dual), six, fifteen]
    simples = _simple_closure(seeds, [1, 3, 3, 6, 6, 7, 15, 15], F9, "PSU3_3")
    lib = _finalize("PSU3_3", 6048, 3, F9, nat, perms, pres, simples, {},
                    classes_from=perms)
    def canon_of(V):
        for S, n in zip(lib.simples, lib.names):
            if S.dim == V.dim and is_isomorphic(S, V) is not None:
                return n
        raise ModuleError("module not in library")
    n3, n6, n15 = canon_of(nat), canon_of(six), canon_of(fifteen)
    lib.paper_names.update({
        "1": "1", "3": n3, "3*": lib.dual_map[n3], "6": n6,
        "6*": lib.dual_map[n6], "7": "7", "15": n15, "15*": lib.dual_map[n15],
    })
    return lib


def _build_g2_2prime() -> GroupLibrary:
    """G2(2)' = PSU3(3) in characteristic 2, from the 28-point action."""
    F9, u, w = _su3_3_matrices()
    pts = _hermitian_isotropic_points(F9)
    perms = [perm_from_matrix(u, pts), perm_from_matrix(w, pts)]
    F2 = field_make(2, 1)
    P28 = perm_module(perms, F2, "G2_2prime")
    pres = _load_pres("PSU3_3")
    pres = GroupPresentation(pres.ngens, pres.relators, "G2_2prime")
    assert pres.check_module(P28)
    simples = _simple_closure([P28], [1, 6, 14], F2, "G2_2prime")
    lib = _finalize("G2_2prime", 6048, 2, F2, P28, perms, pres, simples,
                    {"1": "1", "6": "6", "14": "14"}, classes_from=perms)
    return lib


def _build_2g2_3prime() -> GroupLibrary:
    """2G2(3)' = PSL2(8) in characteristic 3; library over GF(27)."""
    F8 = field_make(2, 3)
    ua = FqMatrix(F8, [[1, 1], [0, 1]])
    ub = FqMatrix(F8, [[0, 1], [1, 3]])
    pts = proj_points(F8, 2)
    perms = [perm_from_matrix(ua, pts), perm_from_matrix(ub, pts)]
    F3 = field_make(3, 1)
    F27 = field_make(3, 3)
    P9 = perm_module(perms, F3, "2G2_3prime")
    pres = _load_pres("PSL2_8")
    pres = GroupPresentation(pres.ngens, pres.relators, "2G2_3prime")
    assert pres.check_module(P9)
    seven = None
    for S, m in chop(P9):
        if S.dim == 7:
            seven = S
    sym = build_sym2(seven)
    simples = _simple_closure([P9, sym], [1, 7, 9, 9, 9], F27, "2G2_3prime")
    lib = _finalize("2G2_3prime", 504, 3, F27, seven.embed(F27), perms, pres,
                    simples, {}, classes_from=perms)
    nines = [n for n in lib.names if n.startswith("9")]
    lib.paper_names.update({"1": "1", "7": "7", "9_1": nines[0],
                            "9_2": nines[1], "9_3": nines[2]})
    return lib


def _build_g2_3() -> GroupLibrary:
    """G2(3) from octonion automorphisms; no presentation registered."""
    F3 = field_make(3, 1)
    gens, ders = g2_3_generators()
    V7 = GModule(F3, gens, "G2_3")
    order = matrix_group_order(gens)
    assert order == G2_3_ORDER, f"G2(3) construction gave order {order}"
    # adjoint 14-dim: conjugation action on the derivation algebra
    basis = np.array([D.reshape(49) for D in ders], dtype=np.int64)
    basis_mat = FqMatrix(F3, basis.T)  # 49 x 14
    adj_gens = []
    for g in gens:
        ginv = g.inverse()
        cols = []
        for D in ders:
            img = fq_matmul(F3, fq_matmul(F3, ginv.a, D), g.a).reshape(49)
            x = solve_right(basis_mat, img)
            assert x is not None
            cols.append(x)
        adj_gens.append(FqMatrix(F3, np.array(cols, dtype=np.int64)))
    V14 = GModule(F3, adj_gens, "G2_3")
    sevens = [S for S, m in chop(V14) if S.dim == 7]
    assert len(sevens) == 2
    # 7a := the octonion module; 27a from S^2(7a)
    if is_isomorphic(sevens[0], V7) is not None:
        seven_a, seven_b = V7, sevens[1]
    else:
        seven_a, seven_b = V7, sevens[0]
    t27a = [S for S, m in chop(build_sym2(seven_a)) if S.dim == 27]
    t27b = [S for S, m in chop(build_sym2(seven_b)) if S.dim == 27]
    assert len(t27a) == 1 and len(t27b) == 1
    triv = GModule(F3, [FqMatrix.identity(F3, 1)] * len(gens), "G2_3")
    simples = [triv, seven_a, seven_b, t27a[0], t27b[0]]
    lib = GroupLibrary("G2_3", G2_3_ORDER, 3, F3, V7, None, None,
                       simples, ["1", "7a", "7b", "27a", "27b"],
                       {"1": "1", "7_1": "7a", "7_2": "7b",
                        "27_1": "27a", "27_2": "27b"},
                       [], {}, {}, {}, {}, {"derivations": ders})
    # dual/self-dual data
    for S, name in zip(simples, lib.names):
        dS = build_dual(S)
        for T, tname in zip(simples, lib.names):
            if T.dim == S.dim and is_isomorphic(T, dS) is not None:
                lib.dual_map[name] = tname
                lib.self_dual[name] = tname == name
                break
    return lib


_BUILDERS = {
    "PSL3_2": _build_psl3_2,
    "PSL2_7": _build_psl2_7,
    "PSL2_9": _build_psl2_9,
    "PSL3_3": _build_psl3_3,
    "PSU3_3": _build_psu3_3,
    "G2_2prime": _build_g2_2prime,
    "2G2_3prime": _build_2g2_3prime,
    "G2_3": _build_g2_3,
}

GROUP_IDS = tuple(_BUILDERS)


@lru_cache(maxsize=None)
def build_group(group_id: str) -> GroupLibrary:
    if group_id not in _BUILDERS:
        raise ModuleError(f"unknown group {group_id!r}")
    return _BUILDERS[group_id]()


@lru_cache(maxsize=None)
def certify_group_order(group_id: str) -> bool:
    """Coset-enumeration certificate that the bundled presentation presents
    a group of exactly the declared order (the relator check on a faithful
    module already gives a surjection onto the concrete group)."""
    lib = build_group(group_id)
    if lib.presentation is None:
        return True
    return certify_order(lib.presentation, lib.order)
