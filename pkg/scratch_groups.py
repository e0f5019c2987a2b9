"""Scratch: find generator pairs and presentations for the corpus groups."""
import itertools
import numpy as np
import sys
sys.setrecursionlimit(100000)

from exdesk.ff import field_make, FqMatrix
from exdesk.cohom import GroupPresentation, coset_enumerate


# ---- permutation helpers (right action composition: w = g1 then g2) ----

def pmul(p, q):
    return tuple(q[i] for i in p)

def pinv(p):
    out = [0]*len(p)
    for i, j in enumerate(p):
        out[j] = i
    return tuple(out)

def porder(p):
    ident = tuple(range(len(p)))
    o, cur = 1, p
    while cur != ident:
        cur = pmul(cur, p); o += 1
    return o

def enumerate_group(gens):
    ident = tuple(range(len(gens[0])))
    seen = {ident: ()}
    frontier = [ident]
    while frontier:
        new = []
        for x in frontier:
            for i, g in enumerate(gens):
                y = pmul(x, g)
                if y not in seen:
                    seen[y] = seen[x] + (i+1,)
                    new.append(y)
        frontier = new
    return seen

def find_relators(gens, order, max_extra=14):
    """BFS spanning tree; non-tree edges give relators; return short ones."""
    letters = []
    for i, g in enumerate(gens):
        letters.append((i+1, g))
        gi = pinv(g)
        if gi != g:
            letters.append((-(i+1), gi))
    ident = tuple(range(len(gens[0])))
    word = {ident: ()}
    frontier = [ident]
    rels = set()
    while frontier:
        new = []
        for x in frontier:
            for li, g in letters:
                y = pmul(x, g)
                w = word[x] + (li,)
                if y not in word:
                    word[y] = w
                    new.append(y)
                else:
                    # relator w * word[y]^-1
                    r = w + tuple(-t for t in reversed(word[y]))
                    r = cyclic_reduce(r)
                    if r:
                        rels.add(normal_rel(r))
        frontier = new
    return sorted(rels, key=lambda r: (len(r), r))

def cyclic_reduce(w):
    w = list(w)
    # free reduction
    out = []
    for t in w:
        if out and out[-1] == -t:
            out.pop()
        else:
            out.append(t)
    while len(out) >= 2 and out[0] == -out[-1]:
        out = out[1:-1]
    return tuple(out)

def normal_rel(r):
    # canonical among rotations and inversion
    cands = []
    rr = tuple(-t for t in reversed(r))
    for w in (r, rr):
        for i in range(len(w)):
            cands.append(w[i:] + w[:i])
    return min(cands)

def try_presentation(gens, order, rel_pool, base, max_rels=8, cap=120000):
    rels = list(base)
    for r in rel_pool:
        if r in rels:
            continue
        rels.append(r)
        pres = GroupPresentation(len(gens), tuple(rels), 'test')
        try:
            n = coset_enumerate(pres, [], cap)
            if n == order:
                # greedy minimize
                keep = list(rels)
                for cand in list(keep):
                    if cand in base:
                        continue
                    test = [x for x in keep if x != cand]
                    try:
                        if coset_enumerate(GroupPresentation(len(gens), tuple(test), 't'), [], cap) == order:
                            keep = test
                    except Exception:
                        pass
                return keep
        except Exception:
            pass
        if len(rels) > max_rels + len(base):
            rels.pop(0)
    return None


def report(name, gens, expected):
    elems = enumerate_group(gens)
    print(f'{name}: |G| = {len(elems)} (expected {expected})')
    assert len(elems) == expected, name
    base = []
    for i, g in enumerate(gens):
        base.append(normal_rel(tuple([i+1]*porder(g))))
    pool = find_relators(gens, expected)
    pool = [r for r in pool if len(r) <= 30][:250]
    pres = try_presentation(gens, expected, pool, base)
    print(f'  orders: {[porder(g) for g in gens]}')
    print(f'  presentation ({len(pres)} relators):')
    for r in pres:
        print('   ', r)
    return pres


F2 = field_make(2, 1)
F3 = field_make(3, 1)
F7 = field_make(7, 1)
F8 = field_make(2, 3)
F9 = field_make(3, 2)

def perm_from_matrix(M, points, norm):
    idx = {p: i for i, p in enumerate(points)}
    out = []
    F = M.field
    for pt in points:
        v = np.array(pt, dtype=np.int64)
        img = np.zeros(M.cols, dtype=np.int64)
        # row vector times matrix over F
        from exdesk.ff import fq_matmul
        img = fq_matmul(F, v[None, :], M.a)[0]
        out.append(idx[norm(tuple(int(x) for x in img), F)])
    return tuple(out)

def proj_norm(v, F):
    # scale so first nonzero coordinate is 1
    for x in v:
        if x:
            inv = int(F.inv(x))
            return tuple(int(F.mul(y, inv)) for y in v)
    raise ValueError

def proj_points(F, n):
    pts = []
    seen = set()
    for tup in itertools.product(range(F.q), repeat=n):
        if not any(tup):
            continue
        nm = proj_norm(tup, F)
        if nm not in seen:
            seen.add(nm)
            pts.append(nm)
    return pts


# PSL3(2): transvection + companion(x^3+x+1)
a32 = FqMatrix(F2, [[1,1,0],[0,1,0],[0,0,1]])
b32 = FqMatrix(F2, [[0,1,0],[0,0,1],[1,1,0]])
pts7 = proj_points(F2, 3)
g32 = [perm_from_matrix(a32, pts7, proj_norm), perm_from_matrix(b32, pts7, proj_norm)]
p32 = report('PSL3_2', g32, 168)

# PSL2_7 (already known presentation; verify via perms)
A27 = FqMatrix(F7, [[0,6],[1,0]])
B27 = FqMatrix(F7, [[0,6],[1,6]])
pts8 = proj_points(F7, 2)
g27 = [perm_from_matrix(A27, pts8, proj_norm), perm_from_matrix(B27, pts8, proj_norm)]
p27 = report('PSL2_7', g27, 168)

# PSL3(3): transvection + 2*companion(x^3+2x+1)
a33 = FqMatrix(F3, [[1,1,0],[0,1,0],[0,0,1]])
comp = FqMatrix(F3, [[0,1,0],[0,0,1],[2,1,0]])
b33 = comp.scale(2)
print('det check b33 order:', b33.order(30))
pts13 = proj_points(F3, 3)
g33 = [perm_from_matrix(a33, pts13, proj_norm), perm_from_matrix(b33, pts13, proj_norm)]
p33 = report('PSL3_3', g33, 5616)
