"""Root data of the exceptional types and semisimple/unipotent services.

Torus elements of order n are coordinate vectors in (Z/n)^r in
simple-coroot coordinates.  A weight mu is stored in fundamental-weight
coordinates c (c_i = <mu, alpha_i^vee>), so the pairing against a torus
element t is just the dot product t . c mod n, and the simple reflection
s_i acts on torus coordinates through the transposed Cartan matrix.

Weyl-orbit classification is an exhaustive BFS over (Z/n)^r with a flat
visited bitmap indexed by mixed-radix encoding.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd

import numpy as np

from .ff import EigProfile

TYPES = ("G2", "F4", "E6", "E7", "E8")

# Cartan matrices, convention A[i][j] = <alpha_j, alpha_i^vee>; Bourbaki numbering.
_CARTAN = {
    "G2": [[2, -3],
           [-1, 2]],
    "F4": [[2, -1, 0, 0],
           [-1, 2, -1, 0],
           [0, -2, 2, -1],
           [0, 0, -1, 2]],
}


def _simply_laced(nodes, edges):
    n = len(nodes)
    A = [[2 if i == j else 0 for j in range(n)] for i in range(n)]
    for a, b in edges:
        A[a - 1][b - 1] = A[b - 1][a - 1] = -1
    return A

_CARTAN["E8"] = _simply_laced(range(1, 9),
                              [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (7, 8), (2, 4)])
_CARTAN["E7"] = [row[:7] for row in _simply_laced(range(1, 8),
                 [(1, 3), (3, 4), (4, 5), (5, 6), (6, 7), (2, 4)])]
_CARTAN["E6"] = [row[:6] for row in _simply_laced(range(1, 7),
                 [(1, 3), (3, 4), (4, 5), (5, 6), (2, 4)])]

# squared root lengths / 2 per simple root (for long/short bookkeeping)
_DSYM = {"G2": [1, 3], "F4": [2, 2, 1, 1], "E6": [1] * 6, "E7": [1] * 7, "E8": [1] * 8}

_POS_COUNT = {"G2": 6, "F4": 24, "E6": 36, "E7": 63, "E8": 120}
_HIGHEST_ROOT = {
    "G2": (3, 2), "F4": (2, 3, 4, 2), "E6": (1, 2, 2, 3, 2, 1),
    "E7": (2, 2, 3, 4, 3, 2, 1), "E8": (2, 3, 4, 6, 5, 4, 3, 2),
}
_CENTER_ORDER = {"G2": 1, "F4": 1, "E6": 3, "E7": 2, "E8": 1}

# Definition of the T(G) blueprint-threshold sets.
_T_ODD_RANGE = {"G2": 9, "F4": 57, "E6": 105, "E7": 317, "E8": 1093}
_T_ODD_EXTRA = {
    "G2": (), "F4": (), "E6": (), "E7": (),
    "E8": (1097, 1099, 1103, 1105, 1113, 1115, 1117,
           1121, 1123, 1127, 1129, 1147, 1153, 1165, 1189),
}
_T_EVEN_RANGE = {"G2": 12, "F4": 68, "E6": 120, "E7": 364, "E8": 1262}
_T_EVEN_EXTRA = {
    "G2": (), "F4": (), "E6": (124,), "E7": (370, 372, 388),
    "E8": (1268, 1270, 1284, 1298, 1312),
}


class LieError(ValueError):
    pass


@dataclass(frozen=True)
class RootDatum:
    type: str
    rank: int
    cartan: np.ndarray          # A[i][j] = <alpha_j, alpha_i^vee>
    pos_roots: np.ndarray       # simple-root coordinates, one row per positive root
    root_norms: np.ndarray      # (alpha, alpha)/2, normalized so short = 1
    center: int = 1

    def roots_weight_coords(self) -> np.ndarray:
        """All roots (positive then negative) in fundamental-weight coordinates."""
        pos = self.pos_roots @ self.cartan.T
        return np.concatenate([pos, -pos])

    def short_roots_weight_coords(self) -> np.ndarray:
        short = self.root_norms == self.root_norms.min()
        pos = self.pos_roots[short] @ self.cartan.T
        return np.concatenate([pos, -pos])


@lru_cache(maxsize=None)
def root_datum(type_label: str) -> RootDatum:
    """Root datum with positive roots computed by closure from the Cartan matrix."""
    if type_label not in TYPES:
        raise LieError(f"unknown type {type_label!r}")
    A = np.array(_CARTAN[type_label], dtype=np.int64)
    r = A.shape[0]
    d = np.array(_DSYM[type_label], dtype=np.int64)
    # symmetrized bilinear form B[i][j] = (alpha_i, alpha_j) with short roots norm 2
    B = d[:, None] * A
    assert np.array_equal(B, B.T), "Cartan symmetrization failed"

    roots = {tuple(row) for row in np.eye(r, dtype=np.int64)}
    frontier = list(roots)
    while frontier:
        new = []
        for c in frontier:
            cv = np.array(c, dtype=np.int64)
            pair = A @ cv  # <c, alpha_i^vee> per i
            for i in range(r):
                # p = max k with c - k alpha_i a root
                p = 0
                probe = cv.copy()
                while True:
                    probe = probe - np.eye(r, dtype=np.int64)[i]
                    t = tuple(probe)
                    if t in roots or (np.all(probe >= 0) and t in roots):
                        if t in roots:
                            p += 1
                            continue
                    break
                if p - pair[i] > 0:
                    cand = cv.copy()
                    cand[i] += 1
                    t = tuple(cand)
                    if t not in roots:
                        roots.add(t)
                        new.append(t)
        frontier = new
    pos = np.array(sorted(roots, key=lambda t: (sum(t), t)), dtype=np.int64)
    if pos.shape[0] != _POS_COUNT[type_label]:
        raise LieError(f"positive-root closure for {type_label} gave {pos.shape[0]} roots")
    if tuple(pos[-1]) != _HIGHEST_ROOT[type_label]:
        raise LieError(f"highest root of {type_label} came out as {tuple(pos[-1])}")
    norms = np.array([c @ B @ c // 2 for c in pos], dtype=np.int64)
    return RootDatum(type_label, r, A, pos, norms, _CENTER_ORDER[type_label])


# ---------------------------------------------------------------------------
# module weights
# ---------------------------------------------------------------------------

def _weyl_orbit(datum: RootDatum, weight) -> np.ndarray:
    """Orbit of a weight (fundamental-weight coordinates) under W."""
    A = datum.cartan
    r = datum.rank
    seen = {tuple(weight)}
    frontier = [np.array(weight, dtype=np.int64)]
    while frontier:
        new = []
        for w in frontier:
            for i in range(r):
                # s_i(mu) = mu - <mu, alpha_i^vee> alpha_i
                img = w - w[i] * A[:, i]
                t = tuple(img)
                if t not in seen:
                    seen.add(t)
                    new.append(img)
        frontier = new
    return np.array(sorted(seen), dtype=np.int64)


@lru_cache(maxsize=None)
def module_weights(type_label: str, module: str, p: int | None = None):
    """(weights, zero_mult) for the adjoint or minimal module.

    `weights` enumerates the nonzero weights in fundamental-weight
    coordinates, `zero_mult` the multiplicity of the zero weight after the
    characteristic-dependent adjustments.
    """
    datum = root_datum(type_label)
    r = datum.rank
    if module == "adjoint":
        weights = datum.roots_weight_coords()
        zero = r
        if type_label == "E6" and p == 3:
            zero -= 1
        if type_label == "E7" and p == 2:
            zero -= 1
        return weights, zero
    if module == "minimal":
        if type_label == "E8":
            raise LieError("E8 has no minimal module")
        if type_label == "G2":
            weights = datum.short_roots_weight_coords()
            zero = 0 if p == 2 else 1
            return weights, zero
        if type_label == "F4":
            weights = datum.short_roots_weight_coords()
            zero = 1 if p == 3 else 2
            return weights, zero
        if type_label == "E6":
            w = np.zeros(r, dtype=np.int64)
            w[0] = 1
            return _weyl_orbit(datum, w), 0
        if type_label == "E7":
            w = np.zeros(r, dtype=np.int64)
            w[6] = 1
            return _weyl_orbit(datum, w), 0
    raise LieError(f"unknown module {module!r} for {type_label}")


def module_dim(type_label: str, module: str, p: int | None = None) -> int:
    w, z = module_weights(type_label, module, p)
    return len(w) + z


# ---------------------------------------------------------------------------
# torus elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TorusElement:
    type: str
    order: int              # modulus n of the coordinate vector
    coords: tuple           # length-r tuple in Z/n

    def exact_order(self) -> int:
        n = self.order
        g = n
        for c in self.coords:
            g = gcd(g, c)
        return n // g

    def order_mod_center(self) -> int:
        """Order of the image in the adjoint form (reported, not resolved)."""
        z = _CENTER_ORDER[self.type]
        if z == 1:
            return self.exact_order()
        o = self.exact_order()
        # image order divides o; it is o or o/z' for z' | gcd(o, z)
        for div in sorted({d for d in (z,) if o % d == 0}, reverse=True):
            t = power_torus(self, o // div)
            if _is_central(t):
                return o // div
        return o

    def power(self, j: int) -> "TorusElement":
        return power_torus(self, j)


def power_torus(t: TorusElement, j: int) -> TorusElement:
    n = t.order
    return TorusElement(t.type, n, tuple((c * j) % n for c in t.coords))


def _is_central(t: TorusElement) -> bool:
    """Pairs to 0 against every root."""
    datum = root_datum(t.type)
    W = datum.roots_weight_coords()
    v = np.array(t.coords, dtype=np.int64)
    return bool(np.all((W @ v) % t.order == 0))


def eig_of_torus(t: TorusElement, module: str, p: int | None = None) -> EigProfile:
    """Eigenvalue profile of t on the named module: multiplicity of
    zeta_n^j is the number of weights pairing to j mod n."""
    weights, zero_mult = module_weights(t.type, module, p)
    n = t.order
    v = np.array(t.coords, dtype=np.int64)
    vals = (weights @ v) % n
    counts = np.bincount(vals, minlength=n)
    counts[0] += zero_mult
    return EigProfile(int(c) for c in counts)


# ---------------------------------------------------------------------------
# Weyl orbits on (Z/n)^r
# ---------------------------------------------------------------------------

EXHAUSTIVE_CAP = 10**8


def _reflection_mats(datum: RootDatum):
    """Simple reflections acting on simple-coroot coordinates (t -> M t)."""
    r = datum.rank
    mats = []
    for i in range(r):
        M = np.eye(r, dtype=np.int64)
        M[i] -= datum.cartan.T[i]
        mats.append(M)
    return mats


def _all_vectors(n: int, r: int, chunk: int | None = None):
    """Iterate numpy blocks enumerating (Z/n)^r in mixed-radix order."""
    total = n**r
    chunk = chunk or min(total, 1 << 19)
    radix = n ** np.arange(r - 1, -1, -1, dtype=np.int64)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        yield (idx[:, None] // radix[None, :]) % n


def _encode(vecs: np.ndarray, n: int) -> np.ndarray:
    r = vecs.shape[1]
    radix = n ** np.arange(r - 1, -1, -1, dtype=np.int64)
    return vecs @ radix


@dataclass
class TorusClass:
    rep: TorusElement
    orbit_size: int
    profile: EigProfile


def torus_classes(n: int, type_label: str, module: str = "adjoint",
                  p: int | None = None) -> list[TorusClass]:
    """Partition of (Z/n)^r into Weyl orbits: one representative each with
    its eigenvalue tuple on the named module and the orbit size."""
    datum = root_datum(type_label)
    r = datum.rank
    if n**r > EXHAUSTIVE_CAP:
        raise LieError(f"{n}^{r} exceeds the exhaustive cap")
    mats = [M.T % n for M in _reflection_mats(datum)]  # act on row vectors
    total = n**r
    visited = np.zeros(total, dtype=bool)
    out = []
    for block in _all_vectors(n, r):
        codes = _encode(block, n)
        for v0, c0 in zip(block, codes):
            if visited[c0]:
                continue
            # BFS this orbit
            frontier = v0[None, :]
            visited[c0] = True
            size = 1
            while frontier.shape[0]:
                images = np.concatenate([(frontier @ M) % n for M in mats])
                codes_i = _encode(images, n)
                codes_i, first = np.unique(codes_i, return_index=True)
                fresh = ~visited[codes_i]
                visited[codes_i[fresh]] = True
                size += int(fresh.sum())
                frontier = images[first[fresh]]
            t = TorusElement(type_label, n, tuple(int(x) for x in v0))
            out.append(TorusClass(t, size, eig_of_torus(t, module, p)))
    assert sum(c.orbit_size for c in out) == total
    return out


def profile_reindex_canonical(profile) -> tuple:
    """Canonical form of an eigenvalue tuple under reindexing of nontrivial
    eigenvalues (exponent scaling by units mod n)."""
    n = len(profile)
    forms = []
    for u in range(1, n):
        if gcd(u, n) != 1:
            continue
        forms.append(tuple(profile[(u * j) % n] for j in range(n)))
    return min(forms) if forms else tuple(profile)


# ---------------------------------------------------------------------------
# profile feasibility (conspicuousness backend)
# ---------------------------------------------------------------------------

def achievable_profiles(n: int, type_label: str, module: str = "adjoint",
                        p: int | None = None, targets=None, jobs: int = 1):
    """Profiles of all n^r torus vectors on the module.

    With `targets` (an iterable of profiles), returns {profile: witness
    coordinate tuple} for the targets that occur; otherwise returns the
    full set of achievable profiles.
    """
    datum = root_datum(type_label)
    r = datum.rank
    if n**r > EXHAUSTIVE_CAP:
        raise LieError(f"{n}^{r} exceeds the exhaustive cap")
    weights, zero_mult = module_weights(type_label, module, p)
    WT = weights.T % n

    target_set = None
    if targets is not None:
        target_set = {tuple(t) for t in targets}
        found: dict[tuple, tuple] = {}
    else:
        all_profiles = set()

    for block in _all_vectors(n, r):
        vals = (block @ WT) % n
        counts = np.zeros((block.shape[0], n), dtype=np.int64)
        for j in range(n):
            counts[:, j] = (vals == j).sum(axis=1)
        counts[:, 0] += zero_mult
        if target_set is not None:
            for i, row in enumerate(map(tuple, counts)):
                if row in target_set and row not in found:
                    found[row] = tuple(int(x) for x in block[i])
                    if len(found) == len(target_set):
                        return found
        else:
            all_profiles.update(map(tuple, counts))
    return found if target_set is not None else all_profiles


def find_torus_vector(profile, n: int, type_label: str, module: str = "adjoint",
                      p: int | None = None, max_solutions: int | None = None):
    """All torus vectors with the given profile (exhaustive mode), or a
    best-effort backtracking search above the cap.

    Returns (solutions, flag) with flag "EXHAUSTIVE" or "BEST_EFFORT".
    """
    datum = root_datum(type_label)
    r = datum.rank
    dim = module_dim(type_label, module, p)
    if sum(profile) != dim:
        raise LieError(f"profile sums to {sum(profile)}, module dimension is {dim}")
    if len(profile) != n:
        raise LieError("profile length must equal n")

    if n**r <= EXHAUSTIVE_CAP:
        weights, zero_mult = module_weights(type_label, module, p)
        WT = weights.T % n
        target = np.array(profile, dtype=np.int64)
        target = target.copy()
        sols = []
        for block in _all_vectors(n, r):
            vals = (block @ WT) % n
            counts = np.zeros((block.shape[0], n), dtype=np.int64)
            for j in range(n):
                counts[:, j] = (vals == j).sum(axis=1)
            counts[:, 0] += zero_mult
            hit = np.all(counts == target[None, :], axis=1)
            for v in block[hit]:
                sols.append(TorusElement(type_label, n, tuple(int(x) for x in v)))
                if max_solutions is not None and len(sols) >= max_solutions:
                    return sols, "EXHAUSTIVE"
        return sols, "EXHAUSTIVE"

    return _backtrack_torus(profile, n, datum, module, p, max_solutions), "BEST_EFFORT"


def _backtrack_torus(profile, n, datum, module, p, max_solutions, node_budget=2_000_000):
    """Coordinate backtracking with partial-count pruning; absence of
    solutions is inconclusive."""
    r = datum.rank
    weights, zero_mult = module_weights(datum.type, module, p)
    target = list(profile)
    target[0] -= zero_mult
    # weights whose support lies in the first k coordinates, per k
    support = [np.nonzero(w)[0] for w in weights]
    by_depth = [[] for _ in range(r + 1)]
    for wi, sup in enumerate(support):
        k = (max(sup) + 1) if len(sup) else 0
        by_depth[k].append(wi)
    sols = []
    counts = [0] * n
    coords = [0] * r
    budget = [node_budget]

    def rec(depth):
        if budget[0] <= 0 or (max_solutions is not None and len(sols) >= max_solutions):
            return
        budget[0] -= 1
        if depth == r:
            sols.append(TorusElement(datum.type, n, tuple(coords)))
            return
        for val in range(n):
            coords[depth] = val
            newly = []
            ok = True
            for wi in by_depth[depth + 1]:
                j = int(weights[wi][:depth + 1] @ np.array(coords[:depth + 1])) % n
                counts[j] += 1
                newly.append(j)
                if counts[j] > target[j]:
                    ok = False
                    break
            if ok:
                rec(depth + 1)
            for j in newly:
                counts[j] -= 1
        coords[depth] = 0

    for wi in by_depth[0]:
        counts[0] += 1
    rec(0)
    return sols


# ---------------------------------------------------------------------------
# the roots trick
# ---------------------------------------------------------------------------

@dataclass
class RootsTrickEntry:
    element: TorusElement       # coordinates mod m*n
    order: int
    eigenvalue_count: int
    protected_ok: list[bool]    # per protected subset: s is scalar on each
                                # protected t-eigenspace (no refinement)


def roots_trick(t: TorusElement, m: int, protected: list[set] | None = None,
                module: str = "adjoint", p: int | None = None) -> list[RootsTrickEntry]:
    """Enumerate the m^r torus elements s with s^m = t and report, for each,
    its order, the number of distinct eigenvalues on the module, and whether
    it refines t's eigenspaces inside each protected exponent subset."""
    protected = protected or []
    datum = root_datum(t.type)
    r = datum.rank
    n = t.order
    N = m * n
    weights, zero_mult = module_weights(t.type, module, p)
    v_t = np.array(t.coords, dtype=np.int64)
    t_vals = (weights @ v_t) % n

    entries = []
    for ks in itertools.product(range(m), repeat=r):
        coords = tuple((c + n * k) % N for c, k in zip(t.coords, ks))
        s = TorusElement(t.type, N, coords)
        v_s = np.array(coords, dtype=np.int64)
        s_vals = (weights @ v_s) % N
        distinct = set(s_vals.tolist())
        if zero_mult:
            distinct.add(0)
        oks = []
        for subset in protected:
            ok = True
            for j in subset:
                mask = t_vals == (j % n)
                if mask.any() and len(set(s_vals[mask].tolist())) > 1:
                    ok = False
                    break
                if (j % n) == 0 and zero_mult and mask.any():
                    if set(s_vals[mask].tolist()) != {0}:
                        ok = False
                        break
            oks.append(ok)
        entries.append(RootsTrickEntry(s, s.exact_order(), len(distinct), oks))
    return entries


# ---------------------------------------------------------------------------
# blueprint thresholds
# ---------------------------------------------------------------------------

def blueprint_threshold(type_label: str, order: int) -> dict:
    """Whether the order lies outside the tabulated T(G) set for its parity,
    i.e. elements of that order are forced blueprints for the adjoint module.
    The adjoint-image caveat for types with center is surfaced as a note."""
    if type_label not in TYPES:
        raise LieError(f"unknown type {type_label!r}")
    if order % 2:
        inside = order <= _T_ODD_RANGE[type_label] or order in _T_ODD_EXTRA[type_label]
    else:
        inside = order <= _T_EVEN_RANGE[type_label] or order in _T_EVEN_EXTRA[type_label]
    note = None
    if _CENTER_ORDER[type_label] > 1:
        note = (f"threshold applies to the order of the image in the adjoint form; "
                f"{type_label} has center of order {_CENTER_ORDER[type_label]}")
    return {"type": type_label, "order": order, "forced_blueprint": not inside,
            "in_T": inside, "note": note}


# ---------------------------------------------------------------------------
# partitions and unipotent tables
# ---------------------------------------------------------------------------

def partition_ok(part) -> bool:
    part = list(part)
    return all(a > 0 for a in part) and all(a >= b for a, b in zip(part, part[1:]))


def encapsulates(a, b) -> bool:
    """Componentwise domination of non-increasing positive sequences."""
    a, b = list(a), list(b)
    if not (partition_ok(a) and partition_ok(b)):
        raise LieError("inputs must be non-increasing positive sequences")
    return len(a) >= len(b) and all(x >= y for x, y in zip(a, b))


@dataclass(frozen=True)
class UnipotentRow:
    type: str
    p: int
    class_label: str
    module: str
    partition: tuple
    generic: bool
    source: str


class UnipotentTable:
    """Rows of (class, module, partition, generic flag) for one (type, p)."""

    def __init__(self, rows: list[UnipotentRow], dims: dict | None = None):
        self.rows = rows
        for row in rows:
            if not partition_ok(row.partition):
                raise LieError(f"bad partition in row {row}")
        keys = [(r.type, r.p, r.class_label, r.module) for r in rows]
        if len(set(keys)) != len(keys):
            raise LieError("duplicate unipotent table keys")

    def lookup(self, type_label: str, p: int, observed, module: str,
               mode: str = "equals") -> list[UnipotentRow]:
        out = []
        for row in self.rows:
            if (row.type, row.p, row.module) != (type_label, p, module):
                continue
            if mode == "equals" and tuple(observed) == row.partition:
                out.append(row)
            elif mode == "encapsulated_by" and encapsulates(row.partition, observed):
                out.append(row)
        return out


def parse_unipotent_tsv(text: str) -> UnipotentTable:
    """Columns: type, p, class, module, partition (comma list), generic, source."""
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 7:
            raise LieError(f"bad unipotent TSV line: {line!r}")
        t, p, cls, module, part, generic, source = parts
        partition = tuple(int(x) for x in part.split(","))
        rows.append(UnipotentRow(t, int(p), cls, module, partition,
                                 generic == "1", source))
    return UnipotentTable(rows)
