"""Socle/radical machinery, I-radical/I-residual/I-heart operators, pyx
construction by socle-preserving universal extensions, and the self-duality
tests (odd multiplicity, bottom half, S^2 fixed points).

Submodules are row spaces in the coordinates of the ambient module.  All
operations take the list of pairwise non-isomorphic simple modules (over
the same splitting field as the ambient module) they should recognize.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ff import FqMatrix, fq_matmul, row_space_basis, nullspace, _rref_array
from .modrep import (GModule, ModuleError, chop, hom_space, hom_dim,
                     is_isomorphic, build_dual, build_sym2, fixed_points,
                     sub_quotient, spin)
from .cohom import GroupPresentation, ext1, universal_extension


class StructureError(ValueError):
    pass


# ---------------------------------------------------------------------------
# identifying factors against a simple list
# ---------------------------------------------------------------------------

def identify_factor(S: GModule, simples: list[GModule], names: list[str]) -> str:
    for T, name in zip(simples, names):
        if T.dim == S.dim and T.field == S.field and is_isomorphic(T, S) is not None:
            return name
    raise StructureError(f"factor of dim {S.dim} not in the simple library")


def factor_names(V: GModule, simples, names, seed: int = 0) -> dict[str, int]:
    """Multiset {simple name: multiplicity} of the composition factors."""
    out: dict[str, int] = {}
    for S, m in chop(V, seed):
        key = identify_factor(S, simples, names)
        out[key] = out.get(key, 0) + m
    return out


# ---------------------------------------------------------------------------
# socle and series
# ---------------------------------------------------------------------------

def socle(V: GModule, simples: list[GModule]) -> FqMatrix:
    """Basis of the maximal semisimple submodule: the sum over simples S of
    the images of Hom(S, V)."""
    F = V.field
    rows = []
    for S in simples:
        H = hom_space(S, V)
        for vec in H.a:
            X = vec.reshape(S.dim, V.dim)
            rows.append(X)
    if not rows:
        return FqMatrix(F, np.zeros((0, V.dim), dtype=np.int64))
    return row_space_basis(FqMatrix(F, np.concatenate(rows, axis=0)))


def _lift_rows(rows_in_quotient: np.ndarray, data) -> np.ndarray:
    """Lift quotient-coordinate rows back to ambient coordinates."""
    nonpiv = data["nonpiv"]
    out = np.zeros((rows_in_quotient.shape[0], len(data["piv"]) + len(nonpiv)),
                   dtype=np.int64)
    out[:, nonpiv] = rows_in_quotient
    return out


@dataclass
class SocleSeries:
    """Ascending chain of submodule bases with per-layer factor multisets."""
    chain: list[FqMatrix]          # bases of soc^1 <= soc^2 <= ... = V
    layers: list[dict[str, int]]   # factor multiset per layer, bottom-up

    def layer_dims(self):
        dims = [self.chain[0].rows]
        for a, b in zip(self.chain, self.chain[1:]):
            dims.append(b.rows - a.rows)
        return dims

    def slash_notation(self) -> str:
        """Paper-style slash string, top layer first."""
        parts = []
        for layer in reversed(self.layers):
            terms = []
            for name in sorted(layer):
                terms.extend([name] * layer[name])
            parts.append(",".join(terms))
        return "/".join(parts)

    def layers_bottom_up(self) -> list[list[str]]:
        out = []
        for layer in self.layers:
            terms = []
            for name in sorted(layer):
                terms.extend([name] * layer[name])
            out.append(terms)
        return out


def series(V: GModule, simples, names, seed: int = 0) -> SocleSeries:
    """Socle series, layers reported bottom-up; each layer is semisimple."""
    F = V.field
    chain = []
    layers = []
    current = FqMatrix(F, np.zeros((0, V.dim), dtype=np.int64))
    while current.rows < V.dim:
        if current.rows == 0:
            soc_basis = socle(V, simples)
            layer_mod_basis = soc_basis
        else:
            _, quo, data = sub_quotient(V, current)
            soc_q = socle(quo, simples)
            lifted = _lift_rows(soc_q.a, data)
            layer_mod_basis = FqMatrix(F, np.concatenate([current.a, lifted], axis=0))
            layer_mod_basis = row_space_basis(layer_mod_basis)
        if layer_mod_basis.rows == current.rows:
            raise StructureError("socle series stalled (incomplete simple list?)")
        # factors of the new layer
        subV, _, _ = sub_quotient(V, layer_mod_basis)
        if current.rows:
            _, layer_q, _ = sub_quotient(subV, _express_in(layer_mod_basis, current))
            layer_mod = layer_q
        else:
            layer_mod = subV
        layers.append(factor_names(layer_mod, simples, names, seed))
        chain.append(layer_mod_basis)
        current = layer_mod_basis
    return SocleSeries(chain, layers)


def _express_in(big: FqMatrix, small: FqMatrix) -> FqMatrix:
    """Coordinates of the rows of `small` relative to the rref rows of `big`."""
    F = big.field
    rank, R, piv = _rref_array(F, big.a)
    coords = small.a[:, piv]
    return FqMatrix(F, coords)


def radical_series(V: GModule, simples, names, seed: int = 0) -> SocleSeries:
    """Radical series computed through the dual socle series (reported as
    descending layer multisets, top-down order reversed to match)."""
    dualV = build_dual(V)
    dual_simples = [build_dual(S) for S in simples]
    ss = series(dualV, dual_simples, names, seed)
    return ss


# ---------------------------------------------------------------------------
# I-radical / I-residual / I-heart
# ---------------------------------------------------------------------------

def i_radical(V: GModule, simples, names, I: set) -> FqMatrix:
    """Basis of the largest submodule with all composition factors in I."""
    F = V.field
    sel = [S for S, n in zip(simples, names) if n in I]
    current = FqMatrix(F, np.zeros((0, V.dim), dtype=np.int64))
    while True:
        if current.rows == 0:
            grow = socle(V, sel)
            new = grow
        else:
            _, quo, data = sub_quotient(V, current)
            if quo is None:
                return current
            grow = socle(quo, sel)
            lifted = _lift_rows(grow.a, data)
            new = row_space_basis(FqMatrix(F, np.concatenate([current.a, lifted], axis=0)))
        if new.rows == current.rows:
            return current
        current = new


def i_residual(V: GModule, simples, names, I: set) -> FqMatrix:
    """Basis of the smallest submodule whose quotient has factors only in I."""
    F = V.field
    sel = [S for S, n in zip(simples, names) if n in I]
    basis = FqMatrix.identity(F, V.dim)
    W = V
    while True:
        cols = []
        for S in sel:
            H = hom_space(W, S)
            for vec in H.a:
                cols.append(vec.reshape(W.dim, S.dim))
        if not cols:
            return row_space_basis(basis)
        stack = np.concatenate(cols, axis=1)
        ker = nullspace(FqMatrix(F, stack.T))  # rows w with w stack = 0
        if ker.rows == W.dim:
            return row_space_basis(basis)
        if ker.rows == 0:
            return FqMatrix(F, np.zeros((0, V.dim), dtype=np.int64))
        # rows of ker are in W-coordinates; push to ambient
        new_basis = FqMatrix(F, fq_matmul(F, ker.a, basis.a))
        basis = row_space_basis(new_basis)
        W, _, _ = sub_quotient(V, basis)


def i_heart(V: GModule, simples, names, I: set):
    """The I'-residual of V / (I'-radical of V): returns (module, info)."""
    all_names = set(names)
    Iprime = all_names - set(I)
    rad = i_radical(V, simples, names, Iprime)
    if rad.rows == V.dim:
        return None, {"radical_dim": rad.rows, "heart_dim": 0}
    _, Q, _ = sub_quotient(V, rad)
    res = i_residual(Q, simples, names, Iprime)
    if res.rows == 0:
        return None, {"radical_dim": rad.rows, "heart_dim": 0}
    heart, _, _ = sub_quotient(Q, res)
    return heart, {"radical_dim": rad.rows, "heart_dim": heart.dim}


# ---------------------------------------------------------------------------
# pyx construction
# ---------------------------------------------------------------------------

@dataclass
class LayeredModule:
    module: GModule
    series: SocleSeries

    def layers(self):
        return self.series.layers_bottom_up()

    def slash(self):
        return self.series.slash_notation()


def direct_sum(mods: list[GModule]) -> GModule:
    F = mods[0].field
    n = sum(m.dim for m in mods)
    gens = []
    for gi in range(len(mods[0].gens)):
        M = np.zeros((n, n), dtype=np.int64)
        off = 0
        for m in mods:
            M[off:off + m.dim, off:off + m.dim] = m.gens[gi].a
            off += m.dim
        gens.append(FqMatrix(F, M))
    return GModule(F, gens, mods[0].group_id)


def _prune_split_directions(E: GModule, V: GModule, T: GModule, d: int):
    """Directions in k^d along which a copy of T splits off the extension
    (these enlarge the socle and are discarded)."""
    F = E.field
    H = hom_space(T, E)
    bad = []
    for vec in H.a:
        X = vec.reshape(T.dim, E.dim)
        tail = X[:, V.dim:]
        coeffs = []
        ok = False
        for j in range(d):
            blk = tail[:, j * T.dim:(j + 1) * T.dim]
            diag = blk[0, 0]
            coeffs.append(diag)
            if np.any(blk):
                ok = True
        if ok:
            bad.append(coeffs)
    if not bad:
        return None
    return row_space_basis(FqMatrix(F, np.array(bad, dtype=np.int64)))


def pyx(socle_names: list[str], I: set, simples, names,
        pres: GroupPresentation, schedule=None, max_rounds: int = 40) -> LayeredModule:
    """Largest module with the given socle whose factors lie in I, built by
    iterated socle-preserving universal extensions.

    `schedule` optionally restricts which simples are added per round; the
    last entry repeats until nothing grows.
    """
    by_name = dict(zip(names, simples))
    for nm in socle_names:
        if nm not in by_name:
            raise StructureError(f"socle entry {nm} not in library")
    V = direct_sum([by_name[nm] for nm in socle_names])
    soc_dim0 = sum(by_name[nm].dim for nm in socle_names)
    entries = schedule or [sorted(I)]
    round_no = 0
    while round_no < max_rounds:
        entry = entries[min(round_no, len(entries) - 1)]
        grew = False
        for tname in sorted(entry):
            if tname not in I:
                raise StructureError(f"schedule entry {tname} outside the factor set")
            T = by_name[tname]
            dim_ext, space = ext1(pres, T, V, check=False)
            if dim_ext == 0:
                continue
            E = universal_extension(V, T, space.basis)
            bad = _prune_split_directions(E, V, T, dim_ext)
            if bad is not None and bad.rows:
                # restrict to a complement of the bad directions in k^d
                _, _, bad_piv = _rref_array(V.field, bad.a)
                keep_dirs = [j for j in range(dim_ext) if j not in bad_piv]
                kept = []
                for j in keep_dirs:
                    kept.append([np.asarray(space.basis[j][gi], dtype=np.int64)
                                 for gi in range(len(V.gens))])
                if not kept:
                    continue
                E = universal_extension(V, T, kept)
            # verify the socle is unchanged
            new_soc = socle(E, simples).rows
            if new_soc != soc_dim0:
                raise StructureError("socle enlargement undetected by pruning")
            V = E
            grew = True
        round_no += 1
        if not grew and round_no >= len(entries):
            break
    ss = series(V, simples, names)
    return LayeredModule(V, ss)


def projective_cover(name: str, simples, names, pres: GroupPresentation,
                     max_rounds: int = 40) -> LayeredModule:
    """P(S) as the terminal socle-preserving extension of S by all simples
    (the group algebra is self-injective, so E(S) = P(S'))."""
    return pyx([name], set(names), simples, names, pres, max_rounds=max_rounds)


# ---------------------------------------------------------------------------
# self-duality helpers
# ---------------------------------------------------------------------------

def self_duality_witness(V: GModule, tries: int = 24, seed: int = 1):
    """An invertible intertwiner V -> V*, or None."""
    dualV = build_dual(V)
    H = hom_space(V, dualV)
    if H.rows == 0:
        return None
    rng = np.random.default_rng(seed)
    F = V.field
    for t in range(tries):
        if t < H.rows:
            vec = H.a[t]
        else:
            combo = rng.integers(0, F.q, size=H.rows).astype(np.int64)
            vec = np.zeros(H.cols, dtype=np.int64)
            for c, row in zip(combo, H.a):
                if c:
                    vec = F.add(vec, F.mul(row, int(c)))
        X = FqMatrix(F, vec.reshape(V.dim, V.dim))
        try:
            X.inverse()
            return X
        except ZeroDivisionError:
            continue
    return None


def odd_factors(V: GModule, simples, names, with_witness: bool = True):
    """Self-dual simples of odd multiplicity in a self-dual module, with a
    verified subquotient witness isomorphic to their direct sum."""
    if self_duality_witness(V) is None:
        raise StructureError("module is not self-dual")
    by_name = dict(zip(names, simples))
    dual_names = {}
    for nm, S in by_name.items():
        for nm2, S2 in by_name.items():
            if S.dim == S2.dim and is_isomorphic(build_dual(S), S2) is not None:
                dual_names[nm] = nm2
                break
    cf = factor_names(V, simples, names)
    odd = sorted(nm for nm, m in cf.items()
                 if m % 2 == 1 and dual_names.get(nm) == nm)
    if not with_witness:
        return odd, None
    witness = _odd_witness(V, simples, names, odd)
    return odd, witness


def _decompose_once(V: GModule, seed: int = 3, tries: int = 30):
    """A nontrivial direct-sum decomposition (basisA, basisB), or None."""
    from .modrep import matrix_minpoly, poly_factor, matrix_poly_eval, _poly_mul
    F = V.field
    H = hom_space(V, V)
    if H.rows <= 1:
        return None
    rng = np.random.default_rng(seed)
    for t in range(tries):
        combo = rng.integers(0, F.q, size=H.rows).astype(np.int64)
        vec = np.zeros(H.cols, dtype=np.int64)
        for c, row in zip(combo, H.a):
            if c:
                vec = F.add(vec, F.mul(row, int(c)))
        theta = vec.reshape(V.dim, V.dim)
        mp = matrix_minpoly(F, theta, rng)
        fac = poly_factor(F, mp, rng)
        if len(fac) == 1:
            continue
        f0, m0 = fac[0]
        fpart = f0
        for _ in range(m0 - 1):
            fpart = _poly_mul(F, fpart, f0)
        gpart = [1]
        for fi, mi in fac[1:]:
            for _ in range(mi):
                gpart = _poly_mul(F, gpart, fi)
        A = matrix_poly_eval(F, theta, fpart)
        B = matrix_poly_eval(F, theta, gpart)
        kerA = nullspace(FqMatrix(F, A.T))
        kerB = nullspace(FqMatrix(F, B.T))
        if 0 < kerA.rows < V.dim and kerA.rows + kerB.rows == V.dim:
            return kerA, kerB
    return None


def _odd_witness(V: GModule, simples, names, odd: list[str]):
    """Explicit subquotient of V isomorphic to the direct sum of the odd
    self-dual simples, following the decompose-or-take-heart recursion."""
    by_name = dict(zip(names, simples))
    target = [by_name[nm] for nm in odd]
    if not target:
        return {"upper_dim": 0, "lower_dim": 0, "verified": True}

    def recurse(W: GModule, depth=0):
        if depth > 30:
            raise StructureError("odd-witness recursion too deep")
        cfW = factor_names(W, simples, names)
        oddW = sorted(nm for nm, m in cfW.items() if m % 2 == 1 and nm in odd)
        # semisimple case: socle = W
        soc = socle(W, simples)
        if soc.rows == W.dim:
            rows = []
            for nm in oddW:
                S = by_name[nm]
                H = hom_space(S, W)
                X = H.a[0].reshape(S.dim, W.dim)
                rows.append(X)
            basis = row_space_basis(FqMatrix(W.field, np.concatenate(rows, axis=0)))
            sub, _, _ = sub_quotient(W, basis)
            return sub
        split = _decompose_once(W)
        if split is not None:
            kerA, kerB = split
            subA, _, _ = sub_quotient(W, kerA)
            subB, _, _ = sub_quotient(W, kerB)
            partA = recurse(subA, depth + 1)
            partB = recurse(subB, depth + 1)
            return direct_sum([m for m in (partA, partB) if m is not None and m.dim])
        # indecomposable: pass to the heart rad(W)/soc(W)
        socW = socle(W, simples)
        radW = _radical_basis(W, simples)
        _, q, data = sub_quotient(W, socW)
        rad_in_q = _quotient_image(radW, data, W.field)
        heart, _, _ = sub_quotient(q, rad_in_q)
        return recurse(heart, depth + 1)

    wit = recurse(V)
    # verify the witness is isomorphic to the direct sum of the odd simples
    ref = direct_sum(target)
    ok = wit is not None and wit.dim == ref.dim and _iso_semisimple(wit, ref, simples)
    if not ok:
        raise StructureError("odd-multiplicity witness verification failed")
    return {"dim": wit.dim, "factors": odd, "verified": True}


def _radical_basis(V: GModule, simples) -> FqMatrix:
    """rad(V) = perp of the socle of the dual."""
    dualV = build_dual(V)
    dual_simples = [build_dual(S) for S in simples]
    socd = socle(dualV, dual_simples)
    if socd.rows == 0:
        return FqMatrix.identity(V.field, V.dim)
    return nullspace(socd)


def _quotient_image(basis: FqMatrix, data, F) -> FqMatrix:
    """Image of a submodule basis in quotient coordinates."""
    piv, nonpiv = data["piv"], data["nonpiv"]
    E = data["E"]
    rows = basis.a.copy()
    rows = F.sub(rows, fq_matmul(F, rows[:, piv], E))
    return row_space_basis(FqMatrix(F, rows[:, nonpiv]))


def _iso_semisimple(A: GModule, B: GModule, simples) -> bool:
    for S in simples:
        if hom_dim(S, A) != hom_dim(S, B):
            return False
    return True


# ---------------------------------------------------------------------------
# bottom-half and S^2 tests
# ---------------------------------------------------------------------------

def bottomhalf_check(V: GModule, simples, names, I: set, S_name: str):
    """Multiplicity of a self-dual simple S not in I is at most twice its
    multiplicity in the I'-radical, whenever the I-heart omits S; reports
    the three-term filtration 0 <= V0 cap V1 <= V1 <= V."""
    all_names = set(names)
    if S_name in I:
        raise StructureError("S must not lie in I")
    Iprime = all_names - set(I)
    V0 = i_radical(V, simples, names, Iprime)
    V1 = i_residual(V, simples, names, Iprime)
    heart, _ = i_heart(V, simples, names, I)
    by_name = dict(zip(names, simples))
    mult_V = factor_names(V, simples, names).get(S_name, 0)
    sub0, _, _ = sub_quotient(V, V0)
    mult_V0 = factor_names(sub0, simples, names).get(S_name, 0) if V0.rows else 0
    heart_mult = 0
    if heart is not None and heart.dim:
        heart_mult = factor_names(heart, simples, names).get(S_name, 0)
    applicable = heart_mult == 0
    holds = (not applicable) or (mult_V <= 2 * mult_V0)
    return {
        "applicable": applicable,
        "holds": holds,
        "mult_in_V": mult_V,
        "mult_in_V0": mult_V0,
        "filtration_dims": [0, min(V0.rows, V1.rows), V1.rows, V.dim],
    }


def sym2_fixed_test(V: GModule):
    """dim of the G-fixed space of S^2(V) and the orthogonal-embedding verdict."""
    S2 = build_sym2(V)
    d = fixed_points(S2).rows
    return d, ("NO_Dn_EMBEDDING" if d == 0 else "POSSIBLE")


# ---------------------------------------------------------------------------
# layer report emission
# ---------------------------------------------------------------------------

def layer_report(lm: LayeredModule) -> dict:
    return {
        "dim": lm.module.dim,
        "layers": [sorted(layer) for layer in lm.layers()],
        "slash": lm.slash(),
    }
