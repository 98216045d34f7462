"""Finite rings (group algebras over Z/p^k), finite modules, and canonical
submodule arithmetic.

Submodules are stored as Howell normal forms: the unique echelon form for
matrices over a product of rings Z/p^s, one modulus per coordinate.  Handle
equality is therefore matrix equality, and (sum, intersect, leq) turn the set
of submodules into a lattice oracle usable by the engine without enumerating
the ambient lattice."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import frames as _frames
from .lattice import LatticeError


class ModuleError(ValueError):
    pass


# ---------------------------------------------------------------------------
# rings


def cyclic_cayley(m):
    return [[(i + j) % m for j in range(m)] for i in range(m)]


def s3_cayley():
    import itertools as it

    perms = sorted(it.permutations(range(3)))
    # identity first
    perms.sort(key=lambda p: p != (0, 1, 2))
    index = {p: i for i, p in enumerate(perms)}

    def mul(p, q):
        return tuple(p[q[i]] for i in range(3))

    return [[index[mul(p, q)] for q in perms] for p in perms]


def _check_group(cayley):
    m = len(cayley)
    for row in cayley:
        if len(row) != m or any(not (0 <= v < m) for v in row):
            raise ModuleError("malformed multiplication table")
    e = None
    for i in range(m):
        if all(cayley[i][j] == j and cayley[j][i] == j for j in range(m)):
            e = i
            break
    if e is None:
        raise ModuleError("no identity element")
    for a in range(m):
        for b in range(m):
            for c in range(m):
                if cayley[cayley[a][b]][c] != cayley[a][cayley[b][c]]:
                    raise ModuleError(f"associativity fails at ({a},{b},{c})")
    for a in range(m):
        if not any(cayley[a][b] == e for b in range(m)):
            raise ModuleError(f"element {a} has no inverse")
    return e


@dataclass(frozen=True)
class FiniteRing:
    """Group algebra (Z/p^k)[G]; the basis is indexed by group elements and
    basis products follow the group table."""

    p: int
    k: int
    cayley: tuple
    names: tuple = None

    @property
    def modulus(self):
        return self.p ** self.k

    @property
    def dim(self):
        return len(self.cayley)

    def zero(self):
        return (0,) * self.dim

    def one(self):
        return tuple(1 if i == self.identity else 0 for i in range(self.dim))

    @property
    def identity(self):
        return 0

    def basis(self, g):
        return tuple(1 if i == g else 0 for i in range(self.dim))

    def add(self, a, b):
        n = self.modulus
        return tuple((x + y) % n for x, y in zip(a, b))

    def neg(self, a):
        n = self.modulus
        return tuple((-x) % n for x in a)

    def scale(self, c, a):
        n = self.modulus
        return tuple((c * x) % n for x in a)

    def mul(self, a, b):
        n = self.modulus
        out = [0] * self.dim
        for i, x in enumerate(a):
            if x:
                row = self.cayley[i]
                for j, y in enumerate(b):
                    if y:
                        out[row[j]] = (out[row[j]] + x * y) % n
        return tuple(out)

    def elements(self):
        return itertools.product(range(self.modulus), repeat=self.dim)

    def units(self):
        one = self.one()
        out = []
        for a in self.elements():
            if any(a):
                for b in self.elements():
                    if self.mul(a, b) == one and self.mul(b, a) == one:
                        out.append(a)
                        break
        return out

    def is_unit(self, a):
        one = self.one()
        return any(self.mul(a, b) == one and self.mul(b, a) == one for b in self.elements())

    def label(self, a):
        parts = []
        for i, c in enumerate(a):
            if not c:
                continue
            g = self.names[i] if self.names else (f"g{i}" if i else "1")
            parts.append(g if c == 1 else f"{c}{g}")
        return "+".join(parts) if parts else "0"


def group_algebra(p, k, cayley, names=None):
    """Group ring over Z/p^k; the table must be a group (checked).  Elements
    are relabelled so the identity sits at index 0."""
    identity = _check_group(cayley)
    m = len(cayley)
    if identity != 0:
        order = [identity] + [i for i in range(m) if i != identity]
        pos = {old: new for new, old in enumerate(order)}
        cayley = [[pos[cayley[order[a]][order[b]]] for b in range(m)] for a in range(m)]
        if names:
            names = [names[i] for i in order]
    return FiniteRing(p, k, tuple(tuple(r) for r in cayley), tuple(names) if names else None)


def zmod(p, k):
    """Z/p^k as the group algebra of the trivial group."""
    return FiniteRing(p, k, ((0,),))


# ---------------------------------------------------------------------------
# modules and Howell normal form


def _valuation(x, p, cap):
    if x == 0:
        return cap
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


_INV_CACHE = {}


def _unit_inverse(u, pk):
    key = (u, pk)
    inv = _INV_CACHE.get(key)
    if inv is None:
        inv = pow(u, -1, pk)
        _INV_CACHE[key] = inv
    return inv


def howell(rows, mods, p, pre_reduced=False):
    """Howell normal form of the row span inside prod_j Z/mods[j].

    Unique per subgroup of the product; pivot entries are powers of p, pivot
    columns strictly increase, and entries above a pivot are reduced below
    it.  Annihilator multiples are fed back in so the span property holds at
    every column (they can survive in columns with a larger modulus)."""
    D = len(mods)
    pk = max(mods) if mods else 1
    # per-column valuation lookup (column moduli are tiny prime powers)
    val = {}
    for m in set(mods):
        cap = _valuation(m, p, 64)
        val[m] = [cap] + [_valuation(x, p, cap) for x in range(1, m)]
    if pre_reduced:
        work = [list(r) for r in rows if any(r)]
    else:
        work = [
            [x % m for x, m in zip(r, mods)]
            for r in rows
        ]
        work = [r for r in work if any(r)]
    result = []
    for col in range(D):
        m_col = mods[col]
        vcol = val[m_col]
        cap = vcol[0]
        best = None
        best_v = cap
        for i, r in enumerate(work):
            x = r[col]
            if x:
                v = vcol[x]
                if v < best_v:
                    best_v = v
                    best = i
        if best is None:
            continue
        piv = work.pop(best)
        v = best_v
        pe = p ** v
        unit = piv[col] // pe
        if unit != 1:
            inv = _unit_inverse(unit, pk)
            piv = [(inv * x) % m for x, m in zip(piv, mods)]
        rest = []
        for r in work:
            x = r[col]
            if x:
                c = x // pe
                r = [(a - c * b) % m for a, b, m in zip(r, piv, mods)]
            if any(r):
                rest.append(r)
        work = rest
        ann = m_col // pe
        extra = [(ann * x) % m for x, m in zip(piv, mods)]
        if any(extra):
            work.append(extra)
        result.append((col, pe, piv))
    # reduce entries above each pivot, left to right: a pivot row has zeros
    # before its own pivot column, so later reductions preserve earlier ones
    for i in range(len(result)):
        col, pe, piv = result[i]
        for j in range(i):
            cj, pj, rj = result[j]
            c = rj[col] // pe
            if c:
                result[j] = (cj, pj, [(a - c * b) % m for a, b, m in zip(rj, piv, mods)])
    return tuple(tuple(r) for _, _, r in result)


@dataclass(frozen=True)
class FiniteModule:
    """Module over a FiniteRing: free of the given rank modulo relations
    p^t * e_i = 0.  Elements are coefficient vectors of length rank*dim with
    per-coordinate moduli."""

    ring: FiniteRing
    rank: int
    relations: tuple = ()  # ((scalar, basis_index), ...) meaning scalar*e_i = 0

    def __post_init__(self):
        exps = [self.ring.k] * self.rank
        for scalar, i in self.relations:
            v = _valuation(scalar, self.ring.p, self.ring.k)
            if scalar != self.ring.p ** v:
                raise ModuleError("relation scalars must be powers of p")
            exps[i] = min(exps[i], v)
        object.__setattr__(self, "block_exp", tuple(exps))
        m = self.ring.dim
        mods = []
        for e in exps:
            mods.extend([self.ring.p ** e] * m)
        object.__setattr__(self, "mods", tuple(mods))

    @property
    def dim(self):
        return self.rank * self.ring.dim

    def order(self):
        out = 1
        for m in self.mods:
            out *= m
        return out

    def zero_vec(self):
        return (0,) * self.dim

    def e(self, i):
        """Basis vector e_i (ring identity in block i)."""
        v = [0] * self.dim
        v[i * self.ring.dim + self.ring.identity] = 1
        return tuple(v)

    def embed(self, i, r):
        """Ring element r placed in block i."""
        v = [0] * self.dim
        m = self.ring.dim
        for j, c in enumerate(r):
            v[i * m + j] = c % self.mods[i * m + j]
        return tuple(v)

    def add_vec(self, a, b):
        return tuple((x + y) % m for x, y, m in zip(a, b, self.mods))

    def neg_vec(self, a):
        return tuple((-x) % m for x, m in zip(a, self.mods))

    def scale_vec(self, c, a):
        return tuple((c * x) % m for x, m in zip(a, self.mods))

    def act(self, r, a):
        """Left action of ring element r on module vector a, blockwise."""
        m = self.ring.dim
        out = [0] * self.dim
        for blk in range(self.rank):
            seg = a[blk * m:(blk + 1) * m]
            if any(seg):
                prod = self.ring.mul(r, seg)
                for j, c in enumerate(prod):
                    out[blk * m + j] = c % self.mods[blk * m + j]
        return tuple(out)

    def elements(self):
        ranges = [range(m) for m in self.mods]
        return (tuple(v) for v in itertools.product(*ranges))

    def vec_label(self, v):
        m = self.ring.dim
        parts = []
        for blk in range(self.rank):
            seg = v[blk * m:(blk + 1) * m]
            if any(seg):
                coeff = self.ring.label(seg)
                if "+" in coeff:
                    coeff = f"({coeff})"
                parts.append(f"e{blk + 1}" if coeff == "1" else f"{coeff}e{blk + 1}")
        return "+".join(parts) if parts else "0"


@dataclass(frozen=True)
class SubmoduleHandle:
    module: FiniteModule = field(compare=False)
    rows: tuple = ()

    def key(self):
        return self.rows

    def order(self):
        out = 1
        for r in self.rows:
            col = next(i for i, x in enumerate(r) if x)
            out *= self.module.mods[col] // r[col]
        return out

    def elements(self):
        """Unique coefficient enumeration along the echelon rows."""
        M = self.module
        ranges = []
        for r in self.rows:
            col = next(i for i, x in enumerate(r) if x)
            ranges.append(range(M.mods[col] // r[col]))
        out = []
        for coeffs in itertools.product(*ranges):
            v = M.zero_vec()
            for c, r in zip(coeffs, self.rows):
                if c:
                    v = M.add_vec(v, M.scale_vec(c, r))
            out.append(v)
        return out

    def contains_vec(self, v):
        M = self.module
        p = M.ring.p
        v = list(x % m for x, m in zip(v, M.mods))
        for r in self.rows:
            col = next(i for i, x in enumerate(r) if x)
            x = v[col]
            if x == 0:
                continue
            if x % r[col]:
                return False
            c = x // r[col]
            v = [(a - c * b) % m for a, b, m in zip(v, r, M.mods)]
        return not any(v)

    def label(self):
        if not self.rows:
            return "0"
        return "<" + ", ".join(self.module.vec_label(r) for r in self.rows) + ">"

    def __repr__(self):
        return f"Sub{self.label()}"


def submodule(M: FiniteModule, generators) -> SubmoduleHandle:
    """Canonical handle of the submodule generated by the given vectors:
    close under the ring's basis action, then take the Howell form."""
    rows = []
    for g in generators:
        if len(g) != M.dim:
            raise ModuleError(f"vector of wrong dimension (expected {M.dim})")
        for b in range(M.ring.dim):
            rows.append(M.act(M.ring.basis(b), g))
    return SubmoduleHandle(M, howell(rows, M.mods, M.ring.p, pre_reduced=True))


def zero_submodule(M):
    return SubmoduleHandle(M, ())


def full_submodule(M):
    return submodule(M, [M.e(i) for i in range(M.rank)])


def sub_sum(X: SubmoduleHandle, Y: SubmoduleHandle) -> SubmoduleHandle:
    M = X.module
    if Y.module is not M and Y.module != M:
        raise ModuleError("handles from different modules")
    return SubmoduleHandle(M, howell(X.rows + Y.rows, M.mods, M.ring.p, pre_reduced=True))


def _left_kernel(rows, mods, p):
    """Generators of {z : z . rows = 0} over the per-column moduli, via the
    Howell form of the matrix augmented with an identity block."""
    r = len(rows)
    if r == 0:
        return []
    pk = max(mods)
    aug_mods = tuple(mods) + (pk,) * r
    aug = []
    for i, row in enumerate(rows):
        unit = [0] * r
        unit[i] = 1
        aug.append(tuple(row) + tuple(unit))
    H = howell(aug, aug_mods, p, pre_reduced=True)
    D = len(mods)
    return [h[D:] for h in H if not any(h[:D])]


def sub_intersect(X: SubmoduleHandle, Y: SubmoduleHandle) -> SubmoduleHandle:
    M = X.module
    if Y.module is not M and Y.module != M:
        raise ModuleError("handles from different modules")
    if not X.rows or not Y.rows:
        return zero_submodule(M)
    stacked = list(X.rows) + [M.neg_vec(r) for r in Y.rows]
    kernel = _left_kernel(stacked, M.mods, M.ring.p)
    na = len(X.rows)
    gens = []
    for z in kernel:
        v = M.zero_vec()
        for c, row in zip(z[:na], X.rows):
            if c:
                v = M.add_vec(v, M.scale_vec(c, row))
        if any(v):
            gens.append(v)
    return SubmoduleHandle(M, howell(gens, M.mods, M.ring.p, pre_reduced=True))


def sub_leq(X: SubmoduleHandle, Y: SubmoduleHandle) -> bool:
    return all(Y.contains_vec(r) for r in X.rows)


class SubmoduleLattice:
    """Lattice-oracle view of the submodules of a finite module.

    For modules small enough to index their elements, every handle also gets
    an element bitmask: meets become bit-ands resolved through an interning
    table, and comparisons become subset tests.  Larger modules fall back to
    the kernel construction throughout."""

    MASK_LIMIT = 1 << 16

    def __init__(self, M: FiniteModule, use_masks=None):
        self.module = M
        self._bot = zero_submodule(M)
        self._top = full_submodule(M)
        if use_masks is None:
            use_masks = M.order() <= self.MASK_LIMIT
        self._masks = {} if use_masks else None
        self._by_mask = {} if use_masks else None
        if use_masks:
            stride = []
            acc = 1
            for m in reversed(M.mods):
                stride.append(acc)
                acc *= m
            self._stride = tuple(reversed(stride))

    def _rank(self, v):
        return sum(x * s for x, s in zip(v, self._stride))

    def mask(self, X):
        mk = self._masks.get(X.rows)
        if mk is None:
            mk = 0
            for v in X.elements():
                mk |= 1 << self._rank(v)
            self._masks[X.rows] = mk
            self._by_mask.setdefault(mk, X)
        return mk

    def _from_mask(self, mk):
        X = self._by_mask.get(mk)
        if X is not None:
            return X
        # pick generators greedily until the span fills the mask
        M = self.module
        gens = []
        span = self._bot
        span_mk = self.mask(span)
        probe = mk & ~span_mk
        while probe:
            bit = probe & -probe
            r = bit.bit_length() - 1
            v = []
            for s, m in zip(self._stride, M.mods):
                v.append((r // s) % m)
            gens.append(tuple(v))
            span = sub_sum(span, submodule(M, [tuple(v)]))
            span_mk = self.mask(span)
            probe = mk & ~span_mk
        self._by_mask[mk] = span
        return span

    def equal(self, X, Y):
        return X.rows == Y.rows

    def leq(self, X, Y):
        if self._masks is not None:
            return self.mask(X) & ~self.mask(Y) == 0
        return sub_leq(X, Y)

    def join(self, X, Y):
        if self._masks is not None:
            mx, my = self.mask(X), self.mask(Y)
            if mx & ~my == 0:
                return Y
            if my & ~mx == 0:
                return X
        Z = sub_sum(X, Y)
        if self._masks is not None:
            self.mask(Z)
        return Z

    def meet(self, X, Y):
        if self._masks is not None:
            return self._from_mask(self.mask(X) & self.mask(Y))
        return sub_intersect(X, Y)

    def key(self, X):
        return X.rows

    def label(self, X):
        return X.label()

    def bottom(self):
        return self._bot

    def top(self):
        return self._top

    def span(self, *vectors):
        return submodule(self.module, list(vectors))

    def interval_elements(self, lo, hi, bound=1 << 14):
        """All submodules X with lo <= X <= hi, by closing the cyclic
        extensions of lo under sum."""
        if hi.order() > bound:
            raise LatticeError(f"interval too large to enumerate (|hi| = {hi.order()})")
        M = self.module
        atoms = set()
        for v in hi.elements():
            if any(v):
                h = sub_sum(lo, submodule(M, [v]))
                atoms.add(h.rows)
        found = {lo.rows: lo}
        for rows in atoms:
            found[rows] = SubmoduleHandle(M, rows)
        frontier = list(found.values())
        while frontier:
            nxt = []
            for X in frontier:
                for rows in list(found):
                    Y = found[rows]
                    S = sub_sum(X, Y)
                    if S.rows not in found:
                        found[S.rows] = S
                        nxt.append(S)
            frontier = nxt
        return list(found.values())

    def all_submodules(self, bound=1 << 14):
        """Complete enumeration (cyclic submodules closed under sum)."""
        if self.module.order() > bound:
            raise LatticeError(
                f"module too large to enumerate (|M| = {self.module.order()} > {bound})"
            )
        return self.interval_elements(self._bot, self._top, bound=bound)


def all_submodules(M: FiniteModule, bound=1 << 14):
    return SubmoduleLattice(M).all_submodules(bound=bound)


def abelian_group(p, exponents) -> FiniteModule:
    """Finite abelian p-group with invariant factors p^e, as a module over
    Z/p^max(e)."""
    exponents = tuple(exponents)
    k = max(exponents)
    ring = zmod(p, k)
    rels = tuple((p ** e, i) for i, e in enumerate(exponents) if e < k)
    return FiniteModule(ring, len(exponents), rels)


# ---------------------------------------------------------------------------
# canonical frames and the tower model


def canonical_frame(M: FiniteModule, indices=None):
    """Canonical frame of a free part of M: axes Re_i, spokes R(e_1 - e_j),
    bottom zero.  The designated indices must generate freely (full ring
    annihilator is rejected)."""
    if indices is None:
        indices = tuple(range(M.rank))
    k = M.ring.k
    for i in indices:
        if M.block_exp[i] != k:
            raise ModuleError(f"basis vector e_{i + 1} is not free (p^{M.block_exp[i]} e = 0)")
    host = SubmoduleLattice(M)
    n = len(indices)
    axes = tuple(range(1, n + 1))
    bot = zero_submodule(M)
    a = {axes[t]: host.span(M.e(indices[t])) for t in range(n)}
    c = {}
    e1 = M.e(indices[0])
    for t in range(1, n):
        diff = M.add_vec(e1, M.neg_vec(M.e(indices[t])))
        c[(1, axes[t])] = host.span(diff)
    return _frames.FrameConfig(host=host, axes=axes, bot=bot, a=a, c=c)


def graph_element(M: FiniteModule, g, i=1, j=3):
    """The submodule R(e_i - g e_j); for unit g this is the graph of the ring
    element in the coordinate domain (1-based basis indices)."""
    vec = M.add_vec(M.e(i - 1), M.neg_vec(M.embed(j - 1, g)))
    return submodule(M, [vec])


def tower_canonical_model(n, p):
    """The canonical model of an n-tower of skew frames: the abelian group
    with relations p^2 e_1 = p^2 e_3 = 0, p^(3n-1) e_2 = 0, p e_4 = 0, and the
    displayed subgroups for every level.  Returns (lattice oracle, tower)."""
    if n < 1:
        raise ModuleError("n must be >= 1")
    kmax = max(2, 3 * n - 1)
    ring = zmod(p, kmax)
    rels = [(p ** 2, 0), (p ** 2, 2), (p, 3)]
    if 3 * n - 1 < kmax:
        rels.append((p ** (3 * n - 1), 1))
    M = FiniteModule(ring, 4, tuple(rels))
    host = SubmoduleLattice(M)

    def Z(*coeff_pairs):
        v = M.zero_vec()
        for coeff, idx in coeff_pairs:
            v = M.add_vec(v, M.scale_vec(coeff % M.mods[idx], M.e(idx)))
        return v

    def span(*vecs):
        return submodule(M, list(vecs))

    skews = []
    for k in range(1, n + 1):
        q = 3 * (n - k)
        abot = span(Z((p ** (q + 2), 1)))
        a = {}
        c = {}
        a2 = span(Z((p ** q, 1)))
        for i, idx in ((1, 0), (3, 2)):
            a[i] = sub_sum(abot, span(Z((1, idx))))
            c[(2, i)] = span(Z((p ** q, 1), (-1, idx)))
        a[2] = a2
        c[(1, 3)] = sub_sum(abot, span(Z((1, 0), (-1, 2))))
        frame3 = _frames.FrameConfig(
            host=host, axes=(1, 2, 3), bot=abot,
            a={1: a[1], 2: a[2], 3: a[3]},
            c={(1, 2): c[(2, 1)], (1, 3): c[(1, 3)], (2, 3): c[(2, 3)]},
        )
        ap = {}
        cp = {}
        ap[2] = span(Z((p ** (q + 1), 1)))
        for i, idx in ((1, 0), (3, 2)):
            ap[i] = sub_sum(abot, span(Z((p, idx))))
            cp[(2, i)] = span(Z((p ** (q + 1), 1), (-p, idx)))
            cp[(i, 4)] = sub_sum(abot, span(Z((p, idx), (-1, 3))))
        cp[(2, 4)] = span(Z((p ** (q + 1), 1), (-1, 3)))
        cp[(1, 3)] = sub_sum(abot, span(Z((p, 0), (-p, 2))))
        ap[4] = sub_sum(abot, span(Z((1, 3))))
        frame4 = _frames.FrameConfig(
            host=host, axes=(1, 2, 3, 4), bot=abot,
            a=ap,
            c={(1, 2): cp[(2, 1)], (1, 3): cp[(1, 3)], (1, 4): cp[(1, 4)],
               (2, 3): cp[(2, 3)], (2, 4): cp[(2, 4)], (3, 4): cp[(3, 4)]},
        )
        skews.append(_frames.SkewFrameConfig(prime=frame4, base=frame3))
    return host, _frames.TowerConfig(skews=tuple(skews))
