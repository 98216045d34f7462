"""Explicit finite lattices and the abstract lattice-oracle interface.

A FiniteLattice stores the order as a boolean matrix plus join/meet tables
and acts on integer element handles; it satisfies the same small protocol
(equal/leq/join/meet) that submodule arithmetic exposes for ambient lattices
too large to enumerate.  Exhaustive identity checks are vectorized with
numpy over the assignment space."""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .terms import Term, TermError

DEFAULT_SIZE_CAP = 20_000


class LatticeError(ValueError):
    pass


class NotALattice(LatticeError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class BudgetExceeded(LatticeError):
    def __init__(self, size_reached):
        super().__init__(f"element budget exceeded (reached {size_reached})")
        self.size_reached = size_reached


class FiniteLattice:
    """Finite lattice on elements 0..n-1 with full order and operation tables."""

    def __init__(self, leq, labels=None, _skip_check=False):
        self.leq_mat = np.asarray(leq, dtype=bool)
        self.n = self.leq_mat.shape[0]
        if labels is not None and len(labels) != self.n:
            raise LatticeError("label count mismatch")
        self.labels = list(labels) if labels is not None else None
        if not _skip_check:
            self._check_order()
        self.join_table, self.meet_table = self._build_tables()
        bots = np.flatnonzero(self.leq_mat.all(axis=1))
        tops = np.flatnonzero(self.leq_mat.all(axis=0))
        self.bot = int(bots[0])
        self.top = int(tops[0])

    # -- oracle protocol ----------------------------------------------------
    def equal(self, a, b):
        return a == b

    def leq(self, a, b):
        return bool(self.leq_mat[a, b])

    def join(self, a, b):
        return int(self.join_table[a, b])

    def meet(self, a, b):
        return int(self.meet_table[a, b])

    def key(self, a):
        return a

    def label(self, a):
        return self.labels[a] if self.labels else str(a)

    def bottom(self):
        return self.bot

    def interval_elements(self, lo, hi):
        mask = self.leq_mat[lo, :] & self.leq_mat[:, hi]
        return [int(i) for i in np.flatnonzero(mask)]

    def elements(self):
        return range(self.n)

    # -- construction -------------------------------------------------------
    def _check_order(self):
        L = self.leq_mat
        if not L.diagonal().all():
            raise NotALattice("order not reflexive")
        cyc = L & L.T & ~np.eye(self.n, dtype=bool)
        if cyc.any():
            i, j = map(int, np.argwhere(cyc)[0])
            raise NotALattice("cycle in order", witness=(i, j))
        if ((L @ L) & ~L).any():
            raise NotALattice("order not transitive")

    def _build_tables(self):
        L = self.leq_mat
        n = self.n
        join = np.zeros((n, n), dtype=np.int32)
        meet = np.zeros((n, n), dtype=np.int32)
        counts = L.sum(axis=1)  # number of elements above each element
        for a in range(n):
            ub = L[a, :] & L  # ub[b, k] = a<=k and b<=k
            lb = L[:, a] & L.T
            for b in range(a, n):
                cand = np.flatnonzero(ub[b])
                if cand.size == 0:
                    raise NotALattice("no upper bound", witness=(a, b))
                least = cand[np.argmax(counts[cand])]
                if not L[least, cand].all():
                    raise NotALattice(
                        f"no supremum of ({self.label(a)}, {self.label(b)})", witness=(a, b)
                    )
                join[a, b] = join[b, a] = least
                cand = np.flatnonzero(lb[b])
                if cand.size == 0:
                    raise NotALattice("no lower bound", witness=(a, b))
                greatest = cand[np.argmin(counts[cand])]
                if not L[cand, greatest].all():
                    raise NotALattice(
                        f"no infimum of ({self.label(a)}, {self.label(b)})", witness=(a, b)
                    )
                meet[a, b] = meet[b, a] = greatest
        return join, meet

    @staticmethod
    def from_tables(join, meet, labels=None):
        """Build from complete join/meet tables (order derived from join)."""
        join = np.asarray(join, dtype=np.int32)
        n = join.shape[0]
        L = FiniteLattice.__new__(FiniteLattice)
        L.n = n
        L.join_table = join
        L.meet_table = np.asarray(meet, dtype=np.int32)
        L.leq_mat = join == np.arange(n)[None, :]
        L.labels = list(labels) if labels is not None else None
        bots = np.flatnonzero(L.leq_mat.all(axis=1))
        tops = np.flatnonzero(L.leq_mat.all(axis=0))
        L.bot = int(bots[0])
        L.top = int(tops[0])
        return L

    def covers(self):
        """Covering pairs (a, b) with a covered by b."""
        L = self.leq_mat
        strict = L & ~np.eye(self.n, dtype=bool)
        # b covers a iff a<b and no c with a<c<b
        two_step = strict @ strict
        cov = strict & ~two_step
        return [(int(a), int(b)) for a, b in np.argwhere(cov)]

    def dual(self):
        return FiniteLattice(self.leq_mat.T.copy(), labels=self.labels, _skip_check=True)

    def to_json(self):
        rows = []
        width = (self.n + 3) // 4
        for i in range(self.n):
            bits = 0
            for j in range(self.n):
                if self.leq_mat[i, j]:
                    bits |= 1 << j
            rows.append(format(bits, f"0{width}x"))
        doc = {"n": self.n, "leq": rows}
        if self.labels:
            doc["labels"] = self.labels
        return doc

    @staticmethod
    def from_json(doc):
        n = doc["n"]
        leq = np.zeros((n, n), dtype=bool)
        for i, row in enumerate(doc["leq"]):
            bits = int(row, 16)
            for j in range(n):
                leq[i, j] = bool((bits >> j) & 1)
        return FiniteLattice(leq, labels=doc.get("labels"))


def from_order(elements, leq_pairs, labels=None):
    """Build a FiniteLattice from a finite poset given by (a, b) pairs a<=b.

    Takes the reflexive-transitive closure first; reports cycles and the
    first pair lacking a supremum or infimum."""
    elements = list(elements)
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    leq = np.eye(n, dtype=bool)
    for a, b in leq_pairs:
        leq[index[a], index[b]] = True
    # Warshall closure
    for k in range(n):
        leq |= np.outer(leq[:, k], leq[k, :])
    cyc = leq & leq.T & ~np.eye(n, dtype=bool)
    if cyc.any():
        i, j = map(int, np.argwhere(cyc)[0])
        raise NotALattice(f"cycle in order through {elements[i]!r}, {elements[j]!r}", witness=(i, j))
    if labels is None:
        labels = [str(e) for e in elements]
    return FiniteLattice(leq, labels=labels, _skip_check=True)


def chain(k, labels=None):
    leq = np.triu(np.ones((k, k), dtype=bool))
    return FiniteLattice(leq, labels=labels, _skip_check=True)


def m3():
    return from_order("0abc1", [("0", x) for x in "abc"] + [(x, "1") for x in "abc"])


def n5():
    return from_order(
        "0abc1", [("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")]
    )


def product(L1: FiniteLattice, L2: FiniteLattice) -> FiniteLattice:
    n1, n2 = L1.n, L2.n
    leq = np.kron(L1.leq_mat, L2.leq_mat)
    labels = None
    if True:
        lab1 = L1.labels or [str(i) for i in range(n1)]
        lab2 = L2.labels or [str(i) for i in range(n2)]
        labels = [f"({a},{b})" for a in lab1 for b in lab2]
    return FiniteLattice(leq, labels=labels, _skip_check=True)


def interval(L: FiniteLattice, a, b) -> FiniteLattice:
    if not L.leq(a, b):
        raise LatticeError(f"{L.label(a)} is not below {L.label(b)}")
    idx = L.interval_elements(a, b)
    sub = L.leq_mat[np.ix_(idx, idx)]
    labels = [L.label(i) for i in idx]
    return FiniteLattice(sub, labels=labels, _skip_check=True)


# ---------------------------------------------------------------------------
# term evaluation


def eval_term(t: Term, assignment: dict, host, opaque_resolver=None):
    """Evaluate a term bottom-up through the host's join/meet."""
    if t.kind in ("var", "const"):
        try:
            return assignment[t.name]
        except KeyError:
            raise TermError(f"unmapped symbol {t.name!r}") from None
    if t.kind == "opaque":
        if opaque_resolver is None:
            raise TermError(f"cannot evaluate opaque term {t.name!r}")
        args = [eval_term(a, assignment, host, opaque_resolver) for a in t.args]
        return opaque_resolver(t, args)
    acc = None
    op = host.join if t.kind == "join" else host.meet
    for a in t.args:
        v = eval_term(a, assignment, host, opaque_resolver)
        acc = v if acc is None else op(acc, v)
    return acc


def _eval_vec(t: Term, arrays: dict, join, meet, consts):
    if t.kind == "var":
        return arrays[t.name]
    if t.kind == "const":
        return consts[t.name]
    if t.kind == "opaque":
        raise TermError(f"cannot evaluate opaque term {t.name!r}")
    table = join if t.kind == "join" else meet
    acc = None
    for a in t.args:
        v = _eval_vec(a, arrays, join, meet, consts)
        acc = v if acc is None else table[acc, v]
    return acc


@dataclass
class IdentityResult:
    holds: bool
    counterexample: dict | None
    assignments_checked: int

    def to_json(self, L=None):
        ce = None
        if self.counterexample is not None:
            ce = {
                v: (L.label(e) if L is not None else e)
                for v, e in self.counterexample.items()
            }
        return {
            "holds": self.holds,
            "counterexample": ce,
            "assignments_checked": self.assignments_checked,
        }


def holds_identity(L: FiniteLattice, lhs: Term, rhs: Term, variables=None,
                   constants=None, chunk=1 << 18, sweep=False) -> IdentityResult:
    """Exhaustively check lhs = rhs over all assignments of L-elements to the
    variables, in mixed-radix (lexicographic) order.

    Short-circuits at the first counterexample unless sweep is set, in which
    case the lexicographically least counterexample is reported after a full
    pass.  `constants` supplies values for constant symbols."""
    if variables is None:
        variables = sorted(lhs.variables() | rhs.variables())
    variables = list(variables)
    consts = dict(constants or {})
    n = L.n
    k = len(variables)
    total = n ** k
    join, meet = L.join_table, L.meet_table
    checked = 0
    best = None
    offset = 0
    while offset < total:
        count = min(chunk, total - offset)
        base = np.arange(offset, offset + count, dtype=np.int64)
        arrays = {}
        div = total
        for v in variables:
            div //= n
            arrays[v] = (base // div) % n
        lv = _eval_vec(lhs, arrays, join, meet, consts)
        rv = _eval_vec(rhs, arrays, join, meet, consts)
        bad = np.flatnonzero(np.asarray(lv) != np.asarray(rv))
        if bad.size:
            i = int(bad[0])
            assignment = {v: int(arrays[v][i]) for v in variables}
            checked = offset + i + 1
            if not sweep:
                return IdentityResult(False, assignment, checked)
            if best is None:
                best = assignment
                best_checked = checked
        offset += count
    if best is not None:
        return IdentityResult(False, best, best_checked if not sweep else total)
    return IdentityResult(True, None, total)


def is_modular(L: FiniteLattice):
    """Exhaustive modular-law check x(y+xz) = xy+xz.

    Returns None if modular, else a violating (x, y, z) triple."""
    n = L.n
    J, M = L.join_table, L.meet_table
    X = np.arange(n)[:, None, None]
    Y = np.arange(n)[None, :, None]
    Z = np.arange(n)[None, None, :]
    xz = M[X, Z]
    lhs = M[X, J[Y, xz]]
    rhs = J[M[X, Y], xz]
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        x, y, z = map(int, bad[0])
        return (x, y, z)
    return None


def find_pentagon(L: FiniteLattice):
    """Search for an N5 sublattice {ac, a, b, c, a+c} with a < b.

    Independent witness-style check: agrees with is_modular (a pentagon
    exists iff the modular law fails)."""
    n = L.n
    for a in range(n):
        for b in range(n):
            if a == b or not L.leq(a, b):
                continue
            for c in range(n):
                if L.leq(c, a) or L.leq(a, c) or L.leq(c, b) or L.leq(b, c):
                    continue
                if L.join(a, c) == L.join(b, c) and L.meet(a, c) == L.meet(b, c):
                    return (L.meet(a, c), a, b, c, L.join(a, c))
    return None


def axioms_report(L: FiniteLattice, sample=100_000, seed=0):
    """The two ACI laws per operation plus both absorption laws.

    Exhaustive for |L| <= 200, sampled otherwise."""
    J, M = L.join_table, L.meet_table
    n = L.n
    report = {}
    report["join_commutative"] = bool((J == J.T).all())
    report["meet_commutative"] = bool((M == M.T).all())
    report["join_idempotent"] = bool((J.diagonal() == np.arange(n)).all())
    report["meet_idempotent"] = bool((M.diagonal() == np.arange(n)).all())
    if n <= 200:
        X = np.arange(n)[:, None, None]
        Y = np.arange(n)[None, :, None]
        Z = np.arange(n)[None, None, :]
        report["join_associative"] = bool((J[J[X, Y], Z] == J[X, J[Y, Z]]).all())
        report["meet_associative"] = bool((M[M[X, Y], Z] == M[X, M[Y, Z]]).all())
    else:
        rng = np.random.default_rng(seed)
        xs, ys, zs = rng.integers(0, n, (3, sample))
        report["join_associative"] = bool((J[J[xs, ys], zs] == J[xs, J[ys, zs]]).all())
        report["meet_associative"] = bool((M[M[xs, ys], zs] == M[xs, M[ys, zs]]).all())
    X2 = np.arange(n)[:, None]
    Y2 = np.arange(n)[None, :]
    report["absorption_meet_join"] = bool((M[X2, J[X2, Y2]] == X2).all())
    report["absorption_join_meet"] = bool((J[X2, M[X2, Y2]] == X2).all())
    return report


def check_oracle(oracle, elements, samples=1000, seed=0):
    """Spot-check the oracle's join/meet on random triples: commutativity,
    associativity, idempotency and absorption.  Sampling-based since ambient
    lattices need not be enumerable."""
    rng = random.Random(seed)
    elements = list(elements)
    if not elements:
        raise LatticeError("need a non-empty element sample")
    for _ in range(samples):
        a, b, c = (rng.choice(elements) for _ in range(3))
        j, m = oracle.join, oracle.meet
        if not oracle.equal(j(a, b), j(b, a)):
            return ("join not commutative", a, b)
        if not oracle.equal(m(a, b), m(b, a)):
            return ("meet not commutative", a, b)
        if not oracle.equal(j(a, j(b, c)), j(j(a, b), c)):
            return ("join not associative", a, b, c)
        if not oracle.equal(m(a, m(b, c)), m(m(a, b), c)):
            return ("meet not associative", a, b, c)
        if not oracle.equal(j(a, a), a):
            return ("join not idempotent", a)
        if not oracle.equal(m(a, a), a):
            return ("meet not idempotent", a)
        if not oracle.equal(m(a, j(a, b)), a):
            return ("absorption fails", a, b)
        if not oracle.equal(j(a, m(a, b)), a):
            return ("absorption fails", a, b)
    return None


def satisfies_presentation(host, pres, assignment, opaque_resolver=None):
    """Evaluate every relation of the presentation under the assignment.

    Returns None on success, else (index, lhs, rhs, value_lhs, value_rhs) of
    the first failing relation."""
    missing = [g for g in pres.generators if g not in assignment]
    if missing:
        raise TermError(f"assignment missing generator(s) {missing}")
    for i, (lhs, rhs) in enumerate(pres.relations):
        va = eval_term(lhs, assignment, host, opaque_resolver)
        vb = eval_term(rhs, assignment, host, opaque_resolver)
        if not host.equal(va, vb):
            return (i, lhs, rhs, va, vb)
    return None


def check_strengthening(host, pres_plus, entry, assignment):
    """Check the defining conditions of a strengthening on one model.

    If the assignment models the strengthened presentation, every reassigned
    generator's term must evaluate back to the generator's own value."""
    if satisfies_presentation(host, pres_plus, assignment) is not None:
        return None  # not a model of the strengthened presentation; nothing to check
    for sym, term in entry.assignments:
        v = eval_term(term, assignment, host)
        if not host.equal(v, assignment[sym]):
            return (sym, term, v, assignment[sym])
    return None


def check_nearrow(host, xs, ys):
    """The perspectivity-up formula between two equal-length element tuples:
    y_i = x_i + prod(y) and x_i = y_i * sum(x) for every i."""
    xs, ys = list(xs), list(ys)
    if len(xs) != len(ys):
        raise LatticeError("tuple length mismatch")
    prod_y = None
    for y in ys:
        prod_y = y if prod_y is None else host.meet(prod_y, y)
    sum_x = None
    for x in xs:
        sum_x = x if sum_x is None else host.join(sum_x, x)
    for x, y in zip(xs, ys):
        if not host.equal(y, host.join(x, prod_y)):
            return False
        if not host.equal(x, host.meet(y, sum_x)):
            return False
    return True


def generated_sublattice(oracle, seeds, cap=DEFAULT_SIZE_CAP):
    """Close the seeds under binary join and meet; return the resulting
    explicit lattice together with the oracle handle of each element.

    Uses oracle.key for deduplication when available."""
    keyed = hasattr(oracle, "key")

    def key_of(h):
        return oracle.key(h) if keyed else None

    handles = []
    index = {}

    def add(h):
        if keyed:
            k = key_of(h)
            if k in index:
                return index[k]
        else:
            for i, g in enumerate(handles):
                if oracle.equal(g, h):
                    return i
            k = None
        i = len(handles)
        handles.append(h)
        if keyed:
            index[k] = i
        return i

    seeds = list(seeds)
    for s in seeds:
        before = len(handles)
        j = add(s)
        if j < before:
            raise LatticeError("seeds must be pairwise distinct under oracle.equal")

    join_idx = {}
    meet_idx = {}
    done = 0  # pairs (a, b) with b < done are fully processed
    while done < len(handles):
        b = done
        done += 1
        for a in range(b + 1):
            j = add(oracle.join(handles[a], handles[b]))
            m = add(oracle.meet(handles[a], handles[b]))
            join_idx[(a, b)] = j
            meet_idx[(a, b)] = m
            if len(handles) > cap:
                raise BudgetExceeded(len(handles))
    n = len(handles)
    join = np.zeros((n, n), dtype=np.int32)
    meet = np.zeros((n, n), dtype=np.int32)
    for a in range(n):
        join[a, a] = meet[a, a] = a
        for b in range(a + 1, n):
            join[a, b] = join[b, a] = join_idx[(a, b)]
            meet[a, b] = meet[b, a] = meet_idx[(a, b)]
    labels = [oracle.label(h) if hasattr(oracle, "label") else str(h) for h in handles]
    return FiniteLattice.from_tables(join, meet, labels=labels), handles
