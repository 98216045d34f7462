"""The von Neumann coordinate ring of a frame: ring structure on the common
complements of the second axis inside the span of the first two, with the
spoke as unit and the first axis as zero.

The addition and multiplication terms route through the auxiliary third axis;
they are validated against an independent ring oracle (the graph map of a
canonical frame) by the acceptance suite before anything downstream trusts
them."""

from __future__ import annotations

from dataclasses import dataclass

from .frames import FrameConfig, FrameError, derived_elements, is_j_stable, upper_reduce
from .lattice import eval_term
from .terms import Const, Var, jn, mt


class CoordinateError(ValueError):
    pass


# operation terms over variables x, y and the frame symbols z1, z3, z4 (axes)
# and z13, z14, z34 (spokes); axes named 1, 3 with auxiliary 4


def mul_term():
    inner = jn(
        mt(jn(Var("x"), Const("z34")), jn(Const("z1"), Const("z4"))),
        mt(jn(Var("y"), Const("z14")), jn(Const("z3"), Const("z4"))),
    )
    return mt(jn(Const("z1"), Const("z3")), inner)


def add_term():
    y4 = mt(jn(Var("y"), Const("z34")), jn(Const("z1"), Const("z4")))
    inner = jn(mt(jn(Var("x"), Const("z4")), jn(y4, Const("z3"))), Const("z34"))
    return mt(jn(Const("z1"), Const("z3")), inner)


class CoordRing:
    """Coordinate ring of a frame containing axes (i, j) with auxiliary k.

    Works on any frame whose axis tuple contains at least three axes; by
    default the ring lives on (first, third, fourth) for a 4-frame and on the
    frame's first/second/third axes otherwise."""

    def __init__(self, host, frame: FrameConfig, triple=None, candidates=None):
        self.host = host
        frame = derived_elements(frame, check=False)
        if triple is None:
            triple = (1, 3, 4) if 4 in frame.axes and 3 in frame.axes else frame.axes[:3]
        if len(triple) != 3 or any(t not in frame.axes for t in triple):
            raise CoordinateError(f"invalid axis triple {triple}")
        self.frame = frame
        self.triple = tuple(triple)
        self.candidates = list(candidates) if candidates is not None else None

    # -- plumbing -----------------------------------------------------------
    def _assignment(self, swap=False, **vals):
        i, j, k = self.triple
        if swap:
            j, k = k, j
        F = self.frame
        out = {
            "z1": F.a[i], "z3": F.a[j], "z4": F.a[k],
            "z13": F.spoke(i, j), "z14": F.spoke(i, k), "z34": F.spoke(j, k),
        }
        out.update(vals)
        return out

    @property
    def zero(self):
        return self.frame.a[self.triple[0]]

    @property
    def one(self):
        i, j, _ = self.triple
        return self.frame.spoke(i, j)

    def in_domain(self, r):
        h = self.host
        i, j, _ = self.triple
        F = self.frame
        return h.equal(h.meet(r, F.a[j]), F.bot) and h.equal(
            h.join(r, F.a[j]), h.join(F.a[i], F.a[j])
        )

    def domain(self, candidates=None):
        """All elements r with r*a_j = bot and r + a_j = a_i + a_j."""
        if candidates is None:
            candidates = self.candidates
        if candidates is None:
            if not hasattr(self.host, "elements"):
                raise CoordinateError("host not enumerable; supply candidates")
            candidates = self.host.elements()
        return [r for r in candidates if self.in_domain(r)]

    def _check_args(self, *rs):
        for r in rs:
            if not self.in_domain(r):
                raise CoordinateError("argument outside the coordinate domain")

    # -- arithmetic -----------------------------------------------------------
    def mul(self, r, s, check=True):
        if check:
            self._check_args(r, s)
        return eval_term(mul_term(), self._assignment(x=r, y=s), self.host)

    def add(self, r, s, check=True):
        if check:
            self._check_args(r, s)
        return eval_term(add_term(), self._assignment(x=r, y=s), self.host)

    def neg(self, r, candidates=None):
        """Solve r (+) t = zero over the domain by search."""
        self._check_args(r)
        for t in self.domain(candidates):
            if self.host.equal(self.add(r, t, check=False), self.zero):
                return t
        raise CoordinateError("no additive inverse found (domain incomplete?)")

    def n_times(self, n):
        """n-fold sum of the auxiliary spoke inside the (i, k)-ring: the
        characteristic probe; uses the addition term with axes j and k
        exchanged so the spoke c_ik plays the unit."""
        if n < 1:
            raise CoordinateError("n must be >= 1")
        i, j, k = self.triple
        c14 = self.frame.spoke(i, k)
        acc = c14
        for _ in range(n - 1):
            acc = eval_term(add_term(), self._assignment(swap=True, x=c14, y=acc), self.host)
        return acc

    def has_characteristic(self, p):
        return self.host.equal(self.n_times(p), self.zero)

    # -- units and stability ----------------------------------------------------
    def is_unit(self, r):
        h = self.host
        i, j, _ = self.triple
        F = self.frame
        self._check_args(r)
        return h.equal(h.meet(r, F.a[i]), F.bot) and h.equal(
            h.join(r, F.a[i]), h.join(F.a[i], F.a[j])
        )

    def inverse(self, r, candidates=None):
        """Two-sided inverse by exhaustive search over the domain."""
        if not self.is_unit(r):
            raise CoordinateError("element is not a unit")
        one = self.one
        for t in self.domain(candidates):
            if self.host.equal(self.mul(r, t, check=False), one) and self.host.equal(
                self.mul(t, r, check=False), one
            ):
                return t
        raise CoordinateError("no inverse found (domain incomplete?)")

    def units(self, candidates=None):
        return [r for r in self.domain(candidates) if self.is_unit(r)]

    def stable_subgroup(self, candidates=None):
        """Units that are stable along the (i, j)-transport, verified closed
        under multiplication and inverse."""
        i, j, _ = self.triple
        out = []
        for r in self.units(candidates):
            ok, _ = is_j_stable(self.host, self.frame, r, j)
            if ok:
                out.append(r)
        keyf = (lambda x: self.host.key(x)) if hasattr(self.host, "key") else id
        keys = {keyf(r) for r in out}
        for r in out:
            if keyf(self.inverse(r, candidates)) not in keys:
                raise CoordinateError("stable units not closed under inverse")
            for s in out:
                if keyf(self.mul(r, s)) not in keys:
                    raise CoordinateError("stable units not closed under product")
        return out

    def beta(self, b):
        """The reduction homomorphism r -> r + bottom of the raised frame,
        landing in the coordinate ring of the frame raised by b."""
        h = self.host
        i = self.triple[0]
        F = self.frame
        if not (h.leq(F.bot, b) and h.leq(b, F.a[i])):
            raise CoordinateError("parameter must lie between the bottom and the first axis")
        raised = upper_reduce(F, b)
        target = CoordRing(self.host, raised, self.triple)

        def beta_b(r):
            return h.join(r, raised.bot)

        return beta_b, target

    def ring_dump(self, candidates=None):
        dom = self.domain(candidates)
        lab = (lambda x: self.host.label(x)) if hasattr(self.host, "label") else str
        idx = {self.host.key(r): i for i, r in enumerate(dom)}
        add = [[idx[self.host.key(self.add(r, s))] for s in dom] for r in dom]
        mul = [[idx[self.host.key(self.mul(r, s))] for s in dom] for r in dom]
        units = [i for i, r in enumerate(dom) if self.is_unit(r)]
        stable = []
        try:
            stable = [idx[self.host.key(r)] for r in self.stable_subgroup(candidates)]
        except Exception:
            stable = None
        return {
            "domain": [lab(r) for r in dom],
            "add": add,
            "mul": mul,
            "units": units,
            "stable": stable,
        }
