"""Frames, skew frames and towers: presentations, configurations in a host
lattice, derived elements, perspectivities, reductions, and stability.

A FrameConfig is a named family of host elements indexed by an ordered axis
tuple; the first axis plays the distinguished role in the defining relations.
Reductions come in three flavours sharing one setup: the two-parameter
reduction squeezes the frame between levels b and d (identity at b = bottom,
d = first axis), raising the bottom (upper reduction) and clipping the top
(lower reduction) are the one-parameter specializations."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

from .lattice import check_nearrow, eval_term
from .terms import Const, Presentation, Term, Var, jn, mt


class FrameError(ValueError):
    pass


# generator naming: axis elements a<i>, spokes c<i><j>, bottom abot; tower
# levels append _<k>


def a_name(i, level=None):
    return f"a{i}" if level is None else f"a{i}_{level}"


def c_name(i, j, level=None):
    i, j = min(i, j), max(i, j)
    return f"c{i}{j}" if level is None else f"c{i}{j}_{level}"


def bot_name(level=None):
    return "abot" if level is None else f"abot_{level}"


@dataclass(frozen=True)
class FrameConfig:
    """Elements realizing a frame in a host lattice.

    `a` maps axis label -> element, `c` maps (i, j) with i < j -> element;
    the spokes (first_axis, j) must be present, the remaining c are derived
    on demand."""

    host: object
    axes: tuple
    bot: object
    a: dict
    c: dict

    @property
    def order(self):
        return len(self.axes)

    def spoke(self, i, j):
        key = (min(i, j), max(i, j))
        if key not in self.c:
            raise FrameError(f"c{key} not available (derive first)")
        return self.c[key]

    def top(self):
        acc = self.bot
        for i in self.axes:
            acc = self.host.join(acc, self.a[i])
        return acc

    def sum_axes(self, which):
        acc = self.bot
        for i in which:
            acc = self.host.join(acc, self.a[i])
        return acc

    def elements(self):
        """All named elements: bottom, axes, available spokes."""
        out = {"abot": self.bot}
        for i in self.axes:
            out[f"a{i}"] = self.a[i]
        for (i, j), v in sorted(self.c.items()):
            out[f"c{i}{j}"] = v
        return out

    def element_list(self):
        return [v for _, v in sorted(self.elements().items())]

    def subframe(self, axes):
        """Restrict to a subset of the axes (spokes must already exist)."""
        axes = tuple(axes)
        c = {}
        for i, j in itertools.combinations(sorted(axes), 2):
            if (i, j) in self.c:
                c[(i, j)] = self.c[(i, j)]
        return replace(self, axes=axes, a={i: self.a[i] for i in axes}, c=c)

    def translate(self, x):
        """The frame with every element joined with x (x + this frame)."""
        jx = self.host.join
        return replace(
            self,
            bot=jx(self.bot, x),
            a={i: jx(v, x) for i, v in self.a.items()},
            c={k: jx(v, x) for k, v in self.c.items()},
        )


def check_frame_axioms(F: FrameConfig):
    """The defining relations relative to the first axis: axes independent
    over the bottom, each spoke a common complement of its two axes.

    Returns None or a description of the first failure."""
    h = F.host
    x1 = F.axes[0]
    for t, j in enumerate(F.axes[1:], start=1):
        prev = F.sum_axes(F.axes[:t])
        if not h.equal(F.bot, h.meet(F.a[j], prev)):
            return f"a{j} meets earlier axes above the bottom"
    for j in F.axes[1:]:
        cc = F.spoke(x1, j)
        if not h.equal(F.bot, h.meet(F.a[x1], cc)):
            return f"a{x1}*c{x1}{j} is not the bottom"
        if not h.equal(F.bot, h.meet(F.a[j], cc)):
            return f"a{j}*c{x1}{j} is not the bottom"
        s = h.join(F.a[x1], F.a[j])
        if not h.equal(s, h.join(F.a[x1], cc)):
            return f"a{x1}+c{x1}{j} differs from a{x1}+a{j}"
        if not h.equal(s, h.join(F.a[j], cc)):
            return f"a{j}+c{x1}{j} differs from a{x1}+a{j}"
    return None


def derived_elements(F: FrameConfig, check=True) -> FrameConfig:
    """Fill in all spokes c_ij = (a_i + a_j)(c_1i + c_1j) and verify the
    derived-frame identities (sum/meet of axis sets, complement relations,
    and the spoke triangle identity)."""
    h = F.host
    x1 = F.axes[0]
    c = dict(F.c)
    for i, j in itertools.combinations(F.axes[1:], 2):
        if (min(i, j), max(i, j)) in c:
            continue
        val = h.meet(
            h.join(F.a[i], F.a[j]),
            h.join(c[(min(x1, i), max(x1, i))], c[(min(x1, j), max(x1, j))]),
        )
        c[(min(i, j), max(i, j))] = val
    out = replace(F, c=c)
    if check:
        err = verify_derived_identities(out)
        if err:
            raise FrameError(err)
    return out


def verify_derived_identities(F: FrameConfig):
    h = F.host
    fail = check_frame_axioms(F)
    if fail:
        return fail
    n = F.order
    # sum-meet identity over all axis subsets (exhaustive for n <= 4)
    axis_sets = list(itertools.chain.from_iterable(
        itertools.combinations(F.axes, r) for r in range(n + 1)
    ))
    for I in axis_sets:
        for J in axis_sets:
            lhs = h.meet(F.sum_axes(I), F.sum_axes(J))
            common = tuple(i for i in I if i in J)
            rhs = F.sum_axes(common) if common else F.bot
            if not h.equal(lhs, rhs):
                return f"sum-meet identity fails for I={I}, J={J}"
    for i, j in itertools.combinations(F.axes, 2):
        cij = F.spoke(i, j)
        if not h.equal(h.join(F.a[i], cij), h.join(F.a[i], F.a[j])):
            return f"a{i}+c{i}{j} differs from a{i}+a{j}"
        if not h.equal(h.meet(F.a[i], cij), F.bot):
            return f"a{i}*c{i}{j} is not the bottom"
        if not h.equal(h.meet(F.a[j], cij), F.bot):
            return f"a{j}*c{i}{j} is not the bottom"
    for i, j, k in itertools.permutations(F.axes, 3):
        lhs = F.spoke(i, k)
        rhs = h.meet(h.join(F.a[i], F.a[k]), h.join(F.spoke(i, j), F.spoke(j, k)))
        if not h.equal(lhs, rhs):
            return f"triangle identity fails for ({i},{j},{k})"
    return None


def perspectivity(F: FrameConfig, k, l, x):
    """pi_kl(x) = (x + c_kl) * sum of axes other than l; an isomorphism of
    [bot, sum_{i != k} a_i] onto [bot, sum_{i != l} a_i]."""
    h = F.host
    dom_top = F.sum_axes([i for i in F.axes if i != k])
    if not h.leq(x, dom_top):
        raise FrameError("element outside the perspectivity domain")
    return h.meet(h.join(x, F.spoke(k, l)), F.sum_axes([i for i in F.axes if i != l]))


# ---------------------------------------------------------------------------
# presentations


def frame_presentation(n, level=None) -> Presentation:
    """The n-frame presentation: bottom, n axes, spokes from the first axis."""
    if n < 2:
        raise FrameError("frames need at least two axes")
    gens = [bot_name(level)] + [a_name(i, level) for i in range(1, n + 1)]
    gens += [c_name(1, j, level) for j in range(2, n + 1)]
    A = {i: Const(a_name(i, level)) for i in range(1, n + 1)}
    bot = Const(bot_name(level))
    rels = []
    for j in range(2, n + 1):
        rels.append((bot, mt(A[j], jn(*[A[i] for i in range(1, j)]))))
    for j in range(2, n + 1):
        C = Const(c_name(1, j, level))
        rels.append((bot, mt(A[1], C)))
        rels.append((bot, mt(A[j], C)))
        rels.append((jn(A[1], A[j]), jn(A[1], C)))
        rels.append((jn(A[1], A[j]), jn(A[j], C)))
    return Presentation(tuple(gens), tuple(rels)).check()


def two_frame_relations(bot: Term, a1: Term, a2: Term, c12: Term):
    """Relations stating that (bot, a1, a2, c12) is a 2-frame, on terms."""
    return [
        (bot, mt(a2, a1)),
        (bot, mt(a1, c12)),
        (bot, mt(a2, c12)),
        (jn(a1, a2), jn(a1, c12)),
        (jn(a1, a2), jn(a2, c12)),
    ]


def nearrow_relations(xs, ys):
    """The perspectivity-up formula between equal-length term tuples."""
    prod_y = mt(*ys) if len(ys) > 1 else ys[0]
    sum_x = jn(*xs) if len(xs) > 1 else xs[0]
    rels = []
    for x, y in zip(xs, ys):
        rels.append((y, jn(x, prod_y)))
        rels.append((x, mt(y, sum_x)))
    return rels


def frame_assignment(F: FrameConfig, level=None, names=None):
    """Assignment mapping presentation generator names to config elements."""
    out = {bot_name(level): F.bot}
    for i in F.axes:
        out[a_name(i, level)] = F.a[i]
    for (i, j), v in F.c.items():
        out[c_name(i, j, level)] = v
    return out


# ---------------------------------------------------------------------------
# reduction


def reduction_setup_terms(n, x="x", y="y", level=None):
    """The reduction setup for n-frames as terms over the generators plus
    parameters x (new bottom level) and g (new top level).

    abot'(x,y) = x + sum_j a_j(x + c_1j); atop'(x,y) likewise from y; every
    other generator g goes to g*atop' + abot'."""
    X, Y = Var(x), Var(y)
    A = {i: Const(a_name(i, level)) for i in range(1, n + 1)}
    C = {j: Const(c_name(1, j, level)) for j in range(2, n + 1)}
    abot_t = jn(X, *[mt(A[j], jn(X, C[j])) for j in range(2, n + 1)])
    atop_t = jn(Y, *[mt(A[j], jn(Y, C[j])) for j in range(2, n + 1)])
    out = {bot_name(level): abot_t}
    for i in range(1, n + 1):
        out[a_name(i, level)] = jn(mt(A[i], atop_t), abot_t)
    for j in range(2, n + 1):
        out[c_name(1, j, level)] = jn(mt(C[j], atop_t), abot_t)
    return out


def reduce_frame(F: FrameConfig, b, d) -> FrameConfig:
    """Two-parameter reduction: the frame squeezed between the levels of b
    and d, for bot <= b <= d <= a_1.  Equals F when b = bot and d = a_1.

    Computed by evaluating the reduction setup terms, so the syntactic setup
    and the semantic arithmetic cannot drift apart."""
    h = F.host
    x1 = F.axes[0]
    if not (h.leq(F.bot, b) and h.leq(b, d) and h.leq(d, F.a[x1])):
        raise FrameError("need bot <= b <= d <= first axis")
    terms = reduction_setup_terms(F.order, level=None)
    # generator names in the terms are canonical a1..an/c1j; remap by position
    name_of = {a_name(t + 1): F.a[i] for t, i in enumerate(F.axes)}
    name_of[bot_name()] = F.bot
    for t, j in enumerate(F.axes[1:], start=2):
        name_of[c_name(1, t)] = F.spoke(x1, j)
    assignment = dict(name_of)
    assignment["x"] = b
    assignment["y"] = d
    new_bot = eval_term(terms[bot_name()], assignment, h)
    new_a = {}
    for t, i in enumerate(F.axes):
        new_a[i] = eval_term(terms[a_name(t + 1)], assignment, h)
    new_c = {}
    for t, j in enumerate(F.axes[1:], start=2):
        key = (min(x1, j), max(x1, j))
        new_c[key] = eval_term(terms[c_name(1, t)], assignment, h)
    return replace(F, bot=new_bot, a=new_a, c=new_c)


def upper_reduce(F: FrameConfig, b1) -> FrameConfig:
    """Raise the bottom: with b_j = a_j(b_1 + c_1j) and b = sum b_j, the
    frame (b, b + a_i, b + c_ij)."""
    h = F.host
    x1 = F.axes[0]
    if not (h.leq(F.bot, b1) and h.leq(b1, F.a[x1])):
        raise FrameError("parameter must lie between the bottom and the first axis")
    bj = _transported_chain(F, b1)
    b = F.bot
    for v in bj.values():
        b = h.join(b, v)
    return replace(
        F,
        bot=b,
        a={i: h.join(b, F.a[i]) for i in F.axes},
        c={k: h.join(b, v) for k, v in F.c.items()},
    )


def lower_reduce(F: FrameConfig, b1) -> FrameConfig:
    """Clip the top: the frame (bot, b_i, b_ij) with b_ij = (b_i + b_j)c_ij."""
    h = F.host
    x1 = F.axes[0]
    if not (h.leq(F.bot, b1) and h.leq(b1, F.a[x1])):
        raise FrameError("parameter must lie between the bottom and the first axis")
    bj = _transported_chain(F, b1)
    new_c = {}
    for (i, j), cij in F.c.items():
        new_c[(i, j)] = h.meet(h.join(bj[i], bj[j]), cij)
    return replace(F, a=bj, c=new_c)


def _transported_chain(F: FrameConfig, b1):
    """b_1 transported to every axis: b_j = a_j(b_1 + c_1j)."""
    h = F.host
    x1 = F.axes[0]
    out = {x1: b1}
    for j in F.axes[1:]:
        out[j] = h.meet(F.a[j], h.join(b1, F.spoke(x1, j)))
    return out


def upper_lower_reduce(F: FrameConfig, b1, direction) -> FrameConfig:
    if direction == "upper":
        return upper_reduce(F, b1)
    if direction == "lower":
        return lower_reduce(F, b1)
    raise FrameError("direction must be 'upper' or 'lower'")


def is_j_stable(host, F: FrameConfig, s, j):
    """s is j-stable: boundary conditions plus s + b_1 = s + b_j for every
    b_1 in the interval [bot, a_1] (enumerated through the host).

    Returns (True, None) or (False, witness)."""
    x1 = F.axes[0]
    if j == x1 or j not in F.axes:
        raise FrameError("j must be a non-first axis")
    a1, aj = F.a[x1], F.a[j]
    for other, tag in ((a1, x1), (aj, j)):
        if not host.equal(host.meet(s, other), F.bot):
            return False, f"s*a{tag} is not the bottom"
        if not host.equal(host.join(s, other), host.join(a1, aj)):
            return False, f"s+a{tag} differs from a{x1}+a{j}"
    c1j = F.spoke(x1, j)
    for b1 in host.interval_elements(F.bot, a1):
        bj = host.meet(aj, host.join(b1, c1j))
        if not host.equal(host.join(s, b1), host.join(s, bj)):
            return False, b1
    return True, None


def characteristic_reduce(F: FrameConfig, p) -> FrameConfig:
    """Clip a 4-frame at a_1(p (x) c_14): the result has characteristic p and
    equals F when F already has characteristic p."""
    from .coordinates import CoordRing  # local import; coordinates builds on frames

    if F.order != 4:
        raise FrameError("characteristic reduction needs a 4-frame")
    F = derived_elements(F, check=False)
    cr = CoordRing(F.host, F)
    target = cr.n_times(p)
    b1 = F.host.meet(F.a[F.axes[0]], target)
    return lower_reduce(F, b1)


# ---------------------------------------------------------------------------
# skew frames and towers


@dataclass(frozen=True)
class SkewFrameConfig:
    """A skew (m, m-1)-frame: an m-frame `prime` over the same bottom as an
    (m-1)-frame `base` whose lower reduction at a'_1 the prime frame extends;
    the last prime axis is the skew axis."""

    prime: FrameConfig
    base: FrameConfig

    @property
    def host(self):
        return self.prime.host

    @property
    def skew_axis(self):
        return self.prime.axes[-1]

    def bottom(self):
        return self.prime.bot

    def part_32(self):
        """The skew (3,2)-frame obtained by dropping the second axis."""
        keep_p = tuple(i for i in self.prime.axes if i != self.prime.axes[1])
        keep_b = tuple(i for i in self.base.axes if i != self.base.axes[1])
        return SkewFrameConfig(
            prime=derived_elements(self.prime, check=False).subframe(keep_p),
            base=derived_elements(self.base, check=False).subframe(keep_b),
        )

    def element_list(self):
        return self.prime.element_list() + self.base.element_list()

    def translate(self, x):
        return SkewFrameConfig(self.prime.translate(x), self.base.translate(x))


def check_skew(S: SkewFrameConfig):
    """Skew-frame conditions: both frames are frames over a shared bottom,
    the non-skew part of the prime frame is the clip of the base frame at
    a'_1, and the 2-frame condition on the skew axis holds."""
    h = S.host
    if not h.equal(S.prime.bot, S.base.bot):
        return "the two frames must share a bottom"
    Fp = derived_elements(S.prime, check=False)
    Fb = derived_elements(S.base, check=False)
    err = verify_derived_identities(Fp)
    if err:
        return f"prime frame: {err}"
    err = verify_derived_identities(Fb)
    if err:
        return f"base frame: {err}"
    x1 = S.base.axes[0]
    ap1 = S.prime.a[S.prime.axes[0]]
    clipped = lower_reduce(Fb, ap1)
    inner = Fp.subframe(tuple(i for i in S.prime.axes if i != S.skew_axis))
    if not _frames_equal(inner, clipped):
        return "prime frame without the skew axis is not the clip of the base frame"
    a1 = S.base.a[x1]
    sa = S.skew_axis
    ax = Fp.a[sa]
    cx = Fp.spoke(S.prime.axes[0], sa)
    b = h.meet(a1, h.join(ax, cx))
    probe = FrameConfig(
        host=h, axes=(1, 2), bot=S.prime.bot,
        a={1: b, 2: ax}, c={(1, 2): cx},
    )
    err = check_frame_axioms(probe)
    if err:
        return f"skew-axis 2-frame condition: {err}"
    return None


def _frames_equal(F1: FrameConfig, F2: FrameConfig):
    h = F1.host
    if F1.axes != F2.axes:
        return False
    if not h.equal(F1.bot, F2.bot):
        return False
    for i in F1.axes:
        if not h.equal(F1.a[i], F2.a[i]):
            return False
    for key in F1.c:
        if key in F2.c and not h.equal(F1.c[key], F2.c[key]):
            return False
    return True


def skew_lower_reduce(S: SkewFrameConfig, b, d) -> SkewFrameConfig:
    """Squeeze toward the middle: raise the prime frame's bottom by b, clip
    the base frame at d, and lift the clipped base onto the raised bottom,
    for bot <= b <= a'_1 <= d <= a_1.  Identity at b = bot, d = a_1."""
    h = S.host
    ap1 = S.prime.a[S.prime.axes[0]]
    a1 = S.base.a[S.base.axes[0]]
    if not (h.leq(S.prime.bot, b) and h.leq(b, ap1)):
        raise FrameError("b must lie between the bottom and the first prime axis")
    if not (h.leq(ap1, d) and h.leq(d, a1)):
        raise FrameError("d must lie between the first prime axis and the first base axis")
    prime = upper_reduce(derived_elements(S.prime, check=False), b)
    base = lower_reduce(derived_elements(S.base, check=False), d).translate(prime.bot)
    return SkewFrameConfig(prime=prime, base=base)


def skew_upper_reduce(S: SkewFrameConfig, b) -> SkewFrameConfig:
    """Raise both frames' bottoms by b (the base lifted onto the raised
    prime bottom), for bot <= b <= a'_1.  Identity at b = bot."""
    h = S.host
    ap1 = S.prime.a[S.prime.axes[0]]
    if not (h.leq(S.prime.bot, b) and h.leq(b, ap1)):
        raise FrameError("b must lie between the bottom and the first prime axis")
    prime = upper_reduce(derived_elements(S.prime, check=False), b)
    base = upper_reduce(derived_elements(S.base, check=False), b).translate(prime.bot)
    return SkewFrameConfig(prime=prime, base=base)


@dataclass(frozen=True)
class TowerConfig:
    """Skew frames linked level by level through the perspectivity-up chain."""

    skews: tuple

    @property
    def n(self):
        return len(self.skews)

    @property
    def host(self):
        return self.skews[0].host

    def level(self, k):
        return self.skews[k - 1]

    def chain_tuples(self):
        """The (3,2)-parts and their second-axis translates, interleaved in
        tower order."""
        out = []
        for S in self.skews:
            part = S.part_32()
            lo = part.element_list()
            a2 = S.base.a[S.base.axes[1]]
            hi = [self.host.join(a2, v) for v in lo]
            out.append(lo)
            out.append(hi)
        return out

    def element_map(self):
        """name -> element for every frame component of every level, primes
        marking the finer frame."""
        out = {}
        for k, S in enumerate(self.skews, start=1):
            for name, v in S.base.elements().items():
                out[f"{name}_{k}"] = v
            for name, v in S.prime.elements().items():
                if name == "abot":
                    prim = "abot'"
                elif name.startswith("a"):
                    prim = f"a{name[1:]}'"
                else:
                    prim = f"c{name[1:]}'"
                out[f"{prim}_{k}"] = v
        return out


def check_tower(T: TowerConfig):
    """Every level a skew frame; the interleaved (3,2)-chain satisfies the
    perspectivity-up relation for every pair of positions."""
    for k, S in enumerate(T.skews, start=1):
        err = check_skew(S)
        if err:
            return f"level {k}: {err}"
    chain = T.chain_tuples()
    for i in range(len(chain)):
        for j in range(i + 1, len(chain)):
            if not check_nearrow(T.host, chain[i], chain[j]):
                return f"chain relation fails between positions {i} and {j}"
    return None


def tower_reduce(T: TowerConfig, m, b, d=None) -> TowerConfig:
    """Reduce the tower at level m.

    With d given (lower reduction): level m is squeezed between b and d;
    levels below transport the parameters down through a^k_1, levels above
    transport them up through their bottoms.  Without d (upper reduction):
    all levels' bottoms are raised by the transported b."""
    h = T.host
    S_m = T.level(m)
    ap1 = S_m.prime.a[S_m.prime.axes[0]]
    if not (h.leq(S_m.bottom(), b) and h.leq(b, ap1)):
        raise FrameError("b must lie between the level bottom and its first prime axis")
    if d is not None:
        a1 = S_m.base.a[S_m.base.axes[0]]
        if not (h.leq(ap1, d) and h.leq(d, a1)):
            raise FrameError("d must lie between the first prime axis and the first base axis")
    out = []
    for k, S in enumerate(T.skews, start=1):
        a1_k = S.base.a[S.base.axes[0]]
        if k < m:
            bk = h.meet(a1_k, b)
            dk = h.meet(a1_k, d) if d is not None else None
        elif k == m:
            bk, dk = b, d
        else:
            bk = h.join(b, S.bottom())
            dk = h.join(d, S.bottom()) if d is not None else None
        if d is not None:
            out.append(skew_lower_reduce(S, bk, dk))
        else:
            out.append(skew_upper_reduce(S, bk))
    return TowerConfig(skews=tuple(out))


# ---------------------------------------------------------------------------
# tower presentations


def _delta_presentation(n) -> Presentation:
    gens = []
    rels = []
    for k in range(1, n + 1):
        bot = Const(bot_name(k))
        a1, a2 = Const(a_name(1, k)), Const(a_name(2, k))
        c12 = Const(c_name(1, 2, k))
        gens += [bot_name(k), a_name(1, k), a_name(2, k), c_name(1, 2, k)]
        rels += two_frame_relations(bot, a1, a2, c12)
    for k in range(1, n):
        xs = (jn(Const(a_name(1, k)), Const(a_name(2, k))), Const(a_name(2, k)))
        ys = (Const(a_name(1, k + 1)), Const(bot_name(k + 1)))
        rels += nearrow_relations(xs, ys)
    pres = Presentation(tuple(gens), tuple(rels)).check()
    economy = (a_name(1, 1), a_name(2, n)) + tuple(c_name(1, 2, k) for k in range(1, n + 1))
    pres.notes["economy"] = economy
    pres.notes["kind"] = "two_frame_tower"
    return pres


def _chain_presentation(bottom, top) -> Presentation:
    return Presentation(
        (bottom, top), ((Const(bottom), mt(Const(bottom), Const(top))),)
    ).check()


def two_frame_setup_assignments(bot_s, a1_s, a2_s, c_s, x, y):
    """Reduction-setup terms for a named 2-frame with parameter terms x, y."""
    a1, a2, c = Const(a1_s), Const(a2_s), Const(c_s)
    abot_new = jn(x, mt(a2, jn(x, c)))
    atop_new = jn(y, mt(a2, jn(y, c)))
    return [
        (bot_s, abot_new),
        (a1_s, jn(mt(a1, atop_new), abot_new)),
        (a2_s, jn(mt(a2, atop_new), abot_new)),
        (c_s, jn(mt(c, atop_new), abot_new)),
    ]


def _reduced_level_bottom_term(k, x):
    """Bottom of level k after the setup reduction with lower parameter x:
    (x + abot_k) + a2_k((x + abot_k) + c12_k)."""
    bot = Const(bot_name(k))
    xk = jn(x, bot)
    return jn(xk, mt(Const(a_name(2, k)), jn(xk, Const(c_name(1, 2, k)))))


def _tower_setup_assignments(n, b, d, translate=None):
    """Per-level reduction-setup assignments for the two-frame tower, the
    parameters transported up through each level's bottom."""
    out = []
    for k in range(1, n + 1):
        bot_k = Const(bot_name(k))
        level = two_frame_setup_assignments(
            bot_name(k), a_name(1, k), a_name(2, k), c_name(1, 2, k),
            jn(b, bot_k), jn(d, bot_k),
        )
        if translate is not None:
            level = [(sym, jn(translate, t)) for sym, t in level]
        out.extend(level)
    return out


def _delta3_presentation(n) -> Presentation:
    from .terms import apply_strengthening, product_presentation

    delta = _delta_presentation(n)
    bot1 = bot_name(1)
    prod = product_presentation(delta, _chain_presentation(bot1, a_name(3, 1)), bottom=bot1)
    gens = prod.generators + (c_name(1, 3, 1),)
    pres = Presentation(gens, prod.base_relations, notes=dict(delta.notes))

    bot = Const(bot1)
    a1, a3, c13 = Const(a_name(1, 1)), Const(a_name(3, 1)), Const(c_name(1, 3, 1))
    # first strengthening: pull the new spoke into its sandwich
    pres = apply_strengthening(
        pres,
        [(c_name(1, 3, 1), mt(jn(c13, bot), jn(a1, a3)))],
        [(bot, mt(bot, c13)), (c13, mt(c13, jn(a1, a3)))],
    )
    # second strengthening: translate the squeezed tower by the spoke corner
    # and reseat the new axis; adds the 2-frame on (bot, a1, a3, c13)
    b = mt(a1, c13)
    d = mt(a1, jn(c13, a3))
    v_lo = mt(a3, c13)
    assignments = _tower_setup_assignments(n, b, d, translate=v_lo)
    u_lo = mt(Const(a_name(2, n)), _reduced_level_bottom_term(1, b))
    corner = jn(u_lo, b, v_lo)
    assignments.append((a_name(3, 1), jn(corner, a3)))
    assignments.append((c_name(1, 3, 1), jn(corner, c13)))
    pres = apply_strengthening(pres, assignments, two_frame_relations(bot, a1, a3, c13))
    pres.notes["economy"] = delta.notes["economy"] + (a_name(3, 1), c_name(1, 3, 1))
    pres.notes["kind"] = "three_frame_tower"
    return pres


def _omega_presentation(n) -> Presentation:
    from .terms import apply_strengthening, product_presentation

    delta3 = _delta3_presentation(n)
    bot1 = bot_name(1)
    a4 = "a4'_1"
    c14 = "c14'_1"
    prod = product_presentation(delta3, _chain_presentation(bot1, a4), bottom=bot1)
    gens = prod.generators + (c14,)
    pres = Presentation(gens, prod.base_relations, log=delta3.log, notes=dict(delta3.notes))

    bot = Const(bot1)
    a1 = Const(a_name(1, 1))
    A4, C14 = Const(a4), Const(c14)
    pres = apply_strengthening(
        pres,
        [(c14, mt(jn(C14, bot), jn(a1, A4)))],
        [(bot, mt(bot, C14)), (C14, mt(C14, jn(a1, A4)))],
    )
    # squeeze the three-frame tower below the new spoke and reseat the skew
    # axis; adds the 2-frame condition on (bot, a1(a4+c14), a4, c14)
    b = mt(a1, C14)
    v_hi = mt(A4, jn(a1, C14))
    assignments = _tower_setup_assignments(n, b, a1, translate=None)
    seen = {sym for sym, _ in assignments}
    extra = two_frame_setup_assignments(
        bot_name(1), a_name(1, 1), a_name(3, 1), c_name(1, 3, 1), b, a1
    )
    assignments += [(sym, t) for sym, t in extra if sym not in seen]
    u_lo = jn(mt(Const(a_name(2, n)), _reduced_level_bottom_term(1, b)),
              mt(Const(a_name(3, 1)), Const(c_name(1, 3, 1))))
    assignments.append((c14, jn(C14, u_lo)))
    assignments.append((a4, jn(u_lo, v_hi, b)))
    b_hat = mt(a1, jn(A4, C14))
    pres = apply_strengthening(
        pres, assignments, two_frame_relations(bot, b_hat, A4, C14)
    )
    pres.notes["economy"] = delta3.notes["economy"] + (a4, c14)
    pres.notes["kind"] = "skew_frame_tower"
    return pres


def tower_presentation(kind, n) -> Presentation:
    """Presentations of the three tower families, with strengthening logs
    reproducing their construction and an economy generating set recorded in
    the notes."""
    if n < 1:
        raise FrameError("towers need at least one level")
    if kind in ("delta", "2"):
        return _delta_presentation(n)
    if kind in ("delta3", "3"):
        return _delta3_presentation(n)
    if kind in ("omega", "4", "skew"):
        return _omega_presentation(n)
    raise FrameError(f"unknown tower kind {kind!r}")


def omega_assignment(T: TowerConfig):
    """Map the skew-tower presentation generators onto the canonical tower
    configuration."""
    h = T.host
    out = {}
    for k, S in enumerate(T.skews, start=1):
        out[bot_name(k)] = S.base.bot
        out[a_name(1, k)] = S.base.a[1]
        out[a_name(2, k)] = S.base.a[2]
        out[c_name(1, 2, k)] = S.base.spoke(1, 2)
    S1 = T.level(1)
    out[a_name(3, 1)] = S1.base.a[3]
    out[c_name(1, 3, 1)] = S1.base.spoke(1, 3)
    out["a4'_1"] = S1.prime.a[4]
    out["c14'_1"] = S1.prime.spoke(1, 4)
    return out
