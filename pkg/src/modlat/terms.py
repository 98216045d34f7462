"""Lattice-signature terms over two commutative idempotent monoid operations.

Terms are kept in a normal form (flattened, sorted, duplicate-free argument
lists) so that structural equality decides equality in the free algebra of
the variety with associative/commutative/idempotent join and meet.  Absorption
is deliberately *not* applied: it is a lattice law, not a law of this variety.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace


class TermError(ValueError):
    pass


class ParseError(TermError):
    def __init__(self, message, position):
        super().__init__(f"{message} at offset {position}")
        self.position = position


_KIND_RANK = {"var": 0, "const": 1, "join": 2, "meet": 3, "opaque": 4}


@dataclass(frozen=True)
class Term:
    """A term node.

    kind is one of "var", "const", "join", "meet", "opaque".  Leaves carry a
    name; join/meet carry >= 2 arguments; "opaque" is a named uninterpreted
    operation (used by the reduction compiler for term slots that are not
    synthesized) and keeps its argument order.
    """

    kind: str
    name: str = ""
    args: tuple = ()

    def key(self):
        return (_KIND_RANK[self.kind], self.name, tuple(a.key() for a in self.args))

    def symbols(self):
        """All variable/constant names occurring in the term."""
        if self.kind in ("var", "const"):
            return {self.name}
        out = set()
        for a in self.args:
            out |= a.symbols()
        return out

    def variables(self):
        if self.kind == "var":
            return {self.name}
        out = set()
        for a in self.args:
            out |= a.variables()
        return out

    def __str__(self):
        return render(self)


def Var(name):
    return Term("var", name)


def Const(name):
    return Term("const", name)


def Join(*args):
    return Term("join", "", tuple(args))


def Meet(*args):
    return Term("meet", "", tuple(args))


def Opaque(name, *args):
    return Term("opaque", name, tuple(args))


def normalize(t: Term) -> Term:
    """Normal form: flatten nested joins/meets, sort and deduplicate arguments.

    Idempotent, and two terms are equal in the free algebra iff their normal
    forms are identical.  Opaque nodes keep argument order (their semantics is
    not assumed commutative)."""
    if t.kind in ("var", "const"):
        return t
    args = tuple(normalize(a) for a in t.args)
    if t.kind == "opaque":
        return Term("opaque", t.name, args)
    flat = []
    for a in args:
        if a.kind == t.kind:
            flat.extend(a.args)
        else:
            flat.append(a)
    seen = {}
    for a in flat:
        seen.setdefault(a.key(), a)
    uniq = [seen[k] for k in sorted(seen)]
    if len(uniq) == 1:
        return uniq[0]
    if not uniq:
        raise TermError("empty join/meet")
    return Term(t.kind, "", tuple(uniq))


def jn(*args):
    return normalize(Join(*args))


def mt(*args):
    return normalize(Meet(*args))


def substitute(t: Term, sigma: dict) -> Term:
    """Replace every variable/constant by sigma[name] and renormalize.

    sigma must cover every symbol occurring in t."""
    if t.kind in ("var", "const"):
        if t.name not in sigma:
            raise TermError(f"unmapped symbol {t.name!r}")
        return sigma[t.name]
    return normalize(Term(t.kind, t.name, tuple(substitute(a, sigma) for a in t.args)))


def rename(t: Term, mapping: dict) -> Term:
    """Rename symbols (identity on symbols missing from the mapping)."""
    if t.kind in ("var", "const"):
        return Term(t.kind, mapping.get(t.name, t.name))
    return Term(t.kind, t.name, tuple(rename(a, mapping) for a in t.args))


def as_constants(t: Term, names=None) -> Term:
    """Turn variables into constants (all of them, or the given names)."""
    if t.kind == "var" and (names is None or t.name in names):
        return Const(t.name)
    if t.kind in ("var", "const"):
        return t
    return Term(t.kind, t.name, tuple(as_constants(a, names) for a in t.args))


# ---------------------------------------------------------------------------
# parsing / rendering
#
# term := sum ;  sum := prod ('+' prod)* ;  prod := atom ('*' atom | atom)* ;
# atom := IDENT | '(' term ')' ;  IDENT = [A-Za-z][A-Za-z0-9_']*

_TOKEN = re.compile(r"\s*(?:([A-Za-z][A-Za-z0-9_']*)|([+*()])|(\S))")


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        if m.group(3):
            raise ParseError(f"unexpected character {m.group(3)!r}", m.start(3))
        if m.group(1):
            tokens.append(("ident", m.group(1), m.start(1)))
        else:
            tokens.append((m.group(2), m.group(2), m.start(2)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens, constants):
        self.tokens = tokens
        self.i = 0
        self.constants = constants

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def sum(self):
        parts = [self.prod()]
        while self.peek()[0] == "+":
            self.take()
            parts.append(self.prod())
        return Join(*parts) if len(parts) > 1 else parts[0]

    def prod(self):
        parts = [self.atom()]
        while True:
            kind = self.peek()[0]
            if kind == "*":
                self.take()
                parts.append(self.atom())
            elif kind in ("ident", "("):
                parts.append(self.atom())
            else:
                break
        return Meet(*parts) if len(parts) > 1 else parts[0]

    def atom(self):
        kind, value, pos = self.take()
        if kind == "ident":
            if self.constants is not None and value in self.constants:
                return Const(value)
            return Var(value)
        if kind == "(":
            t = self.sum()
            kind2, _, pos2 = self.take()
            if kind2 != ")":
                raise ParseError("expected ')'", pos2)
            return t
        raise ParseError(f"unexpected token {value!r}" if value else "unexpected end of input", pos)


def parse_term(text: str, constants=None) -> Term:
    """Parse a term and return its normal form.

    Identifiers listed in `constants` become constant symbols, all others
    variables.  `constants=ALL` (any object with `__contains__` returning
    True) can be simulated by passing the generator set of a presentation."""
    parser = _Parser(_tokenize(text), constants)
    t = parser.sum()
    kind, value, pos = parser.peek()
    if kind != "end":
        raise ParseError(f"unexpected token {value!r}", pos)
    return normalize(t)


def render(t: Term) -> str:
    """Inverse of parse_term on normal forms; meets bind tighter than joins."""
    if t.kind in ("var", "const"):
        return t.name
    if t.kind == "join":
        return " + ".join(render(a) for a in t.args)
    if t.kind == "meet":
        parts = []
        for a in t.args:
            s = render(a)
            parts.append(f"({s})" if a.kind == "join" else s)
        return "*".join(parts)
    inner = ", ".join(render(a) for a in t.args)
    return f"{t.name}[{inner}]"


# ---------------------------------------------------------------------------
# presentations


@dataclass(frozen=True)
class LogEntry:
    """One strengthening step: simultaneous reassignments plus new relations."""

    assignments: tuple = ()  # ((symbol, Term), ...)
    relations: tuple = ()    # ((lhs, rhs), ...)


@dataclass(frozen=True)
class Presentation:
    """Generator symbols with relations between constant terms.

    `relations` always equals `base_relations` extended by the relations of
    every log entry, in order; `replay` re-derives it so the log can be
    audited.  Witness terms, when present, are indexed like the generators."""

    generators: tuple
    base_relations: tuple = ()
    log: tuple = ()
    witnesses: tuple = None
    notes: dict = field(default_factory=dict, compare=False)

    @property
    def relations(self):
        rels = list(self.base_relations)
        for entry in self.log:
            rels.extend(entry.relations)
        return tuple(rels)

    def check(self):
        gens = set(self.generators)
        if len(gens) != len(self.generators):
            raise TermError("duplicate generator symbol")
        for lhs, rhs in self.relations:
            for side in (lhs, rhs):
                bad = side.symbols() - gens
                if bad:
                    raise TermError(f"relation uses unknown symbol(s) {sorted(bad)}")
                if side.variables():
                    raise TermError("relations must be constant terms")
        return self

    def replay(self):
        """Relation set reproduced by replaying the log against the base."""
        rels = list(self.base_relations)
        for entry in self.log:
            rels.extend(entry.relations)
        return tuple(rels)

    def to_json(self):
        doc = {
            "generators": list(self.generators),
            "relations": [[_term_json(a), _term_json(b)] for a, b in self.relations],
            "log": [
                {
                    "assignments": [[s, _term_json(t)] for s, t in e.assignments],
                    "relations": [[_term_json(a), _term_json(b)] for a, b in e.relations],
                }
                for e in self.log
            ],
        }
        if self.witnesses is not None:
            doc["witnesses"] = [_term_json(t) for t in self.witnesses]
        if self.notes:
            doc["notes"] = {k: list(v) if isinstance(v, tuple) else v for k, v in self.notes.items()}
        return doc


def _term_json(t: Term):
    # grammar string when expressible, explicit node object otherwise
    if _grammar_expressible(t):
        return render(t)
    if t.kind in ("var", "const"):
        return {"kind": t.kind, "name": t.name}
    node = {"kind": t.kind, "args": [_term_json(a) for a in t.args]}
    if t.kind == "opaque":
        node["name"] = t.name
    return node


def _grammar_expressible(t: Term) -> bool:
    if t.kind == "opaque":
        return False
    return all(_grammar_expressible(a) for a in t.args)


def term_from_json(doc, constants=None) -> Term:
    if isinstance(doc, str):
        return parse_term(doc, constants)
    kind = doc["kind"]
    if kind in ("var", "const"):
        return Term(kind, doc["name"])
    args = tuple(term_from_json(a, constants) for a in doc["args"])
    if kind == "opaque":
        return Term("opaque", doc["name"], args)
    return normalize(Term(kind, "", args))


def presentation_from_json(doc) -> Presentation:
    gens = tuple(doc["generators"])
    rels = tuple(
        (term_from_json(a, gens), term_from_json(b, gens)) for a, b in doc["relations"]
    )
    log = tuple(
        LogEntry(
            assignments=tuple((s, term_from_json(t, gens)) for s, t in e.get("assignments", [])),
            relations=tuple((term_from_json(a, gens), term_from_json(b, gens)) for a, b in e.get("relations", [])),
        )
        for e in doc.get("log", [])
    )
    n_logged = sum(len(e.relations) for e in log)
    base = rels[: len(rels) - n_logged]
    pres = Presentation(generators=gens, base_relations=base, log=log)
    if doc.get("witnesses"):
        pres = replace(pres, witnesses=tuple(term_from_json(t, gens) for t in doc["witnesses"]))
    return pres.check()


def apply_strengthening(pres: Presentation, assignments, new_relations) -> Presentation:
    """Append a strengthening step: reassign generators (recorded, generators
    unchanged) and extend the relation set."""
    gens = set(pres.generators)
    norm_assign = []
    for sym, t in assignments:
        if sym not in gens:
            raise TermError(f"{sym!r} is not a generator")
        bad = t.symbols() - gens
        if bad:
            raise TermError(f"assignment for {sym!r} uses unknown symbol(s) {sorted(bad)}")
        norm_assign.append((sym, normalize(t)))
    norm_rels = []
    for lhs, rhs in new_relations:
        for side in (lhs, rhs):
            bad = side.symbols() - gens
            if bad:
                raise TermError(f"relation uses unknown symbol(s) {sorted(bad)}")
        norm_rels.append((normalize(lhs), normalize(rhs)))
    entry = LogEntry(tuple(norm_assign), tuple(norm_rels))
    return replace(pres, log=pres.log + (entry,))


@dataclass(frozen=True)
class Transformation:
    """Terms u_j over the source generators, one per target generator."""

    source: tuple  # source generator names
    target: tuple  # target generator names
    terms: tuple   # Term over variables named like the source generators

    def check(self):
        if len(self.terms) != len(self.target):
            raise TermError("term count must match target generator count")
        src = set(self.source)
        for t in self.terms:
            bad = t.symbols() - src
            if bad:
                raise TermError(f"transformation term uses unknown symbol(s) {sorted(bad)}")
        return self

    @staticmethod
    def identity(gens):
        gens = tuple(gens)
        return Transformation(gens, gens, tuple(Var(g) for g in gens))


def compose(f: Transformation, g: Transformation) -> Transformation:
    """Composite transformation: apply f's terms, then g's."""
    if f.target != g.source:
        raise TermError("target of first transformation must equal source of second")
    sigma = {name: t for name, t in zip(f.target, f.terms)}
    terms = tuple(substitute(t, sigma) for t in g.terms)
    return Transformation(f.source, g.target, terms).check()


def product_presentation(p1: Presentation, p2: Presentation, bottom: str) -> Presentation:
    """Product of two presentations sharing a designated bottom symbol.

    Generators are merged (bottom identified), relations of both kept, and the
    meet of the two generator sums is forced down to the bottom."""
    if bottom not in p1.generators or bottom not in p2.generators:
        raise TermError(f"both presentations must contain the bottom symbol {bottom!r}")
    own1 = [g for g in p1.generators if g != bottom]
    own2 = [g for g in p2.generators if g != bottom]
    clash = set(own1) & set(own2)
    if clash:
        raise TermError(f"generator collision {sorted(clash)}")
    gens = (bottom, *own1, *own2)
    rels = list(p1.relations) + list(p2.relations)
    if own1 and own2:
        prod_rel = (mt(Join(*[Const(g) for g in own1]), Join(*[Const(g) for g in own2])),
                    Const(bottom))
        rels.append(prod_rel)
    return Presentation(generators=gens, base_relations=tuple(rels)).check()
