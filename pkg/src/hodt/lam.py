"""Untyped lambda terms in nameless form.

Bound variables carry a de Bruijn index plus the binder's name as a
printing hint; free variables carry their name.  Equality on terms ignores
hints, so ``==`` is alpha-equivalence.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Union

FN, ARG, BODY = "fn", "arg", "body"
DIRECTIONS = (FN, ARG, BODY)

Position = tuple  # of direction tokens


class LambdaError(Exception):
    pass


class ParseError(LambdaError):
    def __init__(self, message, line, column):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


class InvalidPosition(LambdaError):
    pass


@dataclass(frozen=True)
class Var:
    index: int | None
    name: str = field(default="", compare=False)

    def __eq__(self, other):
        if not isinstance(other, Var):
            return NotImplemented
        if self.index is None or other.index is None:
            return self.index is None and other.index is None and self.name == other.name
        return self.index == other.index

    def __hash__(self):
        return hash(("var", self.index if self.index is not None else self.name))

    @property
    def is_free(self):
        return self.index is None


@dataclass(frozen=True)
class Lam:
    body: "Term"
    hint: str = field(default="x", compare=False)

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(("lam", self.body))
            object.__setattr__(self, "_hash", h)
        return h


@dataclass(frozen=True)
class App:
    fn: "Term"
    arg: "Term"

    def __hash__(self):
        # terms are hashed constantly as memo keys, so the hash is cached
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(("app", self.fn, self.arg))
            object.__setattr__(self, "_hash", h)
        return h


Term = Union[Var, Lam, App]


def free(name: str) -> Var:
    return Var(None, name)


# -- parsing -----------------------------------------------------------------

def _tokenize(text):
    tokens = []
    line, col = 1, 1
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line, col = line + 1, 1
            i += 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch in "\\λ.()":
            tokens.append(("sym", "\\" if ch == "λ" else ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isascii() and ch.isalnum():
            j = i
            while j < len(text) and text[j].isascii() and text[j].isalnum():
                j += 1
            tokens.append(("ident", text[i:j], line, col))
            col += j - i
            i = j
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    return tokens


class _Parser:
    def __init__(self, text):
        self.tokens = _tokenize(text)
        self.i = 0
        lines = text.split("\n")
        self.eof = (len(lines), len(lines[-1]) + 1)

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def expect(self, value):
        tok = self.peek()
        if tok is None:
            raise ParseError(f"expected {value!r} but input ended", *self.eof)
        if tok[1] != value:
            raise ParseError(f"expected {value!r} but found {tok[1]!r}", tok[2], tok[3])
        self.i += 1
        return tok

    def term(self, scope):
        tok = self.peek()
        if tok is not None and tok[1] == "\\":
            self.i += 1
            name = self.peek()
            if name is None or name[0] != "ident":
                where = (name[2], name[3]) if name else self.eof
                raise ParseError("expected binder name", *where)
            self.i += 1
            self.expect(".")
            return Lam(self.term((name[1],) + scope), name[1])
        return self.app(scope)

    def app(self, scope):
        result = None
        while True:
            tok = self.peek()
            if tok is None or tok[1] in (")", "."):
                break
            if tok[1] == "\\":
                # a trailing abstraction extends to the right
                atom = self.term(scope)
            else:
                atom = self.atom(scope)
            result = atom if result is None else App(result, atom)
        if result is None:
            where = (tok[2], tok[3]) if tok else self.eof
            raise ParseError("expected a term", *where)
        return result

    def atom(self, scope):
        tok = self.peek()
        if tok[0] == "ident":
            self.i += 1
            if tok[1] in scope:
                return Var(scope.index(tok[1]), tok[1])
            return free(tok[1])
        if tok[1] == "(":
            self.i += 1
            t = self.term(scope)
            self.expect(")")
            return t
        raise ParseError(f"unexpected {tok[1]!r}", tok[2], tok[3])


def parse(text: str) -> Term:
    """Parse concrete syntax; unknown names become free variables."""
    p = _Parser(text)
    t = p.term(())
    tok = p.peek()
    if tok is not None:
        raise ParseError(f"unexpected {tok[1]!r}", tok[2], tok[3])
    return t


# -- printing ----------------------------------------------------------------

def free_names(t: Term) -> frozenset:
    if isinstance(t, Var):
        return frozenset([t.name]) if t.is_free else frozenset()
    if isinstance(t, Lam):
        return free_names(t.body)
    return free_names(t.fn) | free_names(t.arg)


def _used_names(t, depth, env):
    """Names the body refers to that a new binder must not shadow."""
    if isinstance(t, Var):
        if t.is_free:
            return {t.name}
        if t.index >= depth:
            return {env[t.index - depth]}
        return set()
    if isinstance(t, Lam):
        return _used_names(t.body, depth + 1, env)
    return _used_names(t.fn, depth, env) | _used_names(t.arg, depth, env)


def _fresh(hint, avoid):
    base = hint.rstrip("0123456789") or "x"
    if hint not in avoid:
        return hint
    k = 1
    while f"{base}{k}" in avoid:
        k += 1
    return f"{base}{k}"


def _render(t, env, ctx):
    # ctx: 0 top / lam body, 1 function position, 2 argument position
    if isinstance(t, Var):
        return t.name if t.is_free else env[t.index]
    if isinstance(t, Lam):
        name = _fresh(t.hint, _used_names(t.body, 1, env) | set())
        s = "\\" + name + "." + _render(t.body, (name,) + env, 0)
        return f"({s})" if ctx else s
    s = _render(t.fn, env, 1) + " " + _render(t.arg, env, 2)
    return f"({s})" if ctx == 2 else s


def render(t: Term) -> str:
    """Print with minimal parentheses; clashing binder hints get a numeric suffix."""
    return _render(t, (), 0)


# -- de Bruijn plumbing ------------------------------------------------------

def shift(t: Term, d: int, cutoff: int = 0) -> Term:
    if isinstance(t, Var):
        if t.is_free or t.index < cutoff:
            return t
        return Var(t.index + d, t.name)
    if isinstance(t, Lam):
        return Lam(shift(t.body, d, cutoff + 1), t.hint)
    return App(shift(t.fn, d, cutoff), shift(t.arg, d, cutoff))


def _subst_index(t, j, n):
    if isinstance(t, Var):
        if t.is_free:
            return t
        if t.index == j:
            return shift(n, j)
        if t.index > j:
            return Var(t.index - 1, t.name)
        return t
    if isinstance(t, Lam):
        return Lam(_subst_index(t.body, j + 1, n), t.hint)
    return App(_subst_index(t.fn, j, n), _subst_index(t.arg, j, n))


def instantiate(body: Term, n: Term) -> Term:
    """[n/0]body for the body of an abstraction (n closed relative to the binder)."""
    return _subst_index(body, 0, n)


def _subst_free(t, name, n, depth):
    if isinstance(t, Var):
        if t.is_free and t.name == name:
            return shift(n, depth)
        return t
    if isinstance(t, Lam):
        return Lam(_subst_free(t.body, name, n, depth + 1), t.hint)
    return App(_subst_free(t.fn, name, n, depth), _subst_free(t.arg, name, n, depth))


def substitute(m: Term, x: str | int, n: Term) -> Term:
    """Capture-avoiding ``[n/x]m``; ``x`` is a free name or a dangling index."""
    if isinstance(x, str):
        return _subst_free(m, x, n, 0)
    return _subst_index_keep(m, x, n)


def _subst_index_keep(t, j, n, depth=0):
    # replaces dangling index j without lowering the others
    if isinstance(t, Var):
        if not t.is_free and t.index == j + depth:
            return shift(n, depth)
        return t
    if isinstance(t, Lam):
        return Lam(_subst_index_keep(t.body, j, n, depth + 1), t.hint)
    return App(_subst_index_keep(t.fn, j, n, depth), _subst_index_keep(t.arg, j, n, depth))


def is_closed_under(t: Term, depth: int = 0) -> bool:
    """Well-scopedness: every bound index points at an enclosing binder."""
    if isinstance(t, Var):
        return t.is_free or 0 <= t.index < depth
    if isinstance(t, Lam):
        return is_closed_under(t.body, depth + 1)
    return is_closed_under(t.fn, depth) and is_closed_under(t.arg, depth)


def size(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    if isinstance(t, Lam):
        return 1 + size(t.body)
    return 1 + size(t.fn) + size(t.arg)


# -- positions and redexes ---------------------------------------------------

def subterm(t: Term, pos: Position) -> Term:
    for d in pos:
        if d == FN and isinstance(t, App):
            t = t.fn
        elif d == ARG and isinstance(t, App):
            t = t.arg
        elif d == BODY and isinstance(t, Lam):
            t = t.body
        else:
            raise InvalidPosition(f"position {pos!r} does not address a subterm")
    return t


def replace_at(t: Term, pos: Position, new: Term) -> Term:
    if not pos:
        return new
    d, rest = pos[0], pos[1:]
    if d == FN and isinstance(t, App):
        return App(replace_at(t.fn, rest, new), t.arg)
    if d == ARG and isinstance(t, App):
        return App(t.fn, replace_at(t.arg, rest, new))
    if d == BODY and isinstance(t, Lam):
        return Lam(replace_at(t.body, rest, new), t.hint)
    raise InvalidPosition(f"position {pos!r} does not address a subterm")


def is_redex(t: Term) -> bool:
    return isinstance(t, App) and isinstance(t.fn, Lam)


def positions(t: Term) -> Iterator[Position]:
    """Every subterm position in leftmost-outermost (pre-)order."""
    yield ()
    if isinstance(t, App):
        for p in positions(t.fn):
            yield (FN,) + p
        for p in positions(t.arg):
            yield (ARG,) + p
    elif isinstance(t, Lam):
        for p in positions(t.body):
            yield (BODY,) + p


@lru_cache(maxsize=65536)
def redexes(t: Term) -> tuple:
    return tuple(p for p in positions(t) if is_redex(subterm(t, p)))


def contract(t: Term, r: Position) -> Term:
    """Contract the beta-redex at ``r``."""
    s = subterm(t, r)
    if not is_redex(s):
        raise InvalidPosition(f"no beta-redex at {r!r}")
    return replace_at(t, r, instantiate(s.fn.body, s.arg))


def eta_redexes(t: Term) -> tuple:
    """Positions of ``\\x.M x`` with x not free in M (opt-in only)."""
    out = []
    for p in positions(t):
        s = subterm(t, p)
        if (isinstance(s, Lam) and isinstance(s.body, App) and s.body.arg == Var(0)
                and not _mentions(s.body.fn, 0)):
            out.append(p)
    return tuple(out)


def eta_contract(t: Term, r: Position) -> Term:
    if r not in eta_redexes(t):
        raise InvalidPosition(f"no eta-redex at {r!r}")
    return replace_at(t, r, shift(subterm(t, r).body.fn, -1))


def _mentions(t, j):
    if isinstance(t, Var):
        return not t.is_free and t.index == j
    if isinstance(t, Lam):
        return _mentions(t.body, j + 1)
    return _mentions(t.fn, j) or _mentions(t.arg, j)


def mentions_index(t: Term, j: int = 0) -> bool:
    return _mentions(t, j)


def variable_positions(body: Term, j: int = 0) -> list:
    """Positions in ``body`` of occurrences of the variable bound ``j`` levels up."""
    out = []

    def go(t, depth, pos):
        if isinstance(t, Var):
            if not t.is_free and t.index == j + depth:
                out.append(pos)
        elif isinstance(t, Lam):
            go(t.body, depth + 1, pos + (BODY,))
        else:
            go(t.fn, depth, pos + (FN,))
            go(t.arg, depth, pos + (ARG,))

    go(body, 0, ())
    return out


def normalize(t: Term, fuel: int = 100):
    """Leftmost-outermost normal form, or ``None`` when fuel runs out."""
    for _ in range(fuel + 1):
        rs = redexes(t)
        if not rs:
            return t
        t = contract(t, rs[0])
    return None


# -- JSON --------------------------------------------------------------------

def to_json(t: Term):
    if isinstance(t, Var):
        return {"var": t.name if t.is_free else t.index}
    if isinstance(t, Lam):
        return {"lam": {"hint": t.hint, "body": to_json(t.body)}}
    return {"app": [to_json(t.fn), to_json(t.arg)]}


def from_json(obj) -> Term:
    try:
        if "var" in obj:
            v = obj["var"]
            if isinstance(v, bool) or not isinstance(v, (int, str)):
                raise LambdaError(f"bad variable {v!r}")
            return free(v) if isinstance(v, str) else Var(v, "")
        if "lam" in obj:
            return Lam(from_json(obj["lam"]["body"]), obj["lam"].get("hint", "x"))
        if "app" in obj:
            f, a = obj["app"]
            return App(from_json(f), from_json(a))
    except (TypeError, KeyError, ValueError) as exc:
        raise LambdaError(f"malformed term JSON: {exc}") from exc
    raise LambdaError(f"malformed term JSON: {obj!r}")


# -- bounded enumeration -----------------------------------------------------

_HINTS = "xyzwuvst"


@lru_cache(maxsize=None)
def _terms_of_size(n, depth, names):
    if n <= 0:
        return ()
    out = []
    if n == 1:
        out.extend(Var(i, _HINTS[(depth - 1 - i) % len(_HINTS)]) for i in range(depth))
        out.extend(free(x) for x in names)
        return tuple(out)
    out.extend(Lam(b, _HINTS[depth % len(_HINTS)]) for b in _terms_of_size(n - 1, depth + 1, names))
    for k in range(1, n - 1):
        for f in _terms_of_size(k, depth, names):
            for a in _terms_of_size(n - 1 - k, depth, names):
                out.append(App(f, a))
    return tuple(out)


def enumerate_terms(max_size: int, free_vars=(), min_size: int = 1) -> list:
    """All well-scoped terms with ``min_size <= size <= max_size`` over the given free names."""
    names = tuple(free_vars)
    out = []
    for n in range(min_size, max_size + 1):
        out.extend(_terms_of_size(n, 0, names))
    return out
