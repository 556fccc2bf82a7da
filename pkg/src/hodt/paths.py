"""Equality proofs as zigzags of beta-steps, and when two proofs are the same.

Two proofs count as homotopic when they are related by permutation squares
(Levy's permutation equivalence on forward reductions) and by cancelling a
step against its inverse.  Everything is decided through residuals and
complete developments, which always terminate for beta.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

from .lam import (ARG, BODY, FN, InvalidPosition, LambdaError, Term, contract, redexes,
                  render, size, subterm, to_json, variable_positions, is_redex)
from .uf import UnionFind

DEFAULT_FUEL = 10_000


class EndpointMismatch(LambdaError):
    pass


class ResourceBoundExceeded(LambdaError):
    pass


# -- residuals ---------------------------------------------------------------

def _check_redex(t, r):
    if not is_redex(subterm(t, r)):
        raise InvalidPosition(f"no beta-redex at {r!r}")


def residuals_of(t: Term, r: tuple, s: tuple) -> list:
    """Residuals of the redex ``s`` after contracting ``r`` in ``t``."""
    _check_redex(t, s)
    if s == r:
        return []
    n = len(r)
    if s[:n] != r:
        return [s]
    rel = s[n:]
    if rel[:2] == (FN, BODY):
        return [r + rel[2:]]
    if rel[0] == ARG:
        body = subterm(t, r).fn.body
        return [r + q + rel[1:] for q in variable_positions(body)]
    raise InvalidPosition(f"{s!r} is not a redex position")  # pragma: no cover


def _residual_set(t, r, ss):
    out = set()
    for s in ss:
        out.update(residuals_of(t, r, s))
    return out


def _order(ps):
    # leftmost-outermost order on positions
    key = {FN: 0, BODY: 0, ARG: 1}
    return sorted(ps, key=lambda p: [key[d] for d in p] + [-1])


@dataclass(frozen=True)
class Step:
    """One beta-step inside a zigzag.

    Forward: ``target = contract(source, redex)``.  Backward: the redex
    lives in ``target`` and ``source = contract(target, redex)``.
    """
    source: Term
    redex: tuple
    forward: bool = True
    target: Term = field(default=None, compare=False)

    def __post_init__(self):
        if self.forward:
            tgt = contract(self.source, self.redex)
            if self.target is not None and self.target != tgt:
                raise LambdaError("forward step target does not match its redex")
            object.__setattr__(self, "target", tgt)
        else:
            if self.target is None:
                raise LambdaError("backward step needs its target")
            if contract(self.target, self.redex) != self.source:
                raise LambdaError("backward step source does not match its redex")

    def inverse(self) -> "Step":
        return Step(self.target, self.redex, not self.forward, self.source)

    @property
    def direction(self):
        return "fwd" if self.forward else "bwd"


@dataclass(frozen=True)
class MultiStep:
    """Complete development of a set of redexes of ``source``."""
    source: Term
    redexes: frozenset

    def __post_init__(self):
        object.__setattr__(self, "redexes", frozenset(self.redexes))
        for r in self.redexes:
            _check_redex(self.source, r)

    @cached_property
    def _development(self):
        return develop(self.source, self.redexes)

    @property
    def target(self) -> Term:
        return self._development[0]

    def steps(self) -> list:
        return self._development[1]

    def __bool__(self):
        return bool(self.redexes)


def develop(t: Term, rs, fuel: int = DEFAULT_FUEL):
    """Complete development of ``rs``: returns (target, single steps).

    Innermost residuals are contracted first so argument copies are made
    of already-developed terms.
    """
    pending = set(rs)
    steps = []
    while pending:
        if len(steps) >= fuel:
            raise ResourceBoundExceeded(f"development exceeded fuel {fuel}")
        r = _order(pending)[-1]
        step = Step(t, r)
        pending.discard(r)
        pending = _residual_set(t, r, pending)
        steps.append(step)
        t = step.target
    return t, steps


def residuals(after, of) -> frozenset:
    """Residuals of the redex set ``of`` after a Step or MultiStep."""
    if isinstance(after, Step):
        if not after.forward:
            raise LambdaError("residuals are taken along forward steps")
        after = MultiStep(after.source, {after.redex})
    t = after.source
    cur = set(of)
    for r in cur:
        _check_redex(t, r)
    pending = set(after.redexes)
    while pending:
        r = _order(pending)[-1]
        pending.discard(r)
        pending = _residual_set(t, r, pending)
        cur = _residual_set(t, r, cur)
        t = contract(t, r)
    return frozenset(cur)


# -- reduction sequences -----------------------------------------------------

def as_multisteps(seq) -> list:
    out = []
    for s in seq:
        if isinstance(s, MultiStep):
            ms = s
        elif isinstance(s, Step):
            if not s.forward:
                raise LambdaError("reduction sequences are forward only")
            ms = MultiStep(s.source, {s.redex})
        else:
            raise TypeError(f"not a step: {s!r}")
        if out and out[-1].target != ms.source:
            raise LambdaError("reduction sequence is not composable")
        out.append(ms)
    return out


def source_of(seq, default=None):
    return seq[0].source if seq else default


def target_of(seq, default=None):
    return seq[-1].target if seq else default


def _project(p, q):
    if not q:
        return list(p)
    if not p:
        return []
    if len(q) > 1:
        return _project(_project(p, q[:1]), q[1:])
    v, u = q[0], p[0]
    u_v = MultiStep(v.target, residuals(v, u.redexes))
    v_u = MultiStep(u.target, residuals(u, v.redexes))
    rest = _project(p[1:], [v_u]) if v_u else list(p[1:])
    return ([u_v] if u_v else []) + rest


def project(p, q) -> list:
    """Levy projection p/q: what is left of ``p`` after doing ``q``.

    Both are coinitial forward sequences (Steps or MultiSteps).  The result
    is a list of non-empty MultiSteps starting at the target of ``q``.
    """
    p, q = as_multisteps(p), as_multisteps(q)
    if p and q and p[0].source != q[0].source:
        raise EndpointMismatch("projection needs coinitial sequences")
    out = _project(p, q)
    start = target_of(q, source_of(p))
    if out and start is not None and out[0].source != start:
        raise AssertionError("projection does not start at target(q)")  # pragma: no cover
    return out


def permutation_equivalent(p, q, start: Term | None = None) -> bool:
    """Levy equivalence of coinitial, cofinal forward sequences."""
    p, q = as_multisteps(p), as_multisteps(q)
    src_p, src_q = source_of(p, start), source_of(q, start)
    if src_p is not None and src_q is not None and src_p != src_q:
        raise EndpointMismatch("sequences are not coinitial")
    src = src_p if src_p is not None else src_q
    if target_of(p, src) != target_of(q, src):
        raise EndpointMismatch("sequences are not cofinal")
    return not _project(p, q) and not _project(q, p)


def expand(seq) -> list:
    """Flatten MultiSteps into single forward Steps."""
    out = []
    for ms in as_multisteps(seq):
        out.extend(ms.steps())
    return out


# -- zigzags -----------------------------------------------------------------

@dataclass(frozen=True)
class Zigzag:
    start: Term
    steps: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", tuple(self.steps))
        cur = self.start
        for s in self.steps:
            if s.source != cur:
                raise LambdaError("zigzag steps are not end-to-end composable")
            cur = s.target

    @property
    def end(self) -> Term:
        return self.steps[-1].target if self.steps else self.start

    def then(self, other: "Zigzag") -> "Zigzag":
        if other.start != self.end:
            raise EndpointMismatch("cannot compose zigzags")
        return Zigzag(self.start, self.steps + other.steps)

    def inverse(self) -> "Zigzag":
        return Zigzag(self.end, tuple(s.inverse() for s in reversed(self.steps)))

    @classmethod
    def forward(cls, start: Term, redex_path) -> "Zigzag":
        steps, t = [], start
        for r in redex_path:
            s = Step(t, tuple(r))
            steps.append(s)
            t = s.target
        return cls(start, steps)

    @classmethod
    def by_ordinals(cls, start: Term, ordinals) -> "Zigzag":
        """Forward proof naming each redex by its leftmost-outermost ordinal."""
        steps, t = [], start
        for k in ordinals:
            rs = redexes(t)
            if not 0 <= k < len(rs):
                raise InvalidPosition(f"term has {len(rs)} redexes, no ordinal {k}")
            s = Step(t, rs[k])
            steps.append(s)
            t = s.target
        return cls(start, steps)


def valley_normalize(z: Zigzag, fuel: int = DEFAULT_FUEL):
    """Rewrite ``z`` into a valley p;q^-1 with p, q forward and cofinal.

    Returns (p, q) as lists of MultiSteps; p starts at z.start, q at z.end.
    """
    p, q = [], []
    work = 0
    for step in z.steps:
        work += 1
        if work > fuel:
            raise ResourceBoundExceeded(f"valley normalisation exceeded fuel {fuel}")
        if step.forward:
            t = [MultiStep(step.source, {step.redex})]
            p, q = p + _project(t, q), _project(q, t)
        else:
            q = [MultiStep(step.target, {step.redex})] + q
    while p and q and p[-1] == q[-1]:
        p, q = p[:-1], q[:-1]
    return p, q


def _common_extension(f, g, start, fuel, search_depth):
    """Find w with f;w ~ g;w (f, g coinitial and cofinal), or None."""
    if permutation_equivalent(f, g, start=start):
        return []
    d = target_of(f, start)
    # any two reductions into a normal form are equivalent
    t, w = d, []
    for _ in range(fuel):
        rs = redexes(t)
        if not rs:
            if permutation_equivalent(f + w, g + w, start=start):
                return w
            break
        step = MultiStep(t, {rs[0]})
        w.append(step)
        t = step.target
    frontier = [[]]
    for _ in range(search_depth):
        nxt = []
        for path in frontier:
            t = target_of(path, d)
            for r in redexes(t):
                ext = path + [MultiStep(t, {r})]
                if permutation_equivalent(f + ext, g + ext, start=start):
                    return ext
                nxt.append(ext)
        frontier = nxt
    return None


def homotopic(z1: Zigzag, z2: Zigzag, fuel: int = DEFAULT_FUEL, search_depth: int = 4) -> bool:
    """Decide whether two proofs of the same equality are homotopic.

    Both proofs are brought to valleys p;q^-1 and r;s^-1 and joined by the
    canonical projections u = r/p, v = p/r.  Since permutation equivalence
    cancels on the left but not on the right, the fractions agree iff some
    continuation w gives q;u;w ~ s;v;w.  A reduction to normal form always
    works when one exists; otherwise w is searched up to ``search_depth``
    steps and failure to find one is a ResourceBoundExceeded, not a verdict.
    """
    if z1.start != z2.start or z1.end != z2.end:
        raise EndpointMismatch("proofs must share both endpoints")
    p, q = valley_normalize(z1, fuel)
    r, s = valley_normalize(z2, fuel)
    u, v = _project(r, p), _project(p, r)
    if target_of(p + u, z1.start) != target_of(r + v, z1.start):
        raise AssertionError("projections do not close the square")  # pragma: no cover
    w = _common_extension(q + u, s + v, z1.end, min(fuel, 200), search_depth)
    if w is None:
        raise ResourceBoundExceeded(
            f"no common continuation within {search_depth} steps; verdict undetermined")
    return True


# -- bounded exploration -----------------------------------------------------

@dataclass(frozen=True)
class Bounds:
    depth: int = 4
    max_size: int = 40
    max_vertices: int = 200

    def __post_init__(self):
        if min(self.depth, self.max_size, self.max_vertices) <= 0:
            raise ValueError("bounds must be positive")


@dataclass
class ReductionGraph:
    vertices: list
    edges: list  # (src index, dst index, redex position)
    bounds: Bounds
    truncated: bool = False

    def index(self, t: Term) -> int:
        return self._index[t]

    def __post_init__(self):
        self._index = {t: i for i, t in enumerate(self.vertices)}

    def successors(self, i):
        return [(d, r) for s, d, r in self.edges if s == i]

    def to_json(self) -> dict:
        return {
            "vertices": [to_json(t) for t in self.vertices],
            "edges": [{"src": s, "dst": d, "redex": list(r), "dir": "fwd"} for s, d, r in self.edges],
            "truncated": self.truncated,
        }

    def to_dot(self) -> str:
        lines = ["digraph reductions {"]
        for i, t in enumerate(self.vertices):
            lines.append(f"  v{i} [label={json.dumps(render(t))}];")
        for s, d, r in self.edges:
            label = "/".join(r) or "root"
            lines.append(f"  v{s} -> v{d} [label={json.dumps(label)}];")
        lines.append("}")
        return "\n".join(lines)


def explore(seeds, bounds: Bounds | None = None) -> ReductionGraph:
    """Breadth-first forward closure of the seeds under beta-steps."""
    bounds = bounds or Bounds()
    vertices, index, edges = [], {}, []
    truncated = False
    queue = deque()
    for t in seeds:
        if t not in index:
            if len(vertices) >= bounds.max_vertices:
                truncated = True
                break
            index[t] = len(vertices)
            vertices.append(t)
            queue.append((t, 0))
    while queue:
        t, d = queue.popleft()
        rs = redexes(t)
        if d >= bounds.depth:
            truncated = truncated or bool(rs)
            continue
        for r in rs:
            u = contract(t, r)
            if u not in index:
                if size(u) > bounds.max_size or len(vertices) >= bounds.max_vertices:
                    truncated = True
                    continue
                index[u] = len(vertices)
                vertices.append(u)
                queue.append((u, d + 1))
            edges.append((index[t], index[u], r))
    return ReductionGraph(vertices, edges, bounds, truncated)


def forward_paths(graph: ReductionGraph, start: int, max_len: int):
    """All forward paths (as Zigzags) of length <= max_len from a vertex."""
    out = []

    def go(i, steps):
        out.append(Zigzag(graph.vertices[start], tuple(steps)))
        if len(steps) == max_len:
            return
        for d, r in graph.successors(i):
            go(d, steps + [Step(graph.vertices[i], r, True, graph.vertices[d])])

    go(start, [])
    return out


def convertible_classes(terms, fuel: int = 10, max_vertices: int = 200):
    """Group terms that share a common reduct within ``fuel`` steps.

    Returns (classes, exhausted) where ``exhausted`` lists terms whose
    exploration was truncated.
    """

    uf = UnionFind()
    owner = {}
    exhausted = []
    for t in terms:
        uf.add(t)
        g = explore([t], Bounds(depth=fuel, max_size=10_000, max_vertices=max_vertices))
        if g.truncated:
            exhausted.append(t)
        for u in g.vertices:
            if u in owner:
                uf.union(owner[u], t)
            else:
                owner[u] = t
    groups = {}
    for t in terms:
        groups.setdefault(uf.find(t), []).append(t)
    return list(groups.values()), exhausted
