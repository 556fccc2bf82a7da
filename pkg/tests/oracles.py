"""Independent brute-force oracles used by the test suite.

Residuals are found by tagging redex binders and watching where the tags go
(no position arithmetic).  Proof homotopy is searched directly over words
of single steps using square and cancellation moves.
"""

from __future__ import annotations

from collections import deque
from itertools import permutations, product

from hodt.lam import App, Lam, contract, is_redex, positions, redexes, replace_at, subterm
from hodt.paths import Zigzag

MARK = "†"


def marked_residuals(t, r, ss):
    """Residuals of each redex in ``ss`` after contracting ``r`` in ``t``, by labelling."""
    marked = t
    for k, s in enumerate(sorted(ss)):
        red = subterm(marked, s)
        assert is_redex(red)
        marked = replace_at(marked, s, App(Lam(red.fn.body, f"{MARK}{k}"), red.arg))
    out = contract(marked, r)
    return frozenset(
        p for p in positions(out)
        if is_redex(subterm(out, p)) and subterm(out, p).fn.hint.startswith(MARK)
    )


def developments(t, rs):
    """Every complete development of ``rs`` as a tuple of single-step positions."""
    if not rs:
        yield ()
        return
    for r in sorted(rs):
        rest = marked_residuals(t, r, rs - {r})
        u = contract(t, r)
        for tail in developments(u, rest):
            yield (r,) + tail


def brute_force_targets(t, rs):
    return {run_positions(t, d) for d in developments(t, frozenset(rs))}


def run_positions(t, ps):
    for p in ps:
        t = contract(t, p)
    return t


# -- square tiling -----------------------------------------------------------
# A word is a tuple of (source, target, redex, forward).

def to_word(z: Zigzag):
    return tuple((s.source, s.target, s.redex, s.forward) for s in z.steps)


def _inv(word):
    return tuple((tgt, src, r, not fwd) for src, tgt, r, fwd in reversed(word))


def _forward_squares(word):
    out = []
    for i, (u, m1, a, fwd) in enumerate(word):
        if not fwd:
            continue
        for b in redexes(u):
            if b == a:
                continue
            ba = marked_residuals(u, a, {b})
            ab = marked_residuals(u, b, {a})
            m2 = contract(u, b)
            for d1 in developments(m1, ba):
                seg = word[i + 1:i + 1 + len(d1)]
                if len(seg) < len(d1) or any(not s[3] or s[2] != p for s, p in zip(seg, d1)):
                    continue
                for d2 in set(developments(m2, ab)):
                    new, t = [(u, m2, b, True)], m2
                    for p in d2:
                        nt = contract(t, p)
                        new.append((t, nt, p, True))
                        t = nt
                    out.append(word[:i] + tuple(new) + word[i + 1 + len(d1):])
    return out


def _cancellations(word, start, preds, max_len):
    out = []
    for i in range(len(word) - 1):
        s, t = word[i], word[i + 1]
        if s[0] == t[1] and s[1] == t[0] and s[2] == t[2] and s[3] != t[3]:
            out.append(word[:i] + word[i + 2:])
    if len(word) + 2 > max_len:
        return out
    terms = [start] + [s[1] for s in word]
    for i, t in enumerate(terms):
        for r in redexes(t):
            u = contract(t, r)
            out.append(word[:i] + ((t, u, r, True), (u, t, r, False)) + word[i:])
        for w, r in preds.get(t, ()):
            out.append(word[:i] + ((t, w, r, False), (w, t, r, True)) + word[i:])
    return out


def neighbours(word, start, preds, max_len):
    out = _forward_squares(word)
    out += [_inv(w) for w in _forward_squares(_inv(word))]
    out += _cancellations(word, start, preds, max_len)
    return out


def ball(word, start, preds, radius, max_len):
    seen = {word: 0}
    frontier = deque([word])
    while frontier:
        w = frontier.popleft()
        d = seen[w]
        if d == radius:
            continue
        for n in neighbours(w, start, preds, max_len):
            if n not in seen:
                seen[n] = d + 1
                frontier.append(n)
    return seen


def predecessors(graph):
    preds = {}
    for s, d, r in graph.edges:
        preds.setdefault(graph.vertices[d], []).append((graph.vertices[s], r))
    return preds


def tiling_homotopic(z1, z2, graph, bound=6, max_len=None):
    """True iff the zigzags are connected by at most ``bound`` elementary moves."""
    preds = predecessors(graph)
    w1, w2 = to_word(z1), to_word(z2)
    if max_len is None:
        max_len = max(len(w1), len(w2)) + 4
    b1 = ball(w1, z1.start, preds, (bound + 1) // 2, max_len)
    b2 = ball(w2, z2.start, preds, bound // 2, max_len)
    return any(w in b1 for w in b2)


# -- named substitution ------------------------------------------------------

def named_text(t, replace=None):
    """Print ``t`` with a fresh binder name per abstraction, optionally
    replacing free variables by given text.  Fresh names make textual
    substitution capture free."""
    counter = [0]
    replace = replace or {}

    def go(u, env):
        if isinstance(u, Lam):
            counter[0] += 1
            b = f"b{counter[0]}"
            return f"(\\{b}.{go(u.body, (b,) + env)})"
        if isinstance(u, App):
            return f"({go(u.fn, env)} {go(u.arg, env)})"
        if u.is_free:
            return f"({replace[u.name]})" if u.name in replace else u.name
        return env[u.index]

    return go(t, ())


# -- naive category enumeration -------------------------------------------------

def _hom_profiles(n_obj, max_mor):
    pairs = [(a, b) for a in range(n_obj) for b in range(n_obj)]

    def go(i, left):
        if i == len(pairs):
            yield {}
            return
        a, b = pairs[i]
        lo = 1 if a == b else 0
        for k in range(lo, left + 1):
            for rest in go(i + 1, left - k):
                yield {(a, b): k, **rest}

    yield from go(0, max_mor)


def naive_categories(max_objects, max_morphisms):
    """Every valid composition table, no pruning, deduplicated by brute-force isomorphism."""
    from hodt.category import CategoryError, FinCategory

    found, buckets = [], {}
    for n_obj in range(max_objects + 1):
        for homs in _hom_profiles(n_obj, max_morphisms):
            mors = [(a, b, k) for (a, b), n in homs.items() for k in range(n)]
            ids = {a: (a, a, 0) for a in range(n_obj)}
            fixed, cells = {}, []
            for f in mors:
                for g in mors:
                    if f[1] != g[0]:
                        continue
                    if g == ids[g[0]]:
                        fixed[(g, f)] = f
                    elif f == ids[f[0]]:
                        fixed[(g, f)] = g
                    else:
                        cells.append((g, f))
            choices = [[(f[0], g[1], k) for k in range(homs[(f[0], g[1])])] for g, f in cells]
            for values in product(*choices):
                table = dict(fixed)
                table.update(zip(cells, values))
                cat = FinCategory(tuple(range(n_obj)), {m: (m[0], m[1]) for m in mors}, ids, table)
                try:
                    cat.validate()
                except CategoryError:
                    continue
                key = (n_obj, tuple(sorted(homs.values())), _idempotents(cat))
                bucket = buckets.setdefault(key, [])
                if not any(brute_isomorphic(cat, other) for other in bucket):
                    bucket.append(cat)
                    found.append(cat)
    return found


def _idempotents(cat):
    return sum(1 for f in cat.morphisms if cat.src(f) == cat.dst(f) and cat.comp(f, f) == f)


def brute_isomorphic(c, d):
    if len(c.objects) != len(d.objects) or len(c.morphisms) != len(d.morphisms):
        return False
    for omap in permutations(d.objects):
        o = dict(zip(c.objects, omap))
        groups = []
        ok = True
        for a in c.objects:
            for b in c.objects:
                src, dst = c.hom(a, b), d.hom(o[a], o[b])
                if len(src) != len(dst):
                    ok = False
                groups.append((src, dst))
        if not ok:
            continue
        for perms in product(*[permutations(dst) for _, dst in groups]):
            m = {}
            for (src, _), p in zip(groups, perms):
                m.update(zip(src, p))
            if all(m[h] == d.comp(m[g], m[f]) for (g, f), h in c.compose.items()):
                return True
    return False


# -- direct model evaluation --------------------------------------------------

def oracle_eval(m, t, env, default, stack=()):
    """Evaluate ``t`` in a model with a de Bruijn stack, straight from F, G and
    the map-vertex labels (no opening of binders, no memo)."""
    pts = m.K.vertices()
    if isinstance(t, App):
        f = oracle_eval(m, t.fn, env, default, stack)
        a = oracle_eval(m, t.arg, env, default, stack)
        return m.FC.labels[m.F.on_vertex(f)].on_vertex(a)
    if isinstance(t, Lam):
        table = tuple(oracle_eval(m, t.body, env, default, (d,) + stack) for d in pts)
        for mv in m.FC.vertices():
            if tuple(m.FC.labels[mv].on_vertex(d) for d in pts) == table:
                return m.G.on_vertex(mv)
        return None
    if t.is_free:
        return env.get(t.name, default)
    return stack[t.index]


# -- coends by graph search ---------------------------------------------------

def coend_size(f, X, b):
    """|∫^a X(a) × f(a)(b)| counted as connected components by depth-first search."""
    A = f.A
    objs = list(A.objects)
    oi = {o: k for k, o in enumerate(objs)}
    bi = list(f.B.objects).index(b)
    adj = {}
    nodes = [(oi[a], x, y) for a in objs for x in range(X.size(a)) for y in range(f.at(a).sizes[bi])]
    for n in nodes:
        adj[n] = []
    for mi, u in enumerate(A.morphisms):
        a, a2 = oi[A.src(u)], oi[A.dst(u)]
        for x2 in range(X.sizes[a2]):
            for y in range(f.obj[a].sizes[bi]):
                p = (a, X.act[mi][x2], y)
                q = (a2, x2, f.mor[mi].comps[bi][y])
                adj[p].append(q)
                adj[q].append(p)
    seen, comps = set(), 0
    for n in nodes:
        if n in seen:
            continue
        comps += 1
        stack = [n]
        seen.add(n)
        while stack:
            for m in adj[stack.pop()]:
                if m not in seen:
                    seen.add(m)
                    stack.append(m)
    return comps
