"""Finite truncated simplicial sets.

A simplex is a pair ``(core, sigma)``: ``core`` names a stored nondegenerate
simplex of dimension k and ``sigma`` is a monotone surjection [n] -> [k]
written as a tuple of length n + 1.  Nondegenerate simplices carry the
identity surjection; degeneracies only ever touch ``sigma``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, NamedTuple

from .category import FinCategory
from .lam import render
from .paths import ReductionGraph, ResourceBoundExceeded, residuals_of
from .uf import UnionFind


class SimplicialError(Exception):
    pass


class DimensionBoundError(SimplicialError, ValueError):
    pass


class UnknownVertex(SimplicialError, KeyError):
    pass


class SizeBoundExceeded(ResourceBoundExceeded):
    pass


class Simplex(NamedTuple):
    core: object
    sigma: tuple

    @property
    def dim(self):
        return len(self.sigma) - 1

    @property
    def degenerate(self):
        return len(set(self.sigma)) < len(self.sigma)

    def degeneracy(self, i) -> "Simplex":
        """s_i: repeat the i-th vertex."""
        if not 0 <= i <= self.dim:
            raise SimplicialError(f"degeneracy index {i} out of range")
        return Simplex(self.core, self.sigma[:i + 1] + self.sigma[i:])

    def pull(self, rho) -> "Simplex":
        """Precompose with a monotone surjection ``rho``."""
        return Simplex(self.core, tuple(self.sigma[r] for r in rho))


def surjections(n, k):
    """Monotone surjections [n] -> [k] in lexicographic order."""
    out = []
    for steps in combinations(range(1, n + 1), k):
        sigma, v = [], 0
        for p in range(n + 1):
            if p in steps:
                v += 1
            sigma.append(v)
        out.append(tuple(sigma))
    return sorted(out)


def collapse_runs(items, same=lambda a, b: a == b):
    """Split ``items`` into maximal runs of equal neighbours.

    Returns the run representatives and the surjection sending each index
    to its run.
    """
    reps, sigma = [], []
    for x in items:
        if reps and same(reps[-1], x):
            sigma.append(len(reps) - 1)
        else:
            reps.append(x)
            sigma.append(len(reps) - 1)
    return reps, tuple(sigma)


@dataclass
class TruncatedSSet:
    """Nondegenerate simplices up to dimension ``N`` with their faces.

    ``faces[c]`` lists d_0 .. d_n of the core ``c`` as ``Simplex`` values.
    ``labels`` carries optional payloads (terms, maps, chains).
    """
    N: int
    dims: dict
    faces: dict
    labels: dict = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        self._face_memo = {}
        self._simplex_memo = {}
        self._index_memo = {}
        self.check_identities()

    # -- structure ----------------------------------------------------------
    def cores(self, n):
        return [c for c, d in self.dims.items() if d == n]

    def vertices(self):
        return self.cores(0)

    def count(self, n):
        return sum(1 for d in self.dims.values() if d == n)

    def simplex(self, core) -> Simplex:
        return Simplex(core, tuple(range(self.dims[core] + 1)))

    def vertex(self, v) -> Simplex:
        if self.dims.get(v) != 0:
            raise UnknownVertex(v)
        return Simplex(v, (0,))

    def face(self, x: Simplex, i) -> Simplex:
        key = (x, i)
        hit = self._face_memo.get(key)
        if hit is not None:
            return hit
        sigma = x.sigma
        n = len(sigma) - 1
        if n == 0 or not 0 <= i <= n:
            raise SimplicialError(f"face d_{i} undefined in dimension {n}")
        rest = sigma[:i] + sigma[i + 1:]
        j = sigma[i]
        if j in rest:
            out = Simplex(x.core, rest)
        else:
            lower = tuple(v if v < j else v - 1 for v in rest)
            out = self.faces[x.core][j].pull(lower)
        self._face_memo[key] = out
        return out

    def boundary(self, x: Simplex):
        return tuple(self.face(x, i) for i in range(x.dim + 1))

    def simplices(self, n):
        """Every n-simplex, degenerate ones included, in a fixed order."""
        if n in self._simplex_memo:
            return self._simplex_memo[n]
        out = []
        for c, k in self.dims.items():
            if k <= n:
                out.extend(Simplex(c, s) for s in surjections(n, k))
        self._simplex_memo[n] = out
        return out

    def boundary_index(self, n):
        """Map from face tuples to the n-simplices with that boundary."""
        if n in self._index_memo:
            return self._index_memo[n]
        index = {}
        for x in self.simplices(n):
            index.setdefault(self.boundary(x), []).append(x)
        self._index_memo[n] = index
        return index

    def check_identities(self):
        for c, n in self.dims.items():
            fs = self.faces.get(c, ())
            if n > self.N:
                raise SimplicialError(f"simplex {c!r} above the truncation level {self.N}")
            if len(fs) != (n + 1 if n else 0):
                raise SimplicialError(f"simplex {c!r} has {len(fs)} faces, expected {n + 1}")
            for f in fs:
                if f.core not in self.dims:
                    raise SimplicialError(f"face of {c!r} refers to unknown simplex {f.core!r}")
                if f.dim != n - 1 or len(set(f.sigma)) != self.dims[f.core] + 1 \
                        or list(f.sigma) != sorted(f.sigma) or f.sigma[0] != 0:
                    raise SimplicialError(f"face of {c!r} is not a valid ({n - 1})-simplex: {f!r}")
        for c, n in self.dims.items():
            if n < 2:
                continue
            x = self.simplex(c)
            for j in range(n + 1):
                for i in range(j):
                    a = self.face(self.face(x, j), i)
                    b = self.face(self.face(x, i), j - 1)
                    if a != b:
                        raise SimplicialError(
                            f"simplicial identity d_{i} d_{j} = d_{i} d_{j - 1} fails on {c!r}")

    # -- interchange ----------------------------------------------------------
    def _names(self):
        names = {}
        for c in self.dims:
            names[c] = c if isinstance(c, str) else f"s{self.dims[c]}_{len(names)}"
        return names

    def to_json(self):
        names = self._names()

        def enc(x: Simplex):
            if not x.degenerate:
                return names[x.core]
            return {"core": names[x.core], "degeneracy": list(x.sigma)}

        simplices = {}
        for n in range(self.N + 1):
            rows = []
            for c in self.cores(n):
                row = {"id": names[c], "faces": [enc(f) for f in self.faces.get(c, ())]}
                if c in self.labels or not isinstance(c, str):
                    row["label"] = _label_text(self.labels.get(c, c))
                rows.append(row)
            simplices[str(n)] = rows
        return {"dim": self.N, "simplices": simplices}

    @classmethod
    def from_json(cls, obj) -> "TruncatedSSet":
        try:
            N = int(obj["dim"])
            dims, faces, labels = {}, {}, {}
            rows = obj["simplices"]
            for n_text, entries in rows.items():
                for e in entries:
                    dims[str(e["id"])] = int(n_text)
            for n_text, entries in rows.items():
                for e in entries:
                    c = str(e["id"])
                    out = []
                    for f in e.get("faces", []):
                        if isinstance(f, dict):
                            out.append(Simplex(str(f["core"]), tuple(int(v) for v in f["degeneracy"])))
                        else:
                            f = str(f)
                            if f not in dims:
                                raise SimplicialError(f"face of {c!r} refers to unknown simplex {f!r}")
                            out.append(Simplex(f, tuple(range(dims[f] + 1))))
                    faces[c] = tuple(out)
                    if "label" in e:
                        labels[c] = e["label"]
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            if isinstance(exc, SimplicialError):
                raise
            raise SimplicialError(f"malformed complex JSON: {exc!r}") from exc
        return cls(N, dims, faces, labels, name=obj.get("name", ""))

    def to_dot(self):
        names = self._names()
        lines = ["digraph K {"]
        for v in self.vertices():
            lines.append(f'  "{names[v]}" [label={json.dumps(_label_text(self.labels.get(v, v)))}];')
        for e in self.cores(1):
            d0, d1 = self.faces[e]
            lines.append(f'  "{names[d1.core]}" -> "{names[d0.core]}" [label="{names[e]}"];')
        lines.append("}")
        return "\n".join(lines)


def _label_text(x):
    if isinstance(x, str):
        return x
    try:
        return render(x)
    except Exception:
        return repr(x)


# -- constructions ---------------------------------------------------------------

def _from_runs(N, tops, key_of, same, labels=None, name=""):
    """Build a complex whose n-simplices are sequences of length n + 1.

    ``tops`` lists the nondegenerate sequences (no equal neighbours under
    ``same``); faces drop an entry and collapse the runs that creates.
    """
    dims, faces = {}, {}
    for seq in tops:
        dims[key_of(seq)] = len(seq) - 1
    for seq in tops:
        n = len(seq) - 1
        if n == 0:
            faces[key_of(seq)] = ()
            continue
        fs = []
        for i in range(n + 1):
            reps, sigma = collapse_runs(seq[:i] + seq[i + 1:], same)
            fs.append(Simplex(key_of(tuple(reps)), sigma))
        faces[key_of(seq)] = tuple(fs)
    return TruncatedSSet(N, dims, faces, labels or {}, name=name)


def point(N=3) -> TruncatedSSet:
    return TruncatedSSet(N, {"*": 0}, {"*": ()}, name="point")


def standard_simplex(n, N=None) -> TruncatedSSet:
    """Δ^n truncated at ``N`` (default ``n``)."""
    N = n if N is None else N
    dims, faces = {}, {}
    for k in range(min(n, N) + 1):
        for sub in combinations(range(n + 1), k + 1):
            dims[sub] = k
            faces[sub] = tuple(Simplex(sub[:i] + sub[i + 1:], tuple(range(k)))
                               for i in range(k + 1)) if k else ()
    return TruncatedSSet(N, dims, faces, name=f"Δ^{n}")


def codiscrete(names, N=2) -> TruncatedSSet:
    """All tuples of vertices are simplices."""
    names = tuple(names)
    tops = []

    def grow(seq):
        tops.append(seq)
        if len(seq) <= N:
            for v in names:
                if v != seq[-1]:
                    grow(seq + (v,))

    for v in names:
        grow((v,))
    tops.sort(key=lambda s: (len(s), [names.index(v) for v in s]))
    key = lambda s: s[0] if len(s) == 1 else s  # noqa: E731
    return _from_runs(N, tops, key, lambda a, b: a == b, name=f"codiscrete{len(names)}")


def discrete(names, N=2) -> TruncatedSSet:
    names = tuple(names)
    return TruncatedSSet(N, {v: 0 for v in names}, {v: () for v in names}, name=f"discrete{len(names)}")


def nerve(C: FinCategory, N=3) -> TruncatedSSet:
    """Composable chains of nonidentity morphisms, truncated at ``N``.

    A core is ``(x0, (f1, ..., fn))`` with f1 : x0 -> x1 and so on.
    Inner faces compose neighbours; an identity composite degenerates.
    """
    C.validate()
    dims, faces, labels = {}, {}, {}
    chains = [(x, ()) for x in C.objects]
    layer = list(chains)
    for n in range(1, N + 1):
        nxt = []
        for x0, fs in layer:
            end = C.dst(fs[-1]) if fs else x0
            for f in C.non_identities():
                if C.src(f) == end:
                    nxt.append((x0, fs + (f,)))
        chains.extend(nxt)
        layer = nxt
    for ch in chains:
        dims[ch] = len(ch[1])
        labels[ch] = _chain_label(ch)
    for ch in chains:
        x0, fs = ch
        n = len(fs)
        if n == 0:
            faces[ch] = ()
            continue
        out = []
        for i in range(n + 1):
            if i == 0:
                seq, start = list(fs[1:]), C.dst(fs[0])
            elif i == n:
                seq, start = list(fs[:-1]), x0
            else:
                seq = list(fs[:i - 1]) + [C.comp(fs[i], fs[i - 1])] + list(fs[i + 1:])
                start = x0
            out.append(_chain_simplex(C, start, seq))
        faces[ch] = tuple(out)
    return TruncatedSSet(N, dims, faces, labels, name=f"N({C.name})")


def _chain_simplex(C, x0, seq):
    kept, sigma, v = [], [0], 0
    for f in seq:
        if not C.is_identity(f):
            kept.append(f)
            v += 1
        sigma.append(v)
    return Simplex((x0, tuple(kept)), tuple(sigma))


def _chain_label(ch):
    x0, fs = ch
    return f"{x0}" if not fs else f"{x0}:" + ",".join(str(f) for f in fs)


def product(X: TruncatedSSet, Y: TruncatedSSet, budget=20000) -> TruncatedSSet:
    """X × Y truncated at the smaller level.

    Cores are pairs of simplices with no common degeneracy.
    """
    N = min(X.N, Y.N)
    dims, faces = {}, {}
    for n in range(N + 1):
        for x in X.simplices(n):
            for y in Y.simplices(n):
                if _jointly_nondegenerate(x, y):
                    dims[(x, y)] = n
                    if len(dims) > budget:
                        raise SizeBoundExceeded(f"product has more than {budget} cells")
    for c, n in dims.items():
        if n == 0:
            faces[c] = ()
            continue
        x, y = c
        faces[c] = tuple(_pair_simplex(X.face(x, i), Y.face(y, i)) for i in range(n + 1))
    return TruncatedSSet(N, dims, faces, name=f"{X.name}×{Y.name}")


def _jointly_nondegenerate(x, y):
    sx, sy = x.sigma, y.sigma
    return not any(sx[p] == sx[p + 1] and sy[p] == sy[p + 1] for p in range(len(sx) - 1))


def _pair_simplex(x: Simplex, y: Simplex) -> Simplex:
    idx = list(range(len(x.sigma)))
    reps, rho = collapse_runs(idx, lambda p, q: x.sigma[p] == x.sigma[q] and y.sigma[p] == y.sigma[q])
    core = (Simplex(x.core, tuple(x.sigma[p] for p in reps)),
            Simplex(y.core, tuple(y.sigma[p] for p in reps)))
    return Simplex(core, rho)


def reduction_complex(G: ReductionGraph) -> TruncatedSSet:
    """Terms, one-step contractions, and triangulated permutation squares.

    For coinitial steps a, b at u whose residuals b/a and a/b are single
    redexes, the two paths a;(b/a) and b;(a/b) end at the same term w.
    The square is cut along a diagonal edge u -> w into two triangles.
    """
    dims, faces, labels = {}, {}, {}
    for k, t in enumerate(G.vertices):
        dims[k] = 0
        faces[k] = ()
        labels[k] = t
    edge_of = {}
    for s, d, r in G.edges:
        e = ("step", s, d, r)
        dims[e] = 1
        faces[e] = (Simplex(d, (0,)), Simplex(s, (0,)))
        labels[e] = f"{render(G.vertices[s])} -[{'.'.join(r) or 'root'}]-> {render(G.vertices[d])}"
        edge_of[(s, r)] = (e, d)
    by_source = {}
    for s, d, r in G.edges:
        by_source.setdefault(s, []).append(r)
    for u, rs in by_source.items():
        t = G.vertices[u]
        for a, b in combinations(sorted(rs), 2):
            ba = residuals_of(t, a, b)
            ab = residuals_of(t, b, a)
            if len(ba) != 1 or len(ab) != 1:
                continue
            (b1,), (a1,) = tuple(ba), tuple(ab)
            ea, va = edge_of[(u, a)]
            eb, vb = edge_of[(u, b)]
            if (va, b1) not in edge_of or (vb, a1) not in edge_of:
                continue
            eb1, w = edge_of[(va, b1)]
            ea1, w2 = edge_of[(vb, a1)]
            if w != w2:
                raise SimplicialError("permutation square does not close")
            diag = ("diag", u, a, b)
            dims[diag] = 1
            faces[diag] = (Simplex(w, (0,)), Simplex(u, (0,)))
            labels[diag] = f"{render(t)} =[{_redex_name(a)}|{_redex_name(b)}]=> {render(G.vertices[w])}"
            for first, second in ((ea, eb1), (eb, ea1)):
                tri = ("square", u, a, b, first)
                dims[tri] = 2
                faces[tri] = (Simplex(second, (0, 1)), Simplex(diag, (0, 1)), Simplex(first, (0, 1)))
                labels[tri] = f"{labels[first]} ; {labels[second]}"
    return TruncatedSSet(2, dims, faces, labels, name="reduction")


def _redex_name(r):
    return ".".join(r) or "root"


# -- horns and Kan checking -------------------------------------------------------

@dataclass(frozen=True)
class HornMap:
    """A map Λ^n_i -> K given by the images of the faces k != i."""
    n: int
    i: int
    faces: tuple  # pairs (k, Simplex)

    def face(self, k):
        return dict(self.faces)[k]

    def compatible(self, K: TruncatedSSet) -> bool:
        fs = dict(self.faces)
        for k in fs:
            for j in fs:
                if j < k and K.face(fs[k], j) != K.face(fs[j], k - 1):
                    return False
        return True

    def fillers(self, K: TruncatedSSet):
        """All n-simplices (degenerate included) extending the horn."""
        return [y for y in K.simplices(self.n)
                if all(K.face(y, k) == x for k, x in self.faces)]

    def to_json(self, K: TruncatedSSet):
        names = K._names()

        def enc(x):
            return {"core": _jsonable(names[x.core]), "degeneracy": list(x.sigma)}

        return {"horn": f"Λ^{self.n}_{self.i}", "n": self.n, "i": self.i,
                "faces": {str(k): enc(x) for k, x in self.faces}}

    @classmethod
    def from_json(cls, obj, K: TruncatedSSet) -> "HornMap":
        back = {v: c for c, v in K._names().items()}
        faces = tuple((int(k), Simplex(back[v["core"]], tuple(v["degeneracy"])))
                      for k, v in sorted(obj["faces"].items(), key=lambda kv: int(kv[0])))
        return cls(int(obj["n"]), int(obj["i"]), faces)


def _jsonable(x):
    return x if isinstance(x, (str, int)) else repr(x)


def horns(K: TruncatedSSet, n, i) -> Iterable[HornMap]:
    """Every compatible map Λ^n_i -> K, in a fixed order."""
    ks = [k for k in range(n + 1) if k != i]
    pool = K.simplices(n - 1)
    by_face = {}
    if n >= 2:
        for x in pool:
            for j in range(n):
                by_face.setdefault((j, K.face(x, j)), []).append(x)
    chosen = {}

    def go(pos):
        if pos == len(ks):
            yield HornMap(n, i, tuple((k, chosen[k]) for k in ks))
            return
        k = ks[pos]
        prev = [j for j in ks[:pos]]
        if not prev or n < 2:
            cands = pool
        else:
            j0 = prev[0]
            cands = by_face.get((j0, K.face(chosen[j0], k - 1)), [])
        for x in cands:
            if all(K.face(x, j) == K.face(chosen[j], k - 1) for j in prev):
                chosen[k] = x
                yield from go(pos + 1)
        chosen.pop(k, None)

    yield from go(0)


@dataclass
class KanReport:
    passed: bool
    up_to: int
    horns_checked: int
    failures: list

    def to_json(self, K: TruncatedSSet):
        return {"pass": self.passed, "up_to": self.up_to, "horns_checked": self.horns_checked,
                "failures": [h.to_json(K) for h in self.failures]}


def kan_check(K: TruncatedSSet, up_to=None, max_failures=10) -> KanReport:
    """Check every horn Λ^n_i -> K for 1 <= n <= up_to against all n-simplices."""
    up_to = K.N if up_to is None else up_to
    if up_to > K.N:
        raise DimensionBoundError(f"horns of dimension {up_to} need simplices above the truncation level {K.N}")
    failures, checked = [], 0
    for n in range(1, up_to + 1):
        for i in range(n + 1):
            fillable = {tuple(K.face(y, k) for k in range(n + 1) if k != i) for y in K.simplices(n)}
            for h in horns(K, n, i):
                checked += 1
                if tuple(x for _, x in h.faces) not in fillable:
                    failures.append(h)
                    if len(failures) >= max_failures:
                        return KanReport(False, up_to, checked, failures)
    return KanReport(not failures, up_to, checked, failures)


def replay_horn(K: TruncatedSSet, h: HornMap):
    """Recheck a reported horn: returns (compatible, fillers)."""
    return h.compatible(K), h.fillers(K)


# -- vertices, maps and homotopies ---------------------------------------------------

def path_component(K: TruncatedSSet, v, w) -> bool:
    for x in (v, w):
        if K.dims.get(x) != 0:
            raise UnknownVertex(x)
    return _components(K).same(v, w)


def _components(K: TruncatedSSet):
    uf = UnionFind(K.vertices())
    for e in K.cores(1):
        d0, d1 = K.faces[e]
        uf.union(d0.core, d1.core)
    return uf


@dataclass(frozen=True)
class SimplicialMap:
    """Images of the nondegenerate simplices of ``source`` up to ``level``.

    ``level`` defaults to the smaller truncation of source and target; a
    composite only knows what both factors know.
    """
    source: TruncatedSSet = field(compare=False, hash=False)
    target: TruncatedSSet = field(compare=False, hash=False)
    assignment: tuple  # sorted pairs (core, Simplex) for hashing
    level: int = -1

    @classmethod
    def build(cls, source, target, mapping: dict, level=None) -> "SimplicialMap":
        top = min(source.N, target.N) if level is None else level
        items = [(c, x) for c, x in mapping.items() if source.dims[c] <= top]
        return cls(source, target, tuple(sorted(items, key=lambda kv: repr(kv[0]))), top)

    def table(self):
        tab = self.__dict__.get("_table")
        if tab is None:
            tab = dict(self.assignment)
            object.__setattr__(self, "_table", tab)
        return tab

    def __call__(self, x: Simplex) -> Simplex:
        return self.table()[x.core].pull(x.sigma)

    def on_vertex(self, v):
        return self.table()[v].core

    def check(self):
        tab = self.table()
        for c, n in self.source.dims.items():
            if n > self.level:
                continue
            if c not in tab or tab[c].dim != n:
                raise SimplicialError(f"map is undefined or misdimensioned on {c!r}")
            for i, f in enumerate(self.source.faces[c]):
                if self.target.face(tab[c], i) != tab[f.core].pull(f.sigma):
                    raise SimplicialError(f"map does not commute with d_{i} on {c!r}")
        return self

    def compose(self, g: "SimplicialMap") -> "SimplicialMap":
        """g ∘ self."""
        level = min(self.level, g.level)
        return SimplicialMap.build(self.source, g.target,
                                   {c: g(x) for c, x in self.assignment
                                    if self.source.dims[c] <= level}, level)

    def restrict(self, level) -> "SimplicialMap":
        return SimplicialMap.build(self.source, self.target, self.table(), min(level, self.level))


def truncate(X: TruncatedSSet, n) -> TruncatedSSet:
    if n >= X.N:
        return X
    keep = {c: d for c, d in X.dims.items() if d <= n}
    return TruncatedSSet(n, keep, {c: X.faces[c] for c in keep},
                         {c: v for c, v in X.labels.items() if c in keep}, name=X.name)


def find_maps(X: TruncatedSSet, Y: TruncatedSSet, fixed=None, limit=None, budget=2_000_000):
    """Enumerate simplicial maps X -> Y extending the partial assignment ``fixed``."""
    level = min(X.N, Y.N)
    order = sorted((c for c, n in X.dims.items() if n <= level), key=lambda c: X.dims[c])
    fixed = dict(fixed or {})
    mapping = {}
    found = []

    def candidates(c):
        n = X.dims[c]
        if n == 0:
            cands = [Simplex(v, (0,)) for v in Y.vertices()]
        else:
            want = tuple(mapping[f.core].pull(f.sigma) for f in X.faces[c])
            cands = Y.boundary_index(n).get(want, [])
        if c in fixed:
            return [fixed[c]] if fixed[c] in cands else []
        return cands

    # iterative backtracking: stack[k] holds the untried candidates for order[k]
    steps = 0
    stack = [iter(candidates(order[0]))] if order else []
    if not order:
        found.append(SimplicialMap.build(X, Y, {}))
    while stack:
        if limit is not None and len(found) >= limit:
            break
        pos = len(stack) - 1
        y = next(stack[-1], None)
        if y is None:
            stack.pop()
            mapping.pop(order[pos], None)
            continue
        steps += 1
        if steps > budget:
            raise SizeBoundExceeded(f"map search exceeded {budget} steps")
        mapping[order[pos]] = y
        if pos + 1 == len(order):
            found.append(SimplicialMap.build(X, Y, dict(mapping)))
        else:
            stack.append(iter(candidates(order[pos + 1])))
    return found


def constant_map(X: TruncatedSSet, Y: TruncatedSSet, v) -> SimplicialMap:
    Y.vertex(v)
    level = min(X.N, Y.N)
    return SimplicialMap.build(X, Y, {c: Simplex(v, (0,) * (n + 1))
                                      for c, n in X.dims.items() if n <= level})


def identity_map(X: TruncatedSSet) -> SimplicialMap:
    return SimplicialMap.build(X, X, {c: X.simplex(c) for c in X.dims})


def _prism(X: TruncatedSSet, budget):
    return product(X, standard_simplex(1, X.N), budget=budget)


def _end_assignment(X, f: SimplicialMap, end):
    fixed = {}
    for c, x in f.assignment:
        if X.dims.get(c, X.N + 1) > X.N:
            continue
        n = X.dims[c]
        fixed[(X.simplex(c), Simplex((end,), (0,) * (n + 1)))] = x
    return fixed


def homotopies(f: SimplicialMap, g: SimplicialMap, limit=None, budget=20000):
    """Maps X × Δ^1 -> Y restricting to f at 0 and g at 1 (at their common level)."""
    X = truncate(f.source, min(f.level, g.level))
    P = _prism(X, budget)
    fixed = _end_assignment(X, f, 0)
    fixed.update(_end_assignment(X, g, 1))
    return P, find_maps(P, f.target, fixed=fixed, limit=limit)


def map_homotopic(f: SimplicialMap, g: SimplicialMap, budget=20000) -> bool:
    """True iff homotopies f => g and g => f both exist.

    Requiring both directions makes the relation symmetric at the finite
    level, where a one-way homotopy need not be invertible.
    """
    if f.source.dims != g.source.dims or f.target.dims != g.target.dims:
        raise SimplicialError("maps do not share source and target")
    level = min(f.level, g.level)
    if f.restrict(level).assignment == g.restrict(level).assignment:
        return True
    return bool(homotopies(f, g, limit=1, budget=budget)[1]) and \
        bool(homotopies(g, f, limit=1, budget=budget)[1])


def function_complex_01(K: TruncatedSSet, K2: TruncatedSSet, budget=20000) -> TruncatedSSet:
    """1-truncated mapping complex: maps K -> K2 as vertices, homotopies as edges.

    Every nonconstant homotopy is its own edge; the constant homotopy is the
    degenerate edge on its endpoint.  ``labels`` holds the map or homotopy.
    """
    maps = find_maps(K, K2, budget=budget * 100)
    if len(maps) > budget:
        raise SizeBoundExceeded(f"{len(maps)} maps exceed the budget {budget}")
    dims, faces, labels = {}, {}, {}
    for k, m in enumerate(maps):
        dims[("map", k)] = 0
        faces[("map", k)] = ()
        labels[("map", k)] = m
    P = _prism(K, budget)
    for a, f in enumerate(maps):
        for b, g in enumerate(maps):
            fixed = _end_assignment(K, f, 0)
            fixed.update(_end_assignment(K, g, 1))
            for h_i, h in enumerate(find_maps(P, K2, fixed=fixed, budget=budget * 100)):
                if a == b and _is_constant_homotopy(h, f):
                    continue
                e = ("htpy", a, b, h_i)
                dims[e] = 1
                faces[e] = (Simplex(("map", b), (0,)), Simplex(("map", a), (0,)))
                labels[e] = h
                if len(dims) > budget:
                    raise SizeBoundExceeded(f"function complex exceeds {budget} cells")
    return TruncatedSSet(1, dims, faces, labels, name=f"[{K.name}⇒{K2.name}]")


def _is_constant_homotopy(h: SimplicialMap, f: SimplicialMap):
    # constant iff it factors through the projection onto the first factor
    return all(y == f(x) for (x, _), y in h.assignment)


def vertex_map(F: SimplicialMap, fc: TruncatedSSet):
    """The map payload of the function-complex vertex hit by ``F`` at each vertex."""
    return {v: fc.labels[F.on_vertex(v)] for v in F.source.vertices()}
