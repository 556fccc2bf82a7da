"""Set-valued presheaves on finite categories, left Kan extension and the Kleisli structure.

A presheaf X on C stores a size per object (elements are 0..n-1) and, for
each morphism u : a -> b, the function X(u) : X(b) -> X(a) as a tuple.
Every natural isomorphism reported by the checks here comes with its
componentwise bijections, which are verified to round-trip and to be
natural.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product as iproduct

from .category import (FinCategory, cyclic_group, discrete, empty_category,
                       idempotent_monoid, poset_arrow, terminal)
from .model import CheckReport
from .paths import ResourceBoundExceeded
from .uf import UnionFind


class KleisliError(Exception):
    pass


class BudgetExceeded(ResourceBoundExceeded):
    pass


class DistributivityMissing(KleisliError):
    pass


# -- indexing --------------------------------------------------------------------

class _Index:
    """Integer positions for the objects and morphisms of a category."""

    def __init__(self, C: FinCategory):
        self.C = C
        self.objs = list(C.objects)
        self.opos = {o: i for i, o in enumerate(self.objs)}
        self.mors = list(C.morphisms)
        self.mpos = {m: i for i, m in enumerate(self.mors)}
        self.src = [self.opos[C.src(m)] for m in self.mors]
        self.dst = [self.opos[C.dst(m)] for m in self.mors]
        self.ident = [self.mpos[C.ident(o)] for o in self.objs]
        self.is_id = [C.is_identity(m) for m in self.mors]
        self.comp = {(self.mpos[g], self.mpos[f]): self.mpos[h] for (g, f), h in C.compose.items()}
        self.hom = {(a, b): [] for a in range(len(self.objs)) for b in range(len(self.objs))}
        for i in range(len(self.mors)):
            self.hom[(self.src[i], self.dst[i])].append(i)


_INDEX: dict = {}


def index(C: FinCategory) -> _Index:
    hit = _INDEX.get(id(C))
    if hit is None or hit.C is not C:
        hit = _Index(C)
        _INDEX[id(C)] = hit
    return hit


# -- presheaves -------------------------------------------------------------------

@dataclass(frozen=True)
class Presheaf:
    """``sizes[i]`` elements over object i; ``act[m]`` is X(m) as a tuple."""
    base: FinCategory = field(compare=False, hash=False, repr=False)
    sizes: tuple
    act: tuple

    def size(self, a) -> int:
        return self.sizes[index(self.base).opos[a]]

    def apply(self, u, x):
        return self.act[index(self.base).mpos[u]][x]

    @property
    def total(self):
        return sum(self.sizes)

    def validate(self):
        ix = index(self.base)
        if len(self.sizes) != len(ix.objs) or len(self.act) != len(ix.mors):
            raise KleisliError("presheaf does not match its base category")
        for m in range(len(ix.mors)):
            fn = self.act[m]
            if len(fn) != self.sizes[ix.dst[m]] or any(not 0 <= v < self.sizes[ix.src[m]] for v in fn):
                raise KleisliError(f"X({ix.mors[m]!r}) has the wrong type")
            if ix.is_id[m] and fn != tuple(range(len(fn))):
                raise KleisliError(f"X sends identity {ix.mors[m]!r} to a non-identity")
        for (g, f), h in ix.comp.items():
            if self.act[h] != tuple(self.act[f][v] for v in self.act[g]):
                raise KleisliError(f"X is not functorial on {ix.mors[g]!r}∘{ix.mors[f]!r}")
        return self

    def to_json(self):
        ix = index(self.base)
        return {"sets": {str(o): self.sizes[i] for i, o in enumerate(ix.objs)},
                "functions": {str(m): list(self.act[i]) for i, m in enumerate(ix.mors)}}


def empty_presheaf(C: FinCategory) -> Presheaf:
    ix = index(C)
    return Presheaf(C, (0,) * len(ix.objs), ((),) * len(ix.mors))


def constant_presheaf(C: FinCategory, n) -> Presheaf:
    ix = index(C)
    return Presheaf(C, (n,) * len(ix.objs), (tuple(range(n)),) * len(ix.mors))


@dataclass(frozen=True)
class PMor:
    """A natural transformation; ``comps[i]`` maps src elements over object i."""
    src: Presheaf
    dst: Presheaf
    comps: tuple

    def validate(self):
        ix = index(self.src.base)
        for i in range(len(ix.objs)):
            c = self.comps[i]
            if len(c) != self.src.sizes[i] or any(not 0 <= v < self.dst.sizes[i] for v in c):
                raise KleisliError(f"component at {ix.objs[i]!r} has the wrong type")
        for m in range(len(ix.mors)):
            a, b = ix.src[m], ix.dst[m]
            for x in range(self.src.sizes[b]):
                if self.comps[a][self.src.act[m][x]] != self.dst.act[m][self.comps[b][x]]:
                    raise KleisliError(f"naturality fails at {ix.mors[m]!r}")
        return self

    def then(self, other: "PMor") -> "PMor":
        """other ∘ self."""
        return PMor(self.src, other.dst, tuple(tuple(other.comps[i][v] for v in c)
                                               for i, c in enumerate(self.comps)))

    def is_iso(self):
        return all(len(set(c)) == len(c) == self.dst.sizes[i] for i, c in enumerate(self.comps))

    def inverse(self) -> "PMor":
        if not self.is_iso():
            raise KleisliError("not an isomorphism")
        inv = []
        for c in self.comps:
            back = [0] * len(c)
            for x, y in enumerate(c):
                back[y] = x
            inv.append(tuple(back))
        return PMor(self.dst, self.src, tuple(inv))


def identity_pmor(X: Presheaf) -> PMor:
    return PMor(X, X, tuple(tuple(range(n)) for n in X.sizes))


def _search_pmors(X: Presheaf, Y: Presheaf, bijective=False, limit=None):
    ix = index(X.base)
    order = list(range(len(ix.objs)))
    out = []
    comps = [None] * len(order)
    if bijective and X.sizes != Y.sizes:
        return out

    def ok_so_far(i):
        for m in range(len(ix.mors)):
            a, b = ix.src[m], ix.dst[m]
            if max(a, b) != i or comps[a] is None or comps[b] is None:
                continue
            for x in range(X.sizes[b]):
                if comps[a][X.act[m][x]] != Y.act[m][comps[b][x]]:
                    return False
        return True

    def go(i):
        if limit is not None and len(out) >= limit:
            return
        if i == len(order):
            out.append(PMor(X, Y, tuple(comps)))
            return
        if bijective:
            choices = permutations(range(Y.sizes[i]))
        else:
            choices = iproduct(range(Y.sizes[i]), repeat=X.sizes[i])
        for c in choices:
            comps[i] = tuple(c)
            if ok_so_far(i):
                go(i + 1)
        comps[i] = None

    go(0)
    return out


def presheaf_homs(X: Presheaf, Y: Presheaf):
    return _search_pmors(X, Y)


def find_iso(X: Presheaf, Y: Presheaf):
    found = _search_pmors(X, Y, bijective=True, limit=1)
    return found[0] if found else None


_PRESHEAF_CACHE: dict = {}


def presheaves(C: FinCategory, s: int, up_to_iso=True):
    """All presheaves with every set of size at most ``s``.

    With ``up_to_iso`` one representative per isomorphism class is kept.
    """
    key = (id(C), s, up_to_iso)
    hit = _PRESHEAF_CACHE.get(key)
    if hit is not None and hit[0] is C:
        return hit[1]
    ix = index(C)
    out = []
    for sizes in iproduct(range(s + 1), repeat=len(ix.objs)):
        out.extend(_labelled(C, ix, sizes))
    if up_to_iso:
        reps = []
        for X in out:
            if not any(R.sizes == X.sizes and find_iso(R, X) is not None for R in reps):
                reps.append(X)
        out = reps
    _PRESHEAF_CACHE[key] = (C, out)
    return out


def _labelled(C, ix, sizes):
    free = [m for m in range(len(ix.mors)) if not ix.is_id[m]]
    act = [None] * len(ix.mors)
    for m in range(len(ix.mors)):
        if ix.is_id[m]:
            act[m] = tuple(range(sizes[ix.src[m]]))
    checks = {m: [] for m in free}
    pos = {m: k for k, m in enumerate(free)}
    for (g, f), h in ix.comp.items():
        last = max((pos.get(x, -1) for x in (g, f, h)), default=-1)
        if last >= 0:
            checks[free[last]].append((g, f, h))
    out = []

    def go(k):
        if k == len(free):
            out.append(Presheaf(C, tuple(sizes), tuple(act)))
            return
        m = free[k]
        for fn in iproduct(range(sizes[ix.src[m]]), repeat=sizes[ix.dst[m]]):
            act[m] = fn
            if all(act[h] == tuple(act[f][v] for v in act[g]) for g, f, h in checks[m]):
                go(k + 1)
        act[m] = None

    go(0)
    return out


# -- Yoneda -----------------------------------------------------------------------

def yoneda(C: FinCategory, a) -> Presheaf:
    """Hom(-, a); the elements over b are the morphisms b -> a in table order."""
    ix = index(C)
    if a not in ix.opos:
        raise KleisliError(f"unknown object {a!r}")
    t = ix.opos[a]
    sizes = tuple(len(ix.hom[(b, t)]) for b in range(len(ix.objs)))
    act = []
    for m in range(len(ix.mors)):
        s_, d = ix.src[m], ix.dst[m]
        where = {h: k for k, h in enumerate(ix.hom[(s_, t)])}
        act.append(tuple(where[ix.comp[(h, m)]] for h in ix.hom[(d, t)]))
    return Presheaf(C, sizes, tuple(act))


def yoneda_element(C: FinCategory, h) -> int:
    """Position of the morphism ``h`` inside y(dst h)(src h)."""
    ix = index(C)
    m = ix.mpos[h]
    return ix.hom[(ix.src[m], ix.dst[m])].index(m)


def yoneda_mor(C: FinCategory, u) -> PMor:
    """y(u) : y(a) -> y(a') by postcomposition with u : a -> a'."""
    ix = index(C)
    m = ix.mpos[u]
    a, a2 = ix.src[m], ix.dst[m]
    X, Y = yoneda(C, ix.objs[a]), yoneda(C, ix.objs[a2])
    comps = []
    for b in range(len(ix.objs)):
        where = {h: k for k, h in enumerate(ix.hom[(b, a2)])}
        comps.append(tuple(where[ix.comp[(m, h)]] for h in ix.hom[(b, a)]))
    return PMor(X, Y, tuple(comps))


# -- functors ---------------------------------------------------------------------

@dataclass(frozen=True)
class FinFunctor:
    src: FinCategory = field(compare=False, hash=False, repr=False)
    dst: FinCategory = field(compare=False, hash=False, repr=False)
    obj: tuple  # pairs (object, object)
    mor: tuple  # pairs (morphism, morphism)

    @classmethod
    def build(cls, src, dst, obj: dict, mor: dict) -> "FinFunctor":
        return cls(src, dst, tuple((a, obj[a]) for a in src.objects),
                   tuple((u, mor[u]) for u in src.morphisms))

    def on_obj(self, a):
        return dict(self.obj)[a]

    def on_mor(self, u):
        return dict(self.mor)[u]

    def validate(self):
        o, m = dict(self.obj), dict(self.mor)
        for u in self.src.morphisms:
            v = m[u]
            if (o[self.src.src(u)], o[self.src.dst(u)]) != self.dst.morphisms[v]:
                raise KleisliError(f"functor mistypes {u!r}")
        for a in self.src.objects:
            if m[self.src.ident(a)] != self.dst.ident(o[a]):
                raise KleisliError("functor does not preserve identities")
        for (g, f), h in self.src.compose.items():
            if m[h] != self.dst.comp(m[g], m[f]):
                raise KleisliError("functor does not preserve composition")
        return self

    def then(self, G: "FinFunctor") -> "FinFunctor":
        """G ∘ self."""
        return FinFunctor.build(self.src, G.dst, {a: G.on_obj(b) for a, b in self.obj},
                                {u: G.on_mor(v) for u, v in self.mor})


def identity_functor(C: FinCategory) -> FinFunctor:
    return FinFunctor.build(C, C, {a: a for a in C.objects}, {u: u for u in C.morphisms})


def category_functors(A: FinCategory, B: FinCategory):
    """Every functor A -> B."""
    objs, mors = list(A.objects), list(A.morphisms)
    out = []
    for omap in iproduct(B.objects, repeat=len(objs)):
        o = dict(zip(objs, omap))
        choices = [[B.ident(o[A.src(u)])] if A.is_identity(u) else B.hom(o[A.src(u)], o[A.dst(u)])
                   for u in mors]
        for mmap in iproduct(*choices):
            m = dict(zip(mors, mmap))
            if all(m[h] == B.comp(m[g], m[f]) for (g, f), h in A.compose.items()):
                out.append(FinFunctor.build(A, B, o, m))
    return out


@dataclass(frozen=True)
class PFunctor:
    """A functor A -> PB: a presheaf per object and a presheaf map per morphism."""
    A: FinCategory = field(compare=False, hash=False, repr=False)
    B: FinCategory = field(compare=False, hash=False, repr=False)
    obj: tuple  # by object index of A
    mor: tuple  # by morphism index of A

    def at(self, a) -> Presheaf:
        return self.obj[index(self.A).opos[a]]

    def validate(self):
        ix = index(self.A)
        for m in range(len(ix.mors)):
            f = self.mor[m]
            if f.src != self.obj[ix.src[m]] or f.dst != self.obj[ix.dst[m]]:
                raise KleisliError(f"f({ix.mors[m]!r}) has the wrong type")
            f.validate()
            if ix.is_id[m] and f != identity_pmor(f.src):
                raise KleisliError("identity not preserved")
        for (g, f), h in ix.comp.items():
            if self.mor[f].then(self.mor[g]) != self.mor[h]:
                raise KleisliError("composition not preserved")
        return self

    def to_json(self):
        ix = index(self.A)
        return {"objects": {str(o): self.obj[i].to_json() for i, o in enumerate(ix.objs)},
                "morphisms": {str(u): [list(c) for c in self.mor[i].comps]
                              for i, u in enumerate(ix.mors) if not ix.is_id[i]}}


def yoneda_functor(C: FinCategory) -> PFunctor:
    ix = index(C)
    return PFunctor(C, C, tuple(yoneda(C, o) for o in ix.objs),
                    tuple(yoneda_mor(C, u) for u in ix.mors))


def pfunctor_from(h: FinFunctor, g: PFunctor) -> PFunctor:
    """g ∘ h for an ordinary functor h : A' -> A."""
    ix = index(h.src)
    return PFunctor(h.src, g.B, tuple(g.at(h.on_obj(o)) for o in ix.objs),
                    tuple(g.mor[index(g.A).mpos[h.on_mor(u)]] for u in ix.mors))


def pfunctors(A: FinCategory, B: FinCategory, s: int, up_to_iso=True, budget=200_000):
    """Functors A -> PB with values of size at most ``s``.

    With ``up_to_iso`` object values range over isomorphism-class
    representatives, which reaches every functor up to natural isomorphism.
    Morphism values are always enumerated exhaustively.
    """
    ix = index(A)
    values = presheaves(B, s, up_to_iso)
    free = [m for m in range(len(ix.mors)) if not ix.is_id[m]]
    pos = {m: k for k, m in enumerate(free)}
    checks = {m: [] for m in free}
    for (g, f), h in ix.comp.items():
        last = max((pos.get(x, -1) for x in (g, f, h)), default=-1)
        if last >= 0:
            checks[free[last]].append((g, f, h))
    out = []
    homs_cache = {}

    def homs(X, Y):
        key = (X, Y)
        if key not in homs_cache:
            homs_cache[key] = presheaf_homs(X, Y)
        return homs_cache[key]

    for choice in iproduct(values, repeat=len(ix.objs)):
        mor = [None] * len(ix.mors)
        for m in range(len(ix.mors)):
            if ix.is_id[m]:
                mor[m] = identity_pmor(choice[ix.src[m]])

        def go(k):
            if len(out) > budget:
                raise BudgetExceeded(f"more than {budget} functors {A.name} -> P{B.name}")
            if k == len(free):
                out.append(PFunctor(A, B, tuple(choice), tuple(mor)))
                return
            m = free[k]
            for phi in homs(choice[ix.src[m]], choice[ix.dst[m]]):
                mor[m] = phi
                if all(mor[f].then(mor[g]) == mor[h] for g, f, h in checks[m]):
                    go(k + 1)
            mor[m] = None

        go(0)
    return out


# -- left Kan extension ---------------------------------------------------------------

@dataclass
class LanValue:
    """f^#(X) with the class of every triple (a, x, y) over each object of B."""
    presheaf: Presheaf
    cls: list  # per B-object: dict triple -> element
    reps: list  # per B-object: list of representative triples
    members: list  # per B-object: the triples of each class, sorted

    def element(self, b_index, triple):
        return self.cls[b_index][triple]


def lan_extend(f: PFunctor, X: Presheaf, budget=200_000) -> LanValue:
    """f^#(X)(b) = (Σ_a X(a) × f(a)(b)) / ~ over the category of elements of X."""
    A, B = f.A, f.B
    ia, ib = index(A), index(B)
    cls, reps, members, sizes = [], [], [], []
    total = 0
    for b in range(len(ib.objs)):
        triples = [(a, x, y) for a in range(len(ia.objs)) for x in range(X.sizes[a])
                   for y in range(f.obj[a].sizes[b])]
        total += len(triples)
        if total > budget:
            raise BudgetExceeded(f"colimit needs more than {budget} triples")
        uf = UnionFind(triples)
        for m in range(len(ia.mors)):
            if ia.is_id[m]:
                continue
            a, a2 = ia.src[m], ia.dst[m]
            fm = f.mor[m].comps[b]
            act = X.act[m]
            for x2 in range(X.sizes[a2]):
                for y in range(f.obj[a].sizes[b]):
                    uf.union((a, act[x2], y), (a2, x2, fm[y]))
        by_root = {}
        for t in triples:
            by_root.setdefault(uf.find(t), []).append(t)
        groups = sorted((sorted(g) for g in by_root.values()), key=lambda g: g[0])
        table = {}
        for k, g in enumerate(groups):
            for t in g:
                table[t] = k
        cls.append(table)
        reps.append([g[0] for g in groups])
        members.append(groups)
        sizes.append(len(groups))
    act = []
    for m in range(len(ib.mors)):
        b1, b = ib.src[m], ib.dst[m]
        act.append(tuple(cls[b1][(a, x, f.obj[a].act[m][y])] for (a, x, y) in reps[b]))
    return LanValue(Presheaf(B, tuple(sizes), tuple(act)), cls, reps, members)


def lan_map(f: PFunctor, phi: PMor, LX: LanValue, LY: LanValue) -> PMor:
    """f^#(phi) : f^#(X) -> f^#(Y)."""
    comps = []
    for b, reps in enumerate(LX.reps):
        comps.append(tuple(LY.cls[b][(a, phi.comps[a][x], y)] for (a, x, y) in reps))
    return PMor(LX.presheaf, LY.presheaf, tuple(comps))


class Extension:
    """f^# with memoised values, so repeated laws reuse the colimits."""

    def __init__(self, f: PFunctor, budget=200_000):
        self.f = f
        self.budget = budget
        self._memo = {}
        self._mor_memo = {}

    def clear(self):
        self._memo.clear()
        self._mor_memo.clear()

    def __call__(self, X: Presheaf) -> LanValue:
        hit = self._memo.get(X)
        if hit is None:
            hit = lan_extend(self.f, X, self.budget)
            self._memo[X] = hit
        return hit

    def on_mor(self, phi: PMor) -> PMor:
        hit = self._mor_memo.get(phi)
        if hit is None:
            hit = lan_map(self.f, phi, self(phi.src), self(phi.dst))
            self._mor_memo[phi] = hit
        return hit


def arrows_between(Xs):
    """Every presheaf map between members of ``Xs``."""
    return [k for X in Xs for Y in Xs for k in presheaf_homs(X, Y)]


def kleisli_compose(g: PFunctor, f: PFunctor, g_ext: Extension | None = None) -> PFunctor:
    """g ∘ f := g^# f : A -> PC."""
    g_ext = g_ext or Extension(g)
    return PFunctor(f.A, g.B, tuple(g_ext(X).presheaf for X in f.obj),
                    tuple(g_ext.on_mor(phi) for phi in f.mor))


# -- checks --------------------------------------------------------------------------

def _classwise(value: LanValue, b, fn):
    """Turn ``fn`` on triples into a function on classes, checking it is well defined."""
    out = [None] * len(value.reps[b])
    for t, k in value.cls[b].items():
        v = fn(t)
        if out[k] is None:
            out[k] = v
        elif out[k] != v:
            return None
    return tuple(out)


def _verify_iso(phi: PMor) -> bool:
    try:
        phi.validate()
    except KleisliError:
        return False
    if not phi.is_iso():
        return False
    back = phi.inverse()
    return phi.then(back) == identity_pmor(phi.src) and back.then(phi) == identity_pmor(phi.dst)


def law_unit_witness(f: PFunctor, ext: Extension | None = None):
    """ψ_a : f(a) -> f^#(y_a), y ↦ [(a, id_a, y)], checked natural in b and in a."""
    A = f.A
    ia = index(A)
    ext = ext or Extension(f)
    psi = []
    for a in range(len(ia.objs)):
        value = ext(yoneda(A, ia.objs[a]))
        ida = yoneda_element(A, ia.mors[ia.ident[a]])
        comps = tuple(tuple(value.cls[b][(a, ida, y)] for y in range(f.obj[a].sizes[b]))
                      for b in range(len(index(f.B).objs)))
        phi = PMor(f.obj[a], value.presheaf, comps)
        if not _verify_iso(phi):
            return False, {"object": str(ia.objs[a]), "problem": "component is not a natural bijection"}
        psi.append(phi)
    for m in range(len(ia.mors)):
        u = ia.mors[m]
        lhs = f.mor[m].then(psi[ia.dst[m]])
        rhs = psi[ia.src[m]].then(ext.on_mor(yoneda_mor(A, u)))
        if lhs != rhs:
            return False, {"morphism": str(u), "problem": "not natural in the object of A"}
    return True, psi


def law_yoneda_witness(A: FinCategory, Xs, ext: Extension | None = None, arrows=None):
    """φ_X : X -> (y_A)^#(X), x ↦ [(a, x, id_a)], checked natural in X."""
    ia = index(A)
    ext = ext or Extension(yoneda_functor(A))
    phis = {}
    for X in Xs:
        value = ext(X)
        comps = tuple(tuple(value.cls[a][(a, x, yoneda_element(A, ia.mors[ia.ident[a]]))]
                            for x in range(X.sizes[a])) for a in range(len(ia.objs)))
        phi = PMor(X, value.presheaf, comps)
        if not _verify_iso(phi):
            return False, {"presheaf": X.to_json(), "problem": "component is not a natural bijection"}
        phis[X] = phi
    for k in arrows_between(Xs) if arrows is None else arrows:
        if k.then(phis[k.dst]) != phis[k.src].then(ext.on_mor(k)):
            return False, {"from": k.src.to_json(), "to": k.dst.to_json(), "problem": "not natural in X"}
    return True, phis


def law_assoc_witness(f: PFunctor, g: PFunctor, Xs, f_ext=None, g_ext=None, arrows=None):
    """Φ_X : (g^# f)^#(X) -> g^#(f^#(X)), [(a, x, [(b, y, w)])] ↦ [(b, [(a, x, y)], w)]."""
    f_ext = f_ext or Extension(f)
    g_ext = g_ext or Extension(g)
    gf = kleisli_compose(g, f, g_ext)
    gf_ext = Extension(gf)
    ic = index(g.B)
    phis = {}
    for X in Xs:
        left = gf_ext(X)
        fX = f_ext(X)
        right = g_ext(fX.presheaf)
        comps = []
        for c in range(len(ic.objs)):
            def send(t, c=c):
                a, x, z = t
                inner = g_ext(f.obj[a])
                images = {right.cls[c][(b, fX.cls[b][(a, x, y)], w)]
                          for (b, y, w) in inner.members[c][z]}
                return images.pop() if len(images) == 1 else ("ambiguous", t)
            comp = _classwise(left, c, send)
            if comp is None or any(isinstance(v, tuple) for v in comp):
                return False, {"presheaf": X.to_json(), "object": str(ic.objs[c]),
                               "problem": "map depends on representatives"}
            comps.append(comp)
        phi = PMor(left.presheaf, right.presheaf, tuple(comps))
        if not _verify_iso(phi):
            return False, {"presheaf": X.to_json(), "problem": "component is not a natural bijection"}
        phis[X] = phi
    for k in arrows_between(Xs) if arrows is None else arrows:
        lhs = phis[k.src].then(g_ext.on_mor(f_ext.on_mor(k)))
        rhs = gf_ext.on_mor(k).then(phis[k.dst])
        if lhs != rhs:
            return False, {"from": k.src.to_json(), "to": k.dst.to_json(), "problem": "not natural in X"}
    return True, phis


def default_family():
    """Small categories within two objects and six morphisms used by the suites."""
    return [empty_category(), terminal(), poset_arrow(), discrete(("x", "y")),
            cyclic_group(2), idempotent_monoid()]


def kleisli_laws_check(family=None, s=2, laws=("unit", "yoneda", "assoc"), budget=2_000_000) -> CheckReport:
    """The three Kleisli laws with explicit bijections over every f : A -> PB, g : B -> PC."""
    family = default_family() if family is None else family
    report = CheckReport("kleisli-laws")
    funs = {}

    def funs_of(A, B):
        key = (id(A), id(B))
        if key not in funs:
            funs[key] = pfunctors(A, B, s)
        return funs[key]

    work = 0
    for A in family:
        Xs = presheaves(A, s)
        arrows = arrows_between(Xs)
        if "yoneda" in laws:
            ok, wit = law_yoneda_witness(A, Xs, arrows=arrows)
            report.verdict("yoneda").tick(ok, None if ok else {"A": A.name, **wit})
        for B in family:
            # extensions are rebuilt per (A, B, C) so their memo tables stay bounded
            fs = [(f, Extension(f)) for f in funs_of(A, B)]
            if "unit" in laws:
                for f, f_ext in fs:
                    ok, wit = law_unit_witness(f, f_ext)
                    report.verdict("unit").tick(ok, None if ok else {"A": A.name, "B": B.name,
                                                                    "f": f.to_json(), **wit})
            if "assoc" not in laws:
                continue
            for C in family:
                gs = [(g, Extension(g)) for g in funs_of(B, C)]
                for f, f_ext in fs:
                    for g, g_ext in gs:
                        work += 1
                        if work > budget:
                            raise BudgetExceeded("Kleisli law enumeration over budget")
                        ok, wit = law_assoc_witness(f, g, Xs, f_ext, g_ext, arrows)
                        report.verdict("assoc").tick(ok, None if ok else {
                            "A": A.name, "B": B.name, "C": C.name, "f": f.to_json(), "g": g.to_json(), **wit})
                for _, f_ext in fs:
                    f_ext.clear()
    return report


@dataclass
class KleisliCategory:
    """Objects are categories; hom(A, B) lists functors A -> PB up to isomorphism."""
    objects: list
    s: int = 2

    def hom(self, A, B):
        return pfunctors(A, B, self.s)

    def identity(self, A) -> PFunctor:
        return yoneda_functor(A)

    def compose(self, g: PFunctor, f: PFunctor) -> PFunctor:
        return kleisli_compose(g, f)


def kleisli_category(family=None, s=2) -> KleisliCategory:
    return KleisliCategory(default_family() if family is None else list(family), s)


def natural_iso(F: PFunctor, G: PFunctor):
    """A natural isomorphism F ≅ G of functors A -> PB, as a tuple of components, or None."""
    ia = index(F.A)
    n = len(ia.objs)
    isos = [_search_pmors(F.obj[a], G.obj[a], bijective=True) for a in range(n)]
    chosen = [None] * n

    def go(a):
        if a == n:
            return True
        for th in isos[a]:
            chosen[a] = th
            ok = True
            for m in range(len(ia.mors)):
                s_, d = ia.src[m], ia.dst[m]
                if max(s_, d) != a:
                    continue
                if F.mor[m].then(chosen[d]) != chosen[s_].then(G.mor[m]):
                    ok = False
                    break
            if ok and go(a + 1):
                return True
        chosen[a] = None
        return False

    return tuple(chosen) if go(0) else None


# -- cartesian closure ---------------------------------------------------------------------

def curry(H: PFunctor, A: FinCategory, B: FinCategory, C: FinCategory, BopC: FinCategory) -> PFunctor:
    """Λ(H)(a)(b, c) = H(a, b)(c) for H : A×B -> PC, giving A -> P(B^op×C)."""
    iA, iC, iQ, iH = index(A), index(C), index(BopC), index(H.A)
    objs = []
    for a in iA.objs:
        sizes = tuple(H.at((a, b)).size(c) for (b, c) in iQ.objs)
        act = []
        for (beta, gamma) in iQ.mors:
            # (beta, gamma) : (b1, c1) -> (b2, c2) in B^op×C, so beta : b2 -> b1 in B
            b2, c2 = B.src(beta), C.dst(gamma)
            b1 = B.dst(beta)
            step = H.mor[iH.mpos[(A.ident(a), beta)]].comps[iC.opos[c2]]
            restrict = H.at((a, b1)).act[iC.mpos[gamma]]
            act.append(tuple(restrict[step[x]] for x in range(H.at((a, b2)).size(c2))))
        objs.append(Presheaf(BopC, sizes, tuple(act)))
    mors = []
    for u in iA.mors:
        a, a2 = A.src(u), A.dst(u)
        comps = tuple(H.mor[iH.mpos[(u, B.ident(b))]].comps[iC.opos[c]] for (b, c) in iQ.objs)
        mors.append(PMor(objs[iA.opos[a]], objs[iA.opos[a2]], comps))
    return PFunctor(A, BopC, tuple(objs), tuple(mors))


def uncurry(K: PFunctor, AB: FinCategory, B: FinCategory, C: FinCategory) -> PFunctor:
    """H(a, b)(c) = K(a)(b, c), the inverse of ``curry``."""
    iAB, iC, iQ = index(AB), index(C), index(K.B)
    A = K.A
    iA = index(A)
    objs = []
    for (a, b) in iAB.objs:
        Q = K.at(a)
        sizes = tuple(Q.sizes[iQ.opos[(b, c)]] for c in iC.objs)
        act = tuple(Q.act[iQ.mpos[(B.ident(b), gamma)]] for gamma in iC.mors)
        objs.append(Presheaf(C, sizes, act))
    mors = []
    for (u, beta) in iAB.mors:
        a, b = A.src(u), B.src(beta)
        a2, b2 = A.dst(u), B.dst(beta)
        Ku = K.mor[iA.mpos[u]]
        Q2 = K.at(a2)
        comps = []
        for c in iC.objs:
            first = Ku.comps[iQ.opos[(b, c)]]
            # Q2 acts by (beta, id_c) : (b2, c) -> (b, c) in B^op×C
            second = Q2.act[iQ.mpos[(beta, C.ident(c))]]
            comps.append(tuple(second[first[x]] for x in range(len(first))))
        mors.append(PMor(objs[iAB.opos[(a, b)]], objs[iAB.opos[(a2, b2)]], tuple(comps)))
    return PFunctor(AB, C, tuple(objs), tuple(mors))


def curry_check(A: FinCategory, B: FinCategory, C: FinCategory, s=2, reindex_from=()) -> CheckReport:
    """Fun(A×B, PC) ≅ Fun(A, P(B^op×C)) by currying, on labelled functors.

    Checks both round trips, equal counts, and naturality along every
    functor A' -> A for A' in ``reindex_from``.
    """
    report = CheckReport(f"curry {A.name},{B.name},{C.name}")
    AB = A.product(B)
    BopC = B.opposite().product(C)
    left = pfunctors(AB, C, s, up_to_iso=False)
    right = pfunctors(A, BopC, s, up_to_iso=False)
    report.notes["counts"] = [len(left), len(right)]
    report.verdict("counts").tick(len(left) == len(right), {"left": len(left), "right": len(right)})
    right_set = set(right)
    images = set()
    v = report.verdict("round-trip")
    for H in left:
        K = curry(H, A, B, C, BopC)
        ok = True
        try:
            K.validate()
        except KleisliError:
            ok = False
        back = uncurry(K, AB, B, C) if ok else None
        ok = ok and K in right_set and back == H
        images.add(K)
        v.tick(ok, lambda: {"H": H.to_json()})
    for K in right:
        H = uncurry(K, AB, B, C)
        v.tick(curry(H, A, B, C, BopC) == K, lambda: {"K": K.to_json()})
    report.verdict("bijective").tick(images == right_set, {"missing": len(right_set - images)})
    nat = report.verdict("natural")
    for A2 in reindex_from:
        A2B = A2.product(B)
        for r in category_functors(A2, A):
            rB = FinFunctor.build(A2B, AB, {(a, b): (r.on_obj(a), b) for (a, b) in A2B.objects},
                                  {(u, beta): (r.on_mor(u), beta) for (u, beta) in A2B.morphisms})
            for H in left:
                lhs = curry(pfunctor_from(rB, H), A2, B, C, BopC)
                rhs = pfunctor_from(r, curry(H, A, B, C, BopC))
                nat.tick(lhs == rhs, lambda: {"A'": A2.name, "H": H.to_json()})
    return report


# -- monads on finite categories -----------------------------------------------------------

class MonadInstance:
    """A monad L on finite categories with a completion witness.

    ``pinned(A)`` lists the objects of LA that carry the structure L adds.
    Structure-preserving functors into PB send them to the empty presheaf,
    and presheaves on LA that respect the structure are singletons there.
    The witness is a bijection between structure-preserving functors
    A -> PB and LA -> PB.
    """
    name = "monad"

    def apply(self, A: FinCategory) -> FinCategory:
        raise NotImplementedError

    def eta(self, A) -> FinFunctor:
        raise NotImplementedError

    def mu(self, A) -> FinFunctor:
        raise NotImplementedError

    def on_functor(self, F: FinFunctor) -> FinFunctor:
        raise NotImplementedError

    def pinned(self, A):
        return []

    def in_domain(self, f: PFunctor) -> bool:
        """f : A -> PB preserves whatever structure A already carries."""
        own = set(f.A.objects)
        return all(f.at(p).total == 0 for p in self.pinned(f.A) if p in own)

    # completion witness: structure-preserving LA -> PB  <->  A -> PB
    def extend(self, f: PFunctor) -> PFunctor:
        A, B = f.A, f.B
        LA = self.apply(A)
        eta = self.eta(A)
        ila = index(LA)
        back = {eta.on_obj(a): a for a in A.objects}
        empty = empty_presheaf(B)
        objs = tuple(f.at(back[o]) if o in back else empty for o in ila.objs)
        mor_back = {eta.on_mor(u): u for u in A.morphisms}
        mors = []
        for m, u in enumerate(ila.mors):
            if u in mor_back:
                mors.append(f.mor[index(A).mpos[mor_back[u]]])
            else:
                src, dst = objs[ila.src[m]], objs[ila.dst[m]]
                if src.total:
                    raise KleisliError("structure morphism leaves a non-empty value")
                mors.append(PMor(src, dst, tuple(() for _ in src.sizes)))
        return PFunctor(LA, B, objs, tuple(mors))

    def restrict(self, G: PFunctor, A: FinCategory) -> PFunctor:
        return pfunctor_from(self.eta(A), G)

    def preserves_structure(self, G: PFunctor, A: FinCategory) -> bool:
        return all(G.at(p).total == 0 for p in self.pinned(A))

    # structured presheaves on LA
    def reflect(self, X: Presheaf, A: FinCategory) -> tuple:
        """Left adjoint onto presheaves that are singletons at the pinned objects.

        Returns the reflected presheaf and the unit X -> r(X).
        """
        LA = X.base
        ix = index(LA)
        pins = {ix.opos[p] for p in self.pinned(A)}
        for m in range(len(ix.mors)):
            if ix.dst[m] in pins and ix.src[m] not in pins:
                raise KleisliError("reflection needs pinned objects without incoming maps")
        sizes = tuple(1 if i in pins else n for i, n in enumerate(X.sizes))
        act = []
        for m in range(len(ix.mors)):
            if ix.src[m] in pins:
                act.append((0,) * sizes[ix.dst[m]])
            else:
                act.append(X.act[m])
        R = Presheaf(LA, sizes, tuple(act))
        unit = PMor(X, R, tuple((0,) * n if i in pins else tuple(range(n)) for i, n in enumerate(X.sizes)))
        return R, unit


class IdentityMonad(MonadInstance):
    name = "identity"

    def apply(self, A):
        return A

    def eta(self, A):
        return identity_functor(A)

    def mu(self, A):
        return identity_functor(A)

    def on_functor(self, F):
        return F


BOTTOM = "⊥"


class InitialCompletion(MonadInstance):
    """Freely add an initial object ⊥ unless one exists (then LA = A).

    The added object has exactly one morphism to every object and receives
    only its identity.
    """
    name = "initial-completion"

    def __init__(self):
        self._memo = {}

    def apply(self, A):
        hit = self._memo.get(id(A))
        if hit is not None and hit[0] is A:
            return hit[1]
        if A.initial_objects():
            LA = A
        else:
            bot = BOTTOM
            while bot in A.objects:
                bot += "'"
            objects = tuple(A.objects) + (bot,)
            morphisms = dict(A.morphisms)
            compose = dict(A.compose)
            bang = {a: ("!", a) for a in objects}
            for a in objects:
                morphisms[bang[a]] = (bot, a)
            identities = dict(A.identities)
            identities[bot] = bang[bot]
            for a in objects:
                compose[(bang[a], bang[bot])] = bang[a]
                for g in A.morphisms:
                    if A.src(g) == a:
                        compose[(g, bang[a])] = bang[A.dst(g)]
            LA = FinCategory(objects, morphisms, identities, compose, name=f"L{A.name}")
            LA.validate()
        self._memo[id(A)] = (A, LA)
        return LA

    def added(self, A):
        LA = self.apply(A)
        return None if LA is A else LA.objects[-1]

    def pinned(self, A):
        return self.apply(A).initial_objects()

    def eta(self, A):
        LA = self.apply(A)
        return FinFunctor.build(A, LA, {a: a for a in A.objects}, {u: u for u in A.morphisms})

    def mu(self, A):
        LA = self.apply(A)
        if self.apply(LA) is not LA:
            raise KleisliError("completion is not idempotent")
        return identity_functor(LA)

    def on_functor(self, F):
        A, B = F.src, F.dst
        LA, LB = self.apply(A), self.apply(B)
        obj, mor = dict(F.obj), dict(F.mor)
        bot = self.added(A)
        if bot is not None:
            target = LB.initial_objects()[0]
            obj[bot] = target
            for a in LA.objects:
                (u,) = [u for u in LA.hom(bot, a)]
                (v,) = LB.hom(target, obj[a])
                mor[u] = v
        return FinFunctor.build(LA, LB, obj, mor)


def monad_laws_check(L: MonadInstance, family=None) -> CheckReport:
    family = default_family() if family is None else family
    report = CheckReport(f"monad {L.name}")
    for A in family:
        LA = L.apply(A)
        eta_LA, mu_A = L.eta(LA), L.mu(A)
        L_eta = L.on_functor(L.eta(A))
        idLA = identity_functor(LA)
        for name, F in (("unit-left", eta_LA.then(mu_A)), ("unit-right", L_eta.then(mu_A))):
            F.validate()
            report.verdict(name).tick(F == idLA, {"A": A.name})
        LLA = L.apply(LA)
        lhs = L.mu(LA).then(mu_A)
        rhs = L.on_functor(mu_A).then(mu_A)
        report.verdict("assoc").tick(lhs.obj == rhs.obj and lhs.mor == rhs.mor, {"A": A.name})
        report.verdict("idempotent").tick(LLA is LA, {"A": A.name})
        for B in family:
            for F in category_functors(A, B):
                lhs = F.then(L.eta(B))
                rhs = L.eta(A).then(L.on_functor(F))
                report.verdict("eta-natural").tick(lhs == rhs, {"A": A.name, "B": B.name})
        # completion witness round trips on the functors A -> PA
        for f in pfunctors(A, A, 1):
            if not L.in_domain(f):
                continue
            ext = L.extend(f)
            ok = L.preserves_structure(ext, A) and L.restrict(ext, A) == f
            ok = ok and L.extend(L.restrict(ext, A)) == ext
            report.verdict("witness").tick(ok, {"A": A.name, "f": f.to_json()})
    return report


class _Lambda:
    """λ_A = r ∘ (y_{LA} η_A)^# : PA -> P(LA), landing in structured presheaves."""

    def __init__(self, L: MonadInstance, A: FinCategory, reflect=True):
        self.L, self.A, self.reflect = L, A, reflect
        self.LA = L.apply(A)
        self.gen = pfunctor_from(L.eta(A), yoneda_functor(self.LA))
        self.ext = Extension(self.gen)

    def __call__(self, Z: Presheaf):
        value = self.ext(Z)
        if not self.reflect:
            return value.presheaf, value, identity_pmor(value.presheaf)
        R, unit = self.L.reflect(value.presheaf, self.A)
        return R, value, unit

    def on_mor(self, phi: PMor) -> PMor:
        R1, v1, u1 = self(phi.src)
        R2, v2, u2 = self(phi.dst)
        raw = self.ext.on_mor(phi)
        ix = index(self.LA)
        pins = {ix.opos[p] for p in self.L.pinned(self.A)} if self.reflect else set()
        comps = tuple((0,) * R1.sizes[i] if i in pins else raw.comps[i] for i in range(len(ix.objs)))
        return PMor(R1, R2, comps)


def _psi(lam: _Lambda, b0, target):
    """Comparison λ(P) -> y_{LB}(target) where P is y_B(b0), or empty when b0 is None.

    Over a pinned object c the single element goes to the unique c -> target;
    elsewhere [(b', x, w)] goes to η(x) ∘ w.
    """
    L, B, LB = lam.L, lam.A, lam.LA
    ib, ilb = index(B), index(LB)
    P = yoneda(B, b0) if b0 is not None else empty_presheaf(B)
    R, value, unit = lam(P)
    Y = yoneda(LB, target)
    t = ilb.opos[target]
    eta = L.eta(B)
    pins = {ilb.opos[p] for p in L.pinned(B)} if lam.reflect else set()
    comps = []
    for c in range(len(ilb.objs)):
        homs = ilb.hom[(c, t)]
        where = {h: k for k, h in enumerate(homs)}
        if c in pins:
            if len(homs) != 1:
                return None
            comps.append((where[homs[0]],))
            continue

        def send(tr, c=c):
            bp, x, w = tr
            xm = ib.hom[(bp, ib.opos[b0])][x]
            xi = ilb.mpos[eta.on_mor(ib.mors[xm])]
            wi = ilb.hom[(c, ilb.opos[eta.on_obj(ib.objs[bp])])][w]
            return where[ilb.comp[(xi, wi)]]

        comp = _classwise(value, c, send)
        if comp is None:
            return None
        comps.append(comp)
    return PMor(R, Y, tuple(comps))


def distributivity_check(L: MonadInstance, family=None, reflect=True) -> CheckReport:
    """λ_A ∘ L(y_A) ≅ y_{LA}, witnessed by explicit components natural in the object of LA."""
    family = default_family() if family is None else family
    report = CheckReport(f"distributivity {L.name}")
    v = report.verdict("distributivity")
    for A in family:
        lam = _Lambda(L, A, reflect)
        LA, eta = lam.LA, L.eta(A)
        back = {eta.on_obj(a): a for a in A.objects}
        psis = {}
        for a in LA.objects:
            psi = _psi(lam, back.get(a), a)
            ok = psi is not None and _verify_iso(psi)
            v.tick(ok, lambda: {
                "A": A.name, "object": str(a), "problem": "no natural bijection λ(L y a) -> y(a)",
                "left_sizes": list(lam(yoneda(A, back[a]) if a in back else empty_presheaf(A))[0].sizes),
                "right_sizes": list(yoneda(LA, a).sizes)})
            psis[a] = psi if ok else None
        Ly = L.extend(yoneda_functor(A))
        for u in LA.morphisms:
            a, a2 = LA.src(u), LA.dst(u)
            if psis[a] is None or psis[a2] is None:
                continue
            left = lam.on_mor(Ly.mor[index(LA).mpos[u]])
            ok = left.then(psis[a2]) == psis[a].then(yoneda_mor(LA, u))
            v.tick(ok, {"A": A.name, "morphism": str(u), "problem": "comparison not natural"})
    return report


def lift_kleisli(L: MonadInstance, g: PFunctor) -> PFunctor:
    """L_P(g) = λ_B ∘ L(g) : LA -> P(LB) for g : A -> PB."""
    lam = _Lambda(L, g.B)
    Lg = L.extend(g)
    return PFunctor(Lg.A, lam.LA, tuple(lam(X)[0] for X in Lg.obj), tuple(lam.on_mor(p) for p in Lg.mor))


def extend_monad(L: MonadInstance, family=None) -> CheckReport:
    """L_P(F h) ≅ F(L h) for every functor h : A -> B in the family, F the free functor h ↦ y_B h."""
    family = default_family() if family is None else family
    report = CheckReport(f"extension {L.name}")
    v = report.verdict("extension")
    dist = distributivity_check(L, family)
    if not dist.passed:
        raise DistributivityMissing(f"{L.name} fails distributivity: {dist.failed()}")
    for A in family:
        for B in family:
            for h in category_functors(A, B):
                Fh = pfunctor_from(h, yoneda_functor(B))
                left = lift_kleisli(L, Fh)
                Lh = L.on_functor(h)
                LB = L.apply(B)
                right = pfunctor_from(Lh, yoneda_functor(LB))
                lam = _Lambda(L, B)
                etaA = L.eta(A)
                back = {etaA.on_obj(a): a for a in A.objects}
                comps = []
                ok = True
                for a in index(left.A).objs:
                    b0 = h.on_obj(back[a]) if a in back else None
                    psi = _psi(lam, b0, Lh.on_obj(a))
                    if psi is None or not _verify_iso(psi) or psi.src != left.at(a):
                        ok = False
                        break
                    comps.append(psi)
                if ok:
                    il = index(left.A)
                    for m in range(len(il.mors)):
                        if left.mor[m].then(comps[il.dst[m]]) != comps[il.src[m]].then(right.mor[m]):
                            ok = False
                            break
                v.tick(ok, {"A": A.name, "B": B.name, "h": {str(k): str(x) for k, x in h.obj}})
    return report


# -- enough points --------------------------------------------------------------------------

@dataclass
class PresheafFunctor:
    """A functor PA -> PB given by explicit callables on presheaves and their maps."""
    A: FinCategory
    B: FinCategory
    on_obj: object
    on_mor: object
    name: str = ""


def from_extension(f: PFunctor) -> PresheafFunctor:
    ext = Extension(f)
    return PresheafFunctor(f.A, f.B, lambda X: ext(X).presheaf, ext.on_mor, name="f^#")


def squaring_functor() -> PresheafFunctor:
    """X ↦ X × X on presheaves over the terminal category: agrees with the identity on y(*)."""
    T = terminal()

    def obj(X):
        n = X.sizes[0]
        return Presheaf(T, (n * n,), (tuple(range(n * n)),))

    def mor(phi):
        n = phi.src.sizes[0]
        m = phi.dst.sizes[0]
        c = phi.comps[0]
        return PMor(obj(phi.src), obj(phi.dst), (tuple(c[i] * m + c[j] for i in range(n) for j in range(n)),))

    return PresheafFunctor(T, T, obj, mor, name="square")


def coproduct(X: Presheaf, Y: Presheaf):
    """X + Y with its injections."""
    C = X.base
    ix = index(C)
    sizes = tuple(a + b for a, b in zip(X.sizes, Y.sizes))
    act = []
    for m in range(len(ix.mors)):
        off = X.sizes[ix.src[m]]
        act.append(tuple(X.act[m]) + tuple(v + off for v in Y.act[m]))
    S = Presheaf(C, sizes, tuple(act))
    inl = PMor(X, S, tuple(tuple(range(n)) for n in X.sizes))
    inr = PMor(Y, S, tuple(tuple(range(X.sizes[i], X.sizes[i] + n)) for i, n in enumerate(Y.sizes)))
    return S, inl, inr


def coequalizer(f: PMor, g: PMor):
    """The quotient of the codomain by f(x) ~ g(x), with its projection."""
    Y = f.dst
    C = Y.base
    ix = index(C)
    classes = []
    for i in range(len(ix.objs)):
        uf = UnionFind(range(Y.sizes[i]))
        for x in range(f.src.sizes[i]):
            uf.union(f.comps[i][x], g.comps[i][x])
        classes.append(uf)
    # close under the action: related elements must stay related after restriction
    changed = True
    while changed:
        changed = False
        for m in range(len(ix.mors)):
            a, b = ix.src[m], ix.dst[m]
            for y1 in range(Y.sizes[b]):
                for y2 in range(Y.sizes[b]):
                    if classes[b].same(y1, y2) and not classes[a].same(Y.act[m][y1], Y.act[m][y2]):
                        classes[a].union(Y.act[m][y1], Y.act[m][y2])
                        changed = True
    names = []
    for i in range(len(ix.objs)):
        roots = sorted({classes[i].find(y) for y in range(Y.sizes[i])})
        names.append({r: k for k, r in enumerate(roots)})
    sizes = tuple(len(n) for n in names)
    act = []
    for m in range(len(ix.mors)):
        a, b = ix.src[m], ix.dst[m]
        reps = {}
        for y in range(Y.sizes[b]):
            reps.setdefault(names[b][classes[b].find(y)], y)
        act.append(tuple(names[a][classes[a].find(Y.act[m][reps[k]])] for k in range(sizes[b])))
    Q = Presheaf(C, sizes, tuple(act))
    proj = PMor(Y, Q, tuple(tuple(names[i][classes[i].find(y)] for y in range(Y.sizes[i]))
                            for i in range(len(ix.objs))))
    return Q, proj


def preserves_colimits(Phi: PresheafFunctor, s=2, limit_pairs=None):
    """Check Φ(∅) = ∅, Φ(X+Y) ≅ ΦX + ΦY and Φ(coeq) ≅ coeq(Φ) through the canonical maps.

    Returns (True, None) or (False, witness).
    """
    A = Phi.A
    Xs = presheaves(A, s)
    if Phi.on_obj(empty_presheaf(A)).total != 0:
        return False, {"colimit": "initial", "value": Phi.on_obj(empty_presheaf(A)).to_json()}
    for X in Xs:
        for Y in Xs:
            S, inl, inr = coproduct(X, Y)
            FS = Phi.on_obj(S)
            FX, FY = Phi.on_obj(X), Phi.on_obj(Y)
            T, _, _ = coproduct(FX, FY)
            l, r = Phi.on_mor(inl), Phi.on_mor(inr)
            comps = tuple(l.comps[i] + r.comps[i] for i in range(len(T.sizes)))
            cmp = PMor(T, FS, comps)
            if not _verify_iso(cmp):
                return False, {"colimit": "coproduct", "X": X.to_json(), "Y": Y.to_json(),
                               "sizes": [list(FS.sizes), list(T.sizes)]}
    pairs = 0
    for X in Xs:
        for Y in Xs:
            homs = presheaf_homs(X, Y)
            for f in homs:
                for g in homs:
                    pairs += 1
                    if limit_pairs is not None and pairs > limit_pairs:
                        return True, None
                    Q, q = coequalizer(f, g)
                    FQ = Phi.on_obj(Q)
                    Ff, Fg = Phi.on_mor(f), Phi.on_mor(g)
                    Q2, q2 = coequalizer(Ff, Fg)
                    Fq = Phi.on_mor(q)
                    comps = []
                    for i in range(len(Q2.sizes)):
                        m = {}
                        for y in range(len(q2.comps[i])):
                            m.setdefault(q2.comps[i][y], set()).add(Fq.comps[i][y])
                        if any(len(v) != 1 for v in m.values()):
                            return False, {"colimit": "coequalizer", "problem": "comparison ill defined"}
                        comps.append(tuple(m[k].pop() for k in range(Q2.sizes[i])))
                    cmp = PMor(Q2, FQ, tuple(comps))
                    if not _verify_iso(cmp):
                        return False, {"colimit": "coequalizer", "X": X.to_json(), "Y": Y.to_json()}
    return True, None


def extension_iso(f: PFunctor, g: PFunctor, theta, X: Presheaf, f_ext: Extension, g_ext: Extension) -> PMor:
    """θ^#_X : f^#(X) -> g^#(X), [(a, x, y)] ↦ [(a, x, θ_a(y))]."""
    LX, GX = f_ext(X), g_ext(X)
    comps = []
    for b in range(len(LX.reps)):
        comp = _classwise(LX, b, lambda t, b=b: GX.cls[b][(t[0], t[1], theta[t[0]].comps[b][t[2]])])
        if comp is None:
            return None
        comps.append(comp)
    return PMor(LX.presheaf, GX.presheaf, tuple(comps))


def enough_points_check(A: FinCategory, B: FinCategory, s=2, extra=()) -> CheckReport:
    """Colimit-preserving functors PA -> PB that agree on representables are isomorphic.

    Candidates are f^# for every f : A -> PB, plus the functors in ``extra``,
    which are admitted only if they preserve the generating colimits.
    Agreement on representables means a natural isomorphism of the
    restrictions along y_A.
    """
    report = CheckReport(f"enough-points {A.name},{B.name}")
    v = report.verdict("enough-points")
    excluded = []
    candidates = [(f, Extension(f)) for f in pfunctors(A, B, s)]
    Xs = presheaves(A, s)
    for i, (f, fe) in enumerate(candidates):
        for g, ge in candidates[i:]:
            theta = natural_iso(f, g)
            if theta is None:
                continue
            ok = True
            isos = {}
            for X in Xs:
                phi = extension_iso(f, g, theta, X, fe, ge)
                if phi is None or not _verify_iso(phi):
                    ok = False
                    break
                isos[X] = phi
            if ok:
                for X in Xs:
                    for Y in Xs:
                        for k in presheaf_homs(X, Y):
                            if isos[X].then(ge.on_mor(k)) != fe.on_mor(k).then(isos[Y]):
                                ok = False
            v.tick(ok, {"f": f.to_json(), "g": g.to_json()})
    for Phi in extra:
        good, why = preserves_colimits(Phi, s)
        if not good:
            excluded.append({"functor": Phi.name, "reason": why})
            continue
        restricted = PFunctor(A, B, tuple(Phi.on_obj(yoneda(A, a)) for a in A.objects),
                              tuple(Phi.on_mor(yoneda_mor(A, u)) for u in A.morphisms))
        for f, fe in candidates:
            theta = natural_iso(restricted, f)
            if theta is None:
                continue
            ok = all(find_iso(Phi.on_obj(X), fe(X).presheaf) is not None for X in Xs)
            v.tick(ok, {"functor": Phi.name, "f": f.to_json()})
    report.notes["out_of_hypothesis"] = excluded
    return report


def co_kleisli_curry_check(L: MonadInstance, A, B, C, s=1) -> CheckReport:
    """Structure-preserving LA×B -> PC correspond to A×B -> PC and then curry.

    Functors out of L(A×B) are re-indexed through the completion witness
    before currying, and every step is checked to round-trip.
    """
    report = CheckReport(f"co-kleisli curry {L.name}")
    v = report.verdict("round-trip")
    AB = A.product(B)
    BopC = B.opposite().product(C)
    LAB = L.apply(AB)
    for H in pfunctors(AB, C, s, up_to_iso=False):
        if not L.in_domain(H):
            continue
        G = L.extend(H)
        ok = G.A is LAB and L.preserves_structure(G, AB)
        H2 = L.restrict(G, AB)
        K = curry(H2, A, B, C, BopC)
        ok = ok and H2 == H and uncurry(K, AB, B, C) == H and L.extend(uncurry(K, AB, B, C)) == G
        v.tick(ok, {"H": H.to_json()})
    return report
