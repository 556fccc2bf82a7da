"""Finite categories given by explicit composition tables."""

from __future__ import annotations

from dataclasses import dataclass, field
import json
from functools import lru_cache
from itertools import permutations, product as iproduct
from pathlib import Path


class CategoryError(Exception):
    pass


@dataclass(frozen=True)
class FinCategory:
    """Objects, morphisms ``id -> (src, dst)``, identities and a composition table.

    ``compose[(g, f)]`` is g after f, defined when ``dst(f) == src(g)``.
    """
    objects: tuple
    morphisms: dict
    identities: dict
    compose: dict
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "objects", tuple(self.objects))

    def __hash__(self):
        return hash((self.objects, tuple(sorted(self.morphisms.items(), key=repr))))

    def src(self, f):
        return self.morphisms[f][0]

    def dst(self, f):
        return self.morphisms[f][1]

    def comp(self, g, f):
        return self.compose[(g, f)]

    def ident(self, a):
        return self.identities[a]

    def is_identity(self, f):
        return self.identities[self.src(f)] == f

    def hom(self, a, b):
        return [f for f, (s, d) in self.morphisms.items() if s == a and d == b]

    def mor_list(self):
        return list(self.morphisms)

    def non_identities(self):
        return [f for f in self.morphisms if not self.is_identity(f)]

    def validate(self):
        for a in self.objects:
            i = self.identities.get(a)
            if i is None or self.morphisms.get(i) != (a, a):
                raise CategoryError(f"bad identity for {a!r}")
        for f, (s, d) in self.morphisms.items():
            if s not in self.objects or d not in self.objects:
                raise CategoryError(f"morphism {f!r} has unknown endpoints")
        for f in self.morphisms:
            for g in self.morphisms:
                if self.dst(f) == self.src(g):
                    h = self.compose.get((g, f))
                    if h is None or self.morphisms.get(h) != (self.src(f), self.dst(g)):
                        raise CategoryError(f"composite {g!r}∘{f!r} missing or ill-typed")
            if self.comp(f, self.identities[self.src(f)]) != f or self.comp(self.identities[self.dst(f)], f) != f:
                raise CategoryError(f"identity law fails at {f!r}")
        for f in self.morphisms:
            for g in self.hom_from(self.dst(f)):
                for h in self.hom_from(self.dst(g)):
                    if self.comp(h, self.comp(g, f)) != self.comp(self.comp(h, g), f):
                        raise CategoryError(f"associativity fails at {h!r},{g!r},{f!r}")
        return self

    def hom_from(self, a):
        return [f for f, (s, _) in self.morphisms.items() if s == a]

    def inverse(self, f):
        for g in self.hom(self.dst(f), self.src(f)):
            if self.comp(g, f) == self.ident(self.src(f)) and self.comp(f, g) == self.ident(self.dst(f)):
                return g
        return None

    def is_groupoid(self):
        return all(self.inverse(f) is not None for f in self.morphisms)

    def initial_objects(self):
        return [a for a in self.objects if all(len(self.hom(a, b)) == 1 for b in self.objects)]

    def opposite(self) -> "FinCategory":
        morphisms = {f: (d, s) for f, (s, d) in self.morphisms.items()}
        compose = {(f, g): h for (g, f), h in self.compose.items()}
        return FinCategory(self.objects, morphisms, dict(self.identities), compose,
                           name=f"{self.name}^op")

    def product(self, other: "FinCategory") -> "FinCategory":
        objects = tuple(iproduct(self.objects, other.objects))
        morphisms = {(f, g): ((self.src(f), other.src(g)), (self.dst(f), other.dst(g)))
                     for f in self.morphisms for g in other.morphisms}
        identities = {(a, b): (self.ident(a), other.ident(b)) for a, b in objects}
        compose = {}
        for (f1, g1) in morphisms:
            for (f2, g2) in morphisms:
                if (f1, f2) in self.compose and (g1, g2) in other.compose:
                    compose[((f1, g1), (f2, g2))] = (self.compose[(f1, f2)], other.compose[(g1, g2)])
        return FinCategory(objects, morphisms, identities, compose, name=f"{self.name}×{other.name}")

    def to_json(self):
        objs = list(self.objects)
        mors = list(self.morphisms)
        oi = {o: k for k, o in enumerate(objs)}
        mi = {m: k for k, m in enumerate(mors)}
        table = [[None] * len(mors) for _ in mors]
        for (g, f), h in self.compose.items():
            table[mi[g]][mi[f]] = mi[h]
        return {
            "name": self.name,
            "objects": [str(o) for o in objs],
            "morphisms": [{"id": str(m), "src": oi[self.src(m)], "dst": oi[self.dst(m)]} for m in mors],
            "compose": table,
            "identities": [mi[self.ident(o)] for o in objs],
        }

    @classmethod
    def from_json(cls, obj) -> "FinCategory":
        try:
            objs = list(obj["objects"])
            mors = [m["id"] for m in obj["morphisms"]]
            morphisms = {m["id"]: (objs[m["src"]], objs[m["dst"]]) for m in obj["morphisms"]}
            identities = {o: mors[k] for o, k in zip(objs, obj["identities"])}
            compose = {}
            for gi, row in enumerate(obj["compose"]):
                for fi, h in enumerate(row):
                    if h is not None:
                        compose[(mors[gi], mors[fi])] = mors[h]
        except (KeyError, IndexError, TypeError) as exc:
            raise CategoryError(f"malformed category JSON: {exc}") from exc
        return cls(tuple(objs), morphisms, identities, compose, name=obj.get("name", "")).validate()


# -- standard small categories -------------------------------------------------

def from_monoid(table, name="") -> FinCategory:
    """One-object category from a monoid table with identity element 0."""
    n = len(table)
    morphisms = {k: ("*", "*") for k in range(n)}
    compose = {(g, f): table[g][f] for g in range(n) for f in range(n)}
    return FinCategory(("*",), morphisms, {"*": 0}, compose, name=name)


def empty_category() -> FinCategory:
    return FinCategory((), {}, {}, {}, name="0")


def terminal() -> FinCategory:
    return from_monoid([[0]], name="1")


def cyclic_group(n) -> FinCategory:
    return from_monoid([[(a + b) % n for b in range(n)] for a in range(n)], name=f"Z/{n}")


def idempotent_monoid() -> FinCategory:
    # {1, e} with e∘e = e
    return from_monoid([[0, 1], [1, 1]], name="Idem")


def discrete(names=("x", "y")) -> FinCategory:
    morphisms = {f"id_{o}": (o, o) for o in names}
    identities = {o: f"id_{o}" for o in names}
    compose = {(f"id_{o}", f"id_{o}"): f"id_{o}" for o in names}
    return FinCategory(tuple(names), morphisms, identities, compose, name="+".join(names))


def poset_arrow() -> FinCategory:
    """The poset [1] = {0 < 1}."""
    morphisms = {"id0": (0, 0), "id1": (1, 1), "a": (0, 1)}
    compose = {("id0", "id0"): "id0", ("id1", "id1"): "id1", ("a", "id0"): "a", ("id1", "a"): "a"}
    return FinCategory((0, 1), morphisms, {0: "id0", 1: "id1"}, compose, name="[1]")


def walking_iso() -> FinCategory:
    morphisms = {"id0": (0, 0), "id1": (1, 1), "f": (0, 1), "g": (1, 0)}
    compose = {("id0", "id0"): "id0", ("id1", "id1"): "id1",
               ("f", "id0"): "f", ("id1", "f"): "f", ("g", "id1"): "g", ("id0", "g"): "g",
               ("g", "f"): "id0", ("f", "g"): "id1"}
    return FinCategory((0, 1), morphisms, {0: "id0", 1: "id1"}, compose, name="Iso")


def coproduct(c: FinCategory, d: FinCategory) -> FinCategory:
    tag = lambda k, x: (k, x)  # noqa: E731
    objects = tuple(tag(0, o) for o in c.objects) + tuple(tag(1, o) for o in d.objects)
    morphisms, identities, compose = {}, {}, {}
    for k, cat in ((0, c), (1, d)):
        for f, (s, t) in cat.morphisms.items():
            morphisms[tag(k, f)] = (tag(k, s), tag(k, t))
        for o, i in cat.identities.items():
            identities[tag(k, o)] = tag(k, i)
        for (g, f), h in cat.compose.items():
            compose[(tag(k, g), tag(k, f))] = tag(k, h)
    return FinCategory(objects, morphisms, identities, compose, name=f"{c.name}⊔{d.name}")


# -- exhaustive enumeration ------------------------------------------------------

def _enumerate_tables(n_obj, homs, max_results=None):
    """Yield categories with the given hom-set sizes, up to most relabellings.

    ``homs[(a, b)]`` counts morphisms a -> b including identities.  Values
    are filled cell by cell with associativity checked as soon as all the
    cells a triple needs are known.  Within each hom-set, fresh morphism
    labels are introduced in order, which prunes most relabelled copies.
    """
    objs = list(range(n_obj))
    mors, idents = [], {}
    for a in objs:
        for b in objs:
            for k in range(homs[(a, b)]):
                m = (a, b, k)
                mors.append(m)
                if a == b and k == 0:
                    idents[a] = m
    morphisms = {m: (m[0], m[1]) for m in mors}
    table = {}
    cells = []
    for f in mors:
        for g in mors:
            if f[1] != g[0]:
                continue
            if g == idents[g[0]]:
                table[(g, f)] = f
            elif f == idents[f[0]]:
                table[(g, f)] = g
            else:
                cells.append((g, f))
    cells.sort(key=lambda c: (max(c[0][2], c[1][2]), c))

    used = {(a, b): 1 if a == b else 0 for a in objs for b in objs}
    results = [0]

    def go(idx):
        if max_results is not None and results[0] >= max_results:
            return
        if idx == len(cells):
            results[0] += 1
            yield FinCategory(tuple(objs), dict(morphisms), dict(idents), dict(table))
            return
        g, f = cells[idx]
        a, c = f[0], g[1]
        top = min(homs[(a, c)], max(used[(a, c)], _mentioned(g, f, a, c)) + 1)
        for k in range(top):
            h = (a, c, k)
            table[(g, f)] = h
            if _local_ok(table, mors, g, f, h):
                saved = used[(a, c)]
                used[(a, c)] = max(saved, k + 1, _mentioned(g, f, a, c))
                yield from go(idx + 1)
                used[(a, c)] = saved
            del table[(g, f)]

    yield from go(0)


def _mentioned(g, f, a, c):
    # labels already "seen" in hom(a, c) because they index the current cell
    m = 0
    for x in (g, f):
        if (x[0], x[1]) == (a, c):
            m = max(m, x[2] + 1)
    return m


def _local_ok(table, mors, g0, f0, h0):
    """Associativity on every triple that uses the new cell (g0, f0) = h0."""
    get = table.get

    def agree(x, y):
        return x is None or y is None or x == y

    for k in mors:
        if k[0] == g0[1]:
            kg = get((k, g0))
            if kg is not None and not agree(get((kg, f0)), get((k, h0))):
                return False
    for f in mors:
        if f[1] == f0[0]:
            gf = get((f0, f))
            if gf is not None and not agree(get((h0, f)), get((g0, gf))):
                return False
    for (k, g), kg in list(table.items()):
        if kg == g0 and g[0] == f0[1]:
            gf = get((g, f0))
            if gf is not None and not agree(h0, get((k, gf))):
                return False
    for (g, f), gf in list(table.items()):
        if gf == f0 and g[1] == g0[0]:
            kg = get((g0, g))
            if kg is not None and not agree(get((kg, f)), h0):
                return False
    return True


def small_categories(max_objects=2, max_morphisms=6):
    """One representative of every isomorphism class of categories within the bounds."""
    out = [empty_category()] if max_objects >= 0 else []
    for n_obj in range(1, max_objects + 1):
        pairs = [(a, b) for a in range(n_obj) for b in range(n_obj)]
        for sizes in iproduct(range(0, max_morphisms + 1), repeat=len(pairs)):
            homs = dict(zip(pairs, sizes))
            if any(homs[(a, a)] < 1 for a in range(n_obj)):
                continue
            if sum(sizes) > max_morphisms:
                continue
            if n_obj == 2 and not _canonical_two_object(homs):
                continue
            seen = set()
            for cat in _enumerate_tables(n_obj, homs):
                key = canonical_key(cat)
                if key not in seen:
                    seen.add(key)
                    out.append(cat)
    return out


def canonical_key(cat: FinCategory):
    """A complete isomorphism invariant: the least relabelled composition table.

    Morphisms are coloured by colour refinement over the composition table,
    ties are broken by trying every individualisation, and the smallest
    resulting table wins.
    """
    objs = list(cat.objects)
    mors = list(cat.morphisms)
    pos = {m: i for i, m in enumerate(mors)}
    n = len(mors)
    src = [objs.index(cat.src(m)) for m in mors]
    dst = [objs.index(cat.dst(m)) for m in mors]
    after = [[] for _ in range(n)]   # (g, g∘x)
    before = [[] for _ in range(n)]  # (f, x∘f)
    for (g, f), h in cat.compose.items():
        gi, fi, hi = pos[g], pos[f], pos[h]
        after[fi].append((gi, hi))
        before[gi].append((fi, hi))
    best = None
    for perm in _permutations(len(objs)):
        colours = [(perm[src[i]], perm[dst[i]], cat.is_identity(mors[i])) for i in range(n)]
        for labels in _individualise(_refine(_compress(colours), after, before), after, before):
            order = sorted(range(n), key=labels.__getitem__)
            rank = {m: r for r, m in enumerate(order)}
            key = (tuple((perm[src[m]], perm[dst[m]], cat.is_identity(mors[m])) for m in order),
                   tuple(sorted((rank[pos[g]], rank[pos[f]], rank[pos[h]])
                                for (g, f), h in cat.compose.items())))
            if best is None or key < best:
                best = key
    return best


def _permutations(k):
    return list(permutations(range(k)))


def _compress(sigs):
    values = sorted(set(sigs))
    index = {v: i for i, v in enumerate(values)}
    return [index[s] for s in sigs]


def _refine(colours, after, before):
    while True:
        sigs = [(colours[i],
                 tuple(sorted((colours[g], colours[h]) for g, h in after[i])),
                 tuple(sorted((colours[f], colours[h]) for f, h in before[i])))
                for i in range(len(colours))]
        new = _compress(sigs)
        if len(set(new)) == len(set(colours)):
            return new
        colours = new


def _individualise(colours, after, before):
    counts = {}
    for c in colours:
        counts[c] = counts.get(c, 0) + 1
    tied = [c for c, k in counts.items() if k > 1]
    if not tied:
        yield colours
        return
    target = min(tied, key=lambda c: (counts[c], c))
    top = max(colours) + 1
    for i, c in enumerate(colours):
        if c == target:
            split = list(colours)
            split[i] = top
            yield from _individualise(_refine(_compress(split), after, before), after, before)


def _encode(cat: FinCategory):
    mors = list(cat.morphisms)
    pos = {m: i for i, m in enumerate(mors)}
    objs = list(cat.objects)
    return {
        "objects": len(objs),
        "morphisms": [[objs.index(cat.src(m)), objs.index(cat.dst(m))] for m in mors],
        "identities": [pos[cat.ident(o)] for o in objs],
        "compose": [[pos[g], pos[f], pos[h]] for (g, f), h in sorted(cat.compose.items())
                    if not (cat.is_identity(g) or cat.is_identity(f))],
    }


def _decode(obj) -> FinCategory:
    objs = tuple(range(obj["objects"]))
    morphisms = {i: (s, d) for i, (s, d) in enumerate(obj["morphisms"])}
    identities = dict(zip(objs, obj["identities"]))
    ids = set(identities.values())
    compose = {}
    for f, (s, d) in morphisms.items():
        compose[(identities[d], f)] = f
        compose[(f, identities[s])] = f
    for g, f, h in obj["compose"]:
        compose[(g, f)] = h
    assert all(g not in ids and f not in ids for g, f, _ in obj["compose"])
    return FinCategory(objs, morphisms, identities, compose)


DATA_FILE = Path(__file__).with_name("data") / "small_categories_2_6.json"


def write_small_categories(path=DATA_FILE, max_objects=2, max_morphisms=6):
    cats = small_categories(max_objects, max_morphisms)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        json.dump({"max_objects": max_objects, "max_morphisms": max_morphisms,
                   "categories": [_encode(c) for c in cats]}, fh, separators=(",", ":"))
    return len(cats)


@lru_cache(maxsize=None)
def cached_small_categories(max_objects=2, max_morphisms=6):
    """``small_categories`` read from the packaged table when the bounds fit inside it.

    The full enumeration at the default bounds takes minutes, so its result
    is stored once; ``python3 -m hodt.category`` rebuilds the table.
    """
    if DATA_FILE.exists():
        with open(DATA_FILE) as fh:
            data = json.load(fh)
        if max_objects <= data["max_objects"] and max_morphisms <= data["max_morphisms"]:
            cats = [_decode(c) for c in data["categories"]]
            return tuple(c for c in cats
                         if len(c.objects) <= max_objects and len(c.morphisms) <= max_morphisms)
    return tuple(small_categories(max_objects, max_morphisms))


def _canonical_two_object(homs):
    # swapping the two objects gives an isomorphic category
    a = (homs[(0, 0)], homs[(1, 1)], homs[(0, 1)], homs[(1, 0)])
    b = (homs[(1, 1)], homs[(0, 0)], homs[(1, 0)], homs[(0, 1)])
    return a <= b


if __name__ == "__main__":
    print(write_small_categories())
