"""Finite homotopic λ-models built from a complex K and maps F : K -> [K⇒K], G : [K⇒K] -> K.

Terms are interpreted on vertices.  Application is the vertex table
a•b = F(a)(b); an abstraction is sent to G of the map-vertex whose action
on vertices is d ↦ ⟦body⟧ with the bound variable set to d.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product as iproduct

from .lam import (App, Lam, LambdaError, Term, Var, enumerate_terms, free, free_names,
                  instantiate, render, shift, substitute, to_json as term_json)
from .paths import convertible_classes
from .simplicial import (Simplex, SimplicialMap, TruncatedSSet, _components,
                         codiscrete, constant_map, discrete, find_maps, function_complex_01,
                         identity_map, map_homotopic, nerve, point)
from .category import poset_arrow


class ModelError(Exception):
    pass


class NonRepresentable(ModelError):
    """The vertex function of an abstraction is not the action of any map-vertex."""

    def __init__(self, term, table):
        self.term = term
        self.table = table
        super().__init__(f"no map-vertex acts as {table} (abstraction {render(term)})")


_fv = lru_cache(maxsize=None)(free_names)


@lru_cache(maxsize=None)
def _fv_sorted(t):
    return tuple(sorted(free_names(t)))


@dataclass(frozen=True)
class Environment:
    """Total assignment of variable names to vertices; unlisted names get ``default``."""
    values: tuple = ()
    default: object = None

    @classmethod
    def of(cls, mapping=None, default=None) -> "Environment":
        return cls(tuple(sorted((mapping or {}).items(), key=lambda kv: kv[0])), default)

    def __call__(self, name):
        for k, v in self.values:
            if k == name:
                return v
        return self.default

    def bind(self, name, v) -> "Environment":
        return Environment.of({**dict(self.values), name: v}, self.default)

    def to_json(self):
        return {"values": {k: _vname(v) for k, v in self.values}, "default": _vname(self.default)}


def _vname(v):
    return v if isinstance(v, (str, int)) else repr(v)


def _fresh(t: Term, k=0):
    used = _fv(t)
    while f"d{k}" in used:
        k += 1
    return f"d{k}"


class HomotopicModel:
    """A complex with reflexive data (F, G) and its derived application table."""

    def __init__(self, K: TruncatedSSet, F: SimplicialMap, G: SimplicialMap,
                 FC: TruncatedSSet | None = None, name=""):
        self.K = K
        self.FC = FC if FC is not None else F.target
        self.F = F.check()
        self.G = G.check()
        self.name = name
        if F.source.dims != K.dims or F.target is not self.FC or G.source is not self.FC \
                or G.target.dims != K.dims:
            raise ModelError("F must map K to [K⇒K] and G back to K")
        self.points = K.vertices()
        self.action = {}
        for mv in self.FC.vertices():
            m = self.FC.labels[mv]
            act = tuple(m.on_vertex(d) for d in self.points)
            self.action.setdefault(act, mv)
        self.app = {(a, b): self.FC.labels[F.on_vertex(a)].on_vertex(b)
                    for a in self.points for b in self.points}
        self._uf = _components(K)
        self._memo = {}

    def apply(self, a, b):
        return self.app[(a, b)]

    def same(self, v, w) -> bool:
        return self._uf.same(v, w)

    def represent(self, table):
        return self.action.get(tuple(table))

    def interpret(self, t: Term, rho: Environment):
        key = (t, tuple([rho(x) for x in _fv_sorted(t)]))
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        if isinstance(t, Var):
            if t.index is not None:
                raise LambdaError(f"dangling index {t.index} in interpreted term")
            out = rho(t.name)
            if out not in self.K.dims or self.K.dims[out] != 0:
                raise ModelError(f"environment sends {t.name!r} to {out!r}, not a vertex")
        elif isinstance(t, App):
            out = self.app[(self.interpret(t.fn, rho), self.interpret(t.arg, rho))]
        else:
            x = _fresh(t.body)
            opened = instantiate(t.body, free(x))
            table = tuple(self.interpret(opened, rho.bind(x, d)) for d in self.points)
            mv = self.represent(table)
            if mv is None:
                raise NonRepresentable(t, table)
            out = self.G.on_vertex(mv)
        self._memo[key] = out
        return out

    def satisfies(self, rho: Environment, lhs: Term, rhs: Term) -> bool:
        return self.same(self.interpret(lhs, rho), self.interpret(rhs, rho))

    def default_envs(self, names=()):
        names = sorted(names)
        out = []
        for vals in iproduct(self.points, repeat=len(names)):
            out.append(Environment.of(dict(zip(names, vals)), self.points[0]))
        return out

    # -- fixture interchange ------------------------------------------------------
    def to_json(self):
        names = self.K._names()
        fnames = self.FC._names()
        return {
            "name": self.name,
            "complex": self.K.to_json(),
            "maps": {fnames[mv]: {names[v]: names[self.FC.labels[mv].on_vertex(v)] for v in self.points}
                     for mv in self.FC.vertices()},
            "F": {names[v]: fnames[self.F.on_vertex(v)] for v in self.points},
            "G": {fnames[mv]: names[self.G.on_vertex(mv)] for mv in self.FC.vertices()},
        }

    @classmethod
    def from_json(cls, obj) -> "HomotopicModel":
        try:
            K = TruncatedSSet.from_json(obj["complex"])
            F_spec, G_spec = obj["F"], obj["G"]
        except (KeyError, TypeError) as exc:
            raise ModelError(f"malformed model fixture: {exc!r}") from exc
        FC = function_complex_01(K, K)
        by_name = {}
        for mv in FC.vertices():
            by_name[mv] = mv
            m = FC.labels[mv]
            by_name[_action_name(m, K.vertices())] = mv
        if "maps" in obj:
            for mid, action in obj["maps"].items():
                act = tuple(action[v] for v in K.vertices())
                hits = [mv for mv in FC.vertices() if _action(FC.labels[mv], K.vertices()) == act]
                if not hits:
                    raise ModelError(f"map {mid!r} is not a simplicial endomap of the complex")
                by_name[mid] = hits[0]
        try:
            F = extend_on_vertices(K, FC, {v: by_name[F_spec[v]] for v in K.vertices()})
            G = extend_on_vertices(FC, K, {mv: G_spec[_lookup_key(G_spec, mv, by_name)]
                                           for mv in FC.vertices()})
        except KeyError as exc:
            raise ModelError(f"fixture leaves {exc} unassigned") from exc
        return cls(K, F, G, FC, name=obj.get("name", ""))


def _action(m: SimplicialMap, points):
    return tuple(m.on_vertex(v) for v in points)


def _action_name(m, points):
    return ",".join(f"{v}>{w}" for v, w in zip(points, _action(m, points)))


def _lookup_key(keys, mv, by_name):
    for k in keys:
        if by_name.get(k) == mv:
            return k
    raise KeyError(mv)


def extend_on_vertices(X: TruncatedSSet, Y: TruncatedSSet, on_vertices: dict) -> SimplicialMap:
    """The first simplicial map X -> Y with the given vertex assignment."""
    fixed = {v: Simplex(w, (0,)) for v, w in on_vertices.items()}
    found = find_maps(X, Y, fixed=fixed, limit=1)
    if not found:
        raise ModelError(f"vertex assignment {on_vertices} does not extend to a simplicial map")
    return found[0]


# -- reports -------------------------------------------------------------------

@dataclass
class Verdict:
    name: str
    checked: int = 0
    witnesses: list = field(default_factory=list)
    max_witnesses: int = 20
    failures: int = 0

    @property
    def passed(self):
        return self.failures == 0

    def tick(self, ok: bool, witness=None):
        """Record one check; ``witness`` may be a thunk, built only on failure."""
        self.checked += 1
        if not ok:
            self.failures += 1
            if len(self.witnesses) < self.max_witnesses:
                self.witnesses.append(witness() if callable(witness) else witness)

    def to_json(self):
        return {"name": self.name, "pass": self.passed, "checked": self.checked,
                "failures": self.failures, "witnesses": self.witnesses}


@dataclass
class CheckReport:
    subject: str
    verdicts: dict = field(default_factory=dict)
    notes: dict = field(default_factory=dict)

    def verdict(self, name) -> Verdict:
        if name not in self.verdicts:
            self.verdicts[name] = Verdict(name)
        return self.verdicts[name]

    @property
    def passed(self):
        return all(v.passed for v in self.verdicts.values())

    def failed(self):
        return sorted(k for k, v in self.verdicts.items() if not v.passed)

    def to_json(self):
        return {"subject": self.subject, "pass": self.passed, "failed": self.failed(),
                "verdicts": {k: v.to_json() for k, v in sorted(self.verdicts.items())},
                **({"notes": self.notes} if self.notes else {})}


def _term_witness(t, rho, **extra):
    return {"term": render(t), "term_json": term_json(t), "env": rho.to_json(), **extra}


# -- axiom checks --------------------------------------------------------------------

AXIOMS = ("1", "2", "3", "4", "5", "6")


def check_axioms(m: HomotopicModel, corpus, envs=None) -> CheckReport:
    """Check the six model axioms on every corpus term and its opened subterms.

    Binders are opened with fresh names bound to every vertex, so the
    checks reach all subterms.  Extensionality is reported under "ext" and
    does not affect ``passed``.
    """
    report = CheckReport(m.name or "model")
    for a in AXIOMS:
        report.verdict(a)
    ext = Verdict("ext")
    names = set()
    for t in corpus:
        names |= _fv(t)
    envs = envs if envs is not None else m.default_envs(names)
    for rho in envs:
        abstractions = []
        for t in corpus:
            _check_term(m, t, rho, report, abstractions, ext)
        _check_xi(m, abstractions, report)
    report.notes["ext"] = ext.to_json()
    return report


def _guarded(report, axiom, t, rho, fn):
    try:
        return fn()
    except (ModelError, LambdaError) as exc:
        report.verdict(axiom).tick(False, _term_witness(t, rho, error=str(exc)))
        return None


def _check_term(m, t, rho, report, abstractions, ext):
    # (1) variables, strictly
    for x in sorted(_fv(t)):
        v = _guarded(report, "1", Var(None, x), rho, lambda: m.interpret(Var(None, x), rho))
        if v is not None:
            report.verdict("1").tick(v == rho(x), lambda: _term_witness(Var(None, x), rho, value=v))
    val = _guarded(report, "2" if isinstance(t, App) else "3", t, rho, lambda: m.interpret(t, rho))
    if val is None:
        return
    # (4) only free variables matter, strictly
    for d in m.points:
        other = Environment.of({x: rho(x) for x in _fv(t)}, d)
        alt = m.interpret(t, other)
        report.verdict("4").tick(alt == val, lambda: _term_witness(t, rho, changed_default=d, lhs=val, rhs=alt))
    if isinstance(t, App):
        f, a = m.interpret(t.fn, rho), m.interpret(t.arg, rho)
        rhs = m.apply(f, a)
        report.verdict("2").tick(m.same(val, rhs), lambda: _term_witness(
            t, rho, lhs=val, rhs=rhs, missing=f"path {val} ~ {rhs}"))
        _check_term(m, t.fn, rho, report, abstractions, ext)
        _check_term(m, t.arg, rho, report, abstractions, ext)
    elif isinstance(t, Lam):
        x = _fresh(t.body)
        opened = instantiate(t.body, free(x))
        profile = []
        for a in m.points:
            inner = rho.bind(x, a)
            lhs = m.apply(val, a)
            rhs = _guarded(report, "3", opened, inner, lambda: m.interpret(opened, inner))
            if rhs is None:
                return
            profile.append(rhs)
            report.verdict("3").tick(m.same(lhs, rhs), lambda: _term_witness(
                t, rho, vertex=_vname(a), lhs=lhs, rhs=rhs, missing=f"path {lhs} ~ {rhs}"))
            _check_term(m, opened, inner, report, abstractions, ext)
        abstractions.append((t, rho, val, tuple(m._uf.find(v) for v in profile)))
        # (5) renaming the bound variable changes nothing
        renamed = Lam(t.body, (t.hint or "x") + "1")
        r = m.interpret(renamed, rho)
        report.verdict("5").tick(m.same(r, val), lambda: _term_witness(t, rho, lhs=val, rhs=r))
    # extensionality: λx.Mx against M
    eta = Lam(App(shift(t, 1), Var(0, "x")), "x")
    e = _guarded(report, "ext-error", eta, rho, lambda: m.interpret(eta, rho))
    if e is not None:
        ext.tick(m.same(e, val), lambda: _term_witness(t, rho, lhs=e, rhs=val))
    report.verdicts.pop("ext-error", None)


def _check_xi(m, abstractions, report):
    # (6) bodies pointwise ≃ at every vertex => abstractions ≃
    groups = {}
    for t, rho, val, profile in abstractions:
        groups.setdefault(profile, []).append((t, rho, val))
    for members in groups.values():
        t0, rho0, v0 = members[0]
        for t, rho, v in members[1:]:
            report.verdict("6").tick(m.same(v0, v), lambda: {
                "terms": [render(t0), render(t)], "envs": [rho0.to_json(), rho.to_json()],
                "values": [v0, v], "missing": f"path {v0} ~ {v}"})


def check_reflexive(m: HomotopicModel, budget=20000) -> dict:
    """reflexive: F∘G ≃ id on [K⇒K]; extensional: G∘F ≃ id on K."""
    FG = m.G.compose(m.F)
    GF = m.F.compose(m.G)
    return {"reflexive": map_homotopic(FG, identity_map(m.FC), budget=budget),
            "extensional": map_homotopic(GF, identity_map(m.K), budget=budget)}


def check_enough_points(K: TruncatedSSet, pairs, budget=20000) -> CheckReport:
    """Pairs that agree up to ≃ on every vertex must be homotopic as maps."""
    report = CheckReport(K.name or "complex")
    v = report.verdict("enough-points")
    uf = _components(K)
    for f, g in pairs:
        if not all(uf.same(f.on_vertex(x), g.on_vertex(x)) for x in f.source.vertices()):
            continue
        ok = map_homotopic(f, g, budget=budget)
        v.tick(ok, lambda: {"f": {_vname(x): _vname(f.on_vertex(x)) for x in f.source.vertices()},
                    "g": {_vname(x): _vname(g.on_vertex(x)) for x in g.source.vertices()},
                    "missing": "homotopy in both directions"})
    return report


# -- suites ------------------------------------------------------------------------

def substitution_lemma_suite(m: HomotopicModel, max_size=5, names=("x", "y"), var="x") -> CheckReport:
    """⟦[N/x]M⟧ρ ≃ ⟦M⟧ρ[x:=⟦N⟧ρ] for all M, N up to ``max_size`` and all ρ on ``names``."""
    if max_size < 1:
        raise ValueError("size bound must be positive")
    report = CheckReport(m.name or "model")
    v = report.verdict("substitution")
    terms, cases = _substitution_cases(max_size, tuple(names), var)
    for rho in m.default_envs(names):
        vals = {}
        for n in terms:
            try:
                vals[n] = m.interpret(n, rho)
            except ModelError as exc:
                v.tick(False, _term_witness(n, rho, error=str(exc)))
        for mt, n, sub in cases:
            if n not in vals:
                continue
            try:
                lhs = m.interpret(sub, rho)
                rhs = m.interpret(mt, rho.bind(var, vals[n]))
            except ModelError as exc:
                v.tick(False, _term_witness(mt, rho, N=render(n), error=str(exc)))
                continue
            v.tick(m.same(lhs, rhs), lambda: _term_witness(mt, rho, N=render(n), lhs=lhs, rhs=rhs))
    return report


@lru_cache(maxsize=8)
def _substitution_cases(max_size, names, var):
    terms = enumerate_terms(max_size, names)
    return terms, [(mt, n, substitute(mt, var, n)) for mt in terms for n in terms]


def soundness_suite(m: HomotopicModel, max_size=6, fuel=10, names=(), terms=None,
                    axioms: CheckReport | None = None) -> CheckReport:
    """Every pair of β-convertible terms (common reduct within ``fuel``) is satisfied."""
    if max_size < 1 or fuel < 1:
        raise ValueError("bounds must be positive")
    report = CheckReport(m.name or "model")
    v = report.verdict("soundness")
    terms = terms if terms is not None else enumerate_terms(max_size, tuple(names))
    classes, exhausted = convertible_classes(terms, fuel=fuel)
    report.notes["classes"] = sum(1 for c in classes if len(c) > 1)
    report.notes["fuel_exhausted"] = [render(t) for t in exhausted]
    envs = m.default_envs(names)
    linked = axioms.failed() if axioms is not None else []
    for cls in classes:
        if len(cls) < 2:
            continue
        for rho in envs:
            for other in cls[1:]:
                try:
                    ok = m.satisfies(rho, cls[0], other)
                    wit = {}
                except ModelError as exc:
                    ok, wit = False, {"error": str(exc)}
                v.tick(ok, lambda: {"lhs": render(cls[0]), "rhs": render(other), "env": rho.to_json(),
                            "failed_axioms": linked, **wit})
    return report


# -- fixtures -------------------------------------------------------------------------

def _model_from_vertex_maps(K, FC, F_on, G_on, name):
    F = extend_on_vertices(K, FC, F_on)
    G = extend_on_vertices(FC, K, G_on)
    return HomotopicModel(K, F, G, FC, name=name)


def one_point_model() -> HomotopicModel:
    K = point(2)
    FC = function_complex_01(K, K)
    (mv,) = FC.vertices()
    return _model_from_vertex_maps(K, FC, {"*": mv}, {mv: "*"}, "one-point")


def _map_vertex(FC, points, action):
    for mv in FC.vertices():
        if _action(FC.labels[mv], points) == tuple(action):
            return mv
    raise ModelError(f"no map-vertex with action {action}")


def codiscrete_models(n_vertices=2, sample=None, seed=0):
    """Models on the codiscrete complex; every (F, G) on vertices, or a seeded sample.

    With ``sample`` set, the structured choices (F picking constant maps or
    the identity, G evaluating at a fixed vertex) come first.
    """
    names = "abcdefgh"[:n_vertices]
    K = codiscrete(names, N=2)
    FC = function_complex_01(K, K)
    pts = K.vertices()
    mvs = FC.vertices()
    if sample is None:
        for F_vals in iproduct(mvs, repeat=len(pts)):
            for G_vals in iproduct(pts, repeat=len(mvs)):
                yield _model_from_vertex_maps(K, FC, dict(zip(pts, F_vals)), dict(zip(mvs, G_vals)),
                                              f"codiscrete{n_vertices}")
        return
    rng = random.Random(seed)
    ident = _map_vertex(FC, pts, pts)
    consts = [_map_vertex(FC, pts, [p] * len(pts)) for p in pts]
    chosen = []
    for e in pts:
        G_eval = {mv: FC.labels[mv].on_vertex(e) for mv in mvs}
        chosen.append(({p: ident for p in pts}, G_eval))
        chosen.append(({p: consts[i] for i, p in enumerate(pts)}, G_eval))
    while len(chosen) < sample:
        chosen.append(({p: rng.choice(mvs) for p in pts}, {mv: rng.choice(pts) for mv in mvs}))
    for F_on, G_on in chosen[:sample]:
        yield _model_from_vertex_maps(K, FC, F_on, G_on, f"codiscrete{n_vertices}")


def discrete_constant_fixture() -> HomotopicModel:
    """Two isolated vertices, F constant at the map collapsing onto b.

    Then ⟦λx.x⟧•a = b, so the β-axiom fails at a.
    """
    K = discrete("ab", N=2)
    FC = function_complex_01(K, K)
    const_b = _map_vertex(FC, K.vertices(), ["b", "b"])
    return _model_from_vertex_maps(K, FC, {"a": const_b, "b": const_b},
                                   {mv: "a" for mv in FC.vertices()}, "discrete-constant")


def two_component_fixture() -> HomotopicModel:
    """Two isolated vertices, F = (a ↦ id, b ↦ const b), G collapsing every map to a.

    F∘G is constant, so it is not ≃ the identity of [K⇒K].
    """
    K = discrete("ab", N=2)
    FC = function_complex_01(K, K)
    pts = K.vertices()
    ident = _map_vertex(FC, pts, ["a", "b"])
    const_b = _map_vertex(FC, pts, ["b", "b"])
    return _model_from_vertex_maps(K, FC, {"a": ident, "b": const_b},
                                   {mv: "a" for mv in FC.vertices()}, "two-component")


# Axioms the negative fixtures violate on the closed corpus.  In the
# two-component fixture every abstraction denotes a and a•d = d, so
# ⟦λx.λy.y⟧•b = b while the body denotes a.
DOCUMENTED_FAILURES = {
    "discrete-constant": ["3"],
    "two-component": ["3"],
}


def nerve_enough_points_fixture():
    """nerve([1]) with the identity and the constant map at 0."""
    K = nerve(poset_arrow(), 2)
    return K, [(identity_map(K), constant_map(K, K, (0, ())))]


def closed_corpus(max_size=6):
    return enumerate_terms(max_size)
