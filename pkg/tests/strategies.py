"""Hypothesis strategies for terms."""

from hypothesis import strategies as st

from hodt.lam import App, Lam, Var, free


def _shape(max_leaves):
    return st.recursive(
        st.integers(0, 5),
        lambda inner: st.one_of(inner.map(lambda b: ("lam", b)),
                                st.tuples(inner, inner).map(lambda p: ("app",) + p)),
        max_leaves=max_leaves,
    )


def _build(shape, names, depth=0):
    if isinstance(shape, int):
        if shape < depth:
            return Var(shape, "")
        return free(names[(shape - depth) % len(names)])
    if shape[0] == "lam":
        return Lam(_build(shape[1], names, depth + 1), "v")
    return App(_build(shape[1], names, depth), _build(shape[2], names, depth))


def terms(names=("x", "y", "z"), max_leaves=8):
    """Well-scoped terms; leaf numbers become bound indices when in range, else free names."""
    return _shape(max_leaves).map(lambda s: _build(s, names))
