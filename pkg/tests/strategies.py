"""hypothesis 策略: 随机连通 pm-graph，边长为 [1/10, 10] 内的有理数"""
from collections import Counter
from fractions import Fraction

from hypothesis import strategies as st

from app.models.models import PMGraph
from app.services.graph import build_graph

lengths = st.fractions(min_value=Fraction(1, 10), max_value=10,
                       max_denominator=12)


@st.composite
def pm_graphs(draw, min_vertices: int = 2, max_vertices: int = 8,
              max_extra_edges: int = 5, loops: bool = False,
              parallel: bool = False, polarized: bool = True) -> PMGraph:
    """随机生成树加若干额外边；叶子的 q 至少为 1，保证 K 有效"""
    n = draw(st.integers(min_value=min_vertices, max_value=max_vertices))
    names = [f"v{i}" for i in range(n)]
    edges = []
    pairs = set()
    for i in range(1, n):
        parent = draw(st.integers(min_value=0, max_value=i - 1))
        edges.append((names[parent], names[i], draw(lengths)))
        pairs.add(frozenset((parent, i)))

    for _ in range(draw(st.integers(min_value=0, max_value=max_extra_edges))):
        i = draw(st.integers(min_value=0, max_value=n - 1))
        j = draw(st.integers(min_value=0, max_value=n - 1))
        if i == j and not loops:
            continue
        if i != j and frozenset((i, j)) in pairs and not parallel:
            continue
        pairs.add(frozenset((i, j)))
        edges.append((names[i], names[j], draw(lengths)))

    valence = Counter()
    for u, v, _ in edges:
        valence[u] += 1
        valence[v] += 1
    qs = []
    for name in names:
        q = draw(st.integers(min_value=0, max_value=2)) if polarized else 0
        if valence[name] == 1:
            q = max(q, 1)
        qs.append(q)
    return build_graph(zip(names, qs), edges)


def simple_graphs(**kwargs):
    return pm_graphs(loops=False, parallel=False, **kwargs)


@st.composite
def leafless_graphs(draw, min_vertices: int = 3, max_vertices: int = 8,
                    max_chords: int = 5) -> PMGraph:
    """q ≡ 0 的简单图: 一个圈加若干弦，没有叶子"""
    n = draw(st.integers(min_value=min_vertices, max_value=max_vertices))
    names = [f"v{i}" for i in range(n)]
    edges = [(names[i], names[(i + 1) % n], draw(lengths)) for i in range(n)]
    pairs = {frozenset((i, (i + 1) % n)) for i in range(n)}
    for _ in range(draw(st.integers(min_value=0, max_value=max_chords))):
        i = draw(st.integers(min_value=0, max_value=n - 1))
        j = draw(st.integers(min_value=0, max_value=n - 1))
        if i == j or frozenset((i, j)) in pairs:
            continue
        pairs.add(frozenset((i, j)))
        edges.append((names[i], names[j], draw(lengths)))
    return build_graph(names, edges)
