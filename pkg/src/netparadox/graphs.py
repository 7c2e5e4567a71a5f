"""Strongly connected components (iterative Tarjan) and small graph helpers."""

from __future__ import annotations

from typing import Callable, Hashable, Iterable, TypeVar

V = TypeVar("V", bound=Hashable)


def strongly_connected_components(
    vertices: Iterable[V], successors: Callable[[V], Iterable[V]]
) -> list[list[V]]:
    """Tarjan's algorithm without recursion.

    Components come out in reverse topological order of the condensation
    (a component is emitted after every component it can reach).
    """
    index: dict[V, int] = {}
    low: dict[V, int] = {}
    on_stack: set[V] = set()
    stack: list[V] = []
    components: list[list[V]] = []
    counter = 0

    for root in vertices:
        if root in index:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        work = [(root, iter(successors(root)))]
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(successors(w))))
                    advanced = True
                    break
                if w in on_stack and index[w] < low[v]:
                    low[v] = index[w]
            if advanced:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[v] < low[parent]:
                    low[parent] = low[v]
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                components.append(comp)
    return components


def is_strongly_connected(vertices: Iterable[V], successors: Callable[[V], Iterable[V]]) -> bool:
    vs = list(vertices)
    if not vs:
        return False
    return len(strongly_connected_components(vs, successors)) == 1
