"""Maximum bipartite matching by augmenting paths.

Left vertices are processed in the given order and each tries its right
neighbours in list order, so the result is fully determined by the input
ordering.
"""

from __future__ import annotations

from collections.abc import Hashable, Mapping, Sequence


def max_matching(adj: Mapping[Hashable, Sequence[Hashable]], order: Sequence[Hashable] | None = None) -> dict:
    """Return a maximum matching as a ``left -> right`` dict."""
    left = list(adj) if order is None else list(order)
    match_right: dict = {}
    match_left: dict = {}

    def try_augment(u, seen: set) -> bool:
        # Iterative DFS over alternating paths starting at the free vertex u.
        stack = [(u, iter(adj.get(u, ())))]
        path: list[tuple] = []
        while stack:
            v, it = stack[-1]
            for r in it:
                if r in seen:
                    continue
                seen.add(r)
                owner = match_right.get(r)
                if owner is None:
                    path.append((v, r))
                    for a, b in reversed(path):
                        match_left[a] = b
                        match_right[b] = a
                    return True
                path.append((v, r))
                stack.append((owner, iter(adj.get(owner, ()))))
                break
            else:
                stack.pop()
                if path:
                    path.pop()
        return False

    for u in left:
        if u not in match_left:
            try_augment(u, set())
    return match_left
