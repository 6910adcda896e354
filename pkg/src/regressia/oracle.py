"""Independent recount of regressive values.

Deliberately shares no code with the search path: it re-reads the definition
(a value y = F(x) is regressive when its largest coordinate is below the
smallest coordinate of x) and nothing else.
"""
from itertools import product


def recount(lookup, E, k):
    """Number of distinct regressive values of ``lookup`` on E^k."""
    found = []
    for x in product(sorted(E), repeat=k):
        y = lookup(x)
        top = y if isinstance(y, int) else max(y)
        low = x[0]
        for c in x:
            if c < low:
                low = c
        if top < low and y not in found:
            found.append(y)
    return len(found)


def recount_graph(graph, E, k):
    return recount(graph.__getitem__, E, k)
