"""Writes every undirected graph on 1..8 vertices up to isomorphism (graph6).

Graphs on <= 7 vertices come from the networkx atlas; 8-vertex graphs are
every 7-vertex graph plus a new vertex joined to each subset, deduplicated.
The class counts are checked against the known sequence (OEIS A000088).
"""
import itertools
import sys
from collections import defaultdict

import networkx as nx

EXPECTED = {1: 1, 2: 2, 3: 4, 4: 11, 5: 34, 6: 156, 7: 1044, 8: 12346}


def main(out_path):
    atlas = [g for g in nx.graph_atlas_g() if g.number_of_nodes() >= 1]
    by_n = defaultdict(list)
    for g in atlas:
        by_n[g.number_of_nodes()].append(g)

    buckets = defaultdict(list)
    for g in by_n[7]:
        for mask in range(1 << 7):
            h = g.copy()
            h.add_node(7)
            h.add_edges_from((7, v) for v in range(7) if mask >> v & 1)
            key = (h.number_of_edges(), tuple(sorted(d for _, d in h.degree())),
                   nx.weisfeiler_lehman_graph_hash(h, iterations=3))
            if not any(nx.is_isomorphic(h, o) for o in buckets[key]):
                buckets[key].append(h)
    by_n[8] = [g for b in sorted(buckets) for g in buckets[b]]

    for n, want in EXPECTED.items():
        if len(by_n[n]) != want:
            sys.exit(f"{n} vertices: got {len(by_n[n])} classes, expected {want}")
    with open(out_path, "w") as f:
        for n in sorted(EXPECTED):
            for g in by_n[n]:
                f.write(nx.to_graph6_bytes(nx.convert_node_labels_to_integers(g), header=False).decode())


if __name__ == "__main__":
    main(sys.argv[1] if len(sys.argv) > 1 else "graphs_upto8.g6")
