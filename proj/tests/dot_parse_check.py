"""Parses a DOT file with pydot and prints the number of cluster subgraphs."""
import sys

try:
    import pydot
except ImportError:
    sys.exit(77)

graphs = pydot.graph_from_dot_file(sys.argv[1])
if not graphs:
    sys.exit(1)
g = graphs[0]
clusters = [s for s in g.get_subgraphs() if s.get_name().startswith("cluster_")]
print(len(clusters))
