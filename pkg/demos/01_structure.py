"""Walk through the structure of a small storage graph.

Each edge of the graph either carries no sources or exactly M of them. For
every source we look at which nodes stay connected through edges that do not
carry it, and ask whether some edge carrying the source joins two nodes of the
same group. That single question decides how much key a secure code needs.
"""

from securegraph import analyze, classify, load_instance
from securegraph.classify import format_classification
from securegraph.graph import emit_graph
from securegraph.structure import format_analysis

for name in ("cycle4", "fig4"):
    g = load_instance(name)
    print(f"--- {name} ---")
    print(emit_graph(g))
    a = analyze(g)
    print(format_analysis(g, a))
    r = classify(g, a)
    print(format_classification(r))

# In the 4-cycle every edge carrying a source crosses between two groups, so one
# key symbol per source symbol suffices. In fig4 the edge {V1,V3} carries W1
# although V1 and V3 are linked by a path that avoids W1: a rate of 1 is out.
