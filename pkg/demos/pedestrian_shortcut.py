# # A zero-cost walk through a train
#
# Two lines cross at E on different platforms. Turning from line 1 towards B
# costs 120 s if you arrive from A, but only 30 s if you arrive from C. The
# four-way expansion joins the two sides of a line with free through edges,
# so a search can "arrive from C" without ever riding from C.

from aten import EdgeKind, build_aten, build_method3, method2, method3, proposed
from aten.ingest import fixture_method3_flaw

net = fixture_method3_flaw()
m3 = build_method3(net)
r3 = method3(m3, 1, 2)
print("method3 says", r3.total_seconds, "s, feasible:", r3.feasible)
for ei in r3.path:
    e = m3.edges[ei]
    print("  ", m3.nodes[e.src], "->", m3.nodes[e.dst], e.kind.name, e.seconds)

through = [m3.edges[ei] for ei in r3.path if m3.edges[ei].kind == EdgeKind.THROUGH]
print("through edges used:", len(through))

# ## The adaptive expansion
#
# Here the two sides of a split line only meet through the virtual node that
# trains pass, and no transfer edge touches it, so the walk cannot cheat.

x = build_aten(net)
print("proposed", proposed(x, 1, 2).total_seconds, "method2", method2(net, 1, 2).total_seconds)
