# # Why a node-label search gets transfers wrong
#
# A five-station toy network: lines 1-4 connect A..E, and every station
# where two lines meet charges a walking penalty. We route A -> E with all
# four solvers and look at where the cheap-looking answer goes astray.

from aten import build_aten, build_method3, method1, method2, method3, proposed
from aten.ingest import fixture_figure1

net = fixture_figure1()
for sid, st in sorted(net.stations.items()):
    print(sid, st.name, "lines", sorted(net.lines_at(sid)))

# ## Node labels
#
# method1 keeps one label per station. Station C gets settled through B, so
# the transfer onto line 4 is priced from line 2 even though the best way
# into C arrives on line 4 from D.

r1 = method1(net, 1, 5)
print("method1", r1.total_seconds)

# ## Edge labels and the expanded graph
#
# method2 keeps a label per directed run edge, so the line you arrived on is
# part of the state. The expanded graph gives the same answer with a plain
# Dijkstra because each line gets its own node at a transfer station.

r2 = method2(net, 1, 5)
x = build_aten(net)
rp = proposed(x, 1, 5)
print("method2", r2.total_seconds, "proposed", rp.total_seconds)
print("expanded graph:", x.node_count, "nodes,", x.edge_count, "directed edges")

for k, leg in enumerate(rp.legs):
    if k:
        t = rp.transfers[k - 1]
        print(f"  walk at {net.stations[t.station].name}: {t.seconds}s")
    names = " -> ".join(net.stations[s].name for s in leg.stations)
    print(f"  line {leg.line}: {names} ({leg.seconds}s)")

# The four-way expansion agrees here too; the next demo shows where it does not.

print("method3", method3(build_method3(net), 1, 5).total_seconds)
