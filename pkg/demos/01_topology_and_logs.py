"""
From raw logs to an access graph
================================

Load the shipped sliced-core topology, parse a handful of raw host-login and
container-event lines, and look at the edges they produce.
"""

from slicelm import build_graph, default_topology, read_event_stream

topo = default_topology()
print(f"{len(topo.hosts)} hosts, {len(topo.containers)} containers, {len(topo.slices)} slices")
for host in topo.hosts:
    names = ", ".join(c.name for c in topo.containers_on(host))
    print(f"  {host:5s} slices={sorted(topo.host_slices(host))}  [{names}]")

# Lines may arrive in any order; the reader sorts them. Lifecycle actions and
# failed logins stay in the stream but never become edges.
lines = [
    "2024-01-02T13:03:00Z container_event id=UPF-5 host=H-56 action=escape src=UPF-5 user=svc-deploy",
    "2024-01-02T13:00:00Z container_event id=UPF-5 host=H-56 action=exec src=INTERNET user=svc-deploy",
    "2024-01-02T13:05:00Z container_event id=SMF-6 host=H-56 action=exec src=H-56 user=svc-deploy",
    "2024-01-02T12:00:00Z container_event id=SMF-6 host=H-56 action=start src=H-56 user=root",
    "2024-01-02T12:30:00Z host_login src=INTERNET dst=H-3 user=mno-admin account=mno-admin result=fail",
]
stream = read_event_stream(lines, topo)
for ev in stream:
    print(f"{ev.ts}  {ev.kind.value:16s} {ev.src:>9s} -> {ev.dst:<6s} ok={ev.success}")

graph = build_graph(stream)
print(f"\n{len(graph.edges)} edges:")
print(graph.to_jsonl(), end="")
