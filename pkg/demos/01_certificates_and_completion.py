"""Certificates, endorsements and what completion does to them.

Alice endorses Bob, Bob endorses Carol, and Carol recommends a shop.
Completion turns those chains into direct (but weaker) recommendations.
"""
from trustnet.graph import CompletionParams, endorsement_complete, path_complete, reduce_to_matrix
from trustnet.netfile import format_network, parse_network

text = """
END alice bob 0.9
END bob carol 0.8
END carol alice 0.3
REC carol bakery 0.9
REC bob bakery 0.4
REC alice florist 0.7
"""
net = parse_network(text)
params = CompletionParams(eta=0.3, epsilon=0.8)

# every path whose penalized product eps**(n-1) * prod stays above eta
closed = path_complete(net.endorsements, params)
for e in closed.endorsements:
    print(f"{e.source:>6} -> {e.target:<6} {e.rating:.3f}  via {'+'.join(e.chain)}")

# carol -> alice sits just above eta; raise eta past it and the base edge is dropped
# while the longer alice -> carol composite survives
strict = path_complete(net.endorsements, CompletionParams(eta=0.35, epsilon=0.8))
print("kept at eta = 0.35:", sorted("+".join(e.chain) for e in strict.endorsements))

# completing twice changes nothing
again = path_complete(closed, params)
print("idempotent:", sorted(e.id for e in again.endorsements) == sorted(e.id for e in closed.endorsements))

# fold endorsement paths into recommendations, then sum parallel ones
rec = endorsement_complete(net.recommendations, net.endorsements, params)
A = reduce_to_matrix(rec, "sum")
print("\nrecommender x object trust after completion:")
print("        " + "  ".join(f"{j:>8}" for j in A.cols))
for u, row in zip(A.rows, A.values):
    print(f"{u:>7} " + "  ".join(f"{x:8.3f}" for x in row))

print("\nas a network file:")
print(format_network(rec))
