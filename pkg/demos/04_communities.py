"""Trust communities from the spectrum of A^T A, and a personalized view."""
import numpy as np

from trustnet.graph import TrustMatrix
from trustnet.spectral import community_affinity, community_report, decompose, personalized_matrix

# two groups of readers: one rates the newspapers, the other the magazines
objects = ("times", "guardian", "post", "vogue", "wired", "economist")
readers = ("r1", "r2", "r3", "r4", "r5")
A = TrustMatrix(readers, objects, np.array([
    [5, 4, 4, 0, 0, 1],
    [4, 5, 3, 0, 0, 2],
    [5, 5, 5, 1, 0, 0],
    [0, 0, 1, 5, 4, 0],
    [0, 1, 0, 4, 5, 1],
], dtype=float))

d = decompose(A)
print("eigenvalues:", np.round(d.eigenvalues, 3))
for c in community_report(d, top=3)["communities"]:
    print(f"community {c['community']}: " + ", ".join(o["object"] for o in c["top_objects"]))

# someone who only trusts the magazines
tau = np.array([0, 0, 0, 1, 1, 0], dtype=float)
print("\naffinities:", [round(community_affinity(tau, d, k), 3) for k in range(d.m)])
P = personalized_matrix(A, tau, d)
print("personalized matrix (rows r1..r5):")
print(np.round(P.values, 2))
print("reconstruction error of A:", np.linalg.norm(d.reconstruct() - A.values))
