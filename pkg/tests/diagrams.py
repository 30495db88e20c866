"""Lattice diagrams of the two worked examples, transcribed by hand."""

# first worked example, node by node and edge by edge
HASSE1_NODES = [
    "(-,-)", "(w1,-)", "(w2,-)", "(-,w3)", "(-,w4)", "(w1w2,-)", "(-,w3w4)", "(w1,w3)",
    "(w1,w4)", "(w2,w3)", "(w2,w4)", "(w1w2,w3)", "(w1w2,w4)", "(w1,w3w4)", "(w2,w3w4)",
    "(w3,w2)", "(w1w2,w3w4)", "(w3,w2w4)", "(w3,w1w2)",
]  # fmt: skip
HASSE1_EDGES = [
    (0, 1), (0, 2), (0, 3), (0, 4),
    (1, 5), (1, 7), (1, 8), (2, 5), (2, 9), (2, 10), (3, 6), (3, 7), (3, 9), (4, 6), (4, 8), (4, 10),
    (5, 11), (5, 12), (6, 13), (6, 14), (7, 11), (7, 13), (8, 12), (8, 13), (9, 11), (9, 14),
    (10, 12), (10, 14),
    (11, 15), (11, 16), (12, 16), (13, 16), (14, 16),
    (15, 17), (16, 17),
    (17, 18),
]  # fmt: skip
HASSE2_NODES = [
    "(w1,-)", "(w2,-)", "(-,-)", "(w3,-)", "(w1w3,-)", "(w2w3,-)", "(w1w2,-)", "(w1w2,w3)",
]  # fmt: skip
HASSE2_EDGES = [(3, 4), (3, 5), (4, 6), (5, 6), (6, 7), (2, 0), (2, 1), (2, 3), (0, 4), (1, 5)]
