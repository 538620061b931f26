"""Dev-only validation of Clifford conventions against the oracle."""
import random
import sys

sys.path.insert(0, "src")

from mbqnet.graphstate import (
    Graph, PauliFrame, local_complement, measure_x, measure_y, measure_z,
    physical_basis, logical_outcome,
)
from mbqnet.stabilizer import StabTableau, states_equal, equal_up_to_local_clifford
from mbqnet.cliffords import CLIFFORD_OPS, compose

# 1. trivial from_graph
g1 = Graph.from_edges(1, [])
assert StabTableau.from_graph(g1).to_strings() == ["+X"], StabTableau.from_graph(g1).to_strings()
g2 = Graph.path(2)
assert StabTableau.from_graph(g2).to_strings() == ["+XZ", "+ZX"]
g3 = Graph.path(3)
assert StabTableau.from_graph(g3).to_strings() == ["+XZI", "+ZXZ", "+IZX"]
print("from_graph trivials ok")

# 2. S convention: measure Y_1 on path 0-1-2, outcome +1, apply spec -> edge 0-2
def oracle_case(g, node, basis, outcome, b=None):
    t0 = StabTableau.from_graph(g)
    m, t1 = t0.measure(node, basis, forced=outcome)
    if basis == "Z":
        g2, spec = measure_z(g, node, outcome)
    elif basis == "Y":
        g2, spec = measure_y(g, node, outcome)
    else:
        g2, spec = measure_x(g, node, b, outcome)
    t2 = t1.apply_ops(spec.targets)
    expect = StabTableau.from_graph(g2, measured={node: (basis, outcome)})
    return states_equal(t2, expect)

for outc in (1, -1):
    assert oracle_case(Graph.path(3), 1, "Y", outc), f"Y convention broken outcome {outc}"
print("Y/S convention ok")

for outc in (1, -1):
    assert oracle_case(Graph.path(3), 1, "X", outc, b=0), f"X convention broken outcome {outc}"
    assert oracle_case(Graph.path(2), 0, "X", outc, b=1), f"X leaf broken {outc}"
print("X/sqrtY convention ok")

# 3. 500 random oracle equivalence (Z/Y)
rng = random.Random(12345)
fails = 0
for trial in range(500):
    n = rng.randint(2, 10)
    edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.4]
    g = Graph.from_edges(n, edges)
    node = rng.randrange(n)
    basis = rng.choice("ZY")
    outc = rng.choice((1, -1))
    if not oracle_case(g, node, basis, outc):
        fails += 1
        print("FAIL", n, sorted(edges), node, basis, outc)
assert fails == 0, fails
print("500 random Z/Y oracle cases ok")

# X rule randomized
for trial in range(200):
    n = rng.randint(2, 8)
    edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.5]
    g = Graph.from_edges(n, edges)
    cands = [v for v in range(n) if g.neighbors(v)]
    if not cands:
        continue
    node = rng.choice(cands)
    b = rng.choice(sorted(g.neighbors(node)))
    outc = rng.choice((1, -1))
    assert oracle_case(g, node, "X", outc, b=b), (n, sorted(edges), node, b, outc)
print("200 random X oracle cases ok")

# 4. frame correctness: physical execution + final frames == logical rule sequence
def frame_case(g0, seq, outcomes):
    """seq: list of (node, logical_basis). outcomes: physical outcomes."""
    tab = StabTableau.from_graph(g0)
    g = g0
    frame = PauliFrame()
    recorded = {}
    for (node, basis), m_phys in zip(seq, outcomes):
        k = frame.exponent(node)
        letter, flip = physical_basis(basis, k)
        m, tab = tab.measure(node, letter, forced=m_phys)
        m_log = logical_outcome(m_phys, flip)
        if basis == "Z":
            g, spec = measure_z(g, node, m_log)
        else:
            g, spec = measure_y(g, node, m_log)
        frame = frame.accumulate(spec)
        recorded[node] = (letter, m_phys)
    # apply remaining frame ops on alive nodes
    from mbqnet.cliffords import EXPONENT_TO_OP
    for node in sorted(g.alive):
        k = frame.exponent(node)
        if k:
            tab = tab.apply_clifford(node, EXPONENT_TO_OP[k])
    expect = StabTableau.from_graph(g, measured=recorded)
    return states_equal(tab, expect)

for trial in range(300):
    n = rng.randint(2, 8)
    edges = [(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.4]
    g0 = Graph.from_edges(n, edges)
    count = rng.randint(1, min(5, n - 1))
    nodes = rng.sample(range(n), count)
    seq = [(v, rng.choice("ZY")) for v in nodes]
    outcomes = [rng.choice((1, -1)) for _ in nodes]
    assert frame_case(g0, seq, outcomes), (sorted(edges), seq, outcomes)
print("300 random frame cases ok")

# 5. clifford sanity
S = CLIFFORD_OPS["S"]
assert compose(S, CLIFFORD_OPS["S_dag"]) == CLIFFORD_OPS["I"]
assert compose(S, S) == CLIFFORD_OPS["Z"]
t = StabTableau.from_generators(["+X"])
assert t.apply_clifford(0, "S").to_strings() == ["-Y"]
assert t.apply_clifford(0, "Z").to_strings() == ["-X"]
print("clifford table sanity ok")

# 6. EPR vs edge LC-equivalence
epr = StabTableau.from_generators(["+XX", "+ZZ"])
edge = StabTableau.from_graph(Graph.path(2))
assert equal_up_to_local_clifford(epr, edge, {0, 1})
plus2 = StabTableau.from_generators(["+XI", "+IX"])
assert not equal_up_to_local_clifford(edge, plus2, {0, 1})
print("LC equivalence ok")

print("ALL CONVENTION CHECKS PASSED")
