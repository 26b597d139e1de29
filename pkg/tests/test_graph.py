from analysis.lie_catalog import parse_group_spec
from graph import build_subgroup_graph, maximal_chain, subgroup_pairs

GL2 = parse_group_spec('gl:2')
SL2 = parse_group_spec('sl:2')
SO2 = parse_group_spec('so:2')
TRIVIAL = parse_group_spec('trivial:2')


def test_inclusion_edges():
    G = build_subgroup_graph(2)
    assert G.has_edge(SO2, SL2)
    assert G.has_edge(SL2, GL2)
    assert G.has_edge(TRIVIAL, SO2)
    assert not G.has_edge(GL2, SL2)
    assert G.nodes[SL2]['dim'] == 3
    assert G.nodes[SO2]['display'] == 'SO(2)'


def test_pairs_are_proper():
    pairs = subgroup_pairs(2)
    assert (GL2, SL2) in pairs
    assert (SL2, GL2) not in pairs
    G = build_subgroup_graph(2)
    assert all(G.nodes[g]['dim'] > G.nodes[h]['dim'] for g, h in pairs)
    # equal algebras are not proper pairs
    assert (SL2, parse_group_spec('sp:2')) not in pairs


def test_maximal_chain_runs_from_trivial_to_gl():
    chain = maximal_chain(2)
    assert chain[0] == 'socaptstar:1,1' or chain[0] == 'trivial:2'
    assert chain[-1] == 'gl:2'
    assert len(chain) == 5
