import networkx as nx

from analysis.lie_catalog import algebra_of, catalog_groups, subalgebra_check


def build_subgroup_graph(p, groups=None):
    """
    Inclusion lattice of the catalog groups acting on R^p.
    Edge H -> G whenever the Lie algebra of H sits inside that of G.
    """
    G = nx.DiGraph()
    groups = catalog_groups(p) if groups is None else list(groups)

    for g in groups:
        G.add_node(g, spec=g.spec, display=g.display, dim=algebra_of(g).dim)

    for h in groups:
        for g in groups:
            if h == g:
                continue
            if subalgebra_check(h, g):
                G.add_edge(h, g)

    return G


def subgroup_pairs(p, graph=None):
    """
    Proper (G, H) pairs with H a subgroup of G and a strictly smaller algebra.
    Catalog entries with equal algebras (e.g. SO∩T*_r(1,1) and {I} on R^2)
    form 2-cycles and are skipped.
    """
    G = build_subgroup_graph(p) if graph is None else graph
    pairs = []
    for h, g in G.edges():
        if G.nodes[g]['dim'] > G.nodes[h]['dim']:
            pairs.append((g, h))
    return sorted(pairs)


def maximal_chain(p, graph=None):
    """Longest inclusion chain from {I} upwards, as group specs."""
    G = build_subgroup_graph(p) if graph is None else graph
    # 2-cycles of equal algebras make the graph cyclic; collapse them first
    condensed = nx.condensation(G)
    path = nx.dag_longest_path(condensed)
    members = nx.get_node_attributes(condensed, 'members')
    return [min(members[c]).spec for c in path]
