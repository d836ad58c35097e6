import networkx as nx, json
G = {
 "lollipop_graph": nx.lollipop_graph(4,6),
 "barbell_graph": nx.barbell_graph(5,2),
 "wheel_graph": nx.wheel_graph(6),
 "star_graph": nx.star_graph(6),
 "path_graph": nx.path_graph(12),
 "cycle_graph": nx.cycle_graph(10),
 "complete_graph": nx.complete_graph(8),
 "ladder_graph": nx.ladder_graph(5),
 "circular_ladder_graph": nx.circular_ladder_graph(6),
 "binomial_tree": nx.binomial_tree(4),
 "balanced_tree": nx.balanced_tree(2,3),
 "grid_2d_graph": nx.convert_node_labels_to_integers(nx.grid_2d_graph(3,4)),
 "hypercube_graph": nx.convert_node_labels_to_integers(nx.hypercube_graph(4)),
 "complete_bipartite_graph": nx.complete_bipartite_graph(3,4),
 "turan_graph": nx.turan_graph(10,3),
 "windmill_graph": nx.windmill_graph(3,4),
 "tutte_graph": nx.tutte_graph(),
 "bull_graph": nx.bull_graph(),
 "chvatal_graph": nx.chvatal_graph(),
 "cubical_graph": nx.cubical_graph(),
 "desargues_graph": nx.desargues_graph(),
 "diamond_graph": nx.diamond_graph(),
 "dodecahedral_graph": nx.dodecahedral_graph(),
 "frucht_graph": nx.frucht_graph(),
 "heawood_graph": nx.heawood_graph(),
 "house_graph": nx.house_graph(),
 "house_x_graph": nx.house_x_graph(),
 "icosahedral_graph": nx.icosahedral_graph(),
 "krackhardt_kite_graph": nx.krackhardt_kite_graph(),
 "moebius_kantor_graph": nx.moebius_kantor_graph(),
 "octahedral_graph": nx.octahedral_graph(),
 "pappus_graph": nx.pappus_graph(),
 "petersen_graph": nx.petersen_graph(),
 "sedgewick_maze_graph": nx.sedgewick_maze_graph(),
 "tetrahedral_graph": nx.tetrahedral_graph(),
 "truncated_cube_graph": nx.truncated_cube_graph(),
 "truncated_tetrahedron_graph": nx.truncated_tetrahedron_graph(),
}
print(len(G), sum(g.number_of_nodes() for g in G.values())/len(G), sum(g.number_of_edges() for g in G.values())/len(G))
out={}
for k,g in G.items():
    assert nx.is_connected(g)
    ecc=nx.eccentricity(g)
    out[k]={"order":g.number_of_nodes(),"size":g.number_of_edges(),
      "nodes":sorted(g.nodes()),
      "edges":sorted([sorted(e) for e in g.edges()]),
      "eccentricity":{str(n):ecc[n] for n in sorted(g)},
      "radius":nx.radius(g),"diameter":nx.diameter(g),
      "center":sorted(nx.center(g)),"periphery":sorted(nx.periphery(g)),
      "density":nx.density(g),"avg_path_length":nx.average_shortest_path_length(g)}
json.dump(out,open("gpr_networkx_oracle.json","w"),indent=1)
for k,g in G.items(): print(k, g.number_of_nodes(), g.number_of_edges(), sorted(g.edges())[:40] if k in ("bull_graph","chvatal_graph","diamond_graph","frucht_graph","house_graph","house_x_graph","icosahedral_graph","krackhardt_kite_graph","octahedral_graph","petersen_graph","sedgewick_maze_graph","tetrahedral_graph","truncated_tetrahedron_graph","cubical_graph") else "")
