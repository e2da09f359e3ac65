#pragma once

#include <utility>
#include <vector>

#include "ctxq/rational.hpp"

namespace ctxq {

// Simple undirected graph. Edges are stored with i < j in lexicographic
// order; that order fixes the coordinate layout of every edge-indexed vector
// in the library. Vertex weights are optional (empty = unweighted).
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<char>> adj;
  std::vector<Rat> weights;

  static Graph from_edges(int n, std::vector<std::pair<int, int>> edges);
  static Graph cycle(int n);
  static Graph complete(int n);
  static Graph complete_bipartite(int a, int b);
  static Graph path(int n);
  // n-gonal prism on 2n vertices: outer cycle 0..n-1, inner cycle n..2n-1,
  // spoke i -- n+i.
  static Graph prism(int n);
  // Moebius ladder on n vertices (n even): cycle 0..n-1 plus chords i -- i+n/2.
  static Graph moebius_ladder(int n);

  // Adds an apex vertex (index n) adjacent to every existing vertex.
  Graph suspension() const;
  Graph complement() const;

  bool has_edge(int i, int j) const;
  int edge_index(int i, int j) const;  // -1 if absent
  std::vector<int> neighbors(int v) const;
  int degree(int v) const;
  bool edge_in_triangle(int i, int j) const;
};

// All automorphisms, each as an image vector perm[v]. Capped at 16 vertices.
std::vector<std::vector<int>> graph_automorphisms(const Graph& g);

// Every chordless cycle of length 3..max_len, once, as a vertex list starting
// at its smallest vertex with the smaller neighbor second. max_len 0 means no
// limit.
std::vector<std::vector<int>> chordless_cycles(const Graph& g, int max_len = 0);

// Bron-Kerbosch with pivoting. Capped at 64 vertices.
std::vector<std::vector<int>> maximal_cliques(const Graph& g);
std::vector<std::vector<int>> maximal_independent_sets(const Graph& g);

// True iff h is a minor of g, by contraction branching on top of a subgraph
// isomorphism base case. Capped at 16 vertices.
bool has_minor(const Graph& g, const Graph& h);

// Linear-time special case via series-parallel reduction.
bool has_k4_minor(const Graph& g);

}  // namespace ctxq
