#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "amt/rng.hpp"

namespace amt {

/** One violating tuple found by verify_axioms. */
struct AxiomViolation {
  std::string axiom;          // "symmetry", "two_point", "three_point", "four_point"
  std::vector<int> tuple;     // offending vertices
};

struct AxiomReport {
  std::vector<AxiomViolation> violations;
  std::uint64_t tuples_checked = 0;
  bool ok() const { return violations.empty(); }
};

/**
 * Finite tree with median ("branch point") queries.
 *
 * Vertices are dense ints 0..n-1. The tree is rooted at vertex 0 purely for
 * indexing: Euler tour + sparse-table minima give O(1) lowest common
 * ancestors, and binary lifting gives the level-ancestor jumps used by
 * component queries. Immutable after construction; queries are thread-safe.
 */
class AlgebraicTree {
 public:
  /** Builds from an undirected edge list on vertices 0..n-1 (n = max id + 1,
      or 1 for an empty list). Throws ValidationError on duplicate edges,
      cycles, or disconnected input. */
  static AlgebraicTree from_edges(const std::vector<std::pair<int, int>>& edge_list,
                                  std::optional<int> vertex_count = std::nullopt);

  int size() const { return n_; }

  /** The unique vertex lying on all three pairwise paths. */
  int branch_point(int x, int y, int z) const;

  /** Path from x to y, inclusive, in path order. */
  std::vector<int> interval(int x, int y) const;

  /** True iff v lies on the path from x to y (inclusive). */
  bool on_path(int v, int x, int y) const;

  /** Vertex set of the component of T minus {x} containing y; {x} if x == y. */
  std::vector<int> component(int x, int y) const;

  /** Number of edges at v (components of T minus {v}). */
  int degree(int v) const;

  /** Vertices of degree <= 1. */
  std::vector<int> leaves() const;

  /** Vertices of degree >= 3. */
  std::vector<int> branch_points() const;

  /** All edges as (min, max) pairs. */
  std::vector<std::pair<int, int>> edges() const;

  /** x precedes y in the partial order rooted at rho (x on the path rho..y). */
  bool is_le(int rho, int x, int y) const { return on_path(x, rho, y); }

  /** Infimum of x and y in the order rooted at rho. */
  int meet(int rho, int x, int y) const { return branch_point(rho, x, y); }

  /** Median recovered as the rho-maximal pairwise meet; equals branch_point
      for every rho (cross-check formulation). */
  int branch_point_from_order(int rho, int x, int y, int z) const;

  /** Checks the branch-point axioms (argument symmetry, the two identities,
      and the four-point membership rule) on all tuples, or on k sampled
      tuples when a generator is supplied. */
  AxiomReport verify_axioms() const;
  AxiomReport verify_axioms_sampled(std::uint64_t k, SplitRng rng) const;

  /** True iff mapping source vertices through f commutes with the two trees'
      branch-point maps on every triple. f must be total on source vertices. */
  static bool is_homomorphism(const std::vector<int>& f, const AlgebraicTree& source,
                              const AlgebraicTree& target);

  /** Canonical code; equal codes iff the trees are isomorphic. */
  std::string canonical_form() const;

  // --- Rooted-at-0 plumbing shared with the measure layer. ---
  int parent(int v) const { return parent_[v]; }
  int depth(int v) const { return depth_[v]; }
  int preorder_index(int v) const { return tin_[v]; }
  int vertex_at_preorder(int i) const { return order_[i]; }
  int subtree_end(int v) const { return tout_[v]; }  // preorder range [tin, tout)
  bool in_subtree(int v, int u) const { return tin_[u] >= tin_[v] && tin_[u] < tout_[v]; }
  const std::vector<int>& neighbors(int v) const { return adj_[v]; }

  /** First vertex after x on the path toward y (x != y). */
  int neighbor_toward(int x, int y) const;

  int lca(int x, int y) const;

  /** Graph distance (edge count) between x and y. */
  int path_length(int x, int y) const;

 private:
  AlgebraicTree() = default;
  void build_tables();
  void check_vertex(int v) const;
  std::string rooted_code(int root) const;

  int n_ = 0;
  std::vector<std::vector<int>> adj_;
  std::vector<int> parent_, depth_, order_, tin_, tout_;
  std::vector<int> euler_, first_;            // Euler tour of depths for RMQ
  std::vector<std::vector<int>> sparse_;      // sparse table of tour positions
  std::vector<std::vector<int>> up_;          // binary lifting ancestors
};

/** Centroid vertices (one or two) of the tree. */
std::vector<int> centroids(const AlgebraicTree& tree);

}  // namespace amt
