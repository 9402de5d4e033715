#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "amt/rational.hpp"
#include "amt/rng.hpp"
#include "amt/tree.hpp"

namespace amt {

/**
 * A point of the tree seen as a continuum: either a vertex, or a point in the
 * interior of a leaf edge (where diffuse leaf mass lives). Arc positions are
 * measured from the leaf's attachment vertex toward the leaf end.
 */
struct SamplePoint {
  enum class Kind { vertex, arc };
  Kind kind = Kind::vertex;
  int id = 0;     // vertex id, or the leaf whose edge carries the point
  double u = 0;   // arc points only: position in (0,1)

  static SamplePoint at_vertex(int v) { return {Kind::vertex, v, 0.0}; }
  static SamplePoint on_arc(int leaf, double u) { return {Kind::arc, leaf, u}; }

  bool operator==(const SamplePoint& o) const {
    return kind == o.kind && id == o.id && (kind == Kind::vertex || u == o.u);
  }
  bool operator!=(const SamplePoint& o) const { return !(*this == o); }
  bool operator<(const SamplePoint& o) const {  // arbitrary stable order for map keys
    if (kind != o.kind) return kind < o.kind;
    if (id != o.id) return id < o.id;
    return kind == Kind::arc && u < o.u;
  }
};

/** The point on all three pairwise paths between a, b, c (vertex or arc point). */
SamplePoint branch_point_of(const AlgebraicTree& tree, SamplePoint a, SamplePoint b,
                            SamplePoint c);

/** True iff w lies on the path between x and y (inclusive). */
bool point_on_path(const AlgebraicTree& tree, SamplePoint w, SamplePoint x, SamplePoint y);

/** w precedes p in depth-first order with arc points between attachment and leaf;
    a total order of tree points used to build spanning subtrees of samples. */
bool point_preorder_less(const AlgebraicTree& tree, SamplePoint a, SamplePoint b);

/** The point where the root-paths of a and b separate (both lie "below" it). */
SamplePoint point_meet(const AlgebraicTree& tree, SamplePoint a, SamplePoint b);

/** True iff a lies on the path from vertex 0 (the indexing root) to b. */
bool point_is_ancestor(const AlgebraicTree& tree, SamplePoint a, SamplePoint b);

/**
 * A tree with a probability measure: exact rational atoms on vertices plus
 * diffuse ("arc") masses spread uniformly along leaf edges. Immutable; the
 * derived branch-point distribution and the sampling table are computed once
 * on first use and shared by copies.
 */
class MeasureTree {
 public:
  MeasureTree(AlgebraicTree tree, std::vector<Rat> atom_mass, std::vector<Rat> arc_mass);

  const AlgebraicTree& tree() const { return tree_; }
  int size() const { return tree_.size(); }
  const Rat& atom(int v) const;
  const Rat& arc(int v) const;
  const std::vector<Rat>& atoms() const { return atom_; }
  const std::vector<Rat>& arcs() const { return arc_; }
  bool has_arc_mass() const { return has_arcs_; }

  /** Every vertex has degree <= 3. */
  bool binary() const;
  /** Atoms sit only on vertices of degree <= 1. */
  bool atoms_on_leaves() const;

  /** Diffuse mass living on the edge from parent(child) to child (possibly
      from both endpoints' arcs when the tree is a single edge). */
  Rat edge_diffuse_mass(int child) const;

  /** mu(S_x(y)): mass of the component of the tree minus x containing y,
      including arc masses on the y side (x's own arc always counts: removing
      a single point of it leaves the rest attached). Requires x != y. */
  Rat component_mass(int x, int y) const;

  /** Law of the branch point of three independent mu-samples, as per-vertex
      masses. Closed form per vertex: 1 - sum_i m_i^2 (3 - 2 m_i) over the
      component masses m_i at that vertex. Fully atomic trees only; with arc
      masses the branch point can fall inside an edge, use the empirical
      estimator instead. */
  std::vector<Rat> branch_point_distribution() const;

  /** Same law by exhaustive enumeration of ordered atom triples (<= 40 atoms). */
  std::vector<Rat> branch_point_distribution_bruteforce() const;

  /** Single branch-point mass (cached closed form). */
  Rat nu(int v) const;

  /** Branch-point mass of the whole path [x, y]. */
  Rat nu_interval(int x, int y) const;

  /** The metric nu([x,y]) - nu{x}/2 - nu{y}/2. */
  Rat r_nu(int x, int y) const;

  std::vector<std::vector<Rat>> distance_matrix(const std::vector<int>& points) const;

  /** Half the degree-weighted total branch-point mass. */
  Rat total_length() const;

  /** The same quantity as the sum of r_nu over structural edges (cross-check). */
  Rat total_length_edgewise() const;

  /** Prunes zero-mass leaves and splices out massless degree-2 vertices. */
  MeasureTree reduced() const;

  /** Canonical code of the equivalence class: equal iff some mass-preserving
      isomorphism matches the two trees' supports. Path-shaped trees collapse
      to their one-dimensional mass sequence (any diffuse spread along a line
      is equivalent to any other with the same totals between atoms). */
  std::string canonical_form() const;

  static bool equivalent(const MeasureTree& a, const MeasureTree& b);

  /** One mu-sample: an atom with its mass, or a uniform position on an arc. */
  SamplePoint draw_point(SplitRng& rng) const;

  /** m independent samples; exact duplicate arc positions are redrawn. */
  std::vector<SamplePoint> draw_points(int m, SplitRng& rng) const;

 private:
  void check_vertex(int v) const;
  const std::vector<Rat>& nu_all() const;
  const std::vector<Rat>& nu_prefix() const;
  void ensure_sampler() const;

  AlgebraicTree tree_;
  std::vector<Rat> atom_, arc_;
  std::vector<Rat> weight_prefix_;  // atom+arc sums over preorder prefixes
  bool has_arcs_ = false;

  struct Cache {
    std::once_flag nu_once, sampler_once;
    std::vector<Rat> nu, nu_prefix;
    std::vector<double> cumulative;   // sampling table over atoms then arcs
    std::vector<SamplePoint> entries; // arc entries carry u = 0, filled on draw
  };
  std::shared_ptr<Cache> cache_;
};

}  // namespace amt
