#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "amt/measure_tree.hpp"

namespace amt {

/**
 * Chord picture of a finite binary measure tree, drawn in the closed disc
 * bounded by the circle of unit circumference.
 *
 * `boundary` marks positions on the circle (arc-length parameterization,
 * exact rationals, strictly increasing within [0,1)). The chords spanned by
 * `triangles` and `segments` never cross, so they cut the disc into faces.
 * Listed faces are *removed*: a triangle is an open hole between three
 * chords, and a segment is the region between a chord and the boundary arc
 * running counterclockwise from its first to its second endpoint. Everything
 * else — the chords, the marked points, and the remaining faces with their
 * boundary arcs — is *retained* and codes a measure tree: removed triangles
 * become branch points, removed segments become atomic leaves, and retained
 * boundary arcs carry diffuse leaf mass.
 */
struct FiniteSubTriangulation {
  /** Marked circle positions, strictly increasing, in [0,1). */
  std::vector<Rat> boundary;
  /** Removed open triangles, as sorted index triples i < j < k into boundary. */
  std::vector<std::array<int, 3>> triangles;
  /** Removed circular segments: chord {i,j} plus the arc counterclockwise
      from boundary[i] to boundary[j]. The degenerate pair (0,0) on a single
      marked point removes everything except that point. */
  std::vector<std::pair<int, int>> segments;

  /** Every triangle side and segment chord, deduplicated, as pairs i < j. */
  std::vector<std::pair<int, int>> chords() const;
};

/** Outcome of a structural check; `violations` is empty iff `valid`. */
struct ValidationReport {
  bool valid = true;
  std::vector<std::string> violations;
};

/**
 * Checks the picture's invariants and reports every violation found:
 * boundary positions sorted within [0,1), indices in range, no duplicate
 * listings, chords pairwise non-crossing, each listed triangle and segment an
 * actual face of the chord arrangement, and no retained face bordered by
 * three or more chords (such a region would have to branch, but only removed
 * triangles may carry branch points).
 */
ValidationReport validate(const FiniteSubTriangulation& c);

/**
 * The measure tree coded by a valid picture. Each removed triangle becomes a
 * degree-3 branch vertex, adjacent to whatever lies across its chords; each
 * removed segment becomes a leaf whose atom is the length of its arc; each
 * retained face bordered by exactly one chord becomes a leaf whose diffuse
 * edge mass is the total length of its arcs. A retained face between two
 * chords passes its arc length to the neighbouring segment leaf; when both
 * of its neighbours are triangles that mass would sit on an internal edge,
 * which the finite representation cannot carry, so such input is rejected.
 * Throws ValidationError on invalid input (first violation) and on the
 * unrepresentable two-triangle case.
 */
MeasureTree code(const FiniteSubTriangulation& c);

/** Left-to-right order of the two child subtrees under each branch point
    when a tree is laid out around the circle by decode(). */
enum class PlanarOrder {
  canonical,  // by canonical subtree code, then mass, then vertex id
  by_index,   // ascending vertex id
  reversed,   // descending vertex id
};

/**
 * Inverse of code(): lays the tree's mass out around the circle — each
 * vertex preceded by the diffuse mass of its pendant edge — and draws one
 * triangle per branch point (corners at the cumulative masses before it,
 * before its second subtree, and after both) plus one chord per atom.
 * Requires a binary tree with atoms only on leaves; zero-mass leaves and
 * mass-free pass-through vertices are dropped first. `root_leaf` picks the
 * leaf laid down first (-1: the lowest-numbered surviving leaf); it must
 * name a leaf that carries mass. Every PlanarOrder yields a picture that
 * codes back to an equivalent tree.
 */
FiniteSubTriangulation decode(const MeasureTree& mt, int root_leaf = -1,
                              PlanarOrder order = PlanarOrder::canonical);

/**
 * Hausdorff distance between the drawn point sets of two valid pictures —
 * chords, marked points, and retained boundary arcs — in the plane of the
 * unit-circumference circle (radius 1/2π). Curve elements are sampled at
 * spacing at most `tol` and compared against whole elements exactly, so the
 * result underestimates the true distance by at most tol/2. Throws on
 * invalid pictures, tol <= 0, or tol too fine for the sampling budget.
 */
double hausdorff_distance(const FiniteSubTriangulation& a,
                          const FiniteSubTriangulation& b, double tol);

/**
 * Uniformly random triangulation of the convex n-gon with corners at
 * positions i/n: n-2 removed triangles, no removed segments, drawn by
 * recursive apex choice with exact Catalan weights; deterministic given the
 * seed. Coding it yields a binary tree with n diffuse leaves of mass 1/n.
 * Throws for n < 3.
 */
FiniteSubTriangulation uniform_triangulation(int n, std::uint64_t seed);

}  // namespace amt
