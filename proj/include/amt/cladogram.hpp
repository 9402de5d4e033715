#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "amt/measure_tree.hpp"
#include "amt/rational.hpp"
#include "amt/tree.hpp"

namespace amt {

/**
 * A labelled shape spanned by m sample points: an unrooted tree whose interior
 * vertices are unlabelled and of degree three, and whose leaves carry disjoint
 * label sets covering {1..m} (several labels on one leaf when samples
 * coincide). The one- and two-leaf shapes are the only degenerate cases.
 */
struct Cladogram {
  AlgebraicTree tree;
  std::vector<std::vector<int>> labels;  // per vertex, sorted ascending

  int size() const { return tree.size(); }

  /** Equal exactly for label-preserving isomorphic shapes: minimal rooted
      code over centroid placements with every vertex's label set embedded. */
  std::string canonical_key() const;
};

/**
 * The shape spanned by the samples; points[i] carries label i + 1. Coincident
 * samples merge into one multi-label leaf, and a sample lying in the interior
 * of the span becomes a pendant leaf attached at its position. Throws when a
 * sample sits on a branch point (the shape is not defined there) or when the
 * span passes through a vertex of degree four or more (not a binary shape).
 */
Cladogram shape(const MeasureTree& mt, const std::vector<SamplePoint>& points);

/** Number of distinct single-label m-leaf cladograms: (2m-5)!! for m >= 3,
    and 1 for m in {1, 2}. */
Int count_cladograms(int m);

/** Distribution of shape keys under m independent draws from the mass. */
struct ShapeDistribution {
  int m = 0;
  bool exact = false;
  std::uint64_t sample_size = 0;  // sampled mode only
  std::uint64_t seed = 0;         // sampled mode only
  std::map<std::string, Rat> weight;           // exact probabilities, sum 1
  std::map<std::string, std::uint64_t> tally;  // sampled counts
  std::map<std::string, Cladogram> example;    // one witness per key

  std::map<std::string, double> probabilities() const;
};

/** Exact distribution by enumerating ordered atom tuples. Requires a fully
    atomic mass with at most 12 atoms and m <= 6. */
ShapeDistribution shape_distribution_exact(const MeasureTree& mt, int m);

/** Monte Carlo estimate from n independent m-tuples. Replica i draws from a
    substream derived from (seed, i), so the tallies do not depend on the
    thread count. */
ShapeDistribution shape_distribution_sampled(const MeasureTree& mt, int m,
                                             std::uint64_t n, std::uint64_t seed,
                                             int threads = 1);

/** Total variation distance: half the sum of |p - q| over the union of the
    two supports. Requires equal m. */
double tv_distance(const ShapeDistribution& a, const ShapeDistribution& b);

}  // namespace amt
