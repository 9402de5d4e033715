#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "amt/measure_tree.hpp"
#include "amt/rng.hpp"

namespace amt {

/**
 * Split law of the beta-splitting recursion: the left part of an n-leaf split
 * has size i with probability q[i], proportional to
 * C(n,i) * B(i + beta + 1, n - i + beta + 1). The endpoints beta = -2 (all
 * mass on the extreme splits) and beta = +infinity (all mass on the most
 * balanced splits) are explicit limit laws, not numeric extremes.
 */
struct SplitLaw {
  int n = 0;
  double beta = 0;
  std::vector<double> q;  // index i in {1 .. n-1}; q[0] stays zero
};

SplitLaw split_law(int n, double beta);

/** Random binary tree with n leaves carrying uniform atoms 1/n, grown by the
    recursive beta-splitting construction; deterministic given the seed. */
MeasureTree beta_splitting_tree(int n, double beta, std::uint64_t seed);

/** The beta = -2 limit shape: the caterpillar with n leaves, uniform atoms. */
MeasureTree comb_tree(int n);

/** The beta = +infinity limit shape at 2^k leaves: the symmetric binary tree. */
MeasureTree symmetric_binary(int k);

/** Removes a uniformly chosen leaf together with the branch point it hangs
    from, joining that branch point's two other neighbours, and renormalizes
    the leaf atoms to 1/(n-1). Requires at least two leaves, every vertex of
    degree one or three, uniform leaf atoms, and no diffuse mass. */
MeasureTree remove_random_leaf(const MeasureTree& mt, std::uint64_t seed);

/** Outcome of the leaf-removal consistency experiment. */
struct ConsistencyReport {
  double statistic = 0;
  int degrees = 0;     // pooled cells minus one
  double p_value = 1;
  std::uint64_t replicas = 0;
  // shape key -> (count after removal from T_n, count from fresh T_{n-1})
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> table;
};

/**
 * Draws N replicas of two m-shape samples - one from remove_random_leaf
 * applied to a fresh n-leaf beta-splitting tree, one from a fresh
 * (n-1)-leaf tree - and compares the two key histograms with a two-sample
 * chi-square (cells pooled below ten observations). Replica i uses the
 * substream (seed, i), so results are independent of the thread count.
 */
ConsistencyReport sampling_consistency_test(double beta, int n, int m,
                                            std::uint64_t N, std::uint64_t seed,
                                            int threads = 1);

}  // namespace amt
