#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "amt/measure_tree.hpp"
#include "amt/rng.hpp"

namespace amt {

/**
 * Mass of the subtree hanging off the branch point b = c(u,v,w) on u's side:
 * zero when u is the branch point itself, else the mass of the open component
 * of the complement of b that contains u. Sample points interior to an arc
 * split that arc's diffuse mass exactly (positions are dyadic rationals).
 */
Rat eta(const MeasureTree& mt, SamplePoint u, SamplePoint v, SamplePoint w);

/**
 * Subtree masses of every point triple: for points u_1..u_m, entry (i,j,k)
 * with i<j<k holds the three component masses at the branch point
 * c(u_i,u_j,u_k). Unlike the bare eta, entries absorb the branch point's own
 * atom (closed components), so a sample sitting at the branch point reports
 * that point's mass rather than zero.
 */
struct MassTensor {
  int m = 0;
  std::vector<std::array<Rat, 3>> entries;  // (i,j,k) triples in lexicographic order

  /** Entries concatenated in order; the map key used by distributions. */
  std::vector<Rat> flat() const;
};
MassTensor mass_tensor(const MeasureTree& mt, const std::vector<SamplePoint>& points);

/** Distribution of the m-point mass tensor: exact rational weights (atomic
    trees, enumerated) or sampled counts. Keys are flattened tensors. */
struct TensorDistribution {
  int m = 0;
  bool exact = true;
  std::uint64_t sample_size = 0;  // sampled mode only
  std::uint64_t seed = 0;         // sampled mode only
  std::map<std::vector<Rat>, Rat> weight;           // exact mode
  std::map<std::vector<Rat>, std::uint64_t> tally;  // sampled mode

  /** Support with probabilities as doubles, whichever mode is populated. */
  std::vector<std::pair<std::vector<double>, double>> points() const;
};

/** Exact tensor distribution by enumerating ordered support tuples. Requires
    a purely atomic tree with at most 12 charged vertices and m <= 6. */
TensorDistribution massdist_exact(const MeasureTree& mt, int m);

/** Tensor distribution estimated from N independent m-point samples. Replica
    i draws from the substream (seed, i), so the result does not depend on the
    thread count. */
TensorDistribution massdist_sampled(const MeasureTree& mt, int m, std::uint64_t N,
                                    std::uint64_t seed, int threads = 1);

/** Empirical branch-point distribution: 3n i.i.d. points grouped into n
    consecutive triples, one branch point counted per triple. */
struct BranchPointSample {
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::map<SamplePoint, std::uint64_t> count;  // sums to n
};
BranchPointSample empirical_bpd(const MeasureTree& mt, std::uint64_t n, std::uint64_t seed);

/** A bounded test function of the m x m matrix of pairwise r distances,
    with its Lipschitz constant w.r.t. the entrywise sup norm (used for the
    error bound that couples empirical and exact evaluations). */
struct MatrixFunction {
  std::function<double(const std::vector<std::vector<double>>&)> value;
  double lipschitz = 1.0;
};

/** Exact expectation of phi over m independent mu-points of an atomic tree,
    with the matrix entry (i,j) equal to r(u_i,u_j). Enumerates all ordered
    support tuples; throws when support^m exceeds the documented budget. */
double distance_polynomial_exact(const MeasureTree& mt, int m, const MatrixFunction& phi);

/** One replica of the empirical evaluation: phi of the matrix computed from
    the empirical branch-point distribution, phi of the matrix computed from
    the exact one at the same sample points, and the exact sup deviation
    between the two distributions over all vertex-pair intervals. The coupled
    difference |value - coupled_value| is at most 3 * lipschitz * sup_deviation. */
struct PolynomialTrial {
  double value = 0;
  double coupled_value = 0;
  double sup_deviation = 0;
};
struct PolynomialEstimate {
  int m = 0;
  std::uint64_t triples = 0;   // branch-point triples per replica (the n of nu_n)
  std::uint64_t replicas = 0;  // independent replicas averaged
  std::uint64_t seed = 0;
  double mean = 0;             // Monte Carlo estimate of the functional
  std::vector<PolynomialTrial> trials;
};

/** Empirical evaluation of the same functional: each replica draws 3n points,
    builds the empirical branch-point distribution from the n triples, and
    evaluates phi on the first m points' distance matrix. Requires an atomic
    tree and 3n >= m. Replicas use substreams (seed, i). */
PolynomialEstimate distance_polynomial_empirical(const MeasureTree& mt, int m,
                                                 const MatrixFunction& phi, std::uint64_t n,
                                                 std::uint64_t N, std::uint64_t seed,
                                                 int threads = 1);

/** The two set families with finite VC dimension driving the uniform
    convergence results: intervals [u,v] (dimension 2) and components S_v(u)
    of the complement of one point, including the singleton {v} (dimension
    at most 3). */
enum class SetFamily { intervals, components };

/** Brute-force shattering check: does any k-subset of vertices realize all
    2^k traces against the family? Enumerates every family set and every
    k-subset; throws when the tree has more than 64 vertices or the subset
    count exceeds the documented budget. */
struct ShatterReport {
  bool shattered = false;
  std::vector<int> witness;  // a shattered k-subset if one exists
};
ShatterReport vc_shatter_check(const AlgebraicTree& tree, SetFamily family, int k);

/** Per-trial exact supremum of |mu(S) - mu_n(S)| over the family, where mu_n
    is the empirical measure of n i.i.d. points, against the distribution-free
    bound 96 * sqrt(dimension / n) on its expectation. Family sets range over
    vertex pairs; for trees with diffuse arc mass this is the subfamily with
    vertex endpoints. */
struct DeviationReport {
  SetFamily family = SetFamily::intervals;
  int dimension = 2;  // VC dimension entering the bound: 2 intervals, 3 components
  std::uint64_t n = 0;
  int trials = 0;
  std::uint64_t seed = 0;
  double bound = 0;  // 96 * sqrt(dimension / n)
  std::vector<double> sup;

  double mean_sup() const;
};
DeviationReport glivenko_cantelli_sup(const MeasureTree& mt, SetFamily family, std::uint64_t n,
                                      int trials, std::uint64_t seed, int threads = 1);

/** 1-Wasserstein distance between two tensor distributions under the
    entrywise sup ground metric: an exact transport plan (successive shortest
    paths, exact rational flows) when the support product is small, else the
    sorted coupling of the tensors' sup-norm projections, which is a lower
    bound. The method used is reported. */
struct TransportReport {
  double distance = 0;
  std::string method;  // "transport" or "projection"
};
TransportReport wasserstein_linf(const TensorDistribution& a, const TensorDistribution& b);

}  // namespace amt
