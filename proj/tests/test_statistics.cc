#include "amt/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "amt/random_trees.hpp"
#include "doctest.h"
#include "oracles.hpp"

using amt::AlgebraicTree;
using amt::BranchPointSample;
using amt::DeviationReport;
using amt::eta;
using amt::mass_tensor;
using amt::MassTensor;
using amt::massdist_exact;
using amt::massdist_sampled;
using amt::MatrixFunction;
using amt::MeasureTree;
using amt::PolynomialEstimate;
using amt::Rat;
using amt::SamplePoint;
using amt::SetFamily;
using amt::ShatterReport;
using amt::TensorDistribution;
using amt::TransportReport;
using amt::ValidationError;

namespace {

MeasureTree make(std::vector<std::pair<int, int>> edges, std::vector<Rat> atoms,
                 std::vector<Rat> arcs = {}) {
  int n = static_cast<int>(atoms.size());
  if (arcs.empty()) arcs.assign(n, Rat(0));
  return MeasureTree(AlgebraicTree::from_edges(edges, n), std::move(atoms), std::move(arcs));
}

Rat r(int p, int q) { return Rat(p) / q; }

SamplePoint vx(int v) { return SamplePoint::at_vertex(v); }
SamplePoint arc(int leaf, double u) { return SamplePoint::on_arc(leaf, u); }

std::vector<Rat> key3(Rat a, Rat b, Rat c) { return {std::move(a), std::move(b), std::move(c)}; }

/** The three tensor keys obtained by placing the odd entry in each slot. */
void add_perms(std::map<std::vector<Rat>, Rat>& into, const Rat& pair_side, const Rat& odd_side,
               const Rat& weight) {
  into[key3(pair_side, pair_side, odd_side)] += weight;
  into[key3(pair_side, odd_side, pair_side)] += weight;
  into[key3(odd_side, pair_side, pair_side)] += weight;
}

/** Tensor distribution recomputed through the sample-point interface, as an
    independent check on the vertex-level enumeration. */
std::map<std::vector<Rat>, Rat> brute_tensor_law(const MeasureTree& mt, int m) {
  std::vector<int> support;
  for (int v = 0; v < mt.size(); ++v)
    if (mt.atom(v) > 0) support.push_back(v);
  std::map<std::vector<Rat>, Rat> out;
  std::vector<int> idx(m, 0);
  const int s = static_cast<int>(support.size());
  for (;;) {
    Rat w = 1;
    std::vector<SamplePoint> pts;
    for (int i : idx) {
      w *= mt.atom(support[i]);
      pts.push_back(vx(support[i]));
    }
    out[mass_tensor(mt, pts).flat()] += w;
    int pos = m - 1;
    while (pos >= 0 && ++idx[pos] == s) idx[pos--] = 0;
    if (pos < 0) break;
  }
  return out;
}

}  // namespace

TEST_CASE("eta reports the mass hanging on the first point's side") {
  // Two atoms joined by an edge: the branch point of (a, b, b) is b itself,
  // and a's side carries the other half of the mass.
  MeasureTree edge = make({{0, 1}}, {r(1, 2), r(1, 2)});
  CHECK(eta(edge, vx(0), vx(1), vx(1)) == r(1, 2));
  CHECK(eta(edge, vx(1), vx(0), vx(1)) == 0);
  CHECK(eta(edge, vx(0), vx(0), vx(1)) == 0);

  MeasureTree star = make({{0, 1}, {0, 2}, {0, 3}}, {0, r(1, 3), r(1, 3), r(1, 3)});
  CHECK(eta(star, vx(1), vx(2), vx(3)) == r(1, 3));
  CHECK(eta(star, vx(2), vx(1), vx(3)) == r(1, 3));
  CHECK(eta(star, vx(0), vx(1), vx(2)) == 0);
  CHECK(eta(star, vx(1), vx(0), vx(2)) == r(1, 3));  // branch point is still the hub

  // A purely diffuse edge: three interior points split it at the middle one,
  // whose two sides hold the diffuse mass in proportion to their length.
  MeasureTree diffuse = make({{0, 1}}, {0, 0}, {r(1, 2), r(1, 2)});
  CHECK(eta(diffuse, arc(0, 0.25), arc(0, 0.75), arc(1, 0.5)) == r(1, 2));
  CHECK(eta(diffuse, arc(0, 0.75), arc(0, 0.25), arc(1, 0.5)) == r(1, 2));
  CHECK(eta(diffuse, arc(0, 0.125), arc(0, 0.5), arc(0, 0.75)) == r(1, 2));
  // The two arc charts of the one edge run in opposite directions, so chart-1
  // position u names the same point as chart-0 position 1-u.
  CHECK(eta(diffuse, arc(1, 0.5), arc(0, 0.9), arc(0, 0.1)) == 0);
  CHECK(eta(diffuse, arc(0, 0.9), arc(1, 0.5), arc(0, 0.1)) == r(1, 2));

  // Atoms and arcs together: the side toward a vertex keeps its atom plus the
  // reachable fraction of the edge's diffuse mass.
  MeasureTree mixed = make({{0, 1}}, {r(1, 4), r(1, 4)}, {r(1, 4), r(1, 4)});
  CHECK(eta(mixed, vx(0), vx(1), arc(0, 0.5)) == r(1, 2));
  CHECK(eta(mixed, vx(1), vx(0), arc(0, 0.5)) == r(1, 2));
  CHECK(eta(mixed, arc(0, 0.5), vx(0), vx(1)) == 0);

  CHECK_THROWS_AS(eta(edge, vx(2), vx(0), vx(1)), ValidationError);
  CHECK_THROWS_AS(eta(edge, arc(0, 0.0), vx(0), vx(1)), ValidationError);
  CHECK_THROWS_AS(eta(edge, arc(0, 1.0), vx(0), vx(1)), ValidationError);
  CHECK_THROWS_AS(eta(star, arc(0, 0.5), vx(1), vx(2)), ValidationError);  // hub has no arc
}

TEST_CASE("mass tensors absorb the branch-point atom") {
  MeasureTree star = make({{0, 1}, {0, 2}, {0, 3}}, {0, r(1, 3), r(1, 3), r(1, 3)});
  MassTensor t = mass_tensor(star, {vx(1), vx(2), vx(3)});
  CHECK(t.m == 3);
  REQUIRE(t.entries.size() == 1);
  CHECK(t.flat() == key3(r(1, 3), r(1, 3), r(1, 3)));

  // A sample at the branch point contributes the point's own mass, so the
  // fully degenerate tensor of a one-vertex tree is all ones, not all zeros.
  MeasureTree dot = make({}, {1});
  CHECK(mass_tensor(dot, {vx(0), vx(0), vx(0)}).flat() == key3(1, 1, 1));

  MeasureTree edge = make({{0, 1}}, {r(1, 2), r(1, 2)});
  CHECK(mass_tensor(edge, {vx(0), vx(0), vx(1)}).flat() == key3(r(1, 2), r(1, 2), 1));
  CHECK(mass_tensor(edge, {vx(0), vx(1), vx(0)}).flat() == key3(r(1, 2), 1, r(1, 2)));

  // Fewer than three points leave nothing to report.
  CHECK(mass_tensor(star, {}).entries.empty());
  CHECK(mass_tensor(star, {vx(1), vx(2)}).flat().empty());

  // Four points on the two-cherry tree: entries follow (i,j,k) lexicographic
  // order, one triple per line.
  MeasureTree cherry = amt::symmetric_binary(2);
  std::vector<int> leaves = cherry.tree().leaves();
  REQUIRE(leaves.size() == 4);
  // Sort the leaves so the first two share a cherry.
  std::vector<int> ordered = leaves;
  std::sort(ordered.begin(), ordered.end(), [&](int a, int b) {
    const AlgebraicTree& tr = cherry.tree();
    auto keya = std::make_pair(tr.neighbors(a).front(), a);
    auto keyb = std::make_pair(tr.neighbors(b).front(), b);
    return keya < keyb;
  });
  MassTensor quad =
      mass_tensor(cherry, {vx(ordered[0]), vx(ordered[1]), vx(ordered[2]), vx(ordered[3])});
  REQUIRE(quad.entries.size() == 4);  // triples 123, 124, 134, 234
  CHECK(quad.entries[0] == std::array<Rat, 3>{r(1, 4), r(1, 4), r(1, 2)});
  CHECK(quad.entries[3] == std::array<Rat, 3>{r(1, 2), r(1, 4), r(1, 4)});

  CHECK_THROWS_AS(mass_tensor(star, {vx(9), vx(1), vx(2)}), ValidationError);
}

TEST_CASE("exact tensor distributions match the closed-form benchmark law") {
  // Four leaves in two cherries. Triples either straddle the cherries, repeat
  // a leaf, or collapse entirely; each pattern has a known exact weight.
  TensorDistribution four = massdist_exact(amt::symmetric_binary(2), 3);
  std::map<std::vector<Rat>, Rat> expected;
  add_perms(expected, r(1, 4), r(1, 2), r(1, 8));
  add_perms(expected, r(1, 4), Rat(1), r(3, 16));
  expected[key3(r(1, 4), r(1, 4), r(1, 4))] = r(1, 16);
  CHECK(four.exact);
  CHECK(four.weight == expected);

  // Eight leaves add one deeper split level to the pattern list.
  TensorDistribution eight = massdist_exact(amt::symmetric_binary(3), 3);
  expected.clear();
  add_perms(expected, r(1, 4), r(1, 2), r(1, 8));
  add_perms(expected, r(1, 8), r(3, 4), r(3, 32));
  add_perms(expected, r(1, 8), Rat(1), r(7, 64));
  expected[key3(r(1, 8), r(1, 8), r(1, 8))] = r(1, 64);
  CHECK(eight.weight == expected);
  Rat total = 0;
  for (const auto& [key, w] : eight.weight) total += w;
  CHECK(total == 1);

  // Degenerate cases: one vertex concentrates everything, and m < 3 leaves a
  // single empty tensor.
  TensorDistribution dot = massdist_exact(make({}, {1}), 3);
  REQUIRE(dot.weight.size() == 1);
  CHECK(dot.weight.at(key3(1, 1, 1)) == 1);
  TensorDistribution pairs = massdist_exact(amt::symmetric_binary(2), 2);
  REQUIRE(pairs.weight.size() == 1);
  CHECK(pairs.weight.at({}) == 1);

  CHECK_THROWS_AS(massdist_exact(make({{0, 1}}, {0, 0}, {r(1, 2), r(1, 2)}), 3), ValidationError);
  CHECK_THROWS_AS(massdist_exact(amt::symmetric_binary(2), 0), ValidationError);
  CHECK_THROWS_AS(massdist_exact(amt::symmetric_binary(2), 7), ValidationError);
  CHECK_THROWS_AS(massdist_exact(amt::beta_splitting_tree(13, 0, 5), 3), ValidationError);
}

TEST_CASE("enumerated and sampled tensor distributions agree") {
  // The vertex-level enumeration must match the generic sample-point path.
  amt::SplitRng rng(424242);
  for (int trial = 0; trial < 10; ++trial) {
    MeasureTree mt = oracle::random_atomic_measure_tree(rng, 3 + (int)rng.uniform_int(7));
    CHECK(massdist_exact(mt, 3).weight == brute_tensor_law(mt, 3));
  }
  MeasureTree small = oracle::random_atomic_measure_tree(rng, 5);
  CHECK(massdist_exact(small, 4).weight == brute_tensor_law(small, 4));

  // Sampling converges to the exact law and ignores the thread count.
  MeasureTree star = make({{0, 1}, {0, 2}, {0, 3}}, {0, r(1, 3), r(1, 3), r(1, 3)});
  TensorDistribution exact = massdist_exact(star, 3);
  TensorDistribution sampled = massdist_sampled(star, 3, 4000, 99);
  CHECK_FALSE(sampled.exact);
  std::uint64_t total = 0;
  double tv = 0;
  for (const auto& [key, c] : sampled.tally) {
    total += c;
    Rat w = exact.weight.count(key) ? exact.weight.at(key) : Rat(0);
    tv += std::abs(double(c) / 4000 - amt::rat_to_double(w));
  }
  CHECK(total == 4000);
  CHECK(tv < 0.05);
  CHECK(massdist_sampled(star, 3, 500, 7, 4).tally == massdist_sampled(star, 3, 500, 7).tally);

  CHECK_THROWS_AS(massdist_sampled(star, 0, 10, 1), ValidationError);
  CHECK_THROWS_AS(massdist_sampled(star, 3, 0, 1), ValidationError);
}

TEST_CASE("empirical branch-point samples track the exact distribution") {
  MeasureTree edge = make({{0, 1}}, {r(1, 2), r(1, 2)});
  BranchPointSample s = empirical_bpd(edge, 20000, 31);
  CHECK(s.n == 20000);
  std::uint64_t total = 0;
  for (const auto& [p, c] : s.count) total += c;
  CHECK(total == 20000);
  // The branch point of three fair picks is the majority vertex.
  CHECK(double(s.count.at(vx(0))) / 20000 == doctest::Approx(0.5).epsilon(0.05));

  amt::SplitRng rng(1313);
  MeasureTree mt = oracle::random_atomic_measure_tree(rng, 7);
  BranchPointSample t = empirical_bpd(mt, 20000, 77);
  std::vector<Rat> nu = mt.branch_point_distribution();
  double worst = 0;
  for (int v = 0; v < mt.size(); ++v) {
    const std::uint64_t c = t.count.count(vx(v)) ? t.count.at(vx(v)) : 0;
    worst = std::max(worst, std::abs(double(c) / 20000 - amt::rat_to_double(nu[v])));
  }
  CHECK(worst < 0.02);

  BranchPointSample one = empirical_bpd(mt, 1, 5);
  CHECK(one.count.size() == 1);
  CHECK(one.count.begin()->second == 1);

  // Diffuse trees yield branch points inside arcs; the counts still add up.
  MeasureTree diffuse = make({{0, 1}}, {0, 0}, {r(1, 2), r(1, 2)});
  BranchPointSample d = empirical_bpd(diffuse, 5, 11);
  std::uint64_t dt = 0;
  for (const auto& [p, c] : d.count) {
    CHECK(p.kind == SamplePoint::Kind::arc);
    dt += c;
  }
  CHECK(dt == 5);

  CHECK_THROWS_AS(empirical_bpd(edge, 0, 1), ValidationError);
}

TEST_CASE("distance polynomials couple empirical and exact evaluations") {
  MatrixFunction constant{[](const std::vector<std::vector<double>>&) { return 1.0; }, 0.0};
  MatrixFunction first_pair{
      [](const std::vector<std::vector<double>>& m) { return m[0][1]; }, 1.0};
  MatrixFunction mean_abs{[](const std::vector<std::vector<double>>& m) {
                            double s = 0;
                            for (const auto& row : m)
                              for (double x : row) s += std::abs(x);
                            return s / double(m.size() * m.size());
                          },
                          1.0};

  MeasureTree edge = make({{0, 1}}, {r(1, 2), r(1, 2)});
  CHECK(amt::distance_polynomial_exact(edge, 3, constant) == 1.0);
  // Both picks distinct with probability 1/2, at r distance 1/2: mean 1/4.
  CHECK(amt::distance_polynomial_exact(edge, 2, first_pair) == 0.25);

  amt::SplitRng rng(8888);
  MeasureTree mt = oracle::random_atomic_measure_tree(rng, 8);
  const double exact = amt::distance_polynomial_exact(mt, 3, mean_abs);
  PolynomialEstimate est = amt::distance_polynomial_empirical(mt, 3, mean_abs, 2000, 40, 17);
  CHECK(est.trials.size() == 40);
  double coupled_mean = 0;
  for (const amt::PolynomialTrial& trial : est.trials) {
    CHECK(std::abs(trial.value - trial.coupled_value) <=
          3 * mean_abs.lipschitz * trial.sup_deviation + 1e-12);
    coupled_mean += trial.coupled_value;
  }
  coupled_mean /= 40;
  CHECK(std::abs(est.mean - exact) < 0.1);
  CHECK(std::abs(coupled_mean - exact) < 0.1);

  // More triples per replica mean a smaller gap to the exact distribution.
  auto mean_sup = [&](std::uint64_t n) {
    PolynomialEstimate e = amt::distance_polynomial_empirical(mt, 3, mean_abs, n, 30, 23);
    double s = 0;
    for (const amt::PolynomialTrial& trial : e.trials) s += trial.sup_deviation;
    return s / 30;
  };
  CHECK(mean_sup(100) > mean_sup(6400));

  PolynomialEstimate a = amt::distance_polynomial_empirical(mt, 3, mean_abs, 50, 20, 5, 1);
  PolynomialEstimate b = amt::distance_polynomial_empirical(mt, 3, mean_abs, 50, 20, 5, 3);
  REQUIRE(a.trials.size() == b.trials.size());
  for (std::size_t i = 0; i < a.trials.size(); ++i) {
    CHECK(a.trials[i].value == b.trials[i].value);
    CHECK(a.trials[i].coupled_value == b.trials[i].coupled_value);
    CHECK(a.trials[i].sup_deviation == b.trials[i].sup_deviation);
  }
  CHECK(a.mean == b.mean);

  MeasureTree diffuse = make({{0, 1}}, {0, 0}, {r(1, 2), r(1, 2)});
  CHECK_THROWS_AS(amt::distance_polynomial_exact(diffuse, 2, constant), ValidationError);
  CHECK_THROWS_AS(amt::distance_polynomial_exact(edge, 0, constant), ValidationError);
  CHECK_THROWS_AS(amt::distance_polynomial_exact(edge, 2, MatrixFunction{}), ValidationError);
  CHECK_THROWS_AS(amt::distance_polynomial_empirical(edge, 2, constant, 0, 5, 1),
                  ValidationError);
  CHECK_THROWS_AS(amt::distance_polynomial_empirical(edge, 2, constant, 3, 0, 1),
                  ValidationError);
  CHECK_THROWS_AS(amt::distance_polynomial_empirical(edge, 5, constant, 1, 5, 1),
                  ValidationError);  // only 3 points per replica, but m = 5
  std::vector<std::pair<int, int>> path;
  for (int v = 0; v + 1 < 13; ++v) path.emplace_back(v, v + 1);
  MeasureTree wide = make(path, std::vector<Rat>(13, r(1, 13)));
  CHECK_THROWS_AS(amt::distance_polynomial_exact(wide, 6, constant), ValidationError);
}

TEST_CASE("interval and component families shatter exactly up to their dimension") {
  // On a path, singletons and subpaths trace every pattern on two vertices.
  AlgebraicTree path3 = AlgebraicTree::from_edges({{0, 1}, {1, 2}}, 3);
  ShatterReport two = amt::vc_shatter_check(path3, SetFamily::intervals, 2);
  CHECK(two.shattered);
  CHECK(two.witness == std::vector<int>{0, 1});
  CHECK_FALSE(amt::vc_shatter_check(path3, SetFamily::intervals, 3).shattered);

  // Components around a three-legged spider shatter the three mid-leg
  // vertices; no tree pushes either family past its dimension.
  AlgebraicTree spider =
      AlgebraicTree::from_edges({{0, 1}, {1, 2}, {0, 3}, {3, 4}, {0, 5}, {5, 6}}, 7);
  ShatterReport three = amt::vc_shatter_check(spider, SetFamily::components, 3);
  CHECK(three.shattered);
  CHECK(three.witness == std::vector<int>{1, 3, 5});

  AlgebraicTree star = AlgebraicTree::from_edges({{0, 1}, {0, 2}, {0, 3}}, 4);
  CHECK(amt::vc_shatter_check(star, SetFamily::components, 2).shattered);

  amt::SplitRng rng(3030);
  for (int trial = 0; trial < 200; ++trial) {
    AlgebraicTree t = oracle::random_tree(rng, 2 + (int)rng.uniform_int(11));
    CHECK_FALSE(amt::vc_shatter_check(t, SetFamily::intervals, 3).shattered);
    CHECK_FALSE(amt::vc_shatter_check(t, SetFamily::components, 4).shattered);
  }

  CHECK_THROWS_AS(amt::vc_shatter_check(path3, SetFamily::intervals, 0), ValidationError);
  CHECK_THROWS_AS(amt::vc_shatter_check(amt::comb_tree(34).tree(), SetFamily::intervals, 2),
                  ValidationError);  // 66 vertices exceed the bitmask width
  CHECK_THROWS_AS(amt::vc_shatter_check(amt::comb_tree(33).tree(), SetFamily::intervals, 8),
                  ValidationError);  // 64 choose 8 subsets exceed the budget
}

TEST_CASE("uniform deviations respect the distribution-free bound") {
  // A purely diffuse edge: every vertex-pair interval has mass 0 or 1 and the
  // empirical counts match exactly, for both families.
  MeasureTree diffuse = make({{0, 1}}, {0, 0}, {r(1, 2), r(1, 2)});
  for (SetFamily family : {SetFamily::intervals, SetFamily::components}) {
    DeviationReport zero = amt::glivenko_cantelli_sup(diffuse, family, 37, 3, 13);
    for (double s : zero.sup) CHECK(s == 0.0);
  }
  DeviationReport dot = amt::glivenko_cantelli_sup(make({}, {1}), SetFamily::intervals, 1, 2, 1);
  for (double s : dot.sup) CHECK(s == 0.0);

  // A fifty-leaf binary tree: deviations shrink well under the bound.
  MeasureTree big = amt::beta_splitting_tree(50, 0.0, 909);
  DeviationReport rep = amt::glivenko_cantelli_sup(big, SetFamily::intervals, 10000, 3, 5);
  CHECK(rep.dimension == 2);
  CHECK(rep.bound == doctest::Approx(96.0 * std::sqrt(2.0 / 10000)));
  CHECK(rep.mean_sup() <= 0.05);
  for (double s : rep.sup) CHECK(s <= rep.bound);

  // Trees with diffuse leaf mass exercise the arc bookkeeping.
  amt::SplitRng rng(6161);
  MeasureTree leafy = oracle::random_leaf_measure_tree(rng, 40, true);
  for (SetFamily family : {SetFamily::intervals, SetFamily::components}) {
    DeviationReport d = amt::glivenko_cantelli_sup(leafy, family, 2000, 4, 21);
    CHECK(d.mean_sup() <= 0.2);
    for (double s : d.sup) CHECK(s <= d.bound);
  }

  // The mean supremum decays like n^(-1/2).
  auto level = [&](std::uint64_t n) {
    return amt::glivenko_cantelli_sup(leafy, SetFamily::components, n, 6, 33).mean_sup();
  };
  const double slope = std::log(level(100) / level(25600)) / std::log(256.0);
  CHECK(slope > 0.3);
  CHECK(slope < 0.7);

  DeviationReport p1 = amt::glivenko_cantelli_sup(leafy, SetFamily::components, 500, 6, 3, 1);
  DeviationReport p3 = amt::glivenko_cantelli_sup(leafy, SetFamily::components, 500, 6, 3, 3);
  CHECK(p1.sup == p3.sup);

  CHECK_THROWS_AS(amt::glivenko_cantelli_sup(diffuse, SetFamily::intervals, 0, 1, 1),
                  ValidationError);
  CHECK_THROWS_AS(amt::glivenko_cantelli_sup(diffuse, SetFamily::intervals, 10, 0, 1),
                  ValidationError);
}

TEST_CASE("transport distance measures tensor-law discrepancies exactly") {
  MeasureTree star = make({{0, 1}, {0, 2}, {0, 3}}, {0, r(1, 3), r(1, 3), r(1, 3)});
  TensorDistribution exact = massdist_exact(star, 3);
  TransportReport self = amt::wasserstein_linf(exact, exact);
  CHECK(self.method == "transport");
  CHECK(self.distance == 0.0);

  // Moving half the mass a quarter of the way costs exactly one eighth.
  TensorDistribution a, b;
  a.m = b.m = 3;
  a.weight[key3(r(1, 4), r(1, 4), r(1, 2))] = 1;
  b.weight[key3(r(1, 4), r(1, 4), r(1, 2))] = r(1, 2);
  b.weight[key3(0, r(1, 4), r(1, 2))] = r(1, 2);
  TransportReport shift = amt::wasserstein_linf(a, b);
  CHECK(shift.method == "transport");
  CHECK(shift.distance == 0.125);

  // The sampled law approaches the exact one as the sample grows.
  const double far =
      amt::wasserstein_linf(exact, massdist_sampled(star, 3, 200, 3)).distance;
  const double near =
      amt::wasserstein_linf(exact, massdist_sampled(star, 3, 20000, 3)).distance;
  CHECK(near < far);
  CHECK(near < 0.01);

  // Tensors with m < 3 are all empty, at distance zero.
  CHECK(amt::wasserstein_linf(massdist_exact(star, 2), massdist_sampled(star, 2, 50, 7))
            .distance == 0.0);

  // Large supports fall back to the sup-norm projection, a lower bound.
  TensorDistribution wide_a, wide_b;
  wide_a.m = wide_b.m = 3;
  for (int i = 0; i <= 250; ++i) {
    wide_a.weight[key3(Rat(i, 300), 0, 0)] = Rat(1, 251);
    wide_b.weight[key3(Rat(i + 1, 300), 0, 0)] = Rat(1, 251);
  }
  TransportReport proj = amt::wasserstein_linf(wide_a, wide_b);
  CHECK(proj.method == "projection");
  CHECK(proj.distance == doctest::Approx(1.0 / 300).epsilon(1e-9));

  TensorDistribution five;
  five.m = 5;
  five.weight[{}] = 1;
  CHECK_THROWS_AS(amt::wasserstein_linf(exact, five), ValidationError);
  TensorDistribution empty;
  empty.m = 3;
  CHECK_THROWS_AS(amt::wasserstein_linf(exact, empty), ValidationError);
  TensorDistribution half;
  half.m = 3;
  half.weight[key3(1, 1, 1)] = r(1, 2);
  CHECK_THROWS_AS(amt::wasserstein_linf(exact, half), ValidationError);
}
