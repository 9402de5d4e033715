#include "amt/random_trees.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "amt/cladogram.hpp"
#include "doctest.h"
#include "oracles.hpp"

using amt::AlgebraicTree;
using amt::beta_splitting_tree;
using amt::comb_tree;
using amt::ConsistencyReport;
using amt::MeasureTree;
using amt::Rat;
using amt::remove_random_leaf;
using amt::sampling_consistency_test;
using amt::split_law;
using amt::SplitLaw;
using amt::symmetric_binary;
using amt::ValidationError;

namespace {

const double kInf = std::numeric_limits<double>::infinity();

MeasureTree make(std::vector<std::pair<int, int>> edges, std::vector<Rat> atoms,
                 std::vector<Rat> arcs = {}) {
  int n = static_cast<int>(atoms.size());
  if (arcs.empty()) arcs.assign(n, Rat(0));
  return MeasureTree(AlgebraicTree::from_edges(edges, n), std::move(atoms), std::move(arcs));
}

Rat r(int p, int q) { return Rat(p) / q; }

// Uniform leaf atoms on an explicit tree, as the generators produce.
MeasureTree uniform_leaves(std::vector<std::pair<int, int>> edges, int n) {
  AlgebraicTree t = AlgebraicTree::from_edges(edges, n);
  std::vector<Rat> atoms(n, Rat(0)), arcs(n, Rat(0));
  std::vector<int> ls = t.leaves();
  for (int l : ls) atoms[l] = Rat(1) / static_cast<int>(ls.size());
  return MeasureTree(std::move(t), std::move(atoms), std::move(arcs));
}

}  // namespace

TEST_CASE("split laws are symmetric and normalized") {
  for (int n : {2, 3, 4, 5, 10, 33}) {
    for (double beta : {-2.0, -1.9, -1.5, -0.5, 0.0, 2.7, 14.0, kInf}) {
      SplitLaw law = split_law(n, beta);
      REQUIRE(int(law.q.size()) == n);
      CHECK(law.q[0] == 0.0);
      double total = 0;
      for (int i = 1; i < n; ++i) {
        CHECK(law.q[i] >= 0.0);
        CHECK(law.q[i] == law.q[n - i]);  // exact mirror symmetry
        total += law.q[i];
      }
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }

  // beta = 0 makes every split size equally likely.
  for (int n : {2, 3, 7, 24}) {
    SplitLaw law = split_law(n, 0.0);
    for (int i = 1; i < n; ++i)
      CHECK(law.q[i] == doctest::Approx(1.0 / (n - 1)).epsilon(1e-12));
  }

  // Pinned small laws.
  CHECK(split_law(2, 0.7).q[1] == 1.0);
  CHECK(split_law(3, -1.5).q[1] == 0.5);
  CHECK(split_law(3, -1.5).q[2] == 0.5);
  CHECK(split_law(4, kInf).q[2] == 1.0);
  CHECK(split_law(5, kInf).q[2] == 0.5);
  CHECK(split_law(5, kInf).q[3] == 0.5);
  CHECK(split_law(5, -2.0).q[1] == 0.5);
  CHECK(split_law(5, -2.0).q[4] == 0.5);
  CHECK(split_law(5, -2.0).q[2] == 0.0);
  CHECK(split_law(2, -2.0).q[1] == 1.0);
  CHECK(split_law(2, kInf).q[1] == 1.0);

  CHECK_THROWS_AS(split_law(1, 0.0), ValidationError);
  CHECK_THROWS_AS(split_law(5, -2.5), ValidationError);
  CHECK_THROWS_AS(split_law(5, std::nan("")), ValidationError);
  CHECK_THROWS_AS(split_law(5, -kInf), ValidationError);
}

TEST_CASE("beta-splitting trees are binary with uniform leaf atoms") {
  int combo = 0;
  for (double beta : {-2.0, -1.9, -1.5, 0.0, 3.0, kInf}) {
    for (int n : {1, 2, 3, 7, 20}) {
      const std::uint64_t seed = 977 * ++combo;
      MeasureTree mt = beta_splitting_tree(n, beta, seed);
      CHECK(mt.size() == (n == 1 ? 1 : 2 * n - 2));
      CHECK_FALSE(mt.has_arc_mass());
      int leaf_count = 0, branch_count = 0;
      for (int v = 0; v < mt.size(); ++v) {
        const int d = mt.tree().degree(v);
        if (d <= 1) {
          ++leaf_count;
          CHECK(mt.atom(v) == Rat(1) / n);
        } else {
          CHECK(d == 3);
          ++branch_count;
          CHECK(mt.atom(v) == 0);
        }
      }
      CHECK(leaf_count == n);
      CHECK(branch_count == std::max(n - 2, 0));

      // Deterministic in the seed, down to the labelling.
      MeasureTree again = beta_splitting_tree(n, beta, seed);
      CHECK(mt.tree().edges() == again.tree().edges());
    }
  }

  // The two smallest trees are unique shapes.
  MeasureTree two = beta_splitting_tree(2, 0.4, 9);
  CHECK(two.size() == 2);
  CHECK(two.atom(0) == r(1, 2));
  CHECK(two.atom(1) == r(1, 2));
  MeasureTree star = uniform_leaves({{3, 0}, {3, 1}, {3, 2}}, 4);
  for (std::uint64_t seed : {1u, 2u, 3u})
    CHECK(beta_splitting_tree(3, -1.0, seed).canonical_form() == star.canonical_form());

  // The limit parameters reproduce the named benchmark families.
  for (int k : {1, 2, 3, 4})
    CHECK(beta_splitting_tree(1 << k, kInf, 5 * k + 1).canonical_form() ==
          symmetric_binary(k).canonical_form());
  for (int n = 2; n <= 8; ++n)
    for (std::uint64_t seed : {4u, 5u})
      CHECK(beta_splitting_tree(n, -2.0, seed).canonical_form() ==
            comb_tree(n).canonical_form());

  CHECK_THROWS_AS(beta_splitting_tree(0, 0.0, 1), ValidationError);
  CHECK_THROWS_AS(beta_splitting_tree(5, -2.1, 1), ValidationError);
  CHECK_THROWS_AS(beta_splitting_tree(5, std::nan(""), 1), ValidationError);
}

TEST_CASE("comb and symmetric benchmark trees") {
  MeasureTree one = comb_tree(1);
  CHECK(one.size() == 1);
  CHECK(one.atom(0) == 1);

  MeasureTree two = comb_tree(2);
  CHECK(two.size() == 2);
  CHECK(two.atom(0) == r(1, 2));

  CHECK(comb_tree(3).canonical_form() ==
        uniform_leaves({{3, 0}, {3, 1}, {3, 2}}, 4).canonical_form());
  CHECK(comb_tree(5).canonical_form() ==
        uniform_leaves({{5, 0}, {5, 1}, {6, 5}, {6, 2}, {7, 6}, {7, 3}, {7, 4}}, 8)
            .canonical_form());
  // A comb's spine is a path: exactly two branch points see two leaves.
  MeasureTree comb = comb_tree(6);
  int cherry_vertices = 0;
  for (int v = 0; v < comb.size(); ++v) {
    if (comb.tree().degree(v) != 3) continue;
    int leaf_neighbours = 0;
    for (int u : comb.tree().neighbors(v))
      if (comb.tree().degree(u) == 1) ++leaf_neighbours;
    cherry_vertices += leaf_neighbours == 2;
  }
  CHECK(cherry_vertices == 2);

  CHECK(symmetric_binary(0).size() == 1);
  CHECK(symmetric_binary(1).size() == 2);
  CHECK(symmetric_binary(2).canonical_form() ==
        uniform_leaves({{4, 0}, {4, 1}, {5, 2}, {5, 3}, {4, 5}}, 6).canonical_form());
  CHECK(symmetric_binary(3).canonical_form() ==
        uniform_leaves({{8, 0},  {8, 1},  {9, 2},  {9, 3},  {12, 8}, {12, 9}, {10, 4},
                        {10, 5}, {11, 6}, {11, 7}, {13, 10}, {13, 11}, {12, 13}},
                       14)
            .canonical_form());

  CHECK_THROWS_AS(comb_tree(0), ValidationError);
  CHECK_THROWS_AS(symmetric_binary(-1), ValidationError);
}

TEST_CASE("removing a random leaf keeps the family uniform") {
  // Two leaves collapse to the one-point tree.
  MeasureTree edge = make({{0, 1}}, {r(1, 2), r(1, 2)});
  MeasureTree collapsed = remove_random_leaf(edge, 3);
  CHECK(collapsed.size() == 1);
  CHECK(collapsed.atom(0) == 1);

  // A three-leaf star loses a leaf and the centre with it.
  MeasureTree star = uniform_leaves({{3, 0}, {3, 1}, {3, 2}}, 4);
  for (std::uint64_t seed : {0u, 1u, 2u}) {
    MeasureTree rest = remove_random_leaf(star, seed);
    CHECK(rest.size() == 2);
    CHECK(rest.atom(0) == r(1, 2));
    CHECK(rest.atom(1) == r(1, 2));
  }

  // Combs shrink to combs no matter which leaf goes.
  for (int n = 3; n <= 8; ++n)
    for (std::uint64_t seed : {11u, 12u, 13u})
      CHECK(remove_random_leaf(comb_tree(n), seed).canonical_form() ==
            comb_tree(n - 1).canonical_form());

  // Removal preserves the uniform-leaf-atom binary family.
  for (double beta : {-1.5, 0.0, 5.0}) {
    for (int n = 4; n <= 12; ++n) {
      MeasureTree big = beta_splitting_tree(n, beta, 17 * n + int(beta * 2) + 60);
      MeasureTree rest = remove_random_leaf(big, 29 * n);
      CHECK(rest.size() == 2 * (n - 1) - 2);
      CHECK_FALSE(rest.has_arc_mass());
      int leaf_count = 0;
      for (int v = 0; v < rest.size(); ++v) {
        const int d = rest.tree().degree(v);
        CHECK((d == 1 || d == 3));
        if (d == 1) {
          ++leaf_count;
          CHECK(rest.atom(v) == Rat(1) / (n - 1));
        }
      }
      CHECK(leaf_count == n - 1);

      MeasureTree again = remove_random_leaf(big, 29 * n);
      CHECK(rest.tree().edges() == again.tree().edges());
    }
  }

  MeasureTree lonely = make({}, {Rat(1)});
  CHECK_THROWS_AS(remove_random_leaf(lonely, 1), ValidationError);
  MeasureTree skewed = make({{0, 1}}, {r(1, 4), r(3, 4)});
  CHECK_THROWS_AS(remove_random_leaf(skewed, 1), ValidationError);
  MeasureTree diffuse = make({{0, 1}}, {r(1, 4), r(1, 4)}, {r(1, 4), r(1, 4)});
  CHECK_THROWS_AS(remove_random_leaf(diffuse, 1), ValidationError);
  MeasureTree path = make({{0, 1}, {1, 2}}, {r(1, 2), Rat(0), r(1, 2)});
  CHECK_THROWS_AS(remove_random_leaf(path, 1), ValidationError);
}

TEST_CASE("a removed leaf cannot be told apart from a fresh smaller tree") {
  ConsistencyReport a = sampling_consistency_test(0.0, 10, 4, 10000, 11);
  CHECK(a.replicas == 10000);
  CHECK(a.degrees >= 1);
  CHECK(a.p_value > 0.01);
  CHECK(sampling_consistency_test(0.0, 10, 4, 10000, 12).p_value > 0.01);
  CHECK(sampling_consistency_test(-1.5, 8, 4, 5000, 21).p_value > 0.01);
  CHECK(sampling_consistency_test(kInf, 8, 4, 5000, 31).p_value > 0.01);

  // Four (even five) exchangeable samples cannot tell binary six-leaf trees
  // apart - the labelled shapes form a single relabelling orbit - so the
  // smallest discriminating sample size for n = 7 is m = 6, where the
  // caterpillar and ternary orbits split. A finite beta passes there too:
  CHECK(sampling_consistency_test(0.0, 7, 6, 20000, 51).p_value > 0.01);
  // ... but the balanced limit is the exception: removing a leaf from the
  // deterministic seven-leaf tree yields the ternary shape with probability
  // 3/7, which a fresh six-leaf tree never shows.
  ConsistencyReport odd = sampling_consistency_test(kInf, 7, 6, 50000, 41);
  CHECK(odd.p_value < 1e-3);

  // Replica substreams: the report is a pure function of (inputs, seed),
  // whatever the thread count.
  ConsistencyReport b1 = sampling_consistency_test(0.0, 6, 3, 2000, 7, 1);
  ConsistencyReport b3 = sampling_consistency_test(0.0, 6, 3, 2000, 7, 3);
  CHECK(b1.statistic == b3.statistic);
  CHECK(b1.table == b3.table);
  std::uint64_t drawn = 0;
  for (const auto& [key, counts] : b1.table) drawn += counts.first;
  CHECK(drawn == 2000);

  // With two leaves both sides are the one-point tree: nothing to compare.
  ConsistencyReport tiny = sampling_consistency_test(0.0, 2, 2, 100, 5);
  CHECK(tiny.degrees == 0);
  CHECK(tiny.p_value == 1.0);

  CHECK_THROWS_AS(sampling_consistency_test(0.0, 10, 4, 0, 1), ValidationError);
  CHECK_THROWS_AS(sampling_consistency_test(0.0, 1, 4, 10, 1), ValidationError);
  CHECK_THROWS_AS(sampling_consistency_test(0.0, 10, 0, 10, 1), ValidationError);
  CHECK_THROWS_AS(sampling_consistency_test(-3.0, 10, 4, 10, 1), ValidationError);
}
