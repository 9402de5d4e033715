#include "amt/random_trees.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "amt/cladogram.hpp"

namespace amt {

namespace {

double log_choose(int n, int i) {
  return std::lgamma(n + 1) - std::lgamma(i + 1) - std::lgamma(n - i + 1);
}

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

void check_beta(double beta) {
  if (std::isnan(beta) || beta < -2)
    throw ValidationError("beta must lie in [-2, infinity]");
}

/** Uniform leaf atoms 1/n over the given edge list. */
MeasureTree uniform_leaf_tree(const std::vector<std::pair<int, int>>& edges, int n_vertices) {
  AlgebraicTree t = AlgebraicTree::from_edges(edges, n_vertices);
  std::vector<Rat> atoms(n_vertices, Rat(0)), arcs(n_vertices, Rat(0));
  std::vector<int> ls = t.leaves();
  for (int l : ls) atoms[l] = Rat(1) / static_cast<int>(ls.size());
  return MeasureTree(std::move(t), std::move(atoms), std::move(arcs));
}

int draw_split(int k, double beta, SplitRng& rng) {
  if (beta == -2.0) return rng.uniform_int(2) == 0 ? 1 : k - 1;
  if (std::isinf(beta)) return rng.uniform_int(2) == 0 ? k / 2 : (k + 1) / 2;
  return static_cast<int>(rng.discrete(split_law(k, beta).q));
}

/**
 * Grows the subtree for k leaves from the given substream seed and returns
 * its handle: the vertex the parent attaches to (for k >= 2 this is the
 * midpoint of the subtree's root edge, created eagerly; for k = 1 the leaf
 * itself). Iterative so that comb-like parameter choices cannot exhaust the
 * call stack.
 */
int grow(int k0, double beta, std::uint64_t seed0, int& next,
         std::vector<std::pair<int, int>>& edges) {
  struct Frame {
    int k;
    std::uint64_t seed;
    int stage;  // 0: split, 1: first side done, 2: both done
    int i = 0, a = -1;
  };
  std::vector<Frame> st{{k0, seed0, 0, 0, -1}};
  int ret = -1;
  while (!st.empty()) {
    Frame& f = st.back();
    if (f.k == 1) {
      ret = next++;
      st.pop_back();
      continue;
    }
    switch (f.stage) {
      case 0: {
        SplitRng rng(f.seed);
        f.i = draw_split(f.k, beta, rng);
        f.stage = 1;
        st.push_back({f.i, SplitRng(f.seed).split(1).seed(), 0, 0, -1});
        break;
      }
      case 1: {
        f.a = ret;
        f.stage = 2;
        st.push_back({f.k - f.i, SplitRng(f.seed).split(2).seed(), 0, 0, -1});
        break;
      }
      default: {
        int v = next++;
        edges.emplace_back(v, f.a);
        edges.emplace_back(v, ret);
        ret = v;
        st.pop_back();
        break;
      }
    }
  }
  return ret;
}

}  // namespace

SplitLaw split_law(int n, double beta) {
  if (n < 2) throw ValidationError("split_law needs n >= 2");
  check_beta(beta);
  SplitLaw law{n, beta, std::vector<double>(n, 0.0)};
  if (beta == -2.0) {  // comb limit
    law.q[1] += 0.5;
    law.q[n - 1] += 0.5;
  } else if (std::isinf(beta)) {  // symmetric limit
    law.q[n / 2] += 0.5;
    law.q[(n + 1) / 2] += 0.5;
  } else {
    // One half in log space; the mirror image is copied, not recomputed, so
    // the symmetry q(i) = q(n-i) is exact.
    std::vector<double> w(n / 2 + 1, 0.0);
    double mx = -std::numeric_limits<double>::infinity();
    for (int i = 1; i <= n / 2; ++i) {
      w[i] = log_choose(n, i) + log_beta(i + beta + 1, n - i + beta + 1);
      mx = std::max(mx, w[i]);
    }
    double total = 0;
    for (int i = 1; i <= n / 2; ++i) {
      w[i] = std::exp(w[i] - mx);
      total += (2 * i == n ? 1 : 2) * w[i];
    }
    for (int i = 1; i <= n / 2; ++i) {
      law.q[i] = w[i] / total;
      law.q[n - i] = law.q[i];
    }
  }
  return law;
}

MeasureTree beta_splitting_tree(int n, double beta, std::uint64_t seed) {
  if (n < 1) throw ValidationError("beta_splitting_tree needs n >= 1");
  check_beta(beta);
  if (n == 1)
    return MeasureTree(AlgebraicTree::from_edges({}, 1), {Rat(1)}, {Rat(0)});
  std::vector<std::pair<int, int>> edges;
  int next = 0;
  SplitRng rng(seed);
  const int i = draw_split(n, beta, rng);
  const int a = grow(i, beta, rng.split(1).seed(), next, edges);
  const int b = grow(n - i, beta, rng.split(2).seed(), next, edges);
  edges.emplace_back(a, b);  // the distinguished root edge
  return uniform_leaf_tree(edges, next);
}

MeasureTree comb_tree(int n) {
  if (n < 1) throw ValidationError("comb_tree needs n >= 1");
  if (n == 1) return MeasureTree(AlgebraicTree::from_edges({}, 1), {Rat(1)}, {Rat(0)});
  // Leaves 0..n-1, spine n..2n-3; each spine vertex picks up one leaf, the
  // two spine ends pick up the extra end leaves.
  std::vector<std::pair<int, int>> edges;
  int prev = 0;
  for (int j = 1; j <= n - 2; ++j) {
    int w = n - 1 + j;
    edges.emplace_back(w, prev);
    edges.emplace_back(w, j);
    prev = w;
  }
  edges.emplace_back(prev, n - 1);
  return uniform_leaf_tree(edges, 2 * n - 2);
}

MeasureTree symmetric_binary(int k) {
  if (k < 0) throw ValidationError("symmetric_binary needs k >= 0");
  if (k == 0) return MeasureTree(AlgebraicTree::from_edges({}, 1), {Rat(1)}, {Rat(0)});
  // Two complete depth-(k-1) subtrees joined by the root edge.
  std::vector<std::pair<int, int>> edges;
  int next = 0;
  auto build = [&](auto&& self, int depth) -> int {
    int v = next++;
    if (depth == 0) return v;
    edges.emplace_back(v, self(self, depth - 1));
    edges.emplace_back(v, self(self, depth - 1));
    return v;
  };
  int a = build(build, k - 1), b = build(build, k - 1);
  edges.emplace_back(a, b);
  return uniform_leaf_tree(edges, next);
}

MeasureTree remove_random_leaf(const MeasureTree& mt, std::uint64_t seed) {
  const AlgebraicTree& t = mt.tree();
  const std::vector<int> ls = t.leaves();
  const int n = static_cast<int>(ls.size());
  if (n < 2) throw ValidationError("remove_random_leaf needs at least two leaves");
  if (mt.has_arc_mass())
    throw ValidationError("remove_random_leaf expects purely atomic leaf mass");
  for (int v = 0; v < t.size(); ++v) {
    const int d = t.degree(v);
    if (d == 1) {
      if (mt.atom(v) * n != 1)
        throw ValidationError("remove_random_leaf expects uniform leaf atoms");
    } else if (d == 3) {
      if (mt.atom(v) != 0)
        throw ValidationError("remove_random_leaf expects mass only on leaves");
    } else {
      throw ValidationError("remove_random_leaf expects every vertex of degree one or three");
    }
  }

  SplitRng rng(seed);
  const int leaf = ls[rng.uniform_int(n)];
  if (n == 2)
    return MeasureTree(AlgebraicTree::from_edges({}, 1), {Rat(1)}, {Rat(0)});

  const int bp = t.neighbors(leaf).front();
  std::vector<int> id(t.size(), -1);
  int next = 0;
  for (int v = 0; v < t.size(); ++v)
    if (v != leaf && v != bp) id[v] = next++;
  std::vector<std::pair<int, int>> edges;
  for (const auto& [x, y] : t.edges())
    if (x != leaf && x != bp && y != leaf && y != bp)
      edges.emplace_back(id[x], id[y]);
  std::vector<int> rest;
  for (int u : t.neighbors(bp))
    if (u != leaf) rest.push_back(u);
  edges.emplace_back(id[rest[0]], id[rest[1]]);
  return uniform_leaf_tree(edges, next);
}

ConsistencyReport sampling_consistency_test(double beta, int n, int m,
                                            std::uint64_t N, std::uint64_t seed,
                                            int threads) {
  if (n < 2) throw ValidationError("sampling consistency needs n >= 2");
  if (m < 1) throw ValidationError("sampling consistency needs m >= 1");
  if (N == 0) throw ValidationError("sampling consistency needs at least one replica");
  check_beta(beta);

  using Table = std::map<std::string, std::pair<std::uint64_t, std::uint64_t>>;
  const SplitRng base(seed);
  auto run = [&](std::uint64_t lo, std::uint64_t hi) {
    Table part;
    for (std::uint64_t r = lo; r < hi; ++r) {
      const SplitRng sub = base.split(r);
      MeasureTree big = beta_splitting_tree(n, beta, sub.split(0).seed());
      MeasureTree removed = remove_random_leaf(big, sub.split(1).seed());
      SplitRng draw_removed = sub.split(2);
      ++part[shape(removed, removed.draw_points(m, draw_removed)).canonical_key()].first;
      MeasureTree fresh = beta_splitting_tree(n - 1, beta, sub.split(3).seed());
      SplitRng draw_fresh = sub.split(4);
      ++part[shape(fresh, fresh.draw_points(m, draw_fresh)).canonical_key()].second;
    }
    return part;
  };

  ConsistencyReport report;
  report.replicas = N;
  const std::uint64_t workers = std::min<std::uint64_t>(threads < 1 ? 1 : threads, N);
  if (workers <= 1) {
    report.table = run(0, N);
  } else {
    std::vector<std::future<Table>> jobs;
    for (std::uint64_t w = 0; w < workers; ++w)
      jobs.push_back(std::async(std::launch::async, run, N * w / workers,
                                N * (w + 1) / workers));
    for (auto& job : jobs) {
      for (const auto& [key, counts] : job.get()) {
        report.table[key].first += counts.first;
        report.table[key].second += counts.second;
      }
    }
  }

  // Pool cells with fewer than ten pooled observations, then the two-sample
  // statistic sum (a-b)^2 / (a+b) over cells (row totals are equal).
  std::vector<std::pair<std::uint64_t, std::uint64_t>> cells;
  std::uint64_t small_a = 0, small_b = 0;
  for (const auto& [key, counts] : report.table) {
    if (counts.first + counts.second >= 10) {
      cells.push_back(counts);
    } else {
      small_a += counts.first;
      small_b += counts.second;
    }
  }
  if (small_a + small_b >= 10 || cells.empty()) {
    if (small_a + small_b > 0) cells.emplace_back(small_a, small_b);
  } else {
    cells.back().first += small_a;
    cells.back().second += small_b;
  }
  report.degrees = static_cast<int>(cells.size()) - 1;
  if (report.degrees < 1) {
    report.statistic = 0;
    report.p_value = 1;
    return report;
  }
  for (const auto& [a, b] : cells) {
    const double d = double(a) - double(b);
    report.statistic += d * d / double(a + b);
  }
  boost::math::chi_squared law(report.degrees);
  report.p_value = boost::math::cdf(boost::math::complement(law, report.statistic));
  return report;
}

}  // namespace amt
