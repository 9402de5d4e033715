#include "amt/tree.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <numeric>
#include <set>

#include "amt/rational.hpp"

namespace amt {

namespace {

int floor_log2(int x) {
  int r = 0;
  while ((1 << (r + 1)) <= x) ++r;
  return r;
}

}  // namespace

AlgebraicTree AlgebraicTree::from_edges(const std::vector<std::pair<int, int>>& edge_list,
                                        std::optional<int> vertex_count) {
  int n = vertex_count.value_or(0);
  for (const auto& [a, b] : edge_list) {
    if (a < 0 || b < 0) throw ValidationError("negative vertex id");
    n = std::max(n, std::max(a, b) + 1);
  }
  if (n == 0) n = 1;  // smallest tree: a single vertex
  if (static_cast<int>(edge_list.size()) != n - 1)
    throw ValidationError("a tree on " + std::to_string(n) + " vertices needs " +
                          std::to_string(n - 1) + " edges, got " +
                          std::to_string(edge_list.size()));

  AlgebraicTree t;
  t.n_ = n;
  t.adj_.assign(n, {});
  std::set<std::pair<int, int>> seen;
  for (const auto& [a, b] : edge_list) {
    if (a == b) throw ValidationError("self-loop at vertex " + std::to_string(a));
    auto key = std::minmax(a, b);
    if (!seen.insert(key).second)
      throw ValidationError("duplicate edge " + std::to_string(a) + "-" + std::to_string(b));
    t.adj_[a].push_back(b);
    t.adj_[b].push_back(a);
  }
  t.build_tables();
  return t;
}

void AlgebraicTree::build_tables() {
  parent_.assign(n_, -1);
  depth_.assign(n_, 0);
  tin_.assign(n_, -1);
  tout_.assign(n_, -1);
  order_.clear();
  order_.reserve(n_);
  euler_.clear();
  first_.assign(n_, -1);

  // Iterative DFS from vertex 0: preorder intervals plus Euler depth tour.
  std::vector<std::pair<int, std::size_t>> stack;  // (vertex, next neighbor index)
  stack.emplace_back(0, 0);
  tin_[0] = 0;
  order_.push_back(0);
  first_[0] = 0;
  euler_.push_back(0);
  while (!stack.empty()) {
    auto& [v, idx] = stack.back();
    if (idx < adj_[v].size()) {
      int u = adj_[v][idx++];
      if (u == parent_[v]) continue;
      if (tin_[u] != -1) throw ValidationError("cycle detected through vertex " + std::to_string(u));
      parent_[u] = v;
      depth_[u] = depth_[v] + 1;
      tin_[u] = static_cast<int>(order_.size());
      order_.push_back(u);
      first_[u] = static_cast<int>(euler_.size());
      euler_.push_back(u);
      stack.emplace_back(u, 0);
    } else {
      tout_[v] = static_cast<int>(order_.size());
      stack.pop_back();
      if (!stack.empty()) euler_.push_back(stack.back().first);
    }
  }
  if (static_cast<int>(order_.size()) != n_) throw ValidationError("disconnected input");

  // Sparse table of minimum-depth vertices over Euler tour ranges.
  const int m = static_cast<int>(euler_.size());
  const int levels = floor_log2(std::max(m, 1)) + 1;
  sparse_.assign(levels, std::vector<int>(m));
  sparse_[0] = euler_;
  for (int l = 1; l < levels; ++l) {
    for (int i = 0; i + (1 << l) <= m; ++i) {
      int a = sparse_[l - 1][i];
      int b = sparse_[l - 1][i + (1 << (l - 1))];
      sparse_[l][i] = depth_[a] <= depth_[b] ? a : b;
    }
  }

  const int jumps = floor_log2(std::max(n_, 1)) + 1;
  up_.assign(jumps, std::vector<int>(n_));
  for (int v = 0; v < n_; ++v) up_[0][v] = parent_[v] < 0 ? v : parent_[v];
  for (int l = 1; l < jumps; ++l)
    for (int v = 0; v < n_; ++v) up_[l][v] = up_[l - 1][up_[l - 1][v]];
}

void AlgebraicTree::check_vertex(int v) const {
  if (v < 0 || v >= n_) throw ValidationError("unknown vertex id " + std::to_string(v));
}

int AlgebraicTree::lca(int x, int y) const {
  check_vertex(x);
  check_vertex(y);
  int a = first_[x], b = first_[y];
  if (a > b) std::swap(a, b);
  const int l = floor_log2(b - a + 1);
  int u = sparse_[l][a];
  int v = sparse_[l][b - (1 << l) + 1];
  return depth_[u] <= depth_[v] ? u : v;
}

int AlgebraicTree::path_length(int x, int y) const {
  return depth_[x] + depth_[y] - 2 * depth_[lca(x, y)];
}

int AlgebraicTree::branch_point(int x, int y, int z) const {
  // The median is the deepest of the three pairwise ancestors.
  int a = lca(x, y), b = lca(y, z), c = lca(x, z);
  if (depth_[a] < depth_[b]) a = b;
  if (depth_[a] < depth_[c]) a = c;
  return a;
}

bool AlgebraicTree::on_path(int v, int x, int y) const {
  check_vertex(v);
  return path_length(x, v) + path_length(v, y) == path_length(x, y);
}

std::vector<int> AlgebraicTree::interval(int x, int y) const {
  const int mid = lca(x, y);
  std::vector<int> up_part, down_part;
  for (int v = x; v != mid; v = parent_[v]) up_part.push_back(v);
  up_part.push_back(mid);
  for (int v = y; v != mid; v = parent_[v]) down_part.push_back(v);
  up_part.insert(up_part.end(), down_part.rbegin(), down_part.rend());
  return up_part;
}

int AlgebraicTree::neighbor_toward(int x, int y) const {
  check_vertex(x);
  check_vertex(y);
  if (x == y) throw ValidationError("neighbor_toward needs distinct vertices");
  if (!in_subtree(x, y)) return parent_[x];
  // Descend y to depth(x) + 1 with binary lifting.
  int v = y;
  int delta = depth_[y] - depth_[x] - 1;
  for (int l = 0; delta > 0; ++l, delta >>= 1)
    if (delta & 1) v = up_[l][v];
  return v;
}

std::vector<int> AlgebraicTree::component(int x, int y) const {
  check_vertex(x);
  check_vertex(y);
  if (x == y) return {x};
  const int toward = neighbor_toward(x, y);
  std::vector<int> out;
  if (toward == parent_[x]) {
    out.reserve(n_ - (tout_[x] - tin_[x]));
    for (int i = 0; i < tin_[x]; ++i) out.push_back(order_[i]);
    for (int i = tout_[x]; i < n_; ++i) out.push_back(order_[i]);
  } else {
    out.reserve(tout_[toward] - tin_[toward]);
    for (int i = tin_[toward]; i < tout_[toward]; ++i) out.push_back(order_[i]);
  }
  return out;
}

int AlgebraicTree::degree(int v) const {
  check_vertex(v);
  return static_cast<int>(adj_[v].size());
}

std::vector<int> AlgebraicTree::leaves() const {
  std::vector<int> out;
  for (int v = 0; v < n_; ++v)
    if (degree(v) <= 1) out.push_back(v);
  return out;
}

std::vector<int> AlgebraicTree::branch_points() const {
  std::vector<int> out;
  for (int v = 0; v < n_; ++v)
    if (degree(v) >= 3) out.push_back(v);
  return out;
}

std::vector<std::pair<int, int>> AlgebraicTree::edges() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(n_ - 1);
  for (int v = 1; v < n_; ++v) out.emplace_back(std::min(parent_[v], v), std::max(parent_[v], v));
  std::sort(out.begin(), out.end());
  return out;
}

int AlgebraicTree::branch_point_from_order(int rho, int x, int y, int z) const {
  const std::array<int, 3> meets = {meet(rho, x, y), meet(rho, y, z), meet(rho, z, x)};
  int best = meets[0];
  for (int m : meets)
    if (is_le(rho, best, m)) best = m;
  return best;
}

namespace {

/** Applies the four axiom checks to one ordered tuple; shared by both modes. */
void check_tuple(const AlgebraicTree& t, int x, int y, int z, int w, AxiomReport& report) {
  const int c = t.branch_point(x, y, z);
  const std::array<std::array<int, 3>, 5> perms = {
      {{x, z, y}, {y, x, z}, {y, z, x}, {z, x, y}, {z, y, x}}};
  for (const auto& p : perms) {
    if (t.branch_point(p[0], p[1], p[2]) != c) {
      report.violations.push_back({"symmetry", {x, y, z}});
      break;
    }
  }
  if (t.branch_point(x, y, y) != y) report.violations.push_back({"two_point", {x, y}});
  if (t.branch_point(x, y, c) != c) report.violations.push_back({"three_point", {x, y, z}});
  const int c1 = t.branch_point(x, y, w);
  const int c2 = t.branch_point(x, z, w);
  const int c3 = t.branch_point(y, z, w);
  if (c != c1 && c != c2 && c != c3) report.violations.push_back({"four_point", {x, y, z, w}});
  ++report.tuples_checked;
}

}  // namespace

AxiomReport AlgebraicTree::verify_axioms() const {
  AxiomReport report;
  for (int x = 0; x < n_; ++x)
    for (int y = 0; y < n_; ++y)
      for (int z = 0; z < n_; ++z)
        for (int w = 0; w < n_; ++w) check_tuple(*this, x, y, z, w, report);
  return report;
}

AxiomReport AlgebraicTree::verify_axioms_sampled(std::uint64_t k, SplitRng rng) const {
  AxiomReport report;
  for (std::uint64_t i = 0; i < k; ++i) {
    const int x = static_cast<int>(rng.uniform_int(n_));
    const int y = static_cast<int>(rng.uniform_int(n_));
    const int z = static_cast<int>(rng.uniform_int(n_));
    const int w = static_cast<int>(rng.uniform_int(n_));
    check_tuple(*this, x, y, z, w, report);
  }
  return report;
}

bool AlgebraicTree::is_homomorphism(const std::vector<int>& f, const AlgebraicTree& source,
                                    const AlgebraicTree& target) {
  if (static_cast<int>(f.size()) != source.size())
    throw ValidationError("map not total on source vertices");
  for (int v : f)
    if (v < 0 || v >= target.size()) throw ValidationError("map image outside target");
  for (int x = 0; x < source.size(); ++x)
    for (int y = 0; y < source.size(); ++y)
      for (int z = 0; z < source.size(); ++z)
        if (f[source.branch_point(x, y, z)] != target.branch_point(f[x], f[y], f[z])) return false;
  return true;
}

std::vector<int> centroids(const AlgebraicTree& tree) {
  const int n = tree.size();
  std::vector<int> best;
  int best_weight = n + 1;
  for (int v = 0; v < n; ++v) {
    // Weight of v = largest component of T minus {v}, from preorder ranges.
    int heaviest = 0;
    int below = 1;
    for (int u : tree.neighbors(v)) {
      if (u == tree.parent(v)) continue;
      const int sz = tree.subtree_end(u) - tree.preorder_index(u);
      heaviest = std::max(heaviest, sz);
      below += sz;
    }
    if (tree.parent(v) >= 0) heaviest = std::max(heaviest, n - below);
    if (heaviest < best_weight) {
      best_weight = heaviest;
      best = {v};
    } else if (heaviest == best_weight) {
      best.push_back(v);
    }
  }
  return best;
}

std::string AlgebraicTree::rooted_code(int root) const {
  // Minimal parenthesis encoding with children sorted by code.
  std::vector<std::string> memo(n_);
  std::vector<std::pair<int, int>> stack{{root, -1}};
  std::vector<std::pair<int, int>> post;
  while (!stack.empty()) {
    auto [v, par] = stack.back();
    stack.pop_back();
    post.emplace_back(v, par);
    for (int u : adj_[v])
      if (u != par) stack.emplace_back(u, v);
  }
  for (auto it = post.rbegin(); it != post.rend(); ++it) {
    auto [v, par] = *it;
    std::vector<std::string> child_codes;
    for (int u : adj_[v])
      if (u != par) child_codes.push_back(memo[u]);
    std::sort(child_codes.begin(), child_codes.end());
    std::string code = "(";
    for (const auto& c : child_codes) code += c;
    code += ")";
    memo[v] = std::move(code);
  }
  return memo[root];
}

std::string AlgebraicTree::canonical_form() const {
  std::string best;
  for (int c : centroids(*this)) {
    std::string code = rooted_code(c);
    if (best.empty() || code < best) best = std::move(code);
  }
  return best;
}

}  // namespace amt
