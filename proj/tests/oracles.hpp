#pragma once

// Slow reference implementations the unit tests compare against. Everything
// here works from first principles (BFS, full enumeration) so a bug in the
// library cannot hide in its mirror image.

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <vector>

#include "amt/measure_tree.hpp"
#include "amt/rational.hpp"
#include "amt/rng.hpp"
#include "amt/tree.hpp"

namespace oracle {

/** Path from x to y found by BFS over an adjacency list. */
inline std::vector<int> bfs_path(const std::vector<std::vector<int>>& adj, int x, int y) {
  std::vector<int> prev(adj.size(), -2);
  std::queue<int> queue;
  queue.push(x);
  prev[x] = -1;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop();
    if (v == y) break;
    for (int u : adj[v])
      if (prev[u] == -2) {
        prev[u] = v;
        queue.push(u);
      }
  }
  std::vector<int> path;
  for (int v = y; v != -1; v = prev[v]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

inline std::vector<std::vector<int>> adjacency(const amt::AlgebraicTree& t) {
  std::vector<std::vector<int>> adj(t.size());
  for (auto [a, b] : t.edges()) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  return adj;
}

/** Median of x, y, z as the unique common vertex of the three pairwise paths. */
inline int median(const std::vector<std::vector<int>>& adj, int x, int y, int z) {
  auto pxy = bfs_path(adj, x, y);
  auto pyz = bfs_path(adj, y, z);
  auto pxz = bfs_path(adj, x, z);
  std::set<int> sxy(pxy.begin(), pxy.end());
  std::set<int> syz(pyz.begin(), pyz.end());
  for (int v : pxz)
    if (sxy.count(v) && syz.count(v)) return v;
  return -1;
}

/** Component of T minus {x} containing y, via BFS that never enters x. */
inline std::vector<int> component(const std::vector<std::vector<int>>& adj, int x, int y) {
  if (x == y) return {x};
  std::vector<char> seen(adj.size(), 0);
  seen[x] = seen[y] = 1;
  std::queue<int> queue;
  queue.push(y);
  std::vector<int> out{y};
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop();
    for (int u : adj[v])
      if (!seen[u]) {
        seen[u] = 1;
        out.push_back(u);
        queue.push(u);
      }
  }
  std::sort(out.begin(), out.end());
  return out;
}

/** Random tree: each new vertex attaches to a uniformly chosen earlier one. */
inline amt::AlgebraicTree random_tree(amt::SplitRng& rng, int n) {
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v < n; ++v)
    edges.emplace_back(static_cast<int>(rng.uniform_int(v)), v);
  return amt::AlgebraicTree::from_edges(edges, n);
}

/** Exact isomorphism by trying every vertex bijection (n <= 9 or so). */
inline bool isomorphic_bruteforce(const amt::AlgebraicTree& a, const amt::AlgebraicTree& b) {
  if (a.size() != b.size()) return false;
  std::set<std::pair<int, int>> edges_b;
  for (auto e : b.edges()) edges_b.insert(e);
  std::vector<int> perm(a.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool ok = true;
    for (auto [u, v] : a.edges()) {
      auto key = std::minmax(perm[u], perm[v]);
      if (!edges_b.count(key)) {
        ok = false;
        break;
      }
    }
    if (ok) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

/** mu(S_x(y)) from the BFS component: atoms of the member vertices, arcs of the
    member leaves, plus x's own arc (pendant, so it stays attached). */
inline amt::Rat component_mass(const amt::MeasureTree& mt, int x, int y) {
  auto adj = adjacency(mt.tree());
  amt::Rat m = 0;
  for (int v : component(adj, x, y)) m += mt.atom(v) + mt.arc(v);
  return m + mt.arc(x);
}

/** Random atomic measure tree: random shape, random positive rational masses on
    a random subset of vertices (at least one), normalized to total 1. */
inline amt::MeasureTree random_atomic_measure_tree(amt::SplitRng& rng, int n) {
  amt::AlgebraicTree t = random_tree(rng, n);
  std::vector<amt::Rat> atoms(n, amt::Rat(0)), arcs(n, amt::Rat(0));
  amt::Rat total = 0;
  while (total == 0) {
    for (int v = 0; v < n; ++v) {
      atoms[v] = rng.uniform_int(3) == 0 ? amt::Rat(0) : amt::Rat(1 + (int)rng.uniform_int(6));
      total += atoms[v];
    }
  }
  for (int v = 0; v < n; ++v) atoms[v] /= total;
  return amt::MeasureTree(std::move(t), std::move(atoms), std::move(arcs));
}

/** Random binary tree with atoms and (optionally) arcs on leaves only. */
inline amt::MeasureTree random_leaf_measure_tree(amt::SplitRng& rng, int leaf_count,
                                                 bool with_arcs) {
  // Grow a binary tree by repeatedly splitting a uniformly chosen leaf.
  std::vector<std::pair<int, int>> edges;
  std::vector<int> leaf_ids{0};
  int next = 1;
  if (leaf_count >= 2) {
    edges.emplace_back(0, 1);
    leaf_ids = {0, 1};
    next = 2;
  }
  while (static_cast<int>(leaf_ids.size()) < leaf_count) {
    size_t pick = rng.uniform_int(leaf_ids.size());
    int leaf = leaf_ids[pick];
    int a = next++, b = next++;
    edges.emplace_back(leaf, a);  // leaf becomes internal, two fresh leaves below
    edges.emplace_back(leaf, b);
    leaf_ids[pick] = a;
    leaf_ids.push_back(b);
  }
  amt::AlgebraicTree t = amt::AlgebraicTree::from_edges(edges, next);
  std::vector<amt::Rat> atoms(next, amt::Rat(0)), arcs(next, amt::Rat(0));
  amt::Rat total = 0;
  for (int leaf : leaf_ids) {
    amt::Rat a(1 + (int)rng.uniform_int(5)), b(0);
    if (with_arcs && next > 1 && rng.uniform_int(2) == 0)
      b = amt::Rat(1 + (int)rng.uniform_int(5));
    atoms[leaf] = a;
    arcs[leaf] = b;
    total += a + b;
  }
  for (int leaf : leaf_ids) {
    atoms[leaf] /= total;
    arcs[leaf] /= total;
  }
  return amt::MeasureTree(std::move(t), std::move(atoms), std::move(arcs));
}

}  // namespace oracle
