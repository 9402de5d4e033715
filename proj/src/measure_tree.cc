#include "amt/measure_tree.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <set>
#include <stdexcept>

namespace amt {
namespace {

// Internal point form: a point on the edge from parent(c) to c at relative
// depth eff() in (0,1], where eff() == 1 means vertex c itself. Points on the
// root leaf's edge are stored with their original coordinate and a flip bit so
// that converting back to a SamplePoint never does lossy arithmetic. Depth
// grows with eff(), so meets and medians reduce to LCA arithmetic.
struct Loc {
  int c;
  double t;
  bool flip;  // true: t measured downward from c (root-leaf arcs), eff = 1 - t

  double eff() const { return flip ? 1.0 - t : t; }
  bool same_position(const Loc& o) const {
    if (c != o.c) return false;
    if (flip == o.flip) return t == o.t;
    return eff() == o.eff();
  }
  bool shallower_than(const Loc& o) const {  // valid only for points on one edge
    if (flip == o.flip) return flip ? t > o.t : t < o.t;
    return eff() < o.eff();
  }
  bool operator==(const Loc& o) const { return same_position(o); }
};

Loc normalize(const AlgebraicTree& tree, SamplePoint p) {
  if (p.kind == SamplePoint::Kind::vertex) {
    if (p.id < 0 || p.id >= tree.size()) throw ValidationError("sample point: vertex out of range");
    return {p.id, 1.0, false};
  }
  if (p.id < 0 || p.id >= tree.size()) throw ValidationError("sample point: leaf out of range");
  if (tree.size() < 2) throw ValidationError("sample point: arc point in a one-vertex tree");
  if (tree.degree(p.id) > 1) throw ValidationError("sample point: arc position on a non-leaf");
  if (!(p.u > 0.0 && p.u < 1.0)) throw ValidationError("sample point: arc position must lie in (0,1)");
  if (p.id != 0) return {p.id, p.u, false};  // edge parent(leaf) -> leaf
  int child = tree.neighbors(0).front();     // leaf at the indexing root: edge runs upward
  return {child, p.u, true};
}

SamplePoint denormalize(const AlgebraicTree& tree, Loc l) {
  if (l.eff() == 1.0) return SamplePoint::at_vertex(l.c);
  if (l.flip) return SamplePoint::on_arc(0, l.t);
  if (tree.degree(l.c) <= 1) return SamplePoint::on_arc(l.c, l.t);
  // Only remaining interior edge: the root is a leaf and l sits on its edge.
  return SamplePoint::on_arc(0, 1.0 - l.t);
}

Loc loc_meet(const AlgebraicTree& tree, Loc a, Loc b) {
  if (a.c == b.c) return a.shallower_than(b) ? a : b;
  int w = tree.lca(a.c, b.c);
  if (w == a.c) return a;
  if (w == b.c) return b;
  return {w, 1.0, false};
}

double loc_depth(const AlgebraicTree& tree, Loc l) { return tree.depth(l.c) - 1.0 + l.eff(); }

Loc loc_median(const AlgebraicTree& tree, Loc a, Loc b, Loc c) {
  Loc m = loc_meet(tree, a, b);
  Loc m2 = loc_meet(tree, a, c);
  if (loc_depth(tree, m2) > loc_depth(tree, m)) m = m2;
  Loc m3 = loc_meet(tree, b, c);
  if (loc_depth(tree, m3) > loc_depth(tree, m)) m = m3;
  return m;
}

}  // namespace

SamplePoint branch_point_of(const AlgebraicTree& tree, SamplePoint a, SamplePoint b,
                            SamplePoint c) {
  return denormalize(tree, loc_median(tree, normalize(tree, a), normalize(tree, b),
                                      normalize(tree, c)));
}

bool point_on_path(const AlgebraicTree& tree, SamplePoint w, SamplePoint x, SamplePoint y) {
  Loc lw = normalize(tree, w);
  return loc_median(tree, lw, normalize(tree, x), normalize(tree, y)) == lw;
}

bool point_preorder_less(const AlgebraicTree& tree, SamplePoint a, SamplePoint b) {
  Loc la = normalize(tree, a), lb = normalize(tree, b);
  int ia = tree.preorder_index(la.c), ib = tree.preorder_index(lb.c);
  if (ia != ib) return ia < ib;
  return la.shallower_than(lb);
}

SamplePoint point_meet(const AlgebraicTree& tree, SamplePoint a, SamplePoint b) {
  return denormalize(tree, loc_meet(tree, normalize(tree, a), normalize(tree, b)));
}

bool point_is_ancestor(const AlgebraicTree& tree, SamplePoint a, SamplePoint b) {
  Loc la = normalize(tree, a);
  return loc_meet(tree, la, normalize(tree, b)) == la;
}

MeasureTree::MeasureTree(AlgebraicTree tree, std::vector<Rat> atom_mass,
                         std::vector<Rat> arc_mass)
    : tree_(std::move(tree)), atom_(std::move(atom_mass)), arc_(std::move(arc_mass)) {
  int n = tree_.size();
  if (static_cast<int>(atom_.size()) != n || static_cast<int>(arc_.size()) != n)
    throw ValidationError("measure tree: mass vectors must match the vertex count");
  Rat total = 0;
  for (int v = 0; v < n; ++v) {
    if (atom_[v] < 0 || arc_[v] < 0)
      throw ValidationError("measure tree: masses must be nonnegative");
    if (arc_[v] > 0) {
      if (n == 1) throw ValidationError("measure tree: arc mass needs an edge");
      if (tree_.degree(v) > 1)
        throw ValidationError("measure tree: arc mass allowed on leaves only");
      has_arcs_ = true;
    }
    total += atom_[v] + arc_[v];
  }
  if (total != 1) throw ValidationError("measure tree: total mass must be exactly 1");
  weight_prefix_.assign(n + 1, Rat(0));
  for (int i = 0; i < n; ++i) {
    int v = tree_.vertex_at_preorder(i);
    weight_prefix_[i + 1] = weight_prefix_[i] + atom_[v] + arc_[v];
  }
  cache_ = std::make_shared<Cache>();
}

void MeasureTree::check_vertex(int v) const {
  if (v < 0 || v >= tree_.size()) throw ValidationError("measure tree: vertex out of range");
}

const Rat& MeasureTree::atom(int v) const {
  check_vertex(v);
  return atom_[v];
}

const Rat& MeasureTree::arc(int v) const {
  check_vertex(v);
  return arc_[v];
}

bool MeasureTree::binary() const {
  for (int v = 0; v < tree_.size(); ++v)
    if (tree_.degree(v) > 3) return false;
  return true;
}

bool MeasureTree::atoms_on_leaves() const {
  for (int v = 0; v < tree_.size(); ++v)
    if (atom_[v] > 0 && tree_.degree(v) > 1) return false;
  return true;
}

Rat MeasureTree::edge_diffuse_mass(int child) const {
  check_vertex(child);
  if (child == 0) throw ValidationError("edge_diffuse_mass: the root has no parent edge");
  Rat m = tree_.degree(child) <= 1 ? arc_[child] : Rat(0);
  if (tree_.parent(child) == 0 && tree_.degree(0) <= 1) m += arc_[0];
  return m;
}

Rat MeasureTree::component_mass(int x, int y) const {
  check_vertex(x);
  check_vertex(y);
  if (x == y) throw ValidationError("component_mass: the two vertices must differ");
  auto subtree_weight = [&](int v) {
    return weight_prefix_[tree_.subtree_end(v)] - weight_prefix_[tree_.preorder_index(v)];
  };
  int d = tree_.neighbor_toward(x, y);
  Rat m = d == tree_.parent(x) ? Rat(1) - subtree_weight(x) : subtree_weight(d);
  // x's own arc is pendant: removing the vertex leaves the whole arc attached.
  return m + arc_[x];
}

const std::vector<Rat>& MeasureTree::nu_all() const {
  std::call_once(cache_->nu_once, [&] {
    if (has_arcs_)
      throw ValidationError(
          "branch-point distribution: diffuse arc mass puts branch points inside edges; "
          "use the empirical estimator instead");
    int n = tree_.size();
    auto subtree_weight = [&](int v) {
      return weight_prefix_[tree_.subtree_end(v)] - weight_prefix_[tree_.preorder_index(v)];
    };
    std::vector<Rat> nu(n);
    for (int v = 0; v < n; ++v) {
      Rat miss = 0;  // probability that two of three samples share a component
      for (int u : tree_.neighbors(v)) {
        Rat m = u == tree_.parent(v) ? Rat(1) - subtree_weight(v) : subtree_weight(u);
        miss += m * m * (3 - 2 * m);
      }
      nu[v] = 1 - miss;
    }
    std::vector<Rat> prefix(n);
    for (int i = 0; i < n; ++i) {
      int v = tree_.vertex_at_preorder(i);
      prefix[v] = v == tree_.vertex_at_preorder(0) ? nu[v] : prefix[tree_.parent(v)] + nu[v];
    }
    cache_->nu = std::move(nu);
    cache_->nu_prefix = std::move(prefix);
  });
  return cache_->nu;
}

const std::vector<Rat>& MeasureTree::nu_prefix() const {
  nu_all();
  return cache_->nu_prefix;
}

std::vector<Rat> MeasureTree::branch_point_distribution() const { return nu_all(); }

std::vector<Rat> MeasureTree::branch_point_distribution_bruteforce() const {
  if (has_arcs_)
    throw ValidationError(
        "branch-point distribution: diffuse arc mass puts branch points inside edges; "
        "use the empirical estimator instead");
  std::vector<int> support;
  for (int v = 0; v < tree_.size(); ++v)
    if (atom_[v] > 0) support.push_back(v);
  if (support.size() > 40)
    throw ValidationError("bruteforce branch-point distribution: more than 40 atoms");
  std::vector<Rat> nu(tree_.size(), Rat(0));
  for (int a : support)
    for (int b : support)
      for (int c : support) nu[tree_.branch_point(a, b, c)] += atom_[a] * atom_[b] * atom_[c];
  return nu;
}

Rat MeasureTree::nu(int v) const {
  check_vertex(v);
  return nu_all()[v];
}

Rat MeasureTree::nu_interval(int x, int y) const {
  check_vertex(x);
  check_vertex(y);
  const std::vector<Rat>& nu = nu_all();
  const std::vector<Rat>& pre = nu_prefix();
  int l = tree_.lca(x, y);
  return pre[x] + pre[y] - 2 * pre[l] + nu[l];
}

Rat MeasureTree::r_nu(int x, int y) const {
  const std::vector<Rat>& nu = nu_all();
  return nu_interval(x, y) - (nu[x] + nu[y]) / 2;
}

std::vector<std::vector<Rat>> MeasureTree::distance_matrix(const std::vector<int>& points) const {
  size_t m = points.size();
  std::vector<std::vector<Rat>> d(m, std::vector<Rat>(m, Rat(0)));
  for (size_t i = 0; i < m; ++i)
    for (size_t j = i + 1; j < m; ++j) d[i][j] = d[j][i] = r_nu(points[i], points[j]);
  return d;
}

Rat MeasureTree::total_length() const {
  const std::vector<Rat>& nu = nu_all();
  Rat s = 0;
  for (int v = 0; v < tree_.size(); ++v) s += tree_.degree(v) * nu[v];
  return s / 2;
}

Rat MeasureTree::total_length_edgewise() const {
  Rat s = 0;
  for (auto [u, v] : tree_.edges()) s += r_nu(u, v);
  return s;
}

MeasureTree MeasureTree::reduced() const {
  int n = tree_.size();
  std::vector<bool> alive(n, true);
  std::vector<int> deg(n);
  for (int v = 0; v < n; ++v) deg[v] = tree_.degree(v);

  // Prune mass-free leaves until none remain (new leaves may appear).
  std::vector<int> stack;
  for (int v = 0; v < n; ++v)
    if (deg[v] <= 1 && atom_[v] == 0 && arc_[v] == 0) stack.push_back(v);
  int alive_count = n;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (!alive[v] || alive_count == 1) continue;
    alive[v] = false;
    --alive_count;
    for (int u : tree_.neighbors(v))
      if (alive[u] && --deg[u] <= 1 && atom_[u] == 0 && arc_[u] == 0) stack.push_back(u);
  }

  // Splice out mass-free pass-through vertices.
  std::vector<bool> kept(n, false);
  std::vector<int> ids;
  for (int v = 0; v < n; ++v) {
    kept[v] = alive[v] && !(deg[v] == 2 && atom_[v] == 0);
    if (kept[v]) ids.push_back(v);
  }
  if (ids.size() == 1 || alive_count == 1) {
    int v = ids.empty() ? 0 : ids.front();
    (void)v;
    return MeasureTree(AlgebraicTree::from_edges({}, 1), {Rat(1)}, {Rat(0)});
  }

  std::vector<int> new_id(n, -1);
  for (size_t i = 0; i < ids.size(); ++i) new_id[ids[i]] = static_cast<int>(i);
  std::set<std::pair<int, int>> edge_set;
  for (int v : ids) {
    for (int u : tree_.neighbors(v)) {
      if (!alive[u]) continue;
      int prev = v, cur = u;
      while (!kept[cur]) {
        int next = -1;
        for (int w : tree_.neighbors(cur))
          if (alive[w] && w != prev) next = w;
        prev = cur;
        cur = next;
      }
      edge_set.insert({std::min(new_id[v], new_id[cur]), std::max(new_id[v], new_id[cur])});
    }
  }
  std::vector<std::pair<int, int>> edges(edge_set.begin(), edge_set.end());
  AlgebraicTree rt = AlgebraicTree::from_edges(edges, static_cast<int>(ids.size()));
  std::vector<Rat> atoms(ids.size()), arcs(ids.size());
  for (size_t i = 0; i < ids.size(); ++i) {
    atoms[i] = atom_[ids[i]];
    arcs[i] = arc_[ids[i]];
  }
  return MeasureTree(std::move(rt), std::move(atoms), std::move(arcs));
}

std::string MeasureTree::canonical_form() const {
  MeasureTree r = reduced();
  const AlgebraicTree& t = r.tree();
  int n = t.size();
  if (n == 1) return "atom[" + rat_to_string(r.atom(0)) + "]";

  bool path = true;
  for (int v = 0; v < n && path; ++v) path = t.degree(v) <= 2;
  if (path) {
    // One-dimensional mass sequence: atoms in path order with the diffuse
    // totals between consecutive atoms; orientation chosen lexicographically.
    std::vector<int> order;
    int start = -1;
    for (int v = 0; v < n; ++v)
      if (t.degree(v) <= 1) start = v;
    int prev = -1, cur = start;
    while (cur != -1) {
      order.push_back(cur);
      int next = -1;
      for (int w : t.neighbors(cur))
        if (w != prev) next = w;
      prev = cur;
      cur = next;
    }
    auto tokens = [&](const std::vector<int>& ord) {
      std::vector<std::string> out;
      out.push_back(rat_to_string(r.atom(ord[0])));
      for (size_t i = 0; i + 1 < ord.size(); ++i) {
        Rat gap = 0;
        if (t.degree(ord[i]) <= 1) gap += r.arc(ord[i]);
        if (t.degree(ord[i + 1]) <= 1) gap += r.arc(ord[i + 1]);
        out.push_back(rat_to_string(gap));
        out.push_back(rat_to_string(r.atom(ord[i + 1])));
      }
      return out;
    };
    std::vector<int> rev(order.rbegin(), order.rend());
    std::vector<std::string> fwd = tokens(order), bwd = tokens(rev);
    const std::vector<std::string>& best = fwd <= bwd ? fwd : bwd;
    std::string s = "path[";
    for (size_t i = 0; i < best.size(); ++i) s += (i ? "|" : "") + best[i];
    return s + "]";
  }

  // General shape: mass-annotated subtree codes, minimized over centroid roots.
  auto code = [&](auto&& self, int v, int parent) -> std::string {
    std::vector<std::string> kids;
    for (int u : t.neighbors(v))
      if (u != parent) kids.push_back(self(self, u, v));
    std::sort(kids.begin(), kids.end());
    std::string s = "(" + rat_to_string(r.atom(v)) + ";" + rat_to_string(r.arc(v));
    for (const std::string& k : kids) s += k;
    return s + ")";
  };
  std::string best;
  for (int c : centroids(t)) {
    std::string s = code(code, c, -1);
    if (best.empty() || s < best) best = s;
  }
  return "tree" + best;
}

bool MeasureTree::equivalent(const MeasureTree& a, const MeasureTree& b) {
  return a.canonical_form() == b.canonical_form();
}

void MeasureTree::ensure_sampler() const {
  std::call_once(cache_->sampler_once, [&] {
    double acc = 0;
    for (int v = 0; v < tree_.size(); ++v) {
      if (atom_[v] > 0) {
        acc += rat_to_double(atom_[v]);
        cache_->cumulative.push_back(acc);
        cache_->entries.push_back(SamplePoint::at_vertex(v));
      }
    }
    for (int v = 0; v < tree_.size(); ++v) {
      if (arc_[v] > 0) {
        acc += rat_to_double(arc_[v]);
        cache_->cumulative.push_back(acc);
        cache_->entries.push_back(SamplePoint::on_arc(v, 0.0));
      }
    }
  });
}

SamplePoint MeasureTree::draw_point(SplitRng& rng) const {
  ensure_sampler();
  const std::vector<double>& cum = cache_->cumulative;
  double x = rng.uniform01() * cum.back();
  size_t i = std::upper_bound(cum.begin(), cum.end(), x) - cum.begin();
  if (i >= cum.size()) i = cum.size() - 1;
  SamplePoint p = cache_->entries[i];
  if (p.kind == SamplePoint::Kind::arc) {
    do {
      p.u = rng.uniform01();
    } while (p.u <= 0.0 || p.u >= 1.0);
  }
  return p;
}

std::vector<SamplePoint> MeasureTree::draw_points(int m, SplitRng& rng) const {
  if (m < 0) throw ValidationError("draw_points: negative count");
  std::vector<SamplePoint> out;
  out.reserve(m);
  while (static_cast<int>(out.size()) < m) {
    SamplePoint p = draw_point(rng);
    if (p.kind == SamplePoint::Kind::arc) {
      bool dup = false;
      for (const SamplePoint& q : out) dup = dup || q == p;
      if (dup) continue;  // ties on an arc carry no mass; redraw
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace amt
