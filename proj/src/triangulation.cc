#include "amt/triangulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "amt/rng.hpp"
#include "amt/tree.hpp"

namespace amt {

namespace {

std::string pair_str(int i, int j) {
  return "(" + std::to_string(i) + "," + std::to_string(j) + ")";
}

std::string triple_str(const std::array<int, 3>& t) {
  return "(" + std::to_string(t[0]) + "," + std::to_string(t[1]) + "," +
         std::to_string(t[2]) + ")";
}

/**
 * Planar faces of a non-crossing chord family inside the disc. Edges are the
 * boundary arcs between consecutive marked points plus the chords; every
 * interior face is walked counterclockwise (region on the left), and the one
 * clockwise walk around the whole circle is the exterior. Because chords only
 * meet at marked points, the rotational order of the edges at a point is the
 * circular order of their far endpoints.
 */
struct Arrangement {
  int B = 0;
  std::vector<Rat> pos;
  std::vector<std::pair<int, int>> chords;  // pairs i < j

  struct Face {
    std::vector<int> halves;     // boundary cycle, counterclockwise
    std::vector<int> chord_ids;  // chords on the cycle (indices into chords)
    std::vector<int> arc_ids;    // boundary arcs on the cycle (arc g runs g -> g+1)
    Rat arc_length;              // total length of those arcs
  };
  std::vector<Face> faces;        // interior faces only
  std::vector<int> face_of_half;  // face id per half-edge; -1 on the exterior walk

  // Edge e < B is the arc from point e to point (e+1) % B; edge B + k is
  // chord k. Half-edge 2e is the stored direction, 2e + 1 the reverse.
  int edge_count() const { return B + static_cast<int>(chords.size()); }
  std::pair<int, int> ends(int e) const {
    if (e < B) return {e, (e + 1) % B};
    return chords[e - B];
  }
  int tail(int h) const {
    auto [u, v] = ends(h / 2);
    return (h & 1) ? v : u;
  }
  int head(int h) const { return tail(h ^ 1); }

  Rat gap(int g) const {
    return g + 1 < B ? pos[g + 1] - pos[g] : Rat(1) - pos[B - 1] + pos[0];
  }

  /** Face on the arc side of a listed segment (i, j): the one walked along
      the arcs from i to j and back along the chord from j to i. */
  int segment_face(int i, int j) const {
    auto it = std::lower_bound(chords.begin(), chords.end(),
                               std::make_pair(std::min(i, j), std::max(i, j)));
    int k = static_cast<int>(it - chords.begin());
    int h = 2 * (B + k) + (j < i ? 0 : 1);
    return face_of_half[h];
  }

  int across_chord(int k, int f) const {
    int h = 2 * (B + k);
    return face_of_half[h] == f ? face_of_half[h + 1] : face_of_half[h];
  }
};

Arrangement build_arrangement(const std::vector<Rat>& pos,
                              std::vector<std::pair<int, int>> chords) {
  Arrangement a;
  a.B = static_cast<int>(pos.size());
  a.pos = pos;
  a.chords = std::move(chords);
  const int E = a.edge_count();

  // Rotational order of the outgoing half-edges at every marked point: the
  // arc to the next point first, then chords by the circular offset of their
  // far endpoint, then the arc back to the previous point.
  std::vector<std::vector<std::pair<std::pair<int, Rat>, int>>> keyed(a.B);
  for (int e = 0; e < E; ++e) {
    auto [u, v] = a.ends(e);
    if (e < a.B) {
      keyed[u].push_back({{0, Rat(0)}, 2 * e});
      keyed[v].push_back({{2, Rat(0)}, 2 * e + 1});
    } else {
      Rat d_uv = a.pos[v] - a.pos[u];
      keyed[u].push_back({{1, d_uv}, 2 * e});
      keyed[v].push_back({{1, Rat(1) - d_uv}, 2 * e + 1});
    }
  }
  std::vector<std::vector<int>> rot(a.B);
  std::vector<int> idx_in_rot(2 * E, -1);
  for (int v = 0; v < a.B; ++v) {
    std::sort(keyed[v].begin(), keyed[v].end());
    for (auto& [key, h] : keyed[v]) {
      idx_in_rot[h] = static_cast<int>(rot[v].size());
      rot[v].push_back(h);
    }
  }

  // Next half-edge along a face: step to the head, then take the edge one
  // rotational step clockwise from the one we arrived on.
  auto next = [&](int h) {
    int v = a.head(h);
    const auto& r = rot[v];
    int i = idx_in_rot[h ^ 1];
    return r[(i + static_cast<int>(r.size()) - 1) % r.size()];
  };

  a.face_of_half.assign(2 * E, -2);
  const int outer_mark = 2 * 0 + 1;  // arc 0 walked clockwise
  for (int h0 = 0; h0 < 2 * E; ++h0) {
    if (a.face_of_half[h0] != -2) continue;
    std::vector<int> cycle;
    bool outer = false;
    for (int h = h0; a.face_of_half[h] == -2; h = next(h)) {
      a.face_of_half[h] = -3;  // provisional
      cycle.push_back(h);
      if (h == outer_mark) outer = true;
    }
    int id = outer ? -1 : static_cast<int>(a.faces.size());
    for (int h : cycle) a.face_of_half[h] = id;
    if (outer) continue;
    Arrangement::Face f;
    f.halves = std::move(cycle);
    for (int h : f.halves) {
      int e = h / 2;
      if (e < a.B) {
        f.arc_ids.push_back(e);
        f.arc_length += a.gap(e);
      } else {
        f.chord_ids.push_back(e - a.B);
      }
    }
    a.faces.push_back(std::move(f));
  }
  return a;
}

// Face kinds after matching the listed triangles and segments.
constexpr int kRetained = 0;
constexpr int kTriangle = 1;
constexpr int kSegment = 2;

/** Matches every listed face to a face of the arrangement; fills `kind` per
    face and appends a violation for each listing that is not a face. */
void match_listed(const Arrangement& arr, const FiniteSubTriangulation& c,
                  std::vector<int>& kind, std::vector<std::string>* violations) {
  kind.assign(arr.faces.size(), kRetained);
  std::map<std::array<int, 3>, int> tri_face;
  for (int f = 0; f < static_cast<int>(arr.faces.size()); ++f) {
    const auto& face = arr.faces[f];
    if (face.chord_ids.size() == 3 && face.arc_ids.empty()) {
      std::array<int, 3> key{arr.tail(face.halves[0]), arr.tail(face.halves[1]),
                             arr.tail(face.halves[2])};
      std::sort(key.begin(), key.end());
      tri_face[key] = f;
    }
  }
  for (const auto& t : c.triangles) {
    auto it = tri_face.find(t);
    if (it != tri_face.end()) {
      kind[it->second] = kTriangle;
    } else if (violations) {
      violations->push_back("triangle " + triple_str(t) +
                            " is not a face of the chord arrangement");
    }
  }
  for (const auto& s : c.segments) {
    int f = arr.segment_face(s.first, s.second);
    if (f >= 0 && arr.faces[f].chord_ids.size() == 1) {
      kind[f] = kSegment;
    } else if (violations) {
      violations->push_back("segment " + pair_str(s.first, s.second) +
                            " is not a face of the chord arrangement");
    }
  }
}

bool degenerate_point(const FiniteSubTriangulation& c) {
  return c.boundary.size() == 1 && c.triangles.empty() &&
         c.segments.size() == 1 && c.segments[0] == std::make_pair(0, 0);
}

double point_segment_dist(double px, double py, double ax, double ay, double bx,
                          double by) {
  double dx = bx - ax, dy = by - ay;
  double len2 = dx * dx + dy * dy;
  double t = len2 > 0 ? ((px - ax) * dx + (py - ay) * dy) / len2 : 0.0;
  t = std::clamp(t, 0.0, 1.0);
  return std::hypot(px - (ax + t * dx), py - (ay + t * dy));
}

constexpr double kTau = 6.283185307179586;
constexpr double kRadius = 1.0 / kTau;  // circle of unit circumference

// Drawn point set of a picture: marked points, chords, and the boundary arcs
// not swallowed by a removed segment.
struct Elem {
  int kind;               // 0 point, 1 chord, 2 arc
  double ax, ay, bx, by;  // endpoints (point: ax, ay only)
  double t1, t2;          // arc span in turns, t1 < t2 <= t1 + 1
};

std::pair<double, double> circle_xy(double t) {
  return {kRadius * std::cos(kTau * t), kRadius * std::sin(kTau * t)};
}

std::vector<Elem> drawn_elements(const FiniteSubTriangulation& c) {
  std::vector<Elem> out;
  const int B = static_cast<int>(c.boundary.size());
  std::vector<double> t(B);
  for (int i = 0; i < B; ++i) t[i] = rat_to_double(c.boundary[i]);
  for (int i = 0; i < B; ++i) {
    auto [x, y] = circle_xy(t[i]);
    out.push_back({0, x, y, 0, 0, 0, 0});
  }
  for (auto [i, j] : c.chords()) {
    auto [ax, ay] = circle_xy(t[i]);
    auto [bx, by] = circle_xy(t[j]);
    out.push_back({1, ax, ay, bx, by, 0, 0});
  }
  std::vector<char> covered(std::max(B, 1), 0);
  for (auto [i, j] : c.segments) {
    if (i == j) {
      std::fill(covered.begin(), covered.end(), 1);
      continue;
    }
    for (int g = i; g != j; g = (g + 1) % B) covered[g] = 1;
  }
  if (B == 0) {
    out.push_back({2, 0, 0, 0, 0, 0.0, 1.0});
    return out;
  }
  for (int g = 0; g < B; ++g) {
    if (covered[g]) continue;
    double t2 = g + 1 < B ? t[g + 1] : t[0] + 1.0;
    out.push_back({2, 0, 0, 0, 0, t[g], t2});
  }
  return out;
}

double point_elem_dist(double px, double py, const Elem& e) {
  switch (e.kind) {
    case 0:
      return std::hypot(px - e.ax, py - e.ay);
    case 1:
      return point_segment_dist(px, py, e.ax, e.ay, e.bx, e.by);
    default: {
      double theta = std::atan2(py, px) / kTau;
      if (theta < 0) theta += 1.0;
      if ((e.t1 <= theta && theta <= e.t2) ||
          (e.t1 <= theta + 1.0 && theta + 1.0 <= e.t2))
        return std::abs(std::hypot(px, py) - kRadius);
      auto [ax, ay] = circle_xy(e.t1);
      auto [bx, by] = circle_xy(e.t2);
      return std::min(std::hypot(px - ax, py - ay), std::hypot(px - bx, py - by));
    }
  }
}

double directed_hausdorff(const std::vector<Elem>& from,
                          const std::vector<Elem>& to, double tol) {
  double worst = 0;
  auto probe = [&](double px, double py) {
    double best = point_elem_dist(px, py, to.front());
    for (std::size_t i = 1; i < to.size() && best > 0; ++i)
      best = std::min(best, point_elem_dist(px, py, to[i]));
    worst = std::max(worst, best);
  };
  std::uint64_t budget = 4'000'000;
  auto spend = [&budget](std::uint64_t n) {
    if (n > budget)
      throw ValidationError("hausdorff_distance: tol too fine for the sampling budget");
    budget -= n;
  };
  for (const auto& e : from) {
    if (e.kind == 0) {
      spend(1);
      probe(e.ax, e.ay);
    } else if (e.kind == 1) {
      double len = std::hypot(e.bx - e.ax, e.by - e.ay);
      auto k = static_cast<std::uint64_t>(std::ceil(len / tol)) + 1;
      spend(k + 1);
      for (std::uint64_t i = 0; i <= k; ++i) {
        double s = double(i) / double(k);
        probe(e.ax + s * (e.bx - e.ax), e.ay + s * (e.by - e.ay));
      }
    } else {
      double len = e.t2 - e.t1;  // arc length equals the span in turns
      auto k = static_cast<std::uint64_t>(std::ceil(len / tol)) + 1;
      spend(k + 1);
      for (std::uint64_t i = 0; i <= k; ++i) {
        auto [px, py] = circle_xy(e.t1 + len * double(i) / double(k));
        probe(px, py);
      }
    }
  }
  return worst;
}

}  // namespace

std::vector<std::pair<int, int>> FiniteSubTriangulation::chords() const {
  std::vector<std::pair<int, int>> out;
  for (const auto& t : triangles) {
    out.push_back(std::minmax(t[0], t[1]));
    out.push_back(std::minmax(t[1], t[2]));
    out.push_back(std::minmax(t[0], t[2]));
  }
  for (const auto& s : segments)
    if (s.first != s.second) out.push_back(std::minmax(s.first, s.second));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

ValidationReport validate(const FiniteSubTriangulation& c) {
  ValidationReport rep;
  auto flag = [&rep](std::string msg) {
    rep.valid = false;
    rep.violations.push_back(std::move(msg));
  };

  const int B = static_cast<int>(c.boundary.size());
  for (int i = 0; i < B; ++i) {
    if (c.boundary[i] < 0 || c.boundary[i] >= 1)
      flag("boundary position " + std::to_string(i) + " outside [0,1)");
    if (i > 0 && c.boundary[i] <= c.boundary[i - 1])
      flag("boundary positions " + std::to_string(i - 1) + " and " +
           std::to_string(i) + " not strictly increasing");
  }
  for (const auto& t : c.triangles)
    if (!(0 <= t[0] && t[0] < t[1] && t[1] < t[2] && t[2] < B))
      flag("triangle " + triple_str(t) + " has indices out of order or out of range");
  for (const auto& s : c.segments) {
    if (s.first < 0 || s.first >= B || s.second < 0 || s.second >= B)
      flag("segment " + pair_str(s.first, s.second) + " has indices out of range");
    else if (s.first == s.second && !degenerate_point(c))
      flag("segment " + pair_str(s.first, s.second) +
           " is degenerate (allowed only as the single listing on a single marked point)");
  }
  {
    auto tri = c.triangles;
    std::sort(tri.begin(), tri.end());
    for (std::size_t i = 1; i < tri.size(); ++i)
      if (tri[i] == tri[i - 1]) flag("duplicate triangle " + triple_str(tri[i]));
    auto seg = c.segments;
    std::sort(seg.begin(), seg.end());
    for (std::size_t i = 1; i < seg.size(); ++i)
      if (seg[i] == seg[i - 1])
        flag("duplicate segment " + pair_str(seg[i].first, seg[i].second));
  }
  if (!rep.valid) return rep;  // face analysis needs sane indices

  auto chords = c.chords();
  for (std::size_t p = 0; p < chords.size(); ++p)
    for (std::size_t q = p + 1; q < chords.size(); ++q) {
      auto [a, b] = chords[p];
      auto [x, y] = chords[q];
      if ((a < x && x < b && b < y) || (x < a && a < y && y < b))
        flag("chords " + pair_str(a, b) + " and " + pair_str(x, y) + " cross");
    }
  if (!rep.valid || chords.empty()) return rep;

  Arrangement arr = build_arrangement(c.boundary, std::move(chords));
  std::vector<int> kind;
  match_listed(arr, c, kind, &rep.violations);
  rep.valid = rep.violations.empty();

  for (int f = 0; f < static_cast<int>(arr.faces.size()); ++f) {
    if (kind[f] != kRetained || arr.faces[f].chord_ids.size() < 3) continue;
    std::vector<int> pts;
    for (int h : arr.faces[f].halves) pts.push_back(arr.tail(h));
    std::sort(pts.begin(), pts.end());
    std::string where;
    for (int v : pts) where += (where.empty() ? "" : ",") + std::to_string(v);
    flag("retained face on boundary points " + where + " borders " +
         std::to_string(arr.faces[f].chord_ids.size()) +
         " chords and cannot branch");
  }
  return rep;
}

MeasureTree code(const FiniteSubTriangulation& c) {
  ValidationReport rep = validate(c);
  if (!rep.valid)
    throw ValidationError("code: invalid picture: " + rep.violations.front());

  if (degenerate_point(c))
    return MeasureTree(AlgebraicTree::from_edges({}, 1), {Rat(1)}, {Rat(0)});
  auto chords = c.chords();
  if (chords.empty()) {
    // Whole closed disc, possibly with marked points: the coded tree is a
    // bare line segment carrying uniform diffuse mass.
    return MeasureTree(AlgebraicTree::from_edges({{0, 1}}),
                       {Rat(0), Rat(0)}, {Rat(1, 2), Rat(1, 2)});
  }

  Arrangement arr = build_arrangement(c.boundary, std::move(chords));
  const int F = static_cast<int>(arr.faces.size());
  std::vector<int> kind;
  match_listed(arr, c, kind, nullptr);

  // Dual vertices: triangles branch, segments carry atoms, single-chord
  // retained faces carry diffuse mass. Two-chord retained faces are not
  // vertices: they join their neighbours directly and hand their arc length
  // to the adjacent segment leaf.
  std::vector<int> vid(F, -1);
  std::vector<char> band(F, 0);
  int V = 0;
  for (int f = 0; f < F; ++f) {
    std::size_t nchords = arr.faces[f].chord_ids.size();
    if (kind[f] != kRetained || nchords == 1)
      vid[f] = V++;
    else
      band[f] = 1;  // exactly two chords; validate() rejected three or more
  }
  std::vector<Rat> atoms(V), arcs(V);
  for (int f = 0; f < F; ++f) {
    if (kind[f] == kSegment) atoms[vid[f]] = arr.faces[f].arc_length;
    if (kind[f] == kRetained && !band[f]) arcs[vid[f]] = arr.faces[f].arc_length;
  }
  std::vector<std::pair<int, int>> edges;
  for (int k = 0; k < static_cast<int>(arr.chords.size()); ++k) {
    int f0 = arr.face_of_half[2 * (arr.B + k)];
    int f1 = arr.face_of_half[2 * (arr.B + k) + 1];
    if (!band[f0] && !band[f1]) edges.push_back({vid[f0], vid[f1]});
  }
  for (int f = 0; f < F; ++f) {
    if (!band[f]) continue;
    int g1 = arr.across_chord(arr.faces[f].chord_ids[0], f);
    int g2 = arr.across_chord(arr.faces[f].chord_ids[1], f);
    edges.push_back({vid[g1], vid[g2]});
    if (kind[g1] == kSegment)
      arcs[vid[g1]] += arr.faces[f].arc_length;
    else if (kind[g2] == kSegment)
      arcs[vid[g2]] += arr.faces[f].arc_length;
    else
      throw ValidationError(
          "code: a retained face joins two triangles; its diffuse mass would "
          "lie on an internal edge, which this representation cannot carry");
  }
  return MeasureTree(AlgebraicTree::from_edges(edges, V), std::move(atoms),
                     std::move(arcs));
}

FiniteSubTriangulation decode(const MeasureTree& mt, int root_leaf,
                              PlanarOrder order) {
  if (!mt.binary()) throw ValidationError("decode: tree is not binary");
  if (!mt.atoms_on_leaves())
    throw ValidationError("decode: atoms must sit on leaves");

  // Drop zero-mass leaves and splice mass-free pass-through vertices, keeping
  // the id correspondence so root_leaf can be resolved.
  const AlgebraicTree& t0 = mt.tree();
  const int n0 = t0.size();
  std::vector<char> alive(n0, 1);
  std::vector<int> deg(n0);
  for (int v = 0; v < n0; ++v) deg[v] = t0.degree(v);
  std::vector<int> stack;
  auto massless = [&](int v) { return mt.atom(v) == 0 && mt.arc(v) == 0; };
  for (int v = 0; v < n0; ++v)
    if (deg[v] <= 1 && massless(v)) stack.push_back(v);
  int alive_count = n0;
  while (!stack.empty()) {
    int v = stack.back();
    stack.pop_back();
    if (!alive[v] || alive_count == 1) continue;
    alive[v] = false;
    --alive_count;
    for (int u : t0.neighbors(v))
      if (alive[u] && --deg[u] <= 1 && massless(u)) stack.push_back(u);
  }
  std::vector<int> new_id(n0, -1), ids;
  for (int v = 0; v < n0; ++v)
    if (alive[v] && !(deg[v] == 2 && mt.atom(v) == 0)) {
      new_id[v] = static_cast<int>(ids.size());
      ids.push_back(v);
    }
  if (ids.size() <= 1 || alive_count == 1)
    return {{Rat(0)}, {}, {{0, 0}}};  // a single point of the circle survives

  std::set<std::pair<int, int>> edge_set;
  for (int v : ids) {
    for (int u : t0.neighbors(v)) {
      if (!alive[u]) continue;
      int prev = v, cur = u;
      while (new_id[cur] < 0) {
        int next = -1;
        for (int w : t0.neighbors(cur))
          if (alive[w] && w != prev) next = w;
        prev = cur;
        cur = next;
      }
      edge_set.insert(std::minmax(new_id[v], new_id[cur]));
    }
  }
  const int V = static_cast<int>(ids.size());
  AlgebraicTree rt = AlgebraicTree::from_edges(
      std::vector<std::pair<int, int>>(edge_set.begin(), edge_set.end()), V);
  auto atom = [&](int v) { return mt.atom(ids[v]); };
  auto arc = [&](int v) { return mt.arc(ids[v]); };

  int root = -1;
  if (root_leaf < 0) {
    for (int v = 0; v < V && root < 0; ++v)
      if (rt.degree(v) <= 1) root = v;
  } else {
    if (root_leaf >= n0 || new_id[root_leaf] < 0 ||
        rt.degree(new_id[root_leaf]) > 1)
      throw ValidationError("decode: root_leaf must name a leaf carrying mass");
    root = new_id[root_leaf];
  }

  // Root the reduced tree and order the two children under every branch.
  std::vector<int> par(V, -1), bfs{root};
  std::vector<std::vector<int>> child(V);
  for (std::size_t i = 0; i < bfs.size(); ++i)
    for (int u : rt.neighbors(bfs[i]))
      if (u != par[bfs[i]]) {
        par[u] = bfs[i];
        child[bfs[i]].push_back(u);
        bfs.push_back(u);
      }
  std::vector<Rat> sub(V);
  std::vector<std::string> key(V);
  for (auto it = bfs.rbegin(); it != bfs.rend(); ++it) {
    int v = *it;
    sub[v] = atom(v) + arc(v);
    for (int u : child[v]) sub[v] += sub[u];
    if (order == PlanarOrder::canonical) {
      if (child[v].empty()) {
        key[v] = "l" + rat_to_string(atom(v)) + ":" + rat_to_string(arc(v));
      } else {
        std::vector<std::string> parts;
        for (int u : child[v]) parts.push_back(key[u]);
        std::sort(parts.begin(), parts.end());
        key[v] = "(";
        for (const auto& p : parts) key[v] += p + ",";
        key[v] += ")";
      }
    }
  }
  auto ordered = [&](int v) {
    auto ch = child[v];
    switch (order) {
      case PlanarOrder::canonical:
        std::sort(ch.begin(), ch.end(), [&](int a, int b) {
          if (key[a] != key[b]) return key[a] < key[b];
          if (sub[a] != sub[b]) return sub[a] < sub[b];
          return a < b;
        });
        break;
      case PlanarOrder::by_index:
        std::sort(ch.begin(), ch.end());
        break;
      case PlanarOrder::reversed:
        std::sort(ch.begin(), ch.end(), std::greater<>());
        break;
    }
    return ch;
  };

  // Lay the mass around the circle: every vertex is preceded by the diffuse
  // mass of its pendant edge, every branch spans the block of its two
  // subtrees, every atom spans a chord.
  Rat pos(0);
  std::vector<std::array<Rat, 3>> tri_pos;
  std::vector<std::pair<Rat, Rat>> seg_pos;
  if (atom(root) > 0) {
    seg_pos.push_back({Rat(0), atom(root)});
    pos += atom(root);
  }
  pos += arc(root);
  auto emit = [&](auto&& self, int v) -> void {
    if (child[v].empty()) {
      pos += arc(v);
      if (atom(v) > 0) {
        seg_pos.push_back({pos, pos + atom(v)});
        pos += atom(v);
      }
      return;
    }
    auto ch = ordered(v);
    tri_pos.push_back({pos, pos + sub[ch[0]], pos + sub[ch[0]] + sub[ch[1]]});
    self(self, ch[0]);
    self(self, ch[1]);
  };
  emit(emit, child[root].front());
  if (pos != 1) throw std::logic_error("decode: mass layout does not close");

  auto wrap = [](const Rat& r) { return r >= 1 ? r - 1 : r; };
  std::map<Rat, int> index;
  for (const auto& t : tri_pos)
    for (const auto& r : t) index[wrap(r)] = 0;
  for (const auto& s : seg_pos) {
    index[wrap(s.first)] = 0;
    index[wrap(s.second)] = 0;
  }
  FiniteSubTriangulation out;
  for (auto& [r, id] : index) {
    id = static_cast<int>(out.boundary.size());
    out.boundary.push_back(r);
  }
  for (const auto& t : tri_pos) {
    std::array<int, 3> tri{index[wrap(t[0])], index[wrap(t[1])], index[wrap(t[2])]};
    std::sort(tri.begin(), tri.end());
    out.triangles.push_back(tri);
  }
  for (const auto& s : seg_pos)
    out.segments.push_back({index[wrap(s.first)], index[wrap(s.second)]});
  std::sort(out.triangles.begin(), out.triangles.end());
  std::sort(out.segments.begin(), out.segments.end());
  return out;
}

double hausdorff_distance(const FiniteSubTriangulation& a,
                          const FiniteSubTriangulation& b, double tol) {
  if (!(tol > 0)) throw ValidationError("hausdorff_distance: tol must be positive");
  ValidationReport ra = validate(a), rb = validate(b);
  if (!ra.valid)
    throw ValidationError("hausdorff_distance: invalid first picture: " +
                          ra.violations.front());
  if (!rb.valid)
    throw ValidationError("hausdorff_distance: invalid second picture: " +
                          rb.violations.front());
  auto ea = drawn_elements(a), eb = drawn_elements(b);
  return std::max(directed_hausdorff(ea, eb, tol), directed_hausdorff(eb, ea, tol));
}

FiniteSubTriangulation uniform_triangulation(int n, std::uint64_t seed) {
  if (n < 3) throw ValidationError("uniform_triangulation requires n >= 3");
  FiniteSubTriangulation out;
  for (int i = 0; i < n; ++i) out.boundary.push_back(Rat(i, n));

  std::vector<Int> cat(n - 1);
  cat[0] = 1;
  for (int k = 0; k + 1 < n - 1; ++k)
    cat[k + 1] = cat[k] * (2 * (2 * k + 1)) / (k + 2);

  // Apex of the triangle on the base chord (a, b), drawn with probability
  // proportional to the count of triangulations either side; recursing on
  // both sides makes the full triangulation uniform.
  SplitRng rng(seed);
  auto build = [&](auto&& self, int a, int b) -> void {
    if (b - a < 2) return;
    Int draw = rng.uniform_big(cat[b - a - 1]);
    Int acc = 0;
    int c = a;
    do {
      ++c;
      acc += cat[c - a - 1] * cat[b - c - 1];
    } while (acc <= draw);
    out.triangles.push_back({a, c, b});
    self(self, a, c);
    self(self, c, b);
  };
  build(build, 0, n - 1);
  std::sort(out.triangles.begin(), out.triangles.end());
  return out;
}

}  // namespace amt
