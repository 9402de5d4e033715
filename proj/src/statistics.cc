#include "amt/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <queue>
#include <string>
#include <utility>

namespace amt {
namespace {

void check_point(const AlgebraicTree& t, const SamplePoint& p, const char* who) {
  if (p.kind == SamplePoint::Kind::vertex) {
    if (p.id < 0 || p.id >= t.size())
      throw ValidationError(std::string(who) + ": vertex sample out of range");
  } else {
    if (t.size() < 2 || p.id < 0 || p.id >= t.size() || t.degree(p.id) > 1)
      throw ValidationError(std::string(who) + ": arc sample must sit on a leaf edge");
    if (!(p.u > 0.0 && p.u < 1.0))
      throw ValidationError(std::string(who) + ": arc position must lie strictly inside (0,1)");
  }
}

/** Geometric equality of two points. Arc coordinates run toward the chart's
    leaf, so on a two-vertex tree the two charts describe the one edge in
    opposite directions and positions u and 1-u coincide. */
bool same_point(const AlgebraicTree& t, const SamplePoint& a, const SamplePoint& b) {
  if (a == b) return true;
  if (a.kind != SamplePoint::Kind::arc || b.kind != SamplePoint::Kind::arc) return false;
  if (a.id == b.id) return false;
  if (t.neighbors(a.id).front() != b.id) return false;  // not the same edge
  return Rat(a.u) + Rat(b.u) == 1;
}

/** Mass of the open component of the complement of c that contains u.
    Requires that u and c are geometrically distinct. */
Rat side_mass(const MeasureTree& mt, const SamplePoint& c, const SamplePoint& u) {
  const AlgebraicTree& t = mt.tree();
  if (c.kind == SamplePoint::Kind::vertex) {
    if (u.kind == SamplePoint::Kind::vertex) return mt.component_mass(c.id, u.id);
    // u lies inside a leaf edge; pick the endpoint that survives the cut.
    const int leaf = u.id, attach = t.neighbors(leaf).front();
    return mt.component_mass(c.id, c.id == leaf ? attach : leaf);
  }
  // c splits a leaf edge at an exact dyadic position s (coordinates approach
  // the chart's leaf at 1). The leaf-side piece keeps the leaf atom plus the
  // (1-s)-fraction of the edge's uniform diffuse mass.
  const int leaf = c.id, attach = t.neighbors(leaf).front();
  const Rat s(c.u);
  const Rat edge = mt.edge_diffuse_mass(leaf != 0 ? leaf : attach);
  const Rat leaf_side = mt.atom(leaf) + edge * (Rat(1) - s);
  bool on_leaf_side;
  if (u.kind == SamplePoint::Kind::vertex) {
    on_leaf_side = u.id == leaf;
  } else if (u.id == leaf) {
    on_leaf_side = Rat(u.u) > s;
  } else if (u.id == attach) {  // opposite chart of the same two-vertex edge
    on_leaf_side = Rat(1) - Rat(u.u) > s;
  } else {
    on_leaf_side = false;  // a different edge connects through the attachment
  }
  return on_leaf_side ? leaf_side : Rat(1) - leaf_side;
}

/** Tensor entry for sample u at branch point c: the closed component keeps
    c's own atom, and a sample sitting at c contributes just that atom. */
Rat closed_entry(const MeasureTree& mt, const SamplePoint& c, const SamplePoint& u) {
  Rat e = same_point(mt.tree(), c, u) ? Rat(0) : side_mass(mt, c, u);
  if (c.kind == SamplePoint::Kind::vertex) e += mt.atom(c.id);
  return e;
}

std::vector<int> atom_support(const MeasureTree& mt) {
  std::vector<int> support;
  for (int v = 0; v < mt.size(); ++v)
    if (mt.atom(v) > 0) support.push_back(v);
  return support;
}

/** Shared replica-parallel driver: runs chunks of [0, n) on `threads` workers
    and merges partial results in ascending chunk order. */
template <class Part, class Run, class Merge>
void run_replicas(std::uint64_t n, int threads, const Run& run, const Merge& merge) {
  const std::uint64_t workers = std::min<std::uint64_t>(threads < 1 ? 1 : threads, n);
  if (workers <= 1) {
    merge(run(0, n));
    return;
  }
  std::vector<std::future<Part>> jobs;
  for (std::uint64_t w = 0; w < workers; ++w) {
    const std::uint64_t lo = n * w / workers, hi = n * (w + 1) / workers;
    jobs.push_back(std::async(std::launch::async, [&run, lo, hi] { return run(lo, hi); }));
  }
  for (auto& job : jobs) merge(job.get());
}

int checked_point_count(std::uint64_t n, const char* who) {
  if (n == 0) throw ValidationError(std::string(who) + " needs at least one sample");
  if (n > std::uint64_t(std::numeric_limits<int>::max()) / 3)
    throw ValidationError(std::string(who) + ": sample size is too large");
  return static_cast<int>(n);
}

}  // namespace

Rat eta(const MeasureTree& mt, SamplePoint u, SamplePoint v, SamplePoint w) {
  const AlgebraicTree& t = mt.tree();
  check_point(t, u, "eta");
  check_point(t, v, "eta");
  check_point(t, w, "eta");
  const SamplePoint c = branch_point_of(t, u, v, w);
  if (same_point(t, u, c)) return 0;
  return side_mass(mt, c, u);
}

std::vector<Rat> MassTensor::flat() const {
  std::vector<Rat> out;
  out.reserve(entries.size() * 3);
  for (const auto& e : entries) out.insert(out.end(), e.begin(), e.end());
  return out;
}

MassTensor mass_tensor(const MeasureTree& mt, const std::vector<SamplePoint>& points) {
  const AlgebraicTree& t = mt.tree();
  for (const SamplePoint& p : points) check_point(t, p, "mass_tensor");
  MassTensor out;
  out.m = static_cast<int>(points.size());
  for (int i = 0; i < out.m; ++i)
    for (int j = i + 1; j < out.m; ++j)
      for (int k = j + 1; k < out.m; ++k) {
        const SamplePoint c = branch_point_of(t, points[i], points[j], points[k]);
        out.entries.push_back({closed_entry(mt, c, points[i]), closed_entry(mt, c, points[j]),
                               closed_entry(mt, c, points[k])});
      }
  return out;
}

std::vector<std::pair<std::vector<double>, double>> TensorDistribution::points() const {
  std::vector<std::pair<std::vector<double>, double>> out;
  auto lower = [](const std::vector<Rat>& key) {
    std::vector<double> x(key.size());
    std::transform(key.begin(), key.end(), x.begin(), rat_to_double);
    return x;
  };
  if (exact) {
    for (const auto& [key, w] : weight) out.emplace_back(lower(key), rat_to_double(w));
  } else {
    for (const auto& [key, c] : tally)
      out.emplace_back(lower(key), double(c) / double(sample_size));
  }
  return out;
}

TensorDistribution massdist_exact(const MeasureTree& mt, int m) {
  if (m < 1 || m > 6)
    throw ValidationError("exact tensor distribution supports 1 <= m <= 6");
  if (mt.has_arc_mass())
    throw ValidationError("exact tensor distribution requires a fully atomic mass");
  const std::vector<int> support = atom_support(mt);
  const int s = static_cast<int>(support.size());
  if (s > 12) throw ValidationError("exact tensor distribution supports at most 12 atoms");

  // Closed component masses for every ordered support triple, found once.
  const AlgebraicTree& t = mt.tree();
  std::vector<std::array<Rat, 3>> triple(std::size_t(s) * s * s);
  for (int a = 0; a < s; ++a)
    for (int b = 0; b < s; ++b)
      for (int c = 0; c < s; ++c) {
        const int va = support[a], vb = support[b], vc = support[c];
        const int j = t.branch_point(va, vb, vc);
        auto entry = [&](int v) {
          return (v == j ? Rat(0) : mt.component_mass(j, v)) + mt.atom(j);
        };
        triple[(std::size_t(a) * s + b) * s + c] = {entry(va), entry(vb), entry(vc)};
      }

  TensorDistribution out;
  out.m = m;
  out.exact = true;
  std::vector<int> idx(m, 0);
  std::vector<Rat> key;
  for (;;) {
    Rat w = 1;
    for (int i : idx) w *= mt.atom(support[i]);
    key.clear();
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j)
        for (int k = j + 1; k < m; ++k) {
          const auto& e = triple[(std::size_t(idx[i]) * s + idx[j]) * s + idx[k]];
          key.insert(key.end(), e.begin(), e.end());
        }
    out.weight[key] += w;
    int pos = m - 1;
    while (pos >= 0 && ++idx[pos] == s) idx[pos--] = 0;
    if (pos < 0) break;
  }
  return out;
}

TensorDistribution massdist_sampled(const MeasureTree& mt, int m, std::uint64_t N,
                                    std::uint64_t seed, int threads) {
  if (m < 1) throw ValidationError("sampled tensor distribution needs m >= 1");
  if (N == 0) throw ValidationError("sampled tensor distribution needs at least one sample");

  using Part = std::map<std::vector<Rat>, std::uint64_t>;
  const SplitRng base(seed);
  auto run = [&](std::uint64_t lo, std::uint64_t hi) {
    Part part;
    for (std::uint64_t i = lo; i < hi; ++i) {
      SplitRng rng = base.split(i);
      ++part[mass_tensor(mt, mt.draw_points(m, rng)).flat()];
    }
    return part;
  };

  TensorDistribution out;
  out.m = m;
  out.exact = false;
  out.sample_size = N;
  out.seed = seed;
  run_replicas<Part>(N, threads, run, [&](Part part) {
    for (auto& [key, c] : part) out.tally[key] += c;
  });
  return out;
}

BranchPointSample empirical_bpd(const MeasureTree& mt, std::uint64_t n, std::uint64_t seed) {
  const int count = checked_point_count(n, "empirical branch-point distribution");
  BranchPointSample out;
  out.n = n;
  out.seed = seed;
  SplitRng rng(seed);
  const std::vector<SamplePoint> pts = mt.draw_points(3 * count, rng);
  for (int k = 0; k < count; ++k)
    ++out.count[branch_point_of(mt.tree(), pts[3 * k], pts[3 * k + 1], pts[3 * k + 2])];
  return out;
}

double distance_polynomial_exact(const MeasureTree& mt, int m, const MatrixFunction& phi) {
  if (m < 1) throw ValidationError("distance polynomial needs m >= 1");
  if (!phi.value) throw ValidationError("distance polynomial needs a test function");
  if (mt.has_arc_mass())
    throw ValidationError("exact distance polynomial requires a fully atomic mass");
  const std::vector<int> support = atom_support(mt);
  const int s = static_cast<int>(support.size());
  double tuples = 1;
  for (int i = 0; i < m; ++i) tuples *= s;
  if (tuples > 4e6)
    throw ValidationError("exact distance polynomial: support^m exceeds the budget");

  std::vector<std::vector<double>> r(s, std::vector<double>(s));
  for (int a = 0; a < s; ++a)
    for (int b = 0; b < s; ++b) r[a][b] = rat_to_double(mt.r_nu(support[a], support[b]));
  std::vector<double> mass(s);
  for (int a = 0; a < s; ++a) mass[a] = rat_to_double(mt.atom(support[a]));

  std::vector<int> idx(m, 0);
  std::vector<std::vector<double>> matrix(m, std::vector<double>(m, 0));
  double value = 0;
  for (;;) {
    double w = 1;
    for (int i : idx) w *= mass[i];
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) matrix[i][j] = r[idx[i]][idx[j]];
    value += w * phi.value(matrix);
    int pos = m - 1;
    while (pos >= 0 && ++idx[pos] == s) idx[pos--] = 0;
    if (pos < 0) break;
  }
  return value;
}

PolynomialEstimate distance_polynomial_empirical(const MeasureTree& mt, int m,
                                                 const MatrixFunction& phi, std::uint64_t n,
                                                 std::uint64_t N, std::uint64_t seed,
                                                 int threads) {
  if (m < 1) throw ValidationError("distance polynomial needs m >= 1");
  if (!phi.value) throw ValidationError("distance polynomial needs a test function");
  if (mt.has_arc_mass())
    throw ValidationError("empirical distance polynomial requires a fully atomic mass");
  if (N == 0) throw ValidationError("empirical distance polynomial needs replicas");
  const int count = checked_point_count(n, "empirical distance polynomial");
  if (std::uint64_t(3) * count < std::uint64_t(m))
    throw ValidationError("empirical distance polynomial needs 3n >= m");

  const AlgebraicTree& t = mt.tree();
  const int V = t.size();
  // The exact branch-point distribution and its pair intervals, against which
  // each replica's empirical counterpart is compared entry by entry.
  std::vector<Rat> nu_pair(std::size_t(V) * V);
  std::vector<std::vector<double>> r_exact(V, std::vector<double>(V));
  for (int x = 0; x < V; ++x)
    for (int y = 0; y < V; ++y) {
      nu_pair[std::size_t(x) * V + y] = mt.nu_interval(x, y);
      r_exact[x][y] = rat_to_double(mt.r_nu(x, y));
    }

  const SplitRng base(seed);
  struct Part {
    std::uint64_t lo = 0;
    std::vector<PolynomialTrial> trials;
  };
  auto run = [&](std::uint64_t lo, std::uint64_t hi) {
    Part part;
    part.lo = lo;
    std::vector<std::uint64_t> cnt(V), path(V);
    std::vector<std::vector<double>> mn(m, std::vector<double>(m, 0)),
        mx(m, std::vector<double>(m, 0));
    for (std::uint64_t rep = lo; rep < hi; ++rep) {
      SplitRng rng = base.split(rep);
      const std::vector<SamplePoint> pts = mt.draw_points(3 * count, rng);
      std::fill(cnt.begin(), cnt.end(), 0);
      for (int k = 0; k < count; ++k)
        ++cnt[t.branch_point(pts[3 * k].id, pts[3 * k + 1].id, pts[3 * k + 2].id)];
      // Count prefix sums along root paths turn interval counts into an
      // O(1)-per-pair lookup via the lowest common ancestor.
      for (int i = 0; i < V; ++i) {
        const int v = t.vertex_at_preorder(i);
        path[v] = (v == 0 ? 0 : path[t.parent(v)]) + cnt[v];
      }
      auto pair_count = [&](int x, int y) {
        const int l = t.lca(x, y);
        return path[x] + path[y] - 2 * path[l] + cnt[l];
      };
      PolynomialTrial trial;
      Rat dev = 0;
      for (int x = 0; x < V; ++x)
        for (int y = x; y < V; ++y) {
          const Rat d = nu_pair[std::size_t(x) * V + y] - Rat(pair_count(x, y), count);
          const Rat a = d < 0 ? -d : d;
          if (a > dev) dev = a;
        }
      trial.sup_deviation = rat_to_double(dev);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          if (i == j) continue;
          const int x = pts[i].id, y = pts[j].id;
          mn[i][j] = (double(pair_count(x, y)) - 0.5 * double(cnt[x]) - 0.5 * double(cnt[y])) /
                     double(count);
          mx[i][j] = r_exact[x][y];
        }
      trial.value = phi.value(mn);
      trial.coupled_value = phi.value(mx);
      part.trials.push_back(trial);
    }
    return part;
  };

  PolynomialEstimate out;
  out.m = m;
  out.triples = n;
  out.replicas = N;
  out.seed = seed;
  out.trials.resize(N);
  run_replicas<Part>(N, threads, run, [&](Part part) {
    std::copy(part.trials.begin(), part.trials.end(), out.trials.begin() + part.lo);
  });
  for (const PolynomialTrial& trial : out.trials) out.mean += trial.value;
  out.mean /= double(N);
  return out;
}

ShatterReport vc_shatter_check(const AlgebraicTree& tree, SetFamily family, int k) {
  const int V = tree.size();
  if (k < 1) throw ValidationError("shattering check needs k >= 1");
  if (V > 64) throw ValidationError("shattering check supports at most 64 vertices");
  double subsets = 1;
  for (int i = 0; i < k; ++i) subsets = subsets * (V - i) / (i + 1);
  if (subsets > 5e6) throw ValidationError("shattering check: too many k-subsets");

  // Every set of the family as a vertex bitmask, deduplicated.
  std::vector<std::uint64_t> masks;
  if (family == SetFamily::intervals) {
    for (int x = 0; x < V; ++x)
      for (int y = x; y < V; ++y) {
        std::uint64_t mask = 0;
        for (int w = 0; w < V; ++w)
          if (tree.on_path(w, x, y)) mask |= std::uint64_t(1) << w;
        masks.push_back(mask);
      }
  } else {
    for (int v = 0; v < V; ++v) {
      masks.push_back(std::uint64_t(1) << v);  // the singleton {v}
      for (int dir : tree.neighbors(v)) {
        std::uint64_t mask = 0;
        for (int w : tree.component(v, dir)) mask |= std::uint64_t(1) << w;
        masks.push_back(mask);
      }
    }
  }
  std::sort(masks.begin(), masks.end());
  masks.erase(std::unique(masks.begin(), masks.end()), masks.end());

  ShatterReport report;
  if (k > V || masks.size() < (std::size_t(1) << k)) return report;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  std::vector<std::uint64_t> stamp(std::size_t(1) << k, 0);
  std::uint64_t generation = 0;
  for (;;) {
    ++generation;
    std::size_t seen = 0;
    for (std::uint64_t mask : masks) {
      std::size_t pattern = 0;
      for (int j = 0; j < k; ++j) pattern |= ((mask >> idx[j]) & 1) << j;
      if (stamp[pattern] != generation) {
        stamp[pattern] = generation;
        if (++seen == (std::size_t(1) << k)) {
          report.shattered = true;
          report.witness = idx;
          return report;
        }
      }
    }
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == V - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int j = pos + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return report;
}

double DeviationReport::mean_sup() const {
  double total = 0;
  for (double s : sup) total += s;
  return sup.empty() ? 0 : total / double(sup.size());
}

DeviationReport glivenko_cantelli_sup(const MeasureTree& mt, SetFamily family, std::uint64_t n,
                                      int trials, std::uint64_t seed, int threads) {
  if (trials < 1) throw ValidationError("uniform deviation needs at least one trial");
  const int count = checked_point_count(n, "uniform deviation");

  const AlgebraicTree& t = mt.tree();
  const int V = t.size();
  // Exact set masses. Rooted prefix sums handle intervals; components reuse
  // the cut-mass query. Diffuse mass of the edge above v is charged to v.
  std::vector<Rat> edge_above(V, Rat(0));
  for (int v = 1; v < V; ++v) edge_above[v] = mt.edge_diffuse_mass(v);
  std::vector<Rat> atom_prefix(V), edge_prefix(V);
  for (int i = 0; i < V; ++i) {
    const int v = t.vertex_at_preorder(i);
    atom_prefix[v] = (v == 0 ? Rat(0) : atom_prefix[t.parent(v)]) + mt.atom(v);
    edge_prefix[v] = (v == 0 ? Rat(0) : edge_prefix[t.parent(v)]) + edge_above[v];
  }
  struct Set {
    int x = 0, y = 0;  // interval endpoints, or (vertex, direction); y < 0 marks {x}
    Rat mass;
  };
  std::vector<Set> sets;
  if (family == SetFamily::intervals) {
    for (int x = 0; x < V; ++x)
      for (int y = x; y < V; ++y) {
        const int l = t.lca(x, y);
        Set s{x, y, atom_prefix[x] + atom_prefix[y] - 2 * atom_prefix[l] + mt.atom(l) +
                        edge_prefix[x] + edge_prefix[y] - 2 * edge_prefix[l]};
        sets.push_back(std::move(s));
      }
  } else {
    for (int v = 0; v < V; ++v) {
      sets.push_back({v, -1, mt.atom(v)});
      for (int dir : t.neighbors(v)) sets.push_back({v, dir, mt.component_mass(v, dir)});
    }
  }

  const SplitRng base(seed);
  struct Part {
    std::uint64_t lo = 0;
    std::vector<double> sup;
  };
  auto run = [&](std::uint64_t lo, std::uint64_t hi) {
    Part part;
    part.lo = lo;
    std::vector<std::uint64_t> vertex_cnt(V), arc_cnt(V), prefix(V), subtree(V);
    for (std::uint64_t trial = lo; trial < hi; ++trial) {
      SplitRng rng = base.split(trial);
      const std::vector<SamplePoint> pts = mt.draw_points(count, rng);
      std::fill(vertex_cnt.begin(), vertex_cnt.end(), 0);
      std::fill(arc_cnt.begin(), arc_cnt.end(), 0);
      for (const SamplePoint& p : pts) {
        if (p.kind == SamplePoint::Kind::vertex) {
          ++vertex_cnt[p.id];
        } else {
          ++arc_cnt[p.id != 0 ? p.id : t.neighbors(0).front()];
        }
      }
      for (int i = 0; i < V; ++i) {
        const int v = t.vertex_at_preorder(i);
        prefix[v] = (v == 0 ? 0 : prefix[t.parent(v)]) + vertex_cnt[v] + arc_cnt[v];
      }
      for (int i = V - 1; i >= 0; --i) {
        const int v = t.vertex_at_preorder(i);
        subtree[v] = vertex_cnt[v] + arc_cnt[v];
        for (int c : t.neighbors(v))
          if (c != 0 && t.parent(c) == v) subtree[v] += subtree[c];
      }
      Rat dev = 0;
      auto consider = [&](const Rat& mass, std::uint64_t hits) {
        const Rat d = mass - Rat(hits, count);
        const Rat a = d < 0 ? -d : d;
        if (a > dev) dev = a;
      };
      for (const Set& s : sets) {
        std::uint64_t hits;
        if (family == SetFamily::intervals) {
          // Interval hits: vertex samples on the path plus arc samples whose
          // edge lies on it; the edge above the meet is outside the interval.
          const int l = t.lca(s.x, s.y);
          hits = prefix[s.x] + prefix[s.y] - 2 * prefix[l] + vertex_cnt[l];
        } else if (s.y < 0) {
          hits = vertex_cnt[s.x];
        } else if (s.y != 0 && t.parent(s.y) == s.x) {
          hits = subtree[s.y];
        } else {
          hits = std::uint64_t(count) - subtree[s.x] + arc_cnt[s.x];
        }
        consider(s.mass, hits);
      }
      part.sup.push_back(rat_to_double(dev));
    }
    return part;
  };

  DeviationReport out;
  out.family = family;
  out.dimension = family == SetFamily::intervals ? 2 : 3;
  out.n = n;
  out.trials = trials;
  out.seed = seed;
  out.bound = 96.0 * std::sqrt(double(out.dimension) / double(n));
  out.sup.resize(trials);
  run_replicas<Part>(std::uint64_t(trials), threads, run, [&](Part part) {
    std::copy(part.sup.begin(), part.sup.end(), out.sup.begin() + part.lo);
  });
  return out;
}

namespace {

struct WeightedSupport {
  std::vector<std::vector<double>> point;
  std::vector<Rat> weight;
};

WeightedSupport gather(const TensorDistribution& d, const char* side) {
  WeightedSupport out;
  auto lower = [](const std::vector<Rat>& key) {
    std::vector<double> x(key.size());
    std::transform(key.begin(), key.end(), x.begin(), rat_to_double);
    return x;
  };
  if (d.exact) {
    for (const auto& [key, w] : d.weight) {
      if (w == 0) continue;
      out.point.push_back(lower(key));
      out.weight.push_back(w);
    }
  } else {
    if (d.sample_size == 0)
      throw ValidationError(std::string("transport distance: ") + side +
                            " distribution holds no samples");
    for (const auto& [key, c] : d.tally) {
      if (c == 0) continue;
      out.point.push_back(lower(key));
      out.weight.push_back(Rat(c, d.sample_size));
    }
  }
  if (out.point.empty())
    throw ValidationError(std::string("transport distance: ") + side + " distribution is empty");
  Rat total = 0;
  for (const Rat& w : out.weight) total += w;
  if (total != 1)
    throw ValidationError(std::string("transport distance: ") + side +
                          " distribution weights must sum to 1");
  return out;
}

double sup_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

/** Min-cost transshipment by successive shortest paths with potentials.
    Flows are exact integers over the common denominator; costs are doubles. */
double transport_distance(const WeightedSupport& a, const WeightedSupport& b) {
  Int denom = 1;
  for (const Rat& w : a.weight) denom = boost::multiprecision::lcm(denom, denominator(w));
  for (const Rat& w : b.weight) denom = boost::multiprecision::lcm(denom, denominator(w));
  auto scaled = [&](const Rat& w) { return numerator(w) * (denom / denominator(w)); };

  const int A = static_cast<int>(a.point.size()), B = static_cast<int>(b.point.size());
  const int nodes = A + B + 2, source = A + B, sink = A + B + 1;
  struct Arc {
    int to;
    std::size_t rev;
    Int cap;
    double cost;
  };
  std::vector<std::vector<Arc>> graph(nodes);
  auto add = [&](int u, int v, Int cap, double cost) {
    graph[u].push_back({v, graph[v].size(), std::move(cap), cost});
    graph[v].push_back({u, graph[u].size() - 1, 0, -cost});
  };
  for (int i = 0; i < A; ++i) add(source, i, scaled(a.weight[i]), 0);
  for (int j = 0; j < B; ++j) add(A + j, sink, scaled(b.weight[j]), 0);
  for (int i = 0; i < A; ++i)
    for (int j = 0; j < B; ++j) add(i, A + j, denom, sup_distance(a.point[i], b.point[j]));

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> potential(nodes, 0), dist(nodes);
  std::vector<int> from_node(nodes), from_arc(nodes);
  Int pushed = 0;
  while (pushed < denom) {
    std::fill(dist.begin(), dist.end(), inf);
    dist[source] = 0;
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    queue.push({0, source});
    while (!queue.empty()) {
      auto [d, u] = queue.top();
      queue.pop();
      if (d > dist[u]) continue;
      for (std::size_t e = 0; e < graph[u].size(); ++e) {
        const Arc& arc = graph[u][e];
        if (arc.cap == 0) continue;
        const double next = d + std::max(0.0, arc.cost + potential[u] - potential[arc.to]);
        if (next < dist[arc.to]) {
          dist[arc.to] = next;
          from_node[arc.to] = u;
          from_arc[arc.to] = static_cast<int>(e);
          queue.push({next, arc.to});
        }
      }
    }
    if (dist[sink] == inf)
      throw std::logic_error("transport distance: flow network disconnected");
    for (int v = 0; v < nodes; ++v)
      if (dist[v] < inf) potential[v] += dist[v];
    Int bottleneck = denom;
    for (int v = sink; v != source; v = from_node[v])
      bottleneck = std::min(bottleneck, graph[from_node[v]][from_arc[v]].cap);
    for (int v = sink; v != source; v = from_node[v]) {
      Arc& arc = graph[from_node[v]][from_arc[v]];
      arc.cap -= bottleneck;
      graph[arc.to][arc.rev].cap += bottleneck;
    }
    pushed += bottleneck;
  }

  double total = 0;
  for (int i = 0; i < A; ++i)
    for (const Arc& arc : graph[i]) {
      if (arc.to < A || arc.to >= A + B || arc.cost < 0) continue;
      const Int flow = graph[arc.to][arc.rev].cap;
      if (flow != 0) total += rat_to_double(Rat(flow, denom)) * arc.cost;
    }
  return total;
}

/** One-dimensional Wasserstein distance of the sup-norm projections: the
    area between the two exact cumulative distribution functions. */
double projection_distance(const WeightedSupport& a, const WeightedSupport& b) {
  auto project = [](const WeightedSupport& s) {
    std::vector<std::pair<double, Rat>> out;
    for (std::size_t i = 0; i < s.point.size(); ++i) {
      double top = 0;
      for (double x : s.point[i]) top = std::max(top, std::abs(x));
      out.emplace_back(top, s.weight[i]);
    }
    std::sort(out.begin(), out.end(),
              [](const auto& l, const auto& r) { return l.first < r.first; });
    return out;
  };
  const auto pa = project(a), pb = project(b);
  double total = 0, prev = 0;
  Rat cdf_a = 0, cdf_b = 0;
  std::size_t i = 0, j = 0;
  bool started = false;
  while (i < pa.size() || j < pb.size()) {
    const double x = j >= pb.size() || (i < pa.size() && pa[i].first <= pb[j].first)
                         ? pa[i].first
                         : pb[j].first;
    if (started) {
      const Rat gap = cdf_a - cdf_b;
      total += rat_to_double(gap < 0 ? -gap : gap) * (x - prev);
    }
    while (i < pa.size() && pa[i].first == x) cdf_a += pa[i++].second;
    while (j < pb.size() && pb[j].first == x) cdf_b += pb[j++].second;
    prev = x;
    started = true;
  }
  return total;
}

}  // namespace

TransportReport wasserstein_linf(const TensorDistribution& a, const TensorDistribution& b) {
  if (a.m != b.m)
    throw ValidationError("transport distance needs tensor distributions over the same m");
  const WeightedSupport wa = gather(a, "first"), wb = gather(b, "second");
  TransportReport report;
  if (wa.point.size() <= 200 && wb.point.size() <= 200) {
    report.distance = transport_distance(wa, wb);
    report.method = "transport";
  } else {
    report.distance = projection_distance(wa, wb);
    report.method = "projection";
  }
  return report;
}

}  // namespace amt
