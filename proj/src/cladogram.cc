#include "amt/cladogram.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace amt {

namespace {

std::string label_token(const std::vector<int>& labels) {
  std::string s = "{";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(labels[i]);
  }
  return s + "}";
}

}  // namespace

std::string Cladogram::canonical_key() const {
  auto code = [&](auto&& self, int v, int parent) -> std::string {
    std::vector<std::string> kids;
    for (int u : tree.neighbors(v))
      if (u != parent) kids.push_back(self(self, u, v));
    std::sort(kids.begin(), kids.end());
    std::string s = "(" + label_token(labels[v]);
    for (const std::string& k : kids) s += k;
    return s + ")";
  };
  std::string best;
  for (int c : centroids(tree)) {
    std::string s = code(code, c, -1);
    if (best.empty() || s < best) best = s;
  }
  return best;
}

Cladogram shape(const MeasureTree& mt, const std::vector<SamplePoint>& points) {
  const AlgebraicTree& t = mt.tree();
  if (points.empty()) throw ValidationError("shape needs at least one sample point");
  for (const SamplePoint& p : points) {
    if (p.kind == SamplePoint::Kind::vertex) {
      if (p.id < 0 || p.id >= t.size())
        throw ValidationError("shape: vertex sample out of range");
      if (t.degree(p.id) >= 3)
        throw ValidationError("shape is undefined for a sample at a branch point");
    } else {
      if (t.size() < 2 || p.id < 0 || p.id >= t.size() || t.degree(p.id) > 1)
        throw ValidationError("shape: arc sample must sit on a leaf edge");
      if (!(p.u > 0.0 && p.u < 1.0))
        throw ValidationError("shape: arc position must lie strictly inside (0,1)");
    }
  }

  // Coincident samples share one node; labels are 1-based sample indices.
  std::map<SamplePoint, std::vector<int>> groups;
  for (std::size_t i = 0; i < points.size(); ++i)
    groups[points[i]].push_back(static_cast<int>(i) + 1);

  auto less = [&](const SamplePoint& a, const SamplePoint& b) {
    return point_preorder_less(t, a, b);
  };
  std::vector<SamplePoint> closure;
  closure.reserve(2 * groups.size());
  for (const auto& [p, ls] : groups) closure.push_back(p);
  std::sort(closure.begin(), closure.end(), less);
  const std::size_t distinct = closure.size();
  for (std::size_t i = 0; i + 1 < distinct; ++i)
    closure.push_back(point_meet(t, closure[i], closure[i + 1]));
  std::sort(closure.begin(), closure.end(), less);
  closure.erase(std::unique(closure.begin(), closure.end()), closure.end());

  // Spanning subtree over the closure: in preorder, each node hangs off the
  // nearest ancestor still on the stack. closure[0] is the overall meet.
  const int k = static_cast<int>(closure.size());
  std::vector<int> parent(k, -1), nchild(k, 0), stack;
  for (int i = 0; i < k; ++i) {
    while (!stack.empty() && !point_is_ancestor(t, closure[stack.back()], closure[i]))
      stack.pop_back();
    if (!stack.empty()) {
      parent[i] = stack.back();
      ++nchild[parent[i]];
    }
    stack.push_back(i);
  }

  // Emit the shape: an interior sample becomes a pendant leaf next to a new
  // structural vertex; an unlabelled junction keeps its degree (> 3 is not a
  // binary shape); the one unlabelled degree-2 case is the overall meet of
  // two arms, which is smoothed out.
  int next = 0, smoothed = -1;
  std::vector<int> sid(k, -1);
  std::vector<std::vector<int>> out_labels;
  std::vector<std::pair<int, int>> out_edges;
  for (int i = 0; i < k; ++i) {
    const int deg = nchild[i] + (parent[i] >= 0 ? 1 : 0);
    auto it = groups.find(closure[i]);
    const bool labelled = it != groups.end();
    if (!labelled && deg > 3)
      throw ValidationError("shape: samples span a vertex of degree > 3, not a binary shape");
    if (labelled && deg > 2)
      throw std::logic_error("shape: labelled junction slipped past the branch-point check");
    if (!labelled && deg < 2)
      throw std::logic_error("shape: spanning-subtree node is neither sample nor junction");
    if (!labelled && deg == 2) {  // only the root can be such a node
      smoothed = i;
      continue;
    }
    sid[i] = next++;
    out_labels.emplace_back();
    if (labelled) {
      if (deg == 2) {  // sample interior to the span: pendant leaf
        out_edges.emplace_back(sid[i], next++);
        out_labels.push_back(it->second);
      } else {
        out_labels.back() = it->second;
      }
    }
  }
  for (int i = 1; i < k; ++i)
    if (parent[i] != smoothed) out_edges.emplace_back(sid[parent[i]], sid[i]);
  if (smoothed >= 0) {
    int a = -1, b = -1;
    for (int i = 1; i < k; ++i)
      if (parent[i] == smoothed) (a < 0 ? a : b) = i;
    out_edges.emplace_back(sid[a], sid[b]);
  }
  return Cladogram{AlgebraicTree::from_edges(out_edges, next), std::move(out_labels)};
}

Int count_cladograms(int m) {
  if (m < 1) throw ValidationError("count_cladograms needs m >= 1");
  Int r = 1;
  for (int j = 3; j <= m; ++j) r *= 2 * j - 5;
  return r;
}

std::map<std::string, double> ShapeDistribution::probabilities() const {
  std::map<std::string, double> p;
  if (exact) {
    for (const auto& [key, w] : weight) p[key] = rat_to_double(w);
  } else {
    for (const auto& [key, c] : tally) p[key] = double(c) / double(sample_size);
  }
  return p;
}

ShapeDistribution shape_distribution_exact(const MeasureTree& mt, int m) {
  if (m < 1 || m > 6)
    throw ValidationError("exact shape distribution supports 1 <= m <= 6");
  if (mt.has_arc_mass())
    throw ValidationError("exact shape distribution requires a fully atomic mass");
  std::vector<int> support;
  for (int v = 0; v < mt.size(); ++v)
    if (mt.atom(v) > 0) support.push_back(v);
  if (support.size() > 12)
    throw ValidationError("exact shape distribution supports at most 12 atoms");

  ShapeDistribution out;
  out.m = m;
  out.exact = true;
  const int s = static_cast<int>(support.size());
  std::vector<int> idx(m, 0);
  std::vector<SamplePoint> pts(m);
  while (true) {
    Rat p = 1;
    for (int j = 0; j < m; ++j) {
      pts[j] = SamplePoint::at_vertex(support[idx[j]]);
      p *= mt.atom(support[idx[j]]);
    }
    Cladogram c = shape(mt, pts);
    std::string key = c.canonical_key();
    out.weight[key] += p;
    out.example.emplace(std::move(key), std::move(c));
    int j = m - 1;
    while (j >= 0 && ++idx[j] == s) idx[j--] = 0;
    if (j < 0) break;
  }
  return out;
}

ShapeDistribution shape_distribution_sampled(const MeasureTree& mt, int m,
                                             std::uint64_t n, std::uint64_t seed,
                                             int threads) {
  if (m < 1) throw ValidationError("sampled shape distribution needs m >= 1");
  if (n == 0) throw ValidationError("sampled shape distribution needs n >= 1");

  // Replica i draws from substream (seed, i); witnesses keep the lowest
  // replica index, so any thread partition produces the same result.
  struct Part {
    std::map<std::string, std::uint64_t> tally;
    std::map<std::string, std::pair<std::uint64_t, Cladogram>> witness;
  };
  const SplitRng base(seed);
  auto run = [&](std::uint64_t lo, std::uint64_t hi) {
    Part part;
    for (std::uint64_t i = lo; i < hi; ++i) {
      SplitRng rng = base.split(i);
      Cladogram c = shape(mt, mt.draw_points(m, rng));
      std::string key = c.canonical_key();
      ++part.tally[key];
      part.witness.emplace(std::move(key), std::make_pair(i, std::move(c)));
    }
    return part;
  };

  ShapeDistribution out;
  out.m = m;
  out.sample_size = n;
  out.seed = seed;
  std::map<std::string, std::pair<std::uint64_t, Cladogram>> witness;
  auto merge = [&](Part part) {
    for (const auto& [key, c] : part.tally) out.tally[key] += c;
    for (auto& [key, w] : part.witness) {
      auto it = witness.find(key);
      if (it == witness.end())
        witness.emplace(key, std::move(w));
      else if (w.first < it->second.first)
        it->second = std::move(w);
    }
  };

  const std::uint64_t workers =
      std::min<std::uint64_t>(threads < 1 ? 1 : threads, n);
  if (workers <= 1) {
    merge(run(0, n));
  } else {
    std::vector<std::future<Part>> jobs;
    for (std::uint64_t w = 0; w < workers; ++w) {
      const std::uint64_t lo = n * w / workers, hi = n * (w + 1) / workers;
      jobs.push_back(std::async(std::launch::async, run, lo, hi));
    }
    for (auto& job : jobs) merge(job.get());
  }
  for (auto& [key, w] : witness) out.example.emplace(key, std::move(w.second));
  return out;
}

double tv_distance(const ShapeDistribution& a, const ShapeDistribution& b) {
  if (a.m != b.m)
    throw ValidationError("total variation needs shape distributions over the same m");
  const auto pa = a.probabilities(), pb = b.probabilities();
  double sum = 0;
  for (const auto& [key, p] : pa) {
    auto it = pb.find(key);
    sum += std::abs(p - (it == pb.end() ? 0.0 : it->second));
  }
  for (const auto& [key, q] : pb)
    if (!pa.count(key)) sum += q;
  return sum / 2;
}

}  // namespace amt
