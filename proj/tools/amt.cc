#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "amt/cladogram.hpp"
#include "amt/json_io.hpp"
#include "amt/random_trees.hpp"
#include "amt/rational.hpp"
#include "amt/rng.hpp"
#include "amt/statistics.hpp"
#include "amt/tree.hpp"
#include "amt/triangulation.hpp"

namespace {

using amt::AlgebraicTree;
using amt::FiniteSubTriangulation;
using amt::Json;
using amt::MatrixFunction;
using amt::MeasureTree;
using amt::PlanarOrder;
using amt::Rat;
using amt::SetFamily;
using amt::ShapeDistribution;
using amt::SplitRng;
using amt::TensorDistribution;
using amt::ValidationError;

// Scriptable exit codes: usage, input validation, and check-suite outcomes
// are distinguishable without parsing any output.
constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kInvalid = 2;
constexpr int kCheckFail = 3;

/** FNV-1a over the canonical form: a stable short fingerprint for logs. */
std::string hash_hex(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/** "-2", "0.5", "inf"/"infinity" (any case) into the splitting parameter. */
double parse_beta(const std::string& text) {
  std::string low = text;
  std::transform(low.begin(), low.end(), low.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (low == "inf" || low == "infinity") return std::numeric_limits<double>::infinity();
  std::size_t used = 0;
  double value = 0;
  try {
    value = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ValidationError("cannot parse beta value '" + text + "'");
  }
  if (used != text.size()) throw ValidationError("cannot parse beta value '" + text + "'");
  return value;
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/** RFC-4180 quoting; shape keys contain commas and parentheses. */
std::string csv_quote(const std::string& field) {
  std::string out = "\"";
  for (char c : field) {
    out += c;
    if (c == '"') out += '"';
  }
  out += '"';
  return out;
}

void echo_hash(const MeasureTree& mt) {
  std::cout << "canonical-form hash: " << hash_hex(mt.canonical_form()) << "\n";
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out.is_open()) throw ValidationError("cannot open " + path + " for writing");
  return out;
}

MatrixFunction make_phi(const std::string& name) {
  if (name == "mean")
    return {[](const std::vector<std::vector<double>>& d) {
              double sum = 0;
              int m = static_cast<int>(d.size()), pairs = 0;
              for (int i = 0; i < m; ++i)
                for (int j = i + 1; j < m; ++j, ++pairs) sum += d[i][j];
              return pairs ? sum / pairs : 0.0;
            },
            1.0};
  if (name == "max")
    return {[](const std::vector<std::vector<double>>& d) {
              double best = 0;
              for (std::size_t i = 0; i < d.size(); ++i)
                for (std::size_t j = i + 1; j < d.size(); ++j)
                  best = std::max(best, d[i][j]);
              return best;
            },
            1.0};
  throw ValidationError("unknown distance functional '" + name + "'");
}

PlanarOrder parse_order(const std::string& name) {
  if (name == "canonical") return PlanarOrder::canonical;
  if (name == "by-index") return PlanarOrder::by_index;
  if (name == "reversed") return PlanarOrder::reversed;
  throw ValidationError("unknown planar order '" + name + "'");
}

// ---------------------------------------------------------------------------
// gen

struct GenOpts {
  std::string model, beta = "0", out;
  int n = 0, k = 0;
  std::uint64_t seed = 0;
  bool has_seed = false;
};

int run_gen(const GenOpts& o) {
  if (o.model == "beta" && !o.has_seed) {
    std::cerr << "gen --model beta is stochastic and requires --seed\n";
    return kUsage;
  }
  Json config{{"command", "gen"}, {"model", o.model}};
  MeasureTree mt = [&] {
    if (o.model == "beta") {
      config["beta"] = o.beta;
      config["n"] = o.n;
      config["seed"] = o.seed;
      return amt::beta_splitting_tree(o.n, parse_beta(o.beta), o.seed);
    }
    if (o.model == "comb") {
      config["n"] = o.n;
      return amt::comb_tree(o.n);
    }
    config["k"] = o.k;
    return amt::symmetric_binary(o.k);
  }();
  Json doc = amt::measure_tree_to_json(mt);
  doc["config"] = config;
  amt::write_json_file(o.out, doc);
  std::cout << "wrote " << o.out << ": " << mt.size() << " vertices, "
            << mt.tree().leaves().size() << " leaves\n";
  echo_hash(mt);
  return kOk;
}

// ---------------------------------------------------------------------------
// code / decode

struct CodeOpts {
  std::string in, out;
  bool verify = false;
};

int run_code(const CodeOpts& o) {
  FiniteSubTriangulation c = amt::triangulation_from_json(amt::read_json_file(o.in));
  auto rep = amt::validate(c);
  if (!rep.valid) {
    for (const auto& v : rep.violations) std::cerr << "invalid picture: " << v << "\n";
    return kInvalid;
  }
  MeasureTree mt = amt::code(c);
  if (o.verify && !MeasureTree::equivalent(amt::code(amt::decode(mt)), mt)) {
    std::cerr << "round trip through decode failed\n";
    return kInvalid;
  }
  Json doc = amt::measure_tree_to_json(mt);
  doc["config"] = Json{{"command", "code"}, {"in", o.in}, {"verify", o.verify}};
  amt::write_json_file(o.out, doc);
  std::cout << "wrote " << o.out << ": " << mt.size() << " vertices\n";
  if (o.verify) std::cout << "round trip verified\n";
  echo_hash(mt);
  return kOk;
}

struct DecodeOpts {
  std::string in, out, order = "canonical";
  int root = -1;
  bool verify = false;
};

int run_decode(const DecodeOpts& o) {
  MeasureTree mt = amt::measure_tree_from_json(amt::read_json_file(o.in));
  FiniteSubTriangulation c = amt::decode(mt, o.root, parse_order(o.order));
  if (o.verify && !MeasureTree::equivalent(amt::code(c), mt)) {
    std::cerr << "round trip through code failed\n";
    return kInvalid;
  }
  Json doc = amt::triangulation_to_json(c);
  doc["config"] = Json{{"command", "decode"}, {"in", o.in}, {"root", o.root},
                       {"order", o.order}, {"verify", o.verify}};
  amt::write_json_file(o.out, doc);
  std::cout << "wrote " << o.out << ": " << c.boundary.size() << " boundary points, "
            << c.triangles.size() << " triangles, " << c.segments.size()
            << " segments\n";
  if (o.verify) std::cout << "round trip verified\n";
  return kOk;
}

// ---------------------------------------------------------------------------
// sample

struct SampleOpts {
  std::string stat, in, out, keys, phi = "mean";
  int m = 0, threads = 1;
  std::uint64_t N = 10000, triples = 1000, seed = 0;
  bool exact = false, has_seed = false;
};

Json tensor_json(const TensorDistribution& d) {
  Json arr = Json::array();
  if (d.exact) {
    for (const auto& [tensor, w] : d.weight) {
      Json entry{{"tensor", Json::array()}, {"weight", amt::rat_to_string(w)}};
      for (const Rat& x : tensor) entry["tensor"].push_back(amt::rat_to_string(x));
      arr.push_back(entry);
    }
  } else {
    for (const auto& [tensor, count] : d.tally) {
      Json entry{{"tensor", Json::array()}, {"count", count}};
      for (const Rat& x : tensor) entry["tensor"].push_back(amt::rat_to_string(x));
      arr.push_back(entry);
    }
  }
  return arr;
}

int run_sample(const SampleOpts& o) {
  if (!o.exact && !o.has_seed) {
    std::cerr << "sample without --exact is stochastic and requires --seed\n";
    return kUsage;
  }
  MeasureTree mt = amt::measure_tree_from_json(amt::read_json_file(o.in));
  Json config{{"command", "sample"}, {"stat", o.stat}, {"in", o.in}, {"m", o.m},
              {"exact", o.exact}};
  if (!o.exact) {
    config["N"] = o.N;
    config["seed"] = o.seed;
  }

  if (o.stat == "shape") {
    ShapeDistribution d = o.exact
                              ? amt::shape_distribution_exact(mt, o.m)
                              : amt::shape_distribution_sampled(mt, o.m, o.N, o.seed,
                                                                o.threads);
    auto out = open_out(o.out);
    out << "# config: " << config.dump() << "\n";
    out << "key,probability\n";
    for (const auto& [key, p] : d.probabilities())
      out << csv_quote(key) << "," << fmt(p) << "\n";
    std::cout << "wrote " << o.out << ": " << d.probabilities().size() << " keys\n";
    if (!o.keys.empty()) {
      Json desc{{"config", config}, {"shapes", Json::object()}};
      for (const auto& [key, shape] : d.example)
        desc["shapes"][key] = amt::cladogram_to_json(shape);
      amt::write_json_file(o.keys, desc);
      std::cout << "wrote " << o.keys << "\n";
    }
    return kOk;
  }

  if (o.stat == "mass") {
    TensorDistribution d =
        o.exact ? amt::massdist_exact(mt, o.m)
                : amt::massdist_sampled(mt, o.m, o.N, o.seed, o.threads);
    Json doc{{"config", config}, {"m", o.m}, {"mode", o.exact ? "exact" : "sampled"},
             {"distribution", tensor_json(d)}};
    if (!o.exact) doc["sample_size"] = d.sample_size;
    amt::write_json_file(o.out, doc);
    std::cout << "wrote " << o.out << ": " << doc["distribution"].size()
              << " tensors\n";
    return kOk;
  }

  if (o.stat == "distance") {
    config["phi"] = o.phi;
    MatrixFunction phi = make_phi(o.phi);
    if (o.exact) {
      double value = amt::distance_polynomial_exact(mt, o.m, phi);
      Json doc{{"config", config}, {"value", value}};
      amt::write_json_file(o.out, doc);
      std::cout << "wrote " << o.out << ": value " << fmt(value) << "\n";
      return kOk;
    }
    config["triples"] = o.triples;
    auto est = amt::distance_polynomial_empirical(mt, o.m, phi, o.triples, o.N,
                                                  o.seed, o.threads);
    Json trials = Json::array();
    for (const auto& t : est.trials)
      trials.push_back({{"value", t.value},
                        {"coupled_value", t.coupled_value},
                        {"sup_deviation", t.sup_deviation}});
    Json doc{{"config", config}, {"mean", est.mean}, {"trials", trials}};
    amt::write_json_file(o.out, doc);
    std::cout << "wrote " << o.out << ": mean " << fmt(est.mean) << " over "
              << est.replicas << " replicas\n";
    return kOk;
  }
  throw ValidationError("unknown statistic '" + o.stat + "'");
}

// ---------------------------------------------------------------------------
// compare

struct CompareOpts {
  std::string a, b, stat, out, phi = "mean";
  int m = 0, threads = 1;
  std::uint64_t N = 10000, triples = 1000, seed = 0;
  bool exact = false, has_seed = false;
};

int run_compare(const CompareOpts& o) {
  if (!o.exact && !o.has_seed) {
    std::cerr << "compare without --exact is stochastic and requires --seed\n";
    return kUsage;
  }
  MeasureTree ma = amt::measure_tree_from_json(amt::read_json_file(o.a));
  MeasureTree mb = amt::measure_tree_from_json(amt::read_json_file(o.b));
  Json config{{"command", "compare"}, {"stat", o.stat}, {"a", o.a}, {"b", o.b},
              {"m", o.m}, {"exact", o.exact}};
  if (!o.exact) {
    config["N"] = o.N;
    config["seed"] = o.seed;
  }
  // Independent substreams for the two inputs.
  std::uint64_t sa = SplitRng(o.seed).split(1).seed();
  std::uint64_t sb = SplitRng(o.seed).split(2).seed();

  double distance = 0;
  std::string metric, method;
  if (o.stat == "shape") {
    metric = "tv";
    ShapeDistribution da =
        o.exact ? amt::shape_distribution_exact(ma, o.m)
                : amt::shape_distribution_sampled(ma, o.m, o.N, sa, o.threads);
    ShapeDistribution db =
        o.exact ? amt::shape_distribution_exact(mb, o.m)
                : amt::shape_distribution_sampled(mb, o.m, o.N, sb, o.threads);
    distance = amt::tv_distance(da, db);
  } else if (o.stat == "mass") {
    metric = "wasserstein";
    TensorDistribution da = o.exact
                                ? amt::massdist_exact(ma, o.m)
                                : amt::massdist_sampled(ma, o.m, o.N, sa, o.threads);
    TensorDistribution db = o.exact
                                ? amt::massdist_exact(mb, o.m)
                                : amt::massdist_sampled(mb, o.m, o.N, sb, o.threads);
    auto report = amt::wasserstein_linf(da, db);
    distance = report.distance;
    method = report.method;
  } else if (o.stat == "distance") {
    metric = "polynomial";
    config["phi"] = o.phi;
    MatrixFunction phi = make_phi(o.phi);
    if (o.exact) {
      distance = std::abs(amt::distance_polynomial_exact(ma, o.m, phi) -
                          amt::distance_polynomial_exact(mb, o.m, phi));
    } else {
      config["triples"] = o.triples;
      auto ea = amt::distance_polynomial_empirical(ma, o.m, phi, o.triples, o.N, sa,
                                                   o.threads);
      auto eb = amt::distance_polynomial_empirical(mb, o.m, phi, o.triples, o.N, sb,
                                                   o.threads);
      distance = std::abs(ea.mean - eb.mean);
    }
  } else {
    throw ValidationError("unknown statistic '" + o.stat + "'");
  }

  std::cout << metric << " distance: " << fmt(distance) << "\n";
  if (!method.empty()) std::cout << "method: " << method << "\n";
  if (!o.out.empty()) {
    Json doc{{"config", config}, {"metric", metric}, {"distance", distance}};
    if (!method.empty()) doc["method"] = method;
    amt::write_json_file(o.out, doc);
    std::cout << "wrote " << o.out << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------------------
// check

struct CheckOpts {
  std::string suite = "all", out;
  int trials = 100, gc_trials = 20, n = 50, threads = 1;
  std::uint64_t N = 10000, seed = 0;
  bool has_seed = false;
};

/** Uniform random attachment tree on up to max_n vertices. */
AlgebraicTree random_tree(SplitRng& rng, int max_n) {
  int n = 2 + static_cast<int>(rng.uniform_int(std::max(1, max_n - 1)));
  std::vector<std::pair<int, int>> edges;
  for (int v = 1; v < n; ++v)
    edges.push_back({static_cast<int>(rng.uniform_int(v)), v});
  return AlgebraicTree::from_edges(edges, n);
}

/** Random exact atom masses on every vertex (some zero), summing to one. */
MeasureTree random_atomic(SplitRng& rng, AlgebraicTree tree) {
  int n = tree.size();
  std::vector<long long> w(n);
  long long total = 0;
  for (int v = 0; v < n; ++v) total += w[v] = static_cast<long long>(rng.uniform_int(5));
  if (total == 0) {
    w[0] = 1;
    total = 1;
  }
  std::vector<Rat> atoms(n);
  for (int v = 0; v < n; ++v) atoms[v] = Rat(w[v]) / Rat(total);
  return MeasureTree(std::move(tree), std::move(atoms), std::vector<Rat>(n, Rat(0)));
}

int run_check(const CheckOpts& o) {
  if (!o.has_seed) {
    std::cerr << "check is stochastic and requires --seed\n";
    return kUsage;
  }
  SplitRng rng(o.seed);
  int failures = 0;
  auto report = [&failures](bool ok, const std::string& name, const std::string& detail) {
    std::cout << (ok ? "PASS " : "FAIL ") << name << ": " << detail << "\n";
    if (!ok) ++failures;
  };
  bool all = o.suite == "all";

  if (all || o.suite == "axioms") {
    SplitRng sub = rng.split(1);
    std::uint64_t violations = 0, tuples = 0;
    for (int t = 0; t < o.trials; ++t) {
      auto rep = random_tree(sub, 12).verify_axioms();
      violations += rep.violations.size();
      tuples += rep.tuples_checked;
    }
    report(violations == 0, "axioms",
           std::to_string(o.trials) + " trees, " + std::to_string(tuples) +
               " tuples, " + std::to_string(violations) + " violations");
  }

  if (all || o.suite == "oracle") {
    SplitRng sub = rng.split(2);
    int bad = 0;
    for (int t = 0; t < o.trials; ++t) {
      MeasureTree mt = random_atomic(sub, random_tree(sub, 10));
      if (mt.branch_point_distribution() != mt.branch_point_distribution_bruteforce())
        ++bad;
    }
    report(bad == 0, "oracle",
           std::to_string(o.trials) + " trees, " + std::to_string(bad) +
               " closed-form mismatches");
  }

  if (all || o.suite == "vc") {
    SplitRng sub = rng.split(3);
    int shattered = 0;
    for (int t = 0; t < o.trials; ++t) {
      AlgebraicTree tree = random_tree(sub, 12);
      if (amt::vc_shatter_check(tree, SetFamily::intervals, 3).shattered) ++shattered;
      if (amt::vc_shatter_check(tree, SetFamily::components, 4).shattered) ++shattered;
    }
    report(shattered == 0, "vc",
           std::to_string(o.trials) +
               " trees, shattered 3-sets (intervals) or 4-sets (components): " +
               std::to_string(shattered));
  }

  if (all || o.suite == "gc") {
    MeasureTree mt = amt::beta_splitting_tree(o.n, 0.0, rng.split(4).seed());
    auto dev = amt::glivenko_cantelli_sup(mt, SetFamily::intervals, o.N, o.gc_trials,
                                          rng.split(5).seed(), o.threads);
    double worst = 0;
    for (double s : dev.sup) worst = std::max(worst, s);
    report(worst <= dev.bound && dev.mean_sup() <= 0.05, "gc",
           "mean sup " + fmt(dev.mean_sup()) + ", worst " + fmt(worst) +
               ", bound " + fmt(dev.bound));
    if (!o.out.empty()) {
      auto out = open_out(o.out);
      Json config{{"command", "check"}, {"suite", "gc"}, {"n", o.n}, {"N", o.N},
                  {"gc_trials", o.gc_trials}, {"seed", o.seed}};
      out << "# config: " << config.dump() << "\n";
      out << "trial,n,sup_dev,bound\n";
      for (std::size_t i = 0; i < dev.sup.size(); ++i)
        out << i << "," << dev.n << "," << fmt(dev.sup[i]) << "," << fmt(dev.bound)
            << "\n";
      std::cout << "wrote " << o.out << "\n";
    }
  }

  std::cout << (failures == 0 ? "all checks passed"
                              : std::to_string(failures) + " check(s) failed")
            << "\n";
  return failures == 0 ? kOk : kCheckFail;
}

// ---------------------------------------------------------------------------
// render

struct RenderOpts {
  std::string in, out;
  int size = 560;
  bool overlay = false;
};

struct Pt {
  double x, y;
};

int run_render(const RenderOpts& o) {
  FiniteSubTriangulation c = amt::triangulation_from_json(amt::read_json_file(o.in));
  auto rep = amt::validate(c);
  if (!rep.valid) {
    for (const auto& v : rep.violations) std::cerr << "invalid picture: " << v << "\n";
    return kInvalid;
  }
  const double s = o.size, cx = s / 2, cy = s / 2, radius = s / 2 - 40;
  auto at = [&](const Rat& t) -> Pt {
    double a = 2 * 3.14159265358979323846 * static_cast<double>(t);
    return {cx + radius * std::cos(a), cy - radius * std::sin(a)};
  };
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return std::string(buf);
  };
  auto xy = [&](Pt p) { return num(p.x) + "," + num(p.y); };

  Json config{{"command", "render"}, {"in", o.in}, {"size", o.size},
              {"overlay", o.overlay}};
  std::string svg;
  svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  svg += "<!-- config: " + config.dump() + " -->\n";
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" +
         std::to_string(o.size) + "\" height=\"" + std::to_string(o.size) +
         "\" viewBox=\"0 0 " + std::to_string(o.size) + " " +
         std::to_string(o.size) + "\">\n";
  svg += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  svg += "<circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(radius) +
         "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1.5\"/>\n";

  // Removed regions first, chords on top. Triangles in blue, segments (chord
  // plus the arc running counter-clockwise from the first endpoint) in grey.
  for (const auto& t : c.triangles)
    svg += "<polygon points=\"" + xy(at(c.boundary[t[0]])) + " " +
           xy(at(c.boundary[t[1]])) + " " + xy(at(c.boundary[t[2]])) +
           "\" fill=\"#b3cde3\" stroke=\"none\"/>\n";
  for (const auto& [i, j] : c.segments) {
    if (i == j) continue;  // single-point picture: nothing two-dimensional
    Rat span = c.boundary[j] - c.boundary[i];
    if (span < 0) span = span + 1;
    // Screen coordinates flip the orientation, so counter-clockwise arcs use
    // sweep flag 0.
    svg += "<path d=\"M " + xy(at(c.boundary[i])) + " A " + num(radius) + " " +
           num(radius) + " 0 " + (span > Rat(1, 2) ? "1" : "0") + " 0 " +
           xy(at(c.boundary[j])) + " Z\" fill=\"#cccccc\" stroke=\"none\"/>\n";
  }
  for (const auto& [i, j] : c.chords())
    svg += "<line x1=\"" + num(at(c.boundary[i]).x) + "\" y1=\"" +
           num(at(c.boundary[i]).y) + "\" x2=\"" + num(at(c.boundary[j]).x) +
           "\" y2=\"" + num(at(c.boundary[j]).y) +
           "\" stroke=\"#333333\" stroke-width=\"1.5\"/>\n";
  for (std::size_t i = 0; i < c.boundary.size(); ++i) {
    Pt p = at(c.boundary[i]);
    svg += "<circle cx=\"" + num(p.x) + "\" cy=\"" + num(p.y) +
           "\" r=\"3\" fill=\"#333333\"/>\n";
    if (c.boundary.size() <= 24) {
      double a = 2 * 3.14159265358979323846 * static_cast<double>(c.boundary[i]);
      Pt label{cx + (radius + 16) * std::cos(a), cy - (radius + 16) * std::sin(a)};
      svg += "<text x=\"" + num(label.x) + "\" y=\"" + num(label.y) +
             "\" font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\" "
             "text-anchor=\"middle\" dominant-baseline=\"middle\">" +
             std::to_string(i) + "</text>\n";
    }
  }

  if (o.overlay) {
    // Dual-tree sketch: a node inside every listed region, an edge wherever
    // two listed regions share a chord, and a stub with a hollow tip toward
    // each chord whose far side is retained (those regions are the leaves).
    std::map<std::pair<int, int>, std::vector<Pt>> owners;
    std::vector<std::string> nodes, edges;
    auto mid = [](Pt a, Pt b) { return Pt{(a.x + b.x) / 2, (a.y + b.y) / 2}; };
    for (const auto& t : c.triangles) {
      Pt a = at(c.boundary[t[0]]), b = at(c.boundary[t[1]]), d = at(c.boundary[t[2]]);
      Pt n{(a.x + b.x + d.x) / 3, (a.y + b.y + d.y) / 3};
      nodes.push_back("<circle cx=\"" + num(n.x) + "\" cy=\"" + num(n.y) +
                      "\" r=\"4\" fill=\"#d95f02\"/>\n");
      owners[{t[0], t[1]}].push_back(n);
      owners[{t[1], t[2]}].push_back(n);
      owners[{t[0], t[2]}].push_back(n);
    }
    for (const auto& [i, j] : c.segments) {
      if (i == j) continue;
      Rat half = c.boundary[i] + (c.boundary[j] - c.boundary[i] +
                                  (c.boundary[j] < c.boundary[i] ? Rat(1) : Rat(0))) /
                                     2;
      Pt n = mid(mid(at(c.boundary[i]), at(c.boundary[j])), at(half));
      nodes.push_back("<circle cx=\"" + num(n.x) + "\" cy=\"" + num(n.y) +
                      "\" r=\"4\" fill=\"#d95f02\"/>\n");
      owners[{std::min(i, j), std::max(i, j)}].push_back(n);
    }
    for (const auto& [chord, own] : owners) {
      Pt gate = mid(at(c.boundary[chord.first]), at(c.boundary[chord.second]));
      if (own.size() == 2) {
        edges.push_back("<line x1=\"" + num(own[0].x) + "\" y1=\"" + num(own[0].y) +
                        "\" x2=\"" + num(own[1].x) + "\" y2=\"" + num(own[1].y) +
                        "\" stroke=\"#d95f02\" stroke-width=\"2\"/>\n");
      } else {
        edges.push_back("<line x1=\"" + num(own[0].x) + "\" y1=\"" + num(own[0].y) +
                        "\" x2=\"" + num(gate.x) + "\" y2=\"" + num(gate.y) +
                        "\" stroke=\"#d95f02\" stroke-width=\"2\"/>\n");
        nodes.push_back("<circle cx=\"" + num(gate.x) + "\" cy=\"" + num(gate.y) +
                        "\" r=\"3.5\" fill=\"#ffffff\" stroke=\"#d95f02\" "
                        "stroke-width=\"2\"/>\n");
      }
    }
    for (const auto& e : edges) svg += e;
    for (const auto& n : nodes) svg += n;
  }
  svg += "</svg>\n";

  auto out = open_out(o.out);
  out << svg;
  if (!out.good()) throw ValidationError("failed writing " + o.out);
  std::cout << "wrote " << o.out << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite algebraic measure trees: generation, circle coding, "
               "sampling, comparison, checks, and rendering"};
  app.require_subcommand(1);

  GenOpts gen;
  CLI::App* gen_cmd = app.add_subcommand("gen", "generate a measure tree");
  gen_cmd->add_option("--model", gen.model, "beta | comb | symmetric")
      ->required()
      ->check(CLI::IsMember({"beta", "comb", "symmetric"}));
  gen_cmd->add_option("--beta", gen.beta, "splitting parameter: float, -2, or inf");
  gen_cmd->add_option("--n", gen.n, "number of leaves (beta, comb)");
  gen_cmd->add_option("--k", gen.k, "depth of the symmetric tree (2^k leaves)");
  auto* gen_seed = gen_cmd->add_option("--seed", gen.seed, "random seed");
  gen_cmd->add_option("--out", gen.out, "output tree JSON path")->required();

  CodeOpts code;
  CLI::App* code_cmd =
      app.add_subcommand("code", "triangulation JSON to measure-tree JSON");
  code_cmd->add_option("--in", code.in, "triangulation JSON path")->required();
  code_cmd->add_option("--out", code.out, "output tree JSON path")->required();
  code_cmd->add_flag("--verify", code.verify, "re-decode and assert equivalence");

  DecodeOpts dec;
  CLI::App* dec_cmd =
      app.add_subcommand("decode", "measure-tree JSON to triangulation JSON");
  dec_cmd->add_option("--in", dec.in, "tree JSON path")->required();
  dec_cmd->add_option("--out", dec.out, "output triangulation JSON path")->required();
  dec_cmd->add_option("--root", dec.root, "root leaf id (default: first leaf)");
  dec_cmd->add_option("--order", dec.order, "canonical | by-index | reversed")
      ->check(CLI::IsMember({"canonical", "by-index", "reversed"}));
  dec_cmd->add_flag("--verify", dec.verify, "re-code and assert equivalence");

  SampleOpts sample;
  CLI::App* sample_cmd =
      app.add_subcommand("sample", "sampled or exact statistics of a tree");
  sample_cmd->add_option("--stat", sample.stat, "shape | mass | distance")
      ->required()
      ->check(CLI::IsMember({"shape", "mass", "distance"}));
  sample_cmd->add_option("--in", sample.in, "tree JSON path")->required();
  sample_cmd->add_option("--m", sample.m, "points per sample")->required();
  sample_cmd->add_option("--N", sample.N, "samples (replicas for --stat distance)");
  sample_cmd->add_option("--triples", sample.triples,
                         "branch-point triples per replica (distance only)");
  auto* sample_seed = sample_cmd->add_option("--seed", sample.seed, "random seed");
  sample_cmd->add_flag("--exact", sample.exact, "exact enumeration instead of sampling");
  sample_cmd->add_option("--phi", sample.phi, "distance functional: mean | max")
      ->check(CLI::IsMember({"mean", "max"}));
  sample_cmd->add_option("--threads", sample.threads, "worker count (results unchanged)");
  sample_cmd->add_option("--out", sample.out, "output path (CSV for shape, JSON else)")
      ->required();
  sample_cmd->add_option("--keys", sample.keys,
                         "also write shape descriptions to this JSON path");

  CompareOpts cmp;
  CLI::App* cmp_cmd = app.add_subcommand("compare", "distance between two trees");
  cmp_cmd->add_option("--a", cmp.a, "first tree JSON path")->required();
  cmp_cmd->add_option("--b", cmp.b, "second tree JSON path")->required();
  cmp_cmd->add_option("--stat", cmp.stat,
                      "shape (tv) | mass (wasserstein) | distance (polynomial)")
      ->required()
      ->check(CLI::IsMember({"shape", "mass", "distance"}));
  cmp_cmd->add_option("--m", cmp.m, "points per sample")->required();
  cmp_cmd->add_option("--N", cmp.N, "samples (replicas for --stat distance)");
  cmp_cmd->add_option("--triples", cmp.triples,
                      "branch-point triples per replica (distance only)");
  auto* cmp_seed = cmp_cmd->add_option("--seed", cmp.seed, "random seed");
  cmp_cmd->add_flag("--exact", cmp.exact, "exact enumeration instead of sampling");
  cmp_cmd->add_option("--phi", cmp.phi, "distance functional: mean | max")
      ->check(CLI::IsMember({"mean", "max"}));
  cmp_cmd->add_option("--threads", cmp.threads, "worker count (results unchanged)");
  cmp_cmd->add_option("--out", cmp.out, "optional JSON report path");

  CheckOpts check;
  CLI::App* check_cmd = app.add_subcommand("check", "randomized self-check suites");
  check_cmd->add_option("--suite", check.suite, "axioms | oracle | vc | gc | all")
      ->check(CLI::IsMember({"axioms", "oracle", "vc", "gc", "all"}));
  check_cmd->add_option("--trials", check.trials, "trees per randomized suite");
  check_cmd->add_option("--gc-trials", check.gc_trials, "uniform-deviation trials");
  check_cmd->add_option("--n", check.n, "leaves of the deviation-test tree");
  check_cmd->add_option("--N", check.N, "sample points per deviation trial");
  auto* check_seed = check_cmd->add_option("--seed", check.seed, "random seed");
  check_cmd->add_option("--threads", check.threads, "worker count (results unchanged)");
  check_cmd->add_option("--out", check.out, "optional deviation CSV path");

  RenderOpts render;
  CLI::App* render_cmd = app.add_subcommand("render", "triangulation JSON to SVG");
  render_cmd->add_option("--in", render.in, "triangulation JSON path")->required();
  render_cmd->add_option("--out", render.out, "output SVG path")->required();
  render_cmd->add_option("--size", render.size, "image side length in pixels");
  render_cmd->add_flag("--overlay", render.overlay, "draw the dual tree");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kUsage;
  }

  gen.has_seed = gen_seed->count() > 0;
  sample.has_seed = sample_seed->count() > 0;
  cmp.has_seed = cmp_seed->count() > 0;
  check.has_seed = check_seed->count() > 0;

  try {
    if (gen_cmd->parsed()) return run_gen(gen);
    if (code_cmd->parsed()) return run_code(code);
    if (dec_cmd->parsed()) return run_decode(dec);
    if (sample_cmd->parsed()) return run_sample(sample);
    if (cmp_cmd->parsed()) return run_compare(cmp);
    if (check_cmd->parsed()) return run_check(check);
    if (render_cmd->parsed()) return run_render(render);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kUsage;
}
