#include "amt/json_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "amt/rational.hpp"

namespace amt {

namespace {

void expect(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

long long int_field(const Json& v, const std::string& what) {
  expect(v.is_number_integer() && !v.is_number_float(), what + " must be an integer");
  return v.get<long long>();
}

/** Digits-only key of a sparse per-vertex object. */
long long parse_id_key(const std::string& key, const std::string& what) {
  expect(!key.empty() && key.find_first_not_of("0123456789") == std::string::npos,
         what + " key '" + key + "' is not a vertex id");
  return std::stoll(key);
}

/** Ascending id -> dense index map from the "vertices" array. */
std::map<long long, int> vertex_index(const Json& doc) {
  expect(doc.is_object() && doc.contains("vertices") && doc["vertices"].is_array(),
         "tree JSON needs a \"vertices\" array");
  std::map<long long, int> index;
  for (const Json& v : doc["vertices"]) {
    expect(v.is_object() && v.contains("id"), "vertex entries need an \"id\"");
    long long id = int_field(v["id"], "vertex id");
    expect(id >= 0, "vertex ids must be nonnegative");
    expect(!index.count(id), "duplicate vertex id " + std::to_string(id));
    index[id] = 0;
  }
  expect(!index.empty(), "tree JSON needs at least one vertex");
  int next = 0;
  for (auto& [id, dense] : index) dense = next++;
  return index;
}

std::vector<std::pair<int, int>> edge_list(const Json& doc,
                                           const std::map<long long, int>& index) {
  expect(doc.contains("edges") && doc["edges"].is_array(),
         "tree JSON needs an \"edges\" array");
  std::vector<std::pair<int, int>> edges;
  for (const Json& e : doc["edges"]) {
    expect(e.is_array() && e.size() == 2, "edges must be pairs of vertex ids");
    long long a = int_field(e[0], "edge endpoint");
    long long b = int_field(e[1], "edge endpoint");
    expect(index.count(a) && index.count(b),
           "edge references an unknown vertex id");
    edges.push_back({index.at(a), index.at(b)});
  }
  return edges;
}

/** Sparse {"id":"p/q"} object into a dense per-vertex vector, zeros elsewhere. */
std::vector<Rat> mass_vector(const Json& doc, const std::string& field,
                             const std::map<long long, int>& index) {
  std::vector<Rat> mass(index.size(), Rat(0));
  if (!doc.contains(field)) return mass;
  const Json& obj = doc[field];
  expect(obj.is_object(), "\"" + field + "\" must map vertex ids to \"p/q\" strings");
  for (const auto& [key, value] : obj.items()) {
    long long id = parse_id_key(key, field);
    expect(index.count(id), field + " names unknown vertex id " + key);
    expect(value.is_string(), field + "[" + key + "] must be a \"p/q\" string");
    mass[index.at(id)] = parse_rat(value.get<std::string>());
  }
  return mass;
}

Json tree_body(const AlgebraicTree& tree) {
  Json vertices = Json::array();
  for (int v = 0; v < tree.size(); ++v) vertices.push_back({{"id", v}});
  Json edges = Json::array();
  for (const auto& [a, b] : tree.edges()) edges.push_back({a, b});
  return {{"vertices", vertices}, {"edges", edges}};
}

/** Sparse object of the nonzero entries, keyed by vertex id. */
Json mass_object(const std::vector<Rat>& mass) {
  Json obj = Json::object();
  for (int v = 0; v < static_cast<int>(mass.size()); ++v)
    if (mass[v] != 0) obj[std::to_string(v)] = rat_to_string(mass[v]);
  return obj;
}

}  // namespace

Json tree_to_json(const AlgebraicTree& tree) { return tree_body(tree); }

AlgebraicTree tree_from_json(const Json& doc) {
  auto index = vertex_index(doc);
  return AlgebraicTree::from_edges(edge_list(doc, index),
                                   static_cast<int>(index.size()));
}

Json measure_tree_to_json(const MeasureTree& mt) {
  Json doc = tree_body(mt.tree());
  doc["atom_mass"] = mass_object(mt.atoms());
  doc["arc_mass"] = mass_object(mt.arcs());
  return doc;
}

MeasureTree measure_tree_from_json(const Json& doc) {
  auto index = vertex_index(doc);
  AlgebraicTree tree = AlgebraicTree::from_edges(edge_list(doc, index),
                                                 static_cast<int>(index.size()));
  return MeasureTree(std::move(tree), mass_vector(doc, "atom_mass", index),
                     mass_vector(doc, "arc_mass", index));
}

Json triangulation_to_json(const FiniteSubTriangulation& c) {
  Json boundary = Json::array();
  for (const Rat& p : c.boundary) boundary.push_back(rat_to_string(p));
  Json triangles = Json::array();
  for (const auto& t : c.triangles) triangles.push_back({t[0], t[1], t[2]});
  Json segments = Json::array();
  for (const auto& [i, j] : c.segments) segments.push_back({i, j});
  return {{"boundary", boundary}, {"triangles", triangles}, {"segments", segments}};
}

FiniteSubTriangulation triangulation_from_json(const Json& doc) {
  expect(doc.is_object(), "triangulation JSON must be an object");
  FiniteSubTriangulation c;
  expect(doc.contains("boundary") && doc["boundary"].is_array(),
         "triangulation JSON needs a \"boundary\" array");
  for (const Json& p : doc["boundary"]) {
    expect(p.is_string(), "boundary positions must be \"p/q\" strings");
    c.boundary.push_back(parse_rat(p.get<std::string>()));
  }
  if (doc.contains("triangles")) {
    expect(doc["triangles"].is_array(), "\"triangles\" must be an array");
    for (const Json& t : doc["triangles"]) {
      expect(t.is_array() && t.size() == 3, "triangles must be index triples");
      c.triangles.push_back({static_cast<int>(int_field(t[0], "triangle corner")),
                             static_cast<int>(int_field(t[1], "triangle corner")),
                             static_cast<int>(int_field(t[2], "triangle corner"))});
    }
  }
  if (doc.contains("segments")) {
    expect(doc["segments"].is_array(), "\"segments\" must be an array");
    for (const Json& s : doc["segments"]) {
      expect(s.is_array() && s.size() == 2, "segments must be index pairs");
      c.segments.push_back({static_cast<int>(int_field(s[0], "segment endpoint")),
                            static_cast<int>(int_field(s[1], "segment endpoint"))});
    }
  }
  return c;
}

Json cladogram_to_json(const Cladogram& shape) {
  Json doc = tree_body(shape.tree);
  Json labels = Json::object();
  for (int v = 0; v < shape.size(); ++v)
    if (!shape.labels[v].empty()) labels[std::to_string(v)] = shape.labels[v];
  doc["labels"] = labels;
  return doc;
}

Cladogram cladogram_from_json(const Json& doc) {
  auto index = vertex_index(doc);
  Cladogram shape{AlgebraicTree::from_edges(edge_list(doc, index),
                                            static_cast<int>(index.size())),
                  std::vector<std::vector<int>>(index.size())};
  if (doc.contains("labels")) {
    const Json& labels = doc["labels"];
    expect(labels.is_object(), "\"labels\" must map vertex ids to label lists");
    for (const auto& [key, value] : labels.items()) {
      long long id = parse_id_key(key, "labels");
      expect(index.count(id), "labels name unknown vertex id " + key);
      expect(value.is_array(), "labels[" + key + "] must be an array");
      for (const Json& l : value)
        shape.labels[index.at(id)].push_back(
            static_cast<int>(int_field(l, "label")));
      std::sort(shape.labels[index.at(id)].begin(), shape.labels[index.at(id)].end());
    }
  }
  return shape;
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.is_open()) throw ValidationError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ValidationError(path + ": " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& doc) {
  std::ofstream out(path);
  if (!out.is_open()) throw ValidationError("cannot open " + path + " for writing");
  out << doc.dump(2) << '\n';
  if (!out.good()) throw ValidationError("failed writing " + path);
}

}  // namespace amt
