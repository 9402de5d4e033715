#pragma once

#include <string>

#include "json.hpp"

#include "amt/cladogram.hpp"
#include "amt/measure_tree.hpp"
#include "amt/tree.hpp"
#include "amt/triangulation.hpp"

namespace amt {

using Json = nlohmann::json;

/** {"vertices":[{"id":0},...],"edges":[[0,1],...]} with dense ids. */
Json tree_to_json(const AlgebraicTree& tree);

/** Accepts arbitrary distinct nonnegative ids and renumbers them densely in
    ascending order. Throws ValidationError on malformed documents, duplicate
    ids, unknown edge endpoints, or edge lists that do not form a tree. */
AlgebraicTree tree_from_json(const Json& doc);

/** Tree JSON plus sparse "atom_mass"/"arc_mass" objects mapping vertex id to
    an exact "p/q" string; zero masses are omitted. */
Json measure_tree_to_json(const MeasureTree& mt);

/** Missing mass entries default to zero; masses must key existing vertices
    and form a probability measure. Vertex ids are renumbered as for trees,
    and mass keys follow the renumbering. */
MeasureTree measure_tree_from_json(const Json& doc);

/** {"boundary":["0","1/12",...],"triangles":[[0,4,11],...],"segments":[[2,3],...]}
    with boundary positions as exact "p/q" strings. */
Json triangulation_to_json(const FiniteSubTriangulation& c);

/** Structural parse only - index ranges and crossing rules are left to
    validate(), so invalid pictures can be loaded and then reported on. */
FiniteSubTriangulation triangulation_from_json(const Json& doc);

/** Tree JSON plus a "labels" object mapping vertex id to its sorted label
    list; unlabelled vertices are omitted. */
Json cladogram_to_json(const Cladogram& shape);

Cladogram cladogram_from_json(const Json& doc);

/** Parses the file; throws ValidationError naming the path on open or parse
    failure. */
Json read_json_file(const std::string& path);

/** Writes the document pretty-printed with a trailing newline; throws
    ValidationError naming the path on failure. */
void write_json_file(const std::string& path, const Json& doc);

}  // namespace amt
