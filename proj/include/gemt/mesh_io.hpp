#pragma once

#include "gemt/types.hpp"

#include <filesystem>
#include <string>
#include <string_view>

namespace gemt {

enum class MeshFormat { obj, stl_ascii };

MeshFormat mesh_format_from_name(std::string_view name);  // "obj" | "stl-ascii"

// OBJ: "v x y z" and "f i j k" with 1-based indices. STL is the usual ASCII
// facet form; reading it rebuilds shared topology by exact vertex merge.
std::string write_mesh(const PhenotypeMesh& mesh, MeshFormat format);
PhenotypeMesh read_mesh(std::string_view data, MeshFormat format);

void write_mesh_file(const PhenotypeMesh& mesh, const std::filesystem::path& path);
PhenotypeMesh read_mesh_file(const std::filesystem::path& path);

} // namespace gemt
