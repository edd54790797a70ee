#include "gemt/mesh_io.hpp"

#include "gemt/errors.hpp"
#include "gemt/mesh.hpp"
#include "gemt/prompt.hpp"

#include <Eigen/Geometry>

#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <tuple>

namespace gemt {

namespace {

std::string fmt_coord(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

[[noreturn]] void fail(std::size_t line_no, const std::string& what) {
    throw ParseError("line " + std::to_string(line_no) + ": " + what);
}

std::string write_obj(const PhenotypeMesh& mesh) {
    std::ostringstream os;
    for (const Eigen::Vector3d& v : mesh.vertices)
        os << "v " << fmt_coord(v.x()) << ' ' << fmt_coord(v.y()) << ' ' << fmt_coord(v.z())
           << '\n';
    for (const Eigen::Vector3i& t : mesh.triangles)
        os << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
    return os.str();
}

// Accepts "i", "i/j", "i/j/k" face corners; only the vertex index is used.
int parse_face_index(const std::string& token, std::size_t line_no, std::size_t vertex_count) {
    std::size_t slash = token.find('/');
    const std::string head = slash == std::string::npos ? token : token.substr(0, slash);
    long idx = 0;
    try {
        std::size_t used = 0;
        idx = std::stol(head, &used);
        if (used != head.size()) throw std::invalid_argument(head);
    } catch (const std::exception&) {
        fail(line_no, "bad face index '" + token + "'");
    }
    if (idx <= 0) fail(line_no, "face indices are 1-based, got " + std::to_string(idx));
    if (static_cast<std::size_t>(idx) > vertex_count)
        fail(line_no, "face index " + std::to_string(idx) + " exceeds vertex count");
    return static_cast<int>(idx - 1);
}

PhenotypeMesh read_obj(std::string_view data) {
    PhenotypeMesh mesh;
    std::istringstream in{std::string(data)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string flat = trim(line);
        if (flat.empty() || flat[0] == '#') continue;
        const auto words = split_words(flat);
        if (words[0] == "v") {
            if (words.size() < 4) fail(line_no, "vertex needs three coordinates");
            Eigen::Vector3d v;
            for (int j = 0; j < 3; ++j) {
                try {
                    v[j] = std::stod(words[j + 1]);
                } catch (const std::exception&) {
                    fail(line_no, "bad coordinate '" + words[j + 1] + "'");
                }
            }
            mesh.vertices.push_back(v);
        } else if (words[0] == "f") {
            if (words.size() < 4) fail(line_no, "face needs at least three indices");
            std::vector<int> corners;
            for (std::size_t j = 1; j < words.size(); ++j)
                corners.push_back(parse_face_index(words[j], line_no, mesh.vertices.size()));
            for (std::size_t j = 2; j < corners.size(); ++j)  // fan-triangulate polygons
                mesh.triangles.push_back({corners[0], corners[j - 1], corners[j]});
        }
        // Other directives (vn, vt, o, g, s, usemtl, mtllib) are ignored.
    }
    if (mesh.triangles.empty()) throw ParseError("no faces found");
    return mesh;
}

std::string write_stl(const PhenotypeMesh& mesh) {
    std::ostringstream os;
    os << "solid gemt\n";
    for (const Eigen::Vector3i& t : mesh.triangles) {
        const Eigen::Vector3d& a = mesh.vertices[t[0]];
        const Eigen::Vector3d& b = mesh.vertices[t[1]];
        const Eigen::Vector3d& c = mesh.vertices[t[2]];
        Eigen::Vector3d n = (b - a).cross(c - a);
        const double len = n.norm();
        if (len > 0) n /= len;
        os << "  facet normal " << fmt_coord(n.x()) << ' ' << fmt_coord(n.y()) << ' '
           << fmt_coord(n.z()) << '\n';
        os << "    outer loop\n";
        for (const Eigen::Vector3d* v : {&a, &b, &c})
            os << "      vertex " << fmt_coord(v->x()) << ' ' << fmt_coord(v->y()) << ' '
               << fmt_coord(v->z()) << '\n';
        os << "    endloop\n";
        os << "  endfacet\n";
    }
    os << "endsolid gemt\n";
    return os.str();
}

PhenotypeMesh read_stl(std::string_view data) {
    PhenotypeMesh mesh;
    std::map<std::tuple<double, double, double>, int> seen;
    std::istringstream in{std::string(data)};
    std::string line;
    std::size_t line_no = 0;
    std::vector<int> facet;
    bool in_solid = false;
    while (std::getline(in, line)) {
        ++line_no;
        const auto words = split_words(line);
        if (words.empty()) continue;
        if (words[0] == "solid") {
            in_solid = true;
        } else if (words[0] == "vertex") {
            if (!in_solid) fail(line_no, "vertex outside solid");
            if (words.size() < 4) fail(line_no, "vertex needs three coordinates");
            Eigen::Vector3d v;
            for (int j = 0; j < 3; ++j) {
                try {
                    v[j] = std::stod(words[j + 1]);
                } catch (const std::exception&) {
                    fail(line_no, "bad coordinate '" + words[j + 1] + "'");
                }
            }
            const auto key = std::make_tuple(v.x(), v.y(), v.z());
            auto it = seen.find(key);
            int idx;
            if (it == seen.end()) {
                idx = static_cast<int>(mesh.vertices.size());
                mesh.vertices.push_back(v);
                seen.emplace(key, idx);
            } else {
                idx = it->second;
            }
            facet.push_back(idx);
        } else if (words[0] == "endfacet") {
            if (facet.size() != 3) fail(line_no, "facet does not have exactly three vertices");
            mesh.triangles.push_back({facet[0], facet[1], facet[2]});
            facet.clear();
        }
        // facet/outer/endloop/endsolid keywords carry no payload we need.
    }
    if (!in_solid) throw ParseError("not an ASCII STL stream");
    if (mesh.triangles.empty()) throw ParseError("no facets found");
    return mesh;
}

} // namespace

MeshFormat mesh_format_from_name(std::string_view name) {
    if (name == "obj") return MeshFormat::obj;
    if (name == "stl-ascii" || name == "stl") return MeshFormat::stl_ascii;
    throw UnsupportedFormat("unknown mesh format '" + std::string(name) + "'");
}

std::string write_mesh(const PhenotypeMesh& mesh, MeshFormat format) {
    validate_mesh(mesh);
    switch (format) {
    case MeshFormat::obj: return write_obj(mesh);
    case MeshFormat::stl_ascii: return write_stl(mesh);
    }
    throw UnsupportedFormat("unknown mesh format");
}

PhenotypeMesh read_mesh(std::string_view data, MeshFormat format) {
    PhenotypeMesh mesh;
    switch (format) {
    case MeshFormat::obj: mesh = read_obj(data); break;
    case MeshFormat::stl_ascii: mesh = read_stl(data); break;
    default: throw UnsupportedFormat("unknown mesh format");
    }
    validate_mesh(mesh);
    return mesh;
}

namespace {
MeshFormat format_for_path(const std::filesystem::path& path) {
    const std::string ext = lower(path.extension().string());
    if (ext == ".obj") return MeshFormat::obj;
    if (ext == ".stl") return MeshFormat::stl_ascii;
    throw UnsupportedFormat("cannot infer mesh format from '" + path.string() + "'");
}
} // namespace

void write_mesh_file(const PhenotypeMesh& mesh, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open for writing: " + path.string());
    out << write_mesh(mesh, format_for_path(path));
}

PhenotypeMesh read_mesh_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open for reading: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return read_mesh(buffer.str(), format_for_path(path));
}

} // namespace gemt
