#include "ugrid/obj_io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ugrid/errors.hpp"

namespace ugrid {
namespace {

std::string_view next_token(std::string_view& rest) {
  const auto start = rest.find_first_not_of(" \t\r");
  if (start == std::string_view::npos) {
    rest = {};
    return {};
  }
  rest.remove_prefix(start);
  const auto end = std::min(rest.find_first_of(" \t\r"), rest.size());
  auto tok = rest.substr(0, end);
  rest.remove_prefix(end);
  return tok;
}

double parse_coord(std::string_view tok, std::size_t line) {
  double v = 0;
  const auto* last = tok.data() + tok.size();
  auto [ptr, ec] = std::from_chars(tok.data(), last, v);
  if (tok.empty() || ec != std::errc{} || ptr != last)
    throw ParseError("malformed vertex coordinate '" + std::string(tok) + "'", line);
  return v;
}

std::uint32_t parse_corner(std::string_view tok, std::size_t nverts, std::size_t line) {
  const auto slash = tok.find('/');
  const auto head = tok.substr(0, slash);
  long long idx = 0;
  const auto* last = head.data() + head.size();
  auto [ptr, ec] = std::from_chars(head.data(), last, idx);
  if (head.empty() || ec != std::errc{} || ptr != last || idx == 0)
    throw ParseError("malformed face index '" + std::string(tok) + "'", line);
  const long long resolved = idx > 0 ? idx - 1 : static_cast<long long>(nverts) + idx;
  if (resolved < 0 || resolved >= static_cast<long long>(nverts))
    throw ParseError("face index " + std::to_string(idx) + " out of range (" +
                         std::to_string(nverts) + " vertices)",
                     line);
  return static_cast<std::uint32_t>(resolved);
}

}  // namespace

TriangleMesh parse_obj(std::istream& in) {
  TriangleMesh mesh;
  std::string buffer;
  std::vector<std::uint32_t> corners;
  std::size_t line = 0;
  while (std::getline(in, buffer)) {
    ++line;
    std::string_view rest(buffer);
    if (const auto hash = rest.find('#'); hash != std::string_view::npos) rest = rest.substr(0, hash);
    const auto kind = next_token(rest);
    if (kind == "v") {
      Vec3 p;
      for (int k = 0; k < 3; ++k) {
        const auto tok = next_token(rest);
        if (tok.empty()) throw ParseError("vertex needs three coordinates", line);
        p[k] = parse_coord(tok, line);
      }
      mesh.vertices.push_back(p);
    } else if (kind == "f") {
      corners.clear();
      for (auto tok = next_token(rest); !tok.empty(); tok = next_token(rest))
        corners.push_back(parse_corner(tok, mesh.vertices.size(), line));
      if (corners.size() < 3) throw ParseError("face needs at least three vertices", line);
      for (std::size_t k = 1; k + 1 < corners.size(); ++k)
        mesh.triangles.push_back({corners[0], corners[k], corners[k + 1]});
    }
  }
  return mesh;
}

TriangleMesh load_obj(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return parse_obj(in);
}

void write_obj(const TriangleMesh& mesh, std::ostream& out) {
  out << std::setprecision(17);
  for (const auto& v : mesh.vertices) out << "v " << v.x() << ' ' << v.y() << ' ' << v.z() << '\n';
  for (const auto& t : mesh.triangles)
    out << "f " << t[0] + 1 << ' ' << t[1] + 1 << ' ' << t[2] + 1 << '\n';
}

void save_obj(const TriangleMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_obj(mesh, out);
}

}  // namespace ugrid
