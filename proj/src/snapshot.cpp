#include "molt/snapshot.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "molt/errors.hpp"

namespace molt {

namespace {

struct File {
  std::FILE* f = nullptr;
  explicit File(const std::string& path) : f(std::fopen(path.c_str(), "w")) {
    if (f == nullptr) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  }
  ~File() {
    if (f != nullptr) std::fclose(f);
  }
  void close(const std::string& path) {
    const bool bad = std::ferror(f) != 0;
    const int rc = std::fclose(f);
    f = nullptr;
    if (bad || rc != 0) throw Error(ErrorCode::IoError, "error writing '" + path + "'");
  }
};

}  // namespace

void write_snapshot(const std::vector<double>& field, const EmbeddedMesh& mesh, const std::string& path) {
  File out(path);
  std::fputs("x,y,u\n", out.f);
  for (std::size_t j = 0; j <= mesh.ny; ++j) {
    for (std::size_t i = 0; i <= mesh.nx; ++i) {
      const std::size_t id = mesh.id(i, j);
      if (mesh.kind[id] != NodeKind::interior) continue;
      std::fprintf(out.f, "%.17g,%.17g,%.17g\n", mesh.x(i), mesh.y(j), field[id]);
    }
  }
  out.close(path);
}

void write_snapshot_1d(const std::vector<double>& field, const SweepLine& line, const std::string& path) {
  File out(path);
  std::fputs("x,u\n", out.f);
  for (std::size_t k = 0; k < line.nodes.size(); ++k) std::fprintf(out.f, "%.17g,%.17g\n", line.nodes[k], field[k]);
  out.close(path);
}

std::vector<std::array<double, 3>> read_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot read '" + path + "'");
  std::string line;
  std::getline(in, line);
  const bool two_d = line == "x,y,u";
  if (!two_d && line != "x,u") throw Error(ErrorCode::IoError, "unexpected snapshot header in '" + path + "'");
  std::vector<std::array<double, 3>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::array<double, 3> r{};
    const char* p = line.c_str();
    char* end = nullptr;
    r[0] = std::strtod(p, &end);
    if (two_d) r[1] = std::strtod(end + 1, &end);
    r[2] = std::strtod(end + 1, &end);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace molt
