#include "nsl/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace nsl {

namespace {

static_assert(std::endian::native == std::endian::little,
              "field files are little-endian; byte swapping is not implemented");

constexpr char kMagic[4] = {'N', 'S', 'L', 'F'};

void write_header(std::ofstream& out, const Grid& g, std::uint32_t ncomp) {
  out.write(kMagic, 4);
  const std::uint32_t n = static_cast<std::uint32_t>(g.dim());
  const std::uint32_t N = static_cast<std::uint32_t>(g.points_per_axis());
  const double L = g.box_length();
  out.write(reinterpret_cast<const char*>(&n), 4);
  out.write(reinterpret_cast<const char*>(&N), 4);
  out.write(reinterpret_cast<const char*>(&L), 8);
  out.write(reinterpret_cast<const char*>(&ncomp), 4);
}

struct Header {
  Grid grid;
  std::uint32_t ncomp;
};

Header read_header(std::ifstream& in, const std::filesystem::path& path) {
  char magic[4];
  std::uint32_t n = 0, N = 0, ncomp = 0;
  double L = 0.0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&n), 4);
  in.read(reinterpret_cast<char*>(&N), 4);
  in.read(reinterpret_cast<char*>(&L), 8);
  in.read(reinterpret_cast<char*>(&ncomp), 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("not a field file: " + path.string());
  return Header{Grid(static_cast<int>(n), static_cast<int>(N), L), ncomp};
}

void write_samples(std::ofstream& out, const std::vector<double>& v) {
  out.write(reinterpret_cast<const char*>(v.data()),
            static_cast<std::streamsize>(v.size() * sizeof(double)));
}

void read_samples(std::ifstream& in, std::vector<double>& v) {
  in.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(v.size() * sizeof(double)));
}

}  // namespace

void write_field(const std::filesystem::path& path, const ScalarField& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  write_header(out, f.grid, 1);
  write_samples(out, f.v);
}

void write_field(const std::filesystem::path& path, const VectorField& u) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  write_header(out, u.grid, static_cast<std::uint32_t>(u.grid.dim()));
  for (const auto& c : u.comp) write_samples(out, c.v);
}

ScalarField read_scalar_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  Header h = read_header(in, path);
  if (h.ncomp != 1) throw std::runtime_error("expected scalar field: " + path.string());
  ScalarField f(h.grid);
  read_samples(in, f.v);
  if (!in) throw std::runtime_error("truncated field file: " + path.string());
  return f;
}

VectorField read_vector_field(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  Header h = read_header(in, path);
  if (h.ncomp != static_cast<std::uint32_t>(h.grid.dim()))
    throw std::runtime_error("expected vector field: " + path.string());
  VectorField u(h.grid);
  for (auto& c : u.comp) read_samples(in, c.v);
  if (!in) throw std::runtime_error("truncated field file: " + path.string());
  return u;
}

void write_field_csv(const std::filesystem::path& path, const VectorField& u) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  const int n = u.grid.dim();
  out << (n == 2 ? "x0,x1" : "x0,x1,x2");
  for (int a = 0; a < n; ++a) out << ",u" << a;
  out << "\n";
  out.precision(17);
  for_each_cell(u.grid, [&](std::size_t idx, const std::array<double, 3>& x) {
    for (int a = 0; a < n; ++a) out << (a ? "," : "") << x[a];
    for (int a = 0; a < n; ++a) out << "," << u.comp[a].v[idx];
    out << "\n";
  });
}

}  // namespace nsl
