#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "nsl/field_io.hpp"
#include "nsl/initial_data.hpp"

using namespace nsl;

TEST_SUITE_BEGIN("field_io");

TEST_CASE("scalar and vector round-trips are bit exact") {
  const auto dir = std::filesystem::temp_directory_path() / "nsl_io_test";
  std::filesystem::create_directories(dir);
  Grid g(2, 16, 2.5);
  ScalarField f = random_band_limited(g, 5, 21);
  write_field(dir / "f.nslf", f);
  ScalarField f2 = read_scalar_field(dir / "f.nslf");
  CHECK(f2.grid == g);
  CHECK(f2.v == f.v);

  VectorField u = random_solenoidal(g, 5, 1.0, 22);
  write_field(dir / "u.nslf", u);
  VectorField u2 = read_vector_field(dir / "u.nslf");
  for (int a = 0; a < 2; ++a) CHECK(u2.comp[a].v == u.comp[a].v);

  write_field_csv(dir / "u.csv", u);
  std::ifstream csv(dir / "u.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "x0,x1,u0,u1");
}

TEST_CASE("bad files are rejected") {
  const auto dir = std::filesystem::temp_directory_path() / "nsl_io_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream bad(dir / "bad.nslf", std::ios::binary);
    bad << "not a field";
  }
  CHECK_THROWS_AS((void)read_scalar_field(dir / "bad.nslf"), std::runtime_error);
  CHECK_THROWS_AS((void)read_scalar_field(dir / "missing.nslf"), std::runtime_error);

  Grid g(2, 16, 1.0);
  write_field(dir / "scalar.nslf", ScalarField(g));
  CHECK_THROWS_AS((void)read_vector_field(dir / "scalar.nslf"), std::runtime_error);
}

TEST_SUITE_END();
