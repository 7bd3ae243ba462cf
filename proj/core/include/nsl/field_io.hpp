#pragma once

#include <filesystem>
#include <string>

#include "nsl/grid.hpp"

namespace nsl {

/// Flat little-endian binary field container.
///
/// Layout: magic "NSLF", uint32 dim, uint32 points_per_axis, float64
/// box_length, uint32 component_count, then component_count blocks of
/// N^dim float64 samples in row-major order (last axis fastest).
void write_field(const std::filesystem::path& path, const ScalarField& f);
void write_field(const std::filesystem::path& path, const VectorField& u);

ScalarField read_scalar_field(const std::filesystem::path& path);
VectorField read_vector_field(const std::filesystem::path& path);

/// Row-major CSV dump (one line per cell: coordinates then components).
void write_field_csv(const std::filesystem::path& path, const VectorField& u);

}  // namespace nsl
