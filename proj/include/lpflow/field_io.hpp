#pragma once

#include <filesystem>
#include <variant>

#include "lpflow/field.hpp"

namespace lpflow {

/// LPF1 file layout (little endian):
///   "LPF1" | u8 version=1 | u8 kind | u8 d | u8 reserved=0 | u32 n x d |
///   f64 (re, im) pairs, row-major, components concatenated.
/// kind: 0 scalar physical, 1 scalar spectral, 2 vector physical, 3 vector spectral.
enum class FieldKind : std::uint8_t {
  scalar_physical = 0,
  scalar_spectral = 1,
  vector_physical = 2,
  vector_spectral = 3,
};

void write_field(const GridField& f, const std::filesystem::path& path);
void write_field(const VectorField& u, const std::filesystem::path& path);

using StoredField = std::variant<GridField, VectorField>;

/// Throws FormatError on bad magic/version/kind, inconsistent dimensions or a
/// payload that does not match the header.
StoredField read_field(const std::filesystem::path& path);
GridField read_scalar_field(const std::filesystem::path& path);
VectorField read_vector_field(const std::filesystem::path& path);

}  // namespace lpflow
