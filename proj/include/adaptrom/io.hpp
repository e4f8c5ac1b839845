#pragma once

#include "adaptrom/linalg.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>

namespace adaptrom {

// ROMX matrix file: "ROMX", u32 version, u64 rows, u64 cols, then rows*cols
// float64 values in column-major order. All fields little-endian.
inline constexpr char kRomxMagic[4] = {'R', 'O', 'M', 'X'};
inline constexpr std::uint32_t kRomxVersion = 1;
inline constexpr std::size_t kRomxHeaderBytes = 4 + 4 + 8 + 8;

void write_matrix(std::ostream& out, const Matrix& m);
Matrix read_matrix(std::istream& in);

void write_matrix(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix(const std::filesystem::path& path);

/// Writes values laid out on an nx x ny grid (index j * nx + i) as CSV,
/// one line per y row, one column per x.
void write_grid_csv(const std::filesystem::path& path, std::span<const double> values, Index nx, Index ny);

}  // namespace adaptrom
