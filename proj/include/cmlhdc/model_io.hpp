#pragma once

// Versioned flat model files. A short text header (one "key value" per line, closed by a
// "data" line) followed by row-major little-endian float64 blocks.
//
//   object model: S (d x n), A (d x e), G (e x n)
//   grid model:   P (d x W*H), A (d x 4)
//
// The pseudo-inverse is not stored; it is recomputed on load.

#include <filesystem>
#include <string>

#include "cmlhdc/cml.hpp"
#include "cmlhdc/grid_nav.hpp"

namespace cmlhdc {

inline constexpr int kModelFormatVersion = 1;

enum class ModelKind { object, grid };

std::string_view to_string(ModelKind kind) noexcept;

void save_cml(const std::filesystem::path& path, const Cml& cml);
void save_grid(const std::filesystem::path& path, const GridCml& grid);

/// Throw missing_model when the file does not exist, parse_error on a bad header or a wrong
/// kind, io_error on short reads.
Cml load_cml(const std::filesystem::path& path);
GridCml load_grid(const std::filesystem::path& path);

/// Reads only the header.
ModelKind peek_model_kind(const std::filesystem::path& path);

}  // namespace cmlhdc
