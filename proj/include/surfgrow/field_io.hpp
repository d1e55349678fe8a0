#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "surfgrow/fields.hpp"

namespace surfgrow::io {

// SPF1: "SPF1", L (f64), N (u32), mode count (u32), coefficients (f64, lattice order).
// GRD1: "GRD1", L (f64), n (u32), values (f64, row-major).
// All little-endian.

void write_field(std::ostream& os, const SpectralField& u);
SpectralField read_field(std::istream& is);
void write_grid(std::ostream& os, const PhysicalGrid& g);
PhysicalGrid read_grid(std::istream& is);

void save_field(const std::filesystem::path& path, const SpectralField& u);
SpectralField load_field(const std::filesystem::path& path);
void save_grid(const std::filesystem::path& path, const PhysicalGrid& g);
PhysicalGrid load_grid(const std::filesystem::path& path);

/// Binary PGM (P5, maxval 255). Values are mapped linearly from [min, max] onto [0, 255];
/// a constant grid maps to mid-gray.
void save_pgm(const std::filesystem::path& path, const PhysicalGrid& g);

}  // namespace surfgrow::io
