#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "kacmix/geometry.hpp"

namespace kacmix {

// round-trip-safe decimal rendering (17 significant digits)
std::string format_double(double value);

// Matrix text format: first line "n <dim> <field>" with field one of
// real-orthogonal | complex-unitary, then n whitespace-separated rows
// (complex entries as adjacent re/im pairs).
void write_matrix(std::ostream& out, const GroupElement& x);
void write_matrix_file(const std::filesystem::path& path, const GroupElement& x);
GroupElement read_matrix(std::istream& in);
GroupElement read_matrix_file(const std::filesystem::path& path);

// all group-element samples in a directory (files sorted by name)
std::vector<GroupElement> read_matrix_directory(const std::filesystem::path& dir);

}  // namespace kacmix
