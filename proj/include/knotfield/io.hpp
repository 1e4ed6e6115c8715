#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "knotfield/curve.hpp"
#include "knotfield/solidangle.hpp"

namespace knotfield {

/// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view bytes);

/// Hash of the canonical text form of the link (see format_link).
std::string link_hash(const Link& link);

struct NamedScalars {
    std::string name;
    std::span<const double> values;  // grid order: k fastest
};

/// Legacy VTK structured-points file with float64 scalars. The format fixes
/// big-endian payloads and x-fastest ordering; values are reordered on write.
void write_vtk_legacy(const std::filesystem::path& path, const GridSpec& grid, const std::vector<NamedScalars>& arrays,
                      const std::string& title = "knotfield");

/// Bare little-endian float64 dump in grid order (k fastest). With several
/// arrays the components are interleaved per node.
void write_raw(const std::filesystem::path& path, const std::vector<std::span<const double>>& arrays);

std::vector<double> read_raw(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, std::string_view text);
std::string read_text(const std::filesystem::path& path);

}  // namespace knotfield
