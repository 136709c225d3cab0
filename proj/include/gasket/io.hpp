#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>

#include "gasket/lattice.hpp"
#include <string>

namespace gasket {

/// Shortest round-trip decimal form of a double (locale-independent;
/// integral values print without a fractional part).
std::string format_double(double value);

/// Write-then-rename so readers never observe partial files.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

/// Streaming variant for large outputs.
void write_stream_atomic(const std::filesystem::path& path,
                         const std::function<void(std::ostream&)>& writer);

std::string read_file(const std::filesystem::path& path);

/// "a,b" keys used by rotor/height JSON maps.
std::string coord_key(LatticeCoord v);
LatticeCoord parse_coord_key(const std::string& key);

}  // namespace gasket
