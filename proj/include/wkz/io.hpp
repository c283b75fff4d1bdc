#pragma once

// Deterministic formatting and whole-file output.  Reports are built in
// memory and written in one shot so a failed run never leaves partial files.

#include <cstdint>
#include <string>
#include <vector>

namespace wkz {

// Shortest round-trip decimal for a double ("%.17g" trimmed), locale-free.
std::string fmt_double(double v);
std::string fmt_double(double v, int precision); // fixed significant digits

// FNV-1a 64-bit, hex string; used as the config digest embedded in reports.
std::string fnv1a_hex(const std::string& data);

// Write whole file (throws on failure); no partial content on error paths.
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

} // namespace wkz
