#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace sheetlab {

// Shortest round-trip text is not what we want here: output is fixed at 17
// significant digits so files diff cleanly across platforms.
std::string format_double(double value);

std::string csv_quote(std::string_view field);

std::uint64_t fnv1a64(std::string_view data);

// "# sheetlab <version> config-hash=<16 hex digits>"
std::string artifact_header(std::string_view canonical_config);

}  // namespace sheetlab
