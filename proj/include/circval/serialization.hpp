#pragma once

#include <string>

#include "json.hpp"

#include "circval/kernel.hpp"
#include "circval/plfunction.hpp"

namespace circval {

inline constexpr const char* kLibraryVersion = "0.1.0";

nlohmann::json plfunction_to_json(const PLFunction& f);
PLFunction plfunction_from_json(const nlohmann::json& j);

/// {"breakpoints":[{"s":"p/q","v":"p/q"},...]}; round-trips bit-exactly on
/// canonical forms.
std::string serialize_plfunction(const PLFunction& f);
PLFunction parse_plfunction(const std::string& text);

nlohmann::json kernel_to_json(const KernelSpec& spec);
KernelSpec kernel_from_json(const nlohmann::json& j);

PLFunction load_plfunction_file(const std::string& path);
KernelSpec load_kernel_file(const std::string& path);

/// Deterministic shortest-17-digit rendering used in every CSV/JSON output.
std::string format_double(double value);

/// Writes via a temporary file and rename, so readers never see partial output.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace circval
