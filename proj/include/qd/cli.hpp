#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

namespace qd {

inline constexpr const char *kEngineVersion = "qd 0.1.0";

/// Exit codes: 0 ok, 1 usage or parse error, 2 verification failure,
/// 3 bound or budget exhaustion.
int run_cli(const std::vector<std::string> &args, std::ostream &out, std::ostream &err);

/// Rows of several reports, deduplicated and sorted by (n, p, object, route).
nlohmann::json merge_reports(const std::vector<nlohmann::json> &reports);

std::string rows_csv(const nlohmann::json &report);
std::string rows_text(const nlohmann::json &report);

} // namespace qd
