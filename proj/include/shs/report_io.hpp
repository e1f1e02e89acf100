#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "shs/adaptive.hpp"

namespace shs {

/// Shortest decimal string that parses back to exactly `x`.
std::string format_double(double x);

nlohmann::ordered_json report_to_json(const EstimateReport& report);

/// CSV with header level,N,b_hat,v_hat,cost.
std::string levels_csv(const std::vector<LevelRow>& rows);

/// Writes the bytes as is (LF line endings), creating parent directories.
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace shs
