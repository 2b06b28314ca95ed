#pragma once

#include <string>

#include "json.hpp"

namespace wrem {

inline constexpr int schema_version = 1;

// {"schema_version", "command", "config"} header shared by every CLI report.
nlohmann::ordered_json report_header(const std::string& command, const nlohmann::ordered_json& config);

std::string dump_json(const nlohmann::ordered_json& j);
nlohmann::ordered_json parse_json(const std::string& text);
nlohmann::ordered_json read_json_file(const std::string& path);

// Throws ValidationError when the file cannot be written.
void write_text_file(const std::string& path, const std::string& text);

} // namespace wrem
