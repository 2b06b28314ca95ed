#include "wrem/report.hpp"

#include <fstream>
#include <sstream>

#include "wrem/errors.hpp"

namespace wrem {

nlohmann::ordered_json report_header(const std::string& command, const nlohmann::ordered_json& config) {
    return {{"schema_version", schema_version}, {"command", command}, {"config", config}};
}

std::string dump_json(const nlohmann::ordered_json& j) { return j.dump(2) + "\n"; }

nlohmann::ordered_json parse_json(const std::string& text) {
    try {
        return nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ValidationError(std::string("invalid JSON: ") + e.what());
    }
}

nlohmann::ordered_json read_json_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw ValidationError("cannot read " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_json(ss.str());
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ValidationError("cannot write " + path);
    os << text;
    if (!os) throw ValidationError("write failed: " + path);
}

} // namespace wrem
