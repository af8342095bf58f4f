#include <cmath>
#include <cstdio>
#include <fstream>

#include "cli.hpp"

namespace weylscat::cli {

std::string format_real(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";  // folds -0 so reruns cannot differ by the sign of zero
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", v);
    return buf;
}

void write_atomic(const fs::path& path, const std::string& content) {
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, path);
}

std::vector<std::string> manifest_problems(const json& m) {
    std::vector<std::string> p;
    auto need = [&](const char* key, bool (json::*is)() const noexcept, const char* type) {
        if (!m.contains(key)) {
            p.push_back(std::string("missing '") + key + "'");
        } else if (!(m[key].*is)()) {
            p.push_back(std::string("'") + key + "' must be " + type);
        }
    };
    if (!m.is_object()) return {"manifest is not an object"};
    need("command", &json::is_string, "a string");
    need("version", &json::is_string, "a string");
    need("config", &json::is_object, "an object");
    need("convention", &json::is_object, "an object");
    need("runs", &json::is_array, "an array");
    need("files", &json::is_array, "an array");
    need("timings", &json::is_object, "an object");
    need("checks", &json::is_array, "an array");
    if (!p.empty()) return p;
    for (const char* key : {"argument_order", "normalization"}) {
        if (!m["convention"].contains(key) || !m["convention"][key].is_string()) {
            p.push_back(std::string("convention.") + key + " must be a string");
        }
    }
    for (const auto& f : m["files"]) {
        if (!f.is_string()) p.push_back("files entries must be strings");
    }
    for (const auto& r : m["runs"]) {
        if (!r.is_object() || !r.contains("file") || !r["file"].is_string()) {
            p.push_back("each run needs a 'file' string");
            continue;
        }
        const auto& files = m["files"];
        if (std::find(files.begin(), files.end(), r["file"]) == files.end()) {
            p.push_back("run file '" + r["file"].get<std::string>() + "' not listed in files");
        }
    }
    for (const auto& c : m["checks"]) {
        if (!c.is_object() || !c.contains("name") || !c.contains("pass") || !c["pass"].is_boolean()) {
            p.push_back("each check needs 'name' and boolean 'pass'");
        }
    }
    return p;
}

}  // namespace weylscat::cli
