#pragma once

#include <chrono>
#include <cinttypes>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

namespace lab {

inline constexpr const char* kToolVersion = "0.1.0";

inline std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

inline std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016" PRIx64, v);
    return buf;
}

/// Shortest round-trip decimal form with '.' as separator.
inline std::string number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class Csv {
public:
    explicit Csv(const std::vector<std::string>& header) { row(header); }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ += ',';
            out_ += quote(cells[i]);
        }
        out_ += "\r\n";
    }

    void row(const std::vector<double>& cells) {
        std::vector<std::string> s;
        for (double v : cells) s.push_back(number(v));
        row(s);
    }

    const std::string& str() const { return out_; }

private:
    static std::string quote(const std::string& cell) {
        if (cell.find_first_of(",\"\r\n") == std::string::npos) return cell;
        std::string q = "\"";
        for (char c : cell) {
            if (c == '"') q += '"';
            q += c;
        }
        return q + "\"";
    }

    std::string out_;
};

/// Writes through a temporary file in the same directory and renames it into place.
inline void write_atomic(const std::filesystem::path& path, const std::string& bytes) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp.string());
        f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!f) throw std::runtime_error("cannot write " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

struct CheckResult {
    std::string invariant;
    bool passed;
    std::string detail;
};

class Run {
public:
    Run(std::filesystem::path dir, std::string command, std::string config_hash)
        : dir_(std::move(dir)), command_(std::move(command)), hash_(std::move(config_hash)),
          start_(std::chrono::steady_clock::now()) {}

    const std::string& config_hash() const { return hash_; }

    void write(const std::string& name, const std::string& bytes) {
        write_atomic(dir_ / name, bytes);
        outputs_[name] = {{"bytes", bytes.size()}, {"fnv1a64", hex64(fnv1a(bytes))}};
    }

    /// JSON reports get the config hash attached and are written with sorted keys.
    void write_json(const std::string& name, nlohmann::json report) {
        report["config_hash"] = hash_;
        write(name, report.dump(2) + "\n");
    }

    void check(const std::string& invariant, bool passed, const std::string& detail) {
        checks_.push_back({invariant, passed, detail});
    }

    bool all_passed() const {
        for (const auto& c : checks_)
            if (!c.passed) return false;
        return true;
    }

    const std::vector<CheckResult>& checks() const { return checks_; }

    /// The manifest is written last; it is the only output that is not reproducible bitwise.
    void finish() {
        const double wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        nlohmann::json checks = nlohmann::json::array();
        for (const auto& c : checks_)
            checks.push_back({{"invariant", c.invariant}, {"passed", c.passed}, {"detail", c.detail}});
        nlohmann::json m{{"command", command_}, {"config_hash", hash_},     {"tool_version", kToolVersion},
                         {"wall_clock_seconds", wall}, {"outputs", outputs_}, {"checks", checks},
                         {"passed", all_passed()}};
        write_atomic(dir_ / "manifest.json", m.dump(2) + "\n");
    }

private:
    std::filesystem::path dir_;
    std::string command_;
    std::string hash_;
    std::chrono::steady_clock::time_point start_;
    nlohmann::json outputs_ = nlohmann::json::object();
    std::vector<CheckResult> checks_;
};

}  // namespace lab
