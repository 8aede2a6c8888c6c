#pragma once

// Artifact emission helpers. Every emitted file starts with a comment line
// carrying the config hash so artifacts from different configs cannot be
// mixed up silently. Numbers are written with six significant digits,
// except where a format documents full precision. No timestamps here;
// provenance timing lives in the run report only, which keeps repeated
// runs byte-identical.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "cpsg/errors.hpp"

namespace cpsg::csvio {

inline std::string format_sig(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::uint64_t fnv1a64(const std::string& bytes, std::uint64_t h = 0xcbf29ce484222325ull) {
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

inline std::string file_bytes(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline std::string hash_hex(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

class ArtifactWriter {
public:
    ArtifactWriter(std::filesystem::path dir, std::string config_hash, std::string version)
        : dir_(std::move(dir)), hash_(std::move(config_hash)), version_(std::move(version)) {
        std::filesystem::create_directories(dir_);
    }

    std::ofstream open(const std::string& name) {
        const auto path = dir_ / name;
        std::ofstream out(path, std::ios::binary);  // LF line endings everywhere
        if (!out) throw ParseError("cannot write artifact: " + path.string());
        // JSON artifacts carry the hash as a field instead of a comment line.
        if (path.extension() != ".json")
            out << "# config " << hash_ << " cpsg " << version_ << "\n";
        written_.push_back(name);
        return out;
    }

    const std::vector<std::string>& written() const { return written_; }
    const std::filesystem::path& dir() const { return dir_; }
    const std::string& config_hash() const { return hash_; }
    const std::string& version() const { return version_; }

private:
    std::filesystem::path dir_;
    std::string hash_;
    std::string version_;
    std::vector<std::string> written_;
};

}  // namespace cpsg::csvio
