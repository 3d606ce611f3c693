#pragma once

// Output directory bookkeeping and the run manifest (SHA-256 digests of
// every file written).

#include <array>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include <openssl/evp.h>

#include "mtip/io/config.hpp"
#include "mtip/io/csv.hpp"

namespace mtip::io {

inline constexpr const char* kToolName = "mtip";
inline constexpr const char* kToolVersion = "1.0.0";

/// Lower-case hex SHA-256 of a file's bytes.
inline std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string() + " for hashing");
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
        throw IoError("SHA-256 unavailable");
    std::array<char, 1 << 16> buf;
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    if (in.bad()) throw IoError("failed reading " + path.string());
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), md, &len);
    static constexpr char hex[] = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[md[i] >> 4];
        out += hex[md[i] & 0xF];
    }
    return out;
}

inline std::string utc_timestamp(std::chrono::system_clock::time_point tp) {
    const std::time_t t = std::chrono::system_clock::to_time_t(tp);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

/// Files written into one output directory. rollback() deletes all of them
/// and any directories this object created.
class OutputDir {
public:
    explicit OutputDir(std::filesystem::path root) : root_(std::move(root)) {}

    const std::filesystem::path& root() const noexcept { return root_; }

    /// Registers `rel` and returns its absolute location, creating parents.
    std::filesystem::path file(const std::filesystem::path& rel) {
        const auto full = root_ / rel;
        make_dirs(full.parent_path());
        files_.push_back(rel);
        return full;
    }

    const std::vector<std::filesystem::path>& files() const noexcept { return files_; }

    void rollback() noexcept {
        std::error_code ec;
        for (const auto& f : files_) std::filesystem::remove(root_ / f, ec);
        for (auto it = created_.rbegin(); it != created_.rend(); ++it) std::filesystem::remove(*it, ec);
        files_.clear();
        created_.clear();
    }

private:
    void make_dirs(const std::filesystem::path& dir) {
        std::vector<std::filesystem::path> missing;
        for (auto p = dir; !p.empty() && !std::filesystem::exists(p); p = p.parent_path()) {
            missing.push_back(p);
            if (p == p.parent_path()) break;
        }
        for (auto it = missing.rbegin(); it != missing.rend(); ++it) {
            std::error_code ec;
            std::filesystem::create_directory(*it, ec);
            if (ec) throw IoError("cannot create directory " + it->string() + ": " + ec.message());
            created_.push_back(*it);
        }
        if (!std::filesystem::is_directory(dir)) throw IoError(dir.string() + " is not a directory");
    }

    std::filesystem::path root_;
    std::vector<std::filesystem::path> files_;
    std::vector<std::filesystem::path> created_;
};

struct ManifestInfo {
    std::string command;
    RunConfig config;
    std::chrono::system_clock::time_point started;
    std::chrono::system_clock::time_point finished;
    /// Delay actually integrated, per experiment step size.
    double tau_eff = 0.0;
    json summary = json::object();
};

/// Writes manifest.json listing every registered file with size and digest.
inline void write_manifest(OutputDir& out, const ManifestInfo& info) {
    json files = json::array();
    for (const auto& rel : out.files()) {
        const auto full = out.root() / rel;
        files.push_back({{"path", rel.generic_string()},
                         {"bytes", static_cast<std::uint64_t>(std::filesystem::file_size(full))},
                         {"sha256", sha256_file(full)}});
    }
    json m;
    m["tool"] = kToolName;
    m["version"] = kToolVersion;
    m["command"] = info.command;
    m["hash"] = "sha256";
    m["started"] = utc_timestamp(info.started);
    m["finished"] = utc_timestamp(info.finished);
    m["tau_eff"] = info.tau_eff;
    m["config"] = to_json(info.config);
    m["files"] = std::move(files);
    m["summary"] = info.summary;

    const auto path = out.file("manifest.json");
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    const std::string text = m.dump(2) + "\n";
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    f.close();
    if (f.fail()) throw IoError("failed writing " + path.string());
}

}  // namespace mtip::io
