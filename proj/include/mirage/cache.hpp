#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <string>

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <json.hpp>

#include "mirage/errors.hpp"
#include "mirage/text.hpp"

namespace mirage {

// One cached backend answer. score is absent for generative tasks, whose
// payload is the raw response text.
struct CacheEntry {
    std::optional<double> score;
    std::string raw_response;
    std::string backend_id;
};

// Content-addressed judgment store. Keys are canonical request strings;
// the FNV hash only indexes the in-memory map and lookups always compare the
// full canonical key, so hash collisions cannot alias entries.
//
// Disk format is JSONL, one entry per line, appended under an advisory
// flock so concurrent runs interleave whole lines. Identical keys always
// carry identical scores, so last-writer-wins is harmless.
class JudgeCache {
public:
    JudgeCache() = default;

    explicit JudgeCache(std::filesystem::path file) : file_(std::move(file)) {
        load();
    }

    std::optional<CacheEntry> find(const std::string& canonical_key) const {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = entries_.find(canonical_key);
        if (it == entries_.end()) {
            ++misses_;
            return std::nullopt;
        }
        ++hits_;
        return it->second;
    }

    void put(const std::string& canonical_key, const CacheEntry& entry) {
        {
            std::lock_guard<std::mutex> lock(mu_);
            entries_[canonical_key] = entry;
        }
        if (!file_.empty()) append_line(encode(canonical_key, entry));
    }

    std::size_t size() const {
        std::lock_guard<std::mutex> lock(mu_);
        return entries_.size();
    }

    std::size_t hits() const {
        std::lock_guard<std::mutex> lock(mu_);
        return hits_;
    }

    std::size_t misses() const {
        std::lock_guard<std::mutex> lock(mu_);
        return misses_;
    }

    const std::filesystem::path& file() const { return file_; }

    // Rewrites the backing file deduplicated, dropping corrupt lines.
    // Returns the number of lines removed.
    std::size_t gc() {
        if (file_.empty()) return 0;
        std::lock_guard<std::mutex> lock(mu_);
        std::size_t lines_before = 0;
        {
            std::ifstream in(file_);
            std::string line;
            while (std::getline(in, line)) {
                if (!line.empty()) ++lines_before;
            }
        }
        std::string out;
        for (const auto& [key, entry] : entries_) {
            out += encode(key, entry);
            out.push_back('\n');
        }
        std::filesystem::path tmp = file_;
        tmp += ".tmp";
        {
            std::ofstream o(tmp, std::ios::binary | std::ios::trunc);
            o << out;
        }
        std::filesystem::rename(tmp, file_);
        return lines_before > entries_.size() ? lines_before - entries_.size() : 0;
    }

private:
    static std::string encode(const std::string& key, const CacheEntry& entry) {
        nlohmann::json j{{"key", fnv1a64_hex(key)},
                         {"canonical", key},
                         {"raw", entry.raw_response},
                         {"backend", entry.backend_id}};
        if (entry.score) j["score"] = *entry.score;
        return j.dump();
    }

    void load() {
        if (file_.empty() || !std::filesystem::exists(file_)) return;
        std::ifstream in(file_);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
            if (j.is_discarded() || !j.is_object() || !j.contains("canonical")) continue;
            CacheEntry e;
            if (j.contains("score") && j["score"].is_number()) e.score = j["score"].get<double>();
            if (j.contains("raw") && j["raw"].is_string()) e.raw_response = j["raw"].get<std::string>();
            if (j.contains("backend") && j["backend"].is_string()) {
                e.backend_id = j["backend"].get<std::string>();
            }
            entries_[j["canonical"].get<std::string>()] = std::move(e);
        }
    }

    void append_line(const std::string& line) {
        if (file_.has_parent_path()) std::filesystem::create_directories(file_.parent_path());
        int fd = ::open(file_.c_str(), O_WRONLY | O_APPEND | O_CREAT, 0644);
        if (fd < 0) throw FormatError("cannot open cache file " + file_.string());
        ::flock(fd, LOCK_EX);
        std::string data = line + "\n";
        ssize_t written = ::write(fd, data.data(), data.size());
        ::flock(fd, LOCK_UN);
        ::close(fd);
        if (written != static_cast<ssize_t>(data.size())) {
            throw FormatError("short write to cache file " + file_.string());
        }
    }

    std::filesystem::path file_;
    mutable std::mutex mu_;
    std::map<std::string, CacheEntry> entries_;
    mutable std::size_t hits_ = 0;
    mutable std::size_t misses_ = 0;
};

}  // namespace mirage
