#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <unistd.h>
#include <vector>

#include "egonet/records.hpp"
#include "egonet/rng.hpp"

namespace testutil {

// Unique scratch directory, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        auto base = std::filesystem::temp_directory_path();
        std::random_device rd;
        path_ = base / ("egonet_" + tag + "_" + std::to_string(rd()) + "_" +
                        std::to_string(::getpid()));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path file(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(in),
                       std::istreambuf_iterator<char>());
}

inline egonet::CallRecord call(const std::string& o, const std::string& d,
                               std::uint64_t duration = 60, std::int64_t ts = 1500000000) {
    return {o, d, ts, duration};
}

inline egonet::SmsRecord sms(const std::string& o, const std::string& d,
                             std::int64_t ts = 1500000000) {
    return {o, d, ts};
}

// Random communication records over n users named n000..; roughly
// `edge_pairs` distinct pairs with calls and a sprinkle of SMS.
struct RandomRecords {
    std::vector<egonet::CallRecord> calls;
    std::vector<egonet::SmsRecord> sms;
};

inline std::string user_name(std::size_t i) {
    std::string digits = std::to_string(i);
    return "n" + std::string(digits.size() < 3 ? 3 - digits.size() : 0, '0') + digits;
}

inline RandomRecords random_records(std::size_t n_users, std::size_t edge_pairs,
                                    std::uint64_t seed) {
    egonet::Rng rng(seed);
    RandomRecords out;
    for (std::size_t e = 0; e < edge_pairs; ++e) {
        const std::size_t a = rng.below(n_users);
        std::size_t b = rng.below(n_users);
        if (a == b) b = (b + 1) % n_users;
        const std::string ua = user_name(a);
        const std::string ub = user_name(b);
        const std::uint64_t n_calls = 1 + rng.below(3);
        for (std::uint64_t c = 0; c < n_calls; ++c) {
            out.calls.push_back(call(rng.coin() ? ua : ub, rng.coin() ? ub : ua,
                                     rng.below(600)));
            if (out.calls.back().origin == out.calls.back().dest) out.calls.pop_back();
        }
        if (rng.coin()) {
            out.sms.push_back(sms(ua, ub));
        }
    }
    return out;
}

} // namespace testutil
