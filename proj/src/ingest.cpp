#include "egonet/ingest.hpp"

#include <charconv>
#include <fstream>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <unordered_set>

#include "egonet/errors.hpp"
#include "egonet/format.hpp"

namespace egonet {

namespace {

// Splits a line into exactly `n` comma-separated fields. Returns false when
// the field count differs.
bool split_fields(std::string_view line, std::string_view* out, std::size_t n) {
    std::size_t field = 0;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            if (field == n) return false;
            out[field++] = line.substr(start, i - start);
            start = i + 1;
        }
    }
    return field == n;
}

template <typename Int>
bool parse_int(std::string_view s, Int& out) {
    if (s.empty()) return false;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

bool parse_double(std::string_view s, double& out) {
    if (s.empty()) return false;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

class LineReader {
public:
    LineReader(const std::filesystem::path& path, const char* expected_header)
        : in_(path, std::ios::binary) {
        if (!in_.is_open()) {
            throw IoError("cannot open file: " + path.string());
        }
        std::string header;
        if (!std::getline(in_, header)) {
            throw SchemaError("missing header in " + path.string() +
                              " (expected '" + expected_header + "')");
        }
        strip_cr(header);
        if (header != expected_header) {
            throw SchemaError("bad header in " + path.string() + ": got '" +
                              header + "', expected '" + expected_header + "'");
        }
    }

    bool next(std::string& line) {
        if (!std::getline(in_, line)) return false;
        strip_cr(line);
        return true;
    }

private:
    static void strip_cr(std::string& s) {
        if (!s.empty() && s.back() == '\r') s.pop_back();
    }

    std::ifstream in_;
};

} // namespace

std::string to_csv_line(const CallRecord& r) {
    return r.origin + "," + r.dest + "," + std::to_string(r.timestamp) + "," +
           std::to_string(r.duration_s);
}

std::string to_csv_line(const SmsRecord& r) {
    return r.origin + "," + r.dest + "," + std::to_string(r.timestamp);
}

std::string to_csv_line(const BankRecord& r) {
    return r.user + "," + std::to_string(r.month) + "," + format_double(r.income);
}

ParseResult<CallRecord> parse_calls(const std::filesystem::path& path) {
    LineReader reader(path, kCallsHeader);
    ParseResult<CallRecord> result;
    std::string line;
    std::string_view f[4];
    while (reader.next(line)) {
        CallRecord rec;
        if (!split_fields(line, f, 4) || f[0].empty() || f[1].empty() ||
            !parse_int(f[2], rec.timestamp) || !parse_int(f[3], rec.duration_s) ||
            f[0] == f[1]) {
            ++result.skipped;
            continue;
        }
        rec.origin.assign(f[0]);
        rec.dest.assign(f[1]);
        result.records.push_back(std::move(rec));
    }
    return result;
}

ParseResult<SmsRecord> parse_sms(const std::filesystem::path& path) {
    LineReader reader(path, kSmsHeader);
    ParseResult<SmsRecord> result;
    std::string line;
    std::string_view f[3];
    while (reader.next(line)) {
        SmsRecord rec;
        if (!split_fields(line, f, 3) || f[0].empty() || f[1].empty() ||
            !parse_int(f[2], rec.timestamp) || f[0] == f[1]) {
            ++result.skipped;
            continue;
        }
        rec.origin.assign(f[0]);
        rec.dest.assign(f[1]);
        result.records.push_back(std::move(rec));
    }
    return result;
}

ParseResult<BankRecord> parse_bank(const std::filesystem::path& path) {
    LineReader reader(path, kBankHeader);
    ParseResult<BankRecord> result;
    std::string line;
    std::string_view f[3];
    std::unordered_map<std::string, std::unordered_set<std::int64_t>> seen;
    while (reader.next(line)) {
        BankRecord rec;
        if (!split_fields(line, f, 3) || f[0].empty() ||
            !parse_int(f[1], rec.month) || rec.month < 0 ||
            !parse_double(f[2], rec.income) || rec.income < 0.0) {
            ++result.skipped;
            continue;
        }
        rec.user.assign(f[0]);
        if (!seen[rec.user].insert(rec.month).second) {
            ++result.skipped; // duplicate (user, month): keep the first record
            continue;
        }
        result.records.push_back(std::move(rec));
    }
    return result;
}

} // namespace egonet
