#pragma once

#include <cstdint>
#include <string>

namespace egonet {

using UserId = std::string;

// One voice call: origin called dest at `timestamp` for `duration_s` seconds.
struct CallRecord {
    UserId origin;
    UserId dest;
    std::int64_t timestamp = 0;
    std::uint64_t duration_s = 0;

    bool operator==(const CallRecord&) const = default;
};

struct SmsRecord {
    UserId origin;
    UserId dest;
    std::int64_t timestamp = 0;

    bool operator==(const SmsRecord&) const = default;
};

// Monthly income observation; `month` is a 0-based index into the
// observation window.
struct BankRecord {
    UserId user;
    std::int64_t month = 0;
    double income = 0.0;

    bool operator==(const BankRecord&) const = default;
};

// CSV line forms matching the ingest formats (no trailing newline).
std::string to_csv_line(const CallRecord& r);
std::string to_csv_line(const SmsRecord& r);
std::string to_csv_line(const BankRecord& r);

} // namespace egonet
