#pragma once

#include <cstddef>
#include <filesystem>
#include <vector>

#include "egonet/records.hpp"

namespace egonet {

// Parsed records plus the number of malformed data lines that were skipped.
// records.size() + skipped always equals the number of data lines read.
template <typename Record>
struct ParseResult {
    std::vector<Record> records;
    std::size_t skipped = 0;
};

// Strict headers: a missing file is an IoError, a wrong header a SchemaError.
// Malformed data lines (bad field count, non-numeric values, violated record
// invariants) are skipped and counted, never fatal.
inline constexpr const char* kCallsHeader = "origin,dest,timestamp,duration_s";
inline constexpr const char* kSmsHeader = "origin,dest,timestamp";
inline constexpr const char* kBankHeader = "user,month,income";

ParseResult<CallRecord> parse_calls(const std::filesystem::path& path);
ParseResult<SmsRecord> parse_sms(const std::filesystem::path& path);
// Duplicate (user, month) keys and negative incomes are skipped and counted.
ParseResult<BankRecord> parse_bank(const std::filesystem::path& path);

} // namespace egonet
