#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "egonet/errors.hpp"
#include "egonet/ingest.hpp"
#include "test_util.hpp"

using namespace egonet;
using testutil::TempDir;
using testutil::write_file;

TEST_CASE("parse_calls maps fields directly") {
    TempDir dir("calls");
    write_file(dir.file("calls.csv"),
               "origin,dest,timestamp,duration_s\na1,b2,1500000000,60\n");
    const auto result = parse_calls(dir.file("calls.csv"));
    REQUIRE(result.records.size() == 1);
    CHECK(result.skipped == 0);
    CHECK(result.records[0] == CallRecord{"a1", "b2", 1500000000, 60});
}

TEST_CASE("parse_calls skips self-calls and malformed lines") {
    TempDir dir("calls");
    write_file(dir.file("calls.csv"), "origin,dest,timestamp,duration_s\n"
                                      "a1,a1,1500000000,60\n"   // self-call
                                      "a1,b2,1500000000,30\n"
                                      "a2,b2,1500000000,xx\n"   // non-numeric duration
                                      "a3,b2,1500000000,-5\n"   // negative duration
                                      "a4,b2,1500000000\n"      // missing field
                                      "a5,b2,1500000001,10\n"
                                      "a6,b2,1500000002,20\n");
    const auto result = parse_calls(dir.file("calls.csv"));
    CHECK(result.records.size() == 3);
    CHECK(result.skipped == 4);
    // order preserved
    CHECK(result.records[0].origin == "a1");
    CHECK(result.records[1].origin == "a5");
    CHECK(result.records[2].origin == "a6");
}

TEST_CASE("parse_calls fatal errors") {
    TempDir dir("calls");
    CHECK_THROWS_AS(parse_calls(dir.file("missing.csv")), IoError);
    write_file(dir.file("bad_header.csv"), "origin,dest,ts,duration\na,b,1,2\n");
    CHECK_THROWS_AS(parse_calls(dir.file("bad_header.csv")), SchemaError);
    write_file(dir.file("empty.csv"), "");
    CHECK_THROWS_AS(parse_calls(dir.file("empty.csv")), SchemaError);
}

TEST_CASE("parse_sms basics") {
    TempDir dir("sms");
    write_file(dir.file("sms.csv"), "origin,dest,timestamp\na1,b2,1500000100\n");
    const auto result = parse_sms(dir.file("sms.csv"));
    REQUIRE(result.records.size() == 1);
    CHECK(result.records[0] == SmsRecord{"a1", "b2", 1500000100});

    write_file(dir.file("only_header.csv"), "origin,dest,timestamp\n");
    const auto empty = parse_sms(dir.file("only_header.csv"));
    CHECK(empty.records.empty());
    CHECK(empty.skipped == 0);

    write_file(dir.file("mixed.csv"), "origin,dest,timestamp\n"
                                      "a1,b2,1\n"
                                      "a1,b2\n"
                                      "a2,b3,2\n");
    const auto mixed = parse_sms(dir.file("mixed.csv"));
    CHECK(mixed.records.size() == 2);
    CHECK(mixed.skipped == 1);
}

TEST_CASE("parse_bank duplicate and negative rules") {
    TempDir dir("bank");
    write_file(dir.file("bank.csv"), "user,month,income\na1,0,2500.50\n");
    const auto one = parse_bank(dir.file("bank.csv"));
    REQUIRE(one.records.size() == 1);
    CHECK(one.records[0].user == "a1");
    CHECK(one.records[0].month == 0);
    CHECK(one.records[0].income == doctest::Approx(2500.50));

    write_file(dir.file("dup.csv"), "user,month,income\na1,0,100\na1,0,200\n");
    const auto dup = parse_bank(dir.file("dup.csv"));
    REQUIRE(dup.records.size() == 1);
    CHECK(dup.records[0].income == doctest::Approx(100.0));
    CHECK(dup.skipped == 1);

    write_file(dir.file("neg.csv"), "user,month,income\na1,1,-5\n");
    const auto neg = parse_bank(dir.file("neg.csv"));
    CHECK(neg.records.empty());
    CHECK(neg.skipped == 1);

    // same user, different months is fine
    write_file(dir.file("months.csv"), "user,month,income\na1,0,10\na1,1,20\na1,2,30\n");
    CHECK(parse_bank(dir.file("months.csv")).records.size() == 3);
}

TEST_CASE("record round-trip through CSV") {
    TempDir dir("roundtrip");
    Rng rng(7);
    std::string calls_text = std::string(kCallsHeader) + "\n";
    std::string sms_text = std::string(kSmsHeader) + "\n";
    std::string bank_text = std::string(kBankHeader) + "\n";
    std::vector<CallRecord> calls;
    std::vector<SmsRecord> sms;
    std::vector<BankRecord> bank;
    for (int i = 0; i < 200; ++i) {
        const CallRecord c{"u" + std::to_string(rng.below(50)),
                           "v" + std::to_string(rng.below(50)),
                           static_cast<std::int64_t>(rng.below(2000000000)),
                           rng.below(10000)};
        calls.push_back(c);
        calls_text += to_csv_line(c) + "\n";
        const SmsRecord s{"u" + std::to_string(rng.below(50)),
                          "v" + std::to_string(rng.below(50)),
                          static_cast<std::int64_t>(rng.below(2000000000))};
        sms.push_back(s);
        sms_text += to_csv_line(s) + "\n";
        const BankRecord b{"u" + std::to_string(i),
                           static_cast<std::int64_t>(rng.below(3)),
                           rng.next_double() * 10000.0};
        bank.push_back(b);
        bank_text += to_csv_line(b) + "\n";
    }
    write_file(dir.file("calls.csv"), calls_text);
    write_file(dir.file("sms.csv"), sms_text);
    write_file(dir.file("bank.csv"), bank_text);

    const auto parsed_calls = parse_calls(dir.file("calls.csv"));
    CHECK(parsed_calls.skipped == 0);
    CHECK(parsed_calls.records == calls);
    const auto parsed_sms = parse_sms(dir.file("sms.csv"));
    CHECK(parsed_sms.skipped == 0);
    CHECK(parsed_sms.records == sms);
    const auto parsed_bank = parse_bank(dir.file("bank.csv"));
    CHECK(parsed_bank.skipped == 0);
    CHECK(parsed_bank.records == bank);

    // parsing is deterministic
    CHECK(parse_calls(dir.file("calls.csv")).records == parsed_calls.records);
}

TEST_CASE("returned + skipped = data lines") {
    TempDir dir("count");
    Rng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        std::string text = std::string(kCallsHeader) + "\n";
        std::size_t lines = 0;
        for (int i = 0; i < 50; ++i) {
            ++lines;
            switch (rng.below(4)) {
                case 0: text += "a,a,1,1\n"; break;      // self-call
                case 1: text += "a,b,zz,1\n"; break;     // bad timestamp
                case 2: text += "a,b,1\n"; break;        // missing field
                default: text += "a,b,1,1\n"; break;     // valid
            }
        }
        write_file(dir.file("f.csv"), text);
        const auto result = parse_calls(dir.file("f.csv"));
        CHECK(result.records.size() + result.skipped == lines);
    }
}
