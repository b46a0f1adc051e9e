#include "dva/date.hpp"

#include "dva/errors.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>

namespace dva {

namespace {

constexpr std::array<std::string_view, 12> kMonthAbbrev = {
    "Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

int parse_digits(std::string_view s, std::string_view whole) {
    int value = 0;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            throw ValidationError("invalid date '" + std::string(whole) + "'");
        }
    }
    std::from_chars(s.data(), s.data() + s.size(), value);
    return value;
}

Date checked(Date d, std::string_view text) {
    if (!d.valid()) throw ValidationError("invalid calendar date '" + std::string(text) + "'");
    return d;
}

}  // namespace

Date Date::parse_iso(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw ValidationError("expected ISO-8601 date YYYY-MM-DD, got '" + std::string(text) + "'");
    }
    const int y = parse_digits(text.substr(0, 4), text);
    const int m = parse_digits(text.substr(5, 2), text);
    const int d = parse_digits(text.substr(8, 2), text);
    return checked(Date(y, static_cast<unsigned>(m), static_cast<unsigned>(d)), text);
}

Date Date::parse_compact(std::string_view text) {
    if (text.size() != 7) {
        throw ValidationError("expected date like 30Jun07, got '" + std::string(text) + "'");
    }
    const int d = parse_digits(text.substr(0, 2), text);
    const int y = parse_digits(text.substr(5, 2), text);
    const auto mon = text.substr(2, 3);
    for (std::size_t i = 0; i < kMonthAbbrev.size(); ++i) {
        if (kMonthAbbrev[i] == mon) {
            return checked(Date(2000 + y, static_cast<unsigned>(i + 1), static_cast<unsigned>(d)), text);
        }
    }
    throw ValidationError("unknown month in '" + std::string(text) + "'");
}

Date Date::parse(std::string_view text) {
    if (text.size() == 10) return parse_iso(text);
    return parse_compact(text);
}

bool Date::is_quarter_end() const {
    if (!valid() || month() % 3 != 0) return false;
    const std::chrono::year_month_day_last last{ymd_.year(), std::chrono::month_day_last{ymd_.month()}};
    return ymd_.day() == last.day();
}

std::string Date::iso() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year(), month(), day());
    return buf;
}

std::string Date::compact() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02u%s%02d", day(), std::string(kMonthAbbrev[month() - 1]).c_str(),
                  year() % 100);
    return buf;
}

std::string Date::quarter_label() const {
    return "Q" + std::to_string((month() + 2) / 3) + "-" + std::to_string(year());
}

}  // namespace dva
