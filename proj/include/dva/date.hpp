#pragma once

#include <chrono>
#include <compare>
#include <string>
#include <string_view>

namespace dva {

/// Calendar date used for quarter-end observations.
class Date {
public:
    constexpr Date() = default;
    constexpr Date(int year, unsigned month, unsigned day)
        : ymd_{std::chrono::year{year}, std::chrono::month{month}, std::chrono::day{day}} {}
    explicit constexpr Date(std::chrono::year_month_day ymd) : ymd_(ymd) {}

    /// Parses "YYYY-MM-DD"; throws ValidationError on anything else.
    static Date parse_iso(std::string_view text);

    /// Parses the compact quarter label style "30Jun07" (two-digit years map to 20xx).
    static Date parse_compact(std::string_view text);

    /// Accepts either of the two formats above.
    static Date parse(std::string_view text);

    int year() const { return static_cast<int>(ymd_.year()); }
    unsigned month() const { return static_cast<unsigned>(ymd_.month()); }
    unsigned day() const { return static_cast<unsigned>(ymd_.day()); }

    bool valid() const { return ymd_.ok(); }
    bool is_quarter_end() const;

    std::string iso() const;
    std::string compact() const;  // "30Jun07"

    /// Quarter label such as "Q1-2009".
    std::string quarter_label() const;

    friend constexpr auto operator<=>(const Date& a, const Date& b) {
        return std::chrono::sys_days{a.ymd_} <=> std::chrono::sys_days{b.ymd_};
    }
    friend constexpr bool operator==(const Date& a, const Date& b) { return a.ymd_ == b.ymd_; }

private:
    std::chrono::year_month_day ymd_{std::chrono::year{1970}, std::chrono::January, std::chrono::day{1}};
};

}  // namespace dva
