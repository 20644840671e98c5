#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace irb::util {

struct Date {
    int year = 0;
    int month = 0;  // 1..12
    int day = 0;    // 1..31

    bool valid() const;
    /// YYYY-MM-DD
    std::string iso() const;

    auto operator<=>(const Date&) const = default;
};

/// Accepts ISO (2024-11-30), "30 November 2024", "30 Nov 2024",
/// "November 30, 2024" and "Nov 30, 2024". Month names are
/// case-insensitive; anything else is nullopt.
std::optional<Date> parse_date(std::string_view text);

std::optional<Date> parse_iso_date(std::string_view text);

/// Whole calendar months between d and reference (d <= reference),
/// day-level remainders floored away.
int months_between(const Date& d, const Date& reference);

}  // namespace irb::util
