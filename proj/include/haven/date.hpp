#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace haven {

/// Calendar day stored as a serial count of days since 1970-01-01.
/// Proleptic Gregorian; no time-of-day, no time zones.
class Date {
public:
    Date() = default;
    explicit Date(std::int32_t serial) : serial_(serial) {}

    static Date from_ymd(int year, int month, int day);
    /// Parse "YYYY-MM-DD". Throws Error on anything else.
    static Date parse(const std::string& iso);

    [[nodiscard]] std::int32_t serial() const { return serial_; }
    [[nodiscard]] std::string to_string() const;  // "YYYY-MM-DD"

    [[nodiscard]] Date plus_days(int n) const { return Date(serial_ + n); }

    friend auto operator<=>(const Date&, const Date&) = default;

private:
    std::int32_t serial_ = 0;
};

/// Whole days from a to b (positive when b is later).
inline int days_between(Date a, Date b) { return b.serial() - a.serial(); }

}  // namespace haven
