#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace symboleo
{

// Calendar date at day granularity.
using Date = std::chrono::sys_days;

// Instant at minute granularity. Date-only inputs denote 00:00.
using Timestamp = std::chrono::sys_time<std::chrono::minutes>;

enum class DurationUnit { Days, Weeks, Months };

struct Duration
{
  int magnitude = 1;
  DurationUnit unit = DurationUnit::Days;

  bool operator==(const Duration &) const = default;
};

// Strict ISO-8601 `YYYY-MM-DD`.
std::optional<Date> parse_iso_date(std::string_view text);
std::string format_iso_date(Date date);

// `YYYY-MM-DD` or `YYYY-MM-DDTHH:MM`.
std::optional<Timestamp> parse_timestamp(std::string_view text);
// Always `YYYY-MM-DDTHH:MM`.
std::string format_timestamp(Timestamp ts);

inline Timestamp start_of(Date date) { return Timestamp{date.time_since_epoch()}; }

// Calendar-month addition clamps to the last day of the target month.
Timestamp add_duration(Timestamp ts, const Duration & duration);

// English month names used by the controlled language ("March 31, 2024").
std::optional<unsigned> month_from_name(std::string_view name);
std::string_view month_name(unsigned month);
std::string format_long_date(Date date);

std::string_view unit_name(DurationUnit unit, int magnitude);
std::optional<DurationUnit> parse_unit(std::string_view text);

}  // namespace symboleo
