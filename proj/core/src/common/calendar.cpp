#include "symboleo/common/calendar.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace symboleo
{

namespace
{

constexpr std::array<std::string_view, 12> kMonths{
  "January", "February", "March",     "April",   "May",      "June",
  "July",    "August",   "September", "October", "November", "December"};

std::optional<int> fixed_digits(std::string_view text, std::size_t pos, std::size_t count)
{
  if (pos + count > text.size()) {
    return std::nullopt;
  }
  int value = 0;
  for (std::size_t i = pos; i < pos + count; ++i) {
    const char c = text[i];
    if (c < '0' || c > '9') {
      return std::nullopt;
    }
    value = value * 10 + (c - '0');
  }
  return value;
}

}  // namespace

std::optional<Date> parse_iso_date(std::string_view text)
{
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
    return std::nullopt;
  }
  const auto y = fixed_digits(text, 0, 4);
  const auto m = fixed_digits(text, 5, 2);
  const auto d = fixed_digits(text, 8, 2);
  if (!y || !m || !d) {
    return std::nullopt;
  }
  const std::chrono::year_month_day ymd{
    std::chrono::year{*y}, std::chrono::month{static_cast<unsigned>(*m)},
    std::chrono::day{static_cast<unsigned>(*d)}};
  if (!ymd.ok()) {
    return std::nullopt;
  }
  return Date{ymd};
}

std::string format_iso_date(Date date)
{
  const std::chrono::year_month_day ymd{date};
  char buf[16];
  std::snprintf(
    buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
    static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

std::optional<Timestamp> parse_timestamp(std::string_view text)
{
  if (text.size() == 10) {
    if (auto d = parse_iso_date(text)) {
      return start_of(*d);
    }
    return std::nullopt;
  }
  if (text.size() != 16 || (text[10] != 'T' && text[10] != ' ') || text[13] != ':') {
    return std::nullopt;
  }
  const auto date = parse_iso_date(text.substr(0, 10));
  const auto hh = fixed_digits(text, 11, 2);
  const auto mm = fixed_digits(text, 14, 2);
  if (!date || !hh || !mm || *hh > 23 || *mm > 59) {
    return std::nullopt;
  }
  return start_of(*date) + std::chrono::hours{*hh} + std::chrono::minutes{*mm};
}

std::string format_timestamp(Timestamp ts)
{
  const auto day = std::chrono::floor<std::chrono::days>(ts);
  const auto minutes = (ts - day).count();
  char buf[8];
  std::snprintf(
    buf, sizeof buf, "T%02d:%02d", static_cast<int>(minutes / 60), static_cast<int>(minutes % 60));
  return format_iso_date(Date{day}) + buf;
}

Timestamp add_duration(Timestamp ts, const Duration & duration)
{
  using namespace std::chrono;
  switch (duration.unit) {
    case DurationUnit::Days:
      return ts + days{duration.magnitude};
    case DurationUnit::Weeks:
      return ts + weeks{duration.magnitude};
    case DurationUnit::Months: {
      const auto day = floor<days>(ts);
      const auto time_of_day = ts - day;
      const year_month_day ymd{day};
      const year_month target = year_month{ymd.year(), ymd.month()} + months{duration.magnitude};
      const auto last = year_month_day_last{target.year(), month_day_last{target.month()}}.day();
      const auto clamped = ymd.day() > last ? last : ymd.day();
      return Timestamp{sys_days{target / clamped}.time_since_epoch()} + time_of_day;
    }
  }
  return ts;
}

std::optional<unsigned> month_from_name(std::string_view name)
{
  for (unsigned i = 0; i < kMonths.size(); ++i) {
    if (kMonths[i] == name) {
      return i + 1;
    }
  }
  return std::nullopt;
}

std::string_view month_name(unsigned month)
{
  return month >= 1 && month <= 12 ? kMonths[month - 1] : std::string_view{};
}

std::string format_long_date(Date date)
{
  const std::chrono::year_month_day ymd{date};
  return std::string{month_name(static_cast<unsigned>(ymd.month()))} + " " +
         std::to_string(static_cast<unsigned>(ymd.day())) + ", " +
         std::to_string(static_cast<int>(ymd.year()));
}

std::string_view unit_name(DurationUnit unit, int magnitude)
{
  const bool one = magnitude == 1;
  switch (unit) {
    case DurationUnit::Days:
      return one ? "day" : "days";
    case DurationUnit::Weeks:
      return one ? "week" : "weeks";
    case DurationUnit::Months:
      return one ? "month" : "months";
  }
  return {};
}

std::optional<DurationUnit> parse_unit(std::string_view text)
{
  if (text == "day" || text == "days") {
    return DurationUnit::Days;
  }
  if (text == "week" || text == "weeks") {
    return DurationUnit::Weeks;
  }
  if (text == "month" || text == "months") {
    return DurationUnit::Months;
  }
  return std::nullopt;
}

}  // namespace symboleo
