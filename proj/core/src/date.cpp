#include "tweetsignal/date.hpp"

#include <cstdio>

#include "tweetsignal/error.hpp"

namespace tweetsignal {

namespace {

bool is_digit(char c) { return c >= '0' && c <= '9'; }

// Reads exactly `width` digits starting at `pos`.
std::optional<int> read_fixed(std::string_view s, std::size_t pos, std::size_t width) {
  if (pos + width > s.size()) return std::nullopt;
  int value = 0;
  for (std::size_t i = pos; i < pos + width; ++i) {
    if (!is_digit(s[i])) return std::nullopt;
    value = value * 10 + (s[i] - '0');
  }
  return value;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

}  // namespace

Date Date::from_ymd(int year, unsigned month, unsigned day) {
  const std::chrono::year_month_day ymd{std::chrono::year{year}, std::chrono::month{month},
                                        std::chrono::day{day}};
  if (!ymd.ok()) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year, month, day);
    throw Error(ErrorCode::InvalidArgument, std::string("invalid calendar date ") + buf);
  }
  return Date{std::chrono::sys_days{ymd}};
}

std::optional<Date> Date::parse(std::string_view text) {
  const std::string_view s = trim(text);
  const auto year = read_fixed(s, 0, 4);
  const auto month = read_fixed(s, 5, 2);
  const auto day = read_fixed(s, 8, 2);
  if (!year || !month || !day || s[4] != '-' || s[7] != '-') return std::nullopt;

  const std::chrono::year_month_day ymd{std::chrono::year{*year},
                                        std::chrono::month{static_cast<unsigned>(*month)},
                                        std::chrono::day{static_cast<unsigned>(*day)}};
  if (!ymd.ok()) return std::nullopt;
  const Date date{std::chrono::sys_days{ymd}};
  if (s.size() == 10) return date;

  // Time-of-day part.
  if (s[10] != 'T' && s[10] != ' ') return std::nullopt;
  const auto hour = read_fixed(s, 11, 2);
  const auto minute = read_fixed(s, 14, 2);
  if (!hour || !minute || s.size() < 16 || s[13] != ':' || *hour > 23 || *minute > 59) {
    return std::nullopt;
  }
  std::size_t pos = 16;
  if (pos < s.size() && s[pos] == ':') {
    const auto second = read_fixed(s, pos + 1, 2);
    if (!second || *second > 60) return std::nullopt;
    pos += 3;
    if (pos < s.size() && s[pos] == '.') {
      ++pos;
      const std::size_t start = pos;
      while (pos < s.size() && is_digit(s[pos])) ++pos;
      if (pos == start) return std::nullopt;
    }
  }
  while (pos < s.size() && s[pos] == ' ') ++pos;
  if (pos == s.size()) return date;
  if (s[pos] == 'Z' && pos + 1 == s.size()) return date;

  if (s[pos] != '+' && s[pos] != '-') return std::nullopt;
  const int sign = s[pos] == '-' ? -1 : 1;
  const auto off_h = read_fixed(s, pos + 1, 2);
  if (!off_h) return std::nullopt;
  std::size_t rest = pos + 3;
  int off_m = 0;
  if (rest < s.size()) {
    if (s[rest] == ':') ++rest;
    const auto m = read_fixed(s, rest, 2);
    if (!m || rest + 2 != s.size()) return std::nullopt;
    off_m = *m;
  }
  if (*off_h > 23 || off_m > 59) return std::nullopt;

  // UTC = local - offset.
  const int local_minutes = *hour * 60 + *minute;
  const int utc_minutes = local_minutes - sign * (*off_h * 60 + off_m);
  if (utc_minutes < 0) return date.plus_days(-1);
  if (utc_minutes >= 24 * 60) return date.plus_days(1);
  return date;
}

bool Date::is_weekend() const {
  const auto wd = weekday();
  return wd == std::chrono::Saturday || wd == std::chrono::Sunday;
}

std::string Date::to_string() const {
  const std::chrono::year_month_day ymd{days_};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

}  // namespace tweetsignal
