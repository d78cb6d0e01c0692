#pragma once

#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace tweetsignal {

/// A UTC calendar day.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::chrono::sys_days days) : days_(days) {}

  /// Throws Error(InvalidArgument) for an impossible calendar date.
  static Date from_ymd(int year, unsigned month, unsigned day);

  /// Accepts `YYYY-MM-DD` and ISO-8601 timestamps (`YYYY-MM-DDTHH:MM[:SS[.f]]`
  /// with an optional `Z` or `+HH[:MM]` offset; a space may replace the `T`).
  /// Timestamps with an offset are shifted to UTC before truncation to the day.
  static std::optional<Date> parse(std::string_view text);

  constexpr std::chrono::sys_days days() const { return days_; }
  constexpr long serial() const { return days_.time_since_epoch().count(); }
  std::chrono::weekday weekday() const { return std::chrono::weekday{days_}; }
  bool is_weekend() const;

  constexpr Date plus_days(int n) const { return Date{days_ + std::chrono::days{n}}; }

  /// `YYYY-MM-DD`.
  std::string to_string() const;

  friend constexpr auto operator<=>(const Date&, const Date&) = default;

 private:
  std::chrono::sys_days days_{};
};

}  // namespace tweetsignal
