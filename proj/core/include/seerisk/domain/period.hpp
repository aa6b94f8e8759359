#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace seerisk {

/// Semester counter: year * 2 + semester - 1, so "2016-1" is 4032 and
/// consecutive semesters differ by exactly one.
class PeriodIndex {
 public:
  constexpr PeriodIndex() = default;
  constexpr explicit PeriodIndex(int value) : value_(value) {}

  static PeriodIndex from_year_semester(int year, int semester);

  constexpr int value() const noexcept { return value_; }
  constexpr int year() const noexcept { return value_ / 2; }
  constexpr int semester() const noexcept { return value_ % 2 + 1; }

  constexpr PeriodIndex next() const noexcept { return PeriodIndex(value_ + 1); }
  constexpr PeriodIndex prev() const noexcept { return PeriodIndex(value_ - 1); }
  constexpr PeriodIndex offset(int delta) const noexcept { return PeriodIndex(value_ + delta); }

  friend constexpr auto operator<=>(PeriodIndex, PeriodIndex) = default;

 private:
  int value_ = 0;
};

/// Parses "YYYY-S" with S in {1, 2}. Throws DataError naming the token.
PeriodIndex parse_period(std::string_view text);

std::string format_period(PeriodIndex period);

}  // namespace seerisk
