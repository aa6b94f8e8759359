#include "seerisk/domain/period.hpp"

#include <cctype>

#include "seerisk/common.hpp"

namespace seerisk {

PeriodIndex PeriodIndex::from_year_semester(int year, int semester) {
  if (year < 0 || (semester != 1 && semester != 2)) {
    throw DataError("invalid period year=" + std::to_string(year) +
                    " semester=" + std::to_string(semester));
  }
  return PeriodIndex(year * 2 + semester - 1);
}

PeriodIndex parse_period(std::string_view text) {
  auto fail = [&](const char* why) -> PeriodIndex {
    throw DataError("malformed period '" + std::string(text) + "': " + why);
  };
  if (text.size() != 6 || text[4] != '-') return fail("expected YYYY-S");
  int year = 0;
  for (int i = 0; i < 4; ++i) {
    if (!std::isdigit(static_cast<unsigned char>(text[i]))) return fail("year must be 4 digits");
    year = year * 10 + (text[i] - '0');
  }
  char s = text[5];
  if (s != '1' && s != '2') return fail("semester must be 1 or 2");
  return PeriodIndex::from_year_semester(year, s - '0');
}

std::string format_period(PeriodIndex period) {
  std::string year = std::to_string(period.year());
  while (year.size() < 4) year.insert(year.begin(), '0');
  return year + "-" + std::to_string(period.semester());
}

}  // namespace seerisk
