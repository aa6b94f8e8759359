#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace seerisk::csv {

/// Reads one logical record (RFC 4180 quoting, CRLF tolerant). Returns false at EOF.
bool read_record(std::istream& in, std::vector<std::string>& fields);

/// Quotes a field only when it contains a comma, quote or line break.
std::string escape(std::string_view field);

void write_record(std::ostream& out, const std::vector<std::string>& fields);

}  // namespace seerisk::csv
