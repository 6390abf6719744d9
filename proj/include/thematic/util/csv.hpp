#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace thematic::csv {

using Row = std::vector<std::string>;

/// RFC 4180 field quoting: fields containing comma, quote or newline are quoted.
std::string format_row(const Row& fields);

/// Parses RFC 4180 text (CRLF or LF line endings). Records keep their 1-based
/// starting line number in `lines` when it is non-null.
std::vector<Row> parse(std::string_view text, std::vector<std::size_t>* lines = nullptr);

}  // namespace thematic::csv
