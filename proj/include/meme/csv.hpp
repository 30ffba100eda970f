#pragma once

#include <string>
#include <vector>

namespace meme::csv {

using Row = std::vector<std::string>;

/// Parse RFC 4180 CSV text. Handles quoted fields, embedded commas,
/// escaped quotes and CRLF line endings. A trailing newline does not
/// produce an empty row.
std::vector<Row> parse(const std::string& text);

std::vector<Row> parse_file(const std::string& path);

/// Quote a field only when it contains a comma, quote or newline.
std::string escape_field(const std::string& field);

std::string format_row(const Row& row);

}  // namespace meme::csv
