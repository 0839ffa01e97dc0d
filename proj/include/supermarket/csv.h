// Minimal CSV helpers shared by trace loading and result writers.

#ifndef SUPERMARKET_CSV_H_
#define SUPERMARKET_CSV_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace supermarket::csv {

// Splits one line into fields. Double-quoted fields may contain the
// delimiter; "" inside quotes is a literal quote. A trailing '\r' is
// ignored.
std::vector<std::string> split(std::string_view line, char delimiter = ',');

// Whole-field numeric parse (surrounding blanks allowed).
std::optional<double> parse_double(std::string_view field);

// Shortest decimal form that reads back to the same double.
std::string format_double(double value);

// Quotes the field if it contains a delimiter, quote or newline.
std::string escape(std::string_view field, char delimiter = ',');

}  // namespace supermarket::csv

#endif  // SUPERMARKET_CSV_H_
