#pragma once

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace iidseval::csv {

/// Line-oriented reader for header-first CSV (RFC 4180 quoting, LF or CRLF).
/// Line numbers are 1-based and count the header.
class Reader {
public:
    explicit Reader(std::istream& in) : in_(in) {}

    /// Next record, or nullopt at end of input. Blank lines are skipped.
    std::optional<std::vector<std::string>> next();
    std::size_t line() const noexcept { return line_; }

private:
    std::istream& in_;
    std::size_t line_ = 0;
};

std::vector<std::string> split_line(std::string_view line, std::size_t line_no);

/// Quote a field if it contains a separator, quote or newline.
std::string escape(std::string_view field);

std::optional<double> parse_double(std::string_view s);
std::optional<std::int64_t> parse_int(std::string_view s);

/// Shortest text at 9 significant digits (the dataset file precision).
std::string format_9g(double v);
/// Round-trip exact decimal text (17 significant digits, trimmed).
std::string format_exact(double v);

std::string_view trim(std::string_view s);

}  // namespace iidseval::csv
