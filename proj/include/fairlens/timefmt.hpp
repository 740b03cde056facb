#ifndef FAIRLENS_TIMEFMT_HPP_
#define FAIRLENS_TIMEFMT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace fairlens {

// Default wire format for timestamps: "YYYY-MM-DD HH:MM:SS".
inline constexpr std::string_view kDefaultTimestampFormat = "%Y-%m-%d %H:%M:%S";

// Parses a timestamp against a strftime-like pattern supporting the tokens
// %Y %m %d %H %M %S; every other pattern character must match literally.
// Timestamps are civil (timezone-free) and converted to seconds since the
// Unix epoch. Returns nullopt on any mismatch or out-of-range field.
std::optional<std::int64_t> parse_timestamp(std::string_view text, std::string_view format = kDefaultTimestampFormat);

// Inverse of parse_timestamp for the same token set.
std::string format_timestamp(std::int64_t unix_seconds, std::string_view format = kDefaultTimestampFormat);

} // namespace fairlens

#endif
