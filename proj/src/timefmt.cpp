#include "fairlens/timefmt.hpp"

#include <array>
#include <cctype>

namespace fairlens {

namespace {

// Days between 1970-01-01 and year/month/day in the proleptic Gregorian
// calendar (Howard Hinnant's days_from_civil).
std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(m + (m > 2 ? -3 : 9)) + 2u) / 5u + static_cast<unsigned>(d) - 1u;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, int& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t yy = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y = static_cast<int>(yy + (m <= 2));
}

bool is_leap(int y) { return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0); }

int days_in_month(int y, int m) {
    static constexpr std::array<int, 12> lens = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (m == 2 && is_leap(y)) return 29;
    return lens[static_cast<std::size_t>(m - 1)];
}

// Reads exactly `width` digits; returns false if fewer are available.
bool read_digits(std::string_view s, std::size_t& pos, int width, int& out) {
    int v = 0;
    for (int i = 0; i < width; ++i) {
        if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) return false;
        v = v * 10 + (s[pos] - '0');
        ++pos;
    }
    out = v;
    return true;
}

} // namespace

std::optional<std::int64_t> parse_timestamp(std::string_view text, std::string_view format) {
    int year = 1970, month = 1, day = 1, hour = 0, minute = 0, second = 0;
    std::size_t tp = 0;
    for (std::size_t fp = 0; fp < format.size(); ++fp) {
        if (format[fp] == '%' && fp + 1 < format.size()) {
            const char tok = format[++fp];
            bool ok = true;
            switch (tok) {
                case 'Y': ok = read_digits(text, tp, 4, year); break;
                case 'm': ok = read_digits(text, tp, 2, month); break;
                case 'd': ok = read_digits(text, tp, 2, day); break;
                case 'H': ok = read_digits(text, tp, 2, hour); break;
                case 'M': ok = read_digits(text, tp, 2, minute); break;
                case 'S': ok = read_digits(text, tp, 2, second); break;
                case '%':
                    ok = tp < text.size() && text[tp] == '%';
                    ++tp;
                    break;
                default: return std::nullopt; // unsupported token
            }
            if (!ok) return std::nullopt;
        } else {
            if (tp >= text.size() || text[tp] != format[fp]) return std::nullopt;
            ++tp;
        }
    }
    if (tp != text.size()) return std::nullopt;
    if (month < 1 || month > 12 || day < 1 || day > days_in_month(year, month)) return std::nullopt;
    if (hour > 23 || minute > 59 || second > 59) return std::nullopt;
    const std::int64_t days = days_from_civil(year, month, day);
    return days * 86400 + hour * 3600 + minute * 60 + second;
}

std::string format_timestamp(std::int64_t unix_seconds, std::string_view format) {
    std::int64_t days = unix_seconds / 86400;
    std::int64_t rem = unix_seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    int y;
    unsigned m, d;
    civil_from_days(days, y, m, d);
    const int hour = static_cast<int>(rem / 3600);
    const int minute = static_cast<int>((rem / 60) % 60);
    const int second = static_cast<int>(rem % 60);

    std::string out;
    out.reserve(format.size() + 8);
    auto pad = [&out](int v, int width) {
        char buf[8];
        for (int i = width - 1; i >= 0; --i) {
            buf[i] = static_cast<char>('0' + v % 10);
            v /= 10;
        }
        out.append(buf, static_cast<std::size_t>(width));
    };
    for (std::size_t fp = 0; fp < format.size(); ++fp) {
        if (format[fp] == '%' && fp + 1 < format.size()) {
            switch (format[++fp]) {
                case 'Y': pad(y, 4); break;
                case 'm': pad(static_cast<int>(m), 2); break;
                case 'd': pad(static_cast<int>(d), 2); break;
                case 'H': pad(hour, 2); break;
                case 'M': pad(minute, 2); break;
                case 'S': pad(second, 2); break;
                case '%': out.push_back('%'); break;
                default: out.push_back(format[fp]); break;
            }
        } else {
            out.push_back(format[fp]);
        }
    }
    return out;
}

} // namespace fairlens
