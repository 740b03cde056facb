#ifndef FAIRLENS_CSV_HPP_
#define FAIRLENS_CSV_HPP_

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace fairlens {

// Minimal RFC-4180-style CSV reader: quoted fields, embedded delimiters,
// doubled quotes, quoted newlines, \r\n line endings. Delimiter configurable.
class CsvReader {
public:
    CsvReader(std::istream& in, char delimiter = ',');

    // Reads the next record into `fields` (cleared first). Returns false at EOF.
    bool next(std::vector<std::string>& fields);

    std::size_t records_read() const { return records_read_; }

private:
    std::istream& in_;
    char delim_;
    std::size_t records_read_ = 0;
    std::string buf_;
};

// Writes one CSV record, quoting fields that need it.
void write_csv_record(std::ostream& out, const std::vector<std::string>& fields, char delimiter = ',');

// Quotes a single field if it contains the delimiter, a quote, or a newline.
std::string csv_escape(std::string_view field, char delimiter = ',');

} // namespace fairlens

#endif
