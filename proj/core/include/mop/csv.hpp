#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace mop::csv {

// Shortest round-trip-safe text for a double (%.17g); "nan", "inf", "-inf"
// for non-finite values.
std::string format(double v);

// Fixed dialect: comma separator, '.' decimal point, header row, LF endings,
// no quoting (fields never contain separators).
class Writer {
 public:
  Writer(std::ostream& out, const std::vector<std::string>& header);

  Writer& operator<<(double v);
  Writer& operator<<(std::int64_t v);
  Writer& operator<<(int v) { return *this << static_cast<std::int64_t>(v); }
  Writer& operator<<(const std::string& v);
  // Terminates the current row; throws invalid-argument if its width differs
  // from the header.
  void end_row();

 private:
  void field(const std::string& text);

  std::ostream& out_;
  std::size_t columns_;
  std::size_t current_ = 0;
};

// Splits a CSV text into rows of fields (no quoting), dropping empty lines and
// a trailing '\r'.
std::vector<std::vector<std::string>> read(std::istream& in);

}  // namespace mop::csv
