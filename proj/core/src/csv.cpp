#include "mop/csv.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

#include "mop/error.hpp"

namespace mop::csv {

std::string format(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Writer::Writer(std::ostream& out, const std::vector<std::string>& header) : out_(out), columns_(header.size()) {
  for (const auto& h : header) field(h);
  end_row();
}

void Writer::field(const std::string& text) {
  if (current_ > 0) out_ << ',';
  out_ << text;
  ++current_;
}

Writer& Writer::operator<<(double v) {
  field(format(v));
  return *this;
}

Writer& Writer::operator<<(std::int64_t v) {
  field(std::to_string(v));
  return *this;
}

Writer& Writer::operator<<(const std::string& v) {
  field(v);
  return *this;
}

void Writer::end_row() {
  if (current_ != columns_)
    throw Error(ErrorCode::invalid_argument, "CSV row has " + std::to_string(current_) + " fields, header has " +
                                                 std::to_string(columns_));
  out_ << '\n';
  current_ = 0;
}

std::vector<std::vector<std::string>> read(std::istream& in) {
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) fields.push_back(f);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    rows.push_back(std::move(fields));
  }
  return rows;
}

}  // namespace mop::csv
