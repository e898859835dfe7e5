#include "output.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace bimeans::cli {

Json OutputRecord::to_json() const {
  Json j = Json::object();
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["inputs"] = inputs;
  j["results"] = results;
  if (pass) j["pass"] = *pass;
  return j;
}

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

void write_value(std::ostream& out, const Json& value) {
  switch (value.type()) {
    case Json::value_t::object: {
      out << '{';
      bool first = true;
      for (const auto& [key, item] : value.items()) {
        if (!first) out << ',';
        first = false;
        out << Json(key).dump() << ':';
        write_value(out, item);
      }
      out << '}';
      break;
    }
    case Json::value_t::array: {
      out << '[';
      bool first = true;
      for (const auto& item : value) {
        if (!first) out << ',';
        first = false;
        write_value(out, item);
      }
      out << ']';
      break;
    }
    case Json::value_t::number_float: {
      const double v = value.get<double>();
      out << (std::isfinite(v) ? format_double(v) : std::string("null"));
      break;
    }
    default:
      out << value.dump();
  }
}

}  // namespace

void write_json(std::ostream& out, const Json& value) {
  write_value(out, value);
  out << '\n';
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != columns_) throw std::logic_error("CsvWriter: column count mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    out_ << (i ? "," : "") << format_double(values[i]);
  }
  out_ << '\n';
}

}  // namespace bimeans::cli
