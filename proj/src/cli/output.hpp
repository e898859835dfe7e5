#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace bimeans::cli {

inline constexpr std::string_view kSchemaVersion = "1.0";

using Json = nlohmann::ordered_json;

/// One JSON document per invocation.
struct OutputRecord {
  std::string command;
  Json inputs = Json::object();
  Json results = Json::object();
  std::optional<bool> pass;

  Json to_json() const;
};

/// Shortest-free, locale-independent decimal with 17 significant digits, so
/// every binary64 value round-trips exactly.
std::string format_double(double value);

/// Serialises like Json::dump() except that floating-point numbers use
/// format_double and non-finite values become null.
void write_json(std::ostream& out, const Json& value);

/// Minimal CSV writer: header once, then rows of numbers.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);

  void row(const std::vector<double>& values);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

}  // namespace bimeans::cli
