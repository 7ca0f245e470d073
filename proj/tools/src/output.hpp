#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace coldgas::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* kUnitNote = "hbar = 2m = k_B = 1";

/// Flag values that fail validation before any module is called.
class ValidationFailed : public std::runtime_error {
 public:
  ValidationFailed(std::vector<std::string> fields, const std::string& message)
      : std::runtime_error(message), fields_(std::move(fields)) {}
  const std::vector<std::string>& fields() const { return fields_; }

 private:
  std::vector<std::string> fields_;
};

using Cell = std::variant<std::monostate, double, long long, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

struct Result {
  json payload = json::object();
  Table table;           // CSV form; empty columns -> flattened payload scalars
  std::string units;     // command-specific unit remark, appended to kUnitNote
  bool rows_in_payload = true;  // also store the table rows in the JSON payload
  std::string warning_code;     // non-empty: output written, but exit nonzero
  std::string warning_message;
};

/// 17 significant digits; "inf", "-inf", "nan" for non-finite values.
std::string format_double(double v);

std::string to_csv(const Table& t, const std::string& units_line);
json rows_to_json(const Table& t);
/// One-row table from the scalar members of a JSON object.
Table flatten(const json& obj);

/// "start:stop:step" (inclusive), "log:start:stop:count", "a,b,c" or a single
/// number.
std::vector<double> parse_grid(const std::string& spec, const std::string& flag);
/// "lo..hi" (inclusive), "a,b,c" or a single integer.
std::vector<std::uint64_t> parse_seeds(const std::string& spec, const std::string& flag);

/// ISO-8601 UTC time taken from SOURCE_DATE_EPOCH, or the epoch when unset,
/// so that repeated runs are byte-identical.
std::string timestamp();

}  // namespace coldgas::cli
