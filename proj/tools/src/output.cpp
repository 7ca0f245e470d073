#include "output.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <sstream>

namespace coldgas::cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string cell_text(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const {
      if (v.find_first_of(",\"\n") == std::string::npos) return v;
      std::string q = "\"";
      for (char ch : v) {
        if (ch == '"') q += '"';
        q += ch;
      }
      return q + "\"";
    }
  };
  return std::visit(Visitor{}, c);
}

json cell_json(const Cell& c) {
  struct Visitor {
    json operator()(std::monostate) const { return nullptr; }
    json operator()(double v) const { return std::isfinite(v) ? json(v) : json(format_double(v)); }
    json operator()(long long v) const { return v; }
    json operator()(bool v) const { return v; }
    json operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, c);
}

double parse_number(const std::string& s, const std::string& flag) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || !std::isfinite(v)) {
    throw ValidationFailed({flag}, flag + ": '" + s + "' is not a finite number");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  parts.push_back(cur);
  return parts;
}

}  // namespace

std::string to_csv(const Table& t, const std::string& units_line) {
  std::string out = "# units: " + units_line + "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    if (i) out += ',';
    out += t.columns[i];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += cell_text(row[i]);
    }
    out += '\n';
  }
  return out;
}

json rows_to_json(const Table& t) {
  json rows = json::array();
  for (const auto& row : t.rows) {
    json obj = json::object();
    for (std::size_t i = 0; i < t.columns.size(); ++i) obj[t.columns[i]] = cell_json(row[i]);
    rows.push_back(std::move(obj));
  }
  return rows;
}

Table flatten(const json& obj) {
  Table t;
  std::vector<Cell> row;
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    const json& v = it.value();
    Cell c;
    if (v.is_number_integer()) {
      c = static_cast<long long>(v.get<std::int64_t>());
    } else if (v.is_number()) {
      c = v.get<double>();
    } else if (v.is_boolean()) {
      c = v.get<bool>();
    } else if (v.is_string()) {
      c = v.get<std::string>();
    } else if (v.is_null()) {
      c = std::monostate{};
    } else {
      continue;  // arrays and objects have no place in a flat row
    }
    t.columns.push_back(it.key());
    row.push_back(std::move(c));
  }
  t.rows.push_back(std::move(row));
  return t;
}

std::vector<double> parse_grid(const std::string& spec, const std::string& flag) {
  if (spec.empty()) throw ValidationFailed({flag}, flag + ": empty grid");
  std::vector<double> out;
  if (spec.find(',') != std::string::npos) {
    for (const auto& p : split(spec, ',')) out.push_back(parse_number(p, flag));
    return out;
  }
  const auto parts = split(spec, ':');
  if (parts.size() == 1) return {parse_number(spec, flag)};
  if (parts.size() == 4 && parts[0] == "log") {
    const double a = parse_number(parts[1], flag), b = parse_number(parts[2], flag);
    const double n = parse_number(parts[3], flag);
    if (!(a > 0.0) || !(b > 0.0) || n < 2 || n != std::floor(n) || n > 1e6) {
      throw ValidationFailed({flag}, flag + ": log grid needs positive ends and an integer count >= 2");
    }
    const int count = static_cast<int>(n);
    for (int i = 0; i < count; ++i) {
      out.push_back(std::exp(std::log(a) + (std::log(b) - std::log(a)) * i / (count - 1)));
    }
    out.front() = a;
    out.back() = b;
    return out;
  }
  if (parts.size() == 3) {
    const double a = parse_number(parts[0], flag), b = parse_number(parts[1], flag);
    const double step = parse_number(parts[2], flag);
    if (!(step > 0.0) || b < a) {
      throw ValidationFailed({flag}, flag + ": grid start:stop:step needs stop >= start and step > 0");
    }
    const double count = std::floor((b - a) / step * (1.0 + 1e-12) + 1e-9) + 1.0;
    if (count > 1e6) throw ValidationFailed({flag}, flag + ": grid has more than 1e6 points");
    for (int i = 0; i < static_cast<int>(count); ++i) out.push_back(a + i * step);
    return out;
  }
  throw ValidationFailed({flag}, flag + ": expected start:stop:step, log:start:stop:count or a,b,c");
}

std::vector<std::uint64_t> parse_seeds(const std::string& spec, const std::string& flag) {
  auto parse_u = [&](const std::string& s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
      throw ValidationFailed({flag}, flag + ": '" + s + "' is not a non-negative integer");
    }
    return v;
  };
  std::vector<std::uint64_t> out;
  const auto dots = spec.find("..");
  if (dots != std::string::npos) {
    const auto lo = parse_u(spec.substr(0, dots)), hi = parse_u(spec.substr(dots + 2));
    if (hi < lo || hi - lo > 10000) throw ValidationFailed({flag}, flag + ": bad seed range");
    for (auto s = lo; s <= hi; ++s) out.push_back(s);
    return out;
  }
  for (const auto& p : split(spec, ',')) out.push_back(parse_u(p));
  return out;
}

std::string timestamp() {
  std::time_t t = 0;
  if (const char* env = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    const long long v = std::strtoll(env, &end, 10);
    if (end != env && *end == '\0') t = static_cast<std::time_t>(v);
  }
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace coldgas::cli
