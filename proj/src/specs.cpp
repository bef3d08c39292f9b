#include "blockess/specs.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "blockess/errors.hpp"

namespace blockess {

namespace {

using Params = std::map<std::string, std::string, std::less<>>;

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

double parse_double(std::string_view text, std::string_view what) {
  const std::string s = trim(text);
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(value))
    throw InvalidArgument(std::string(what) + ": '" + s + "' is not a number");
  return value;
}

std::size_t parse_count(std::string_view text, std::string_view what) {
  const std::string s = trim(text);
  char* end = nullptr;
  errno = 0;
  const unsigned long long value = std::strtoull(s.c_str(), &end, 10);
  if (s.empty() || s[0] == '-' || end != s.c_str() + s.size() || errno == ERANGE)
    throw InvalidArgument(std::string(what) + ": '" + s + "' is not a non-negative integer");
  return static_cast<std::size_t>(value);
}

struct Parsed {
  std::string kind;
  std::string rest;
};

Parsed split_kind(std::string_view spec) {
  const std::string s = trim(spec);
  const auto colon = s.find(':');
  if (colon == std::string::npos) return {s, {}};
  return {s.substr(0, colon), s.substr(colon + 1)};
}

Params parse_params(const std::string& rest, std::string_view spec) {
  Params params;
  std::size_t start = 0;
  while (start <= rest.size() && !rest.empty()) {
    const auto comma = rest.find(',', start);
    const std::string item =
        trim(std::string_view(rest).substr(start, comma == std::string::npos
                                                      ? std::string::npos
                                                      : comma - start));
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw InvalidArgument("spec '" + std::string(spec) + "': expected key=value, got '" +
                            item + "'");
    if (!params.emplace(item.substr(0, eq), item.substr(eq + 1)).second)
      throw InvalidArgument("spec '" + std::string(spec) + "': repeated key '" +
                            item.substr(0, eq) + "'");
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return params;
}

void allow_only(const Params& params, std::initializer_list<std::string_view> keys,
                std::string_view spec) {
  for (const auto& [key, value] : params) {
    bool known = false;
    for (auto allowed : keys) known = known || key == allowed;
    if (!known)
      throw InvalidArgument("spec '" + std::string(spec) + "': unknown key '" + key + "'");
  }
}

const std::string& require(const Params& params, std::string_view key,
                           std::string_view spec) {
  const auto it = params.find(key);
  if (it == params.end())
    throw InvalidArgument("spec '" + std::string(spec) + "': missing '" +
                          std::string(key) + "'");
  return it->second;
}

// "(A)x(B)" -> {A, B}, honouring nested parentheses.
std::pair<std::string, std::string> split_kron(const std::string& rest,
                                               std::string_view spec) {
  auto fail = [&] {
    throw InvalidArgument("spec '" + std::string(spec) +
                          "': expected kron:(SPEC)x(SPEC)");
  };
  const std::string s = trim(rest);
  if (s.empty() || s[0] != '(') fail();
  int depth = 0;
  std::size_t close = std::string::npos;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')' && --depth == 0) {
      close = i;
      break;
    }
  }
  if (close == std::string::npos || close + 2 >= s.size() || s[close + 1] != 'x' ||
      s[close + 2] != '(' || s.back() != ')')
    fail();
  return {s.substr(1, close - 1), s.substr(close + 3, s.size() - close - 4)};
}

}  // namespace

CorrelationModel parse_model(std::string_view spec) {
  const auto [kind, rest] = split_kind(spec);
  if (kind == "kron") {
    const auto [first, second] = split_kron(rest, spec);
    return CorrelationModel::kronecker(parse_model(first), parse_model(second));
  }
  const Params params = parse_params(rest, spec);
  if (kind == "ar1pos") {
    allow_only(params, {"rho", "positions"}, spec);
    return CorrelationModel::ar1_positions(
        parse_double(require(params, "rho", spec), "rho"),
        read_values_file(require(params, "positions", spec)));
  }
  allow_only(params, {"rho"}, spec);
  const double rho = parse_double(require(params, "rho", spec), "rho");
  if (kind == "ar1") return CorrelationModel::ar1(rho);
  if (kind == "linear") return CorrelationModel::linear(rho);
  if (kind == "invlin") return CorrelationModel::inverse_linear(rho);
  if (kind == "matern-l1") return CorrelationModel::matern_l1(rho);
  if (kind == "matern-l2-0.5") return CorrelationModel::matern_l2_half(rho);
  if (kind == "matern-l2-1.5") return CorrelationModel::matern_l2_three_half(rho);
  throw InvalidArgument("unknown model '" + kind + "'");
}

ModelFamily parse_family(std::string_view spec) {
  const auto [kind, rest] = split_kind(spec);
  if (kind == "kron") {
    const auto [first_spec, second_spec] = split_kron(rest, spec);
    ModelFamily first = parse_family(first_spec);
    ModelFamily second = parse_family(second_spec);
    ModelFamily family;
    family.name = "kron:(" + first.name + ")x(" + second.name + ")";
    family.make = [first, second](double v, const PointGeometry& geom) {
      if (!geom.is_grid()) throw InvalidArgument("kron family needs a grid geometry");
      return CorrelationModel::kronecker(first.make(v, PointGeometry::equispaced(geom.n1())),
                                         second.make(v, PointGeometry::equispaced(geom.n2())));
    };
    return family;
  }
  const Params params = parse_params(rest, spec);
  if (params.count("rho"))
    throw InvalidArgument("spec '" + std::string(spec) +
                          "': rho is taken from the grid here; drop rho=");
  if (kind == "ar1pos") {
    allow_only(params, {"positions"}, spec);
    return ModelFamily::ar1_positions(read_values_file(require(params, "positions", spec)));
  }
  allow_only(params, {}, spec);
  if (kind == "ar1") return ModelFamily::ar1();
  if (kind == "linear") return ModelFamily::linear_scaled();
  if (kind == "invlin") return ModelFamily::inverse_linear();
  if (kind == "matern-l1") return ModelFamily::matern_l1();
  if (kind == "matern-l2-0.5") return ModelFamily::matern_l2_half();
  if (kind == "matern-l2-1.5") return ModelFamily::matern_l2_three_half();
  throw InvalidArgument("unknown model '" + kind + "'");
}

BlockingSpec parse_blocking(std::string_view spec) {
  const auto [kind, rest] = split_kind(spec);
  if (kind == "custom") {
    // The path may itself contain commas or '=', so no generic param split.
    const std::string value = trim(rest);
    if (value.rfind("file=", 0) != 0 || value.size() == 5)
      throw InvalidArgument("spec '" + std::string(spec) + "': expected custom:file=PATH");
    return BlockingSpec::custom(value.substr(5));
  }
  const Params params = parse_params(rest, spec);
  auto count = [&](std::string_view key) {
    const std::size_t value = parse_count(require(params, key, spec), key);
    if (value < 1)
      throw InvalidArgument("spec '" + std::string(spec) + "': " + std::string(key) +
                            " must be at least 1");
    return value;
  };
  if (kind == "rw" || kind == "cw" || kind == "mcw") {
    allow_only(params, {"m"}, spec);
    const std::size_t m = count("m");
    if (kind == "rw") return BlockingSpec::rw(m);
    if (kind == "cw") return BlockingSpec::cw(m);
    return BlockingSpec::mcw(m);
  }
  if (kind == "prw") {
    allow_only(params, {"g"}, spec);
    return BlockingSpec::prw(count("g"));
  }
  if (kind == "rw2d" || kind == "cw2d") {
    allow_only(params, {"m1", "m2"}, spec);
    const std::size_t m1 = count("m1");
    const std::size_t m2 = count("m2");
    return kind == "rw2d" ? BlockingSpec::rw2d(m1, m2) : BlockingSpec::cw2d(m1, m2);
  }
  throw InvalidArgument("unknown blocking '" + kind + "'");
}

std::optional<std::vector<double>> spec_positions(std::string_view spec) {
  const auto [kind, rest] = split_kind(spec);
  if (kind != "ar1pos") return std::nullopt;
  return read_values_file(require(parse_params(rest, spec), "positions", spec));
}

std::vector<double> read_values_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::vector<double> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    values.push_back(parse_double(line, path + ":" + std::to_string(line_no)));
  }
  return values;
}

RhoGrid parse_rho_grid(std::string_view text) {
  const std::string s = trim(text);
  const auto first = s.find(':');
  const auto second = first == std::string::npos ? first : s.find(':', first + 1);
  if (second == std::string::npos)
    throw InvalidArgument("rho grid: expected a:b:step, got '" + s + "'");
  return RhoGrid::range(parse_double(s.substr(0, first), "rho grid start"),
                        parse_double(s.substr(first + 1, second - first - 1), "rho grid end"),
                        parse_double(s.substr(second + 1), "rho grid step"));
}

std::string format_number(double value, std::optional<int> digits) {
  char buffer[64];
  if (digits)
    std::snprintf(buffer, sizeof buffer, "%.*f", *digits, value);
  else
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

namespace {

std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string optional_count(const std::optional<std::size_t>& value) {
  return value ? std::to_string(*value) : std::string();
}

}  // namespace

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows,
                     std::optional<int> digits) {
  out << kSweepCsvHeader << '\n';
  for (const SweepRow& row : rows) {
    out << csv_field(row.model) << ',' << format_number(row.rho) << ',' << row.n << ','
        << optional_count(row.n1) << ',' << optional_count(row.n2) << ','
        << optional_count(row.b) << ',' << optional_count(row.m) << ','
        << optional_count(row.b1) << ',' << optional_count(row.m1) << ','
        << optional_count(row.b2) << ',' << optional_count(row.m2) << ','
        << csv_field(row.blocking) << ',' << format_number(row.ess_full, digits) << ','
        << format_number(row.ess_block, digits) << ',' << format_number(row.eff, digits)
        << '\n';
  }
}

}  // namespace blockess
