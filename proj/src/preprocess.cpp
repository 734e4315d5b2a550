#include "ridgebart/preprocess.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <boost/math/distributions/normal.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "ridgebart/errors.hpp"

namespace ridgebart {

std::size_t Table::column(const std::string& name) const {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw DataError(fmt::format("missing column '{}'", name));
  return static_cast<std::size_t>(it - names.begin());
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(std::move(cell));
      cell.clear();
    } else if (c != '\r') {
      cell.push_back(c);
    }
  }
  out.push_back(std::move(cell));
  return out;
}

std::string quote_if_needed(const std::string& cell) {
  if (cell.find_first_of(",\"") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

Role parse_role(const std::string& name) {
  if (name == "x") return Role::kX;
  if (name == "z") return Role::kZ;
  if (name == "both") return Role::kBoth;
  if (name == "categorical") return Role::kCategorical;
  if (name == "outcome") return Role::kOutcome;
  if (name == "ignore") return Role::kIgnore;
  throw DataError(fmt::format("unknown column role '{}'", name));
}

const char* role_name(Role role) {
  switch (role) {
    case Role::kX: return "x";
    case Role::kZ: return "z";
    case Role::kBoth: return "both";
    case Role::kCategorical: return "categorical";
    case Role::kOutcome: return "outcome";
    case Role::kIgnore: return "ignore";
  }
  return "ignore";
}

ColumnTransform fit_continuous(const Table& table, std::size_t col) {
  ColumnTransform t;
  t.name = table.names[col];
  double lo = INFINITY, hi = -INFINITY;
  for (const auto& row : table.rows) {
    double v = parse_number(row[col]);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(lo < hi)) throw ConstantColumnError(fmt::format("column '{}' is constant", t.name));
  t.min = lo;
  t.max = hi;
  return t;
}

ColumnTransform fit_categorical(const Table& table, std::size_t col) {
  ColumnTransform t;
  t.name = table.names[col];
  t.categorical = true;
  std::set<std::string> levels;
  for (const auto& row : table.rows) levels.insert(row[col]);
  if (levels.size() < 2) throw ConstantColumnError(fmt::format("categorical column '{}' has one level", t.name));
  if (levels.size() > 64) throw DataError(fmt::format("categorical column '{}' has more than 64 levels", t.name));
  t.levels.assign(levels.begin(), levels.end());
  return t;
}

}  // namespace

double parse_number(const std::string& cell) {
  double v = 0.0;
  const char* begin = cell.data();
  const char* end = cell.data() + cell.size();
  while (begin < end && *begin == ' ') ++begin;
  if (begin < end && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end) {
    if (cell == "nan" || cell == "NaN" || cell == "inf" || cell == "-inf" || cell == "NA")
      throw NonFiniteValueError(fmt::format("non-finite value '{}'", cell));
    throw DataError(fmt::format("cannot parse '{}' as a number", cell));
  }
  if (!std::isfinite(v)) throw NonFiniteValueError(fmt::format("non-finite value '{}'", cell));
  return v;
}

double ColumnTransform::apply(const std::string& cell) const {
  if (categorical) {
    auto it = std::lower_bound(levels.begin(), levels.end(), cell);
    if (it == levels.end() || *it != cell)
      throw DataError(fmt::format("unknown level '{}' in column '{}'", cell, name));
    return static_cast<double>(it - levels.begin());
  }
  double v = (parse_number(cell) - min) / (max - min);
  return std::clamp(v, 0.0, 1.0);
}

Table read_csv(std::istream& in) {
  Table table;
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty CSV input");
  table.names = split_line(line);
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    auto cells = split_line(line);
    if (cells.size() != table.names.size())
      throw DimensionMismatchError(fmt::format("CSV row {} has {} fields, expected {}", table.rows.size() + 2,
                                               cells.size(), table.names.size()));
    table.rows.push_back(std::move(cells));
  }
  return table;
}

Table read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open '{}'", path));
  return read_csv(in);
}

void write_csv(std::ostream& out, const Table& table) {
  auto write_row = [&](const std::vector<std::string>& row) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) out << ',';
      out << quote_if_needed(row[j]);
    }
    out << '\n';
  };
  write_row(table.names);
  for (const auto& row : table.rows) write_row(row);
}

Schema Schema::parse(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(fmt::format("schema is not valid JSON: {}", e.what()));
  }
  if (!j.contains("columns") || !j["columns"].is_array()) throw DataError("schema needs a 'columns' array");
  Schema schema;
  for (const auto& c : j["columns"]) {
    if (!c.contains("name") || !c.contains("role")) throw DataError("schema column needs name and role");
    schema.columns.push_back({c["name"].get<std::string>(), parse_role(c["role"].get<std::string>())});
  }
  return schema;
}

Schema Schema::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open schema '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string Schema::dump() const {
  nlohmann::json cols = nlohmann::json::array();
  for (const auto& c : columns) cols.push_back({{"name", c.name}, {"role", role_name(c.role)}});
  return nlohmann::json{{"columns", cols}}.dump(2) + "\n";
}

Preprocessed preprocess(const Table& table, const Schema& schema, Outcome outcome) {
  if (table.rows.empty()) throw DataError("no data rows");
  Preprocessed out;
  TransformRecord& tr = out.transform;
  tr.outcome = outcome;

  std::vector<std::size_t> x_cols, z_cols;
  std::size_t y_col = 0;
  bool have_outcome = false;
  for (const auto& c : schema.columns) {
    std::size_t idx = table.column(c.name);
    switch (c.role) {
      case Role::kX:
        x_cols.push_back(idx);
        tr.x_columns.push_back(fit_continuous(table, idx));
        break;
      case Role::kCategorical:
        x_cols.push_back(idx);
        tr.x_columns.push_back(fit_categorical(table, idx));
        break;
      case Role::kZ:
        z_cols.push_back(idx);
        tr.z_columns.push_back(fit_continuous(table, idx));
        break;
      case Role::kBoth:
        x_cols.push_back(idx);
        z_cols.push_back(idx);
        tr.x_columns.push_back(fit_continuous(table, idx));
        tr.z_columns.push_back(tr.x_columns.back());
        break;
      case Role::kOutcome:
        if (have_outcome) throw DataError("schema names more than one outcome column");
        y_col = idx;
        have_outcome = true;
        tr.outcome_column = c.name;
        break;
      case Role::kIgnore: break;
    }
  }
  if (!have_outcome) throw DataError("schema names no outcome column");
  if (x_cols.empty()) throw DataError("schema names no covariate columns");
  if (z_cols.empty()) throw DataError("schema names no smoothing columns");

  Dataset& d = out.data;
  d.n = table.rows.size();
  d.p = x_cols.size();
  d.q = z_cols.size();
  d.outcome = outcome;
  d.x.resize(d.n * d.p);
  d.z.resize(d.n * d.q);
  d.y.resize(d.n);
  for (const auto& t : tr.x_columns) d.variables.levels.push_back(t.categorical ? static_cast<int>(t.levels.size()) : 0);

  for (std::size_t i = 0; i < d.n; ++i) {
    const auto& row = table.rows[i];
    for (std::size_t j = 0; j < d.p; ++j) d.x[i * d.p + j] = tr.x_columns[j].apply(row[x_cols[j]]);
    for (std::size_t j = 0; j < d.q; ++j) d.z[i * d.q + j] = tr.z_columns[j].apply(row[z_cols[j]]);
    d.y[i] = parse_number(row[y_col]);
  }

  tr.y_min = *std::min_element(d.y.begin(), d.y.end());
  tr.y_max = *std::max_element(d.y.begin(), d.y.end());
  double mean = 0.0;
  for (double v : d.y) mean += v;
  mean /= static_cast<double>(d.n);

  if (outcome == Outcome::kGaussian) {
    tr.y_center = mean;
    for (double& v : d.y) v -= mean;
  } else {
    for (double v : d.y)
      if (v != 0.0 && v != 1.0) throw DataError("binary outcome must be 0 or 1");
    const double eps = 0.5 / static_cast<double>(d.n);
    boost::math::normal_distribution<double> std_normal;
    tr.y_center = boost::math::quantile(std_normal, std::clamp(mean, eps, 1.0 - eps));
  }
  d.validate();
  return out;
}

PredictionInputs apply_transform(const TransformRecord& transform, const Table& table) {
  PredictionInputs in;
  in.n = table.rows.size();
  in.p = transform.x_columns.size();
  in.q = transform.z_columns.size();
  std::vector<std::size_t> x_cols, z_cols;
  for (const auto& t : transform.x_columns) x_cols.push_back(table.column(t.name));
  for (const auto& t : transform.z_columns) z_cols.push_back(table.column(t.name));
  in.x.resize(in.n * in.p);
  in.z.resize(in.n * in.q);
  for (std::size_t i = 0; i < in.n; ++i) {
    const auto& row = table.rows[i];
    for (std::size_t j = 0; j < in.p; ++j) in.x[i * in.p + j] = transform.x_columns[j].apply(row[x_cols[j]]);
    for (std::size_t j = 0; j < in.q; ++j) in.z[i * in.q + j] = transform.z_columns[j].apply(row[z_cols[j]]);
  }
  return in;
}

}  // namespace ridgebart
