#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "ridgebart/core.hpp"

namespace ridgebart {

/// Header plus string cells, row-major.
struct Table {
  std::vector<std::string> names;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(const std::string& name) const;  // throws DataError
};

/// Comma-separated, first line is the header. Double-quoted fields are
/// accepted but embedded newlines are not.
Table read_csv(std::istream& in);
Table read_csv_file(const std::string& path);
void write_csv(std::ostream& out, const Table& table);

enum class Role { kX, kZ, kBoth, kCategorical, kOutcome, kIgnore };

struct ColumnRole {
  std::string name;
  Role role = Role::kIgnore;
};

/// Maps CSV columns to model roles. Stored on disk as
/// {"columns": [{"name": "x1", "role": "x"}, ...]} with roles
/// x, z, both, categorical, outcome, ignore.
struct Schema {
  std::vector<ColumnRole> columns;

  static Schema parse(const std::string& json_text);
  static Schema load(const std::string& path);
  std::string dump() const;
};

struct ColumnTransform {
  std::string name;
  bool categorical = false;
  double min = 0.0;
  double max = 1.0;
  std::vector<std::string> levels;

  /// Scaled and clamped value, or the level code for categorical columns.
  double apply(const std::string& cell) const;

  friend bool operator==(const ColumnTransform&, const ColumnTransform&) = default;
};

/// Everything needed to map new raw rows exactly like the training rows.
struct TransformRecord {
  std::vector<ColumnTransform> x_columns;
  std::vector<ColumnTransform> z_columns;
  std::string outcome_column;
  Outcome outcome = Outcome::kGaussian;
  double y_center = 0.0;
  double y_min = 0.0;
  double y_max = 1.0;

  friend bool operator==(const TransformRecord&, const TransformRecord&) = default;
};

struct Preprocessed {
  Dataset data;
  TransformRecord transform;
};

/// Min-max scales continuous columns, codes categorical ones, centers a
/// Gaussian outcome. Throws ConstantColumnError / NonFiniteValueError /
/// DataError.
Preprocessed preprocess(const Table& table, const Schema& schema, Outcome outcome);

/// Covariates for prediction, mapped through a training transform.
struct PredictionInputs {
  std::size_t n = 0;
  std::size_t p = 0;
  std::size_t q = 0;
  std::vector<double> x;
  std::vector<double> z;
};

PredictionInputs apply_transform(const TransformRecord& transform, const Table& table);

/// Parses a finite double; throws NonFiniteValueError or DataError.
double parse_number(const std::string& cell);

}  // namespace ridgebart
