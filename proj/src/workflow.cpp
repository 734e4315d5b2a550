#include "ridgebart/workflow.hpp"

namespace ridgebart {

PosteriorSamples fit_table(const Table& table, const Schema& schema, Outcome outcome, PriorConfig config,
                           const McmcSettings& settings, std::vector<IterationDiagnostics>* diagnostics) {
  const Preprocessed pre = preprocess(table, schema, outcome);
  calibrate_prior(config, pre.data, pre.transform.y_min, pre.transform.y_max);
  return fit(pre.data, pre.transform, config, settings, diagnostics);
}

Table select_rows(const Table& table, std::span<const std::size_t> rows) {
  Table out;
  out.names = table.names;
  out.rows.reserve(rows.size());
  for (std::size_t i : rows) out.rows.push_back(table.rows.at(i));
  return out;
}

}  // namespace ridgebart
