#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ridgebart/core.hpp"
#include "ridgebart/ensemble.hpp"
#include "ridgebart/preprocess.hpp"
#include "ridgebart/sampler.hpp"

namespace ridgebart {

/// Preprocess a raw table, calibrate tau and lambda_sigma from the outcome,
/// and run every chain.
PosteriorSamples fit_table(const Table& table, const Schema& schema, Outcome outcome, PriorConfig config,
                           const McmcSettings& settings, std::vector<IterationDiagnostics>* diagnostics = nullptr);

Table select_rows(const Table& table, std::span<const std::size_t> rows);

}  // namespace ridgebart
