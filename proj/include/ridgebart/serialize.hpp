#pragma once

#include <string>
#include <string_view>

#include "ridgebart/ensemble.hpp"

namespace ridgebart {

/// Model-file format version written by serialize().
inline constexpr int kModelFormatVersion = 1;

/// JSON model file. Doubles are written in shortest round-trip form, so
/// deserialize(serialize(s)) == s bit for bit. See docs/model_format.md.
std::string serialize(const PosteriorSamples& samples);

/// Throws VersionMismatchError, TruncatedStreamError, InvariantViolationError
/// or FormatError.
PosteriorSamples deserialize(std::string_view bytes);

void save_model(const std::string& path, const PosteriorSamples& samples);
PosteriorSamples load_model(const std::string& path);

/// Canonical single-line JSON of a prior configuration.
std::string config_json(const PriorConfig& config, Outcome outcome);

}  // namespace ridgebart
