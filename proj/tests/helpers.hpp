#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "ridgebart/core.hpp"
#include "ridgebart/preprocess.hpp"
#include "ridgebart/rng.hpp"
#include "ridgebart/tree.hpp"

namespace rbtest {

inline ridgebart::Table csv(const std::string& text) {
  std::istringstream in(text);
  return ridgebart::read_csv(in);
}

// Continuous x and z drawn uniformly, y standard normal.
inline ridgebart::Dataset random_dataset(std::size_t n, std::size_t p, std::size_t q, std::uint64_t seed) {
  ridgebart::Rng rng(seed, 99);
  ridgebart::Dataset d;
  d.n = n;
  d.p = p;
  d.q = q;
  for (std::size_t i = 0; i < n * p; ++i) d.x.push_back(rng.uniform());
  for (std::size_t i = 0; i < n * q; ++i) d.z.push_back(rng.uniform());
  for (std::size_t i = 0; i < n; ++i) d.y.push_back(rng.normal());
  d.variables.levels.assign(p, 0);
  return d;
}

inline ridgebart::VariableInfo continuous(std::size_t p) {
  ridgebart::VariableInfo v;
  v.levels.assign(p, 0);
  return v;
}

}  // namespace rbtest
