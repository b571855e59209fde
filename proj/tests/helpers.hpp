#pragma once

#include <string>
#include <vector>

#include "canonproc/core.hpp"
#include "canonproc/rng.hpp"

namespace testing {

inline std::vector<double> random_vector(std::size_t d, std::uint64_t seed,
                                         const std::string& label = "test/vector") {
  const canonproc::CounterStream rng(seed, label, 0);
  std::vector<double> v(d);
  for (std::size_t j = 0; j < d; ++j) v[j] = rng.normal(j);
  return v;
}

inline std::vector<std::vector<double>> rows(const canonproc::FiniteSet& set) {
  std::vector<std::vector<double>> out;
  for (const auto& p : set.points()) out.emplace_back(p.coords().begin(), p.coords().end());
  return out;
}

}  // namespace testing
