#pragma once

#include <cstdint>

#include "treemap/classify.hpp"
#include "treemap/model.hpp"

namespace treemap {

struct GeneratorOptions {
  int max_attempts = 100;
};

/// Random dataset whose classification is `target`. Deterministic in all
/// arguments. Throws DatasetError when no attempt lands in the class.
TimeVaryingTree generate_synthetic(const DataClass& target, int leaves, int timesteps, std::uint64_t seed,
                                   const GeneratorOptions& opts = {});

}  // namespace treemap
