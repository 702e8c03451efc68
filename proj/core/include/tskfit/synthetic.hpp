#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tskfit/dataset.hpp"
#include "tskfit/model_file.hpp"

namespace tskfit {

struct InputRange {
  std::string name;
  double low = 0.0;
  double high = 1.0;
};

// Ground truth plus sampling design for a synthetic dataset.
struct GeneratorSpec {
  ModelDocument truth;
  // Uniform sampling range per raw column. Columns without an entry use the
  // span of their premise breakpoints widened by 10% (model inputs only) or
  // [0, 1].
  std::vector<InputRange> ranges;
  std::size_t samples = 200;
  double noise_sigma = 0.0;
  std::uint64_t seed = 0;
};

// Raw columns the generator samples: feature variables in order of first
// appearance, or the model inputs when there are no features.
std::vector<std::string> generator_columns(const ModelDocument& truth);

// y = truth(x) + N(0, sigma^2), x uniform per column; deterministic for a
// fixed seed (mt19937_64). Lagged truth documents are rejected.
Dataset gen_synthetic(const GeneratorSpec& spec);

}  // namespace tskfit
