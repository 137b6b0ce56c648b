#pragma once

#include <random>
#include <string>

#include "fmpo/fmpo_algebra.hpp"

namespace fmpo::testing {

inline std::string data_path(const std::string& name) { return std::string(FMPO_DATA_DIR) + "/" + name; }

inline GradedSpace random_space(std::mt19937_64& rng, int max_dim = 3) {
  std::uniform_int_distribution<int> d(0, max_dim);
  int e = d(rng), o = d(rng);
  if (e + o == 0) e = 1;
  return {e, o};
}

inline GradedTensor random_tensor(std::mt19937_64& rng, std::vector<GradedSpace> legs, int parity) {
  std::normal_distribution<double> n;
  GradedTensor t(std::move(legs), parity);
  for (std::size_t k = 0; k < t.size(); ++k)
    if (t.index_parity(k) == parity) t.raw(k) = {n(rng), n(rng)};
  return t;
}

inline FmpoSiteTensor random_site(std::mt19937_64& rng, const GradedSpace& v, const GradedSpace& p) {
  return FmpoSiteTensor(random_tensor(rng, {v, p, p, v}, 0));
}

}  // namespace fmpo::testing
