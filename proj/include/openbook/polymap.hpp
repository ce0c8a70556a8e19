#pragma once

#include <span>
#include <vector>

#include "openbook/polynomial.hpp"

namespace openbook {

// Ordered tuple F = (f_1, ..., f_p) of polynomials over a shared variable set.
struct PolyMap {
  std::vector<Polynomial> components;

  PolyMap() = default;
  explicit PolyMap(std::vector<Polynomial> comps) : components(std::move(comps)) {
    if (components.empty()) throw PolyError("PolyMap needs at least one component");
    for (const auto& f : components) {
      if (f.num_vars() != components.front().num_vars())
        throw PolyError("PolyMap components over different variable counts");
    }
  }

  std::size_t p() const { return components.size(); }
  std::size_t num_vars() const { return components.front().num_vars(); }

  std::vector<double> evaluate(std::span<const double> x) const {
    std::vector<double> v;
    v.reserve(components.size());
    for (const auto& f : components) v.push_back(f.evaluate(x));
    return v;
  }
};

// ||F||^2 = f_1^2 + ... + f_p^2, exactly.
inline Polynomial norm_squared(const PolyMap& F) {
  Polynomial s(F.num_vars());
  for (const auto& f : F.components) s = s + f * f;
  return s;
}

} // namespace openbook
