#pragma once

#include <boost/rational.hpp>
#include <string>

namespace isapp {

// Exact dyadic probabilities. Flip budgets are capped at 48 so numerators
// and denominators always fit.
using Rat = boost::rational<long long>;

inline std::string render_rat(const Rat& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace isapp
