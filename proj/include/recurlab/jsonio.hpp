#pragma once

#include <json.hpp>

#include "recurlab/numeric.hpp"

namespace recurlab {

using json = nlohmann::json;

/// {"lo": ..., "hi": ...} with outward-rounded decimal strings.
inline json interval_json(const Interval& x, int digits = 30) {
  return json{{"lo", x.lo().to_decimal(Round::Down, digits)}, {"hi", x.hi().to_decimal(Round::Up, digits)}};
}

inline json complex_json(const ComplexInterval& z, int digits = 30) {
  return json{{"re", interval_json(z.re, digits)}, {"im", interval_json(z.im, digits)}};
}

}  // namespace recurlab
