#pragma once

#include <string>

#include "rpaths/rng.hpp"

namespace rpaths {

// Configurable sampler for the initial-condition factor xi of the 2-D saddle
// model. The limit statement only requires xi's distribution; these built-ins
// cover the regimes exercised by the experiments.
struct XiSampler {
  enum class Kind { point_mass, uniform01, gaussian, two_point };

  Kind kind = Kind::point_mass;
  double value = 1.0;  // the atom, for point_mass

  double sample(Rng& rng) const;
  bool symmetric() const;

  static XiSampler point_mass(double v) { return {Kind::point_mass, v}; }
  static XiSampler uniform01() { return {Kind::uniform01, 0.0}; }
  static XiSampler gaussian() { return {Kind::gaussian, 0.0}; }
  static XiSampler two_point() { return {Kind::two_point, 0.0}; }

  // Accepts "point:<v>", "uniform01", "gaussian", "twopoint".
  static XiSampler parse(const std::string& text);
  std::string describe() const;
};

}  // namespace rpaths
