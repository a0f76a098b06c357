#pragma once

#include <string>
#include <vector>

#include "rpaths/analytic.hpp"
#include "rpaths/stats.hpp"

namespace rpaths {

// QQ plot of sample quantiles against law quantiles at levels (i - 0.5)/n,
// with the identity line and the pointwise 95% DKW band around it. The law
// must have a quantile (gumbel or Theta-affine). Returns false if the path
// is not writable.
bool emit_qq_svg(const EmpiricalSample& sample, const LimitLaw& law,
                 const std::string& path);

// Two-sample QQ against a reference sample (used for the saddle mixture,
// which has no closed quantile).
bool emit_qq_svg(const EmpiricalSample& sample,
                 const EmpiricalSample& reference, const std::string& path);

// Overlay of named curves sharing an x grid (CDF overlays and the
// characteristic-function comparison).
struct OverlayCurve {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

bool emit_overlay_svg(const std::vector<OverlayCurve>& curves,
                      const std::string& x_label, const std::string& y_label,
                      const std::string& path);

}  // namespace rpaths
