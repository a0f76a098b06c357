#include "rpaths/xi.hpp"

#include <stdexcept>

namespace rpaths {

double XiSampler::sample(Rng& rng) const {
  switch (kind) {
    case Kind::point_mass:
      return value;
    case Kind::uniform01:
      return rng.uniform01();
    case Kind::gaussian:
      return rng.normal();
    case Kind::two_point:
      return (rng.next_u64() & 1u) ? 1.0 : -1.0;
  }
  throw std::logic_error("XiSampler: unknown kind");
}

bool XiSampler::symmetric() const {
  switch (kind) {
    case Kind::point_mass:
      return value == 0.0;
    case Kind::gaussian:
    case Kind::two_point:
      return true;
    case Kind::uniform01:
      return false;
  }
  return false;
}

XiSampler XiSampler::parse(const std::string& text) {
  if (text == "uniform01") return uniform01();
  if (text == "gaussian") return gaussian();
  if (text == "twopoint") return two_point();
  if (text.rfind("point:", 0) == 0) {
    return point_mass(std::stod(text.substr(6)));
  }
  throw std::invalid_argument("XiSampler: unknown spec '" + text + "'");
}

std::string XiSampler::describe() const {
  switch (kind) {
    case Kind::point_mass:
      return "point:" + std::to_string(value);
    case Kind::uniform01:
      return "uniform01";
    case Kind::gaussian:
      return "gaussian";
    case Kind::two_point:
      return "twopoint";
  }
  return "?";
}

}  // namespace rpaths
