// Copyright 2026 The xbar Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "xbar/device.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace xbar {
namespace {

// (|label|, A/p_max * |label|) sampled from NeuroSim's paramA table. The
// product is smooth in the label, so linear interpolation between knots is
// accurate to well under a percent.
constexpr std::array<std::pair<double, double>, 29> kCoefficientKnots{{
    {0.01, 0.799902}, {0.25, 0.799458}, {0.50, 0.798123}, {0.75, 0.795894}, {1.00, 0.792765},
    {1.25, 0.788727}, {1.50, 0.783771}, {1.75, 0.777882}, {2.00, 0.771044}, {2.25, 0.763238},
    {2.50, 0.754440}, {2.75, 0.744631}, {3.00, 0.733776}, {3.25, 0.721851}, {3.50, 0.708816},
    {3.75, 0.694639}, {4.00, 0.679280}, {4.25, 0.662690}, {4.50, 0.644837}, {4.75, 0.625670},
    {5.00, 0.605150}, {5.25, 0.583244}, {5.50, 0.559917}, {5.75, 0.535153}, {6.00, 0.508950},
    {6.25, 0.481337}, {6.50, 0.452354}, {6.75, 0.422091}, {7.00, 0.390649},
}};

constexpr double kLinearLabel = 1e-6;
// Plan slack, in pulses, below which a remainder is treated as rounding noise.
constexpr double kPlanTolerance = 1e-9;

double label_for(const DeviceProfile& profile, PulseDirection direction) {
  return direction == PulseDirection::Potentiate ? profile.nl_ltp : profile.nl_ltd;
}

// Nominal update curve for one direction, in travel coordinates: distance
// from the direction's starting bound.
class Curve {
 public:
  Curve(const DeviceProfile& profile, PulseDirection direction)
      : profile_(profile), direction_(direction), p_(static_cast<double>(profile.p_max)) {
    const double coeff = curve_coefficient(label_for(profile, direction));
    linear_ = std::isinf(coeff);
    if (!linear_) {
      a_ = coeff * p_;
      b_ = -profile.range() / std::expm1(-p_ / a_);
    }
  }

  double position(double g) const {
    double travel = direction_ == PulseDirection::Potentiate ? g - profile_.g_min : profile_.g_max - g;
    travel = std::clamp(travel, 0.0, profile_.range());
    if (linear_) return travel / profile_.range() * p_;
    return -a_ * std::log1p(-travel / b_);
  }

  double conductance(double position) const {
    position = std::max(position, 0.0);
    double travel = linear_ ? position / p_ * profile_.range() : -b_ * std::expm1(-position / a_);
    travel = std::clamp(travel, 0.0, profile_.range());
    return direction_ == PulseDirection::Potentiate ? profile_.g_min + travel
                                                    : profile_.g_max - travel;
  }

 private:
  const DeviceProfile& profile_;
  PulseDirection direction_;
  double p_;
  bool linear_ = true;
  double a_ = 0.0;  // A, in pulses
  double b_ = 0.0;  // B, in siemens
};

double perturb(double g, double endpoint, const DeviceProfile& profile, Rng& rng) {
  double out = endpoint;
  if (profile.sigma_c2c > 0.0) {
    std::normal_distribution<double> xi(0.0, profile.sigma_c2c);
    out = endpoint + (endpoint - g) * xi(rng);
  }
  return std::clamp(out, profile.g_min, profile.g_max);
}

void require_in_range(const DeviceProfile& profile, double g, const char* what) {
  if (!profile.contains(g) || std::isnan(g)) {
    throw std::domain_error(std::string(what) + " conductance " + std::to_string(g) +
                            " outside [g_min, g_max] of device '" + profile.name + "'");
  }
}

}  // namespace

void DeviceProfile::validate() const {
  auto fail = [this](const std::string& msg) {
    throw std::invalid_argument("device '" + name + "': " + msg);
  };
  if (name.empty()) throw std::invalid_argument("device profile has an empty name");
  if (!(g_min > 0.0)) fail("g_min must be > 0");
  if (!(g_max > g_min)) fail("g_max must be > g_min");
  if (n_levels == 1) fail("n_levels must be >= 2 (or 0 for a continuous device)");
  if (p_max < 1) fail("p_max must be >= 1");
  if (!(sigma_c2c >= 0.0) || !std::isfinite(sigma_c2c)) fail("sigma_c2c must be finite and >= 0");
  if (!(e_pulse > 0.0)) fail("e_pulse must be > 0");
  if (!(t_pulse > 0.0)) fail("t_pulse must be > 0");
  if (!std::isfinite(nl_ltp) || !std::isfinite(nl_ltd)) fail("nonlinearity labels must be finite");
}

double curve_coefficient(double nonlinearity) {
  const double m = std::abs(nonlinearity);
  if (m < kLinearLabel) return std::numeric_limits<double>::infinity();
  double product;
  if (m <= kCoefficientKnots.front().first) {
    product = kCoefficientKnots.front().second;
  } else if (m >= kCoefficientKnots.back().first) {
    product = kCoefficientKnots.back().second;
  } else {
    auto hi = std::upper_bound(kCoefficientKnots.begin(), kCoefficientKnots.end(), m,
                               [](double v, const auto& knot) { return v < knot.first; });
    auto lo = hi - 1;
    const double w = (m - lo->first) / (hi->first - lo->first);
    product = lo->second + w * (hi->second - lo->second);
  }
  return product / m;
}

double pulse_position(const DeviceProfile& profile, PulseDirection direction, double g) {
  return Curve(profile, direction).position(g);
}

double nominal_conductance(const DeviceProfile& profile, PulseDirection direction,
                           double position) {
  return Curve(profile, direction).conductance(position);
}

double nominal_step(const DeviceProfile& profile, PulseDirection direction, double g) {
  return nominal_conductance(profile, direction, pulse_position(profile, direction, g) + 1.0) - g;
}

double snap_to_level(const DeviceProfile& profile, double target) {
  const double t = std::clamp(target, profile.g_min, profile.g_max);
  if (!profile.quantized()) return t;
  const double spacing = profile.range() / static_cast<double>(profile.n_levels - 1);
  const double idx = std::round((t - profile.g_min) / spacing);
  if (idx <= 0.0) return profile.g_min;
  if (idx >= static_cast<double>(profile.n_levels - 1)) return profile.g_max;
  return profile.g_min + idx * spacing;
}

double apply_pulse(double g, PulseDirection direction, const DeviceProfile& profile, Rng& rng) {
  require_in_range(profile, g, "pulse start");
  const Curve curve(profile, direction);
  return perturb(g, curve.conductance(curve.position(g) + 1.0), profile, rng);
}

ProgramResult program_cell(double g_start, double target, const DeviceProfile& profile,
                           Rng& rng) {
  require_in_range(profile, g_start, "program start");
  require_in_range(profile, target, "program target");

  const double t = snap_to_level(profile, target);
  if (g_start == t) return {t, 0, 0.0, 0.0};

  const auto direction = t > g_start ? PulseDirection::Potentiate : PulseDirection::Depress;
  const Curve curve(profile, direction);
  const double distance = curve.position(t) - curve.position(g_start);

  auto whole = static_cast<std::uint64_t>(std::floor(distance + kPlanTolerance));
  const double remainder = distance - static_cast<double>(whole);
  const bool partial = whole == 0 || remainder > kPlanTolerance;
  const std::uint64_t planned = std::min(whole + (partial ? 1 : 0), 2 * profile.p_max);

  double g = g_start;
  for (std::uint64_t k = 0; k < planned; ++k) {
    const bool last = k + 1 == planned;
    const double size = (last && partial) ? remainder : 1.0;
    double endpoint = curve.conductance(curve.position(g) + size);
    // A train that is still on its nominal trajectory ends exactly on target.
    if (last && std::abs(endpoint - t) <= kPlanTolerance * profile.range()) endpoint = t;
    g = perturb(g, endpoint, profile, rng);
  }

  const double n = static_cast<double>(planned);
  return {g, planned, n * profile.e_pulse, n * profile.t_pulse};
}

}  // namespace xbar
