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

#pragma once

#include <cstdint>
#include <string>

#include "xbar/rng.hpp"

namespace xbar {

enum class PulseDirection { Potentiate, Depress };

/// Parametric RRAM cell. All numeric values except the Ag-aSi nonlinearity pair
/// are calibration inputs (see data/profiles.toml), not measured constants.
struct DeviceProfile {
  std::string name;
  double g_min = 0.0;  ///< S
  double g_max = 0.0;  ///< S
  /// Number of uniformly spaced programmable levels. 0 marks an unquantized
  /// (continuous) device, used for idealized reference runs.
  std::uint64_t n_levels = 0;
  double nl_ltp = 0.0;  ///< potentiation nonlinearity label
  double nl_ltd = 0.0;  ///< depression nonlinearity label; sign is conventional
  double sigma_c2c = 0.0;  ///< relative std-dev of each pulse's step
  double e_pulse = 0.0;  ///< J per pulse
  double t_pulse = 0.0;  ///< s per pulse
  std::uint64_t p_max = 1;  ///< pulses to traverse [g_min, g_max]

  /// Throws std::invalid_argument naming the first violated constraint.
  void validate() const;

  bool quantized() const { return n_levels != 0; }
  double range() const { return g_max - g_min; }
  bool contains(double g) const { return g >= g_min && g <= g_max; }
  bool noiseless() const { return sigma_c2c == 0.0; }
};

/// Curve coefficient A / p_max for a nonlinearity label, following the NeuroSim
/// lookup convention; only |label| matters. Returns +inf for a linear device.
double curve_coefficient(double nonlinearity);

/// Position, in pulses from the starting bound of `direction` (g_min for
/// potentiation, g_max for depression), at which the nominal curve passes g.
double pulse_position(const DeviceProfile& profile, PulseDirection direction, double g);

/// Nominal conductance after `position` pulses from the starting bound, clamped
/// to [g_min, g_max].
///
/// Potentiation follows G(P) = g_min + B (1 - exp(-P / A)) with B chosen so that
/// G(p_max) = g_max; depression is the mirror image descending from g_max.
double nominal_conductance(const DeviceProfile& profile, PulseDirection direction,
                           double position);

/// Nominal conductance change of one pulse starting at g.
double nominal_step(const DeviceProfile& profile, PulseDirection direction, double g);

/// Nearest programmable level. Identity (after clamping) for continuous devices.
double snap_to_level(const DeviceProfile& profile, double target);

/// One write pulse from g. The nominal step is scaled by (1 + xi),
/// xi ~ N(0, sigma_c2c^2), and the result clamped to [g_min, g_max].
/// Throws std::domain_error when g lies outside [g_min, g_max].
double apply_pulse(double g, PulseDirection direction, const DeviceProfile& profile, Rng& rng);

struct ProgramResult {
  double g_final = 0.0;
  std::uint64_t pulses = 0;
  double energy = 0.0;   ///< J
  double latency = 0.0;  ///< s
};

/// Open-loop programming of one cell toward `target`.
///
/// The target is snapped to the nearest level, then a pulse train is planned
/// from the nominal curve: whole pulses plus one shortened final pulse for the
/// fractional remainder. The cell is not observed during the train, so
/// cycle-to-cycle noise accumulates; closing the loop is the job of
/// write-and-verify. At most 2 * p_max pulses are issued.
ProgramResult program_cell(double g_start, double target, const DeviceProfile& profile, Rng& rng);

}  // namespace xbar
