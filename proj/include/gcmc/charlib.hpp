/*
 * Copyright 2026 The gcmc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <string>
#include <vector>

#include "gcmc/floorplan.hpp"
#include "gcmc/macro_config.hpp"
#include "gcmc/technology.hpp"

namespace gcmc::charlib {

/// Delay components in seconds.
struct DelayBreakdown {
  double decoder = 0.0;
  double wordline = 0.0;
  double bitline = 0.0;  // RBL swing (read) or SN charge / BL flip (write)
  double sense = 0.0;    // sense-amp resolve, read only
  double column_mux = 0.0;
  double bank_select = 0.0;

  double total() const {
    return decoder + wordline + bitline + sense + column_mux + bank_select;
  }
};

DelayBreakdown read_delay_breakdown(const MacroConfig& config, const tech::TechnologyModel& tech);
DelayBreakdown write_delay_breakdown(const MacroConfig& config, const tech::TechnologyModel& tech);
double read_delay(const MacroConfig& config, const tech::TechnologyModel& tech);
double write_delay(const MacroConfig& config, const tech::TechnologyModel& tech);

/// Smallest N with N * fo4 >= delay.
int stages_for(double delay, const tech::TechnologyModel& tech);
/// 1 / ((N + guard) * fo4).
double quantized_frequency(int stages, const tech::TechnologyModel& tech);

struct FrequencyResult {
  double f_read_max = 0.0;   // Hz
  double f_write_max = 0.0;  // Hz
  int read_stages = 0;
  int write_stages = 0;
  int delay_chain_stages = 0;  // max of the two
};

FrequencyResult max_frequency(const MacroConfig& config, const tech::TechnologyModel& tech);

double leakage_power(const MacroConfig& config, const tech::TechnologyModel& tech);     // W
double dynamic_energy(const MacroConfig& config, const tech::TechnologyModel& tech);    // J

struct RetentionTrace {
  std::vector<double> time_s;
  std::vector<double> voltage_v;
  double written_level = 0.0;  // V
  double failure_level = 0.0;  // V
  double failure_time = 0.0;   // s, +inf when the node never reaches the level
  bool converged = true;
};

/// Decay of a stored "1" through the write transistor with WBL held low.
/// Throws WrongVariantError for SRAM and InvalidConfigError for delta_vt < 0.
RetentionTrace retention_solve(const tech::BitcellVariant& variant,
                               const tech::TechnologyModel& tech, double delta_vt);
RetentionTrace retention_solve(const MacroConfig& config, const tech::TechnologyModel& tech,
                               double delta_vt);

struct CharReport {
  MacroConfig config;
  double read_delay = 0.0;
  double write_delay = 0.0;
  double f_read_max = 0.0;
  double f_write_max = 0.0;
  double f_op = 0.0;
  double bandwidth_eff = 0.0;  // bit/s
  double p_leak = 0.0;
  double e_access = 0.0;
  double t_retention = 0.0;  // +inf for SRAM
  double delta_vt = 0.0;
  floorplan::AreaReport area;
  int read_stages = 0;
  int write_stages = 0;
  int delay_chain_stages = 0;
};

double effective_bandwidth(const MacroConfig& config, const tech::TechnologyModel& tech,
                           const CharReport& report);

CharReport characterize(const MacroConfig& config, const tech::TechnologyModel& tech,
                        double delta_vt = 0.0);

std::string emit_liberty_summary(const CharReport& report, const MacroConfig& config,
                                 const tech::TechnologyModel& tech);

/// Stable-key JSON with units in the key names. SRAM retention is null.
std::string report_json(const CharReport& report);

}  // namespace gcmc::charlib
