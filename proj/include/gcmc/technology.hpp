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

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gcmc::tech {

enum class DeviceKind { SiNMOS, SiPMOS, OSNMOS };

enum class VariantName { SiSiGC, OSSiGC, SRAM6T };

enum class PortStyle { DualPortGC, SinglePortSRAM };

/// Per-width device model. Units: vt in V, ss in mV/decade (quoted at the
/// 300 K reference), currents in A/um, width in um, gate capacitance in fF/um.
struct TransistorModel {
  std::string name;
  DeviceKind kind = DeviceKind::SiNMOS;
  double vt = 0.0;
  double ss = 0.0;
  double i_off_ref = 0.0;
  double i_on = 0.0;
  double width = 0.0;
  double c_gate = 0.0;

  bool is_nmos() const { return kind != DeviceKind::SiPMOS; }
};

struct BitcellVariant {
  VariantName name = VariantName::SiSiGC;
  TransistorModel write_tx;  // SRAM: access device
  TransistorModel read_tx;   // SRAM: pull-down device
  double cell_area = 0.0;    // um^2
  double c_sn = 0.0;         // fF, unused for SRAM
  double c_bl_cell = 0.0;    // fF of bitline loading contributed per cell
  double sense_amp_fo4 = 0.0;
  PortStyle ports = PortStyle::DualPortGC;
  bool has_wwl_level_shifter = false;

  bool is_gc() const { return ports == PortStyle::DualPortGC; }
  double cell_pitch() const;  // um, square cell
};

/// Constants behind the analytical timing model.
struct TimingModel {
  double alpha = 1.3;              // alpha-power drive exponent
  double decoder_base_fo4 = 1.0;
  double decoder_fo4_per_bit = 0.6;
  double driver_i_on = 600e-6;     // A, wordline/write driver drive current
  int guard_stages = 1;
  double sram_port_duty = 0.5;
  double delta_vt_max = 0.2;       // V, upper end of the V_T engineering sweep
  double sram_read_stack = 0.5;    // access + pull-down series derating
  double sram_flip_fo4 = 2.0;
};

/// Area (um^2) and leakage constants for the periphery model.
struct PeripheryModel {
  double decoder_area_per_row_bit = 0.0;
  double driver_area_per_row = 0.0;
  double level_shifter_area_per_row = 0.0;
  double column_area_gc = 0.0;
  double column_area_sram = 0.0;
  double sense_amp_area_gc = 0.0;
  double sense_amp_area_sram = 0.0;
  double write_driver_area = 0.0;
  double dff_area = 0.0;
  double controller_area = 0.0;
  double bank_select_area = 0.0;
  double ring_width = 0.0;          // um
  double leakage_density = 0.0;     // W/um^2
};

struct TechnologyModel {
  std::string name;
  double vdd = 0.0;                 // V
  double vdd_boost = 0.0;           // V
  double temperature = 0.0;         // K
  double wire_r = 0.0;              // ohm/um
  double wire_c = 0.0;              // fF/um
  double inverter_fo4_delay = 0.0;  // ps
  double sense_margin = 0.0;        // V
  double retention_margin = 0.0;    // V
  double kappa = 1.0;               // SN-to-gate coupling in the hold bias
  TimingModel timing;
  PeripheryModel periphery;
  std::vector<TransistorModel> devices;
  std::vector<BitcellVariant> variants;

  double thermal_voltage() const;
  double fo4_seconds() const { return inverter_fo4_delay * 1e-12; }
  const TransistorModel& device(std::string_view name) const;
  const BitcellVariant* find_variant(VariantName name) const;
};

/// `path` defaults to the GCMC_TECH environment variable when empty.
TechnologyModel load_technology(const std::filesystem::path& path);

/// Parses technology text. `overrides` are `section.key=value` strings
/// (`device.<name>.<key>` / `variant.<name>.<key>` for named sections)
/// applied on top of the file before validation.
TechnologyModel parse_technology(
    std::string_view text, const std::string& source = "<tech>",
    const std::vector<std::string>& overrides = {});

/// Throws InvariantError naming the violated rule.
void validate(const TechnologyModel& tech);

/// Subthreshold drain current in A for the full device width:
///   I = i_off_ref * width * 10^((vgs - delta_vt) / ss_eff) * (1 - exp(-vds / vT))
/// with ss_eff scaled linearly from the 300 K reference to `temperature`.
double subthreshold_current(const TransistorModel& tx, double vgs, double vds,
                            double delta_vt, double temperature);

double subthreshold_current(const TechnologyModel& tech,
                            const TransistorModel& tx, double vgs, double vds,
                            double delta_vt = 0.0);

/// Returns the variant with `has_wwl_level_shifter = ls`. For SRAM the flag
/// is dropped; a message is written to `warning` when one was requested.
BitcellVariant bitcell_lookup(const TechnologyModel& tech, VariantName name,
                              bool ls, std::string* warning = nullptr);

std::string_view to_string(VariantName name);
std::string_view to_string(DeviceKind kind);
VariantName parse_variant_name(std::string_view text);  // SiSiGC or sisi-gc
std::string_view cli_name(VariantName name);            // sisi-gc
std::string_view display_name(VariantName name);        // Si-Si GCRAM

inline constexpr VariantName kAllVariants[] = {
    VariantName::OSSiGC, VariantName::SiSiGC, VariantName::SRAM6T};

}  // namespace gcmc::tech
