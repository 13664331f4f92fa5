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

#include <optional>
#include <string>

#include "gcmc/macro_config.hpp"
#include "gcmc/netlist.hpp"
#include "gcmc/technology.hpp"

namespace gcmc::netgen {

/// Subcircuit names used by the instance-count formulas.
inline constexpr const char* kSiSiCell = "gc_sisi_cell";
inline constexpr const char* kOsSiCell = "gc_ossi_cell";
inline constexpr const char* kSramCell = "sram6t_cell";
inline constexpr const char* kWwlDriver = "wwl_driver";
inline constexpr const char* kRwlDriver = "rwl_driver";
inline constexpr const char* kWlDriver = "wl_driver";
inline constexpr const char* kLevelShifter = "wwl_level_shifter";
inline constexpr const char* kSenseAmpSe = "sense_amp_se";
inline constexpr const char* kSenseAmpDiff = "sense_amp_diff";
inline constexpr const char* kPredischarge = "predischarge";
inline constexpr const char* kPrecharge = "precharge";
inline constexpr const char* kDff = "dff";

const char* bitcell_subckt(tech::VariantName variant);

/// Builds the hierarchical macro. The controller delay chain uses
/// `delay_stages` when given, otherwise the characterized stage count.
netlist::Netlist generate_macro(const MacroConfig& config, const tech::TechnologyModel& tech,
                                std::optional<int> delay_stages = std::nullopt);

/// Behavioral synchronous model. GC macros are dual-port with write-first
/// behavior on a same-address collision; SRAM shares one address port.
std::string emit_verilog_model(const MacroConfig& config);

}  // namespace gcmc::netgen
