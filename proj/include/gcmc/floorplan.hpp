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
#include <string_view>
#include <vector>

#include "gcmc/macro_config.hpp"
#include "gcmc/netlist.hpp"
#include "gcmc/technology.hpp"

namespace gcmc::floorplan {

/// Areas in um^2, lengths in um.
struct AreaReport {
  double array_area = 0.0;
  double periphery_area = 0.0;
  double ring_area = 0.0;
  double total_area = 0.0;
  double width = 0.0;  // bbox including rings
  double height = 0.0;
  double core_width = 0.0;
  double core_height = 0.0;
  int rings = 1;
};

enum class Side { Left, Right, Top, Bottom };

struct Pin {
  std::string name;
  Side side = Side::Left;
  double offset = 0.0;  // along the side, from the lower/left corner
  std::string direction;  // INPUT | OUTPUT | INOUT
  std::string use;        // SIGNAL | POWER | GROUND | ANALOG
};

struct AbstractView {
  std::string macro;
  double width = 0.0;
  double height = 0.0;
  std::vector<Pin> pins;
  bool full_obstruction = false;
};

double array_area(const MacroConfig& config, const tech::TechnologyModel& tech);

/// Periphery split into the row band (decoders, drivers, level shifters)
/// and everything else (column band).
struct PeripherySplit {
  double row_band = 0.0;
  double column_band = 0.0;
  double total() const { return row_band + column_band; }
};
PeripherySplit periphery_area(const MacroConfig& config, const tech::TechnologyModel& tech);

AreaReport bank_area(const MacroConfig& config, const tech::TechnologyModel& tech);

/// Throws WrongVariantError for GC configs.
double dual_port_sram_equivalent_area(const MacroConfig& config,
                                      const tech::TechnologyModel& tech);

/// Throws InvalidConfigError when the netlist top ports disagree with the
/// config.
std::string emit_lef_abstract(const MacroConfig& config, const tech::TechnologyModel& tech,
                              const netlist::Netlist& netlist);

AbstractView parse_lef_abstract(std::string_view text, const std::string& source = "<lef>");

std::string area_report_json(const AreaReport& report);

std::string_view to_string(Side side);

}  // namespace gcmc::floorplan
