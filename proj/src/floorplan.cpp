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
#include "gcmc/floorplan.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gcmc/error.hpp"
#include "json.hpp"

namespace gcmc::floorplan {

namespace {

constexpr double kMaxPinSize = 0.5;  // um
constexpr double kEdgeTolerance = 1e-3;

Side side_of(const netlist::Port& p) {
  const auto& n = p.name;
  if (n == "vdd" || n == "vdd_boost") return Side::Top;
  if (n == "gnd" || n == "vref") return Side::Bottom;
  if (n.rfind("din", 0) == 0 || n.rfind("dout", 0) == 0) return Side::Right;
  return Side::Left;
}

std::string direction_of(const netlist::Port& p) {
  switch (p.dir) {
    case netlist::PortDir::Input: return "INPUT";
    case netlist::PortDir::Output: return "OUTPUT";
    default: return "INOUT";
  }
}

std::string use_of(const netlist::Port& p) {
  if (p.dir == netlist::PortDir::Power) return "POWER";
  if (p.dir == netlist::PortDir::Ground) return "GROUND";
  if (p.name == "vref") return "ANALOG";
  return "SIGNAL";
}

std::string num(double v) { return fmt::format("{:.4f}", v); }

}  // namespace

std::string_view to_string(Side side) {
  switch (side) {
    case Side::Left: return "left";
    case Side::Right: return "right";
    case Side::Top: return "top";
    case Side::Bottom: return "bottom";
  }
  return "?";
}

double array_area(const MacroConfig& config, const tech::TechnologyModel& tech) {
  const MacroConfig c = resolve(config);
  return tech::bitcell_lookup(tech, c.variant, c.ls).cell_area *
         static_cast<double>(c.word_size) * c.num_words;
}

PeripherySplit periphery_area(const MacroConfig& config, const tech::TechnologyModel& tech) {
  const MacroConfig c = resolve(config);
  const auto& p = tech.periphery;
  const double rows = c.rows();
  const double paths = c.is_gc() ? 2.0 : 1.0;
  const double banks = c.num_banks;
  const double wz = c.word_size;

  PeripherySplit s;
  s.row_band = banks * paths *
               (p.decoder_area_per_row_bit * rows * std::log2(rows) +
                p.driver_area_per_row * rows);
  if (c.ls) s.row_band += banks * p.level_shifter_area_per_row * rows;

  const double column = c.is_gc() ? p.column_area_gc : p.column_area_sram;
  const double sense = c.is_gc() ? p.sense_amp_area_gc : p.sense_amp_area_sram;
  s.column_band = banks * (c.cols() * column + wz * (sense + p.write_driver_area)) +
                  wz * p.dff_area + paths * p.controller_area;
  if (c.num_banks > 1) s.column_band += banks * p.bank_select_area;
  return s;
}

AreaReport bank_area(const MacroConfig& config, const tech::TechnologyModel& tech) {
  const MacroConfig c = resolve(config);
  const auto v = tech::bitcell_lookup(tech, c.variant, c.ls);
  const double pitch = v.cell_pitch();
  const auto split = periphery_area(c, tech);

  AreaReport r;
  r.array_area = array_area(c, tech);
  r.periphery_area = split.total();

  // Banks sit side by side; each carries its row band on the left, and the
  // column band spans the array edge at the bottom.
  const double array_w = c.cols() * pitch;
  const double array_h = c.rows() * pitch;
  const double banks = c.num_banks;
  const double row_band_w = split.row_band / (banks * array_h);
  const double col_band_h = split.column_band / (banks * array_w);
  r.core_width = banks * (array_w + row_band_w);
  r.core_height = array_h + col_band_h;

  r.rings = c.ls ? 2 : 1;
  const double rw = tech.periphery.ring_width;
  r.ring_area = 2.0 * (r.core_width + r.core_height) * rw * r.rings;
  r.width = r.core_width + 2.0 * r.rings * rw;
  r.height = r.core_height + 2.0 * r.rings * rw;
  r.total_area = r.array_area + r.periphery_area + r.ring_area;
  return r;
}

double dual_port_sram_equivalent_area(const MacroConfig& config,
                                      const tech::TechnologyModel& tech) {
  if (config.is_gc())
    throw WrongVariantError("dual-port SRAM equivalent is defined for sram6t only, got " +
                            std::string(tech::cli_name(config.variant)));
  return 2.0 * bank_area(config, tech).total_area;
}

std::string emit_lef_abstract(const MacroConfig& config, const tech::TechnologyModel& tech,
                              const netlist::Netlist& netlist) {
  const MacroConfig c = resolve(config);
  const auto expected = expected_top_ports(c);
  const netlist::Subckt* top = netlist.find(netlist.top);
  if (!top || top->ports != expected)
    throw InvalidConfigError("netlist top ports disagree with config " + config_key(c) +
                             "; refusing to emit LEF");
  const AreaReport area = bank_area(c, tech);
  const double w = area.width, h = area.height;
  const std::string name = top_name(c);

  std::vector<const netlist::Port*> by_side[4];
  for (const auto& p : expected) by_side[static_cast<int>(side_of(p))].push_back(&p);

  std::string out;
  out += "VERSION 5.7 ;\nBUSBITCHARS \"[]\" ;\nDIVIDERCHAR \"/\" ;\n\n";
  out += "MACRO " + name + "\n";
  out += "  CLASS BLOCK ;\n";
  out += "  ORIGIN 0 0 ;\n";
  out += "  FOREIGN " + name + " 0 0 ;\n";
  out += fmt::format("  SIZE {} BY {} ;\n", num(w), num(h));
  out += "  SYMMETRY X Y ;\n";
  for (const auto& p : expected) {
    const Side side = side_of(p);
    const auto& group = by_side[static_cast<int>(side)];
    const std::size_t idx =
        std::find(group.begin(), group.end(), &p) - group.begin();
    const bool vertical = side == Side::Left || side == Side::Right;
    const double length = vertical ? h : w;
    const double spacing = length / static_cast<double>(group.size() + 1);
    const double center = spacing * static_cast<double>(idx + 1);
    const double s = std::min(kMaxPinSize, spacing / 2.0);
    double x1 = 0, y1 = 0, x2 = 0, y2 = 0;
    switch (side) {
      case Side::Left: x1 = 0; x2 = s; y1 = center - s / 2; y2 = center + s / 2; break;
      case Side::Right: x1 = w - s; x2 = w; y1 = center - s / 2; y2 = center + s / 2; break;
      case Side::Top: y1 = h - s; y2 = h; x1 = center - s / 2; x2 = center + s / 2; break;
      case Side::Bottom: y1 = 0; y2 = s; x1 = center - s / 2; x2 = center + s / 2; break;
    }
    out += "  PIN " + p.name + "\n";
    out += "    DIRECTION " + direction_of(p) + " ;\n";
    out += "    USE " + use_of(p) + " ;\n";
    out += "    PORT\n";
    out += "      LAYER met3 ;\n";
    out += fmt::format("        RECT {} {} {} {} ;\n", num(x1), num(y1), num(x2), num(y2));
    out += "    END\n";
    out += "  END " + p.name + "\n";
  }
  out += "  OBS\n    LAYER met1 ;\n";
  out += fmt::format("      RECT 0.0000 0.0000 {} {} ;\n", num(w), num(h));
  out += "  END\n";
  out += "END " + name + "\n\nEND LIBRARY\n";
  return out;
}

AbstractView parse_lef_abstract(std::string_view text, const std::string& source) {
  AbstractView v;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  Pin* pin = nullptr;
  bool in_obs = false;
  bool have_size = false;
  auto fail = [&](const std::string& msg) { throw ParseError(source, line_no, "", msg); };
  auto to_num = [&](const std::string& t) {
    try {
      std::size_t used = 0;
      double d = std::stod(t, &used);
      if (used != t.size()) fail("bad number '" + t + "'");
      return d;
    } catch (const std::logic_error&) {
      fail("bad number '" + t + "'");
    }
    return 0.0;
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::vector<std::string> t;
    for (std::string w; ls >> w;) t.push_back(w);
    if (t.empty()) continue;
    if (t[0] == "MACRO" && t.size() >= 2) {
      v.macro = t[1];
    } else if (t[0] == "SIZE") {
      if (t.size() < 4 || t[2] != "BY") fail("malformed SIZE");
      v.width = to_num(t[1]);
      v.height = to_num(t[3]);
      have_size = true;
    } else if (t[0] == "PIN" && t.size() >= 2) {
      v.pins.push_back({t[1], Side::Left, 0.0, "", ""});
      pin = &v.pins.back();
    } else if (t[0] == "DIRECTION" && pin && t.size() >= 2) {
      pin->direction = t[1];
    } else if (t[0] == "USE" && pin && t.size() >= 2) {
      pin->use = t[1];
    } else if (t[0] == "OBS") {
      in_obs = true;
    } else if (t[0] == "RECT") {
      if (t.size() < 5) fail("malformed RECT");
      const double x1 = to_num(t[1]), y1 = to_num(t[2]), x2 = to_num(t[3]),
                   y2 = to_num(t[4]);
      if (!have_size) fail("RECT before SIZE");
      if (in_obs) {
        v.full_obstruction = std::abs(x1) < kEdgeTolerance && std::abs(y1) < kEdgeTolerance &&
                             std::abs(x2 - v.width) < kEdgeTolerance &&
                             std::abs(y2 - v.height) < kEdgeTolerance;
      } else if (pin) {
        if (std::abs(x1) < kEdgeTolerance) {
          pin->side = Side::Left;
          pin->offset = (y1 + y2) / 2;
        } else if (std::abs(x2 - v.width) < kEdgeTolerance) {
          pin->side = Side::Right;
          pin->offset = (y1 + y2) / 2;
        } else if (std::abs(y1) < kEdgeTolerance) {
          pin->side = Side::Bottom;
          pin->offset = (x1 + x2) / 2;
        } else if (std::abs(y2 - v.height) < kEdgeTolerance) {
          pin->side = Side::Top;
          pin->offset = (x1 + x2) / 2;
        } else {
          fail("pin '" + pin->name + "' is not on the block edge");
        }
      }
    } else if (t[0] == "END" && t.size() >= 2 && pin && t[1] == pin->name) {
      pin = nullptr;
    } else if (t[0] == "END" && t.size() == 1 && in_obs) {
      in_obs = false;
    }
  }
  if (v.macro.empty()) throw ParseError(source, 0, "", "no MACRO found");
  if (!have_size) throw ParseError(source, 0, "", "MACRO has no SIZE");
  return v;
}

std::string area_report_json(const AreaReport& r) {
  nlohmann::ordered_json j;
  j["array_area_um2"] = r.array_area;
  j["periphery_area_um2"] = r.periphery_area;
  j["ring_area_um2"] = r.ring_area;
  j["total_area_um2"] = r.total_area;
  j["bbox_um"] = {{"width", r.width}, {"height", r.height}};
  j["core_um"] = {{"width", r.core_width}, {"height", r.core_height}};
  j["rings"] = r.rings;
  return j.dump(2) + "\n";
}

}  // namespace gcmc::floorplan
