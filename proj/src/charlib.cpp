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
#include "gcmc/charlib.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "gcmc/error.hpp"
#include "json.hpp"

namespace gcmc::charlib {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFemto = 1e-15;
constexpr double kElmoreDriver = 0.69;
constexpr double kElmoreWire = 0.38;
constexpr double kStageEpsilon = 1e-9;
constexpr double kSramWriteDerate = 0.5;
constexpr double kActivity = 1.0;
constexpr int kStepsPerDecade = 2048;
constexpr int kCurrentSamples = 64;
constexpr double kStartFraction = 1e-3;
constexpr double kHorizonFactor = 4.0;
constexpr int kBisectIterations = 80;
constexpr double kBisectTolerance = 1e-9;
// Gate loads in units of one minimum device: sense amp, write driver,
// one decoder stage.
constexpr double kSenseAmpUnits = 4.0;
constexpr double kWriteDriverUnits = 4.0;
constexpr double kDecoderUnitsPerBit = 4.0;

struct Geometry {
  MacroConfig c;
  tech::BitcellVariant v;
  double rows;
  double cols;
  double pitch;
};

Geometry geometry(const MacroConfig& config, const tech::TechnologyModel& tech) {
  Geometry g{resolve(config), {}, 0, 0, 0};
  g.v = tech::bitcell_lookup(tech, g.c.variant, g.c.ls);
  g.rows = g.c.rows();
  g.cols = g.c.cols();
  g.pitch = g.v.cell_pitch();
  return g;
}

double unit_gate_cap(const tech::TransistorModel& tx) { return tx.c_gate * tx.width; }

// Wordline across `n` cells, each loading `c_cell` fF.
double wordline_elmore(double n, double pitch, double c_cell,
                       const tech::TechnologyModel& tech) {
  const double length = n * pitch;
  const double r_wire = tech.wire_r * length;
  const double c_wire = tech.wire_c * length * kFemto;
  const double c_total = c_wire + n * c_cell * kFemto;
  const double r_drv = tech.vdd / tech.timing.driver_i_on;
  return kElmoreDriver * r_drv * c_total + kElmoreWire * r_wire * c_wire;
}

double bitline_cap(const Geometry& g, const tech::TechnologyModel& tech) {
  return g.rows * (g.v.c_bl_cell + tech.wire_c * g.pitch) * kFemto;
}

double wordline_cell_load(const Geometry& g, const tech::TransistorModel& tx) {
  return unit_gate_cap(tx) * (g.v.is_gc() ? 1.0 : 2.0);
}

double decoder_delay(const Geometry& g, const tech::TechnologyModel& tech) {
  return tech.fo4_seconds() *
         (tech.timing.decoder_base_fo4 + tech.timing.decoder_fo4_per_bit * std::log2(g.rows));
}

void add_select_terms(DelayBreakdown& d, const Geometry& g, const tech::TechnologyModel& tech) {
  if (g.c.column_mux > 1) d.column_mux = tech.fo4_seconds() * std::log2(g.c.column_mux);
  if (g.c.num_banks > 1) d.bank_select = tech.fo4_seconds() * std::log2(g.c.num_banks);
}

double alpha_drive(const tech::TransistorModel& tx, double overdrive, double full_overdrive,
                   double alpha, const char* what) {
  if (overdrive <= 0.0)
    throw InvariantError("drive-overdrive",
                         fmt::format("{} has no gate overdrive on device '{}'", what, tx.name));
  return tx.i_on * tx.width * std::pow(overdrive / full_overdrive, alpha);
}

double written_level(const tech::BitcellVariant& v, const tech::TechnologyModel& tech) {
  return v.has_wwl_level_shifter ? tech.vdd : tech.vdd - v.write_tx.vt;
}

double rk4_step(double v, double h, const auto& f) {
  const double k1 = f(v);
  const double k2 = f(v + 0.5 * h * k1);
  const double k3 = f(v + 0.5 * h * k2);
  const double k4 = f(v + h * k3);
  return v + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

std::string lib_num(double v) { return fmt::format("{:.6g}", v); }

}  // namespace

DelayBreakdown read_delay_breakdown(const MacroConfig& config, const tech::TechnologyModel& tech) {
  const Geometry g = geometry(config, tech);
  const auto& rd = g.v.read_tx;
  DelayBreakdown d;
  d.decoder = decoder_delay(g, tech);
  d.wordline = wordline_elmore(g.cols, g.pitch, wordline_cell_load(g, rd), tech);
  double i_read = 0.0;
  if (g.v.is_gc()) {
    // The read device conducts with the stored level on its gate, so a
    // degraded "1" weakens the drive.
    const double v_sn = written_level(g.v, tech);
    i_read = alpha_drive(rd, v_sn - rd.vt, tech.vdd - rd.vt, tech.timing.alpha, "read path");
  } else {
    i_read = rd.i_on * rd.width * tech.timing.sram_read_stack;
  }
  d.bitline = bitline_cap(g, tech) * tech.sense_margin / i_read;
  d.sense = tech.fo4_seconds() * g.v.sense_amp_fo4;
  add_select_terms(d, g, tech);
  return d;
}

DelayBreakdown write_delay_breakdown(const MacroConfig& config,
                                     const tech::TechnologyModel& tech) {
  const Geometry g = geometry(config, tech);
  const auto& wr = g.v.write_tx;
  DelayBreakdown d;
  d.decoder = decoder_delay(g, tech);
  d.wordline = wordline_elmore(g.cols, g.pitch, wordline_cell_load(g, wr), tech);
  if (g.v.is_gc()) {
    const bool ls = g.v.has_wwl_level_shifter;
    const double target = written_level(g.v, tech);
    const double v_gate = ls ? tech.vdd_boost : tech.vdd;
    // Source-follower charging: average overdrive over the SN swing.
    const double i_write = alpha_drive(wr, v_gate - wr.vt - target / 2.0, tech.vdd - wr.vt,
                                       tech.timing.alpha, "write path");
    d.bitline = g.v.c_sn * kFemto * target / i_write;
  } else {
    d.bitline = bitline_cap(g, tech) * tech.vdd /
                    (tech.timing.driver_i_on * kSramWriteDerate) +
                tech.timing.sram_flip_fo4 * tech.fo4_seconds();
  }
  add_select_terms(d, g, tech);
  return d;
}

double read_delay(const MacroConfig& config, const tech::TechnologyModel& tech) {
  return read_delay_breakdown(config, tech).total();
}

double write_delay(const MacroConfig& config, const tech::TechnologyModel& tech) {
  return write_delay_breakdown(config, tech).total();
}

int stages_for(double delay, const tech::TechnologyModel& tech) {
  return std::max(1, static_cast<int>(std::ceil(delay / tech.fo4_seconds() - kStageEpsilon)));
}

double quantized_frequency(int stages, const tech::TechnologyModel& tech) {
  return 1.0 / ((stages + tech.timing.guard_stages) * tech.fo4_seconds());
}

FrequencyResult max_frequency(const MacroConfig& config, const tech::TechnologyModel& tech) {
  FrequencyResult f;
  f.read_stages = stages_for(read_delay(config, tech), tech);
  f.write_stages = stages_for(write_delay(config, tech), tech);
  f.f_read_max = quantized_frequency(f.read_stages, tech);
  f.f_write_max = quantized_frequency(f.write_stages, tech);
  f.delay_chain_stages = std::max(f.read_stages, f.write_stages);
  return f;
}

double effective_bandwidth(const MacroConfig& config, const tech::TechnologyModel& tech,
                           const CharReport& report) {
  const double wz = config.word_size;
  if (config.is_gc()) return wz * (report.f_read_max + report.f_write_max);
  return wz * report.f_op * tech.timing.sram_port_duty;
}

double leakage_power(const MacroConfig& config, const tech::TechnologyModel& tech) {
  const Geometry g = geometry(config, tech);
  const double periphery =
      floorplan::periphery_area(g.c, tech).total() * tech.periphery.leakage_density;
  const double cells = static_cast<double>(g.c.word_size) * g.c.num_words;
  if (g.v.is_gc()) {
    // No rail-to-rail path in the cell; only a stored "1" (half the cells on
    // average) leaks through the write device into the held-low WBL.
    const double v = written_level(g.v, tech);
    const double i = tech::subthreshold_current(tech, g.v.write_tx, -tech.kappa * v, v);
    return periphery + cells * tech.vdd * 0.5 * i;
  }
  const double i_cell = 2.0 * tech::subthreshold_current(tech, g.v.read_tx, 0.0, tech.vdd) +
                        tech::subthreshold_current(tech, g.v.write_tx, 0.0, tech.vdd);
  return periphery + cells * tech.vdd * i_cell;
}

double dynamic_energy(const MacroConfig& config, const tech::TechnologyModel& tech) {
  const Geometry g = geometry(config, tech);
  const double unit = unit_gate_cap(g.v.read_tx) * kFemto;
  const double wire = tech.wire_c * g.cols * g.pitch * kFemto;
  const double c_bl = bitline_cap(g, tech) * (g.v.is_gc() ? 1.0 : 2.0);
  const double c_dec = kDecoderUnitsPerBit * std::log2(g.rows) * unit;
  const double c_read = wire + g.cols * wordline_cell_load(g, g.v.read_tx) * kFemto +
                        g.cols * c_bl + g.c.word_size * kSenseAmpUnits * unit + c_dec;
  const double c_write = wire + g.cols * wordline_cell_load(g, g.v.write_tx) * kFemto +
                         g.cols * c_bl + g.c.word_size * kWriteDriverUnits * unit + c_dec;
  const double v2 = tech.vdd * tech.vdd;
  return 0.5 * kActivity * (c_read + c_write) * v2;
}

RetentionTrace retention_solve(const tech::BitcellVariant& v, const tech::TechnologyModel& tech,
                               double delta_vt) {
  if (!v.is_gc())
    throw WrongVariantError(fmt::format("retention is undefined for {} (static cell)",
                                        tech::cli_name(v.name)));
  if (!(delta_vt >= 0.0) || !std::isfinite(delta_vt))
    throw InvalidConfigError(fmt::format("delta_vt must be >= 0 V, got {}", delta_vt));

  RetentionTrace tr;
  tr.written_level = written_level(v, tech);
  tr.failure_level = tr.written_level - tech.retention_margin;
  const double c = v.c_sn * kFemto;
  const double margin = tech.retention_margin;
  auto current = [&](double volts) {
    if (volts <= 0.0) return 0.0;
    return tech::subthreshold_current(v.write_tx, -tech.kappa * volts, volts, delta_vt,
                                      tech.temperature);
  };
  auto slope = [&](double volts) { return -current(volts) / c; };

  double i_max = 0.0, i_min = kInf;
  for (int k = 0; k <= kCurrentSamples; ++k) {
    const double volts = tr.failure_level + margin * k / kCurrentSamples;
    const double i = current(volts);
    i_max = std::max(i_max, i);
    i_min = std::min(i_min, i);
  }
  tr.time_s.push_back(0.0);
  tr.voltage_v.push_back(tr.written_level);
  if (!(i_min > 0.0) || tr.failure_level <= 0.0) {
    tr.failure_time = kInf;
    tr.converged = false;
    return tr;
  }

  const double t_start = kStartFraction * c * margin / i_max;
  const double horizon = kHorizonFactor * c * margin / i_min;
  const double growth = std::pow(10.0, 1.0 / kStepsPerDecade) - 1.0;
  double t = 0.0, volts = tr.written_level, h = t_start;
  while (t < horizon) {
    const double next = rk4_step(volts, h, slope);
    if (next <= tr.failure_level) {
      double lo = 0.0, hi = h;
      for (int it = 0; it < kBisectIterations && hi - lo > kBisectTolerance * (t + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (rk4_step(volts, mid, slope) <= tr.failure_level) hi = mid;
        else lo = mid;
      }
      tr.failure_time = t + 0.5 * (lo + hi);
      tr.time_s.push_back(tr.failure_time);
      tr.voltage_v.push_back(rk4_step(volts, 0.5 * (lo + hi), slope));
      return tr;
    }
    t += h;
    volts = next;
    tr.time_s.push_back(t);
    tr.voltage_v.push_back(volts);
    h = t * growth;
  }
  tr.failure_time = kInf;
  tr.converged = false;
  return tr;
}

RetentionTrace retention_solve(const MacroConfig& config, const tech::TechnologyModel& tech,
                               double delta_vt) {
  const MacroConfig c = resolve(config);
  if (!c.is_gc())
    throw WrongVariantError("retention is undefined for sram6t (static cell)");
  return retention_solve(tech::bitcell_lookup(tech, c.variant, c.ls), tech, delta_vt);
}

CharReport characterize(const MacroConfig& config, const tech::TechnologyModel& tech,
                        double delta_vt) {
  CharReport r;
  r.config = resolve(config);
  r.delta_vt = delta_vt;
  r.read_delay = read_delay(r.config, tech);
  r.write_delay = write_delay(r.config, tech);
  const auto f = max_frequency(r.config, tech);
  r.f_read_max = f.f_read_max;
  r.f_write_max = f.f_write_max;
  r.f_op = std::min(f.f_read_max, f.f_write_max);
  r.read_stages = f.read_stages;
  r.write_stages = f.write_stages;
  r.delay_chain_stages = f.delay_chain_stages;
  r.bandwidth_eff = effective_bandwidth(r.config, tech, r);
  r.p_leak = leakage_power(r.config, tech);
  r.e_access = dynamic_energy(r.config, tech);
  r.t_retention = r.config.is_gc() ? retention_solve(r.config, tech, delta_vt).failure_time : kInf;
  r.area = floorplan::bank_area(r.config, tech);
  return r;
}

std::string emit_liberty_summary(const CharReport& report, const MacroConfig& config,
                                 const tech::TechnologyModel& tech) {
  const MacroConfig c = resolve(config);
  const std::string cell = top_name(c);
  const int abits = address_bits(c);
  const double unit = unit_gate_cap(tech::bitcell_lookup(tech, c.variant, c.ls).read_tx);
  const double c_in = 2.0 * unit;
  const double c_clk = (2.0 * c.word_size + 2.0) * unit;

  std::string o;
  o += fmt::format("library ({}_lib) {{\n", cell);
  o += "  delay_model : table_lookup ;\n";
  o += "  time_unit : \"1ns\" ;\n";
  o += "  voltage_unit : \"1V\" ;\n";
  o += "  current_unit : \"1mA\" ;\n";
  o += "  leakage_power_unit : \"1nW\" ;\n";
  o += "  capacitive_load_unit (1, ff) ;\n";
  o += fmt::format("  nom_voltage : {} ;\n", lib_num(tech.vdd));
  o += fmt::format("  nom_temperature : {} ;\n", lib_num(tech.temperature - 273.15));
  o += "  define (retention_time, cell, float) ;\n";
  auto bus_type = [&](const char* name, int width) {
    o += fmt::format("  type ({}) {{\n", name);
    o += "    base_type : array ;\n    data_type : bit ;\n";
    o += fmt::format("    bit_width : {} ;\n    bit_from : {} ;\n    bit_to : 0 ;\n",
                     width, width - 1);
    o += "    downto : true ;\n  }\n";
  };
  bus_type("addr_bus", abits);
  bus_type("data_bus", c.word_size);
  o += fmt::format("  cell ({}) {{\n", cell);
  o += "    memory () {\n      type : ram ;\n";
  o += fmt::format("      address_width : {} ;\n      word_width : {} ;\n    }}\n", abits,
                   c.word_size);
  o += fmt::format("    area : {} ;\n", lib_num(report.area.total_area));
  o += fmt::format("    cell_leakage_power : {} ;\n", lib_num(report.p_leak * 1e9));
  if (c.is_gc()) o += fmt::format("    retention_time : {} ;\n", lib_num(report.t_retention));
  o += "    pin (clk) {\n      direction : input ;\n      clock : true ;\n";
  o += fmt::format("      capacitance : {} ;\n", lib_num(c_clk));
  o += fmt::format("      min_period : {} ;\n    }}\n", lib_num(1e9 / report.f_op));
  auto pin = [&](const char* name) {
    o += fmt::format("    pin ({}) {{\n      direction : input ;\n", name);
    o += fmt::format("      capacitance : {} ;\n    }}\n", lib_num(c_in));
  };
  auto bus = [&](const char* name, const char* type, const char* dir) {
    o += fmt::format("    bus ({}) {{\n      bus_type : {} ;\n      direction : {} ;\n", name,
                     type, dir);
    if (std::string_view(dir) == "input")
      o += fmt::format("      capacitance : {} ;\n", lib_num(c_in));
    o += "    }\n";
  };
  pin("we");
  pin("re");
  if (c.is_gc()) {
    bus("addr_w", "addr_bus", "input");
    bus("addr_r", "addr_bus", "input");
  } else {
    bus("addr", "addr_bus", "input");
  }
  bus("din", "data_bus", "input");
  bus("dout", "data_bus", "output");
  if (c.is_gc()) pin("vref");
  o += "  }\n}\n";
  return o;
}

std::string report_json(const CharReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["config"] = {{"key", config_key(r.config)},
                 {"variant", std::string(tech::cli_name(r.config.variant))},
                 {"word_size", r.config.word_size},
                 {"num_words", r.config.num_words},
                 {"num_banks", r.config.num_banks},
                 {"column_mux", r.config.column_mux},
                 {"ls", r.config.ls}};
  j["read_delay_s"] = r.read_delay;
  j["write_delay_s"] = r.write_delay;
  j["f_read_max_hz"] = r.f_read_max;
  j["f_write_max_hz"] = r.f_write_max;
  j["f_op_hz"] = r.f_op;
  j["bandwidth_eff_bps"] = r.bandwidth_eff;
  j["p_leak_w"] = r.p_leak;
  j["e_access_j"] = r.e_access;
  j["t_retention_s"] = std::isfinite(r.t_retention) ? ordered_json(r.t_retention)
                                                    : ordered_json(nullptr);
  j["delta_vt_v"] = r.delta_vt;
  j["read_stages"] = r.read_stages;
  j["write_stages"] = r.write_stages;
  j["delay_chain_stages"] = r.delay_chain_stages;
  ordered_json area;
  area["array_area_um2"] = r.area.array_area;
  area["periphery_area_um2"] = r.area.periphery_area;
  area["ring_area_um2"] = r.area.ring_area;
  area["total_area_um2"] = r.area.total_area;
  area["bbox_um"] = {{"width", r.area.width}, {"height", r.area.height}};
  j["area"] = area;
  return j.dump(2) + "\n";
}

}  // namespace gcmc::charlib
