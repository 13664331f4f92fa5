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
#include "gcmc/technology.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "gcmc/error.hpp"

namespace gcmc::tech {

namespace {

constexpr double kBoltzmann = 1.380649e-23;
constexpr double kElectronCharge = 1.602176634e-19;
constexpr double kSwingReferenceTemperature = 300.0;
constexpr double kOxideLeakageBound = 1e-18;
constexpr std::string_view kFormatTag = "gcmc-tech";
constexpr int kFormatVersion = 1;

struct Entry {
  std::string key;
  std::string value;
  int line = 0;
  bool used = false;
};

struct Section {
  std::string type;  // process | timing | periphery | device | variant
  std::string name;  // only for device / variant
  int line = 0;
  std::vector<Entry> entries;

  Entry* find(std::string_view key) {
    for (auto& e : entries)
      if (e.key == key) return &e;
    return nullptr;
  }
};

std::string_view trim(std::string_view s) {
  const auto* ws = " \t\r";
  auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<Section> split_document(std::string_view text,
                                    const std::string& source) {
  std::vector<Section> sections;
  bool have_header = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) {
      if (nl == text.size()) break;
      continue;
    }
    if (!have_header) {
      std::istringstream hs{std::string(line)};
      std::string tag;
      int version = 0;
      hs >> tag >> version;
      if (tag != kFormatTag)
        throw ParseError(source, line_no, "",
                         "expected header 'gcmc-tech <version>'");
      if (version != kFormatVersion)
        throw ParseError(source, line_no, "",
                         "unsupported format version " + std::to_string(version));
      have_header = true;
      continue;
    }
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ParseError(source, line_no, "", "unterminated section header");
      std::istringstream ss{std::string(line.substr(1, line.size() - 2))};
      Section s;
      ss >> s.type >> s.name;
      s.line = line_no;
      const bool named = s.type == "device" || s.type == "variant";
      if (s.type != "process" && s.type != "timing" && s.type != "periphery" &&
          !named)
        throw ParseError(source, line_no, "", "unknown section '" + s.type + "'");
      if (named && s.name.empty())
        throw ParseError(source, line_no, "", "section '" + s.type + "' needs a name");
      sections.push_back(std::move(s));
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos)
      throw ParseError(source, line_no, "", "expected 'key = value'");
    if (sections.empty())
      throw ParseError(source, line_no, std::string(trim(line.substr(0, eq))),
                       "entry outside of any section");
    Entry e{std::string(trim(line.substr(0, eq))),
            std::string(trim(line.substr(eq + 1))), line_no};
    if (e.key.empty() || e.value.empty())
      throw ParseError(source, line_no, e.key, "empty key or value");
    if (sections.back().find(e.key))
      throw ParseError(source, line_no, e.key, "duplicate key");
    sections.back().entries.push_back(std::move(e));
    if (nl == text.size()) break;
  }
  if (!have_header) throw ParseError(source, 0, "", "empty technology file");
  return sections;
}

void apply_override(std::vector<Section>& sections, const std::string& assignment) {
  auto eq = assignment.find('=');
  if (eq == std::string::npos)
    throw ParseError("--set", 0, assignment, "expected section.key=value");
  std::string path = std::string(trim(std::string_view(assignment).substr(0, eq)));
  std::string value = std::string(trim(std::string_view(assignment).substr(eq + 1)));
  std::vector<std::string> parts;
  std::stringstream ss(path);
  for (std::string p; std::getline(ss, p, '.');) parts.push_back(p);
  std::string type, name, key;
  if (parts.size() == 2) {
    type = parts[0];
    key = parts[1];
  } else if (parts.size() == 3) {
    type = parts[0];
    name = parts[1];
    key = parts[2];
  } else {
    throw ParseError("--set", 0, path, "expected section.key or section.name.key");
  }
  for (auto& s : sections) {
    if (s.type == type && s.name == name) {
      if (auto* e = s.find(key))
        e->value = value;
      else
        s.entries.push_back({key, value, 0});
      return;
    }
  }
  throw ParseError("--set", 0, path, "no such section in technology file");
}

class Reader {
 public:
  Reader(Section& s, const std::string& source) : s_(s), source_(source) {}

  double number(std::string_view key) {
    Entry& e = require(key);
    double v = 0.0;
    auto [ptr, ec] =
        std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
    if (ec != std::errc() || ptr != e.value.data() + e.value.size() ||
        !std::isfinite(v))
      throw ParseError(source_, e.line, e.key, "not a number: '" + e.value + "'");
    return v;
  }

  double number_or(std::string_view key, double fallback) {
    return s_.find(key) ? number(key) : fallback;
  }

  int integer(std::string_view key) {
    Entry& e = require(key);
    int v = 0;
    auto [ptr, ec] =
        std::from_chars(e.value.data(), e.value.data() + e.value.size(), v);
    if (ec != std::errc() || ptr != e.value.data() + e.value.size())
      throw ParseError(source_, e.line, e.key, "not an integer: '" + e.value + "'");
    return v;
  }

  std::string text(std::string_view key) { return require(key).value; }

  int line_of(std::string_view key) {
    auto* e = s_.find(key);
    return e ? e->line : s_.line;
  }

  void finish() {
    for (auto& e : s_.entries)
      if (!e.used)
        throw ParseError(source_, e.line, e.key,
                         "unknown key in [" + s_.type + "]");
  }

 private:
  Entry& require(std::string_view key) {
    Entry* e = s_.find(key);
    if (!e)
      throw ParseError(source_, s_.line, std::string(key),
                       "missing required key in [" + s_.type +
                           (s_.name.empty() ? "" : " " + s_.name) + "]");
    e->used = true;
    return *e;
  }

  Section& s_;
  const std::string& source_;
};

DeviceKind parse_kind(const std::string& v, const std::string& source, int line) {
  if (v == "SiNMOS") return DeviceKind::SiNMOS;
  if (v == "SiPMOS") return DeviceKind::SiPMOS;
  if (v == "OSNMOS") return DeviceKind::OSNMOS;
  throw ParseError(source, line, "kind", "unknown device kind '" + v + "'");
}

void check(bool ok, const char* rule, const std::string& message) {
  if (!ok) throw InvariantError(rule, std::string(rule) + ": " + message);
}

}  // namespace

double BitcellVariant::cell_pitch() const { return std::sqrt(cell_area); }

double TechnologyModel::thermal_voltage() const {
  return kBoltzmann * temperature / kElectronCharge;
}

const TransistorModel& TechnologyModel::device(std::string_view n) const {
  for (const auto& d : devices)
    if (d.name == n) return d;
  throw InvariantError("device-reference",
                       "unknown device '" + std::string(n) + "'");
}

const BitcellVariant* TechnologyModel::find_variant(VariantName n) const {
  for (const auto& v : variants)
    if (v.name == n) return &v;
  return nullptr;
}

std::string_view to_string(VariantName name) {
  switch (name) {
    case VariantName::SiSiGC: return "SiSiGC";
    case VariantName::OSSiGC: return "OSSiGC";
    case VariantName::SRAM6T: return "SRAM6T";
  }
  return "?";
}

std::string_view to_string(DeviceKind kind) {
  switch (kind) {
    case DeviceKind::SiNMOS: return "SiNMOS";
    case DeviceKind::SiPMOS: return "SiPMOS";
    case DeviceKind::OSNMOS: return "OSNMOS";
  }
  return "?";
}

std::string_view cli_name(VariantName name) {
  switch (name) {
    case VariantName::SiSiGC: return "sisi-gc";
    case VariantName::OSSiGC: return "ossi-gc";
    case VariantName::SRAM6T: return "sram6t";
  }
  return "?";
}

std::string_view display_name(VariantName name) {
  switch (name) {
    case VariantName::SiSiGC: return "Si-Si GCRAM";
    case VariantName::OSSiGC: return "OS-Si GCRAM";
    case VariantName::SRAM6T: return "SRAM";
  }
  return "?";
}

VariantName parse_variant_name(std::string_view text) {
  for (auto v : kAllVariants)
    if (text == to_string(v) || text == cli_name(v)) return v;
  throw UnknownVariantError("unknown bitcell variant '" + std::string(text) +
                            "' (expected sisi-gc, ossi-gc or sram6t)");
}

void validate(const TechnologyModel& t) {
  check(t.vdd > 0, "vdd-positive", "vdd must be > 0");
  check(t.vdd_boost >= t.vdd, "vdd-boost",
        "vdd_boost must be >= vdd for the WWL level shifter");
  check(t.temperature > 0, "temperature-positive", "temperature must be > 0 K");
  check(t.sense_margin > 0 && t.sense_margin < t.vdd, "sense-margin",
        "sense_margin must lie in (0, vdd)");
  check(t.retention_margin > 0 && t.retention_margin < t.vdd,
        "retention-margin", "retention_margin must lie in (0, vdd)");
  check(t.wire_r > 0 && t.wire_c > 0, "wire-positive",
        "wire_r and wire_c must be > 0");
  check(t.inverter_fo4_delay > 0, "fo4-positive", "fo4_delay must be > 0");
  check(t.kappa > 0, "kappa-positive", "kappa must be > 0");
  check(t.timing.alpha >= 1.0, "alpha-range", "alpha must be >= 1");
  check(t.timing.guard_stages >= 0, "guard-stages", "guard_stages must be >= 0");
  check(t.timing.sram_port_duty > 0 && t.timing.sram_port_duty < 1,
        "sram-port-duty", "sram_port_duty must lie in (0, 1)");
  check(t.timing.delta_vt_max >= 0, "delta-vt-max", "delta_vt_max must be >= 0");
  check(t.timing.driver_i_on > 0, "driver-current", "driver_i_on must be > 0");
  check(t.timing.sram_read_stack > 0 && t.timing.sram_read_stack <= 1,
        "sram-read-stack", "sram_read_stack must lie in (0, 1]");
  const auto& p = t.periphery;
  for (double v : {p.decoder_area_per_row_bit, p.driver_area_per_row,
                   p.level_shifter_area_per_row, p.column_area_gc,
                   p.column_area_sram, p.sense_amp_area_gc,
                   p.sense_amp_area_sram, p.write_driver_area, p.dff_area,
                   p.controller_area, p.bank_select_area, p.leakage_density})
    check(v >= 0, "periphery-nonnegative", "periphery constants must be >= 0");
  check(p.ring_width > 0, "ring-width", "ring_width must be > 0");

  for (const auto& d : t.devices) {
    const std::string who = "device '" + d.name + "'";
    check(d.ss > 0, "ss-positive", who + ": ss must be > 0");
    if (d.kind != DeviceKind::OSNMOS)
      check(d.ss >= 60.0, "ss-physical-limit",
            who + ": silicon subthreshold swing below 60 mV/decade");
    else
      check(d.i_off_ref <= kOxideLeakageBound, "os-leakage-bound",
            who + ": oxide-semiconductor off-current above 1e-18 A/um");
    check(d.i_off_ref > 0, "i-off-positive", who + ": i_off_ref must be > 0");
    check(d.i_on > d.i_off_ref, "on-off-ordering",
          who + ": i_on must exceed i_off_ref");
    check(d.width > 0 && d.c_gate > 0, "positive-geometry",
          who + ": width and c_gate must be > 0");
  }

  for (std::size_t i = 0; i < t.variants.size(); ++i) {
    const auto& v = t.variants[i];
    const std::string who = "variant '" + std::string(to_string(v.name)) + "'";
    for (std::size_t j = 0; j < i; ++j)
      check(t.variants[j].name != v.name, "variant-unique", who + " defined twice");
    check(v.cell_area > 0, "cell-area-positive", who + ": cell_area must be > 0");
    check(v.c_bl_cell > 0, "bitline-cap-positive", who + ": c_bl_cell must be > 0");
    check(v.sense_amp_fo4 > 0, "sense-amp-fo4", who + ": sense_amp_fo4 must be > 0");
    if (v.is_gc()) {
      check(v.write_tx.is_nmos(), "gc-write-nmos",
            who + ": write transistor must be an NMOS kind");
      check(v.read_tx.kind == DeviceKind::SiPMOS, "gc-read-pmos",
            who + ": read transistor must be SiPMOS");
      check(v.c_sn > 0, "c-sn-positive", who + ": c_sn must be > 0");
      check(t.vdd - v.write_tx.vt > v.read_tx.vt, "gc-sn-level",
            who + ": degraded storage level vdd - vt(write) must exceed vt(read)");
    }
  }
}

TechnologyModel parse_technology(std::string_view text, const std::string& source,
                                 const std::vector<std::string>& overrides) {
  auto sections = split_document(text, source);
  for (const auto& o : overrides) apply_override(sections, o);

  TechnologyModel t;
  bool seen_process = false, seen_timing = false, seen_periphery = false;
  std::vector<Section*> variant_sections;

  for (auto& s : sections) {
    Reader r(s, source);
    if (s.type == "process") {
      if (seen_process) throw ParseError(source, s.line, "", "duplicate [process]");
      seen_process = true;
      t.name = r.text("name");
      t.vdd = r.number("vdd");
      t.vdd_boost = r.number("vdd_boost");
      t.temperature = r.number("temperature");
      t.wire_r = r.number("wire_r");
      t.wire_c = r.number("wire_c");
      t.inverter_fo4_delay = r.number("fo4_delay");
      t.sense_margin = r.number("sense_margin");
      t.retention_margin = r.number("retention_margin");
      t.kappa = r.number_or("kappa", 1.0);
      r.finish();
    } else if (s.type == "timing") {
      if (seen_timing) throw ParseError(source, s.line, "", "duplicate [timing]");
      seen_timing = true;
      auto& m = t.timing;
      m.alpha = r.number("alpha");
      m.decoder_base_fo4 = r.number("decoder_base_fo4");
      m.decoder_fo4_per_bit = r.number("decoder_fo4_per_bit");
      m.driver_i_on = r.number("driver_i_on");
      m.guard_stages = r.integer("guard_stages");
      m.sram_port_duty = r.number("sram_port_duty");
      m.delta_vt_max = r.number("delta_vt_max");
      m.sram_read_stack = r.number("sram_read_stack");
      m.sram_flip_fo4 = r.number("sram_flip_fo4");
      r.finish();
    } else if (s.type == "periphery") {
      if (seen_periphery) throw ParseError(source, s.line, "", "duplicate [periphery]");
      seen_periphery = true;
      auto& p = t.periphery;
      p.decoder_area_per_row_bit = r.number("decoder_area_per_row_bit");
      p.driver_area_per_row = r.number("driver_area_per_row");
      p.level_shifter_area_per_row = r.number("level_shifter_area_per_row");
      p.column_area_gc = r.number("column_area_gc");
      p.column_area_sram = r.number("column_area_sram");
      p.sense_amp_area_gc = r.number("sense_amp_area_gc");
      p.sense_amp_area_sram = r.number("sense_amp_area_sram");
      p.write_driver_area = r.number("write_driver_area");
      p.dff_area = r.number("dff_area");
      p.controller_area = r.number("controller_area");
      p.bank_select_area = r.number("bank_select_area");
      p.ring_width = r.number("ring_width");
      p.leakage_density = r.number("leakage_density");
      r.finish();
    } else if (s.type == "device") {
      TransistorModel d;
      d.name = s.name;
      d.kind = parse_kind(r.text("kind"), source, r.line_of("kind"));
      d.vt = r.number("vt");
      d.ss = r.number("ss");
      d.i_off_ref = r.number("i_off_ref");
      d.i_on = r.number("i_on");
      d.width = r.number("width");
      d.c_gate = r.number("c_gate");
      r.finish();
      for (const auto& other : t.devices)
        if (other.name == d.name)
          throw ParseError(source, s.line, "", "duplicate device '" + d.name + "'");
      t.devices.push_back(std::move(d));
    } else {
      variant_sections.push_back(&s);
    }
  }
  if (!seen_process) throw ParseError(source, 0, "", "missing [process] section");
  if (!seen_timing) throw ParseError(source, 0, "", "missing [timing] section");
  if (!seen_periphery) throw ParseError(source, 0, "", "missing [periphery] section");

  // Variants resolve device names, so they are built after every device.
  for (Section* s : variant_sections) {
    Reader r(*s, source);
    BitcellVariant v;
    try {
      v.name = parse_variant_name(s->name);
    } catch (const UnknownVariantError& e) {
      throw ParseError(source, s->line, "", e.what());
    }
    v.ports = v.name == VariantName::SRAM6T ? PortStyle::SinglePortSRAM
                                            : PortStyle::DualPortGC;
    auto resolve = [&](std::string_view key) {
      std::string dev = r.text(key);
      for (const auto& d : t.devices)
        if (d.name == dev) return d;
      throw ParseError(source, r.line_of(key), std::string(key),
                       "unknown device '" + dev + "'");
    };
    v.write_tx = resolve("write_tx");
    v.read_tx = resolve("read_tx");
    v.cell_area = r.number("cell_area");
    v.c_sn = r.number_or("c_sn", 0.0);
    v.c_bl_cell = r.number("c_bl_cell");
    v.sense_amp_fo4 = r.number("sense_amp_fo4");
    r.finish();
    t.variants.push_back(std::move(v));
  }

  validate(t);
  return t;
}

TechnologyModel load_technology(const std::filesystem::path& path) {
  std::filesystem::path p = path;
  if (p.empty()) {
    const char* env = std::getenv("GCMC_TECH");
    if (!env || !*env)
      throw IoError("no technology file given (use --tech or set GCMC_TECH)");
    p = env;
  }
  std::ifstream in(p, std::ios::binary);
  if (!in) throw IoError("cannot open technology file '" + p.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_technology(buf.str(), p.string());
}

double subthreshold_current(const TransistorModel& tx, double vgs, double vds,
                            double delta_vt, double temperature) {
  if (vds <= 0.0) return 0.0;
  const double ss_volts = tx.ss * 1e-3 * temperature / kSwingReferenceTemperature;
  const double v_thermal = kBoltzmann * temperature / kElectronCharge;
  return tx.i_off_ref * tx.width * std::pow(10.0, (vgs - delta_vt) / ss_volts) *
         -std::expm1(-vds / v_thermal);
}

double subthreshold_current(const TechnologyModel& tech,
                            const TransistorModel& tx, double vgs, double vds,
                            double delta_vt) {
  return subthreshold_current(tx, vgs, vds, delta_vt, tech.temperature);
}

BitcellVariant bitcell_lookup(const TechnologyModel& tech, VariantName name,
                              bool ls, std::string* warning) {
  const BitcellVariant* base = tech.find_variant(name);
  if (!base)
    throw UnknownVariantError("technology '" + tech.name + "' defines no variant '" +
                              std::string(to_string(name)) + "'");
  BitcellVariant v = *base;
  if (v.is_gc()) {
    v.has_wwl_level_shifter = ls;
  } else {
    v.has_wwl_level_shifter = false;
    if (ls && warning)
      *warning = "level shifter option ignored for " + std::string(cli_name(name));
  }
  return v;
}

}  // namespace gcmc::tech
