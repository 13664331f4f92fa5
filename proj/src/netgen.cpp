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
#include "gcmc/netgen.hpp"

#include <fmt/format.h>

#include <set>

#include "gcmc/charlib.hpp"
#include "gcmc/error.hpp"

namespace gcmc::netgen {

namespace {

using netlist::Instance;
using netlist::Netlist;
using netlist::PortDir;
using netlist::Primitive;
using netlist::Subckt;

constexpr double kLength = 0.04;  // um
constexpr double kNmosWidth = 0.2;
constexpr double kPmosWidth = 0.4;

std::string bit(const std::string& bus, int i) { return fmt::format("{}[{}]", bus, i); }

std::vector<std::string> bus(const std::string& name, int width, int from = 0) {
  std::vector<std::string> v;
  for (int i = 0; i < width; ++i) v.push_back(bit(name, from + i));
  return v;
}

void append(std::vector<std::string>& to, const std::vector<std::string>& more) {
  to.insert(to.end(), more.begin(), more.end());
}

class Builder {
 public:
  Builder(const MacroConfig& c, const tech::TechnologyModel& t, int delay_stages)
      : c_(c), t_(t), stages_(delay_stages) {
    for (const auto& d : t.devices) {
      if (d.kind == tech::DeviceKind::SiNMOS && nmos_.empty()) nmos_ = d.name;
      if (d.kind == tech::DeviceKind::SiPMOS && pmos_.empty()) pmos_ = d.name;
    }
    if (nmos_.empty() || pmos_.empty())
      throw InvariantError("logic-devices",
                           "technology needs a SiNMOS and a SiPMOS device for periphery logic");
  }

  Netlist build() {
    n_.top = top_name(c_);
    if (c_.is_gc()) gc_top();
    else sram_top();
    return std::move(n_);
  }

 private:
  // A subcircuit under construction; committed with `done`.
  struct Def {
    Subckt s;
    void port(const std::string& name, PortDir dir) { s.ports.push_back({name, dir}); }
    void ports(const std::vector<std::string>& names, PortDir dir) {
      for (const auto& p : names) port(p, dir);
    }
    void mos(const std::string& name, const std::string& d, const std::string& g,
             const std::string& src, const std::string& b, const std::string& model,
             double w) {
      s.devices.push_back({'M', name, {d, g, src, b}, model, w, kLength, 0.0});
    }
    void cap(const std::string& name, const std::string& a, const std::string& b,
             double ff) {
      s.devices.push_back({'C', name, {a, b}, "", 0.0, 0.0, ff});
    }
    void inst(const std::string& name, const std::string& subckt,
              std::vector<std::string> nets) {
      s.instances.push_back({name, subckt, std::move(nets)});
    }
  };

  bool begin(const std::string& name, Def& def) {
    if (defined_.count(name)) return false;
    def.s.name = name;
    return true;
  }

  const std::string& done(Def& def) {
    defined_.insert(def.s.name);
    n_.subckts.push_back(std::move(def.s));
    return n_.subckts.back().name;
  }

  void supplies(Def& d) {
    d.port("vdd", PortDir::Power);
    d.port("gnd", PortDir::Ground);
  }

  std::string inv() {
    Def d;
    if (!begin("inv", d)) return "inv";
    d.port("a", PortDir::Input);
    d.port("y", PortDir::Output);
    supplies(d);
    d.mos("Mp", "y", "a", "vdd", "vdd", pmos_, kPmosWidth);
    d.mos("Mn", "y", "a", "gnd", "gnd", nmos_, kNmosWidth);
    return done(d);
  }

  std::string nand(int k) {
    Def d;
    const std::string name = fmt::format("nand{}", k);
    if (!begin(name, d)) return name;
    d.ports(bus("a", k), PortDir::Input);
    d.port("y", PortDir::Output);
    supplies(d);
    for (int i = 0; i < k; ++i)
      d.mos(fmt::format("Mp{}", i), "y", bit("a", i), "vdd", "vdd", pmos_, kPmosWidth);
    for (int i = 0; i < k; ++i) {
      const std::string drain = i == 0 ? "y" : fmt::format("s{}", i);
      const std::string source = i == k - 1 ? "gnd" : fmt::format("s{}", i + 1);
      d.mos(fmt::format("Mn{}", i), drain, bit("a", i), source, "gnd", nmos_, kNmosWidth * k);
    }
    return done(d);
  }

  std::string and_gate(int k) {
    const std::string nd = nand(k), iv = inv();
    Def d;
    const std::string name = fmt::format("and{}", k);
    if (!begin(name, d)) return name;
    d.ports(bus("a", k), PortDir::Input);
    d.port("y", PortDir::Output);
    supplies(d);
    auto nets = bus("a", k);
    append(nets, {"yb", "vdd", "gnd"});
    d.inst("Xnand", nd, nets);
    d.inst("Xinv", iv, {"yb", "y", "vdd", "gnd"});
    return done(d);
  }

  /// `bits` address inputs plus an enable, 2^bits one-hot outputs.
  std::string decoder(int bits) {
    const std::string iv = inv(), gate = and_gate(bits + 1);
    Def d;
    const std::string name = fmt::format("row_decoder_{}", bits);
    if (!begin(name, d)) return name;
    const int lines = 1 << bits;
    d.ports(bus("a", bits), PortDir::Input);
    d.port("en", PortDir::Input);
    d.ports(bus("y", lines), PortDir::Output);
    supplies(d);
    for (int i = 0; i < bits; ++i)
      d.inst(fmt::format("Xinv{}", i), iv, {bit("a", i), bit("ab", i), "vdd", "gnd"});
    for (int r = 0; r < lines; ++r) {
      std::vector<std::string> nets;
      for (int i = 0; i < bits; ++i) nets.push_back(bit((r >> i) & 1 ? "a" : "ab", i));
      append(nets, {"en", bit("y", r), "vdd", "gnd"});
      d.inst(fmt::format("Xand{}", r), gate, nets);
    }
    return done(d);
  }

  std::string buffer(const std::string& name) {
    const std::string iv = inv();
    Def d;
    if (!begin(name, d)) return name;
    d.port("in", PortDir::Input);
    d.port("out", PortDir::Output);
    supplies(d);
    d.inst("Xi0", iv, {"in", "mid", "vdd", "gnd"});
    d.inst("Xi1", iv, {"mid", "out", "vdd", "gnd"});
    return done(d);
  }

  std::string level_shifter() {
    const std::string iv = inv();
    Def d;
    if (!begin(kLevelShifter, d)) return kLevelShifter;
    d.port("in", PortDir::Input);
    d.port("out", PortDir::Output);
    d.port("vdd", PortDir::Power);
    d.port("vdd_boost", PortDir::Power);
    d.port("gnd", PortDir::Ground);
    d.inst("Xinv", iv, {"in", "inb", "vdd", "gnd"});
    d.mos("Mn1", "outb", "in", "gnd", "gnd", nmos_, kNmosWidth);
    d.mos("Mn2", "out", "inb", "gnd", "gnd", nmos_, kNmosWidth);
    d.mos("Mp1", "outb", "out", "vdd_boost", "vdd_boost", pmos_, kPmosWidth);
    d.mos("Mp2", "out", "outb", "vdd_boost", "vdd_boost", pmos_, kPmosWidth);
    return done(d);
  }

  std::string delay_chain(int stages) {
    const std::string stage = buffer("delay_stage");
    Def d;
    const std::string name = fmt::format("delay_chain_{}", stages);
    if (!begin(name, d)) return name;
    d.port("in", PortDir::Input);
    d.port("out", PortDir::Output);
    supplies(d);
    for (int i = 0; i < stages; ++i) {
      const std::string from = i == 0 ? "in" : bit("n", i);
      const std::string to = i == stages - 1 ? "out" : bit("n", i + 1);
      d.inst(fmt::format("Xs{}", i), stage, {from, to, "vdd", "gnd"});
    }
    return done(d);
  }

  std::string dff() {
    const std::string iv = inv();
    Def d;
    if (!begin(kDff, d)) return kDff;
    d.port("d", PortDir::Input);
    d.port("clk", PortDir::Input);
    d.port("q", PortDir::Output);
    supplies(d);
    d.inst("Xclk", iv, {"clk", "clkb", "vdd", "gnd"});
    // Master latch, transparent while clk is low.
    d.mos("Mn1", "m1", "clkb", "d", "gnd", nmos_, kNmosWidth);
    d.mos("Mp1", "m1", "clk", "d", "vdd", pmos_, kPmosWidth);
    d.inst("Xm1", iv, {"m1", "m2", "vdd", "gnd"});
    d.inst("Xm2", iv, {"m2", "m3", "vdd", "gnd"});
    d.mos("Mn2", "m1", "clk", "m3", "gnd", nmos_, kNmosWidth);
    d.mos("Mp2", "m1", "clkb", "m3", "vdd", pmos_, kPmosWidth);
    // Slave latch.
    d.mos("Mn3", "s1", "clk", "m2", "gnd", nmos_, kNmosWidth);
    d.mos("Mp3", "s1", "clkb", "m2", "vdd", pmos_, kPmosWidth);
    d.inst("Xs1", iv, {"s1", "qb", "vdd", "gnd"});
    d.inst("Xq", iv, {"qb", "q", "vdd", "gnd"});
    d.inst("Xs2", iv, {"qb", "s3", "vdd", "gnd"});
    d.mos("Mn4", "s1", "clkb", "s3", "gnd", nmos_, kNmosWidth);
    d.mos("Mp4", "s1", "clk", "s3", "vdd", pmos_, kPmosWidth);
    return done(d);
  }

  std::string data_dff() {
    const std::string ff = dff();
    Def d;
    const int wz = c_.word_size;
    const std::string name = fmt::format("data_dff_{}", wz);
    if (!begin(name, d)) return name;
    d.port("clk", PortDir::Input);
    d.ports(bus("d", wz), PortDir::Input);
    d.ports(bus("q", wz), PortDir::Output);
    supplies(d);
    for (int j = 0; j < wz; ++j)
      d.inst(fmt::format("Xff{}", j), ff, {bit("d", j), "clk", bit("q", j), "vdd", "gnd"});
    return done(d);
  }

  // Latch-type sense amplifier; `ref` is vref (single-ended) or br.
  std::string sense_amp(const char* name, const char* in, const char* ref) {
    const std::string iv = inv();
    Def d;
    if (!begin(name, d)) return name;
    d.port(in, PortDir::Input);
    d.port(ref, PortDir::Input);
    d.port("en", PortDir::Input);
    d.port("out", PortDir::Output);
    supplies(d);
    d.mos("Mn_in", "ob", in, "tail", "gnd", nmos_, kNmosWidth);
    d.mos("Mn_ref", "o", ref, "tail", "gnd", nmos_, kNmosWidth);
    d.mos("Mn_tail", "tail", "en", "gnd", "gnd", nmos_, 2 * kNmosWidth);
    d.mos("Mp1", "ob", "o", "vdd", "vdd", pmos_, kPmosWidth);
    d.mos("Mp2", "o", "ob", "vdd", "vdd", pmos_, kPmosWidth);
    d.inst("Xout", iv, {"ob", "out", "vdd", "gnd"});
    return done(d);
  }

  // Write path column mux: one shared input to M bitlines.
  std::string write_mux() {
    Def d;
    const int m = c_.column_mux;
    const std::string name = fmt::format("colmux_{}", m);
    if (!begin(name, d)) return name;
    d.port("in", PortDir::Input);
    d.ports(bus("sel", m), PortDir::Input);
    d.ports(bus("out", m), PortDir::Output);
    d.port("gnd", PortDir::Ground);
    for (int k = 0; k < m; ++k)
      d.mos(fmt::format("Mp{}", k), bit("out", k), bit("sel", k), "in", "gnd", nmos_,
            kNmosWidth);
    return done(d);
  }

  // Pass-gate selector from `ways` inputs to one output; used for the read
  // column mux and the bank output mux.
  std::string read_mux(int ways) {
    Def d;
    const std::string name = fmt::format("rcolmux_{}", ways);
    if (!begin(name, d)) return name;
    d.ports(bus("b", ways), PortDir::InOut);
    d.ports(bus("sel", ways), PortDir::Input);
    d.port("out", PortDir::Output);
    d.port("gnd", PortDir::Ground);
    for (int k = 0; k < ways; ++k)
      d.mos(fmt::format("Mp{}", k), "out", bit("sel", k), bit("b", k), "gnd", nmos_,
            kNmosWidth);
    return done(d);
  }

  // ---- GC blocks ----

  std::string gc_cell() {
    const char* name = bitcell_subckt(c_.variant);
    Def d;
    if (!begin(name, d)) return name;
    const auto v = tech::bitcell_lookup(t_, c_.variant, c_.ls);
    d.port("wwl", PortDir::Input);
    d.port("wbl", PortDir::Input);
    d.port("rwl", PortDir::Input);
    d.port("rbl", PortDir::Output);
    supplies(d);
    d.mos("Mw", "wbl", "wwl", "sn", "gnd", v.write_tx.name, v.write_tx.width);
    d.mos("Mr", "rbl", "sn", "rwl", "vdd", v.read_tx.name, v.read_tx.width);
    d.cap("Csn", "sn", "gnd", v.c_sn);
    return done(d);
  }

  std::string gc_array() {
    const std::string cell = gc_cell();
    Def d;
    const int rows = c_.rows(), cols = c_.cols();
    const std::string name = fmt::format("{}_array_{}x{}", cell, rows, cols);
    if (!begin(name, d)) return name;
    d.ports(bus("wwl", rows), PortDir::Input);
    d.ports(bus("rwl", rows), PortDir::Input);
    d.ports(bus("wbl", cols), PortDir::Input);
    d.ports(bus("rbl", cols), PortDir::Output);
    supplies(d);
    for (int r = 0; r < rows; ++r)
      for (int k = 0; k < cols; ++k)
        d.inst(fmt::format("Xc_{}_{}", r, k), cell,
               {bit("wwl", r), bit("wbl", k), bit("rwl", r), bit("rbl", k), "vdd", "gnd"});
    return done(d);
  }

  std::string write_port_address() {
    const int rb = row_bits(c_), rows = c_.rows();
    const std::string dec = decoder(rb), drv = buffer(kWwlDriver);
    const std::string ls = c_.ls ? level_shifter() : "";
    Def d;
    const std::string name = fmt::format("write_port_address_{}{}", rows, c_.ls ? "_ls" : "");
    if (!begin(name, d)) return name;
    d.ports(bus("addr", rb), PortDir::Input);
    d.port("en", PortDir::Input);
    d.ports(bus("wwl", rows), PortDir::Output);
    d.port("vdd", PortDir::Power);
    if (c_.ls) d.port("vdd_boost", PortDir::Power);
    d.port("gnd", PortDir::Ground);
    auto nets = bus("addr", rb);
    nets.push_back("en");
    append(nets, bus("dec", rows));
    append(nets, {"vdd", "gnd"});
    d.inst("Xdec", dec, nets);
    for (int r = 0; r < rows; ++r) {
      if (c_.ls) {
        d.inst(fmt::format("Xls{}", r), ls,
               {bit("dec", r), bit("lsout", r), "vdd", "vdd_boost", "gnd"});
        d.inst(fmt::format("Xdrv{}", r), drv,
               {bit("lsout", r), bit("wwl", r), "vdd_boost", "gnd"});
      } else {
        d.inst(fmt::format("Xdrv{}", r), drv, {bit("dec", r), bit("wwl", r), "vdd", "gnd"});
      }
    }
    return done(d);
  }

  // Shared shape of the read-port (GC) and single-port (SRAM) row paths.
  std::string row_address(const std::string& prefix, const char* driver, const char* line) {
    const int rb = row_bits(c_), rows = c_.rows();
    const std::string dec = decoder(rb), drv = buffer(driver);
    Def d;
    const std::string name = fmt::format("{}_{}", prefix, rows);
    if (!begin(name, d)) return name;
    d.ports(bus("addr", rb), PortDir::Input);
    d.port("en", PortDir::Input);
    d.ports(bus(line, rows), PortDir::Output);
    supplies(d);
    auto nets = bus("addr", rb);
    nets.push_back("en");
    append(nets, bus("dec", rows));
    append(nets, {"vdd", "gnd"});
    d.inst("Xdec", dec, nets);
    for (int r = 0; r < rows; ++r)
      d.inst(fmt::format("Xdrv{}", r), drv, {bit("dec", r), bit(line, r), "vdd", "gnd"});
    return done(d);
  }

  std::string write_driver_se() {
    const std::string gate = and_gate(2);
    Def d;
    if (!begin("write_driver_se", d)) return "write_driver_se";
    d.port("in", PortDir::Input);
    d.port("en", PortDir::Input);
    d.port("out", PortDir::Output);
    supplies(d);
    d.inst("Xand", gate, {"in", "en", "out", "vdd", "gnd"});
    return done(d);
  }

  std::string predischarge() {
    Def d;
    if (!begin(kPredischarge, d)) return kPredischarge;
    d.port("en", PortDir::Input);
    d.port("bl", PortDir::InOut);
    d.port("gnd", PortDir::Ground);
    d.mos("Mpd", "bl", "en", "gnd", "gnd", nmos_, kNmosWidth);
    return done(d);
  }

  std::string write_port_data() {
    const int wz = c_.word_size, m = c_.column_mux, k = column_bits(c_), cols = c_.cols();
    const std::string wd = write_driver_se();
    const std::string mux = m > 1 ? write_mux() : "";
    const std::string dec = m > 1 ? decoder(k) : "";
    Def d;
    const std::string name = fmt::format("write_port_data_{}_m{}", wz, m);
    if (!begin(name, d)) return name;
    d.ports(bus("din", wz), PortDir::Input);
    d.port("en", PortDir::Input);
    d.ports(bus("caddr", k), PortDir::Input);
    d.ports(bus("wbl", cols), PortDir::Output);
    supplies(d);
    if (m > 1) {
      auto nets = bus("caddr", k);
      nets.push_back("en");
      append(nets, bus("csel", m));
      append(nets, {"vdd", "gnd"});
      d.inst("Xcdec", dec, nets);
    }
    for (int j = 0; j < wz; ++j) {
      const std::string out = m > 1 ? bit("wd", j) : bit("wbl", j);
      d.inst(fmt::format("Xwd{}", j), wd, {bit("din", j), "en", out, "vdd", "gnd"});
      if (m > 1) {
        std::vector<std::string> nets{out};
        append(nets, bus("csel", m));
        append(nets, bus("wbl", m, j * m));
        nets.push_back("gnd");
        d.inst(fmt::format("Xmux{}", j), mux, nets);
      }
    }
    return done(d);
  }

  std::string read_port_data() {
    const int wz = c_.word_size, m = c_.column_mux, k = column_bits(c_), cols = c_.cols();
    const std::string pd = predischarge();
    const std::string sa = sense_amp(kSenseAmpSe, "in", "vref");
    const std::string mux = m > 1 ? read_mux(m) : "";
    const std::string dec = m > 1 ? decoder(k) : "";
    Def d;
    const std::string name = fmt::format("read_port_data_{}_m{}", wz, m);
    if (!begin(name, d)) return name;
    d.ports(bus("rbl", cols), PortDir::InOut);
    d.port("pd_en", PortDir::Input);
    d.port("sa_en", PortDir::Input);
    d.ports(bus("caddr", k), PortDir::Input);
    d.port("vref", PortDir::Input);
    d.ports(bus("dout", wz), PortDir::Output);
    supplies(d);
    for (int col = 0; col < cols; ++col)
      d.inst(fmt::format("Xpd{}", col), pd, {"pd_en", bit("rbl", col), "gnd"});
    if (m > 1) {
      // Column select is static for the access, so the decoder is always on.
      auto nets = bus("caddr", k);
      nets.push_back("vdd");
      append(nets, bus("csel", m));
      append(nets, {"vdd", "gnd"});
      d.inst("Xcdec", dec, nets);
    }
    for (int j = 0; j < wz; ++j) {
      std::string in = bit("rbl", j);
      if (m > 1) {
        in = bit("sbl", j);
        auto nets = bus("rbl", m, j * m);
        append(nets, bus("csel", m));
        append(nets, {in, "gnd"});
        d.inst(fmt::format("Xmux{}", j), mux, nets);
      }
      d.inst(fmt::format("Xsa{}", j), sa, {in, "vref", "sa_en", bit("dout", j), "vdd", "gnd"});
    }
    return done(d);
  }

  std::string write_ctrl() {
    const std::string gate = and_gate(2), iv = inv(), chain = delay_chain(stages_);
    Def d;
    const std::string name = fmt::format("write_ctrl_{}", stages_);
    if (!begin(name, d)) return name;
    d.port("clk", PortDir::Input);
    d.port("we", PortDir::Input);
    d.port("wl_en", PortDir::Output);
    d.port("wd_en", PortDir::Output);
    supplies(d);
    d.inst("Xgate", gate, {"clk", "we", "g", "vdd", "gnd"});
    d.inst("Xdelay", chain, {"g", "gd", "vdd", "gnd"});
    d.inst("Xwl0", iv, {"gd", "gdb", "vdd", "gnd"});
    d.inst("Xwl1", iv, {"gdb", "wl_en", "vdd", "gnd"});
    d.inst("Xwd0", iv, {"g", "gb", "vdd", "gnd"});
    d.inst("Xwd1", iv, {"gb", "wd_en", "vdd", "gnd"});
    return done(d);
  }

  std::string read_ctrl() {
    const std::string gate = and_gate(2), iv = inv(), chain = delay_chain(stages_);
    Def d;
    const std::string name = fmt::format("read_ctrl_{}", stages_);
    if (!begin(name, d)) return name;
    d.port("clk", PortDir::Input);
    d.port("re", PortDir::Input);
    d.port("rwl_en", PortDir::Output);
    d.port("pd_en", PortDir::Output);
    d.port("sa_en", PortDir::Output);
    supplies(d);
    d.inst("Xgate", gate, {"clk", "re", "g", "vdd", "gnd"});
    d.inst("Xrwl0", iv, {"g", "gb", "vdd", "gnd"});
    d.inst("Xrwl1", iv, {"gb", "rwl_en", "vdd", "gnd"});
    // RBLs are held low between reads: active-high predischarge enable.
    d.inst("Xpd", iv, {"g", "pd_en", "vdd", "gnd"});
    d.inst("Xdelay", chain, {"g", "gd", "vdd", "gnd"});
    d.inst("Xsa0", iv, {"gd", "gdb", "vdd", "gnd"});
    d.inst("Xsa1", iv, {"gdb", "sa_en", "vdd", "gnd"});
    return done(d);
  }

  std::string gc_bank() {
    const std::string wpa = write_port_address();
    const std::string rpa = row_address("read_port_address", kRwlDriver, "rwl");
    const std::string arr = gc_array();
    const std::string wpd = write_port_data();
    const std::string rpd = read_port_data();
    const int rb = row_bits(c_), k = column_bits(c_), wz = c_.word_size, rows = c_.rows(),
              cols = c_.cols();
    Def d;
    const char* cell = c_.variant == tech::VariantName::OSSiGC ? "ossi" : "sisi";
    const std::string name =
        fmt::format("gc_bank_{}_{}x{}_m{}{}", cell, wz, rows, c_.column_mux, c_.ls ? "_ls" : "");
    if (!begin(name, d)) return name;
    d.ports(bus("waddr", rb), PortDir::Input);
    d.ports(bus("raddr", rb), PortDir::Input);
    d.ports(bus("wcaddr", k), PortDir::Input);
    d.ports(bus("rcaddr", k), PortDir::Input);
    for (const char* p : {"wl_en", "wd_en", "rwl_en", "pd_en", "sa_en"}) d.port(p, PortDir::Input);
    d.ports(bus("din", wz), PortDir::Input);
    d.port("vref", PortDir::Input);
    d.ports(bus("dout", wz), PortDir::Output);
    d.port("vdd", PortDir::Power);
    if (c_.ls) d.port("vdd_boost", PortDir::Power);
    d.port("gnd", PortDir::Ground);

    auto nets = bus("waddr", rb);
    nets.push_back("wl_en");
    append(nets, bus("wwl", rows));
    nets.push_back("vdd");
    if (c_.ls) nets.push_back("vdd_boost");
    nets.push_back("gnd");
    d.inst("Xwaddr", wpa, nets);

    nets = bus("raddr", rb);
    nets.push_back("rwl_en");
    append(nets, bus("rwl", rows));
    append(nets, {"vdd", "gnd"});
    d.inst("Xraddr", rpa, nets);

    nets = bus("wwl", rows);
    append(nets, bus("rwl", rows));
    append(nets, bus("wbl", cols));
    append(nets, bus("rbl", cols));
    append(nets, {"vdd", "gnd"});
    d.inst("Xarray", arr, nets);

    nets = bus("din", wz);
    nets.push_back("wd_en");
    append(nets, bus("wcaddr", k));
    append(nets, bus("wbl", cols));
    append(nets, {"vdd", "gnd"});
    d.inst("Xwdata", wpd, nets);

    nets = bus("rbl", cols);
    append(nets, {"pd_en", "sa_en"});
    append(nets, bus("rcaddr", k));
    nets.push_back("vref");
    append(nets, bus("dout", wz));
    append(nets, {"vdd", "gnd"});
    d.inst("Xrdata", rpd, nets);
    return done(d);
  }

  void gc_top() {
    const std::string bank = gc_bank();
    const std::string ffs = data_dff();
    const std::string wctrl = write_ctrl(), rctrl = read_ctrl();
    const int k = column_bits(c_), rb = row_bits(c_), bb = bank_bits(c_), wz = c_.word_size;
    const int banks = c_.num_banks;
    const std::string bdec = banks > 1 ? decoder(bb) : "";
    const std::string bmux = banks > 1 ? read_mux(banks) : "";
    Def d;
    begin(n_.top, d);
    for (const auto& p : expected_top_ports(c_)) d.port(p.name, p.dir);

    auto nets = std::vector<std::string>{"clk"};
    append(nets, bus("din", wz));
    append(nets, bus("din_q", wz));
    append(nets, {"vdd", "gnd"});
    d.inst("Xdin_ff", ffs, nets);
    d.inst("Xwctrl", wctrl, {"clk", "we", "wl_en", "wd_en", "vdd", "gnd"});
    d.inst("Xrctrl", rctrl, {"clk", "re", "rwl_en", "pd_en", "sa_en", "vdd", "gnd"});
    if (banks > 1) {
      nets = bus("addr_w", bb, k + rb);
      nets.push_back("wl_en");
      append(nets, bus("bank_wl_en", banks));
      append(nets, {"vdd", "gnd"});
      d.inst("Xwbank_dec", bdec, nets);
      nets = bus("addr_r", bb, k + rb);
      nets.push_back("rwl_en");
      append(nets, bus("bank_rwl_en", banks));
      append(nets, {"vdd", "gnd"});
      d.inst("Xrbank_dec", bdec, nets);
    }
    for (int b = 0; b < banks; ++b) {
      nets = bus("addr_w", rb, k);
      append(nets, bus("addr_r", rb, k));
      append(nets, bus("addr_w", k));
      append(nets, bus("addr_r", k));
      nets.push_back(banks > 1 ? bit("bank_wl_en", b) : "wl_en");
      nets.push_back("wd_en");
      nets.push_back(banks > 1 ? bit("bank_rwl_en", b) : "rwl_en");
      append(nets, {"pd_en", "sa_en"});
      append(nets, bus("din_q", wz));
      nets.push_back("vref");
      append(nets, banks > 1 ? bus(fmt::format("bank{}_dout", b), wz) : bus("dout", wz));
      nets.push_back("vdd");
      if (c_.ls) nets.push_back("vdd_boost");
      nets.push_back("gnd");
      d.inst(fmt::format("Xbank{}", b), bank, nets);
    }
    if (banks > 1) {
      for (int j = 0; j < wz; ++j) {
        nets.clear();
        for (int b = 0; b < banks; ++b) nets.push_back(bit(fmt::format("bank{}_dout", b), j));
        append(nets, bus("bank_rwl_en", banks));
        append(nets, {bit("dout", j), "gnd"});
        d.inst(fmt::format("Xbank_mux{}", j), bmux, nets);
      }
    }
    done(d);
  }

  // ---- SRAM blocks ----

  std::string sram_cell() {
    Def d;
    if (!begin(kSramCell, d)) return kSramCell;
    const auto v = tech::bitcell_lookup(t_, c_.variant, false);
    d.port("wl", PortDir::Input);
    d.port("bl", PortDir::InOut);
    d.port("br", PortDir::InOut);
    supplies(d);
    d.mos("Mpu1", "q", "qb", "vdd", "vdd", pmos_, v.read_tx.width);
    d.mos("Mpd1", "q", "qb", "gnd", "gnd", v.read_tx.name, v.read_tx.width);
    d.mos("Mpu2", "qb", "q", "vdd", "vdd", pmos_, v.read_tx.width);
    d.mos("Mpd2", "qb", "q", "gnd", "gnd", v.read_tx.name, v.read_tx.width);
    d.mos("Max1", "bl", "wl", "q", "gnd", v.write_tx.name, v.write_tx.width);
    d.mos("Max2", "br", "wl", "qb", "gnd", v.write_tx.name, v.write_tx.width);
    return done(d);
  }

  std::string sram_array() {
    const std::string cell = sram_cell();
    Def d;
    const int rows = c_.rows(), cols = c_.cols();
    const std::string name = fmt::format("sram_array_{}x{}", rows, cols);
    if (!begin(name, d)) return name;
    d.ports(bus("wl", rows), PortDir::Input);
    d.ports(bus("bl", cols), PortDir::InOut);
    d.ports(bus("br", cols), PortDir::InOut);
    supplies(d);
    for (int r = 0; r < rows; ++r)
      for (int k = 0; k < cols; ++k)
        d.inst(fmt::format("Xc_{}_{}", r, k), cell,
               {bit("wl", r), bit("bl", k), bit("br", k), "vdd", "gnd"});
    return done(d);
  }

  std::string precharge() {
    Def d;
    if (!begin(kPrecharge, d)) return kPrecharge;
    d.port("en_b", PortDir::Input);
    d.port("bl", PortDir::InOut);
    d.port("br", PortDir::InOut);
    d.port("vdd", PortDir::Power);
    d.mos("Mbl", "bl", "en_b", "vdd", "vdd", pmos_, kPmosWidth);
    d.mos("Mbr", "br", "en_b", "vdd", "vdd", pmos_, kPmosWidth);
    d.mos("Meq", "bl", "en_b", "br", "vdd", pmos_, kPmosWidth);
    return done(d);
  }

  std::string write_driver_diff() {
    const std::string gate = and_gate(2), iv = inv();
    Def d;
    if (!begin("write_driver_diff", d)) return "write_driver_diff";
    d.port("in", PortDir::Input);
    d.port("en", PortDir::Input);
    d.port("bl", PortDir::Output);
    d.port("br", PortDir::Output);
    supplies(d);
    d.inst("Xinv", iv, {"in", "inb", "vdd", "gnd"});
    d.inst("Xbl", gate, {"in", "en", "bl", "vdd", "gnd"});
    d.inst("Xbr", gate, {"inb", "en", "br", "vdd", "gnd"});
    return done(d);
  }

  std::string colmux_diff() {
    Def d;
    const int m = c_.column_mux;
    const std::string name = fmt::format("colmux_diff_{}", m);
    if (!begin(name, d)) return name;
    d.ports(bus("bl", m), PortDir::InOut);
    d.ports(bus("br", m), PortDir::InOut);
    d.ports(bus("sel", m), PortDir::Input);
    d.port("bo", PortDir::InOut);
    d.port("ro", PortDir::InOut);
    d.port("gnd", PortDir::Ground);
    for (int k = 0; k < m; ++k) {
      d.mos(fmt::format("Mbl{}", k), "bo", bit("sel", k), bit("bl", k), "gnd", nmos_,
            kNmosWidth);
      d.mos(fmt::format("Mbr{}", k), "ro", bit("sel", k), bit("br", k), "gnd", nmos_,
            kNmosWidth);
    }
    return done(d);
  }

  std::string sram_port_data() {
    const int wz = c_.word_size, m = c_.column_mux, k = column_bits(c_), cols = c_.cols();
    const std::string pc = precharge(), wd = write_driver_diff();
    const std::string sa = sense_amp(kSenseAmpDiff, "bl", "br");
    const std::string mux = m > 1 ? colmux_diff() : "";
    const std::string dec = m > 1 ? decoder(k) : "";
    Def d;
    const std::string name = fmt::format("port_data_{}_m{}", wz, m);
    if (!begin(name, d)) return name;
    d.ports(bus("bl", cols), PortDir::InOut);
    d.ports(bus("br", cols), PortDir::InOut);
    for (const char* p : {"p_en_b", "w_en", "s_en"}) d.port(p, PortDir::Input);
    d.ports(bus("caddr", k), PortDir::Input);
    d.ports(bus("din", wz), PortDir::Input);
    d.ports(bus("dout", wz), PortDir::Output);
    supplies(d);
    for (int col = 0; col < cols; ++col)
      d.inst(fmt::format("Xpc{}", col), pc, {"p_en_b", bit("bl", col), bit("br", col), "vdd"});
    if (m > 1) {
      auto nets = bus("caddr", k);
      nets.push_back("vdd");
      append(nets, bus("csel", m));
      append(nets, {"vdd", "gnd"});
      d.inst("Xcdec", dec, nets);
    }
    for (int j = 0; j < wz; ++j) {
      std::string bl = bit("bl", j), br = bit("br", j);
      if (m > 1) {
        bl = bit("dbl", j);
        br = bit("dbr", j);
        auto nets = bus("bl", m, j * m);
        append(nets, bus("br", m, j * m));
        append(nets, bus("csel", m));
        append(nets, {bl, br, "gnd"});
        d.inst(fmt::format("Xmux{}", j), mux, nets);
      }
      d.inst(fmt::format("Xwd{}", j), wd, {bit("din", j), "w_en", bl, br, "vdd", "gnd"});
      d.inst(fmt::format("Xsa{}", j), sa, {bl, br, "s_en", bit("dout", j), "vdd", "gnd"});
    }
    return done(d);
  }

  std::string sram_ctrl() {
    const std::string g2 = and_gate(2), nd = nand(2), iv = inv(), chain = delay_chain(stages_);
    Def d;
    const std::string name = fmt::format("ctrl_{}", stages_);
    if (!begin(name, d)) return name;
    for (const char* p : {"clk", "we", "re"}) d.port(p, PortDir::Input);
    for (const char* p : {"wl_en", "w_en", "p_en_b", "s_en"}) d.port(p, PortDir::Output);
    supplies(d);
    d.inst("Xweb", iv, {"we", "web", "vdd", "gnd"});
    d.inst("Xreb", iv, {"re", "reb", "vdd", "gnd"});
    d.inst("Xany", nd, {"web", "reb", "acc", "vdd", "gnd"});
    d.inst("Xgate", g2, {"clk", "acc", "g", "vdd", "gnd"});
    d.inst("Xpc0", iv, {"g", "gb", "vdd", "gnd"});
    d.inst("Xpc1", iv, {"gb", "p_en_b", "vdd", "gnd"});
    d.inst("Xwl0", iv, {"g", "lb", "vdd", "gnd"});
    d.inst("Xwl1", iv, {"lb", "wl_en", "vdd", "gnd"});
    d.inst("Xwen", g2, {"g", "we", "w_en", "vdd", "gnd"});
    d.inst("Xrd", g2, {"g", "re", "gr", "vdd", "gnd"});
    d.inst("Xdelay", chain, {"gr", "gd", "vdd", "gnd"});
    d.inst("Xs0", iv, {"gd", "gdb", "vdd", "gnd"});
    d.inst("Xs1", iv, {"gdb", "s_en", "vdd", "gnd"});
    return done(d);
  }

  std::string sram_bank() {
    const std::string pa = row_address("port_address", kWlDriver, "wl");
    const std::string arr = sram_array();
    const std::string pd = sram_port_data();
    const int rb = row_bits(c_), k = column_bits(c_), wz = c_.word_size, rows = c_.rows(),
              cols = c_.cols();
    Def d;
    const std::string name =
        fmt::format("sram_bank_{}x{}_m{}", wz, rows, c_.column_mux);
    if (!begin(name, d)) return name;
    d.ports(bus("raddr", rb), PortDir::Input);
    d.ports(bus("caddr", k), PortDir::Input);
    for (const char* p : {"wl_en", "w_en", "p_en_b", "s_en"}) d.port(p, PortDir::Input);
    d.ports(bus("din", wz), PortDir::Input);
    d.ports(bus("dout", wz), PortDir::Output);
    supplies(d);
    auto nets = bus("raddr", rb);
    nets.push_back("wl_en");
    append(nets, bus("wl", rows));
    append(nets, {"vdd", "gnd"});
    d.inst("Xaddr", pa, nets);
    nets = bus("wl", rows);
    append(nets, bus("bl", cols));
    append(nets, bus("br", cols));
    append(nets, {"vdd", "gnd"});
    d.inst("Xarray", arr, nets);
    nets = bus("bl", cols);
    append(nets, bus("br", cols));
    append(nets, {"p_en_b", "w_en", "s_en"});
    append(nets, bus("caddr", k));
    append(nets, bus("din", wz));
    append(nets, bus("dout", wz));
    append(nets, {"vdd", "gnd"});
    d.inst("Xdata", pd, nets);
    return done(d);
  }

  void sram_top() {
    const std::string bank = sram_bank();
    const std::string ffs = data_dff();
    const std::string ctrl = sram_ctrl();
    const int k = column_bits(c_), rb = row_bits(c_), bb = bank_bits(c_), wz = c_.word_size;
    const int banks = c_.num_banks;
    const std::string bdec = banks > 1 ? decoder(bb) : "";
    const std::string bmux = banks > 1 ? read_mux(banks) : "";
    Def d;
    begin(n_.top, d);
    for (const auto& p : expected_top_ports(c_)) d.port(p.name, p.dir);

    auto nets = std::vector<std::string>{"clk"};
    append(nets, bus("din", wz));
    append(nets, bus("din_q", wz));
    append(nets, {"vdd", "gnd"});
    d.inst("Xdin_ff", ffs, nets);
    d.inst("Xctrl", ctrl, {"clk", "we", "re", "wl_en", "w_en", "p_en_b", "s_en", "vdd", "gnd"});
    if (banks > 1) {
      nets = bus("addr", bb, k + rb);
      nets.push_back("wl_en");
      append(nets, bus("bank_wl_en", banks));
      append(nets, {"vdd", "gnd"});
      d.inst("Xbank_dec", bdec, nets);
    }
    for (int b = 0; b < banks; ++b) {
      nets = bus("addr", rb, k);
      append(nets, bus("addr", k));
      nets.push_back(banks > 1 ? bit("bank_wl_en", b) : "wl_en");
      append(nets, {"w_en", "p_en_b", "s_en"});
      append(nets, bus("din_q", wz));
      append(nets, banks > 1 ? bus(fmt::format("bank{}_dout", b), wz) : bus("dout", wz));
      append(nets, {"vdd", "gnd"});
      d.inst(fmt::format("Xbank{}", b), bank, nets);
    }
    if (banks > 1) {
      for (int j = 0; j < wz; ++j) {
        nets.clear();
        for (int b = 0; b < banks; ++b) nets.push_back(bit(fmt::format("bank{}_dout", b), j));
        append(nets, bus("bank_wl_en", banks));
        append(nets, {bit("dout", j), "gnd"});
        d.inst(fmt::format("Xbank_mux{}", j), bmux, nets);
      }
    }
    done(d);
  }

  const MacroConfig& c_;
  const tech::TechnologyModel& t_;
  int stages_;
  std::string nmos_, pmos_;
  Netlist n_;
  std::set<std::string> defined_;
};

}  // namespace

const char* bitcell_subckt(tech::VariantName variant) {
  switch (variant) {
    case tech::VariantName::SiSiGC: return kSiSiCell;
    case tech::VariantName::OSSiGC: return kOsSiCell;
    case tech::VariantName::SRAM6T: return kSramCell;
  }
  return "?";
}

netlist::Netlist generate_macro(const MacroConfig& config, const tech::TechnologyModel& tech,
                                std::optional<int> delay_stages) {
  const MacroConfig c = resolve(config);
  tech::bitcell_lookup(tech, c.variant, c.ls);  // unknown-variant check
  const int stages =
      delay_stages ? *delay_stages : charlib::max_frequency(c, tech).delay_chain_stages;
  if (stages < 1)
    throw InvalidConfigError(fmt::format("delay chain needs at least one stage, got {}", stages));
  return Builder(c, tech, stages).build();
}

std::string emit_verilog_model(const MacroConfig& config) {
  const MacroConfig c = resolve(config);
  const int a = address_bits(c), wz = c.word_size;
  std::string o;
  o += fmt::format("// Behavioral model of {} ({} bits x {} words, {} bank(s), mux {}).\n",
                   config_key(c), wz, c.num_words, c.num_banks, c.column_mux);
  if (c.is_gc())
    o += "// Independent read and write ports; a same-cycle read of the address being\n"
         "// written returns the new data.\n";
  o += "`timescale 1ns/1ps\n\n";
  o += fmt::format("module {} (\n", top_name(c));
  o += "`ifdef USE_POWER_PINS\n";
  o += "  inout vdd,\n";
  if (c.is_gc() && c.ls) o += "  inout vdd_boost,\n";
  o += "  inout gnd,\n";
  o += "`endif\n";
  o += "  input clk,\n  input we,\n  input re,\n";
  if (c.is_gc()) {
    o += fmt::format("  input [{}:0] addr_w,\n", a - 1);
    o += fmt::format("  input [{}:0] addr_r,\n", a - 1);
  } else {
    o += fmt::format("  input [{}:0] addr,\n", a - 1);
  }
  o += fmt::format("  input [{}:0] din,\n", wz - 1);
  o += fmt::format("  output reg [{}:0] dout{}\n", wz - 1, c.is_gc() ? "," : "");
  if (c.is_gc()) o += "  input vref\n";
  o += ");\n\n";
  o += fmt::format("  reg [{}:0] mem [0:{}];\n\n", wz - 1, c.num_words - 1);
  o += "  always @(posedge clk) begin\n";
  if (c.is_gc()) {
    o += "    if (we) mem[addr_w] <= din;\n";
    o += "    if (re) dout <= (we && addr_w == addr_r) ? din : mem[addr_r];\n";
  } else {
    o += "    if (we) begin\n";
    o += "      mem[addr] <= din;\n";
    o += "      if (re) dout <= din;\n";
    o += "    end else if (re) begin\n";
    o += "      dout <= mem[addr];\n";
    o += "    end\n";
  }
  o += "  end\n\nendmodule\n";
  return o;
}

}  // namespace gcmc::netgen
