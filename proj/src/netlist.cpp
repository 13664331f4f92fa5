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
#include "gcmc/netlist.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <functional>
#include <set>

#include "gcmc/error.hpp"

namespace gcmc::netlist {

namespace {

constexpr std::size_t kLineWidth = 100;

struct NetInfo {
  int connections = 0;
  bool port = false;
  bool output_port = false;
  bool driven = false;
  bool driven_inside = false;
  bool loaded = false;
  bool supply_power = false;
  bool supply_ground = false;
  bool pin_power = false;
  bool pin_ground = false;
};

std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

void check_subckt(const Netlist& n, const Subckt& s, std::vector<Violation>& out) {
  std::map<std::string, NetInfo> nets;
  auto add = [&](const std::string& name, const std::string& detail) {
    out.push_back({s.name, name, detail.substr(0, detail.find(':')),
                   detail.substr(detail.find(':') + 2)});
  };

  for (const auto& p : s.ports) {
    auto& i = nets[p.name];
    ++i.connections;
    i.port = true;
    switch (p.dir) {
      case PortDir::Output: i.output_port = true; break;
      case PortDir::Power: i.driven = i.supply_power = true; break;
      case PortDir::Ground: i.driven = i.supply_ground = true; break;
      default: i.driven = true; break;
    }
  }

  for (const auto& d : s.devices) {
    const std::size_t need = d.kind == 'M' ? 4 : 2;
    if (d.nets.size() != need) {
      add(d.name, fmt::format("terminal-count: device {} has {} terminals, expected {}",
                              d.name, d.nets.size(), need));
      continue;
    }
    for (std::size_t k = 0; k < need; ++k) {
      auto& i = nets[d.nets[k]];
      ++i.connections;
      if (d.kind == 'M') {
        if (k == 1) i.loaded = true;
        if (k == 0 || k == 2) i.driven = i.driven_inside = true;
      } else if (d.kind == 'R') {
        i.driven = i.driven_inside = true;
      }
    }
  }

  for (const auto& inst : s.instances) {
    const Subckt* child = n.find(inst.subckt);
    if (!child) {
      add(inst.name, fmt::format("unknown-subckt: instance {} references undefined '{}'",
                                 inst.name, inst.subckt));
      continue;
    }
    if (child->ports.size() != inst.nets.size()) {
      add(inst.name, fmt::format("port-count-mismatch: instance {} binds {} nets, "
                                 "'{}' declares {} ports",
                                 inst.name, inst.nets.size(), child->name,
                                 child->ports.size()));
      continue;
    }
    for (std::size_t k = 0; k < inst.nets.size(); ++k) {
      auto& i = nets[inst.nets[k]];
      ++i.connections;
      switch (child->ports[k].dir) {
        case PortDir::Input: i.loaded = true; break;
        case PortDir::Output:
        case PortDir::InOut: i.driven = i.driven_inside = true; break;
        case PortDir::Power: i.loaded = i.pin_power = true; break;
        case PortDir::Ground: i.loaded = i.pin_ground = true; break;
      }
    }
  }

  for (const auto& [name, i] : nets) {
    if (i.output_port) {
      if (!i.driven_inside)
        add(name, "undriven-output: output port has no driver inside the subcircuit");
    } else if (i.loaded && !i.driven) {
      add(name, "floating-gate: net feeds a gate or input pin but has no driver");
    }
    if (!i.port && i.connections == 1)
      add(name, "dangling-net: internal net with a single connection");
    if ((i.pin_power && (i.supply_ground || i.pin_ground)) ||
        (i.pin_ground && i.supply_power))
      add(name, "shorted-supply: power and ground pins share one net");
  }
}

void wrap_tokens(std::string& out, const std::vector<std::string>& tokens) {
  std::size_t col = 0;
  for (std::size_t k = 0; k < tokens.size(); ++k) {
    if (k == 0) {
      out += tokens[k];
      col = tokens[k].size();
    } else if (col + 1 + tokens[k].size() > kLineWidth) {
      out += "\n+ ";
      out += tokens[k];
      col = 2 + tokens[k].size();
    } else {
      out += ' ';
      out += tokens[k];
      col += 1 + tokens[k].size();
    }
  }
  out += '\n';
}

PortDir from_pininfo(char c, const std::string& source, int line) {
  switch (c) {
    case 'I': return PortDir::Input;
    case 'O': return PortDir::Output;
    case 'B': return PortDir::InOut;
    case 'P': return PortDir::Power;
    case 'G': return PortDir::Ground;
  }
  throw ParseError(source, line, "PININFO", fmt::format("unknown pin direction '{}'", c));
}

/// `target_exp` is the decimal exponent of the unit the value is wanted in
/// (-6 for um, -15 for fF, 0 for ohm).
double parse_value(std::string_view text, int target_exp, const std::string& source,
                   int line, const std::string& field) {
  double mantissa = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), mantissa);
  if (ec != std::errc())
    throw ParseError(source, line, field, fmt::format("bad number '{}'", text));
  std::string suffix = lower(std::string_view(ptr, text.data() + text.size() - ptr));
  int exp = 0;
  if (suffix.empty()) exp = 0;
  else if (suffix == "f") exp = -15;
  else if (suffix == "p") exp = -12;
  else if (suffix == "n") exp = -9;
  else if (suffix == "u") exp = -6;
  else if (suffix == "m") exp = -3;
  else if (suffix == "k") exp = 3;
  else if (suffix == "meg") exp = 6;
  else if (suffix == "g") exp = 9;
  else
    throw ParseError(source, line, field, fmt::format("unknown unit suffix in '{}'", text));
  const int diff = exp - target_exp;
  if (diff == 0) return mantissa;
  if (diff > 0) return mantissa * std::pow(10.0, diff);
  return mantissa / std::pow(10.0, -diff);
}

std::string device_key(const Primitive& d) {
  std::string key = fmt::format("{}|{}|", d.kind, d.name);
  for (const auto& n : d.nets) key += n + ",";
  return key + fmt::format("|{}|{}|{}|{}", d.model, d.w_um, d.l_um, d.value);
}

std::string instance_key(const Instance& i) {
  std::string key = i.name + "|" + i.subckt + "|";
  for (const auto& n : i.nets) key += n + ",";
  return key;
}

}  // namespace

const Port* Subckt::find_port(std::string_view port) const {
  for (const auto& p : ports)
    if (p.name == port) return &p;
  return nullptr;
}

const Subckt* Netlist::find(std::string_view name) const {
  for (const auto& s : subckts)
    if (s.name == name) return &s;
  return nullptr;
}

Subckt* Netlist::find(std::string_view name) {
  for (auto& s : subckts)
    if (s.name == name) return &s;
  return nullptr;
}

const Subckt& Netlist::top_subckt() const {
  const Subckt* s = find(top);
  if (!s) throw ConnectivityError("top subcircuit '" + top + "' is not defined");
  return *s;
}

char to_pininfo(PortDir dir) {
  switch (dir) {
    case PortDir::Input: return 'I';
    case PortDir::Output: return 'O';
    case PortDir::InOut: return 'B';
    case PortDir::Power: return 'P';
    case PortDir::Ground: return 'G';
  }
  return '?';
}

ConnectivityReport connectivity_check(const Netlist& n) {
  ConnectivityReport r;
  if (!n.find(n.top))
    r.violations.push_back({n.top, "", "unknown-subckt", "top subcircuit is not defined"});
  for (const auto& s : n.subckts) check_subckt(n, s, r.violations);
  r.pass = r.violations.empty();
  return r;
}

std::string emit_spice(const Netlist& n) {
  auto report = connectivity_check(n);
  if (!report.pass) {
    const auto& v = report.violations.front();
    throw ConnectivityError(fmt::format(
        "refusing to emit: {} violation(s), first: {} in {} on net '{}': {}",
        report.violations.size(), v.rule, v.subckt, v.net, v.detail));
  }
  std::string out;
  out += "* gcmc structural netlist\n";
  out += "* top: " + n.top + "\n";
  for (const auto& s : n.subckts) {
    out += '\n';
    std::vector<std::string> tokens{".SUBCKT", s.name};
    for (const auto& p : s.ports) tokens.push_back(p.name);
    wrap_tokens(out, tokens);
    // PININFO is a comment for other readers, so it is wrapped by repeating
    // the prefix rather than with continuation lines.
    std::string pin_line = "*.PININFO";
    for (const auto& p : s.ports) {
      std::string item = fmt::format("{}:{}", p.name, to_pininfo(p.dir));
      if (pin_line.size() + 1 + item.size() > kLineWidth) {
        out += pin_line + '\n';
        pin_line = "*.PININFO";
      }
      pin_line += ' ' + item;
    }
    out += pin_line + '\n';
    for (const auto& d : s.devices) {
      tokens.assign({d.name});
      tokens.insert(tokens.end(), d.nets.begin(), d.nets.end());
      if (d.kind == 'M') {
        tokens.push_back(d.model);
        tokens.push_back(fmt::format("w={}u", d.w_um));
        tokens.push_back(fmt::format("l={}u", d.l_um));
      } else if (d.kind == 'C') {
        tokens.push_back(fmt::format("{}f", d.value));
      } else {
        tokens.push_back(fmt::format("{}", d.value));
      }
      wrap_tokens(out, tokens);
    }
    for (const auto& i : s.instances) {
      tokens.assign({i.name});
      tokens.insert(tokens.end(), i.nets.begin(), i.nets.end());
      tokens.push_back(i.subckt);
      wrap_tokens(out, tokens);
    }
    out += ".ENDS " + s.name + '\n';
  }
  return out;
}

Netlist parse_spice(std::string_view text, const std::string& source) {
  struct Logical {
    int line;
    std::vector<std::string> tokens;
    bool pininfo;
  };
  std::vector<Logical> lines;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    auto first = raw.find_first_not_of(" \t");
    if (first == std::string_view::npos) continue;
    raw = raw.substr(first);
    bool pininfo = false;
    if (raw.front() == '*') {
      if (lower(raw.substr(0, 9)) != "*.pininfo") continue;
      pininfo = true;
      raw.remove_prefix(9);
    }
    bool continuation = !pininfo && raw.front() == '+';
    if (continuation) raw.remove_prefix(1);
    std::vector<std::string> tokens;
    std::size_t k = 0;
    while (k < raw.size()) {
      auto b = raw.find_first_not_of(" \t", k);
      if (b == std::string_view::npos) break;
      auto e = raw.find_first_of(" \t", b);
      if (e == std::string_view::npos) e = raw.size();
      tokens.emplace_back(raw.substr(b, e - b));
      k = e;
    }
    if (continuation) {
      if (lines.empty() || lines.back().pininfo)
        throw ParseError(source, line_no, "", "continuation line without a card");
      auto& prev = lines.back().tokens;
      prev.insert(prev.end(), tokens.begin(), tokens.end());
    } else {
      lines.push_back({line_no, std::move(tokens), pininfo});
    }
  }

  Netlist n;
  Subckt* open = nullptr;
  int open_line = 0;
  std::set<std::string> names;
  for (auto& l : lines) {
    auto& t = l.tokens;
    if (l.pininfo) {
      if (!open) throw ParseError(source, l.line, "PININFO", "pin info outside of .SUBCKT");
      for (const auto& item : t) {
        auto colon = item.rfind(':');
        if (colon == std::string::npos || colon + 2 != item.size())
          throw ParseError(source, l.line, "PININFO", "expected name:dir, got '" + item + "'");
        std::string pname = item.substr(0, colon);
        auto it = std::find_if(open->ports.begin(), open->ports.end(),
                               [&](const Port& p) { return p.name == pname; });
        if (it == open->ports.end())
          throw ParseError(source, l.line, "PININFO", "unknown port '" + pname + "'");
        it->dir = from_pininfo(item.back(), source, l.line);
      }
      continue;
    }
    if (t.empty()) continue;
    const std::string card = lower(t[0]);
    if (card == ".subckt") {
      if (open)
        throw ParseError(source, l.line, "",
                         fmt::format(".SUBCKT inside unterminated block '{}' opened at line {}",
                                     open->name, open_line));
      if (t.size() < 2) throw ParseError(source, l.line, "", ".SUBCKT without a name");
      if (!names.insert(t[1]).second)
        throw ParseError(source, l.line, "", "duplicate subcircuit '" + t[1] + "'");
      Subckt s;
      s.name = t[1];
      for (std::size_t k = 2; k < t.size(); ++k) s.ports.push_back({t[k], PortDir::InOut});
      n.subckts.push_back(std::move(s));
      open = &n.subckts.back();
      open_line = l.line;
      continue;
    }
    if (card == ".ends") {
      if (!open) throw ParseError(source, l.line, "", ".ENDS without matching .SUBCKT");
      if (t.size() > 1 && t[1] != open->name)
        throw ParseError(source, l.line, "",
                         fmt::format(".ENDS '{}' does not close '{}'", t[1], open->name));
      open = nullptr;
      continue;
    }
    if (!open)
      throw ParseError(source, l.line, "", "card '" + t[0] + "' outside of .SUBCKT");
    const char c = static_cast<char>(std::toupper(static_cast<unsigned char>(t[0][0])));
    if (c == 'M') {
      if (t.size() != 8)
        throw ParseError(source, l.line, t[0], "mosfet card needs 4 nets, a model, w= and l=");
      Primitive d{'M', t[0], {t[1], t[2], t[3], t[4]}, t[5]};
      bool have_w = false, have_l = false;
      for (std::size_t k = 6; k < 8; ++k) {
        auto eq = t[k].find('=');
        std::string key = eq == std::string::npos ? "" : lower(t[k].substr(0, eq));
        if (key == "w") {
          d.w_um = parse_value(std::string_view(t[k]).substr(eq + 1), -6, source, l.line, "w");
          have_w = true;
        } else if (key == "l") {
          d.l_um = parse_value(std::string_view(t[k]).substr(eq + 1), -6, source, l.line, "l");
          have_l = true;
        } else {
          throw ParseError(source, l.line, t[k], "unknown mosfet parameter");
        }
      }
      if (!have_w || !have_l) throw ParseError(source, l.line, t[0], "missing w= or l=");
      open->devices.push_back(std::move(d));
    } else if (c == 'C' || c == 'R') {
      if (t.size() != 4)
        throw ParseError(source, l.line, t[0], "two-terminal card needs 2 nets and a value");
      Primitive d{c, t[0], {t[1], t[2]}, "", 0.0, 0.0, 0.0};
      d.value = parse_value(t[3], c == 'C' ? -15 : 0, source, l.line, "value");
      open->devices.push_back(std::move(d));
    } else if (c == 'X') {
      if (t.size() < 2) throw ParseError(source, l.line, t[0], "instance without a subcircuit");
      Instance i{t[0], t.back(), {t.begin() + 1, t.end() - 1}};
      open->instances.push_back(std::move(i));
    } else {
      throw ParseError(source, l.line, t[0], "unknown card '" + t[0] + "'");
    }
  }
  if (open)
    throw ParseError(source, open_line, "",
                     fmt::format("unterminated .SUBCKT '{}' (missing .ENDS)", open->name));
  if (n.subckts.empty()) throw ParseError(source, 0, "", "empty netlist: no subcircuits");
  n.top = n.subckts.back().name;
  return n;
}

bool isomorphic(const Netlist& a, const Netlist& b, std::string* why) {
  auto fail = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  if (a.top != b.top) return fail("top differs: " + a.top + " vs " + b.top);
  if (a.subckts.size() != b.subckts.size())
    return fail(fmt::format("subcircuit count {} vs {}", a.subckts.size(), b.subckts.size()));
  for (const auto& sa : a.subckts) {
    const Subckt* sb = b.find(sa.name);
    if (!sb) return fail("missing subcircuit " + sa.name);
    if (sa.ports != sb->ports) return fail("ports differ in " + sa.name);
    auto keys = [](const Subckt& s) {
      std::vector<std::string> d, i;
      for (const auto& x : s.devices) d.push_back(device_key(x));
      for (const auto& x : s.instances) i.push_back(instance_key(x));
      std::sort(d.begin(), d.end());
      std::sort(i.begin(), i.end());
      return std::pair{d, i};
    };
    if (keys(sa) != keys(*sb)) return fail("devices or instances differ in " + sa.name);
  }
  return true;
}

std::map<std::string, std::size_t> flat_instance_counts(const Netlist& n) {
  std::vector<const Subckt*> order;  // post-order: children before parents
  std::set<std::string> seen;
  std::function<void(const Subckt&)> visit = [&](const Subckt& s) {
    if (!seen.insert(s.name).second) return;
    for (const auto& i : s.instances)
      if (const Subckt* c = n.find(i.subckt)) visit(*c);
    order.push_back(&s);
  };
  std::map<std::string, std::size_t> counts;
  const Subckt* top = n.find(n.top);
  if (!top) return counts;
  visit(*top);
  counts[top->name] = 1;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const std::size_t mult = counts[(*it)->name];
    for (const auto& i : (*it)->instances) counts[i.subckt] += mult;
  }
  return counts;
}

}  // namespace gcmc::netlist
