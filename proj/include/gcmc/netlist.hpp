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

#include <cstddef>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace gcmc::netlist {

enum class PortDir { Input, Output, InOut, Power, Ground };

struct Port {
  std::string name;
  PortDir dir = PortDir::Input;

  bool operator==(const Port&) const = default;
};

/// Device card. Mosfet terminals are ordered d g s b; capacitors carry
/// `value` in fF and resistors in ohm.
struct Primitive {
  char kind = 'M';  // M | C | R
  std::string name;  // includes the card letter, e.g. "Mw"
  std::vector<std::string> nets;
  std::string model;  // mosfets only
  double w_um = 0.0;
  double l_um = 0.0;
  double value = 0.0;
};

struct Instance {
  std::string name;  // "X..."
  std::string subckt;
  std::vector<std::string> nets;  // bound positionally to the child's ports
};

struct Subckt {
  std::string name;
  std::vector<Port> ports;
  std::vector<Primitive> devices;
  std::vector<Instance> instances;

  const Port* find_port(std::string_view port) const;
};

/// Children are stored before their parents; `top` names the root.
struct Netlist {
  std::vector<Subckt> subckts;
  std::string top;

  const Subckt* find(std::string_view name) const;
  Subckt* find(std::string_view name);
  const Subckt& top_subckt() const;
};

struct Violation {
  std::string subckt;
  std::string net;
  std::string rule;  // floating-gate, dangling-net, undriven-output, ...
  std::string detail;
};

struct ConnectivityReport {
  bool pass = true;
  std::vector<Violation> violations;
};

ConnectivityReport connectivity_check(const Netlist& n);

/// Throws ConnectivityError when the netlist does not pass the check.
std::string emit_spice(const Netlist& n);

/// Parses the emitted subset. The last subcircuit in the text is the top.
Netlist parse_spice(std::string_view text, const std::string& source = "<spice>");

/// Same subcircuit set, same ordered ports, and equal device and instance
/// multisets per subcircuit. On mismatch `why` receives a short reason.
bool isomorphic(const Netlist& a, const Netlist& b, std::string* why = nullptr);

/// Number of times each subcircuit occurs in the flattened hierarchy
/// below `top` (the top itself counts once).
std::map<std::string, std::size_t> flat_instance_counts(const Netlist& n);

char to_pininfo(PortDir dir);

}  // namespace gcmc::netlist
