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
#include "gcmc/macro_config.hpp"

#include <fmt/format.h>

#include <cstdlib>

#include "gcmc/error.hpp"

namespace gcmc {

namespace {

constexpr int kMinCapacityBits = 256;

void require(bool ok, const std::string& message) {
  if (!ok) throw InvalidConfigError(message);
}

}  // namespace

bool is_power_of_two(long long v) { return v > 0 && (v & (v - 1)) == 0; }

int log2_exact(long long v) {
  int b = 0;
  while ((1LL << b) < v) ++b;
  return b;
}

int MacroConfig::rows() const {
  return num_words / (column_mux * num_banks);
}

int MacroConfig::cols() const { return word_size * column_mux; }

int auto_column_mux(int word_size, int num_words, int num_banks) {
  int best = 1;
  long long best_gap = -1;
  for (int m = 1; num_words / (static_cast<long long>(m) * num_banks) >= 2 &&
                  num_words % (m * num_banks) == 0;
       m *= 2) {
    const long long rows = num_words / (m * num_banks);
    const long long gap = std::llabs(rows - static_cast<long long>(word_size) * m);
    if (best_gap < 0 || gap < best_gap) {
      best_gap = gap;
      best = m;
    }
  }
  return best;
}

MacroConfig resolve(const MacroConfig& config, std::string* warning) {
  MacroConfig c = config;
  require(is_power_of_two(c.word_size),
          fmt::format("word size {} is not a power of two", c.word_size));
  require(is_power_of_two(c.num_words),
          fmt::format("number of words {} is not a power of two", c.num_words));
  require(is_power_of_two(c.num_banks),
          fmt::format("number of banks {} is not a power of two", c.num_banks));
  require(static_cast<long long>(c.word_size) * c.num_words >= kMinCapacityBits,
          fmt::format("capacity {}x{} is below the {}-bit minimum", c.word_size,
                      c.num_words, kMinCapacityBits));
  require(c.num_words % c.num_banks == 0 && c.num_words / c.num_banks >= 2,
          fmt::format("{} words cannot be split into {} banks of at least two rows",
                      c.num_words, c.num_banks));
  if (c.column_mux == 0) c.column_mux = auto_column_mux(c.word_size, c.num_words, c.num_banks);
  require(is_power_of_two(c.column_mux),
          fmt::format("column mux {} is not a power of two", c.column_mux));
  require(c.num_words % (static_cast<long long>(c.column_mux) * c.num_banks) == 0,
          fmt::format("number of words {} is not divisible by mux {} x banks {}",
                      c.num_words, c.column_mux, c.num_banks));
  require(c.rows() >= 2, fmt::format("mux {} leaves fewer than two rows per bank",
                                     c.column_mux));
  if (!c.is_gc() && c.ls) {
    c.ls = false;
    if (warning) *warning = "--ls is ignored for sram6t (no write wordline level shifter)";
  }
  return c;
}

int address_bits(const MacroConfig& c) { return log2_exact(c.num_words); }
int column_bits(const MacroConfig& c) { return log2_exact(c.column_mux); }
int row_bits(const MacroConfig& c) { return log2_exact(c.rows()); }
int bank_bits(const MacroConfig& c) { return log2_exact(c.num_banks); }

std::string config_key(const MacroConfig& c) {
  return fmt::format("{}_{}x{}_b{}_m{}{}", tech::cli_name(c.variant), c.word_size,
                     c.num_words, c.num_banks, c.column_mux, c.ls ? "_ls" : "");
}

std::uint32_t fnv1a32(const std::string& text) {
  std::uint32_t h = 2166136261u;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 16777619u;
  }
  return h;
}

std::string config_stem(const MacroConfig& c) {
  const std::string key = config_key(c);
  return fmt::format("{}-{:08x}", key, fnv1a32(key));
}

std::string top_name(const MacroConfig& c) {
  std::string v(tech::cli_name(c.variant));
  for (auto& ch : v)
    if (ch == '-') ch = '_';
  return fmt::format("gcmc_{}_{}x{}_b{}_m{}{}", v, c.word_size, c.num_words, c.num_banks,
                     c.column_mux, c.ls ? "_ls" : "");
}

std::vector<netlist::Port> expected_top_ports(const MacroConfig& c) {
  using netlist::PortDir;
  std::vector<netlist::Port> p;
  auto bus = [&](const std::string& name, int width, PortDir dir) {
    for (int i = 0; i < width; ++i) p.push_back({fmt::format("{}[{}]", name, i), dir});
  };
  const int a = address_bits(c);
  p.push_back({"clk", PortDir::Input});
  p.push_back({"we", PortDir::Input});
  p.push_back({"re", PortDir::Input});
  if (c.is_gc()) {
    bus("addr_w", a, PortDir::Input);
    bus("addr_r", a, PortDir::Input);
  } else {
    bus("addr", a, PortDir::Input);
  }
  bus("din", c.word_size, PortDir::Input);
  bus("dout", c.word_size, PortDir::Output);
  p.push_back({"vdd", PortDir::Power});
  if (c.is_gc() && c.ls) p.push_back({"vdd_boost", PortDir::Power});
  p.push_back({"gnd", PortDir::Ground});
  if (c.is_gc()) p.push_back({"vref", PortDir::Input});
  return p;
}

}  // namespace gcmc
