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

#include <cstdint>
#include <string>
#include <vector>

#include "gcmc/netlist.hpp"
#include "gcmc/technology.hpp"

namespace gcmc {

/// A requested macro. `column_mux` of 0 selects the auto-square factor.
struct MacroConfig {
  tech::VariantName variant = tech::VariantName::SiSiGC;
  bool ls = false;
  int word_size = 32;
  int num_words = 32;
  int num_banks = 1;
  int column_mux = 0;

  bool is_gc() const { return variant != tech::VariantName::SRAM6T; }
  int rows() const;  // per bank
  int cols() const;  // per bank
  int capacity_bits() const { return word_size * num_words; }

  bool operator==(const MacroConfig&) const = default;
};

bool is_power_of_two(long long v);
int log2_exact(long long v);

/// Smallest power-of-two mux minimizing |rows - cols| with at least two rows.
int auto_column_mux(int word_size, int num_words, int num_banks = 1);

/// Validates the invariants, resolves the auto mux and drops `ls` for SRAM.
/// Throws InvalidConfigError. When `ls` is dropped, `warning` receives a note.
MacroConfig resolve(const MacroConfig& config, std::string* warning = nullptr);

int address_bits(const MacroConfig& c);  // log2(num_words)
int column_bits(const MacroConfig& c);   // log2(M)
int row_bits(const MacroConfig& c);      // log2(rows)
int bank_bits(const MacroConfig& c);     // log2(num_banks)

/// Canonical key, e.g. "sisi-gc_32x32_b1_m1_ls".
std::string config_key(const MacroConfig& c);
/// Key plus an 8-hex-digit FNV-1a digest of it; used for output file names.
std::string config_stem(const MacroConfig& c);
std::uint32_t fnv1a32(const std::string& text);

/// Name of the generated top subcircuit / HDL module.
std::string top_name(const MacroConfig& c);

/// Top-level port list of a resolved config, in netlist order. Bus bits are
/// expanded as name[i].
std::vector<netlist::Port> expected_top_ports(const MacroConfig& c);

}  // namespace gcmc
