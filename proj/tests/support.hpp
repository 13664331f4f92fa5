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

#include "gcmc/macro_config.hpp"
#include "gcmc/technology.hpp"

namespace gcmc::test {

inline std::string data_path(const std::string& name) {
  return std::string(GCMC_DATA_DIR) + "/" + name;
}

inline const tech::TechnologyModel& default_tech() {
  static const tech::TechnologyModel t = tech::load_technology(data_path("default.tech"));
  return t;
}

inline std::string default_tech_text() {
  static const std::string text = [] {
    std::string out;
    FILE* f = std::fopen(data_path("default.tech").c_str(), "rb");
    if (!f) return out;
    char buf[4096];
    std::size_t n;
    while ((n = std::fread(buf, 1, sizeof buf, f)) > 0) out.append(buf, n);
    std::fclose(f);
    return out;
  }();
  return text;
}

inline MacroConfig make(tech::VariantName v, int wz, int nw, bool ls = false, int banks = 1,
                        int mux = 0) {
  MacroConfig c;
  c.variant = v;
  c.ls = ls;
  c.word_size = wz;
  c.num_words = nw;
  c.num_banks = banks;
  c.column_mux = mux;
  return resolve(c);
}

inline constexpr tech::VariantName kSiSi = tech::VariantName::SiSiGC;
inline constexpr tech::VariantName kOsSi = tech::VariantName::OSSiGC;
inline constexpr tech::VariantName kSram = tech::VariantName::SRAM6T;

inline constexpr int kGridSizes[] = {16, 32, 64, 128, 256};

}  // namespace gcmc::test
