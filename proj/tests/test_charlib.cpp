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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <random>

#include "gcmc/charlib.hpp"
#include "gcmc/error.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace gcmc;
using namespace gcmc::test;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// A write device whose leakage is independent of bias over the decay:
// the swing is so large that the gate term is 1, and the drain term is 1
// to double precision for volt-scale vds.
tech::TechnologyModel constant_current_tech(double i_off, double c_sn_ff, double margin) {
  auto t = default_tech();
  t.retention_margin = margin;
  for (auto& v : t.variants) {
    if (v.name != kSiSi) continue;
    v.write_tx.ss = 1e15;
    v.write_tx.i_off_ref = i_off;
    v.write_tx.width = 1.0;
    v.c_sn = c_sn_ff;
  }
  return t;
}

// t = integral of C / I(V) dV from the failure level to the written level,
// evaluated with composite Simpson on a fine grid.
double quadrature_retention(const tech::BitcellVariant& v, const tech::TechnologyModel& t,
                            double delta_vt) {
  const double hi = v.has_wwl_level_shifter ? t.vdd : t.vdd - v.write_tx.vt;
  const double lo = hi - t.retention_margin;
  const int n = 20000;
  const double h = (hi - lo) / n;
  auto f = [&](double volts) {
    const double i = tech::subthreshold_current(v.write_tx, -t.kappa * volts, volts, delta_vt,
                                                t.temperature);
    return v.c_sn * 1e-15 / i;
  };
  double sum = f(lo) + f(hi);
  for (int k = 1; k < n; ++k) sum += f(lo + k * h) * (k % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

double retention(tech::VariantName v, bool ls, double dvt, const tech::TechnologyModel& t) {
  return charlib::retention_solve(tech::bitcell_lookup(t, v, ls), t, dvt).failure_time;
}

}  // namespace

TEST_CASE("constant-current retention matches C*dV/I") {
  const auto t = constant_current_tech(1e-9, 1.0, 0.1);
  const auto tr = charlib::retention_solve(tech::bitcell_lookup(t, kSiSi, false), t, 0.0);
  CHECK(tr.converged);
  CHECK(std::abs(tr.failure_time - 100e-9) / 100e-9 <= 1e-3);
}

TEST_CASE("constant-current oracle over random models") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> log_i(-15.0, -7.0), log_c(-0.5, 1.0), m(0.05, 0.3);
  for (int k = 0; k < 50; ++k) {
    const double i = std::pow(10.0, log_i(rng));
    const double c = std::pow(10.0, log_c(rng));
    const double margin = m(rng);
    const auto t = constant_current_tech(i, c, margin);
    for (bool ls : {false, true}) {
      const double expect = c * 1e-15 * margin / i;
      const double got = retention(kSiSi, ls, 0.0, t);
      CAPTURE(expect);
      CHECK(std::abs(got - expect) / expect <= 1e-3);
    }
  }
}

TEST_CASE("solver agrees with direct quadrature under the default devices") {
  const auto& t = default_tech();
  for (auto v : {kSiSi, kOsSi})
    for (bool ls : {false, true})
      for (double dvt : {0.0, 0.1, 0.2}) {
        const auto b = tech::bitcell_lookup(t, v, ls);
        const double expect = quadrature_retention(b, t, dvt);
        const double got = charlib::retention_solve(b, t, dvt).failure_time;
        CAPTURE(expect);
        CHECK(std::abs(got - expect) / expect <= 1e-3);
      }
}

TEST_CASE("retention regimes under the default technology") {
  const auto& t = default_tech();
  const double si = retention(kSiSi, false, 0.0, t);
  CHECK(si >= 1e-6);
  CHECK(si <= 1e-4);
  CHECK(retention(kOsSi, false, 0.0, t) >= 1e-3);
  CHECK(retention(kOsSi, false, 0.2, t) >= 10.0);
  for (int wz : kGridSizes)
    for (int nw : kGridSizes) {
      const double os = charlib::characterize(make(kOsSi, wz, nw), t).t_retention;
      const double s = charlib::characterize(make(kSiSi, wz, nw), t).t_retention;
      CHECK(os >= 10 * s);
    }
}

TEST_CASE("retention trace") {
  const auto& t = default_tech();
  const auto b = tech::bitcell_lookup(t, kSiSi, false);
  const auto tr = charlib::retention_solve(b, t, 0.0);
  CHECK(tr.written_level == doctest::Approx(t.vdd - b.write_tx.vt));
  CHECK(tr.failure_level == doctest::Approx(tr.written_level - t.retention_margin));
  REQUIRE(tr.time_s.size() == tr.voltage_v.size());
  REQUIRE(tr.time_s.size() > 100);
  for (std::size_t k = 1; k < tr.time_s.size(); ++k) {
    CHECK(tr.time_s[k] > tr.time_s[k - 1]);
    CHECK(tr.voltage_v[k] < tr.voltage_v[k - 1]);
  }
  CHECK(tr.time_s.back() == tr.failure_time);
  CHECK(tr.voltage_v.back() == doctest::Approx(tr.failure_level).epsilon(1e-6));
  for (std::size_t k = 0; k + 1 < tr.voltage_v.size(); ++k)
    CHECK(tr.voltage_v[k] > tr.failure_level);

  const auto ls = charlib::retention_solve(tech::bitcell_lookup(t, kSiSi, true), t, 0.0);
  CHECK(ls.written_level == doctest::Approx(t.vdd));
}

TEST_CASE("retention monotonicity") {
  const auto& t = default_tech();
  for (auto v : {kSiSi, kOsSi}) {
    double prev = 0.0;
    for (double dvt = 0.0; dvt <= 0.3 + 1e-12; dvt += 0.05) {
      const double r = retention(v, false, dvt, t);
      CHECK(r > prev);
      prev = r;
    }
    prev = 0.0;
    for (double c : {0.5, 1.0, 2.0, 4.0}) {
      auto tc = t;
      for (auto& b : tc.variants)
        if (b.name == v) b.c_sn = c;
      const double r = retention(v, false, 0.0, tc);
      CHECK(r > prev);
      prev = r;
    }
    prev = kInf;
    for (double kelvin : {250.0, 300.0, 350.0, 400.0}) {
      auto tk = t;
      tk.temperature = kelvin;
      const double r = retention(v, false, 0.0, tk);
      CHECK(r < prev);
      prev = r;
    }
  }
}

TEST_CASE("retention errors and non-convergence") {
  const auto& t = default_tech();
  CHECK_THROWS_AS(charlib::retention_solve(make(kSram, 32, 32), t, 0.0), WrongVariantError);
  CHECK_THROWS_AS(charlib::retention_solve(make(kSiSi, 32, 32), t, -0.1), InvalidConfigError);

  // The failure level lies below ground, so the node never gets there.
  auto deep = t;
  deep.retention_margin = 0.6;
  const auto tr = charlib::retention_solve(tech::bitcell_lookup(deep, kSiSi, false), deep, 0.0);
  CHECK_FALSE(tr.converged);
  CHECK(std::isinf(tr.failure_time));
}

TEST_CASE("read delay") {
  const auto& t = default_tech();
  for (auto v : {kSiSi, kOsSi})
    for (int wz : kGridSizes)
      for (int nw : kGridSizes) {
        CHECK(charlib::read_delay(make(v, wz, nw, true), t) <
              charlib::read_delay(make(v, wz, nw), t));
      }
  // More rows at fixed columns: longer read bitline.
  const auto a = charlib::read_delay_breakdown(make(kSiSi, 32, 64, false, 1, 1), t);
  const auto b = charlib::read_delay_breakdown(make(kSiSi, 32, 128, false, 1, 1), t);
  CHECK(b.bitline > a.bitline);
  CHECK(charlib::read_delay(make(kSiSi, 32, 32), t) ==
        charlib::read_delay_breakdown(make(kSiSi, 32, 32), t).total());
}

TEST_CASE("write delay") {
  const auto& t = default_tech();
  for (int wz : kGridSizes)
    for (int nw : kGridSizes) {
      CHECK(charlib::write_delay(make(kOsSi, wz, nw), t) >
            charlib::write_delay(make(kSiSi, wz, nw), t));
      for (auto v : {kSiSi, kOsSi})
        CHECK(charlib::write_delay(make(v, wz, nw, true), t) <=
              charlib::write_delay(make(v, wz, nw), t));
    }
  auto t2 = t;
  for (auto& b : t2.variants)
    if (b.name == kSram) b.c_sn = 50.0;
  CHECK(charlib::write_delay(make(kSram, 64, 64), t) == charlib::write_delay(make(kSram, 64, 64), t2));
}

TEST_CASE("frequency quantization") {
  const auto& t = default_tech();
  const double fo4 = t.fo4_seconds();
  for (auto v : tech::kAllVariants)
    for (int wz : kGridSizes)
      for (int nw : kGridSizes) {
        const auto c = make(v, wz, nw);
        const auto f = charlib::max_frequency(c, t);
        const double rd = charlib::read_delay(c, t);
        CHECK(f.read_stages >= 1);
        CHECK(f.read_stages * fo4 >= rd * (1 - 1e-9));
        if (f.read_stages > 1) CHECK((f.read_stages - 1) * fo4 < rd);
        const auto r = charlib::characterize(c, t);
        CHECK(r.f_op == std::min(r.f_read_max, r.f_write_max));
        CHECK(r.delay_chain_stages == std::max(r.read_stages, r.write_stages));
        const double n = 1.0 / (r.f_op * fo4) - t.timing.guard_stages;
        CHECK(std::abs(n - std::round(n)) < 1e-6);
      }
  CHECK(charlib::stages_for(0.0, t) == 1);
  CHECK(charlib::stages_for(3 * fo4, t) == 3);
  CHECK(charlib::stages_for(3.01 * fo4, t) == 4);
  CHECK(charlib::quantized_frequency(3, t) == doctest::Approx(1.0 / (4 * fo4)));
}

TEST_CASE("stage count is nondecreasing in capacity at a fixed aspect ratio") {
  const auto& t = default_tech();
  for (auto v : tech::kAllVariants)
    for (int ratio : {1, 4}) {
      int prev = 0;
      for (int nw = 16; nw * ratio <= 256; nw *= 2) {
        const int n = charlib::max_frequency(make(v, nw * ratio, nw), t).delay_chain_stages;
        CHECK(n >= prev);
        prev = n;
      }
    }
}

TEST_CASE("SRAM runs faster than Si-Si at equal geometry") {
  const auto& t = default_tech();
  for (int wz : kGridSizes)
    for (int nw : kGridSizes)
      CHECK(charlib::characterize(make(kSram, wz, nw), t).f_op >
            charlib::characterize(make(kSiSi, wz, nw), t).f_op);
}

TEST_CASE("effective bandwidth") {
  const auto& t = default_tech();
  const auto gc = charlib::characterize(make(kSiSi, 32, 32), t);
  CHECK(gc.bandwidth_eff == 32 * (gc.f_read_max + gc.f_write_max));
  auto same = gc;
  same.f_write_max = same.f_read_max;
  CHECK(charlib::effective_bandwidth(gc.config, t, same) == 2 * 32 * gc.f_read_max);
  const auto sram = charlib::characterize(make(kSram, 64, 64, false, 1, 1), t);
  CHECK(sram.bandwidth_eff == 0.5 * 64 * sram.f_op);
  const auto si = charlib::characterize(make(kSiSi, 64, 64, false, 1, 1), t);
  CHECK(sram.bandwidth_eff > si.bandwidth_eff);
}

TEST_CASE("leakage") {
  const auto& t = default_tech();
  for (int wz : kGridSizes)
    for (int nw : kGridSizes) {
      const double sram = charlib::leakage_power(make(kSram, wz, nw), t);
      for (auto v : {kSiSi, kOsSi})
        for (bool ls : {false, true})
          CHECK(charlib::leakage_power(make(v, wz, nw, ls), t) <= 1e-2 * sram);
      CHECK(charlib::leakage_power(make(kOsSi, wz, nw), t) <=
            charlib::leakage_power(make(kSiSi, wz, nw), t));
    }
  double prev = 0.0;
  for (int bits = 512; bits <= 16384; bits *= 2) {
    const double p = charlib::leakage_power(make(kSram, 32, bits / 32), t);
    CHECK(p > prev);
    prev = p;
  }
}

TEST_CASE("dynamic energy grows with the array") {
  const auto& t = default_tech();
  for (auto v : tech::kAllVariants) {
    const double a = charlib::dynamic_energy(make(v, 32, 32), t);
    const double b = charlib::dynamic_energy(make(v, 64, 128), t);
    CHECK(a > 0);
    CHECK(b > a);
  }
}

TEST_CASE("characterize") {
  const auto& t = default_tech();
  const auto sram = charlib::characterize(make(kSram, 32, 32), t);
  CHECK(std::isinf(sram.t_retention));
  CHECK(sram.p_leak >= 0);
  for (int wz : kGridSizes)
    for (int nw : kGridSizes) {
      const auto a = charlib::characterize(make(kSiSi, wz, nw), t);
      const auto b = charlib::characterize(make(kSiSi, wz, nw, true), t);
      CHECK(b.f_op > a.f_op);
      CHECK(b.t_retention > a.t_retention);
      CHECK(b.f_read_max >= a.f_read_max);
    }
  const auto x = charlib::characterize(make(kOsSi, 64, 32, true), t, 0.1);
  const auto y = charlib::characterize(make(kOsSi, 64, 32, true), t, 0.1);
  CHECK(charlib::report_json(x) == charlib::report_json(y));
  CHECK(x.delta_vt == 0.1);
  CHECK(x.t_retention > charlib::characterize(make(kOsSi, 64, 32, true), t).t_retention);
}

TEST_CASE("report JSON") {
  const auto& t = default_tech();
  const auto s = nlohmann::json::parse(charlib::report_json(charlib::characterize(make(kSram, 32, 32), t)));
  CHECK(s["t_retention_s"].is_null());
  const auto r = charlib::characterize(make(kSiSi, 32, 32), t);
  const auto g = nlohmann::json::parse(charlib::report_json(r));
  CHECK(g["t_retention_s"].get<double>() == r.t_retention);
  CHECK(g["f_op_hz"].get<double>() == r.f_op);
  CHECK(g["config"]["key"] == "sisi-gc_32x32_b1_m1");
}

TEST_CASE("Liberty summary") {
  const auto& t = default_tech();
  auto field = [](const std::string& text, const std::string& key) {
    const auto p = text.find(key + " : ");
    REQUIRE(p != std::string::npos);
    return std::stod(text.substr(p + key.size() + 3));
  };
  const auto c = make(kSiSi, 64, 64);
  const auto r = charlib::characterize(c, t);
  const std::string lib = charlib::emit_liberty_summary(r, c, t);
  CHECK(lib == charlib::emit_liberty_summary(r, c, t));
  CHECK(field(lib, "min_period") == doctest::Approx(1e9 / r.f_op).epsilon(1e-5));
  CHECK(field(lib, "area") == doctest::Approx(r.area.total_area).epsilon(1e-5));
  CHECK(field(lib, "cell_leakage_power") == doctest::Approx(r.p_leak * 1e9).epsilon(1e-5));
  CHECK(field(lib, "retention_time") == doctest::Approx(r.t_retention).epsilon(1e-5));
  CHECK(lib.find("cell (" + top_name(c) + ")") != std::string::npos);

  const auto s = make(kSram, 64, 64);
  const std::string slib = charlib::emit_liberty_summary(charlib::characterize(s, t), s, t);
  CHECK(slib.find("retention_time :") == std::string::npos);
  CHECK(slib.find("pin (vref)") == std::string::npos);
}
