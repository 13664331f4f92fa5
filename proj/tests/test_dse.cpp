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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>

#include "gcmc/dse.hpp"
#include "gcmc/error.hpp"
#include "json.hpp"
#include "planner_oracle.hpp"
#include "support.hpp"

using namespace gcmc;
using namespace gcmc::test;
using dse::CacheLevel;
using dse::Constraint;
using dse::LifetimeBin;
using dse::WorkloadRequirement;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::vector<dse::CapabilityEnvelope>& envelopes() {
  static const auto e = [] {
    std::vector<dse::CapabilityEnvelope> out;
    for (auto v : tech::kAllVariants)
      out.push_back(dse::build_envelope(v, default_tech(), dse::size_grid()));
    return out;
  }();
  return e;
}

const dse::CapabilityEnvelope& envelope(tech::VariantName v) {
  for (const auto& e : envelopes())
    if (e.variant == v) return e;
  throw std::logic_error("missing envelope");
}

WorkloadRequirement req(double f, std::vector<LifetimeBin> bins, int id = 1,
                        CacheLevel level = CacheLevel::L1) {
  return {id, "task" + std::to_string(id), level, f, std::move(bins)};
}

std::string one_requirement(const std::string& bins, const std::string& extra = "") {
  return R"([{"task_id": 3, "task_name": "t3", "cache_level": "L2", "f_read_req_hz": 1e9,)" +
         extra + R"( "lifetime_bins": )" + bins + "}]";
}

}  // namespace

TEST_CASE("sample profile loads") {
  const auto r = dse::load_requirements(data_path("sample_profile.json"));
  CHECK(r.size() == 14);
  std::set<int> tasks;
  for (const auto& x : r) tasks.insert(x.task_id);
  CHECK(tasks.size() == 7);
  std::map<int, double> l1, l2;
  for (const auto& x : r) (x.level == CacheLevel::L1 ? l1 : l2)[x.task_id] = x.f_read_req_hz;
  for (int t = 1; t <= 7; ++t) CHECK(l2.at(t) > l1.at(t));
  const auto doc = nlohmann::json::parse(std::ifstream(data_path("sample_profile.json")));
  CHECK(doc["synthetic"] == true);
}

TEST_CASE("requirement validation") {
  SUBCASE("shares summing to 0.9") {
    try {
      dse::parse_requirements(one_requirement(
          R"([{"t_min_s": 0, "t_max_s": 1, "traffic_share": 0.5}, {"t_min_s": 1, "t_max_s": 2, "traffic_share": 0.4}])"));
      FAIL("expected an invariant error");
    } catch (const InvariantError& e) {
      CHECK(e.rule() == "traffic-share-sum");
      CHECK(std::string(e.what()).find("task 3") != std::string::npos);
    }
  }
  SUBCASE("overlapping bins") {
    try {
      dse::parse_requirements(one_requirement(
          R"([{"t_min_s": 0, "t_max_s": 2, "traffic_share": 0.5}, {"t_min_s": 1, "t_max_s": 3, "traffic_share": 0.5}])"));
      FAIL("expected an invariant error");
    } catch (const InvariantError& e) {
      CHECK(e.rule() == "bin-overlap");
    }
  }
  SUBCASE("touching bins are fine") {
    CHECK(dse::parse_requirements(
              one_requirement(R"([{"t_min_s": 1, "t_max_s": 2, "traffic_share": 0.5}, {"t_min_s": 0, "t_max_s": 1, "traffic_share": 0.5}])"))
              .size() == 1);
  }
  SUBCASE("empty interval") {
    CHECK_THROWS_AS(dse::parse_requirements(
                        one_requirement(R"([{"t_min_s": 2, "t_max_s": 2, "traffic_share": 1}])")),
                    InvariantError);
  }
  SUBCASE("share outside [0, 1]") {
    CHECK_THROWS_AS(dse::parse_requirements(one_requirement(
                        R"([{"t_min_s": 0, "t_max_s": 1, "traffic_share": 1.5}, {"t_min_s": 1, "t_max_s": 2, "traffic_share": -0.5}])")),
                    InvariantError);
  }
  SUBCASE("non-positive frequency") {
    auto r = req(0.0, {{0, 1, 1}});
    CHECK_THROWS_AS(dse::validate_requirement(r), InvariantError);
  }
  SUBCASE("duplicate task and level") {
    const std::string one = R"({"task_id": 1, "task_name": "a", "cache_level": "L1", "f_read_req_hz": 1e9, "lifetime_bins": [{"t_min_s": 0, "t_max_s": 1, "traffic_share": 1}]})";
    CHECK_THROWS_AS(dse::parse_requirements("[" + one + "," + one + "]"), InvariantError);
  }
  SUBCASE("schema errors") {
    CHECK_THROWS_AS(dse::parse_requirements("{"), ParseError);
    CHECK_THROWS_AS(dse::parse_requirements(R"({"schema": 1})"), ParseError);
    CHECK_THROWS_AS(dse::parse_requirements(R"([{"task_id": 1}])"), ParseError);
    CHECK_THROWS_AS(
        dse::parse_requirements(one_requirement(R"([{"t_min_s": 0, "t_max_s": 1, "traffic_share": 1}])")
                                    .replace(one_requirement("").find("L2"), 2, "L3")),
        ParseError);
    CHECK_THROWS_AS(dse::load_requirements("/nonexistent/profile.json"), IoError);
  }
  SUBCASE("empty list") { CHECK(dse::parse_requirements("[]").empty()); }
}

TEST_CASE("size grids") {
  CHECK(dse::size_grid().size() == 25);
  const auto axis = dse::shmoo_axis();
  CHECK(axis.size() == 16);
  CHECK(axis.front().word_size == 16);
  CHECK(axis.back().num_words == 128);
}

TEST_CASE("capability envelopes") {
  const auto& t = default_tech();
  const auto& sram = envelope(kSram);
  CHECK(std::isinf(sram.t_retention_min));
  CHECK(std::isinf(sram.t_retention_max));
  CHECK(envelope(kOsSi).t_retention_max >= 10.0);
  CHECK(envelope(kSiSi).f_op_max < sram.f_op_max);
  for (auto v : {kSiSi, kOsSi}) {
    const auto& e = envelope(v);
    CHECK(e.t_retention_min > 0);
    CHECK(e.t_retention_min <= e.t_retention_max);
    CHECK(e.t_retention_min ==
          charlib::retention_solve(make(v, 32, 32), t, 0.0).failure_time);
    CHECK(e.t_retention_max ==
          charlib::retention_solve(make(v, 32, 32, true), t, t.timing.delta_vt_max).failure_time);
  }
  // Maximum over the grid, recomputed through full characterization.
  for (auto v : tech::kAllVariants) {
    double f = 0, leak = kInf, area = kInf;
    for (const auto& s : dse::size_grid())
      for (bool ls : {false, true}) {
        if (ls && v == kSram) continue;
        const auto r = charlib::characterize(make(v, s.word_size, s.num_words, ls), t);
        f = std::max(f, r.f_op);
        leak = std::min(leak, r.p_leak / (s.word_size * s.num_words));
        area = std::min(area, r.area.total_area / (s.word_size * s.num_words));
      }
    CHECK(envelope(v).f_op_max == f);
    CHECK(envelope(v).p_leak_per_bit == doctest::Approx(leak).epsilon(1e-12));
    CHECK(envelope(v).area_per_bit == doctest::Approx(area).epsilon(1e-12));
  }
}

TEST_CASE("feasibility predicate") {
  const LifetimeBin bin{0, 1e-6, 1.0};
  CHECK(dse::feasible(1e9, 1e-5, req(1e-300, {bin}), bin).workable);
  const auto f = dse::feasible(1e9, 1e-5, req(1e15, {bin}), bin);
  CHECK_FALSE(f.workable);
  CHECK(f.tag == Constraint::Frequency);
  CHECK(dse::feasible(1e9, 1e-6, req(1e9, {bin}), bin).workable);
  const auto r = dse::feasible(1e9, 0.5e-6, req(1e8, {bin}), bin);
  CHECK(r.tag == Constraint::Retention);
  const auto both = dse::feasible(1e9, 0.5e-6, req(1e10, {bin}), bin);
  CHECK(both.tag == Constraint::Frequency);
  // A bin's frequency demand is its share of the requirement.
  const LifetimeBin half{0, 1e-6, 0.5};
  CHECK(dse::feasible(1e9, 1e-5, req(2e9, {half, {1e-6, 1e-5, 0.5}}), half).workable);
  CHECK_FALSE(dse::feasible(1e9, 1e-5, req(2.1e9, {half, {1e-6, 1e-5, 0.5}}), half).workable);
}

TEST_CASE("whole-requirement bin") {
  const auto b = dse::whole_requirement_bin(req(1e9, {{0, 1e-6, 0.3}, {1e-3, 2.0, 0.2}, {1e-6, 1e-3, 0.5}}));
  CHECK(b.traffic_share == 1.0);
  CHECK(b.t_max_s == 2.0);
}

TEST_CASE("shmoo rows") {
  const auto& t = default_tech();
  const std::vector<WorkloadRequirement> tasks = {req(1.0, {{0, 1e-6, 1.0}}, 1),
                                                  req(1e15, {{0, 1e-6, 1.0}}, 2)};
  const auto g = dse::shmoo(tasks, kSiSi, t);
  REQUIRE(g.rows.size() == 2);
  CHECK(g.sizes.size() == 16);
  for (const auto& c : g.rows[0].cells) CHECK(c.workable);
  for (const auto& c : g.rows[1].cells) {
    CHECK_FALSE(c.workable);
    CHECK(c.tag == Constraint::Frequency);
  }
}

TEST_CASE("shmoo shows the organization effect") {
  // Frozen from the default technology: Si-Si without LS runs 128x32 at
  // 0.870 GHz and 64x64 at 0.625 GHz (same 4 Kb capacity).
  const auto& t = default_tech();
  const double f_req = 0.75e9;
  const auto g = dse::shmoo({req(f_req, {{0, 1e-6, 1.0}})}, kSiSi, t);
  std::map<std::pair<int, int>, std::size_t> at;
  for (std::size_t i = 0; i < g.sizes.size(); ++i) at[{g.sizes[i].word_size, g.sizes[i].num_words}] = i;
  const auto skew = at.at({128, 32}), square = at.at({64, 64});
  CHECK(g.reports[skew].f_op > f_req);
  CHECK(g.reports[square].f_op < f_req);
  CHECK(g.rows[0].cells[skew].workable);
  CHECK_FALSE(g.rows[0].cells[square].workable);
  CHECK(g.rows[0].cells[square].tag == Constraint::Frequency);
}

TEST_CASE("shmoo cells agree with characterize") {
  const auto& t = default_tech();
  const auto tasks = dse::load_requirements(data_path("sample_profile.json"));
  for (auto v : tech::kAllVariants)
    for (bool ls : {false, true}) {
      const auto g = dse::shmoo(tasks, v, t, ls);
      CHECK(dse::shmoo_json(g) == dse::shmoo_json(dse::shmoo(tasks, v, t, ls)));
      REQUIRE(g.rows.size() == tasks.size());
      for (std::size_t i = 0; i < g.sizes.size(); ++i) {
        const auto report = charlib::characterize(
            make(v, g.sizes[i].word_size, g.sizes[i].num_words, ls && v != kSram), t);
        CHECK(report.f_op == g.reports[i].f_op);
        for (const auto& row : g.rows) {
          const WorkloadRequirement* r = nullptr;
          for (const auto& x : tasks)
            if (x.task_id == row.task_id && x.level == row.level) r = &x;
          REQUIRE(r != nullptr);
          const auto f = dse::feasible(report, *r, dse::whole_requirement_bin(*r));
          CHECK(row.cells[i].workable == f.workable);
          CHECK(row.cells[i].tag == f.tag);
        }
      }
    }
}

TEST_CASE("shmoo CSV") {
  const auto g = dse::shmoo({req(1.0, {{0, 1e-6, 1.0}}, 4)}, kSiSi, default_tech());
  const std::string csv = dse::shmoo_csv(g);
  CHECK(csv.rfind("task_id,task_name,cache_level,16x16,", 0) == 0);
  CHECK(csv.find("\n4,task4,L1,G,") != std::string::npos);
}

TEST_CASE("planner examples") {
  SUBCASE("everything feasible for OS-Si") {
    const auto p = dse::plan_requirement(req(1e8, {{0, 1e-6, 0.5}, {1e-6, 1.0, 0.5}}), envelopes());
    CHECK(p.technologies == std::vector<tech::VariantName>{kOsSi});
  }
  SUBCASE("frequency above both gain-cell envelopes") {
    const auto p = dse::plan_requirement(req(2e9, {{0, 1e-6, 1.0}}), envelopes());
    CHECK(p.technologies == std::vector<tech::VariantName>{kSram});
    REQUIRE(p.bins[0].eliminated.size() == 2);
    CHECK(p.bins[0].eliminated[0].candidate == kOsSi);
    CHECK(p.bins[0].eliminated[0].reason == Constraint::Frequency);
    CHECK(p.bins[0].eliminated[1].candidate == kSiSi);
  }
  SUBCASE("three lifetime regions") {
    // Bins built from the envelopes: the sub-us bin demands more than the
    // Si-Si envelope, the us-ms bin more than OS-Si, and the ms-s bin is
    // light.
    const double f = 3e9;
    const double os = envelope(kOsSi).f_op_max, si = envelope(kSiSi).f_op_max;
    const double s_hi = 0.9 * 5e9 / f, s_mid = 0.5 * (os + si) / f;
    const auto r = req(f, {{1e-9, 1e-6, s_hi}, {1e-6, 1e-3, s_mid}, {1e-3, 1.0, 1.0 - s_hi - s_mid}});
    REQUIRE(f * (1.0 - s_hi - s_mid) < os);
    REQUIRE(f * s_hi > si);
    const auto p = dse::plan_requirement(r, envelopes());
    CHECK(p.technologies == std::vector<tech::VariantName>{kOsSi, kSiSi, kSram});
    CHECK(dse::technologies_label(p.technologies) == "OS-Si GCRAM + Si-Si GCRAM + SRAM");
  }
  SUBCASE("retention binding when no static cell is available") {
    const std::vector<dse::CapabilityEnvelope> gc = {envelope(kOsSi), envelope(kSiSi)};
    try {
      dse::plan_requirement(req(1e6, {{0, 1.0, 0.5}, {1e9, 1e11, 0.5}}, 5, CacheLevel::L2), gc);
      FAIL("expected an infeasible error");
    } catch (const InfeasibleError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("task 5") != std::string::npos);
      CHECK(msg.find("L2") != std::string::npos);
      CHECK(msg.find("bin 1") != std::string::npos);
      CHECK(msg.find("retention") != std::string::npos);
    }
  }
  SUBCASE("frequency binding") {
    try {
      dse::plan_requirement(req(1e12, {{0, 1e-6, 1.0}}), envelopes());
      FAIL("expected an infeasible error");
    } catch (const InfeasibleError& e) {
      CHECK(std::string(e.what()).find("frequency") != std::string::npos);
    }
  }
}

TEST_CASE("planner equals the exhaustive reference on random requirements") {
  std::mt19937_64 rng(20261015);
  int infeasible = 0, multi = 0;
  for (int k = 0; k < 200; ++k) {
    const auto r = random_requirement(rng, k);
    REQUIRE_NOTHROW(dse::validate_requirement(r));
    const auto oracle = brute_force(r, envelopes());
    if (!oracle) {
      CHECK_THROWS_AS(dse::plan_requirement(r, envelopes()), InfeasibleError);
      ++infeasible;
      continue;
    }
    const auto p = dse::plan_requirement(r, envelopes());
    REQUIRE(p.bins.size() == r.bins.size());
    for (std::size_t i = 0; i < r.bins.size(); ++i) CHECK(p.bins[i].technology == oracle->per_bin[i]);
    CHECK(std::set<tech::VariantName>(p.technologies.begin(), p.technologies.end()) == oracle->set);
    if (p.technologies.size() > 1) ++multi;
  }
  // The generator should exercise both outcomes.
  CHECK(infeasible > 0);
  CHECK(multi > 0);
}

TEST_CASE("priority soundness and minimality") {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 200; ++k) {
    const auto r = random_requirement(rng, k);
    bool os_all = true;
    for (const auto& b : r.bins) os_all = os_all && dse::feasible(envelope(kOsSi), r, b).workable;
    std::optional<dse::PlanEntry> p;
    try {
      p = dse::plan_requirement(r, envelopes());
    } catch (const InfeasibleError&) {
      continue;
    }
    if (os_all) CHECK(p->technologies == std::vector<tech::VariantName>{kOsSi});
    // Each member serves at least one bin, so dropping it uncovers that bin.
    for (auto v : p->technologies) {
      int served = 0;
      for (const auto& b : p->bins) served += b.technology == v;
      CHECK(served > 0);
    }
    // No duplicates, priority order.
    for (std::size_t i = 1; i < p->technologies.size(); ++i)
      CHECK(priority(p->technologies[i - 1]) < priority(p->technologies[i]));
    // Each bin's choice is feasible and every earlier candidate was not.
    for (const auto& b : p->bins) {
      CHECK(dse::feasible(envelope(b.technology), r, b.bin).workable);
      for (const auto& e : b.eliminated) CHECK_FALSE(dse::feasible(envelope(e.candidate), r, b.bin).workable);
      CHECK(b.eliminated.size() == static_cast<std::size_t>(priority(b.technology)));
    }
  }
}

TEST_CASE("weakening a requirement never costs more") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  for (int k = 0; k < 200; ++k) {
    const auto r = random_requirement(rng, k);
    std::optional<dse::PlanEntry> p;
    try {
      p = dse::plan_requirement(r, envelopes());
    } catch (const InfeasibleError&) {
      continue;
    }
    auto weak = r;
    weak.f_read_req_hz *= u(rng);
    const double s = u(rng);
    for (auto& b : weak.bins) {
      b.t_min_s *= s;
      b.t_max_s *= s;
    }
    const auto q = dse::plan_requirement(weak, envelopes());
    int worst_p = 0, worst_q = 0;
    for (std::size_t i = 0; i < r.bins.size(); ++i) {
      CHECK(priority(q.bins[i].technology) <= priority(p->bins[i].technology));
      worst_p = std::max(worst_p, priority(p->bins[i].technology));
      worst_q = std::max(worst_q, priority(q.bins[i].technology));
    }
    CHECK(worst_q <= worst_p);
  }
}

TEST_CASE("sample profile plan per task and level") {
  const auto reqs = dse::load_requirements(data_path("sample_profile.json"));
  const auto plan = dse::select_plan(reqs, envelopes());
  REQUIRE(plan.entries.size() == 14);
  const std::string os = "OS-Si GCRAM", si = "Si-Si GCRAM";
  const std::vector<std::pair<std::string, std::string>> expected = {
      {si, os},
      {os, si},
      {os, si + " + SRAM"},
      {si, si + " + SRAM"},
      {os, os},
      {si, si + " + SRAM"},
      {os, os + " + " + si + " + SRAM"},
  };
  for (std::size_t i = 0; i < plan.entries.size(); ++i) {
    const auto& e = plan.entries[i];
    CHECK(e.task_id == static_cast<int>(i / 2) + 1);
    CHECK(e.level == (i % 2 ? CacheLevel::L2 : CacheLevel::L1));
    const auto& want = expected[i / 2];
    CHECK(dse::technologies_label(e.technologies) == (i % 2 ? want.second : want.first));
  }
  const std::string table = dse::emit_plan_table(plan);
  CHECK(std::count(table.begin(), table.end(), '\n') == 8);
  CHECK(table.rfind("Task", 0) == 0);
  CHECK(table.find("L1") != std::string::npos);
  CHECK(table.find("OS-Si GCRAM + Si-Si GCRAM + SRAM") != std::string::npos);
  CHECK(table == dse::emit_plan_table(dse::select_plan(reqs, envelopes())));
  CHECK(dse::plan_json(plan) == dse::plan_json(dse::select_plan(reqs, envelopes())));
}

TEST_CASE("plan ordering and output formats") {
  std::vector<WorkloadRequirement> reqs = {req(2e9, {{0, 1e-6, 1.0}}, 2, CacheLevel::L2),
                                           req(1e8, {{0, 1e-6, 1.0}}, 2, CacheLevel::L1),
                                           req(1e8, {{0, 1e-6, 1.0}}, 1, CacheLevel::L2)};
  const auto plan = dse::select_plan(reqs, envelopes());
  CHECK(plan.entries[0].task_id == 1);
  CHECK(plan.entries[1].level == CacheLevel::L1);
  CHECK(plan.entries[2].level == CacheLevel::L2);
  const std::string table = dse::emit_plan_table(plan);
  CHECK(table.find("\n1     task1  -") != std::string::npos);

  const auto j = nlohmann::json::parse(dse::plan_json(plan));
  REQUIRE(j["plans"].size() == 3);
  const auto& sram = j["plans"][2]["bins"][0];
  CHECK(sram["technology"] == "SRAM");
  CHECK(sram["eliminated"].size() == 2);
  CHECK(sram["eliminated"][0]["constraint"] == "frequency");

  const auto empty = dse::select_plan({}, envelopes());
  CHECK(dse::emit_plan_table(empty) == "Task  Name  L1  L2\n");

  const auto env = nlohmann::json::parse(dse::envelopes_json(envelopes()));
  CHECK(env["envelopes"][2]["t_retention_max_s"].is_null());
}
