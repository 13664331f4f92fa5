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
#include "gcmc/dse.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <limits>
#include <set>
#include <sstream>

#include "gcmc/error.hpp"
#include "json.hpp"

namespace gcmc::dse {

namespace {

using nlohmann::ordered_json;

constexpr double kShareTolerance = 1e-9;
constexpr int kGridSizes[] = {16, 32, 64, 128, 256};
constexpr int kShmooSizes[] = {16, 32, 64, 128};

std::string context(const WorkloadRequirement& r) {
  return fmt::format("task {} ({}) {}", r.task_id, r.task_name, to_string(r.level));
}

ordered_json nullable(double v) {
  return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr);
}

ordered_json tag_json(Constraint c) {
  return c == Constraint::None ? ordered_json(nullptr) : ordered_json(std::string(to_string(c)));
}

std::vector<SizePoint> square_grid(const int* begin, const int* end) {
  std::vector<SizePoint> g;
  for (const int* wz = begin; wz != end; ++wz)
    for (const int* nw = begin; nw != end; ++nw) g.push_back({*wz, *nw});
  return g;
}

}  // namespace

std::string_view to_string(CacheLevel level) { return level == CacheLevel::L1 ? "L1" : "L2"; }

std::string_view to_string(Constraint c) {
  switch (c) {
    case Constraint::None: return "none";
    case Constraint::Frequency: return "frequency";
    case Constraint::Retention: return "retention";
  }
  return "?";
}

std::string technologies_label(const std::vector<tech::VariantName>& techs) {
  std::string out;
  for (auto v : techs) {
    if (!out.empty()) out += " + ";
    out += tech::display_name(v);
  }
  return out;
}

void validate_requirement(const WorkloadRequirement& r) {
  auto fail = [&](const char* rule, const std::string& msg) {
    throw InvariantError(rule, context(r) + ": " + msg);
  };
  if (!(r.f_read_req_hz > 0.0) || !std::isfinite(r.f_read_req_hz))
    fail("read-frequency", "f_read_req_hz must be > 0");
  if (r.bins.empty()) fail("lifetime-bins", "at least one lifetime bin is required");
  double sum = 0.0;
  for (std::size_t i = 0; i < r.bins.size(); ++i) {
    const auto& b = r.bins[i];
    if (!(b.t_min_s >= 0.0) || !(b.t_min_s < b.t_max_s))
      fail("bin-interval", fmt::format("bin {} needs 0 <= t_min < t_max, got [{}, {}]", i,
                                       b.t_min_s, b.t_max_s));
    if (!(b.traffic_share >= 0.0 && b.traffic_share <= 1.0))
      fail("traffic-share", fmt::format("bin {} traffic_share {} outside [0, 1]", i,
                                        b.traffic_share));
    sum += b.traffic_share;
  }
  if (std::abs(sum - 1.0) > kShareTolerance)
    fail("traffic-share-sum", fmt::format("traffic shares sum to {}, expected 1", sum));
  std::vector<LifetimeBin> sorted = r.bins;
  std::sort(sorted.begin(), sorted.end(),
            [](const LifetimeBin& a, const LifetimeBin& b) { return a.t_min_s < b.t_min_s; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].t_min_s < sorted[i - 1].t_max_s)
      fail("bin-overlap", fmt::format("bins [{}, {}] and [{}, {}] overlap", sorted[i - 1].t_min_s,
                                      sorted[i - 1].t_max_s, sorted[i].t_min_s,
                                      sorted[i].t_max_s));
}

std::vector<WorkloadRequirement> parse_requirements(std::string_view text,
                                                    const std::string& source) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(source, 0, "", e.what());
  }
  const ordered_json* list = &doc;
  if (doc.is_object()) {
    if (!doc.contains("requirements"))
      throw ParseError(source, 0, "requirements", "missing 'requirements' array");
    list = &doc["requirements"];
  }
  if (!list->is_array()) throw ParseError(source, 0, "requirements", "expected an array");

  std::vector<WorkloadRequirement> out;
  std::set<std::pair<int, CacheLevel>> seen;
  for (std::size_t i = 0; i < list->size(); ++i) {
    const auto& item = (*list)[i];
    const std::string where = fmt::format("requirements[{}]", i);
    auto field = [&](const char* key) -> const ordered_json& {
      if (!item.is_object() || !item.contains(key))
        throw ParseError(source, 0, key, where + ": missing field");
      return item.at(key);
    };
    auto number = [&](const ordered_json& j, const std::string& key) {
      if (!j.is_number()) throw ParseError(source, 0, key, where + ": expected a number");
      return j.get<double>();
    };
    WorkloadRequirement r;
    const auto& id = field("task_id");
    if (!id.is_number_integer()) throw ParseError(source, 0, "task_id", where + ": expected an integer");
    r.task_id = id.get<int>();
    const auto& name = field("task_name");
    if (!name.is_string()) throw ParseError(source, 0, "task_name", where + ": expected a string");
    r.task_name = name.get<std::string>();
    const auto& level = field("cache_level");
    if (level == "L1") r.level = CacheLevel::L1;
    else if (level == "L2") r.level = CacheLevel::L2;
    else throw ParseError(source, 0, "cache_level", where + ": expected \"L1\" or \"L2\"");
    r.f_read_req_hz = number(field("f_read_req_hz"), "f_read_req_hz");
    const auto& bins = field("lifetime_bins");
    if (!bins.is_array()) throw ParseError(source, 0, "lifetime_bins", where + ": expected an array");
    for (std::size_t k = 0; k < bins.size(); ++k) {
      const auto& b = bins[k];
      const std::string bw = fmt::format("lifetime_bins[{}]", k);
      if (!b.is_object() || !b.contains("t_min_s") || !b.contains("t_max_s") ||
          !b.contains("traffic_share"))
        throw ParseError(source, 0, bw, where + ": bin needs t_min_s, t_max_s, traffic_share");
      r.bins.push_back({number(b["t_min_s"], bw + ".t_min_s"),
                        number(b["t_max_s"], bw + ".t_max_s"),
                        number(b["traffic_share"], bw + ".traffic_share")});
    }
    validate_requirement(r);
    if (!seen.insert({r.task_id, r.level}).second)
      throw InvariantError("duplicate-requirement", context(r) + ": defined twice");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<WorkloadRequirement> load_requirements(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open requirements file '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_requirements(buf.str(), path.string());
}

std::vector<SizePoint> size_grid() {
  return square_grid(std::begin(kGridSizes), std::end(kGridSizes));
}

std::vector<SizePoint> shmoo_axis() {
  return square_grid(std::begin(kShmooSizes), std::end(kShmooSizes));
}

CapabilityEnvelope build_envelope(tech::VariantName variant, const tech::TechnologyModel& tech,
                                  const std::vector<SizePoint>& grid) {
  CapabilityEnvelope e;
  e.variant = variant;
  e.p_leak_per_bit = std::numeric_limits<double>::infinity();
  e.area_per_bit = std::numeric_limits<double>::infinity();
  const bool gc = variant != tech::VariantName::SRAM6T;
  for (const auto& s : grid) {
    for (bool ls : {false, true}) {
      if (ls && !gc) continue;
      MacroConfig c;
      c.variant = variant;
      c.ls = ls;
      c.word_size = s.word_size;
      c.num_words = s.num_words;
      c = resolve(c);
      const auto f = charlib::max_frequency(c, tech);
      e.f_op_max = std::max(e.f_op_max, std::min(f.f_read_max, f.f_write_max));
      const double bits = c.capacity_bits();
      e.p_leak_per_bit = std::min(e.p_leak_per_bit, charlib::leakage_power(c, tech) / bits);
      e.area_per_bit =
          std::min(e.area_per_bit, floorplan::bank_area(c, tech).total_area / bits);
    }
  }
  if (gc) {
    const auto v = tech::bitcell_lookup(tech, variant, false);
    e.t_retention_min = charlib::retention_solve(v, tech, 0.0).failure_time;
    const auto v_ls = tech::bitcell_lookup(tech, variant, true);
    e.t_retention_max =
        charlib::retention_solve(v_ls, tech, tech.timing.delta_vt_max).failure_time;
  } else {
    e.t_retention_min = e.t_retention_max = std::numeric_limits<double>::infinity();
  }
  return e;
}

Feasibility feasible(double f_op, double t_retention, const WorkloadRequirement& req,
                     const LifetimeBin& bin) {
  const bool freq_ok = f_op >= req.f_read_req_hz * bin.traffic_share;
  const bool ret_ok = t_retention >= bin.t_max_s;
  if (!freq_ok) return {false, Constraint::Frequency};
  if (!ret_ok) return {false, Constraint::Retention};
  return {true, Constraint::None};
}

Feasibility feasible(const charlib::CharReport& report, const WorkloadRequirement& req,
                     const LifetimeBin& bin) {
  return feasible(report.f_op, report.t_retention, req, bin);
}

Feasibility feasible(const CapabilityEnvelope& env, const WorkloadRequirement& req,
                     const LifetimeBin& bin) {
  return feasible(env.f_op_max, env.t_retention_max, req, bin);
}

LifetimeBin whole_requirement_bin(const WorkloadRequirement& req) {
  LifetimeBin b{0.0, 0.0, 1.0};
  for (const auto& x : req.bins) b.t_max_s = std::max(b.t_max_s, x.t_max_s);
  return b;
}

ShmooGrid shmoo(const std::vector<WorkloadRequirement>& tasks, tech::VariantName variant,
                const tech::TechnologyModel& tech, bool ls, const std::vector<SizePoint>& sizes) {
  ShmooGrid g;
  g.variant = variant;
  g.ls = ls && variant != tech::VariantName::SRAM6T;
  g.sizes = sizes;
  std::vector<std::future<charlib::CharReport>> jobs;
  for (const auto& s : sizes) {
    MacroConfig c;
    c.variant = variant;
    c.ls = g.ls;
    c.word_size = s.word_size;
    c.num_words = s.num_words;
    jobs.push_back(std::async(std::launch::async,
                              [c, &tech] { return charlib::characterize(c, tech); }));
  }
  // Merged in axis order, so the result does not depend on scheduling.
  for (auto& j : jobs) g.reports.push_back(j.get());

  std::vector<const WorkloadRequirement*> order;
  for (const auto& t : tasks) order.push_back(&t);
  std::stable_sort(order.begin(), order.end(), [](const auto* a, const auto* b) {
    return std::pair(a->task_id, a->level) < std::pair(b->task_id, b->level);
  });
  for (const auto* t : order) {
    ShmooRow row{t->task_id, t->task_name, t->level, t->f_read_req_hz, 0.0, {}};
    const LifetimeBin whole = whole_requirement_bin(*t);
    row.t_max_s = whole.t_max_s;
    for (const auto& r : g.reports) {
      const auto f = feasible(r, *t, whole);
      row.cells.push_back({f.workable, f.tag});
    }
    g.rows.push_back(std::move(row));
  }
  return g;
}

PlanEntry plan_requirement(const WorkloadRequirement& req,
                           const std::vector<CapabilityEnvelope>& envelopes) {
  PlanEntry p{req.task_id, req.task_name, req.level, req.f_read_req_hz, {}, {}};
  std::vector<const CapabilityEnvelope*> ranked;
  for (auto v : tech::kAllVariants)
    for (const auto& e : envelopes)
      if (e.variant == v) {
        ranked.push_back(&e);
        break;
      }
  if (ranked.empty()) throw InfeasibleError(context(req) + ": no capability envelopes given");

  std::set<tech::VariantName> used;
  for (std::size_t i = 0; i < req.bins.size(); ++i) {
    const auto& bin = req.bins[i];
    BinChoice choice{bin, req.f_read_req_hz * bin.traffic_share, tech::VariantName::OSSiGC, {}};
    bool placed = false;
    for (const auto* e : ranked) {
      const auto f = feasible(*e, req, bin);
      if (f.workable) {
        choice.technology = e->variant;
        placed = true;
        break;
      }
      choice.eliminated.push_back({e->variant, f.tag});
    }
    if (!placed) {
      const auto binding = choice.eliminated.back().reason;
      throw InfeasibleError(fmt::format(
          "{}: lifetime bin {} [{} s, {} s] (share {}) cannot be served; binding constraint: {} "
          "(demand {} Hz)",
          context(req), i, bin.t_min_s, bin.t_max_s, bin.traffic_share, to_string(binding),
          choice.demand_hz));
    }
    used.insert(choice.technology);
    p.bins.push_back(std::move(choice));
  }
  for (auto v : tech::kAllVariants)
    if (used.count(v)) p.technologies.push_back(v);
  return p;
}

HeterogeneousPlan select_plan(const std::vector<WorkloadRequirement>& requirements,
                              const std::vector<CapabilityEnvelope>& envelopes) {
  HeterogeneousPlan plan;
  for (const auto& r : requirements) plan.entries.push_back(plan_requirement(r, envelopes));
  std::stable_sort(plan.entries.begin(), plan.entries.end(),
                   [](const PlanEntry& a, const PlanEntry& b) {
                     return std::pair(a.task_id, a.level) < std::pair(b.task_id, b.level);
                   });
  return plan;
}

std::string emit_plan_table(const HeterogeneousPlan& plan) {
  struct Row {
    std::string id, name, l1 = "-", l2 = "-";
  };
  std::vector<Row> rows;
  for (const auto& e : plan.entries) {
    if (rows.empty() || rows.back().id != std::to_string(e.task_id))
      rows.push_back({std::to_string(e.task_id), e.task_name});
    (e.level == CacheLevel::L1 ? rows.back().l1 : rows.back().l2) =
        technologies_label(e.technologies);
  }
  std::size_t w_id = 4, w_name = 4, w_l1 = 2;
  for (const auto& r : rows) {
    w_id = std::max(w_id, r.id.size());
    w_name = std::max(w_name, r.name.size());
    w_l1 = std::max(w_l1, r.l1.size());
  }
  std::string out = fmt::format("{:<{}}  {:<{}}  {:<{}}  {}\n", "Task", w_id, "Name", w_name,
                                "L1", w_l1, "L2");
  for (const auto& r : rows)
    out += fmt::format("{:<{}}  {:<{}}  {:<{}}  {}\n", r.id, w_id, r.name, w_name, r.l1, w_l1,
                       r.l2);
  return out;
}

std::string plan_json(const HeterogeneousPlan& plan) {
  ordered_json entries = ordered_json::array();
  for (const auto& e : plan.entries) {
    ordered_json j;
    j["task_id"] = e.task_id;
    j["task_name"] = e.task_name;
    j["cache_level"] = std::string(to_string(e.level));
    j["f_read_req_hz"] = e.f_read_req_hz;
    ordered_json techs = ordered_json::array();
    for (auto v : e.technologies) techs.push_back(std::string(tech::display_name(v)));
    j["technologies"] = techs;
    j["label"] = technologies_label(e.technologies);
    ordered_json bins = ordered_json::array();
    for (const auto& b : e.bins) {
      ordered_json jb;
      jb["t_min_s"] = b.bin.t_min_s;
      jb["t_max_s"] = b.bin.t_max_s;
      jb["traffic_share"] = b.bin.traffic_share;
      jb["demand_hz"] = b.demand_hz;
      jb["technology"] = std::string(tech::display_name(b.technology));
      ordered_json trace = ordered_json::array();
      for (const auto& el : b.eliminated)
        trace.push_back({{"candidate", std::string(tech::display_name(el.candidate))},
                         {"constraint", std::string(to_string(el.reason))}});
      jb["eliminated"] = trace;
      bins.push_back(jb);
    }
    j["bins"] = bins;
    entries.push_back(j);
  }
  ordered_json doc;
  doc["plans"] = entries;
  return doc.dump(2) + "\n";
}

std::string shmoo_json(const ShmooGrid& g) {
  ordered_json doc;
  doc["variant"] = std::string(tech::cli_name(g.variant));
  doc["ls"] = g.ls;
  ordered_json sizes = ordered_json::array();
  for (std::size_t i = 0; i < g.sizes.size(); ++i) {
    const auto& r = g.reports[i];
    sizes.push_back({{"word_size", g.sizes[i].word_size},
                     {"num_words", g.sizes[i].num_words},
                     {"column_mux", r.config.column_mux},
                     {"f_op_hz", r.f_op},
                     {"t_retention_s", nullable(r.t_retention)}});
  }
  doc["sizes"] = sizes;
  ordered_json rows = ordered_json::array();
  for (const auto& row : g.rows) {
    ordered_json cells = ordered_json::array();
    for (const auto& c : row.cells)
      cells.push_back({{"workable", c.workable}, {"tag", tag_json(c.tag)}});
    rows.push_back({{"task_id", row.task_id},
                    {"task_name", row.task_name},
                    {"cache_level", std::string(to_string(row.level))},
                    {"f_read_req_hz", row.f_read_req_hz},
                    {"t_max_s", row.t_max_s},
                    {"cells", cells}});
  }
  doc["tasks"] = rows;
  return doc.dump(2) + "\n";
}

std::string shmoo_csv(const ShmooGrid& g) {
  std::string out = "task_id,task_name,cache_level";
  for (const auto& s : g.sizes) out += fmt::format(",{}x{}", s.word_size, s.num_words);
  out += '\n';
  for (const auto& row : g.rows) {
    std::string name = row.task_name;
    if (name.find_first_of(",\"") != std::string::npos) {
      std::string quoted = "\"";
      for (char ch : name) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      name = quoted + "\"";
    }
    out += fmt::format("{},{},{}", row.task_id, name, to_string(row.level));
    for (const auto& c : row.cells) out += c.workable ? ",G" : fmt::format(",R:{}", to_string(c.tag));
    out += '\n';
  }
  return out;
}

std::string envelopes_json(const std::vector<CapabilityEnvelope>& envelopes) {
  ordered_json arr = ordered_json::array();
  for (const auto& e : envelopes)
    arr.push_back({{"variant", std::string(tech::cli_name(e.variant))},
                   {"f_op_max_hz", e.f_op_max},
                   {"t_retention_min_s", nullable(e.t_retention_min)},
                   {"t_retention_max_s", nullable(e.t_retention_max)},
                   {"p_leak_per_bit_w", e.p_leak_per_bit},
                   {"area_per_bit_um2", e.area_per_bit}});
  ordered_json doc;
  doc["envelopes"] = arr;
  return doc.dump(2) + "\n";
}

}  // namespace gcmc::dse
