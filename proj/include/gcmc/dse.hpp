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

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "gcmc/charlib.hpp"
#include "gcmc/technology.hpp"

namespace gcmc::dse {

enum class CacheLevel { L1, L2 };

struct LifetimeBin {
  double t_min_s = 0.0;
  double t_max_s = 0.0;
  double traffic_share = 0.0;
};

struct WorkloadRequirement {
  int task_id = 0;
  std::string task_name;
  CacheLevel level = CacheLevel::L1;
  double f_read_req_hz = 0.0;
  std::vector<LifetimeBin> bins;
};

/// Throws ParseError / InvariantError with the task context in the message.
std::vector<WorkloadRequirement> parse_requirements(std::string_view json_text,
                                                    const std::string& source = "<requirements>");
std::vector<WorkloadRequirement> load_requirements(const std::filesystem::path& path);
void validate_requirement(const WorkloadRequirement& req);

struct SizePoint {
  int word_size = 0;
  int num_words = 0;
};

/// {16..256} x {16..256}, 25 points.
std::vector<SizePoint> size_grid();
/// {16..128} x {16..128}, 16 points.
std::vector<SizePoint> shmoo_axis();

struct CapabilityEnvelope {
  tech::VariantName variant = tech::VariantName::SiSiGC;
  double f_op_max = 0.0;        // Hz, over the grid and both LS settings
  double t_retention_min = 0.0;  // s, no LS, delta_vt = 0
  double t_retention_max = 0.0;  // s, LS (GC), delta_vt = delta_vt_max
  double p_leak_per_bit = 0.0;   // W
  double area_per_bit = 0.0;     // um^2
};

CapabilityEnvelope build_envelope(tech::VariantName variant, const tech::TechnologyModel& tech,
                                  const std::vector<SizePoint>& grid);

enum class Constraint { None, Frequency, Retention };

struct Feasibility {
  bool workable = false;
  Constraint tag = Constraint::None;  // frequency is reported first when both fail
};

/// Frequency demand of a bin is f_read_req * traffic_share. Both
/// inequalities are closed.
Feasibility feasible(double f_op, double t_retention, const WorkloadRequirement& req,
                     const LifetimeBin& bin);
Feasibility feasible(const charlib::CharReport& report, const WorkloadRequirement& req,
                     const LifetimeBin& bin);
Feasibility feasible(const CapabilityEnvelope& env, const WorkloadRequirement& req,
                     const LifetimeBin& bin);

/// The single bin a Shmoo cell is judged against: the full read frequency
/// and the longest lifetime of the requirement.
LifetimeBin whole_requirement_bin(const WorkloadRequirement& req);

struct ShmooCell {
  bool workable = false;
  Constraint tag = Constraint::None;
};

struct ShmooRow {
  int task_id = 0;
  std::string task_name;
  CacheLevel level = CacheLevel::L1;
  double f_read_req_hz = 0.0;
  double t_max_s = 0.0;
  std::vector<ShmooCell> cells;  // parallel to ShmooGrid::sizes
};

struct ShmooGrid {
  tech::VariantName variant = tech::VariantName::SiSiGC;
  bool ls = false;
  std::vector<SizePoint> sizes;
  std::vector<charlib::CharReport> reports;  // parallel to sizes
  std::vector<ShmooRow> rows;
};

/// Characterizes the size axis concurrently, then judges every task.
ShmooGrid shmoo(const std::vector<WorkloadRequirement>& tasks, tech::VariantName variant,
                const tech::TechnologyModel& tech, bool ls = false,
                const std::vector<SizePoint>& sizes = shmoo_axis());

struct Elimination {
  tech::VariantName candidate;
  Constraint reason;
};

struct BinChoice {
  LifetimeBin bin;
  double demand_hz = 0.0;
  tech::VariantName technology = tech::VariantName::OSSiGC;
  std::vector<Elimination> eliminated;
};

struct PlanEntry {
  int task_id = 0;
  std::string task_name;
  CacheLevel level = CacheLevel::L1;
  double f_read_req_hz = 0.0;
  std::vector<tech::VariantName> technologies;  // priority order, no duplicates
  std::vector<BinChoice> bins;
};

struct HeterogeneousPlan {
  std::vector<PlanEntry> entries;  // sorted by task_id, then level
};

/// Per bin, the first technology in priority order (OS-Si, Si-Si, SRAM)
/// whose envelope is feasible. Throws InfeasibleError naming the bin and
/// the binding constraint.
PlanEntry plan_requirement(const WorkloadRequirement& req,
                           const std::vector<CapabilityEnvelope>& envelopes);
HeterogeneousPlan select_plan(const std::vector<WorkloadRequirement>& requirements,
                              const std::vector<CapabilityEnvelope>& envelopes);

std::string emit_plan_table(const HeterogeneousPlan& plan);
std::string plan_json(const HeterogeneousPlan& plan);
std::string shmoo_json(const ShmooGrid& grid);
std::string shmoo_csv(const ShmooGrid& grid);
std::string envelopes_json(const std::vector<CapabilityEnvelope>& envelopes);

std::string_view to_string(CacheLevel level);
std::string_view to_string(Constraint c);
/// "OS-Si GCRAM + Si-Si GCRAM"
std::string technologies_label(const std::vector<tech::VariantName>& techs);

}  // namespace gcmc::dse
