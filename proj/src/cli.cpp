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
#include "gcmc/cli.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "gcmc/charlib.hpp"
#include "gcmc/dse.hpp"
#include "gcmc/error.hpp"
#include "gcmc/floorplan.hpp"
#include "gcmc/macro_config.hpp"
#include "gcmc/netgen.hpp"
#include "gcmc/netlist.hpp"
#include "gcmc/technology.hpp"
#include "json.hpp"

#ifndef GCMC_DEFAULT_TECH
#define GCMC_DEFAULT_TECH "default.tech"
#endif

namespace gcmc::cli {

namespace fs = std::filesystem;

namespace {

struct RunConfig {
  std::string tech_path;
  std::string output_dir = "out";
  std::vector<std::string> overrides;
  std::string variant = "sisi-gc";
  int word_size = 32;
  int num_words = 32;
  int num_banks = 1;
  bool ls = false;
  std::string mux = "auto";
  double delta_vt = 0.0;
  std::string requirements_path;
};

class Session {
 public:
  Session(const RunConfig& rc, std::ostream& out, std::ostream& err)
      : rc_(rc), out_(out), err_(err) {}

  void gen() {
    const auto c = config();
    const auto n = netgen::generate_macro(c, tech());
    const auto report = netlist::connectivity_check(n);
    write(config_stem(c) + ".conn.json", connectivity_json(c, n, report));
    if (!report.pass)
      throw ConnectivityError(fmt::format("{}: {} connectivity violation(s), first: {} on net {} in {}",
                                          top_name(c), report.violations.size(),
                                          report.violations.front().rule,
                                          report.violations.front().net,
                                          report.violations.front().subckt));
    write(config_stem(c) + ".sp", netlist::emit_spice(n));
    write(config_stem(c) + ".v", netgen::emit_verilog_model(c));
    write(config_stem(c) + ".lef", floorplan::emit_lef_abstract(c, tech(), n));
  }

  void characterize() {
    const auto c = config();
    const auto report = charlib::characterize(c, tech(), rc_.delta_vt);
    write(config_stem(c) + ".char.json", charlib::report_json(report));
    write(config_stem(c) + ".lib", charlib::emit_liberty_summary(report, c, tech()));
    write(config_stem(c) + ".area.json", floorplan::area_report_json(report.area));
  }

  void shmoo() {
    const auto variant = tech::parse_variant_name(rc_.variant);
    bool ls = rc_.ls;
    if (ls && variant == tech::VariantName::SRAM6T) {
      warn("--ls is ignored for sram6t");
      ls = false;
    }
    const auto grid = dse::shmoo(requirements(), variant, tech(), ls);
    const std::string stem = fmt::format("shmoo_{}{}", tech::cli_name(variant), ls ? "_ls" : "");
    write(stem + ".json", dse::shmoo_json(grid));
    write(stem + ".csv", dse::shmoo_csv(grid));
  }

  void plan() {
    std::vector<dse::CapabilityEnvelope> envelopes;
    for (auto v : tech::kAllVariants)
      envelopes.push_back(dse::build_envelope(v, tech(), dse::size_grid()));
    write("envelopes.json", dse::envelopes_json(envelopes));
    const auto p = dse::select_plan(requirements(), envelopes);
    const std::string table = dse::emit_plan_table(p);
    write("plan.txt", table);
    write("plan.json", dse::plan_json(p));
    out_ << table;
  }

 private:
  const tech::TechnologyModel& tech() {
    if (!tech_) {
      std::ifstream in(rc_.tech_path, std::ios::binary);
      if (!in) throw IoError("cannot open technology file '" + rc_.tech_path + "'");
      std::stringstream buf;
      buf << in.rdbuf();
      tech_ = tech::parse_technology(buf.str(), rc_.tech_path, rc_.overrides);
    }
    return *tech_;
  }

  const std::vector<dse::WorkloadRequirement>& requirements() {
    if (rc_.requirements_path.empty())
      throw InvalidConfigError("--requirements is required for this subcommand");
    if (!requirements_) requirements_ = dse::load_requirements(rc_.requirements_path);
    return *requirements_;
  }

  MacroConfig config() {
    if (config_) return *config_;
    MacroConfig c;
    c.variant = tech::parse_variant_name(rc_.variant);
    c.ls = rc_.ls;
    c.word_size = rc_.word_size;
    c.num_words = rc_.num_words;
    c.num_banks = rc_.num_banks;
    if (rc_.mux == "auto") {
      c.column_mux = 0;
    } else {
      try {
        std::size_t used = 0;
        c.column_mux = std::stoi(rc_.mux, &used);
        if (used != rc_.mux.size()) throw std::invalid_argument(rc_.mux);
      } catch (const std::logic_error&) {
        throw InvalidConfigError("--mux must be an integer or 'auto', got '" + rc_.mux + "'");
      }
      if (c.column_mux <= 0)
        throw InvalidConfigError("--mux must be positive, got " + rc_.mux);
    }
    std::string warning;
    config_ = resolve(c, &warning);
    if (!warning.empty()) warn(warning);
    return *config_;
  }

  std::string connectivity_json(const MacroConfig& c, const netlist::Netlist& n,
                                const netlist::ConnectivityReport& r) {
    nlohmann::ordered_json doc;
    doc["top"] = top_name(c);
    doc["config"] = config_key(c);
    doc["pass"] = r.pass;
    auto violations = nlohmann::ordered_json::array();
    for (const auto& v : r.violations)
      violations.push_back(
          {{"subckt", v.subckt}, {"net", v.net}, {"rule", v.rule}, {"detail", v.detail}});
    doc["violations"] = violations;
    nlohmann::ordered_json counts = nlohmann::ordered_json::object();
    for (const auto& [name, count] : netlist::flat_instance_counts(n)) counts[name] = count;
    doc["instance_counts"] = counts;
    return doc.dump(2) + "\n";
  }

  void write(const std::string& name, const std::string& content) {
    const fs::path dir(rc_.output_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
    const fs::path path = dir / name;
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot write '" + path.string() + "'");
    f << content;
    if (!f) throw IoError("write failed for '" + path.string() + "'");
    out_ << "wrote " << path.string() << "\n";
  }

  void warn(const std::string& msg) {
    if (warned_.insert(msg).second) err_ << "gcmc: warning: " << msg << "\n";
  }

  RunConfig rc_;
  std::ostream& out_;
  std::ostream& err_;
  std::optional<tech::TechnologyModel> tech_;
  std::optional<std::vector<dse::WorkloadRequirement>> requirements_;
  std::optional<MacroConfig> config_;
  std::set<std::string> warned_;
};

void add_common(CLI::App* sub, RunConfig& rc) {
  sub->add_option("--tech", rc.tech_path, "Technology file")->envname("GCMC_TECH");
  sub->add_option("--out,-o", rc.output_dir, "Output directory")->capture_default_str();
  sub->add_option("--set", rc.overrides, "Technology override section.key=value (repeatable)")
      ->take_all();
}

void add_macro(CLI::App* sub, RunConfig& rc) {
  sub->add_option("--variant", rc.variant, "sisi-gc | ossi-gc | sram6t")
      ->capture_default_str();
  sub->add_option("--wz", rc.word_size, "Word size in bits")->capture_default_str();
  sub->add_option("--nw", rc.num_words, "Number of words")->capture_default_str();
  sub->add_option("--banks", rc.num_banks, "Number of banks")->capture_default_str();
  sub->add_flag("--ls", rc.ls, "Write-wordline level shifter (GC only)");
  sub->add_option("--mux", rc.mux, "Column mux ratio or 'auto'")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig rc;
  CLI::App app{"Gain-cell and SRAM memory macro compiler", "gcmc"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("gen", "Generate SPICE, Verilog, LEF and a connectivity report");
  auto* chr = app.add_subcommand("char", "Characterize a macro: JSON report, Liberty summary, area");
  auto* shm = app.add_subcommand("shmoo", "Shmoo grid of workable macro sizes per task");
  auto* pln = app.add_subcommand("plan", "Heterogeneous L1/L2 technology plan per task");
  auto* all = app.add_subcommand("all", "Run gen, char, shmoo and plan");
  for (auto* sub : {gen, chr, shm, pln, all}) add_common(sub, rc);
  for (auto* sub : {gen, chr, shm, all}) add_macro(sub, rc);
  for (auto* sub : {chr, all})
    sub->add_option("--delta-vt", rc.delta_vt, "Write-transistor threshold shift in V")
        ->capture_default_str();
  for (auto* sub : {shm, pln, all})
    sub->add_option("--requirements", rc.requirements_path, "Workload requirements JSON")
        ->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "gcmc: error[usage] " << msg << "\n";
    return kExitError;
  }
  if (rc.tech_path.empty()) rc.tech_path = GCMC_DEFAULT_TECH;

  try {
    Session s(rc, out, err);
    if (gen->parsed()) s.gen();
    if (chr->parsed()) s.characterize();
    if (shm->parsed()) s.shmoo();
    if (pln->parsed()) s.plan();
    if (all->parsed()) {
      s.gen();
      s.characterize();
      s.shmoo();
      s.plan();
    }
  } catch (const InfeasibleError& e) {
    err << "gcmc: error[" << e.kind() << "] " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const Error& e) {
    std::string msg = e.what();
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    err << "gcmc: error[" << e.kind() << "] " << msg << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "gcmc: error[internal] " << e.what() << "\n";
    return kExitError;
  }
  return kExitOk;
}

}  // namespace gcmc::cli
