// Copyright 2026 The Geoncog Authors
// SPDX-License-Identifier: Apache-2.0

// geoncog: scene generation, exploration runs, trace replay and schema-store
// inspection.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 replay mismatch.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "geoncog/scenario.hpp"

namespace {

using namespace geoncog;

constexpr int kUsage = 1;
constexpr int kData = 2;
constexpr int kMismatch = 3;

std::string slurp(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw scenario::ScenarioError(scenario::ErrorKind::ParseError, "cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const std::string &path, const std::string &text)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text))
    throw scenario::ScenarioError(scenario::ErrorKind::ParseError, "cannot write " + path);
}

int cmd_generate(std::uint64_t seed, std::size_t objects, const std::string &mix, const std::string &out,
    bool expand)
{
  auto weights = mix.empty() ? worldgen::ClassMix{} : worldgen::parse_mix(mix);
  auto scene = worldgen::generate_scene(seed, objects, weights);
  worldgen::save_scene(scene, out, expand);
  std::size_t geon_count = 0;
  for (const auto &o : scene.objects)
    geon_count += o.geons.size();
  std::cout << "wrote " << out << ": " << scene.objects.size() << " objects, " << geon_count << " geons\n";
  return 0;
}

int cmd_run(const std::string &config_path, const std::string &trace_out, const std::string &db_path)
{
  auto config = scenario::load_config(config_path);
  auto result = explorer::run_episode(config.scene, config.explorer);
  write_text(trace_out, scenario::trace_text(result.trace));

  std::size_t saturated = 0;
  for (const auto &[id, b] : result.final_state.beliefs)
    saturated += b.phase == explorer::Phase::Saturated;
  std::cout << "steps " << result.trace.size() << ", objects discovered " << result.final_state.beliefs.size()
            << ", saturated " << saturated << ", ended by "
            << (result.termination == explorer::Termination::NoGoals ? "no goals" : "step limit") << "\n";

  if (!db_path.empty()) {
    auto db = geons::SchemaStore::open(db_path);
    for (const auto &[from, to] : db.merge(result.deltas))
      std::cout << from << " -> " << to << "\n";
    db.save(db_path);
  }
  return 0;
}

int cmd_replay(const std::string &trace_path, const std::string &config_path)
{
  auto config = scenario::load_config(config_path);
  auto report = scenario::replay(config, slurp(trace_path));
  if (report.match) {
    std::cout << "MATCH\n";
    return 0;
  }
  std::cout << "MISMATCH at line " << report.first_difference << ": " << report.detail << "\n";
  return kMismatch;
}

int cmd_inspect(const std::string &db_path)
{
  auto db = geons::SchemaStore::open(db_path);
  std::cout << db.records().size() << " object types\n";
  for (const auto &[type, rec] : db.records()) {
    std::cout << type << ": " << rec.schemes.size() << " schemes, " << rec.cumulative_geons.size() << " geons\n";
    for (const auto &s : rec.schemes)
      std::cout << "  " << s << "\n";
  }
  return 0;
}

} // namespace

int main(int argc, char **argv)
{
  CLI::App app{"Geon-scheme exploration simulator"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  std::size_t objects = 3;
  std::string mix, out, config, trace, db;
  bool expand = false;

  auto *gen = app.add_subcommand("generate", "Generate a scene file");
  gen->add_option("--seed", seed, "Scene seed")->required();
  gen->add_option("--objects", objects, "Number of objects")->check(CLI::PositiveNumber);
  gen->add_option("--mix", mix, "Class weights, e.g. tree=2,wall=1,stairs=1,primitive=1");
  gen->add_option("--out", out, "Output scene file")->required();
  gen->add_flag("--expand", expand, "Embed the expanded geons");

  auto *run = app.add_subcommand("run", "Run an exploration episode");
  run->add_option("--config", config, "Scenario config")->required();
  run->add_option("--trace-out", trace, "Trace output (one JSON event per line)")->required();
  run->add_option("--db", db, "Schema store to update");

  auto *rep = app.add_subcommand("replay", "Re-run an episode and compare with a recorded trace");
  rep->add_option("--trace", trace, "Recorded trace")->required();
  rep->add_option("--config", config, "Scenario config")->required();

  auto *ins = app.add_subcommand("inspect", "List the object types in a schema store");
  ins->add_option("--db", db, "Schema store")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (gen->parsed())
      return cmd_generate(seed, objects, mix, out, expand);
    if (run->parsed())
      return cmd_run(config, trace, db);
    if (rep->parsed())
      return cmd_replay(trace, config);
    return cmd_inspect(db);
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  }
}
