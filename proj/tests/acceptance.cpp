// Copyright 2026 The Geoncog Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 when any
// fails. Counts and time limits are the published ones.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>

#include "properties.hpp"

namespace {

const std::filesystem::path kFixtures = GEONCOG_FIXTURE_DIR;

struct Criterion
{
  const char *name;
  double limit_seconds; // 0 = no limit
  std::function<props::Outcome()> run;
};

} // namespace

int main()
{
  const Criterion criteria[] = {
      {"lattice-laws", 60, [] { return props::lattice_laws(1001, 500); }},
      {"heyting-identities", 0, [] { return props::heyting_identities(1002, 500); }},
      {"strategy-composition", 120, [] { return props::strategy_composition(1003, 200, 50); }},
      {"geon-schemes", 0, [] { return props::scheme_suite(1004, 120); }},
      {"worldgen", 0, [] { return props::worldgen_suite(1005, 100); }},
      {"perception", 0, [] { return props::perception_suite(1006, 1000); }},
      {"planner-oracle", 600, [] { return props::planner_equivalence(1007, 600); }},
      {"episodes", 0,
          [] {
            std::vector<std::filesystem::path> configs;
            for (auto name : {"one_object.json", "two_objects.json", "three_objects.json", "boundary.json",
                     "generated.json"})
              configs.push_back(kFixtures / name);
            return props::episode_claims(configs, 1008, 30);
          }},
  };

  int failures = 0;
  for (const auto &c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    props::Outcome out;
    try {
      out = c.run();
    } catch (const std::exception &e) {
      out.fail(std::string("exception: ") + e.what());
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (out.pass && c.limit_seconds > 0 && seconds > c.limit_seconds)
      out.fail("took " + std::to_string(seconds) + " s, limit " + std::to_string(c.limit_seconds) + " s");
    failures += !out.pass;
    std::printf("%s %s (%.2f s): %s\n", out.pass ? "PASS" : "FAIL", c.name, seconds, out.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
