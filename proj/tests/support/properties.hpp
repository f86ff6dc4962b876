// Copyright 2026 The Geoncog Authors
// SPDX-License-Identifier: Apache-2.0

// Property suites shared by the unit tests (small counts) and the acceptance
// runner (full counts). Each returns the first failure it meets plus a short
// tally.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace props {

struct Outcome
{
  bool pass = true;
  std::string detail;

  void fail(const std::string &why)
  {
    if (pass)
      detail = why;
    pass = false;
  }
};

Outcome lattice_laws(std::uint64_t seed, std::size_t n_lattices);
Outcome heyting_identities(std::uint64_t seed, std::size_t n_lattices);
Outcome strategy_composition(std::uint64_t seed, std::size_t n_winning, std::size_t n_laws);
Outcome scheme_suite(std::uint64_t seed, std::size_t n_schemes);
Outcome worldgen_suite(std::uint64_t seed, std::size_t n_scenes);
Outcome perception_suite(std::uint64_t seed, std::size_t n_calls);
Outcome planner_equivalence(std::uint64_t seed, std::size_t min_cases);

// Scenario files (config JSON) plus `n_generated` seeded 1–3 object scenes.
Outcome episode_claims(const std::vector<std::filesystem::path> &configs, std::uint64_t seed,
    std::size_t n_generated);

} // namespace props
