// Copyright 2026 The Geoncog Authors
// SPDX-License-Identifier: Apache-2.0

#include <sstream>

#include "geoncog/scenario.hpp"

namespace geoncog::scenario {

std::string trace_text(const std::vector<explorer::TraceEvent> &trace)
{
  std::string out;
  for (const auto &e : trace)
    out += explorer::trace_line(e);
  return out;
}

ReplayReport replay(const ScenarioConfig &config, const std::string &recorded_trace)
{
  auto fresh = trace_text(explorer::run_episode(config.scene, config.explorer).trace);
  ReplayReport report;
  if (fresh == recorded_trace) {
    report.match = true;
    return report;
  }
  std::istringstream a(recorded_trace), b(fresh);
  std::string la, lb;
  for (std::size_t line = 1;; ++line) {
    bool more_a = static_cast<bool>(std::getline(a, la));
    bool more_b = static_cast<bool>(std::getline(b, lb));
    if (!more_a && !more_b) {
      report.first_difference = line;
      report.detail = "traces differ in line endings";
      break;
    }
    if (more_a != more_b || la != lb) {
      report.first_difference = line;
      report.detail = !more_a ? "recorded trace ends early" : !more_b ? "recorded trace has extra events"
                                                                      : "event differs";
      break;
    }
  }
  return report;
}

} // namespace geoncog::scenario
