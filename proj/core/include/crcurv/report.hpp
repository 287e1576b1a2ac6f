#pragma once

// Assembly of a run's results into a stable JSON document. The struct is a
// passive container: subcommands fill in whichever sections they produced
// and render_report_json emits them in a fixed key order, so identical runs
// produce byte-identical reports.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "crcurv/bubbles.hpp"
#include "crcurv/criterion.hpp"
#include "crcurv/flow.hpp"
#include "crcurv/sphere.hpp"

namespace crcurv {

struct RunReport {
  std::string mode;
  std::string k_description;
  std::uint64_t seed = 0;
  int refine = 64;

  std::optional<Calibration> calibration;
  std::vector<CriticalPointRecord> critical_points;  // empty = section absent
  std::optional<C0Verdict> c0;
  std::optional<AbstractCriticalData> abstract;  // supplies labels for tuples
  std::optional<CriterionReport> criterion;
  std::optional<ExpansionReport> expansion;
  std::vector<double> green_gaps;           // reproduction defects (verify)
  std::vector<TrajectoryRecord> trajectories;
  std::vector<std::string> warnings;
};

// One-line reading of a criterion report: "exists; morse <= k; count >= n"
// or "criterion inconclusive".
std::string criterion_conclusion(const CriterionReport& c);

// schema_version 1; two-space indent, LF newlines, trailing newline.
std::string render_report_json(const RunReport& rep);

}  // namespace crcurv
