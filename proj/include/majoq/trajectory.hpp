#pragma once

#include <optional>
#include <string>
#include <vector>

#include "majoq/majorization.hpp"

namespace majoq {

enum class Direction { Majorize, ReverseMajorize };

/// Pairwise verdicts over consecutive snapshots, scored against a declared
/// expected direction. Equal never counts as a violation.
struct ArrowReport {
  Direction expected = Direction::Majorize;
  std::vector<MajorizationVerdict> verdicts;  // one per transition
  int violation_count = 0;
  std::vector<int> violation_steps;  // transition indices
  double max_violation_gap = 0.0;    // largest wrong-direction cumulant gap
  std::vector<double> entropy_curve;  // one per snapshot, bits
};

struct CycleReport {
  // Transitions [0, turnaround_step) scored as reverse majorization,
  // [turnaround_step, transitions) as majorization.
  int turnaround_step = 0;
  double turnaround_fraction = 0.0;
  bool is_clean_cycle = false;
  int violation_count = 0;  // at the best split
};

ArrowReport step_verdicts(const std::vector<std::vector<double>>& dists,
                          double tol, Direction expected);

/// Chooses the split that minimizes total violations with the prefix scored
/// as reverse majorization and the suffix as majorization. Ties resolve to
/// the midpoint of the minimizing plateau.
CycleReport detect_cycle(const std::vector<std::vector<double>>& dists,
                         double tol);

struct TraceSummary {
  std::string experiment;
  ArrowReport arrow;
  std::optional<CycleReport> cycle;
};

struct HistogramRow {
  std::string experiment;
  int violation_count = 0;
  double max_cumulant_gap = 0.0;
  bool has_cycle_report = false;
  bool is_clean_cycle = false;
};

std::vector<HistogramRow> violation_histogram(
    const std::vector<TraceSummary>& reports);

/// Index of the first local maximum of values above min_height, or nullopt.
std::optional<int> first_peak_index(const std::vector<double>& values,
                                    double min_height);

}  // namespace majoq
