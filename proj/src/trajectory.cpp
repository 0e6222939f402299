#include "majoq/trajectory.hpp"

#include <algorithm>
#include <stdexcept>

namespace majoq {

namespace {

bool violates(const MajorizationVerdict& v, Direction expected) {
  switch (v.relation) {
    case Relation::Equal:
      return false;
    case Relation::Incomparable:
      return true;
    case Relation::Majorizes:
      return expected == Direction::ReverseMajorize;
    case Relation::ReverselyMajorizes:
      return expected == Direction::Majorize;
  }
  return true;
}

double wrong_direction_gap(const MajorizationVerdict& v, Direction expected) {
  return expected == Direction::Majorize ? v.max_under : v.max_over;
}

}  // namespace

ArrowReport step_verdicts(const std::vector<std::vector<double>>& dists,
                          double tol, Direction expected) {
  if (dists.size() < 2) {
    throw std::invalid_argument("step_verdicts: need at least two snapshots");
  }
  const std::size_t d = dists.front().size();
  for (const auto& row : dists) {
    if (row.size() != d) {
      throw std::invalid_argument("step_verdicts: dimension drift across snapshots");
    }
  }

  ArrowReport report;
  report.expected = expected;
  report.entropy_curve.reserve(dists.size());
  for (const auto& row : dists) {
    report.entropy_curve.push_back(shannon_entropy(row));
  }
  report.verdicts.reserve(dists.size() - 1);
  for (std::size_t i = 0; i + 1 < dists.size(); ++i) {
    MajorizationVerdict v = compare(dists[i], dists[i + 1], tol);
    if (violates(v, expected)) {
      ++report.violation_count;
      report.violation_steps.push_back(static_cast<int>(i));
      report.max_violation_gap =
          std::max(report.max_violation_gap, wrong_direction_gap(v, expected));
    }
    report.verdicts.push_back(v);
  }
  return report;
}

CycleReport detect_cycle(const std::vector<std::vector<double>>& dists,
                         double tol) {
  if (dists.size() < 3) {
    throw std::invalid_argument("detect_cycle: need at least three snapshots");
  }
  const int transitions = static_cast<int>(dists.size()) - 1;
  std::vector<int> viol_reverse(transitions), viol_forward(transitions);
  for (int i = 0; i < transitions; ++i) {
    const MajorizationVerdict v = compare(dists[i], dists[i + 1], tol);
    viol_reverse[i] = violates(v, Direction::ReverseMajorize) ? 1 : 0;
    viol_forward[i] = violates(v, Direction::Majorize) ? 1 : 0;
  }
  // prefix_rev[k] = violations in [0, k) scored as reverse.
  std::vector<int> prefix_rev(transitions + 1, 0), suffix_fwd(transitions + 1, 0);
  for (int i = 0; i < transitions; ++i) {
    prefix_rev[i + 1] = prefix_rev[i] + viol_reverse[i];
  }
  for (int i = transitions - 1; i >= 0; --i) {
    suffix_fwd[i] = suffix_fwd[i + 1] + viol_forward[i];
  }
  int best_cost = transitions + 1;
  int lo = 0, hi = 0;
  for (int k = 0; k <= transitions; ++k) {
    const int cost = prefix_rev[k] + suffix_fwd[k];
    if (cost < best_cost) {
      best_cost = cost;
      lo = hi = k;
    } else if (cost == best_cost && hi == k - 1) {
      hi = k;  // extend the first minimizing plateau
    }
  }
  CycleReport report;
  report.turnaround_step = (lo + hi) / 2;
  report.turnaround_fraction =
      static_cast<double>(report.turnaround_step) / transitions;
  report.violation_count = best_cost;
  report.is_clean_cycle = best_cost == 0;
  return report;
}

std::vector<HistogramRow> violation_histogram(
    const std::vector<TraceSummary>& reports) {
  if (reports.empty()) {
    throw std::invalid_argument("violation_histogram: empty collection");
  }
  std::vector<HistogramRow> rows;
  rows.reserve(reports.size());
  for (const TraceSummary& r : reports) {
    HistogramRow row;
    row.experiment = r.experiment;
    row.violation_count = r.arrow.violation_count;
    row.max_cumulant_gap = r.arrow.max_violation_gap;
    row.has_cycle_report = r.cycle.has_value();
    row.is_clean_cycle = r.cycle.has_value() && r.cycle->is_clean_cycle;
    rows.push_back(std::move(row));
  }
  return rows;
}

std::optional<int> first_peak_index(const std::vector<double>& values,
                                    double min_height) {
  for (std::size_t i = 1; i + 1 < values.size(); ++i) {
    if (values[i] >= min_height && values[i] >= values[i - 1] &&
        values[i] > values[i + 1]) {
      return static_cast<int>(i);
    }
  }
  return std::nullopt;
}

}  // namespace majoq
