#include "majoq/adiabatic.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace majoq {

namespace {

// Search Hamiltonian restricted to span{|m>, uniform-over-rest}.
Eigen::Matrix2d search_reduced_hamiltonian(int n_entries, double s) {
  const double c = 1.0 / std::sqrt(static_cast<double>(n_entries));
  const double r = std::sqrt(1.0 - c * c);
  Eigen::Matrix2d proj0;
  proj0 << c * c, c * r, c * r, r * r;
  Eigen::Matrix2d projm;
  projm << 1.0, 0.0, 0.0, 0.0;
  return Eigen::Matrix2d::Identity() - (1.0 - s) * proj0 - s * projm;
}

Eigen::Matrix2d search_reduced_drive(int n_entries) {
  const double c = 1.0 / std::sqrt(static_cast<double>(n_entries));
  const double r = std::sqrt(1.0 - c * c);
  Eigen::Matrix2d drive;  // Hp - H0 = |psi0><psi0| - |m><m|
  drive << c * c - 1.0, c * r, c * r, r * r;
  return drive;
}

}  // namespace

HamiltonianSpec HamiltonianSpec::search(int n_entries, std::uint64_t marked) {
  if (n_entries < 2) {
    throw std::invalid_argument("HamiltonianSpec::search: N must be >= 2");
  }
  if (marked >= static_cast<std::uint64_t>(n_entries)) {
    throw std::invalid_argument("HamiltonianSpec::search: marked out of range");
  }
  HamiltonianSpec spec;
  spec.kind = Kind::Search;
  spec.dim = n_entries;
  spec.marked = marked;
  return spec;
}

HamiltonianSpec HamiltonianSpec::ring_of_agrees(int n_bits) {
  if (n_bits < 3 || n_bits > 20) {
    throw std::invalid_argument("HamiltonianSpec::ring_of_agrees: need 3 <= n <= 20");
  }
  HamiltonianSpec spec;
  spec.kind = Kind::RingOfAgrees;
  spec.ring_bits = n_bits;
  spec.dim = 1 << n_bits;
  return spec;
}

int ring_violations(std::uint64_t assignment, int n_bits) {
  int count = 0;
  for (int j = 0; j < n_bits; ++j) {
    const int bit = static_cast<int>((assignment >> j) & 1);
    const int next = static_cast<int>((assignment >> ((j + 1) % n_bits)) & 1);
    count += bit != next;
  }
  return count;
}

Eigen::MatrixXd HamiltonianSpec::h0() const {
  if (kind == Kind::Search) {
    const double inv_n = 1.0 / dim;
    return Eigen::MatrixXd::Identity(dim, dim) -
           Eigen::MatrixXd::Constant(dim, dim, inv_n);
  }
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
  for (int z = 0; z < dim; ++z) {
    h(z, z) = 0.5 * ring_bits;
    for (int j = 0; j < ring_bits; ++j) {
      h(z, z ^ (1 << j)) = -0.5;
    }
  }
  return h;
}

Eigen::MatrixXd HamiltonianSpec::hp() const {
  if (kind == Kind::Search) {
    Eigen::MatrixXd h = Eigen::MatrixXd::Identity(dim, dim);
    h(static_cast<Eigen::Index>(marked), static_cast<Eigen::Index>(marked)) = 0.0;
    return h;
  }
  return hp_diagonal().asDiagonal();
}

Eigen::VectorXd HamiltonianSpec::hp_diagonal() const {
  if (kind != Kind::RingOfAgrees) {
    throw std::invalid_argument("hp_diagonal: only defined for RingOfAgrees");
  }
  Eigen::VectorXd d(dim);
  for (int z = 0; z < dim; ++z) {
    d(z) = ring_violations(static_cast<std::uint64_t>(z), ring_bits);
  }
  return d;
}

Eigen::MatrixXd HamiltonianSpec::hamiltonian(double s) const {
  return (1.0 - s) * h0() + s * hp();
}

double HamiltonianSpec::ground_subspace_probability(
    const std::vector<double>& dist) const {
  if (static_cast<int>(dist.size()) != dim) {
    throw std::invalid_argument("ground_subspace_probability: dimension mismatch");
  }
  if (kind == Kind::Search) {
    return dist[marked];
  }
  return dist.front() + dist.back();  // all-zeros and all-ones strings
}

double local_schedule_time(double s, int n_entries, double epsilon) {
  if (s < 0.0 || s > 1.0) {
    throw std::invalid_argument("local_schedule_time: s outside [0, 1]");
  }
  if (n_entries < 2 || epsilon <= 0.0) {
    throw std::invalid_argument("local_schedule_time: need N >= 2 and epsilon > 0");
  }
  const double root = std::sqrt(static_cast<double>(n_entries - 1));
  return 0.5 / epsilon * (n_entries / root) *
         (std::atan(root * (2.0 * s - 1.0)) + std::atan(root));
}

Schedule Schedule::linear(double total_time) {
  if (total_time <= 0.0) {
    throw std::invalid_argument("Schedule::linear: total time must be positive");
  }
  Schedule sched;
  sched.kind_ = Kind::Linear;
  sched.total_time_ = total_time;
  return sched;
}

Schedule Schedule::local_search(int n_entries, double epsilon,
                                bool asymptotic_total) {
  Schedule sched;
  sched.kind_ = Kind::LocalSearch;
  sched.n_entries_ = n_entries;
  sched.epsilon_ = epsilon;
  sched.exact_total_ = local_schedule_time(1.0, n_entries, epsilon);
  sched.total_time_ =
      asymptotic_total
          ? std::numbers::pi * std::sqrt(static_cast<double>(n_entries)) /
                (2.0 * epsilon)
          : sched.exact_total_;
  return sched;
}

double Schedule::s_of_t(double t) const {
  if (t < -1e-12 || t > total_time_ * (1.0 + 1e-12)) {
    throw std::invalid_argument("Schedule::s_of_t: t outside [0, T]");
  }
  if (kind_ == Kind::Linear) {
    return std::clamp(t / total_time_, 0.0, 1.0);
  }
  // Bracketed bisection on the strictly increasing t(s).
  const double target = std::clamp(t * exact_total_ / total_time_, 0.0, exact_total_);
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 64; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (local_schedule_time(mid, n_entries_, epsilon_) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double Schedule::dsdt_at(double t) const {
  if (kind_ == Kind::Linear) {
    return 1.0 / total_time_;
  }
  const double s = s_of_t(t);
  const double u = 2.0 * s - 1.0;
  const double base =
      epsilon_ * (1.0 + (n_entries_ - 1) * u * u) / n_entries_;
  return base * exact_total_ / total_time_;
}

double instantaneous_gap(const HamiltonianSpec& spec, double s) {
  if (s < 0.0 || s > 1.0) {
    throw std::invalid_argument("instantaneous_gap: s outside [0, 1]");
  }
  if (spec.kind == HamiltonianSpec::Kind::Search) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(
        search_reduced_hamiltonian(spec.dim, s));
    return solver.eigenvalues()(1) - solver.eigenvalues()(0);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(spec.hamiltonian(s));
  return solver.eigenvalues()(1) - solver.eigenvalues()(0);
}

double adiabatic_lhs(const HamiltonianSpec& spec, const Schedule& schedule,
                     double t) {
  const double s = schedule.s_of_t(t);
  const double dsdt = schedule.dsdt_at(t);
  double element = 0.0;
  double gap = 0.0;
  if (spec.kind == HamiltonianSpec::Kind::Search) {
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(
        search_reduced_hamiltonian(spec.dim, s));
    gap = solver.eigenvalues()(1) - solver.eigenvalues()(0);
    element = std::abs(solver.eigenvectors().col(1).dot(
        search_reduced_drive(spec.dim) * solver.eigenvectors().col(0)));
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(spec.hamiltonian(s));
    gap = solver.eigenvalues()(1) - solver.eigenvalues()(0);
    const Eigen::MatrixXd drive = spec.hp() - spec.h0();
    element = std::abs(solver.eigenvectors().col(1).dot(
        drive * solver.eigenvectors().col(0)));
  }
  const double g2 = gap * gap;
  if (g2 < 1e-300) {
    return std::numeric_limits<double>::infinity();
  }
  return std::abs(dsdt) * element / g2;
}

namespace {

struct Recorder {
  const HamiltonianSpec& spec;
  const Schedule& schedule;
  EvolutionTrace& trace;

  void operator()(double t, const std::vector<double>& dist) const {
    EvolutionRecord rec;
    rec.t = t;
    rec.dist = dist;
    rec.p_plus = spec.ground_subspace_probability(dist);
    rec.gap = instantaneous_gap(spec, schedule.s_of_t(t));
    rec.adiabatic_lhs = adiabatic_lhs(spec, schedule, t);
    trace.records.push_back(std::move(rec));
  }
};

}  // namespace

EvolutionTrace evolve(const HamiltonianSpec& spec, const Schedule& schedule,
                      double dt, int snapshot_stride) {
  if (dt <= 0.0) {
    throw std::invalid_argument("evolve: dt must be positive");
  }
  if (snapshot_stride < 1) {
    throw std::invalid_argument("evolve: stride must be >= 1");
  }
  const double total = schedule.total_time();
  const int dim = spec.dim;

  Eigen::VectorXcd psi = Eigen::VectorXcd::Constant(
      dim, 1.0 / std::sqrt(static_cast<double>(dim)));

  EvolutionTrace trace;
  Recorder record{spec, schedule, trace};
  auto dist_of = [&] {
    std::vector<double> d(dim);
    for (int i = 0; i < dim; ++i) {
      d[i] = std::norm(psi(i));
    }
    return d;
  };

  record(0.0, dist_of());
  const std::complex<double> imag_unit(0.0, 1.0);
  int step = 0;
  double t = 0.0;
  while (t < total - 1e-12) {
    const double h = std::min(dt, total - t);
    const double s_mid = schedule.s_of_t(t + 0.5 * h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(spec.hamiltonian(s_mid));
    const Eigen::VectorXcd phases =
        (-imag_unit * h * solver.eigenvalues().array()).exp().matrix();
    psi = solver.eigenvectors() *
          (phases.array() * (solver.eigenvectors().transpose() * psi).array())
              .matrix();
    t += h;
    ++step;
    trace.norm_drift = std::max(trace.norm_drift, std::abs(psi.norm() - 1.0));
    if (step % snapshot_stride == 0 || t >= total - 1e-12) {
      record(t, dist_of());
    }
  }
  return trace;
}

EvolutionTrace evolve_search_reduced(const HamiltonianSpec& spec,
                                     const Schedule& schedule, double dt,
                                     int snapshot_stride) {
  if (spec.kind != HamiltonianSpec::Kind::Search) {
    throw std::invalid_argument(
        "evolve_search_reduced: only the search problem has the invariant "
        "two-dimensional subspace");
  }
  if (dt <= 0.0) {
    throw std::invalid_argument("evolve_search_reduced: dt must be positive");
  }
  if (snapshot_stride < 1) {
    throw std::invalid_argument("evolve_search_reduced: stride must be >= 1");
  }
  const double total = schedule.total_time();
  const int dim = spec.dim;
  const double c = 1.0 / std::sqrt(static_cast<double>(dim));

  Eigen::Vector2cd psi(c, std::sqrt(1.0 - c * c));

  EvolutionTrace trace;
  Recorder record{spec, schedule, trace};
  auto dist_of = [&] {
    std::vector<double> d(dim, std::norm(psi(1)) / (dim - 1));
    d[spec.marked] = std::norm(psi(0));
    return d;
  };

  record(0.0, dist_of());
  const std::complex<double> imag_unit(0.0, 1.0);
  int step = 0;
  double t = 0.0;
  while (t < total - 1e-12) {
    const double h = std::min(dt, total - t);
    const double s_mid = schedule.s_of_t(t + 0.5 * h);
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> solver(
        search_reduced_hamiltonian(dim, s_mid));
    const Eigen::Vector2cd phases =
        (-imag_unit * h * solver.eigenvalues().array()).exp().matrix();
    psi = solver.eigenvectors() *
          (phases.array() * (solver.eigenvectors().transpose() * psi).array())
              .matrix();
    t += h;
    ++step;
    trace.norm_drift = std::max(trace.norm_drift, std::abs(psi.norm() - 1.0));
    if (step % snapshot_stride == 0 || t >= total - 1e-12) {
      record(t, dist_of());
    }
  }
  return trace;
}

}  // namespace majoq
