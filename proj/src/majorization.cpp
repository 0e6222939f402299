#include "majoq/majorization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace majoq {

ProbDist::ProbDist(std::vector<double> values, double tol)
    : values_(std::move(values)), tol_(tol) {
  if (values_.empty()) {
    throw std::invalid_argument("ProbDist: empty vector");
  }
  if (tol_ < 0.0) {
    throw std::invalid_argument("ProbDist: negative tolerance");
  }
  double sum = 0.0;
  for (double& v : values_) {
    if (v < -tol_) {
      throw std::invalid_argument("ProbDist: negative entry beyond tolerance");
    }
    v = std::max(v, 0.0);
    sum += v;
  }
  if (std::abs(sum - 1.0) > tol_) {
    throw std::invalid_argument("ProbDist: entries do not sum to 1");
  }
}

std::string to_string(Relation r) {
  switch (r) {
    case Relation::Majorizes:
      return "Majorizes";
    case Relation::ReverselyMajorizes:
      return "ReverselyMajorizes";
    case Relation::Equal:
      return "Equal";
    case Relation::Incomparable:
      return "Incomparable";
  }
  return "Incomparable";
}

std::vector<double> sorted_cumulants(std::span<const double> values) {
  std::vector<double> sorted(values.begin(), values.end());
  std::stable_sort(sorted.begin(), sorted.end(), std::greater<double>());
  double acc = 0.0;
  for (double& v : sorted) {
    acc += v;
    v = acc;
  }
  return sorted;
}

CumulantVector sorted_cumulants(const ProbDist& p) {
  return CumulantVector{sorted_cumulants(std::span<const double>(p.values()))};
}

MajorizationVerdict compare(std::span<const double> p, std::span<const double> q,
                            double tol) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("compare: dimension mismatch");
  }
  const std::vector<double> cp = sorted_cumulants(p);
  const std::vector<double> cq = sorted_cumulants(q);

  MajorizationVerdict v;
  double gap = 0.0;
  for (std::size_t k = 0; k < cp.size(); ++k) {
    const double d = cq[k] - cp[k];
    v.max_over = std::max(v.max_over, d);
    v.max_under = std::max(v.max_under, -d);
    if (std::abs(d) > std::abs(gap)) {
      gap = d;
    }
  }
  v.max_cumulant_gap = gap;

  const bool forward = v.max_under <= tol;   // cum(q) >= cum(p): q majorizes p
  const bool backward = v.max_over <= tol;   // cum(p) >= cum(q)
  if (forward && backward) {
    v.relation = Relation::Equal;
  } else if (forward) {
    v.relation = Relation::Majorizes;
  } else if (backward) {
    v.relation = Relation::ReverselyMajorizes;
  } else {
    v.relation = Relation::Incomparable;
  }
  return v;
}

MajorizationVerdict compare(const ProbDist& p, const ProbDist& q, double tol) {
  return compare(std::span<const double>(p.values()),
                 std::span<const double>(q.values()), tol);
}

double shannon_entropy(std::span<const double> values) {
  double h = 0.0;
  for (double v : values) {
    if (v > 0.0) {
      h -= v * std::log2(v);
    }
  }
  return std::max(h, 0.0);
}

double shannon_entropy(const ProbDist& p) {
  return shannon_entropy(std::span<const double>(p.values()));
}

namespace {

struct SortedView {
  std::vector<double> values;  // decreasing
  std::vector<int> order;      // order[i] = original index of sorted entry i
};

SortedView sort_desc(const std::vector<double>& v) {
  SortedView s;
  s.order.resize(v.size());
  std::iota(s.order.begin(), s.order.end(), 0);
  std::stable_sort(s.order.begin(), s.order.end(),
                   [&](int a, int b) { return v[a] > v[b]; });
  s.values.reserve(v.size());
  for (int i : s.order) {
    s.values.push_back(v[i]);
  }
  return s;
}

}  // namespace

std::optional<StochasticWitness> doubly_stochastic_witness(const ProbDist& p,
                                                           const ProbDist& q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("doubly_stochastic_witness: dimension mismatch");
  }
  const int d = static_cast<int>(p.size());
  const SortedView xs = sort_desc(p.values());
  const SortedView ys = sort_desc(q.values());
  const std::vector<double>& x = xs.values;

  // Repeated pairwise-averaging transforms drive the sorted source onto the
  // sorted target; each transform is doubly stochastic, so the product is too.
  Eigen::MatrixXd D = Eigen::MatrixXd::Identity(d, d);
  std::vector<double> w = ys.values;
  constexpr double kEps = 1e-13;

  for (int iter = 0; iter < 2 * d * d; ++iter) {
    int j = -1;
    for (int i = d - 1; i >= 0; --i) {
      if (w[i] > x[i] + kEps) {
        j = i;
        break;
      }
    }
    if (j < 0) {
      break;  // no surplus left
    }
    int k = -1;
    for (int i = j + 1; i < d; ++i) {
      if (w[i] < x[i] - kEps) {
        k = i;
        break;
      }
    }
    if (k < 0) {
      return std::nullopt;  // surplus without a deficit below it: not majorized
    }
    const double delta = std::min(w[j] - x[j], x[k] - w[k]);
    const double spread = w[j] - w[k];
    if (spread <= kEps) {
      return std::nullopt;
    }
    const double mix = delta / spread;  // 1 - lambda of the averaging transform
    // Row update of D by T = lambda*I + (1-lambda)*Swap(j,k).
    Eigen::RowVectorXd rj = D.row(j);
    Eigen::RowVectorXd rk = D.row(k);
    D.row(j) = (1.0 - mix) * rj + mix * rk;
    D.row(k) = mix * rj + (1.0 - mix) * rk;
    w[j] -= delta;
    w[k] += delta;
  }

  for (int i = 0; i < d; ++i) {
    if (std::abs(w[i] - x[i]) > 1e-10) {
      return std::nullopt;
    }
  }

  // Undo the two sorting permutations: p = (Pp^T D Pq) q.
  Eigen::MatrixXd full = Eigen::MatrixXd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    for (int jj = 0; jj < d; ++jj) {
      full(xs.order[i], ys.order[jj]) = D(i, jj);
    }
  }
  return StochasticWitness{std::move(full), WitnessKind::DoublyStochastic};
}

namespace {

bool find_support_matching(const Eigen::MatrixXd& m, double tol, int row,
                           std::vector<int>& col_of_row,
                           std::vector<bool>& col_used) {
  const int d = static_cast<int>(m.rows());
  if (row == d) {
    return true;
  }
  for (int c = 0; c < d; ++c) {
    if (!col_used[c] && m(row, c) > tol) {
      col_used[c] = true;
      col_of_row[row] = c;
      if (find_support_matching(m, tol, row + 1, col_of_row, col_used)) {
        return true;
      }
      col_used[c] = false;
    }
  }
  return false;
}

}  // namespace

std::vector<PermutationTerm> birkhoff_decompose(const Eigen::MatrixXd& d_matrix,
                                                double tol) {
  const int d = static_cast<int>(d_matrix.rows());
  if (d_matrix.cols() != d) {
    throw std::invalid_argument("birkhoff_decompose: matrix not square");
  }
  if (d > 6) {
    throw std::invalid_argument("birkhoff_decompose: dimension capped at 6");
  }
  Eigen::MatrixXd rem = d_matrix;
  std::vector<PermutationTerm> terms;
  const int max_terms = d * d;
  while (static_cast<int>(terms.size()) < max_terms) {
    if (rem.maxCoeff() <= tol) {
      break;
    }
    std::vector<int> col_of_row(d, -1);
    std::vector<bool> col_used(d, false);
    if (!find_support_matching(rem, tol, 0, col_of_row, col_used)) {
      throw std::runtime_error(
          "birkhoff_decompose: no permutation in the support (matrix not "
          "doubly stochastic?)");
    }
    double weight = rem(0, col_of_row[0]);
    for (int r = 1; r < d; ++r) {
      weight = std::min(weight, rem(r, col_of_row[r]));
    }
    for (int r = 0; r < d; ++r) {
      rem(r, col_of_row[r]) -= weight;
    }
    terms.push_back(PermutationTerm{weight, std::move(col_of_row)});
  }
  return terms;
}

NaturalMajorizationReport natural_majorization_check(
    const Eigen::VectorXcd& before, const Eigen::VectorXcd& after,
    const Eigen::MatrixXcd& step_unitary, double tol) {
  const Eigen::Index n = before.size();
  if (after.size() != n || step_unitary.rows() != n || step_unitary.cols() != n) {
    throw std::invalid_argument("natural_majorization_check: dimension mismatch");
  }
  const Eigen::MatrixXcd gram =
      step_unitary.adjoint() * step_unitary - Eigen::MatrixXcd::Identity(n, n);
  if (gram.cwiseAbs().maxCoeff() > 1e-10) {
    throw std::invalid_argument("natural_majorization_check: matrix not unitary");
  }
  const double consistency = (step_unitary * before - after).cwiseAbs().maxCoeff();
  if (consistency > std::max(tol, 1e-9)) {
    throw std::invalid_argument(
        "natural_majorization_check: step_unitary does not map before to after");
  }

  const Eigen::VectorXd pb = before.cwiseAbs2();
  const Eigen::VectorXd pa = after.cwiseAbs2();
  // |C_ij|^2 with C = U^{-1} = U^dagger, i.e. |U_ji|^2.
  const Eigen::MatrixXd usq = step_unitary.cwiseAbs2();
  const Eigen::VectorXd forward_mix = usq.transpose() * pa;
  const Eigen::VectorXd reverse_mix = usq * pb;

  const double fwd = (pb - forward_mix).cwiseAbs().maxCoeff();
  const double rev = (pa - reverse_mix).cwiseAbs().maxCoeff();
  return NaturalMajorizationReport{fwd <= tol, rev <= tol, fwd};
}

}  // namespace majoq
