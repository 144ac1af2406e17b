// Numeric diagonalisation of the system Hamiltonian in the device (x) wire
// basis |n_D m_W>, index 2*(n-1) + (m-1) with n in {1,2,3}, m in {1,2}.

#include "qtnet/error.hpp"
#include "qtnet/models.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>
#include <sstream>

namespace qtnet {

namespace {

using Matrix6 = Eigen::Matrix<double, 6, 6>;

constexpr int basis(int device, int wire) { return 2 * (device - 1) + (wire - 1); }

Matrix6 device_projector(int n) {
  Matrix6 p = Matrix6::Zero();
  for (int m = 1; m <= 2; ++m) p(basis(n, m), basis(n, m)) = 1.0;
  return p;
}

Matrix6 wire_excited() {
  Matrix6 p = Matrix6::Zero();
  for (int n = 1; n <= 3; ++n) p(basis(n, 2), basis(n, 2)) = 1.0;
  return p;
}

// |1_D><k_D| (x) 1_W
Matrix6 device_lowering(int k) {
  Matrix6 s = Matrix6::Zero();
  for (int m = 1; m <= 2; ++m) s(basis(1, m), basis(k, m)) = 1.0;
  return s;
}

// 1_D (x) |1_W><2_W|
Matrix6 wire_lowering() {
  Matrix6 s = Matrix6::Zero();
  for (int n = 1; n <= 3; ++n) s(basis(n, 1), basis(n, 2)) = 1.0;
  return s;
}

struct Eigenbasis {
  Eigen::Matrix<double, 6, 1> values;
  Matrix6 vectors;  // columns
};

// Eigen-decomposition of H; degenerate clusters are resolved by
// diagonalising the commuting observable K inside each cluster.
Eigenbasis diagonalize(const Matrix6& H, const Matrix6& K) {
  Eigen::SelfAdjointEigenSolver<Matrix6> solver(H);
  Eigenbasis out{solver.eigenvalues(), solver.eigenvectors()};
  const double gap = 1e-9 * std::max(1.0, H.cwiseAbs().maxCoeff());
  int start = 0;
  while (start < 6) {
    int end = start + 1;
    while (end < 6 && out.values(end) - out.values(end - 1) < gap) ++end;
    const int size = end - start;
    if (size > 1) {
      const Eigen::MatrixXd block = out.vectors.middleCols(start, size);
      const Eigen::MatrixXd reduced = block.transpose() * K * block;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> inner(reduced);
      out.vectors.middleCols(start, size) = block * inner.eigenvectors();
    }
    start = end;
  }
  return out;
}

// Assigns numeric eigenvectors to analytic states by eigenvalue and by the
// expectation of K, which separates any accidental degeneracy.
std::array<int, 6> assign(const Eigenbasis& eb, const Matrix6& K,
                          const std::array<double, 6>& analytic,
                          const std::array<double, 6>& analytic_k) {
  std::array<int, 6> map{};
  std::array<bool, 6> used{};
  for (int a = 0; a < 6; ++a) {
    double best = std::numeric_limits<double>::infinity();
    int pick = -1;
    for (int c = 0; c < 6; ++c) {
      if (used[c]) continue;
      const auto v = eb.vectors.col(c);
      const double k = v.dot(K * v);
      const double cost = std::abs(eb.values(c) - analytic[a]) + 10.0 * std::abs(k - analytic_k[a]);
      if (cost < best) {
        best = cost;
        pick = c;
      }
    }
    used[pick] = true;
    map[a] = pick;
  }
  return map;
}

void fill_entries(CrosscheckReport& report, const Eigenbasis& eb, const std::array<int, 6>& map,
                  Bath bath, const Matrix6& lowering,
                  const std::map<std::pair<int, int>, double>& table) {
  for (int i = 1; i <= 6; ++i)
    for (int j = 1; j <= 6; ++j) {
      if (i == j) continue;
      const auto vi = eb.vectors.col(map[i - 1]);
      const auto vj = eb.vectors.col(map[j - 1]);
      const double element = vi.dot(lowering * vj);
      auto it = table.find({i, j});
      const double analytic = it == table.end() ? 0.0 : it->second;
      report.entries.push_back({bath, i, j, analytic, element * element});
    }
}

void finish(CrosscheckReport& report, const Eigenbasis& eb, const std::array<int, 6>& map) {
  for (int a = 0; a < 6; ++a) {
    report.numeric_eigenfrequencies[a] = eb.values(map[a]);
    report.max_eigenfrequency_deviation =
        std::max(report.max_eigenfrequency_deviation,
                 std::abs(report.numeric_eigenfrequencies[a] - report.analytic_eigenfrequencies[a]));
  }
  for (const auto& e : report.entries)
    report.max_coefficient_deviation =
        std::max(report.max_coefficient_deviation, std::abs(e.numeric - e.analytic));
}

}  // namespace

bool CrosscheckReport::passed() const {
  return max_eigenfrequency_deviation <= kEigenfrequencyTolerance &&
         max_coefficient_deviation <= kCoefficientTolerance;
}

void require_agreement(const CrosscheckReport& report) {
  if (report.passed()) return;
  std::ostringstream os;
  os.precision(3);
  os << "analytic tables disagree with numeric diagonalisation: eigenfrequency deviation "
     << report.max_eigenfrequency_deviation << ", coefficient deviation "
     << report.max_coefficient_deviation;
  throw physics_error(os.str());
}

CrosscheckReport eigen_crosscheck(const AbsorptionWireParams& p) {
  if (!(p.g > 0.0)) throw parameter_error("secular approximation invalid: g must be positive");
  const double ww = p.omega_w();

  Matrix6 H = p.omega_c * device_projector(2) + p.omega_h * device_projector(3) +
              ww * wire_excited();
  H(basis(3, 1), basis(2, 2)) = H(basis(2, 2), basis(3, 1)) = p.g;

  // Bare energy at (omega_c, omega_h, omega_w) = (2, 3, 1): conserved by the
  // device-wire exchange and non-degenerate on the uncoupled states.
  const Matrix6 K = 2.0 * device_projector(2) + 3.0 * device_projector(3) + wire_excited();

  const auto k = absorption_coefficients(p.omega_c, p.omega_h, p.delta, p.g);
  CrosscheckReport report;
  report.analytic_eigenfrequencies = k.eigenfrequencies;

  const Eigenbasis eb = diagonalize(H, K);
  const auto map = assign(eb, K, k.eigenfrequencies, {0.0, 1.0, 2.0, 3.0, 3.0, 4.0});

  fill_entries(report, eb, map, Bath::cold, device_lowering(2),
               {{{1, 3}, 1.0}, {{2, 4}, k.c_minus_sq()}, {{2, 5}, k.c_plus_sq()}});
  fill_entries(report, eb, map, Bath::hot, device_lowering(3),
               {{{1, 4}, k.cp_minus_sq()}, {{1, 5}, k.cp_plus_sq()}, {{2, 6}, 1.0}});
  fill_entries(report, eb, map, Bath::work, wire_lowering(),
               {{{1, 2}, 1.0},
                {{3, 4}, k.c_minus_sq()},
                {{3, 5}, k.c_plus_sq()},
                {{4, 6}, k.cp_minus_sq()},
                {{5, 6}, k.cp_plus_sq()}});
  finish(report, eb, map);
  require_agreement(report);
  return report;
}

CrosscheckReport eigen_crosscheck(const DrivenWireParams& p) {
  if (!(p.g > 0.0) || !(p.lambda > 0.0)) throw parameter_error("g and lambda must be positive");

  Matrix6 H = Matrix6::Zero();
  H(basis(3, 1), basis(2, 2)) = H(basis(2, 2), basis(3, 1)) = p.g;
  for (int n = 1; n <= 3; ++n) H(basis(n, 2), basis(n, 1)) = H(basis(n, 1), basis(n, 2)) = p.lambda;

  // Device ground-state projector commutes with the rotating-frame Hamiltonian.
  const Matrix6 K = device_projector(1);

  const auto k = driven_coefficients(p.g, p.lambda);
  CrosscheckReport report;
  report.analytic_eigenfrequencies = k.eigenfrequencies;

  const Eigenbasis eb = diagonalize(H, K);
  const auto map = assign(eb, K, k.eigenfrequencies, {1.0, 1.0, 0.0, 0.0, 0.0, 0.0});

  fill_entries(report, eb, map, Bath::cold, device_lowering(2), k.c_sq);
  fill_entries(report, eb, map, Bath::hot, device_lowering(3), k.c_sq);
  finish(report, eb, map);
  require_agreement(report);
  return report;
}

}  // namespace qtnet
