#pragma once

// Concrete devices as rate graphs.
//
//  * absorption wire: three-level device, two-level wire to a thermal work
//    bath (6 states, 11 edges)
//  * driven wire: same device, wire driven by a resonant classical field
//    (6 states, 16 edges in 8 parallel c/h pairs)
//  * appendix three-level: directly driven three-level device (3 states,
//    4 edges)
//  * direct three-level: three-level absorption refrigerator coupled to
//    all three baths without a wire (3 states, 3 edges)
//
// Rates use bosonic baths of dimension d with spectral coupling gamma:
// Gamma(w) = gamma w^d (N(w) + 1), Gamma(-w) = Gamma(w) exp(-w/T).

#include "qtnet/graph.hpp"

#include <array>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace qtnet {

struct BoseRates {
  double emission;    // Gamma_{+w}
  double absorption;  // Gamma_{-w}
};

/// Throws ErrorKind::parameter for omega <= 0 or a non-thermal bath.
BoseRates bose_rate(double omega, const BathSpec& bath);

BathSpec thermal_bath(Bath label, double temperature, int dimension = 3, double coupling = 1e-6);

struct AbsorptionWireParams {
  double omega_c = 0.5;
  double omega_h = 1.0;
  double delta = 0.0;  // omega_h - omega_c - omega_w
  double g = 0.05;
  BathSpec cold = thermal_bath(Bath::cold, 9.0);
  BathSpec hot = thermal_bath(Bath::hot, 10.0);
  BathSpec work = thermal_bath(Bath::work, 20.0);

  double omega_w() const { return omega_h - omega_c - delta; }
};

struct DrivenWireParams {
  double omega_c = 0.5;
  double omega_h = 1.0;
  double g = 0.25;
  double lambda = 0.05;
  BathSpec cold = thermal_bath(Bath::cold, 9.0);
  BathSpec hot = thermal_bath(Bath::hot, 10.0);

  double omega_w() const { return omega_h - omega_c; }  // resonant drive
};

struct AppendixParams {
  double omega_c = 0.5;
  double omega_h = 1.0;
  double lambda = 0.05;
  BathSpec cold = thermal_bath(Bath::cold, 9.0);
  BathSpec hot = thermal_bath(Bath::hot, 10.0);
};

struct DirectParams {
  double omega_c = 0.5;
  double omega_h = 1.0;
  BathSpec cold = thermal_bath(Bath::cold, 9.0);
  BathSpec hot = thermal_bath(Bath::hot, 10.0);
  BathSpec work = thermal_bath(Bath::work, 20.0);
};

/// Mixing of the device-wire doublet (states 4, 5) for the absorption wire.
struct AbsorptionCoefficients {
  std::array<double, 6> eigenfrequencies{};
  double c_plus = 0.0, c_minus = 0.0;    // c_+-
  double cp_plus = 0.0, cp_minus = 0.0;  // c'_+-
  double c_plus_sq() const { return c_plus * c_plus; }
  double c_minus_sq() const { return c_minus * c_minus; }
  double cp_plus_sq() const { return cp_plus * cp_plus; }
  double cp_minus_sq() const { return cp_minus * cp_minus; }
};

struct DrivenCoefficients {
  std::array<double, 6> eigenfrequencies{};
  double u_plus = 0.0, u_minus = 0.0;
  /// |c_ij|^2 for i in {1,2}, j in {3..6}; shared by both baths.
  std::map<std::pair<int, int>, double> c_sq;
  double at(int i, int j) const { return c_sq.at({i, j}); }
};

template <typename Coefficients>
struct BuiltModel {
  RateGraph graph;
  Coefficients coefficients;
  std::vector<std::string> warnings;
};

AbsorptionCoefficients absorption_coefficients(double omega_c, double omega_h, double delta,
                                               double g);
DrivenCoefficients driven_coefficients(double g, double lambda);

/// Throws ErrorKind::parameter with "secular approximation invalid" for
/// g <= 0, and for any nonpositive transition quantum.
BuiltModel<AbsorptionCoefficients> build_absorption_wire(const AbsorptionWireParams& p);

/// Throws ErrorKind::parameter when some omega_alpha + omega_ij <= 0.
BuiltModel<DrivenCoefficients> build_driven_wire(const DrivenWireParams& p);

/// Throws ErrorKind::parameter unless 0 < lambda < omega_c < omega_h.
RateGraph build_appendix_three_level(const AppendixParams& p);

/// Throws ErrorKind::parameter unless 0 < omega_c < omega_h.
RateGraph build_direct_three_level(const DirectParams& p);

// ---------------------------------------------------------------------------
// Numeric diagonalisation cross-check of the analytic coefficient tables.

struct CrosscheckEntry {
  Bath bath;
  int i;
  int j;
  double analytic;  // |c|^2 from the closed form, 0 where no edge exists
  double numeric;   // |<i|S_-|j>|^2 in the numeric eigenbasis
};

struct CrosscheckReport {
  std::array<double, 6> analytic_eigenfrequencies{};
  std::array<double, 6> numeric_eigenfrequencies{};
  std::vector<CrosscheckEntry> entries;
  double max_eigenfrequency_deviation = 0.0;
  double max_coefficient_deviation = 0.0;
  bool passed() const;
};

inline constexpr double kCoefficientTolerance = 1e-10;
inline constexpr double kEigenfrequencyTolerance = 1e-12;

/// Diagonalises the 6x6 system Hamiltonian in the device (x) wire product
/// basis and compares matrix elements of the bath lowering operators with
/// the analytic tables. Throws ErrorKind::physics on mismatch.
CrosscheckReport eigen_crosscheck(const AbsorptionWireParams& p);
CrosscheckReport eigen_crosscheck(const DrivenWireParams& p);

/// Numeric side of the check, exposed so tests can feed it a perturbed
/// analytic table; throws on mismatch like the above.
void require_agreement(const CrosscheckReport& report);

// ---------------------------------------------------------------------------

using ModelSpec = std::variant<AbsorptionWireParams, DrivenWireParams, AppendixParams, DirectParams>;

enum class ModelKind { absorption_wire, driven_wire, appendix_three_level, direct_three_level };

ModelKind model_kind(const ModelSpec& spec);
std::string_view model_name(ModelKind k);

RateGraph build_graph(const ModelSpec& spec);
double omega_c_of(const ModelSpec& spec);
ModelSpec with_omega_c(ModelSpec spec, double omega_c);

}  // namespace qtnet
