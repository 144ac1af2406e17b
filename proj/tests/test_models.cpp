#include "qtnet/error.hpp"
#include "qtnet/models.hpp"
#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace qtnet;
using qtnet::test::kSeed;
using qtnet::test::rel_diff;

TEST_SUITE("models") {

TEST_CASE("bose rate against a 40-digit evaluation") {
  // gamma = 1e-6, d = 3, omega = 1, T = 10.
  const auto r = bose_rate(1.0, thermal_bath(Bath::cold, 10.0));
  CHECK(rel_diff(r.emission, 1.050833194477504962404607731024735696691e-5) < 1e-14);
  CHECK(rel_diff(r.absorption, 9.508331944775049624046077310247356966912e-6) < 1e-14);
}

TEST_CASE("bose rate at vanishing temperature") {
  const auto r = bose_rate(1.0, thermal_bath(Bath::cold, 1e-3));
  CHECK(r.emission == doctest::Approx(1e-6).epsilon(1e-15));
  CHECK(r.absorption == 0.0);
}

TEST_CASE("property: rate ratio is the Boltzmann factor") {
  std::mt19937_64 rng(kSeed + 20);
  std::uniform_real_distribution<double> w(1e-3, 5.0), t(0.05, 50.0);
  for (int k = 0; k < 1000; ++k) {
    const double omega = w(rng), T = t(rng);
    const auto r = bose_rate(omega, thermal_bath(Bath::hot, T, 1 + k % 3, 1e-6));
    if (r.absorption == 0.0) continue;
    CHECK(rel_diff(r.absorption / r.emission, std::exp(-omega / T)) <= 1e-14);
  }
}

TEST_CASE("bose rate rejects nonpositive frequency and a work source") {
  CHECK_THROWS_AS(bose_rate(0.0, thermal_bath(Bath::cold, 1.0)), Error);
  CHECK_THROWS_AS(bose_rate(-1.0, thermal_bath(Bath::cold, 1.0)), Error);
  BathSpec field;
  field.label = Bath::work;
  field.kind = BathKind::work_source;
  CHECK_THROWS_AS(bose_rate(1.0, field), Error);
}

TEST_CASE("absorption wire at zero detuning") {
  const AbsorptionWireParams p;
  const auto m = build_absorption_wire(p);
  const auto& k = m.coefficients;
  CHECK(k.eigenfrequencies[3] == doctest::Approx(p.omega_h - p.g).epsilon(1e-15));
  CHECK(k.eigenfrequencies[4] == doctest::Approx(p.omega_h + p.g).epsilon(1e-15));
  for (double c : {k.c_plus_sq(), k.c_minus_sq(), k.cp_plus_sq(), k.cp_minus_sq()})
    CHECK(std::abs(c - 0.5) < 1e-15);
  CHECK(m.graph.edge_count() == 11);
  CHECK(m.warnings.empty());
}

TEST_CASE("absorption wire edge table") {
  AbsorptionWireParams p;
  p.delta = 0.03;  // break the resonance so every coefficient differs
  const auto m = build_absorption_wire(p);
  const auto& w = m.coefficients.eigenfrequencies;
  const double ww = p.omega_w();
  struct Row {
    int tail, head;
    Bath bath;
    double quantum, factor;
  };
  const auto& k = m.coefficients;
  const std::vector<Row> table{
      {1, 2, Bath::work, ww, 1.0},
      {1, 3, Bath::cold, p.omega_c, 1.0},
      {1, 4, Bath::hot, w[3], k.cp_minus_sq()},
      {1, 5, Bath::hot, w[4], k.cp_plus_sq()},
      {2, 4, Bath::cold, w[3] - ww, k.c_minus_sq()},
      {2, 5, Bath::cold, w[4] - ww, k.c_plus_sq()},
      {2, 6, Bath::hot, p.omega_h, 1.0},
      {3, 4, Bath::work, w[3] - p.omega_c, k.c_minus_sq()},
      {3, 5, Bath::work, w[4] - p.omega_c, k.c_plus_sq()},
      {4, 6, Bath::work, ww + p.omega_h - w[3], k.cp_minus_sq()},
      {5, 6, Bath::work, ww + p.omega_h - w[4], k.cp_plus_sq()},
  };
  REQUIRE(m.graph.edge_count() == 11);
  for (std::size_t i = 0; i < table.size(); ++i) {
    const auto& e = m.graph.edges()[i];
    const auto& r = table[i];
    CHECK(e.id == static_cast<int>(i + 1));
    CHECK(e.tail == r.tail);
    CHECK(e.head == r.head);
    CHECK(e.bath == r.bath);
    CHECK(e.quantum == doctest::Approx(r.quantum).epsilon(1e-14));
    // The quantum equals the eigenfrequency gap of its endpoints.
    CHECK(std::abs(e.quantum - (w[r.head - 1] - w[r.tail - 1])) < 1e-14);
    const BathSpec& b = m.graph.bath(r.bath);
    const auto g = bose_rate(r.quantum, b);
    CHECK(rel_diff(e.rate_down, r.factor * g.emission) < 1e-13);
    CHECK(rel_diff(e.rate_up, r.factor * g.absorption) < 1e-13);
  }
}

TEST_CASE("property: absorption coefficient identities") {
  std::mt19937_64 rng(kSeed + 21);
  std::uniform_real_distribution<double> d(-1.0, 1.0), g(1e-3, 1.0);
  for (int k = 0; k < 100; ++k) {
    const auto c = absorption_coefficients(0.5, 1.0, d(rng), g(rng));
    CHECK(std::abs(c.c_plus_sq() + c.c_minus_sq() - 1.0) <= 1e-12);
    CHECK(std::abs(c.cp_plus_sq() + c.cp_minus_sq() - 1.0) <= 1e-12);
    CHECK(std::abs(c.c_plus_sq() - c.cp_minus_sq()) <= 1e-12);
    CHECK(std::abs(c.c_minus_sq() - c.cp_plus_sq()) <= 1e-12);
  }
}

TEST_CASE("detuned regime suppresses c_+ and c'_-") {
  const double delta = 0.1, g = 1e-3;
  const auto c = absorption_coefficients(0.5, 1.0, delta, g);
  const double bound = 2.0 * (g / delta) * (g / delta);
  CHECK(c.c_plus_sq() <= bound);
  CHECK(c.cp_minus_sq() <= bound);
  // Leading order of the expansion: (g/delta)^2.
  CHECK(c.c_plus_sq() == doctest::Approx((g / delta) * (g / delta)).epsilon(1e-3));

  AbsorptionWireParams p;
  p.delta = delta;
  p.g = g;
  for (BathSpec* b : {&p.cold, &p.hot, &p.work}) b->coupling = 1e-8;
  const auto m = build_absorption_wire(p);
  CHECK(m.warnings.empty());
  CHECK(validate_graph(m.graph).ok());
}

TEST_CASE("absorption wire parameter guards") {
  AbsorptionWireParams p;
  p.g = 0.0;
  CHECK_THROWS_WITH_AS(build_absorption_wire(p), doctest::Contains("secular approximation invalid"),
                       Error);
  p = {};
  p.omega_c = 0.96;  // omega_w = 0.04 < g: a wire transition turns negative
  CHECK_THROWS_WITH_AS(build_absorption_wire(p), doctest::Contains("secular approximation invalid"),
                       Error);
  p = {};
  p.work.temperature = -1.0;
  CHECK_THROWS_AS(build_absorption_wire(p), Error);
}

TEST_CASE("validity warnings") {
  AbsorptionWireParams p;
  p.cold.coupling = 0.01;  // gamma/g = 0.2
  CHECK(build_absorption_wire(p).warnings.size() == 1);
  p = {};
  p.omega_c = 0.08;  // g/omega_c = 0.625
  CHECK(build_absorption_wire(p).warnings.size() == 1);
}

TEST_CASE("driven wire spectrum and coefficients") {
  const DrivenWireParams p;
  const auto m = build_driven_wire(p);
  const auto& w = m.coefficients.eigenfrequencies;
  CHECK(std::abs(w[0] + w[1]) < 1e-15);
  CHECK(std::abs(w[2] + w[5]) < 1e-15);
  CHECK(std::abs(w[3] + w[4]) < 1e-15);
  const double r = std::sqrt(4 * p.lambda * p.lambda + p.g * p.g);
  CHECK(w[0] == -p.lambda);
  CHECK(w[2] == doctest::Approx(-(p.g + r) / 2));
  CHECK(m.graph.edge_count() == 16);
  for (const auto& e : m.graph.edges()) {
    CHECK((e.tail == 1 || e.tail == 2));
    CHECK(e.head >= 3);
    CHECK(e.bath != Bath::work);
  }
  CHECK_FALSE(m.graph.three_bath());
  CHECK(m.graph.bath(Bath::work).kind == BathKind::work_source);
}

TEST_CASE("driven coefficients in the weak-drive limit") {
  // lambda << g: the drive barely mixes the device doublet, |c|^2 -> 1/4.
  const auto k = driven_coefficients(0.25, 1e-6);
  for (auto [ij, v] : k.c_sq) CHECK(std::abs(v - 0.25) < 1e-5);
  CHECK(std::abs(k.u_plus) < 1e-5);
}

TEST_CASE("property: driven coefficient identities") {
  std::mt19937_64 rng(kSeed + 22);
  std::uniform_real_distribution<double> u(1e-3, 1.0);
  for (int n = 0; n < 100; ++n) {
    const auto k = driven_coefficients(u(rng), u(rng));
    CHECK(std::abs(k.u_plus * k.u_minus + 1.0) <= 1e-12);
    for (int j = 3; j <= 6; ++j) CHECK(std::abs(k.at(1, j) + k.at(2, j) - 0.5) <= 1e-12);
  }
}

TEST_CASE("driven wire requires positive quanta") {
  DrivenWireParams p;
  p.omega_c = 0.2;  // omega_c + w_3 - w_1 < 0
  CHECK_THROWS_WITH_AS(build_driven_wire(p), doctest::Contains("secular approximation invalid"),
                       Error);
  p = {};
  p.lambda = 0.0;
  CHECK_THROWS_AS(build_driven_wire(p), Error);
}

TEST_CASE("appendix model rates and guards") {
  const AppendixParams p;
  const auto g = build_appendix_three_level(p);
  REQUIRE(g.edge_count() == 4);
  const std::array<double, 4> quanta{p.omega_c - p.lambda, p.omega_h - p.lambda,
                                     p.omega_c + p.lambda, p.omega_h + p.lambda};
  for (int i = 0; i < 4; ++i) {
    const auto& e = g.edges()[i];
    CHECK(e.quantum == doctest::Approx(quanta[i]));
    const auto r = bose_rate(quanta[i], g.bath(e.bath));
    CHECK(rel_diff(e.rate_down, r.emission / 2) < 1e-14);
  }
  AppendixParams bad;
  bad.lambda = 0.5;
  CHECK_THROWS_AS(build_appendix_three_level(bad), Error);
  bad = {};
  bad.omega_c = 1.2;
  CHECK_THROWS_AS(build_appendix_three_level(bad), Error);
}

TEST_CASE("direct three-level device is a triangle") {
  const auto g = build_direct_three_level(DirectParams{});
  CHECK(g.vertex_count() == 3);
  CHECK(g.edge_count() == 3);
  std::set<Bath> baths;
  for (const auto& e : g.edges()) baths.insert(e.bath);
  CHECK(baths.size() == 3);
  DirectParams bad;
  bad.omega_c = 1.0;
  CHECK_THROWS_AS(build_direct_three_level(bad), Error);
}

TEST_CASE("eigen crosscheck at the default parameters") {
  const auto a = eigen_crosscheck(AbsorptionWireParams{});
  CHECK(a.passed());
  bool found = false;
  for (const auto& e : a.entries)
    if (e.bath == Bath::cold && e.i == 2 && e.j == 4) {
      CHECK(std::abs(e.numeric - 0.5) < 1e-12);
      found = true;
    }
  CHECK(found);

  const auto d = eigen_crosscheck(DrivenWireParams{});
  CHECK(d.passed());
  auto numeric = d.numeric_eigenfrequencies;
  std::sort(numeric.begin(), numeric.end());
  const double r = std::sqrt(4 * 0.05 * 0.05 + 0.25 * 0.25);
  std::array<double, 6> expected{-0.05, 0.05, -(0.25 + r) / 2, (0.25 - r) / 2, (r - 0.25) / 2,
                                 (0.25 + r) / 2};
  std::sort(expected.begin(), expected.end());
  for (int i = 0; i < 6; ++i) CHECK(std::abs(numeric[i] - expected[i]) < 1e-12);
}

TEST_CASE("property: eigen crosscheck over random parameters") {
  std::mt19937_64 rng(kSeed + 23);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int n = 0; n < 50; ++n) {
    AbsorptionWireParams p;
    p.delta = u(rng);
    p.g = std::max(u(rng), 1e-3);
    CHECK(eigen_crosscheck(p).max_coefficient_deviation < 1e-10);

    DrivenWireParams q;
    q.g = std::max(u(rng), 1e-3);
    q.lambda = std::max(u(rng), 1e-3);
    CHECK(eigen_crosscheck(q).max_coefficient_deviation < 1e-10);
  }
}

TEST_CASE("eigen crosscheck handles the omega_2 = omega_3 degeneracy") {
  AbsorptionWireParams p;  // omega_w = omega_c at the defaults
  REQUIRE(p.omega_w() == p.omega_c);
  const auto r = eigen_crosscheck(p);
  CHECK(r.max_coefficient_deviation < 1e-12);
  AbsorptionWireParams off = p;
  off.omega_c = 0.3;
  CHECK(eigen_crosscheck(off).passed());
}

TEST_CASE("crosscheck rejects a perturbed table") {
  auto r = eigen_crosscheck(AbsorptionWireParams{});
  r.entries.front().analytic += 1e-6;
  r.max_coefficient_deviation = 1e-6;
  CHECK_THROWS_AS(require_agreement(r), Error);
}

TEST_CASE("model spec helpers") {
  for (const auto& m : test::all_models()) {
    CHECK(omega_c_of(with_omega_c(m, 0.42)) == 0.42);
    CHECK(!model_name(model_kind(m)).empty());
  }
}

}  // TEST_SUITE
