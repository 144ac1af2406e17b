#include "qtnet/analysis.hpp"
#include "qtnet/error.hpp"
#include "qtnet/models.hpp"
#include "qtnet/thermo.hpp"
#include "support.hpp"

#include <doctest.h>

#include <map>

using namespace qtnet;
using qtnet::test::kSeed;
using qtnet::test::rel_diff;

namespace {

// exp(W dt) by a Taylor series with ||W dt|| <= 1/2, then squared 80 times.
Eigen::VectorXd long_run_populations(const Eigen::MatrixXd& W) {
  const auto n = W.rows();
  const double norm = W.cwiseAbs().colwise().sum().maxCoeff();
  const double dt = 0.5 / norm;
  Eigen::MatrixXd step = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= 30; ++k) {
    term = term * W * dt / k;
    step += term;
  }
  for (int k = 0; k < 80; ++k) {
    step = step * step;
    // Keep columns stochastic; rounding would otherwise grow as 2^k.
    step = step * step.colwise().sum().cwiseInverse().asDiagonal();
  }
  Eigen::VectorXd p = step * Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  return p / p.sum();
}

// Directed rates k[{a, b}] = rate a -> b of a three-state ring.
using Rates = std::map<std::pair<int, int>, double>;

RateGraph ring(const Rates& k) {
  RateGraph g;
  for (int i = 0; i < 3; ++i) g.add_vertex(0.0);
  g.add_bath(thermal_bath(Bath::cold, 1.0));
  g.add_bath(thermal_bath(Bath::hot, 2.0));
  g.add_bath(thermal_bath(Bath::work, 3.0));
  const std::array<std::pair<int, int>, 3> pairs{{{1, 2}, {2, 3}, {1, 3}}};
  const std::array<Bath, 3> baths{Bath::cold, Bath::hot, Bath::work};
  for (int e = 0; e < 3; ++e) {
    auto [a, b] = pairs[e];
    double up = k.at({a, b}), down = k.at({b, a});
    if (up > down) {
      std::swap(a, b);
      std::swap(up, down);
    }
    g.add_edge(a, b, baths[e], g.bath(baths[e]).temperature * std::log(down / up), up, down);
  }
  return g;
}

// Sum over roots and spanning trees of the product of rates directed
// towards the root (matrix-tree theorem for the normalisation).
double spanning_tree_sum(const Rates& k) {
  const std::array<std::pair<int, int>, 3> pairs{{{1, 2}, {2, 3}, {1, 3}}};
  double total = 0.0;
  for (int root = 1; root <= 3; ++root)
    for (int removed = 0; removed < 3; ++removed) {
      // Distance to the root in the remaining path.
      std::map<int, int> dist{{root, 0}};
      for (int sweep = 0; sweep < 2; ++sweep)
        for (int e = 0; e < 3; ++e) {
          if (e == removed) continue;
          auto [a, b] = pairs[e];
          if (dist.count(a) && !dist.count(b)) dist[b] = dist[a] + 1;
          if (dist.count(b) && !dist.count(a)) dist[a] = dist[b] + 1;
        }
      double w = 1.0;
      for (int e = 0; e < 3; ++e) {
        if (e == removed) continue;
        auto [a, b] = pairs[e];
        w *= dist[a] > dist[b] ? k.at({a, b}) : k.at({b, a});
      }
      total += w;
    }
  return total;
}

struct Fixture {
  RateGraph graph;
  std::vector<Circuit> circuits;
  CircuitAnalyzer analyzer;

  explicit Fixture(const ModelSpec& m)
      : graph(build_graph(m)), circuits(enumerate_circuits(graph)), analyzer(graph) {}

  Cycle cycle(std::vector<int> path, std::vector<Bath> baths = {}) const {
    auto c = find_cycle(circuits, graph, path, baths);
    REQUIRE(c.has_value());
    return *c;
  }
  CircuitReport report(std::vector<int> path, std::vector<Bath> baths = {}) const {
    return analyzer.report(cycle(std::move(path), std::move(baths)).circuit);
  }
};

// Random omega_c inside each model's valid domain.
ModelSpec random_point(const ModelSpec& m, std::mt19937_64& rng) {
  const auto s = [&]() -> std::pair<double, double> {
    switch (model_kind(m)) {
      case ModelKind::absorption_wire: return {0.06, 0.94};
      case ModelKind::driven_wire: return {0.3, 0.99};
      case ModelKind::appendix_three_level: return {0.06, 0.99};
      case ModelKind::direct_three_level: return {0.01, 0.99};
    }
    return {0.1, 0.9};
  }();
  return with_omega_c(m, std::uniform_real_distribution<double>(s.first, s.second)(rng));
}

}  // namespace

TEST_SUITE("circuit_thermo") {

TEST_CASE("two-state single-bath system obeys detailed balance") {
  RateGraph g;
  g.add_vertex(0.0);
  g.add_vertex(0.7);
  const auto bath = thermal_bath(Bath::cold, 0.3);
  g.add_bath(bath);
  const auto r = bose_rate(0.7, bath);
  g.add_edge(1, 2, Bath::cold, 0.7, r.absorption, r.emission);
  const auto s = steady_state(rate_matrix(g).total);
  CHECK(rel_diff(s.populations(1) / s.populations(0), std::exp(-0.7 / 0.3)) < 1e-13);
}

TEST_CASE("steady state: normalised, in the kernel, and row-independent D") {
  for (const auto& m : test::all_models()) {
    const auto W = rate_matrix(build_graph(m)).total;
    const auto s = steady_state(W);
    CHECK(std::abs(s.populations.sum() - 1.0) <= 1e-12);
    CHECK((s.populations.array() > 0.0).all());
    CHECK((W * s.populations).cwiseAbs().maxCoeff() <= 1e-12 * W.cwiseAbs().maxCoeff());
    CHECK(s.normalization > 0.0);
    for (int row = 0; row < W.rows(); ++row) {
      CHECK(rel_diff(normalization_determinant(W, row), s.normalization) <= 1e-10);
      CHECK((steady_state(W, row).populations - s.populations).cwiseAbs().maxCoeff() <= 1e-12);
    }
  }
}

TEST_CASE("steady state agrees with long-run evolution") {
  for (const auto& m : test::all_models()) {
    const auto W = rate_matrix(build_graph(m)).total;
    const auto p = steady_state(W).populations;
    CHECK((p - long_run_populations(W)).cwiseAbs().maxCoeff() <= 1e-9);
  }
}

TEST_CASE("reducible rate matrix is rejected") {
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(3, 3);
  W(1, 0) = 1.0;
  W(0, 0) = -1.0;  // 1 -> 2 only; 3 is unreachable
  CHECK_THROWS_AS(steady_state(W), Error);
}

TEST_CASE("algebraic values of C1 = 1->3->4->1") {
  const Fixture f(AbsorptionWireParams{});
  const auto& W = f.analyzer.rates().per_bath;
  const auto a = algebraic_values(f.cycle({1, 3, 4}), f.graph);
  CHECK(a[Bath::cold] == W[Bath::cold](2, 0));  // W_31
  CHECK(a[Bath::work] == W[Bath::work](3, 2));  // W_43
  CHECK(a[Bath::hot] == W[Bath::hot](0, 3));    // W_14
  const auto r = algebraic_values(f.cycle({1, 4, 3}), f.graph);
  CHECK(r[Bath::cold] == W[Bath::cold](0, 2));
  CHECK(r[Bath::work] == W[Bath::work](2, 3));
  CHECK(r[Bath::hot] == W[Bath::hot](3, 0));
}

TEST_CASE("algebraic value of an absent bath is one") {
  const Fixture f(AbsorptionWireParams{});
  const auto a = algebraic_values(f.cycle({1, 4, 6, 5}), f.graph);  // C7: h, w, w, h
  CHECK(a[Bath::cold] == 1.0);
}

TEST_CASE("affinities of C1 and C7") {
  const AbsorptionWireParams p;
  const Fixture f(p);
  const auto x1 = affinity(f.cycle({1, 3, 4}), f.graph);
  CHECK(rel_diff(x1.per_bath[Bath::cold], -p.omega_c / p.cold.temperature) < 1e-12);

  const auto x7 = affinity(f.cycle({1, 4, 6, 5}), f.graph);
  CHECK(rel_diff(x7.per_bath[Bath::hot], 2 * p.g / p.hot.temperature) < 1e-10);
  CHECK(rel_diff(x7.per_bath[Bath::work], -2 * p.g / p.work.temperature) < 1e-10);
  CHECK(x7.per_bath[Bath::cold] == 0.0);
}

TEST_CASE("affinity reverses sign with orientation") {
  for (const auto& m : test::all_models()) {
    const Fixture f(m);
    for (const auto& c : f.circuits) {
      const auto x = affinity(Cycle{c, +1}, f.graph);
      const auto y = affinity(Cycle{c, -1}, f.graph);
      for (Bath b : kAllBaths) CHECK(x.per_bath[b] == -y.per_bath[b]);
      CHECK(x.total == doctest::Approx(-y.total).epsilon(1e-14));
    }
  }
}

TEST_CASE("affinity from rate ratios equals affinity from quanta") {
  for (const auto& m : test::all_models()) {
    const Fixture f(m);
    for (const auto& c : f.circuits) {
      const Cycle cyc{c, +1};
      const auto fwd = algebraic_values(cyc, f.graph);
      const auto bwd = algebraic_values(cyc.reversed(), f.graph);
      const auto x = affinity(cyc, f.graph);
      for (Bath b : kAllBaths) {
        const double from_rates = std::log(fwd[b] / bwd[b]);
        CHECK(std::abs(from_rates - x.per_bath[b]) <=
              1e-10 * std::max(1.0, std::abs(x.per_bath[b])));
      }
    }
  }
}

TEST_CASE("flux of C1 from the explicit minor and rate products") {
  const Fixture f(AbsorptionWireParams{});
  const auto& Wt = f.analyzer.rates().total;
  const auto& W = f.analyzer.rates().per_bath;
  // -W restricted to vertices {2, 5, 6}
  const std::array<int, 3> keep{1, 4, 5};
  Eigen::Matrix3d minor;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) minor(a, b) = -Wt(keep[a], keep[b]);
  const double fwd = W[Bath::cold](2, 0) * W[Bath::work](3, 2) * W[Bath::hot](0, 3);
  const double bwd = W[Bath::cold](0, 2) * W[Bath::work](2, 3) * W[Bath::hot](3, 0);
  const double expected = minor.determinant() * (fwd - bwd) / f.analyzer.steady().normalization;
  CHECK(rel_diff(f.analyzer.flux(f.cycle({1, 3, 4})), expected) < 1e-10);
}

TEST_CASE("three-state ring flux matches the spanning-tree formula") {
  std::mt19937_64 rng(kSeed + 10);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    Rates k;
    for (int a = 1; a <= 3; ++a)
      for (int b = 1; b <= 3; ++b)
        if (a != b) k[{a, b}] = u(rng);
    const auto g = ring(k);
    const CircuitAnalyzer an(g);
    const auto cs = enumerate_circuits(g);
    REQUIRE(cs.size() == 1);
    const auto c = find_cycle(cs, g, {1, 2, 3});
    REQUIRE(c);
    const double D = spanning_tree_sum(k);
    const double expected =
        (k[{1, 2}] * k[{2, 3}] * k[{3, 1}] - k[{1, 3}] * k[{3, 2}] * k[{2, 1}]) / D;
    CHECK(rel_diff(an.steady().normalization, D) < 1e-12);
    CHECK(std::abs(an.flux(*c) - expected) <= 1e-12 * std::abs(expected) + 1e-15);
  }
}

TEST_CASE("flux is exactly antisymmetric and trivial circuits carry none") {
  for (const auto& m : test::all_models()) {
    const Fixture f(m);
    for (const auto& c : f.circuits) {
      CHECK(f.analyzer.flux(Cycle{c, +1}) == -f.analyzer.flux(Cycle{c, -1}));
      const auto r = f.analyzer.report(c);
      if (r.cls == CircuitClass::trivial) {
        for (Bath b : kAllBaths) CHECK(r.heat[b] == 0.0);
        CHECK(r.entropy == 0.0);
        // Rate products agree up to rounding.
        CHECK(std::abs(r.flux) <= 1e-12 * f.analyzer.rates().total.cwiseAbs().maxCoeff());
      }
    }
  }
}

TEST_CASE("property: per-circuit first and second law, positive minors") {
  std::mt19937_64 rng(kSeed + 11);
  for (const auto& base : test::all_models())
    for (int trial = 0; trial < 10; ++trial) {
      const Fixture f(random_point(base, rng));
      for (const auto& c : f.circuits) {
        const auto r = f.analyzer.report(c);
        double sum = r.power, scale = std::abs(r.power);
        for (Bath b : kAllBaths) {
          sum += r.heat[b];
          scale += std::abs(r.heat[b]);
        }
        CHECK(std::abs(sum) <= 1e-12 * scale);
        CHECK(r.entropy >= -1e-15);
        CHECK(r.minor_det > 0.0);
      }
    }
}

TEST_CASE("circuit heat and entropy do not depend on orientation") {
  const Fixture f(DrivenWireParams{});
  const auto& W = f.analyzer.rates().total;
  for (const auto& c : f.circuits) {
    const auto a = circuit_currents(c, f.graph, W, f.analyzer.steady());
    if (a.cls == CircuitClass::trivial) continue;
    const Cycle rev{c, -1};
    const double flux = f.analyzer.flux(rev);
    const auto x = affinity(rev, f.graph);
    for (Bath b : {Bath::cold, Bath::hot}) {
      const double q = -f.graph.bath(b).temperature * flux * x.per_bath[b];
      CHECK(std::abs(q - a.heat[b]) <= 1e-12 * std::abs(a.heat[b]));
    }
    CHECK(std::abs(flux * x.total - a.entropy) <= 1e-12 * std::abs(a.entropy));
  }
}

TEST_CASE("C7 moves energy from the work bath to the hot bath") {
  const Fixture f(AbsorptionWireParams{});
  const auto r = f.report({1, 4, 6, 5});
  CHECK(r.cls == CircuitClass::heat_leak);
  CHECK(r.heat[Bath::hot] < 0.0);
  CHECK(r.heat[Bath::work] > 0.0);
}

TEST_CASE("absorption census by length and class") {
  const Fixture f(AbsorptionWireParams{});
  std::map<std::pair<std::size_t, CircuitClass>, int> count;
  for (const auto& c : f.circuits) ++count[{c.size(), f.analyzer.report(c).cls}];
  CHECK(count[{3, CircuitClass::tricycle}] == 6);
  // Split by length as the 11-edge graph fixes it (brute force gives
  // 6/10/14/8 circuits of length 3/4/5/6).
  CHECK(count[{4, CircuitClass::heat_leak}] == 9);
  CHECK(count[{4, CircuitClass::trivial}] == 1);
  CHECK(count[{5, CircuitClass::tricycle}] == 14);
  CHECK(count[{6, CircuitClass::tricycle}] == 2);
  CHECK(count[{6, CircuitClass::heat_leak}] == 6);
  CHECK(count.size() == 6);

  std::map<std::size_t, int> by_length;
  for (const auto& ids : test::brute_force_circuit_edge_sets(f.graph)) ++by_length[ids.size()];
  CHECK(by_length == std::map<std::size_t, int>{{3, 6}, {4, 10}, {5, 14}, {6, 8}});
  std::map<CircuitClass, int> by_class;
  for (const auto& [key, n] : count) by_class[key.second] += n;
  CHECK(by_class[CircuitClass::tricycle] == 22);
  CHECK(by_class[CircuitClass::heat_leak] == 15);
  CHECK(by_class[CircuitClass::trivial] == 1);
}

TEST_CASE("driven census of the four-edge circuits") {
  const Fixture f(DrivenWireParams{});
  std::map<std::pair<std::size_t, CircuitClass>, int> count;
  for (const auto& c : f.circuits) ++count[{c.size(), f.analyzer.report(c).cls}];
  CHECK(count[{2, CircuitClass::tricycle}] == 8);
  CHECK(count[{4, CircuitClass::trivial}] == 12);
  CHECK(count[{4, CircuitClass::tricycle}] == 60);
  CHECK(count[{4, CircuitClass::heat_leak}] == 24);
}

TEST_CASE("driven C9 = 1-3-2-5 is a heat leak with X ~ 2 lambda") {
  const DrivenWireParams p;
  const Fixture f(p);
  // c from 1 to 3, c from 3 down to 2, h from 2 to 5, h from 5 down to 1.
  const auto cyc = f.cycle({1, 3, 2, 5}, {Bath::cold, Bath::cold, Bath::hot, Bath::hot});
  const auto x = affinity(cyc, f.graph);
  CHECK(rel_diff(x.per_bath[Bath::cold], -2 * p.lambda / p.cold.temperature) < 1e-10);
  CHECK(rel_diff(x.per_bath[Bath::hot], 2 * p.lambda / p.hot.temperature) < 1e-10);
  CHECK(classify(x, f.graph) == CircuitClass::heat_leak);
}

TEST_CASE("three-bath circuits balance energy; driven tricycles absorb work") {
  for (const auto& m : test::all_models()) {
    const Fixture f(m);
    for (const auto& c : f.circuits) {
      double balance = 0.0, scale = 0.0;
      for (const auto& s : directed_steps(Cycle{c, +1}, f.graph)) {
        balance += (s.with_edge ? 1.0 : -1.0) * s.edge->quantum;
        scale += s.edge->quantum;
      }
      const auto r = f.analyzer.report(c);
      if (f.graph.three_bath()) {
        CHECK(std::abs(balance) <= 1e-12 * scale);
      } else {
        const bool converts = std::abs(balance) > 1e-9 * scale;
        CHECK(converts == (r.cls == CircuitClass::tricycle));
      }
    }
  }
}

TEST_CASE("reconciliation across an absorption sweep and at driven defaults") {
  for (double w = 0.06; w < 0.94; w += 0.88 / 49) {
    const auto ev = evaluate_point(with_omega_c(AbsorptionWireParams{}, w));
    CHECK(ev.reconciliation.max_discrepancy() <= 1e-9);
  }
  const auto ev = evaluate_point(DrivenWireParams{});
  const auto& d = ev.reconciliation.direct;
  CHECK(std::abs(d.power + d.heat[Bath::cold] + d.heat[Bath::hot]) <=
        1e-12 * (std::abs(d.heat[Bath::cold]) + std::abs(d.heat[Bath::hot])));
  CHECK(ev.reconciliation.max_edge_discrepancy <= 1e-9);
}

TEST_CASE("entropy: circuit sum equals -sum Q/T") {
  const auto ev = evaluate_point(AbsorptionWireParams{});
  const auto& d = ev.reconciliation.direct;
  double s = 0.0;
  for (Bath b : kAllBaths) s -= d.heat[b] / ev.graph.bath(b).temperature;
  CHECK(rel_diff(d.entropy, s) < 1e-14);
  CHECK(rel_diff(ev.reconciliation.circuit_sum.entropy, s) < 1e-9);
  CHECK(d.entropy > 0.0);
}

TEST_CASE("a missing circuit breaks reconciliation") {
  const Fixture f(AbsorptionWireParams{});
  std::vector<CircuitReport> reports;
  for (const auto& c : f.circuits) reports.push_back(f.analyzer.report(c));
  CHECK_NOTHROW(total_currents(f.graph, reports, f.analyzer.steady()));
  reports.erase(reports.begin());
  CHECK_THROWS_AS(total_currents(f.graph, reports, f.analyzer.steady()), Error);
  CHECK(reconcile(f.graph, reports, f.analyzer.steady()).max_discrepancy() > 1e-8);
}

TEST_CASE("classification tolerance scales with the hot quantum") {
  const auto g = build_absorption_wire(AbsorptionWireParams{}).graph;
  double hot = 0.0;
  for (const auto& e : g.edges())
    if (e.bath == Bath::hot) hot = std::max(hot, e.quantum);
  CHECK(affinity_zero_tolerance(g) == doctest::Approx(1e-9 * hot / 9.0));
}

}  // TEST_SUITE
