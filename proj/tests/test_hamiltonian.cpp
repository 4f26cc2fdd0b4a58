#include <doctest.h>

#include <Eigen/Dense>

#include "qzvalve/error.hpp"
#include "qzvalve/evolve.hpp"
#include "qzvalve/hamiltonian.hpp"
#include "support/reference_model.hpp"

using namespace qzv;

namespace {

// Library operator in reference ordering, as a dense matrix.
Eigen::MatrixXcd mapped(const SparseOperator& h, const SystemGeometry& g, const BasisSector& basis,
                        const ref::Model& m, const ref::Space& sp) {
  const auto n = static_cast<Eigen::Index>(sp.states.size());
  std::vector<Eigen::Index> to_ref(basis.dim());
  for (std::size_t j = 0; j < basis.dim(); ++j) {
    const auto e = ref::from_library(StateVector::basis_state(basis.dim(), j), g, basis, m, sp);
    Eigen::Index idx = 0;
    e.cwiseAbs().maxCoeff(&idx);
    to_ref[j] = idx;
  }
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t r = 0; r < basis.dim(); ++r) {
    for (std::size_t c = 0; c < basis.dim(); ++c) out(to_ref[r], to_ref[c]) = h.at(r, c);
  }
  return out;
}

}  // namespace

TEST_CASE("total Hamiltonian matches the brute-force construction") {
  struct Case {
    int L;
    std::vector<int> sites;
    double U, M;
  };
  for (const auto& c : std::vector<Case>{{4, {2}, 1.0, 3.0}, {6, {3, 4}, 0.7, 2.5}, {4, {1, 2, 3, 4}, 0.25, 10.0}, {6, {}, 1.0, 0.0}}) {
    const SystemGeometry g(c.L, c.sites);
    const auto basis = BasisSector::enumerate(g);
    ModelParams p;
    p.U = c.U;
    p.M = c.M;
    const auto h = build_total_hamiltonian(p, g, basis);
    const ref::Model m{c.L, c.sites, 1.0, c.U, c.M};
    const auto sp = ref::sector(m);
    REQUIRE(sp.states.size() == basis.dim());
    const Eigen::MatrixXcd diff = mapped(h, g, basis, m, sp) - ref::hamiltonian(m, sp);
    CHECK(diff.cwiseAbs().maxCoeff() < 1e-14);
    CHECK(h.hermiticity_defect() < 1e-15);
    CHECK(h.is_real());
  }
}

TEST_CASE("terms add up to the total") {
  const SystemGeometry g(6, {3});
  const auto basis = BasisSector::enumerate(g);
  ModelParams p;
  p.M = 2.0;
  const auto sum = build_chain_hamiltonian(p, g, basis) + build_ancilla_hamiltonian(p, g, basis) +
                   build_coupling_hamiltonian(p, g, basis);
  const auto total = build_total_hamiltonian(p, g, basis);
  const auto a = sum.to_dense();
  const auto b = total.to_dense();
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  CHECK(d < 1e-15);
  CHECK(build_coupling_hamiltonian(p, g, basis).is_diagonal());
}

TEST_CASE("ground-state energies of the four-site chain") {
  const SystemGeometry g(4, {});
  const auto basis = BasisSector::enumerate(g);
  ModelParams p;
  SUBCASE("U = 0 is two free fermions") {
    p.U = 0.0;
    const auto gs = ground_state(build_chain_hamiltonian(p, g, basis));
    const double exact = -(std::cos(std::numbers::pi / 5) + std::cos(2 * std::numbers::pi / 5));
    CHECK(gs.energy == doctest::Approx(exact).epsilon(1e-12));
  }
  SUBCASE("U = 1") {
    const auto gs = ground_state(build_chain_hamiltonian(p, g, basis));
    CHECK(gs.energy == doctest::Approx(-0.92788625).epsilon(1e-8));
    CHECK(gs.first_excited == doctest::Approx(-0.20710678).epsilon(1e-8));
  }
  SUBCASE("U = 1/4") {
    p.U = 0.25;
    const auto gs = ground_state(build_chain_hamiltonian(p, g, basis));
    CHECK(gs.energy == doctest::Approx(-1.05164214).epsilon(1e-8));
    CHECK(gs.first_excited == doctest::Approx(-0.39038820).epsilon(1e-8));
  }
}

TEST_CASE("density and soft-projection operators") {
  const SystemGeometry g(4, {2});
  const auto basis = BasisSector::enumerate(g);
  const auto n = build_density_operator(g.ancilla_lower_position(0), basis);
  CHECK(n.is_diagonal());
  const auto proj = build_soft_projection(+1, 5.0, 0, g, basis);
  CHECK_FALSE(proj.hermitian());
  for (std::size_t j = 0; j < basis.dim(); ++j) {
    CHECK(proj.at(j, j) == Complex(0.0, 5.0) * n.at(j, j));
  }
  const auto minus = build_soft_projection(-1, 5.0, 0, g, basis);
  CHECK(minus.at(0, 0) == -proj.at(0, 0));
}

TEST_CASE("parameter validation") {
  const auto message_of = [](ModelParams p) {
    try {
      p.validate();
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Config);
      return std::string(e.what());
    }
    return std::string();
  };
  ModelParams ok;
  CHECK(message_of(ok).empty());
  ModelParams p = ok;
  p.period = 0.0;
  CHECK(message_of(p).find("model.dT") != std::string::npos);
  p = ok;
  p.dt_obs = 0.3;
  CHECK(message_of(p).find("dt_obs") != std::string::npos);
  p = ok;
  p.t_final = -1.0;
  CHECK(message_of(p).find("t_final") != std::string::npos);
  p = ok;
  p.J = std::nan("");
  CHECK(message_of(p).find("model.J") != std::string::npos);
  ok.t_final = 50;
  CHECK(ok.steps_per_period() == 20);
  CHECK(ok.total_steps() == 500);
}
