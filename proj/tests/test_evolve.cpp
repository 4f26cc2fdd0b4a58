#include <doctest.h>

#include "qzvalve/error.hpp"
#include "qzvalve/evolve.hpp"
#include "qzvalve/hamiltonian.hpp"
#include "support/helpers.hpp"
#include "support/reference_model.hpp"

using namespace qzv;

namespace {

struct Setup {
  SystemGeometry g;
  BasisSector basis;
  SparseOperator h;
  ref::Model m;
  ref::Space sp;
  Eigen::MatrixXcd h_ref;

  Setup(int L, std::vector<int> sites, double M)
      : g(L, sites), basis(BasisSector::enumerate(g)), m{L, sites, 1.0, 1.0, M}, sp(ref::sector(m)) {
    ModelParams p;
    p.M = M;
    h = build_total_hamiltonian(p, g, basis);
    h_ref = ref::hamiltonian(m, sp);
  }
};

double overlap_defect(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  return 1.0 - std::norm(a.dot(b));
}

}  // namespace

TEST_CASE("Krylov steps agree with dense evolution") {
  Setup s(6, {3}, 3.0);
  const auto psi0 = testing::random_state(s.basis.dim(), 11);
  for (double dt : {0.01, 0.1, 1.0, 4.0}) {
    const auto psi = propagate(s.h, psi0, dt);
    const auto expected = ref::evolve(s.h_ref, ref::from_library(psi0, s.g, s.basis, s.m, s.sp), dt);
    CHECK(overlap_defect(ref::from_library(psi, s.g, s.basis, s.m, s.sp), expected) < 1e-12);
    // Phases as well, not only the ray.
    CHECK((ref::from_library(psi, s.g, s.basis, s.m, s.sp) - expected).norm() < 1e-9);
    CHECK(psi.norm() == doctest::Approx(1.0).epsilon(1e-13));
  }
}

TEST_CASE("long steps are split and stay accurate") {
  Setup s(8, {4, 5}, 5.0);
  KrylovOptions opt;
  opt.max_dim = 20;
  KrylovPropagator prop(s.h, opt);
  auto psi = testing::random_state(s.basis.dim(), 5);
  const auto start = ref::from_library(psi, s.g, s.basis, s.m, s.sp);
  prop.step(psi, 10.0);
  CHECK(prop.stats().splits > 0);
  const auto expected = ref::evolve(s.h_ref, start, 10.0);
  CHECK((ref::from_library(psi, s.g, s.basis, s.m, s.sp) - expected).norm() < 1e-9);
}

TEST_CASE("repeated small steps compose") {
  Setup s(6, {3, 4}, 2.0);
  auto psi = testing::random_state(s.basis.dim(), 3);
  const auto start = ref::from_library(psi, s.g, s.basis, s.m, s.sp);
  KrylovPropagator prop(s.h);
  for (int i = 0; i < 100; ++i) prop.step(psi, 0.1);
  const auto expected = ref::evolve(s.h_ref, start, 10.0);
  CHECK((ref::from_library(psi, s.g, s.basis, s.m, s.sp) - expected).norm() < 1e-9);
}

TEST_CASE("zero step and eigenstates") {
  Setup s(4, {2}, 1.0);
  const auto psi = testing::random_state(s.basis.dim(), 1);
  const auto same = propagate(s.h, psi, 0.0);
  CHECK(fidelity(psi, same) == doctest::Approx(1.0).epsilon(1e-15));
  const auto gs = ground_state(s.h);
  const auto later = propagate(s.h, gs.state, 3.0);
  const Complex phase = inner(gs.state.view(), later.view());
  CHECK(std::abs(phase - std::exp(Complex(0, -gs.energy * 3.0))) < 1e-10);
}

TEST_CASE("ground state and first excited level") {
  Setup s(6, {3}, 2.0);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s.h_ref);
  const auto gs = ground_state(s.h);
  CHECK(gs.energy == doctest::Approx(es.eigenvalues()(0)).epsilon(1e-10));
  CHECK(gs.first_excited == doctest::Approx(es.eigenvalues()(1)).epsilon(1e-8));
  CHECK(gs.residual < 1e-8);
  const auto v = ref::from_library(gs.state, s.g, s.basis, s.m, s.sp);
  CHECK(overlap_defect(v, es.eigenvectors().col(0)) < 1e-10);
}

TEST_CASE("degenerate ground state is rejected") {
  const std::vector<Complex> d{-1.0, -1.0, 0.5, 2.0, 3.0};
  const auto h = SparseOperator::diagonal(d, true);
  try {
    ground_state(h);
    FAIL("expected DegenerateGroundState");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DegenerateGroundState);
  }
}

TEST_CASE("soft evolution with a diagonal generator") {
  const std::vector<Complex> d{{0, 3e8}, 0.0, {0, 3e8}, 0.0};
  const auto h = SparseOperator::diagonal(d, false);
  StateVector psi({0.6, 0.8, 0.0, 0.0});
  // +i*A grows the first component; after rescaling the second one has
  // decayed by exp(-A eta).
  const auto out = propagate_soft(h, psi, 1e-6, 10, true);
  CHECK(std::abs(out.amplitudes[1]) < 1e-100);
  CHECK(std::abs(std::abs(out.amplitudes[0]) - 1.0) < 1e-12);

  const std::vector<Complex> minus{{0, -3e8}, 0.0, {0, -3e8}, 0.0};
  const auto damp = propagate_soft(SparseOperator::diagonal(minus, false), psi, 1e-6, 10);
  CHECK(std::abs(damp.amplitudes[1] - Complex(0.8)) < 1e-12);
  CHECK(std::abs(damp.amplitudes[0]) < 1e-100);

  StateVector only_first({1.0, 0.0, 0.0, 0.0});
  try {
    propagate_soft(SparseOperator::diagonal(minus, false), only_first, 1e-6, 10);
    FAIL("expected VanishingBranch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::VanishingBranch);
  }
}
