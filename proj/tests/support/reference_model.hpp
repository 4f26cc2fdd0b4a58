#pragma once

// Brute-force reference for the chain + ancilla model. Uses its own site
// numbering (chain sites first, then ancilla lower/upper pairs), its own
// sector enumeration over all 2^N configurations, dense Eigen matrices and
// an SVD of the reshaped amplitude matrix for the entropy. Shares nothing
// with the library except the conversion helper at the bottom.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "qzvalve/hilbert.hpp"
#include "qzvalve/state.hpp"

namespace ref {

using cd = std::complex<double>;

struct Model {
  int L = 4;
  std::vector<int> ancillas;  // 1-based chain sites
  double J = 1.0, U = 1.0, M = 0.0;

  int sites() const { return L + 2 * static_cast<int>(ancillas.size()); }
  int lower(std::size_t k) const { return L + 2 * static_cast<int>(k); }
  int upper(std::size_t k) const { return L + 2 * static_cast<int>(k) + 1; }
};

inline int bit(std::uint64_t s, int i) { return static_cast<int>((s >> i) & 1u); }

struct Space {
  std::vector<std::uint64_t> states;
  std::map<std::uint64_t, int> index;
};

inline Space sector(const Model& m) {
  Space sp;
  const std::uint64_t chain_mask = (std::uint64_t{1} << m.L) - 1;
  for (std::uint64_t s = 0; s < (std::uint64_t{1} << m.sites()); ++s) {
    if (__builtin_popcountll(s & chain_mask) != m.L / 2) continue;
    bool ok = true;
    for (std::size_t k = 0; k < m.ancillas.size(); ++k) {
      ok = ok && bit(s, m.lower(k)) + bit(s, m.upper(k)) == 1;
    }
    if (!ok) continue;
    sp.index[s] = static_cast<int>(sp.states.size());
    sp.states.push_back(s);
  }
  return sp;
}

inline Eigen::MatrixXcd hamiltonian(const Model& m, const Space& sp) {
  const auto n = static_cast<Eigen::Index>(sp.states.size());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  const auto hop = [&](int col, std::uint64_t s, int i, int j) {
    if (bit(s, i) == 1 && bit(s, j) == 0) {
      const std::uint64_t t = s ^ (std::uint64_t{1} << i) ^ (std::uint64_t{1} << j);
      h(sp.index.at(t), col) += -m.J / 2.0;
    }
  };
  for (int c = 0; c < static_cast<int>(n); ++c) {
    const std::uint64_t s = sp.states[static_cast<std::size_t>(c)];
    for (int i = 0; i + 1 < m.L; ++i) {
      hop(c, s, i, i + 1);
      hop(c, s, i + 1, i);
      h(c, c) += m.U * bit(s, i) * bit(s, i + 1);
    }
    for (std::size_t k = 0; k < m.ancillas.size(); ++k) {
      hop(c, s, m.lower(k), m.upper(k));
      hop(c, s, m.upper(k), m.lower(k));
      h(c, c) += m.M * bit(s, m.ancillas[k] - 1) * bit(s, m.lower(k));
    }
  }
  return h;
}

inline Eigen::VectorXcd evolve(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& psi, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  Eigen::VectorXcd phases =
      (es.eigenvalues().cast<cd>() * cd(0.0, -t)).array().exp().matrix();
  return es.eigenvectors() * phases.asDiagonal() * (es.eigenvectors().adjoint() * psi);
}

inline double occupation(const Eigen::VectorXcd& psi, const Space& sp, int site) {
  double n = 0.0;
  for (std::size_t i = 0; i < sp.states.size(); ++i) {
    if (bit(sp.states[i], site)) n += std::norm(psi(static_cast<Eigen::Index>(i)));
  }
  return n;
}

// Chain sites 1..L/2 and every ancilla attached to them form subsystem A.
inline double entropy(const Eigen::VectorXcd& psi, const Space& sp, const Model& m) {
  std::vector<int> a_sites;
  for (int i = 0; i < m.L / 2; ++i) a_sites.push_back(i);
  for (std::size_t k = 0; k < m.ancillas.size(); ++k) {
    if (m.ancillas[k] <= m.L / 2) {
      a_sites.push_back(m.lower(k));
      a_sites.push_back(m.upper(k));
    }
  }
  std::uint64_t a_mask = 0;
  for (int s : a_sites) a_mask |= std::uint64_t{1} << s;
  const Eigen::Index na = Eigen::Index{1} << a_sites.size();
  const Eigen::Index nb = Eigen::Index{1} << (m.sites() - static_cast<int>(a_sites.size()));
  const auto compress = [](std::uint64_t s, std::uint64_t mask) {
    std::uint64_t out = 0;
    int j = 0;
    for (int i = 0; i < 64; ++i) {
      if ((mask >> i) & 1u) out |= ((s >> i) & 1u) << j++;
    }
    return static_cast<Eigen::Index>(out);
  };
  const std::uint64_t all = (std::uint64_t{1} << m.sites()) - 1;
  Eigen::MatrixXcd c = Eigen::MatrixXcd::Zero(na, nb);
  for (std::size_t i = 0; i < sp.states.size(); ++i) {
    const auto s = sp.states[i];
    c(compress(s, a_mask), compress(s, all & ~a_mask)) = psi(static_cast<Eigen::Index>(i));
  }
  const Eigen::VectorXd sv = Eigen::BDCSVD<Eigen::MatrixXcd>(c).singularValues();
  double S = 0.0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    const double p = sv(i) * sv(i);
    if (p > 1e-300) S -= p * std::log(p);
  }
  return S;
}

// Projects ancilla k onto an outcome and renormalizes.
inline void project(Eigen::VectorXcd& psi, const Space& sp, const Model& m, std::size_t k,
                    int outcome) {
  for (std::size_t i = 0; i < sp.states.size(); ++i) {
    if (bit(sp.states[i], m.lower(k)) != outcome) psi(static_cast<Eigen::Index>(i)) = 0.0;
  }
  psi.normalize();
}

inline Eigen::VectorXcd domain_wall(const Model& m, const Space& sp) {
  std::uint64_t s = (std::uint64_t{1} << (m.L / 2)) - 1;
  for (std::size_t k = 0; k < m.ancillas.size(); ++k) s |= std::uint64_t{1} << m.lower(k);
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(sp.states.size()));
  psi(sp.index.at(s)) = 1.0;
  return psi;
}

// Library amplitudes in reference ordering.
inline Eigen::VectorXcd from_library(const qzv::StateVector& v, const qzv::SystemGeometry& g,
                                     const qzv::BasisSector& basis, const Model& m,
                                     const Space& sp) {
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(sp.states.size()));
  for (std::size_t j = 0; j < basis.dim(); ++j) {
    const auto b = basis.state(j);
    std::uint64_t s = 0;
    for (int i = 0; i < m.L; ++i) s |= static_cast<std::uint64_t>(qzv::occupation(b, g.chain_position(i + 1))) << i;
    for (std::size_t k = 0; k < m.ancillas.size(); ++k) {
      s |= static_cast<std::uint64_t>(qzv::occupation(b, g.ancilla_lower_position(static_cast<int>(k)))) << m.lower(k);
      s |= static_cast<std::uint64_t>(qzv::occupation(b, g.ancilla_upper_position(static_cast<int>(k)))) << m.upper(k);
    }
    out(sp.index.at(s)) = v.amplitudes[j];
  }
  return out;
}

}  // namespace ref
