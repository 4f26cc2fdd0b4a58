#include "qzvalve/hilbert.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "qzvalve/error.hpp"

namespace qzv {
namespace {

// All n-bit masks with k bits set, ascending (Gosper's hack).
std::vector<Bits> combinations(int n, int k) {
  std::vector<Bits> out;
  if (k < 0 || k > n) return out;
  if (k == 0) {
    out.push_back(0);
    return out;
  }
  Bits m = (Bits{1} << k) - 1;
  const Bits limit = Bits{1} << n;
  while (m < limit) {
    out.push_back(m);
    const Bits c = m & (~m + 1);
    const Bits r = m + c;
    m = (((r ^ m) >> 2) / c) | r;
  }
  return out;
}

Bits scatter(Bits compact, std::span<const int> positions) {
  Bits out = 0;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if ((compact >> i) & 1) out |= Bits{1} << positions[i];
  }
  return out;
}

// Every configuration of the given chain positions with `k` particles, times
// every choice of lower/upper occupation of the given ancillas (lower, upper
// position pairs).
std::vector<Bits> side_configs(std::span<const int> chain_positions, int k,
                               std::span<const int> lowers,
                               std::span<const int> uppers) {
  std::vector<Bits> out;
  const auto chains = combinations(static_cast<int>(chain_positions.size()), k);
  const Bits n_anc_states = Bits{1} << lowers.size();
  out.reserve(chains.size() * n_anc_states);
  for (Bits c : chains) {
    const Bits chain_bits = scatter(c, chain_positions);
    for (Bits a = 0; a < n_anc_states; ++a) {
      Bits bits = chain_bits;
      for (std::size_t j = 0; j < lowers.size(); ++j) {
        bits |= Bits{1} << (((a >> j) & 1) ? lowers[j] : uppers[j]);
      }
      out.push_back(bits);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

SystemGeometry::SystemGeometry(int chain_length,
                               std::vector<int> ancilla_chain_sites)
    : chain_length_(chain_length), ancilla_sites_(std::move(ancilla_chain_sites)) {
  if (chain_length_ < 2 || chain_length_ % 2 != 0) {
    fail(ErrorCode::InvalidArgument,
         "chain length must be even and >= 2, got " + std::to_string(chain_length_));
  }
  for (std::size_t k = 0; k < ancilla_sites_.size(); ++k) {
    const int s = ancilla_sites_[k];
    if (s < 1 || s > chain_length_) {
      fail(ErrorCode::InvalidArgument,
           "ancilla site " + std::to_string(s) + " outside 1.." +
               std::to_string(chain_length_));
    }
    if (k > 0 && s <= ancilla_sites_[k - 1]) {
      fail(ErrorCode::InvalidArgument,
           "ancilla sites must be strictly increasing");
    }
  }
  const int total = chain_length_ + 2 * n_ancillas();
  if (total > 64) {
    fail(ErrorCode::SectorTooLarge,
         std::to_string(total) + " sites exceed the 64-bit state layout");
  }

  chain_pos_.assign(chain_length_, -1);
  lower_pos_.assign(ancilla_sites_.size(), -1);
  upper_pos_.assign(ancilla_sites_.size(), -1);
  std::size_t next_anc = 0;
  for (int site = 1; site <= chain_length_; ++site) {
    chain_pos_[site - 1] = static_cast<int>(site_order_.size());
    site_order_.push_back({SiteKind::Chain, site, -1});
    if (next_anc < ancilla_sites_.size() && ancilla_sites_[next_anc] == site) {
      const int k = static_cast<int>(next_anc);
      lower_pos_[next_anc] = static_cast<int>(site_order_.size());
      site_order_.push_back({SiteKind::AncillaLower, site, k});
      upper_pos_[next_anc] = static_cast<int>(site_order_.size());
      site_order_.push_back({SiteKind::AncillaUpper, site, k});
      ++next_anc;
    }
    if (site == chain_length_ / 2) cut_ = static_cast<int>(site_order_.size());
  }
}

int SystemGeometry::chain_position(int site) const {
  if (site < 1 || site > chain_length_) {
    fail(ErrorCode::InvalidArgument, "chain site out of range: " + std::to_string(site));
  }
  return chain_pos_[site - 1];
}

int SystemGeometry::ancilla_lower_position(int ancilla) const {
  if (ancilla < 0 || ancilla >= n_ancillas()) {
    fail(ErrorCode::InvalidArgument, "ancilla index out of range: " + std::to_string(ancilla));
  }
  return lower_pos_[ancilla];
}

int SystemGeometry::ancilla_upper_position(int ancilla) const {
  if (ancilla < 0 || ancilla >= n_ancillas()) {
    fail(ErrorCode::InvalidArgument, "ancilla index out of range: " + std::to_string(ancilla));
  }
  return upper_pos_[ancilla];
}

double sector_dimension_estimate(const SystemGeometry& geometry) {
  const int L = geometry.chain_length();
  const double log_binom = std::lgamma(L + 1.0) - 2.0 * std::lgamma(L / 2 + 1.0);
  return std::round(std::exp(log_binom)) * std::ldexp(1.0, geometry.n_ancillas());
}

BasisSector BasisSector::enumerate(const SystemGeometry& geometry,
                                   std::size_t max_dim) {
  const double estimate = sector_dimension_estimate(geometry);
  if (estimate > static_cast<double>(max_dim)) {
    fail(ErrorCode::SectorTooLarge,
         "sector dimension " + std::to_string(static_cast<long double>(estimate)) +
             " exceeds cap " + std::to_string(max_dim));
  }

  std::vector<int> chain_positions, lowers, uppers;
  for (int s = 1; s <= geometry.chain_length(); ++s) {
    chain_positions.push_back(geometry.chain_position(s));
  }
  for (int k = 0; k < geometry.n_ancillas(); ++k) {
    lowers.push_back(geometry.ancilla_lower_position(k));
    uppers.push_back(geometry.ancilla_upper_position(k));
  }

  BasisSector basis;
  basis.chain_particles_ = geometry.half_filling();
  basis.n_ancillas_ = geometry.n_ancillas();
  basis.states_ = side_configs(chain_positions, geometry.half_filling(), lowers, uppers);
  return basis;
}

std::optional<std::size_t> BasisSector::index_of(Bits state) const noexcept {
  const auto it = std::lower_bound(states_.begin(), states_.end(), state);
  if (it == states_.end() || *it != state) return std::nullopt;
  return static_cast<std::size_t>(it - states_.begin());
}

Bipartition::Bipartition(const SystemGeometry& geometry, const BasisSector& basis) {
  const int L = geometry.chain_length();
  const int half = L / 2;
  const int cut = geometry.bipartition_cut();
  const int n_particles = basis.chain_particles();

  std::vector<int> a_chain, b_chain, a_low, a_up, b_low, b_up;
  for (int s = 1; s <= L; ++s) {
    const int p = geometry.chain_position(s);
    (s <= half ? a_chain : b_chain).push_back(p < cut ? p : p - cut);
  }
  const auto anc_sites = geometry.ancilla_chain_sites();
  for (int k = 0; k < geometry.n_ancillas(); ++k) {
    const int lo = geometry.ancilla_lower_position(k);
    const int up = geometry.ancilla_upper_position(k);
    if (anc_sites[k] <= half) {
      a_low.push_back(lo);
      a_up.push_back(up);
    } else {
      b_low.push_back(lo - cut);
      b_up.push_back(up - cut);
    }
  }

  std::vector<int> block_for_k(half + 1, -1);
  for (int k = 0; k <= half; ++k) {
    const int kb = n_particles - k;
    if (kb < 0 || kb > L - half) continue;
    BipartitionBlock block;
    block.a_particles = k;
    block.a_configs = side_configs(a_chain, k, a_low, a_up);
    block.b_configs = side_configs(b_chain, kb, b_low, b_up);
    block_for_k[k] = static_cast<int>(blocks_.size());
    blocks_.push_back(std::move(block));
  }

  Bits a_chain_mask = 0;
  for (int p : a_chain) a_chain_mask |= Bits{1} << p;
  const Bits a_mask = cut >= 64 ? ~Bits{0} : (Bits{1} << cut) - 1;

  const std::size_t dim = basis.dim();
  block_.resize(dim);
  row_.resize(dim);
  col_.resize(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    const Bits s = basis.state(j);
    const Bits a = s & a_mask;
    const Bits b = s >> cut;
    const int k = std::popcount(a & a_chain_mask);
    const int bi = block_for_k[k];
    const auto& blk = blocks_[bi];
    block_[j] = bi;
    row_[j] = static_cast<std::uint32_t>(
        std::lower_bound(blk.a_configs.begin(), blk.a_configs.end(), a) -
        blk.a_configs.begin());
    col_[j] = static_cast<std::uint32_t>(
        std::lower_bound(blk.b_configs.begin(), blk.b_configs.end(), b) -
        blk.b_configs.begin());
  }
}

std::size_t Bipartition::a_dimension() const noexcept {
  std::size_t n = 0;
  for (const auto& b : blocks_) n += b.a_configs.size();
  return n;
}

std::size_t Bipartition::b_dimension() const noexcept {
  std::size_t n = 0;
  for (const auto& b : blocks_) n += b.b_configs.size();
  return n;
}

}  // namespace qzv
