#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace qzv {

// Occupation bitstring over the site ordering: bit p is the occupation of
// site_order()[p]. Subsystem A is the low-bit prefix [0, bipartition_cut).
using Bits = std::uint64_t;

inline constexpr std::size_t kDefaultMaxDim = std::size_t{1} << 24;

enum class SiteKind { Chain, AncillaLower, AncillaUpper };

struct SiteLabel {
  SiteKind kind;
  int chain_site;  // 1-based chain site this position belongs to
  int ancilla;     // ancilla index for ancilla sites, -1 otherwise
};

// Chain of even length L with ancilla pairs attached to selected chain sites.
//
// Site ordering walks the chain left to right; every chain site is followed
// by the (lower, upper) sites of its ancilla pair, if any. Chain sites
// i <= L/2 and their ancillas form subsystem A, which is therefore a
// contiguous prefix of the ordering.
class SystemGeometry {
 public:
  SystemGeometry(int chain_length, std::vector<int> ancilla_chain_sites);

  int chain_length() const noexcept { return chain_length_; }
  int n_ancillas() const noexcept {
    return static_cast<int>(ancilla_sites_.size());
  }
  int total_sites() const noexcept {
    return static_cast<int>(site_order_.size());
  }
  int bipartition_cut() const noexcept { return cut_; }
  int half_filling() const noexcept { return chain_length_ / 2; }

  // 1-based chain sites carrying an ancilla, strictly increasing.
  std::span<const int> ancilla_chain_sites() const noexcept {
    return ancilla_sites_;
  }
  std::span<const SiteLabel> site_order() const noexcept { return site_order_; }

  // Bit positions. `site` is 1-based, `ancilla` is 0-based.
  int chain_position(int site) const;
  int ancilla_lower_position(int ancilla) const;
  int ancilla_upper_position(int ancilla) const;

  bool operator==(const SystemGeometry&) const = default;

 private:
  int chain_length_;
  std::vector<int> ancilla_sites_;
  std::vector<SiteLabel> site_order_;
  std::vector<int> chain_pos_;
  std::vector<int> lower_pos_;
  std::vector<int> upper_pos_;
  int cut_ = 0;
};

inline int occupation(Bits state, int position) noexcept {
  return static_cast<int>((state >> position) & Bits{1});
}

// C(L, L/2) * 2^n_anc, as a double so oversized requests can be rejected
// before anything is allocated.
double sector_dimension_estimate(const SystemGeometry& geometry);

// Half-filled chain, exactly one boson per ancilla pair.
class BasisSector {
 public:
  static BasisSector enumerate(const SystemGeometry& geometry,
                               std::size_t max_dim = kDefaultMaxDim);

  std::size_t dim() const noexcept { return states_.size(); }
  std::span<const Bits> states() const noexcept { return states_; }
  Bits state(std::size_t index) const { return states_[index]; }
  std::optional<std::size_t> index_of(Bits state) const noexcept;
  int chain_particles() const noexcept { return chain_particles_; }
  int n_ancillas() const noexcept { return n_ancillas_; }

 private:
  BasisSector() = default;
  std::vector<Bits> states_;  // ascending
  int chain_particles_ = 0;
  int n_ancillas_ = 0;
};

// Product-state block structure across the mid-chain cut, grouped by the
// number of chain particles on the A side.
struct BipartitionBlock {
  int a_particles = 0;
  std::vector<Bits> a_configs;  // low bits, ascending
  std::vector<Bits> b_configs;  // already shifted down by the cut, ascending
};

class Bipartition {
 public:
  Bipartition(const SystemGeometry& geometry, const BasisSector& basis);

  std::span<const BipartitionBlock> blocks() const noexcept { return blocks_; }

  // Location of basis state j inside its block.
  int block_of(std::size_t j) const { return block_[j]; }
  std::uint32_t row_of(std::size_t j) const { return row_[j]; }
  std::uint32_t col_of(std::size_t j) const { return col_[j]; }

  std::size_t size() const noexcept { return block_.size(); }

  // Sector-compatible configuration counts on each side.
  std::size_t a_dimension() const noexcept;
  std::size_t b_dimension() const noexcept;

 private:
  std::vector<BipartitionBlock> blocks_;
  std::vector<int> block_;
  std::vector<std::uint32_t> row_;
  std::vector<std::uint32_t> col_;
};

}  // namespace qzv

namespace qzv {

inline Bipartition bipartition_dims(const SystemGeometry& geometry,
                                    const BasisSector& basis) {
  return Bipartition(geometry, basis);
}

}  // namespace qzv
