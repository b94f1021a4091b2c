#pragma once

#include <cstdint>
#include <vector>

#include "bec/numerics.hpp"

namespace bec {

/// Occupation-number basis of N bosons on M modes, canonically ordered
/// (lexicographically descending, starting from (N, 0, ..., 0)).
class BosonBasis {
 public:
  BosonBasis(int modes, int particles);

  int modes() const { return m_; }
  int particles() const { return n_; }
  long dim() const { return dim_; }

  /// Occupation vector of basis state idx (modes() entries).
  const uint8_t* occ(long idx) const { return occs_.data() + idx * m_; }

  /// Index of an occupation vector in the canonical order.
  long rank(const uint8_t* occ) const;

  static long dimension(int modes, int particles);

 private:
  int m_, n_;
  long dim_;
  std::vector<uint8_t> occs_;
  std::vector<long> binom_;  // (m_+n_+1) x (m_+n_+1) Pascal table
  long binom(int a, int b) const { return binom_[a * (m_ + n_ + 1) + b]; }
  long compositions(int parts, int total) const;
};

}  // namespace bec
