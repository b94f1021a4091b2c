#include "bec/boson_basis.hpp"

#include <numeric>

namespace bec {

long BosonBasis::dimension(int modes, int particles) {
  if (modes < 1 || particles < 0) throw Error("invalid basis shape");
  // C(modes + particles - 1, particles) without overflow for desk-scale sizes.
  long result = 1;
  for (int i = 1; i <= particles; ++i) {
    result = result * (modes - 1 + i) / i;
  }
  return result;
}

BosonBasis::BosonBasis(int modes, int particles) : m_(modes), n_(particles) {
  if (m_ < 1 || m_ > 255) throw Error("mode count out of range");
  if (n_ < 0 || n_ > 200) throw Error("particle count out of range");
  const int t = m_ + n_ + 1;
  binom_.assign(static_cast<size_t>(t) * t, 0);
  for (int a = 0; a < t; ++a) {
    binom_[a * t] = 1;
    for (int b = 1; b <= a; ++b) {
      binom_[a * t + b] = binom_[(a - 1) * t + b - 1] + (b <= a - 1 ? binom_[(a - 1) * t + b] : 0);
    }
  }
  dim_ = dimension(m_, n_);
  occs_.resize(static_cast<size_t>(dim_) * m_);

  // Enumerate: start at (N, 0, ..., 0); repeatedly move one particle right.
  std::vector<uint8_t> state(m_, 0);
  state[0] = static_cast<uint8_t>(n_);
  long idx = 0;
  while (true) {
    std::copy(state.begin(), state.end(), occs_.begin() + idx * m_);
    ++idx;
    int k = m_ - 2;
    for (; k >= 0; --k) {
      if (state[k] != 0) break;
    }
    if (k < 0) break;
    state[k] -= 1;
    int moved = 0;
    for (int i = k + 1; i < m_; ++i) {
      moved += state[i];
      state[i] = 0;
    }
    state[k + 1] = static_cast<uint8_t>(moved + 1);
  }
  if (idx != dim_) throw Error("basis enumeration mismatch");
}

long BosonBasis::compositions(int parts, int total) const {
  if (total < 0) return 0;
  if (parts == 0) return total == 0 ? 1 : 0;
  return binom(total + parts - 1, parts - 1);
}

long BosonBasis::rank(const uint8_t* occ) const {
  long index = 0;
  int rem = n_;
  for (int i = 0; i < m_; ++i) {
    // States agreeing on [0, i) with a larger occupation at slot i come first.
    for (int c = occ[i] + 1; c <= rem; ++c) {
      index += compositions(m_ - i - 1, rem - c);
    }
    rem -= occ[i];
  }
  if (rem != 0) throw Error("occupation vector does not sum to N");
  return index;
}

}  // namespace bec
