#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "flexdesign/construct.hpp"

namespace flexdesign::detail {

/// Neighbor sets Gamma(u) of every supply node as multi-word bitsets over V.
class NeighborBits {
 public:
  explicit NeighborBits(const DesignGraph& graph)
      : m_(graph.m()), n_(graph.n()), words_((graph.n() + 63) / 64), bits_(m_ * words_, 0) {
    for (std::size_t u = 0; u < m_; ++u)
      for (auto v : graph.neighbors(u)) bits_[u * words_ + v / 64] |= std::uint64_t{1} << (v % 64);
  }

  std::size_t m() const noexcept { return m_; }
  std::size_t n() const noexcept { return n_; }
  std::size_t words() const noexcept { return words_; }
  std::span<const std::uint64_t> of(std::size_t u) const noexcept {
    return {bits_.data() + u * words_, words_};
  }

 private:
  std::size_t m_, n_, words_;
  std::vector<std::uint64_t> bits_;
};

/// Visits every L subset of U exactly once, carrying Gamma(L) as a bitset,
/// sums of each left weight vector over L and of each right weight vector
/// over Gamma(L). Sums are updated incrementally as nodes join L.
///
/// visitor(mask, left_sums, right_sums, gamma_words)
class SubsetWalker {
 public:
  SubsetWalker(const NeighborBits& nb, std::vector<std::span<const double>> left,
               std::vector<std::span<const double>> right)
      : nb_(nb), left_(std::move(left)), right_(std::move(right)) {
    const std::size_t depth = nb_.m() + 1;
    gamma_.assign(depth * nb_.words(), 0);
    left_sums_.assign(depth * left_.size(), 0.0);
    right_sums_.assign(depth * right_.size(), 0.0);
  }

  template <class Visitor>
  void run(Visitor&& visit) {
    mask_ = 0;
    recurse(0, 0, visit);
  }

 private:
  template <class Visitor>
  void recurse(std::size_t start, std::size_t depth, Visitor& visit) {
    const std::size_t w = nb_.words();
    const std::size_t kl = left_.size();
    const std::size_t kr = right_.size();
    const std::uint64_t* g = gamma_.data() + depth * w;
    visit(mask_, std::span<const double>(left_sums_.data() + depth * kl, kl),
          std::span<const double>(right_sums_.data() + depth * kr, kr),
          std::span<const std::uint64_t>(g, w));

    std::uint64_t* child_g = gamma_.data() + (depth + 1) * w;
    double* ls = left_sums_.data() + depth * kl;
    double* rs = right_sums_.data() + depth * kr;
    double* child_ls = ls + kl;
    double* child_rs = rs + kr;
    for (std::size_t u = start; u < nb_.m(); ++u) {
      const auto nu = nb_.of(u);
      for (std::size_t k = 0; k < kl; ++k) child_ls[k] = ls[k] + left_[k][u];
      for (std::size_t k = 0; k < kr; ++k) child_rs[k] = rs[k];
      for (std::size_t i = 0; i < w; ++i) {
        std::uint64_t fresh = nu[i] & ~g[i];
        child_g[i] = g[i] | nu[i];
        while (fresh) {
          const std::size_t v = i * 64 + static_cast<std::size_t>(std::countr_zero(fresh));
          for (std::size_t k = 0; k < kr; ++k) child_rs[k] += right_[k][v];
          fresh &= fresh - 1;
        }
      }
      mask_ |= std::uint64_t{1} << u;
      recurse(u + 1, depth + 1, visit);
      mask_ &= ~(std::uint64_t{1} << u);
    }
  }

  const NeighborBits& nb_;
  std::vector<std::span<const double>> left_;
  std::vector<std::span<const double>> right_;
  std::vector<std::uint64_t> gamma_;
  std::vector<double> left_sums_;
  std::vector<double> right_sums_;
  std::uint64_t mask_ = 0;
};

inline std::vector<std::size_t> mask_to_ids(std::uint64_t mask) {
  std::vector<std::size_t> ids;
  while (mask) {
    ids.push_back(static_cast<std::size_t>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return ids;
}

/// Hard ceiling for enumeration regardless of configuration: masks are 64-bit.
inline constexpr std::size_t kMaxEnumerable = 40;

}  // namespace flexdesign::detail
