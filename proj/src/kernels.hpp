#pragma once

#include <span>

#include "generank/model.hpp"

namespace generank::detail {

// out = a v + b J v, J = alpha D^{-1/2} W D^{-1/2}. scratch holds D^{-1/2} v.
inline void combine_J(const GeneRankProblem& p, std::span<const double> v, double a, double b,
                      std::span<double> scratch, std::span<double> out) {
  const auto& W = p.adjacency();
  const auto s = p.inv_sqrt_degrees();
  const double alpha = p.alpha();
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) scratch[i] = s[i] * v[i];
  const auto offsets = W.row_offsets();
  const auto cols = W.col_indices();
  const auto vals = W.values();
  for_each_row_block(n, p.execution(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double sum = 0.0;
      for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) sum += vals[k] * scratch[cols[k]];
      out[i] = a * v[i] + b * alpha * s[i] * sum;
    }
  });
}

// out = (D - alpha W) v.
inline void apply_spd_kernel(const GeneRankProblem& p, std::span<const double> v,
                             std::span<double> out) {
  const auto& W = p.adjacency();
  const auto d = p.degrees();
  const double alpha = p.alpha();
  const auto offsets = W.row_offsets();
  const auto cols = W.col_indices();
  const auto vals = W.values();
  for_each_row_block(p.size(), p.execution(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double sum = 0.0;
      for (std::size_t k = offsets[i]; k < offsets[i + 1]; ++k) sum += vals[k] * v[cols[k]];
      out[i] = d[i] * v[i] - alpha * sum;
    }
  });
}

}  // namespace generank::detail
