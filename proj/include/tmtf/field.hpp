#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "tmtf/binning.hpp"
#include "tmtf/error.hpp"
#include "tmtf/transition.hpp"

namespace tmtf {

enum class FieldKind { global_mtf, tmtf };

/// Square image of transition probabilities, row-major.
struct FieldImage {
  std::size_t side = 0;
  FieldKind kind = FieldKind::global_mtf;
  std::size_t Q = 0;
  std::size_t K = 1;
  std::vector<double> entries;

  double operator()(std::size_t i, std::size_t j) const { return entries[i * side + j]; }
  std::span<const double> row(std::size_t i) const { return {entries.data() + i * side, side}; }

  friend bool operator==(const FieldImage&, const FieldImage&) = default;
};

/// Multi-resolution TMTF channels sharing side length and chunk count.
struct ChannelStack {
  std::vector<FieldImage> channels;
  std::vector<std::size_t> Q_list;
  std::size_t K = 1;

  std::size_t side() const noexcept { return channels.empty() ? 0 : channels.front().side; }
};

namespace detail {

inline void check_matrix(const StateSequence& b, const TransitionMatrix& W) {
  if (W.Q() != b.Q) {
    throw Error(ErrorCode::dimension_mismatch,
                "transition matrix has " + std::to_string(W.Q()) + " states, sequence has Q=" +
                    std::to_string(b.Q));
  }
}

// Row template for (matrix W, state k): the length-T vector (W[k][b_j])_j.
// Every image row is a copy of one template, so rows that should coincide
// coincide bitwise.
inline std::vector<double> row_templates(const StateSequence& b, const TransitionMatrix& W) {
  const std::size_t T = b.size();
  std::vector<double> templates(b.Q * T);
  for (std::size_t k = 0; k < b.Q; ++k) {
    double* dst = templates.data() + k * T;
    for (std::size_t j = 0; j < T; ++j) dst[j] = W.probs(k, b[j]);
  }
  return templates;
}

}  // namespace detail

/// M(i, j) = W[b_i][b_j].
inline FieldImage global_mtf(const StateSequence& b, const TransitionMatrix& W) {
  detail::check_matrix(b, W);
  const std::size_t T = b.size();
  const auto templates = detail::row_templates(b, W);

  FieldImage img{T, FieldKind::global_mtf, b.Q, 1, std::vector<double>(T * T)};
  for (std::size_t i = 0; i < T; ++i) {
    const double* src = templates.data() + b[i] * T;
    std::copy(src, src + T, img.entries.begin() + static_cast<std::ptrdiff_t>(i * T));
  }
  return img;
}

/// M(i, j) = W_{chunk(i)}[b_i][b_j]. The chunk is chosen by the row index
/// only; the column state always comes from the whole-series sequence.
inline FieldImage temporal_mtf(const StateSequence& b, const ChunkPlan& plan,
                       std::span<const TransitionMatrix> locals) {
  const std::size_t T = b.size();
  if (plan.T() != T) {
    throw Error(ErrorCode::dimension_mismatch,
                "chunk plan covers T=" + std::to_string(plan.T()) + ", sequence has " +
                    std::to_string(T));
  }
  if (locals.size() != plan.K()) {
    throw Error(ErrorCode::dimension_mismatch,
                std::to_string(locals.size()) + " local matrices for K=" +
                    std::to_string(plan.K()) + " chunks");
  }
  for (const auto& W : locals) detail::check_matrix(b, W);

  FieldImage img{T, FieldKind::tmtf, b.Q, plan.K(), std::vector<double>(T * T)};
  for (std::size_t c = 0; c < plan.K(); ++c) {
    const auto templates = detail::row_templates(b, locals[c]);
    const IndexRange r = plan.range(c);
    for (std::size_t i = r.begin; i < r.end; ++i) {
      const double* src = templates.data() + b[i] * T;
      std::copy(src, src + T, img.entries.begin() + static_cast<std::ptrdiff_t>(i * T));
    }
  }
  return img;
}

/// Options shared by the end-to-end encoders.
struct EncodeOptions {
  std::size_t K = 4;
  FallbackPolicy fallback = FallbackPolicy::global;
  ChunkPolicy chunk_policy = ChunkPolicy::strict;
};

/// Full pipeline for one bin count: states, local matrices, TMTF.
inline FieldImage encode_tmtf(const TimeSeries& x, std::size_t Q, const EncodeOptions& opts) {
  const auto b = assign_states(x, Q);
  const auto plan = make_chunks(x.size(), opts.K, opts.chunk_policy);
  const auto locals = local_matrices(b, plan, opts.fallback);
  return temporal_mtf(b, plan, locals);
}

/// Full pipeline for the single-matrix field.
inline FieldImage encode_global_mtf(const TimeSeries& x, std::size_t Q) {
  const auto b = assign_states(x, Q);
  return global_mtf(b, global_matrix(b, FallbackPolicy::uniform));
}

/// One TMTF channel per bin count, in the given order. All preconditions
/// are validated before any channel is computed.
inline ChannelStack multi_resolution(const TimeSeries& x, std::span<const std::size_t> Q_list,
                                     const EncodeOptions& opts) {
  if (Q_list.empty()) {
    throw Error(ErrorCode::invalid_params, "at least one bin count is required");
  }
  for (std::size_t Q : Q_list) {
    if (Q < 2 || Q > x.size()) {
      throw Error(ErrorCode::invalid_bin_count,
                  "bin count Q=" + std::to_string(Q) + " must satisfy 2 <= Q <= T=" +
                      std::to_string(x.size()));
    }
  }
  const auto plan = make_chunks(x.size(), opts.K, opts.chunk_policy);

  ChannelStack stack;
  stack.K = plan.K();
  stack.Q_list.assign(Q_list.begin(), Q_list.end());
  stack.channels.reserve(Q_list.size());
  for (std::size_t Q : Q_list) {
    const auto b = assign_states(x, Q);
    const auto locals = local_matrices(b, plan, opts.fallback);
    stack.channels.push_back(temporal_mtf(b, plan, locals));
  }
  return stack;
}

namespace detail {

// Area weights mapping T input cells onto S output cells. Output cell a
// spans [a*T/S, (a+1)*T/S) in input coordinates; scaling by S keeps all
// overlaps integral.
struct PoolWeight {
  std::size_t index;
  double weight;
};

inline std::vector<std::vector<PoolWeight>> pool_weights(std::size_t T, std::size_t S) {
  std::vector<std::vector<PoolWeight>> w(S);
  const double denom = static_cast<double>(T);
  for (std::size_t a = 0; a < S; ++a) {
    const std::size_t lo = a * T, hi = (a + 1) * T;
    for (std::size_t i = lo / S; i < T && i * S < hi; ++i) {
      const std::size_t overlap = std::min(hi, (i + 1) * S) - std::max(lo, i * S);
      if (overlap > 0) w[a].push_back({i, static_cast<double>(overlap) / denom});
    }
  }
  return w;
}

}  // namespace detail

/// Average-pool to S x S. Fractional block edges (S not dividing T) are
/// apportioned by overlap area.
inline FieldImage pool(const FieldImage& img, std::size_t S) {
  const std::size_t T = img.side;
  if (S < 1 || S > T) {
    throw Error(ErrorCode::invalid_params,
                "pool size " + std::to_string(S) + " must lie in [1, " + std::to_string(T) + "]");
  }
  if (S == T) return img;

  const auto weights = detail::pool_weights(T, S);

  // rows first: S x T
  std::vector<double> partial(S * T, 0.0);
  for (std::size_t a = 0; a < S; ++a)
    for (const auto& w : weights[a]) {
      const auto src = img.row(w.index);
      double* dst = partial.data() + a * T;
      for (std::size_t j = 0; j < T; ++j) dst[j] += w.weight * src[j];
    }

  FieldImage out{S, img.kind, img.Q, img.K, std::vector<double>(S * S, 0.0)};
  for (std::size_t a = 0; a < S; ++a) {
    const double* src = partial.data() + a * T;
    for (std::size_t c = 0; c < S; ++c) {
      double acc = 0.0;
      for (const auto& w : weights[c]) acc += w.weight * src[w.index];
      out.entries[a * S + c] = std::clamp(acc, 0.0, 1.0);
    }
  }
  return out;
}

/// Number of row classes. With tol == 0 rows are compared exactly; otherwise
/// each row joins the first earlier class representative whose entrywise
/// max-difference is <= tol.
inline std::size_t distinct_rows(const FieldImage& img, double tol = 0.0) {
  const std::size_t n = img.side;
  if (n == 0) return 0;
  if (tol <= 0.0) {
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    auto less = [&](std::size_t a, std::size_t b) {
      auto ra = img.row(a), rb = img.row(b);
      return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
    };
    std::sort(order.begin(), order.end(), less);
    std::size_t classes = 1;
    for (std::size_t k = 1; k < n; ++k)
      if (less(order[k - 1], order[k])) ++classes;
    return classes;
  }

  std::vector<std::size_t> reps;
  for (std::size_t i = 0; i < n; ++i) {
    const auto row = img.row(i);
    bool matched = false;
    for (std::size_t r : reps) {
      const auto rep = img.row(r);
      double diff = 0.0;
      for (std::size_t j = 0; j < n && diff <= tol; ++j) diff = std::max(diff, std::abs(row[j] - rep[j]));
      if (diff <= tol) {
        matched = true;
        break;
      }
    }
    if (!matched) reps.push_back(i);
  }
  return reps.size();
}

}  // namespace tmtf
