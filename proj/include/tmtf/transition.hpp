#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "tmtf/binning.hpp"
#include "tmtf/error.hpp"
#include "tmtf/matrix.hpp"

namespace tmtf {

/// Half-open index interval [begin, end) over 0-based time indices.
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end > begin ? end - begin : 0; }
  bool contains(std::size_t t) const noexcept { return t >= begin && t < end; }
  friend bool operator==(const IndexRange&, const IndexRange&) = default;
};

struct TransitionCounts {
  SquareMatrix<std::uint64_t> counts;
  std::vector<std::uint64_t> row_totals;

  std::size_t Q() const noexcept { return counts.size(); }
  std::uint64_t total() const noexcept {
    return std::accumulate(row_totals.begin(), row_totals.end(), std::uint64_t{0});
  }
};

enum class RowProvenance { sampled, fallback_global, fallback_uniform };

inline const char* to_string(RowProvenance p) noexcept {
  switch (p) {
    case RowProvenance::sampled: return "sampled";
    case RowProvenance::fallback_global: return "fallback_global";
    case RowProvenance::fallback_uniform: return "fallback_uniform";
  }
  return "unknown";
}

/// Row-stochastic Q x Q matrix; probs(k, l) estimates P(next = l | now = k).
struct TransitionMatrix {
  SquareMatrix<double> probs;
  std::vector<RowProvenance> row_provenance;

  std::size_t Q() const noexcept { return probs.size(); }
  bool fully_sampled() const noexcept {
    for (auto p : row_provenance)
      if (p != RowProvenance::sampled) return false;
    return true;
  }
};

/// What to do with a state that has no outgoing transition in the counted range.
enum class FallbackPolicy { error, uniform, global };

enum class ChunkPolicy { strict, near_equal };

/// Partition of 0..T-1 into K contiguous chunks in time order.
class ChunkPlan {
 public:
  ChunkPlan() = default;
  ChunkPlan(std::size_t T, std::vector<IndexRange> ranges) : T_(T), ranges_(std::move(ranges)) {
    chunk_of_.resize(T_);
    for (std::size_t c = 0; c < ranges_.size(); ++c)
      for (std::size_t t = ranges_[c].begin; t < ranges_[c].end; ++t) chunk_of_[t] = c;
  }

  std::size_t T() const noexcept { return T_; }
  std::size_t K() const noexcept { return ranges_.size(); }
  const std::vector<IndexRange>& ranges() const noexcept { return ranges_; }
  const IndexRange& range(std::size_t c) const { return ranges_[c]; }
  std::size_t chunk_of(std::size_t t) const { return chunk_of_[t]; }

 private:
  std::size_t T_ = 0;
  std::vector<IndexRange> ranges_;
  std::vector<std::size_t> chunk_of_;
};

/// Tally consecutive pairs (t, t+1) with both indices inside `range`.
inline TransitionCounts count_transitions(const StateSequence& b, IndexRange range) {
  if (range.size() == 0) {
    throw Error(ErrorCode::invalid_range, "empty index range");
  }
  if (range.end > b.size()) {
    throw Error(ErrorCode::invalid_range,
                "range end " + std::to_string(range.end) + " exceeds series length " +
                    std::to_string(b.size()));
  }
  TransitionCounts c{SquareMatrix<std::uint64_t>(b.Q, 0), std::vector<std::uint64_t>(b.Q, 0)};
  for (std::size_t t = range.begin; t + 1 < range.end; ++t) {
    ++c.counts(b[t], b[t + 1]);
    ++c.row_totals[b[t]];
  }
  return c;
}

inline TransitionCounts count_transitions(const StateSequence& b) {
  return count_transitions(b, IndexRange{0, b.size()});
}

/// Maximum-likelihood row normalization. Rows without any outgoing
/// transition are resolved by `fallback`; `global` is consulted only for
/// FallbackPolicy::global and must then be non-null.
inline TransitionMatrix normalize(const TransitionCounts& c, FallbackPolicy fallback,
                                  const TransitionMatrix* global = nullptr) {
  const std::size_t Q = c.Q();
  if (fallback == FallbackPolicy::global) {
    if (global == nullptr) {
      throw Error(ErrorCode::invalid_params, "global fallback requested without a global matrix");
    }
    if (global->Q() != Q) {
      throw Error(ErrorCode::dimension_mismatch,
                  "global matrix is " + std::to_string(global->Q()) + "x" +
                      std::to_string(global->Q()) + ", counts are " + std::to_string(Q) + "x" +
                      std::to_string(Q));
    }
  }

  TransitionMatrix W{SquareMatrix<double>(Q, 0.0),
                     std::vector<RowProvenance>(Q, RowProvenance::sampled)};
  for (std::size_t k = 0; k < Q; ++k) {
    const std::uint64_t total = c.row_totals[k];
    if (total > 0) {
      const double denom = static_cast<double>(total);
      for (std::size_t l = 0; l < Q; ++l)
        W.probs(k, l) = static_cast<double>(c.counts(k, l)) / denom;
      continue;
    }
    switch (fallback) {
      case FallbackPolicy::error:
        throw Error(ErrorCode::unsampled_state,
                    "state " + std::to_string(k + 1) + " has no outgoing transition");
      case FallbackPolicy::uniform:
        for (std::size_t l = 0; l < Q; ++l) W.probs(k, l) = 1.0 / static_cast<double>(Q);
        W.row_provenance[k] = RowProvenance::fallback_uniform;
        break;
      case FallbackPolicy::global: {
        auto src = global->probs.row(k);
        auto dst = W.probs.row(k);
        std::copy(src.begin(), src.end(), dst.begin());
        W.row_provenance[k] = RowProvenance::fallback_global;
        break;
      }
    }
  }
  return W;
}

/// Whole-series transition matrix. A state seen only at the final time step
/// has no successor; `fallback` must then be error or uniform.
inline TransitionMatrix global_matrix(const StateSequence& b,
                                      FallbackPolicy fallback = FallbackPolicy::uniform) {
  if (fallback == FallbackPolicy::global) {
    throw Error(ErrorCode::invalid_params, "the global matrix cannot fall back to itself");
  }
  return normalize(count_transitions(b), fallback);
}

inline ChunkPlan make_chunks(std::size_t T, std::size_t K, ChunkPolicy policy) {
  if (K == 0) {
    throw Error(ErrorCode::invalid_params, "chunk count must be at least 1");
  }
  if (2 * K > T) {
    throw Error(ErrorCode::chunk_too_small,
                "K=" + std::to_string(K) + " chunks over T=" + std::to_string(T) +
                    " leaves a chunk with fewer than 2 indices");
  }
  if (policy == ChunkPolicy::strict && T % K != 0) {
    throw Error(ErrorCode::divisibility,
                "K=" + std::to_string(K) + " does not divide T=" + std::to_string(T) +
                    " (use the near_equal chunk policy)");
  }
  std::vector<IndexRange> ranges;
  ranges.reserve(K);
  std::size_t begin = 0;
  for (std::size_t c = 0; c < K; ++c) {
    const std::size_t n = T / K + (c < T % K ? 1 : 0);
    ranges.push_back({begin, begin + n});
    begin += n;
  }
  return ChunkPlan(T, std::move(ranges));
}

/// One matrix per chunk, counting only pairs that lie entirely inside the
/// chunk. With FallbackPolicy::global and no `global` supplied, the global
/// matrix is estimated from `b` (uniform fallback for its own empty rows).
inline std::vector<TransitionMatrix> local_matrices(const StateSequence& b, const ChunkPlan& plan,
                                                    FallbackPolicy fallback,
                                                    const TransitionMatrix* global = nullptr) {
  if (plan.T() != b.size()) {
    throw Error(ErrorCode::dimension_mismatch,
                "chunk plan covers T=" + std::to_string(plan.T()) + " but series has " +
                    std::to_string(b.size()) + " states");
  }
  TransitionMatrix estimated;
  if (fallback == FallbackPolicy::global && global == nullptr) {
    estimated = global_matrix(b, FallbackPolicy::uniform);
    global = &estimated;
  }
  std::vector<TransitionMatrix> out;
  out.reserve(plan.K());
  for (const auto& range : plan.ranges())
    out.push_back(normalize(count_transitions(b, range), fallback, global));
  return out;
}

}  // namespace tmtf
