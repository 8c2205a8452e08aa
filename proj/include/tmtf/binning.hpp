#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "tmtf/error.hpp"

namespace tmtf {

using State = std::uint32_t;

/// A finite, real-valued observation sequence of length T >= 2.
class TimeSeries {
 public:
  TimeSeries() = default;

  explicit TimeSeries(std::vector<double> values) : values_(std::move(values)) {
    if (values_.size() < 2) {
      throw Error(ErrorCode::invalid_input,
                  "a time series needs at least 2 observations, got " +
                      std::to_string(values_.size()));
    }
    for (std::size_t t = 0; t < values_.size(); ++t) {
      if (!std::isfinite(values_[t])) {
        throw Error(ErrorCode::invalid_input,
                    "non-finite value at index " + std::to_string(t));
      }
    }
  }

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t t) const { return values_[t]; }
  std::span<const double> values() const noexcept { return values_; }

 private:
  std::vector<double> values_;
};

enum class AssignmentMode { rank_based };

/// Bin metadata. boundaries[0] is the series minimum and boundaries[k+1] the
/// largest value assigned to state k. Boundaries are non-decreasing; they are
/// strictly increasing unless ties straddle a bin edge. Display only.
struct BinSpec {
  std::size_t Q = 0;
  std::vector<double> boundaries;
  AssignmentMode assignment_mode = AssignmentMode::rank_based;
};

/// Per-time-step quantile states. States are 0-based: 0 .. Q-1.
struct StateSequence {
  std::vector<State> states;
  std::size_t Q = 0;
  BinSpec source_bins;

  std::size_t size() const noexcept { return states.size(); }
  State operator[](std::size_t t) const { return states[t]; }
};

/// Number of observations placed in bin k when T observations are split into
/// Q equal-count bins. The T mod Q leftovers go to the lowest bins.
constexpr std::size_t bin_occupancy(std::size_t T, std::size_t Q, std::size_t k) noexcept {
  return T / Q + (k < T % Q ? 1 : 0);
}

/// Equal-count quantile binning by rank. Observations are ordered by
/// (value, time index); consecutive blocks of that order become states
/// 0, 1, ..., Q-1. Any strictly increasing transform of the values leaves the
/// result unchanged.
inline StateSequence assign_states(const TimeSeries& x, std::size_t Q) {
  const std::size_t T = x.size();
  if (T < 2) {
    throw Error(ErrorCode::invalid_input, "time series is empty or too short");
  }
  if (Q < 2 || Q > T) {
    throw Error(ErrorCode::invalid_bin_count,
                "bin count Q=" + std::to_string(Q) + " must satisfy 2 <= Q <= T=" +
                    std::to_string(T));
  }

  std::vector<std::size_t> order(T);
  std::iota(order.begin(), order.end(), std::size_t{0});
  // stable_sort keeps equal values in time order
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

  StateSequence out;
  out.Q = Q;
  out.states.resize(T);
  out.source_bins.Q = Q;
  out.source_bins.boundaries.reserve(Q + 1);
  out.source_bins.boundaries.push_back(x[order.front()]);

  std::size_t rank = 0;
  for (std::size_t k = 0; k < Q; ++k) {
    const std::size_t n = bin_occupancy(T, Q, k);
    for (std::size_t r = 0; r < n; ++r, ++rank) {
      out.states[order[rank]] = static_cast<State>(k);
    }
    out.source_bins.boundaries.push_back(x[order[rank - 1]]);
  }
  return out;
}

/// Occurrence count of every state.
inline std::vector<std::size_t> occupancy(const StateSequence& b) {
  std::vector<std::size_t> counts(b.Q, 0);
  for (State s : b.states) ++counts[s];
  return counts;
}

}  // namespace tmtf
