#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "json.hpp"
#include "tmtf/transition.hpp"

namespace tmtf {

enum class RegimeLabel { persistent, mean_reverting, trending_up, trending_down, uniform_like, mixed };

inline const char* to_string(RegimeLabel label) noexcept {
  switch (label) {
    case RegimeLabel::persistent: return "persistent";
    case RegimeLabel::mean_reverting: return "mean_reverting";
    case RegimeLabel::trending_up: return "trending_up";
    case RegimeLabel::trending_down: return "trending_down";
    case RegimeLabel::uniform_like: return "uniform_like";
    case RegimeLabel::mixed: return "mixed";
  }
  return "unknown";
}

/// Labeling constants. Thresholds written as multiples of 1/Q scale with the
/// uniform baseline of a single matrix entry.
struct RegimeThresholds {
  double uniform_dev_per_inv_q = 0.5;     // uniformity_dev <= 0.5/Q
  double uniform_max_abs_corr = 0.05;     // |lag1 correlation| <= 0.05
  double trend_opposite_share = 0.05;     // opposite-direction share of off-diagonal mass
  double persistent_diag_per_inv_q = 2.0; // diag_mass >= 2/Q
  double reverting_diag_per_inv_q = 1.5;  // diag_mass <= 1.5/Q
};

inline nlohmann::json to_json(const RegimeThresholds& t) {
  return {{"uniform_dev_per_inv_q", t.uniform_dev_per_inv_q},
          {"uniform_max_abs_corr", t.uniform_max_abs_corr},
          {"trend_opposite_share", t.trend_opposite_share},
          {"persistent_diag_per_inv_q", t.persistent_diag_per_inv_q},
          {"reverting_diag_per_inv_q", t.reverting_diag_per_inv_q}};
}

struct RegimeSummary {
  std::size_t Q = 0;
  double diag_mass = 0;       ///< mean diagonal entry
  double upper_mass = 0;      ///< strictly-upper sum / Q
  double lower_mass = 0;      ///< strictly-lower sum / Q
  double uniformity_dev = 0;  ///< max |W_kl - 1/Q|
  /// Lag-1 correlation of state indices implied by W when every state is
  /// equally occupied (which equal-count binning guarantees up to one
  /// observation). Positive for persistent dynamics, near 0 for memoryless.
  double lag1_state_correlation = 0;
  std::size_t fallback_rows = 0;
  RegimeLabel label = RegimeLabel::mixed;
};

/// Total and deterministic; depends only on the summary statistics.
inline RegimeLabel classify(const RegimeSummary& s, const RegimeThresholds& th = {}) {
  const double inv_q = 1.0 / static_cast<double>(s.Q);
  const double off = s.upper_mass + s.lower_mass;

  if (s.uniformity_dev <= th.uniform_dev_per_inv_q * inv_q &&
      std::abs(s.lag1_state_correlation) <= th.uniform_max_abs_corr)
    return RegimeLabel::uniform_like;
  if (s.upper_mass > 0 && s.lower_mass <= th.trend_opposite_share * off)
    return RegimeLabel::trending_up;
  if (s.lower_mass > 0 && s.upper_mass <= th.trend_opposite_share * off)
    return RegimeLabel::trending_down;
  if (s.diag_mass >= th.persistent_diag_per_inv_q * inv_q &&
      s.diag_mass >= std::max(s.upper_mass, s.lower_mass))
    return RegimeLabel::persistent;
  if (s.diag_mass <= th.reverting_diag_per_inv_q * inv_q) return RegimeLabel::mean_reverting;
  return RegimeLabel::mixed;
}

inline RegimeSummary summarize(const TransitionMatrix& W, const RegimeThresholds& th = {}) {
  const std::size_t Q = W.Q();
  const double q = static_cast<double>(Q);
  const double mid = (q - 1.0) / 2.0;
  const double var = (q * q - 1.0) / 12.0;

  RegimeSummary s;
  s.Q = Q;
  double diag = 0, upper = 0, lower = 0, cross = 0;
  for (std::size_t k = 0; k < Q; ++k) {
    for (std::size_t l = 0; l < Q; ++l) {
      const double w = W.probs(k, l);
      if (k == l)
        diag += w;
      else if (l > k)
        upper += w;
      else
        lower += w;
      s.uniformity_dev = std::max(s.uniformity_dev, std::abs(w - 1.0 / q));
      cross += w * (static_cast<double>(k) - mid) * (static_cast<double>(l) - mid);
    }
    if (W.row_provenance[k] != RowProvenance::sampled) ++s.fallback_rows;
  }
  s.diag_mass = diag / q;
  s.upper_mass = upper / q;
  s.lower_mass = lower / q;
  s.lag1_state_correlation = cross / q / var;
  s.label = classify(s, th);
  return s;
}

inline nlohmann::json to_json(const RegimeSummary& s) {
  return {{"Q", s.Q},
          {"diag_mass", s.diag_mass},
          {"upper_mass", s.upper_mass},
          {"lower_mass", s.lower_mass},
          {"uniformity_dev", s.uniformity_dev},
          {"lag1_state_correlation", s.lag1_state_correlation},
          {"fallback_rows", s.fallback_rows},
          {"label", to_string(s.label)}};
}

/// Largest K with T/K >= 5Q^2 + 1, floored, reported as at least 1.
constexpr std::size_t max_chunks(std::size_t T, std::size_t Q) noexcept {
  const std::size_t k = T / (5 * Q * Q + 1);
  return k == 0 ? 1 : k;
}

enum class PlanStatus { pass, warn };

struct PlanReport {
  std::size_t T = 0, Q = 0, K = 0;
  std::size_t per_chunk_transitions = 0;  ///< transitions in the smallest chunk
  std::size_t required_min = 0;           ///< 5 Q^2
  PlanStatus status = PlanStatus::pass;
};

/// Advisory check of the per-chunk sample size against 5Q transitions per row.
inline PlanReport check_plan(std::size_t T, std::size_t Q, std::size_t K) {
  PlanReport r{T, Q, K, 0, 5 * Q * Q, PlanStatus::pass};
  const std::size_t smallest = K == 0 ? 0 : T / K;
  r.per_chunk_transitions = smallest > 0 ? smallest - 1 : 0;
  r.status = r.per_chunk_transitions >= r.required_min ? PlanStatus::pass : PlanStatus::warn;
  return r;
}

inline nlohmann::json to_json(const PlanReport& r) {
  return {{"T", r.T},
          {"Q", r.Q},
          {"K", r.K},
          {"per_chunk_transitions", r.per_chunk_transitions},
          {"required_min", r.required_min},
          {"status", r.status == PlanStatus::pass ? "pass" : "warn"}};
}

}  // namespace tmtf
