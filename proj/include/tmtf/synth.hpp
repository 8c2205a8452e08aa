#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "json.hpp"
#include "tmtf/binning.hpp"
#include "tmtf/error.hpp"

namespace tmtf {

/// SplitMix64 (Steele, Lea & Flood), used only to expand a seed.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}
  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// xoshiro256** 1.0 (Blackman & Vigna), state filled by four SplitMix64 draws.
///   uniform(): (next() >> 11) * 2^-53, in [0, 1)
///   normal():  Box-Muller, z = sqrt(-2 ln(1 - u1)) * cos(2 pi u2); the sine
///              variate is discarded so each normal consumes exactly two draws.
class Xoshiro256 {
 public:
  explicit Xoshiro256(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& s : s_) s = sm.next();
  }

  std::uint64_t next() noexcept {
    const std::uint64_t result = std::rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = std::rotl(s_[3], 45);
    return result;
  }

  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double normal() noexcept {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::uint64_t s_[4];
};

enum class GeneratorKind { ar1, random_walk, white_noise, linear_trend, regime_switch };

inline const char* to_string(GeneratorKind k) noexcept {
  switch (k) {
    case GeneratorKind::ar1: return "ar1";
    case GeneratorKind::random_walk: return "random_walk";
    case GeneratorKind::white_noise: return "white_noise";
    case GeneratorKind::linear_trend: return "linear_trend";
    case GeneratorKind::regime_switch: return "regime_switch";
  }
  return "unknown";
}

inline GeneratorKind parse_generator_kind(const std::string& s) {
  for (auto k : {GeneratorKind::ar1, GeneratorKind::random_walk, GeneratorKind::white_noise,
                 GeneratorKind::linear_trend, GeneratorKind::regime_switch})
    if (s == to_string(k)) return k;
  throw Error(ErrorCode::invalid_params, "unknown generator kind '" + s + "'");
}

struct GeneratorSpec;

struct Segment {
  std::size_t length = 0;
  std::vector<GeneratorSpec> spec;  // exactly one element; vector allows the recursive type
};

/// Synthetic series recipe.
///   ar1:          x_t = phi x_{t-1} + scale e_t, x_0 = start
///   random_walk:  ar1 with phi = 1
///   white_noise:  x_t = start + scale e_t
///   linear_trend: x_t = start + slope t + scale e_t, t = 1..T
///   regime_switch: segments drawn from one stream seeded by `seed`; each
///                  segment after the first starts from the previous segment's
///                  last value (used as its `start`). Segment seeds and
///                  lengths in sub-specs are ignored.
struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::white_noise;
  std::size_t T = 0;
  std::uint64_t seed = 0;
  double phi = 0.0;
  double scale = 1.0;
  double slope = 0.0;
  double start = 0.0;
  std::vector<Segment> segments;
};

inline void validate(const GeneratorSpec& spec, bool check_length = true) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::invalid_params, msg); };
  if (!std::isfinite(spec.phi) || !std::isfinite(spec.scale) || !std::isfinite(spec.slope) ||
      !std::isfinite(spec.start))
    fail("generator parameters must be finite");
  if (spec.scale < 0) fail("noise scale must be non-negative");
  if (spec.kind == GeneratorKind::ar1 && std::abs(spec.phi) >= 1.05)
    fail("ar1 requires |phi| < 1.05");
  if (spec.kind == GeneratorKind::regime_switch) {
    if (spec.segments.empty()) fail("regime_switch needs at least one segment");
    for (const auto& seg : spec.segments) {
      if (seg.spec.size() != 1) fail("each segment holds exactly one sub-spec");
      if (seg.length == 0) fail("segment length must be positive");
      if (seg.spec.front().kind == GeneratorKind::regime_switch)
        fail("nested regime_switch segments are not supported");
      validate(seg.spec.front(), false);
    }
  } else if (check_length && spec.T == 0) {
    fail("series length must be positive");
  }
}

namespace detail {

inline void generate_into(const GeneratorSpec& spec, std::size_t T, double start, Xoshiro256& rng,
                          std::vector<double>& out) {
  switch (spec.kind) {
    case GeneratorKind::ar1:
    case GeneratorKind::random_walk: {
      const double phi = spec.kind == GeneratorKind::random_walk ? 1.0 : spec.phi;
      double x = start;
      for (std::size_t t = 0; t < T; ++t) {
        x = phi * x + spec.scale * rng.normal();
        out.push_back(x);
      }
      break;
    }
    case GeneratorKind::white_noise:
      for (std::size_t t = 0; t < T; ++t) out.push_back(start + spec.scale * rng.normal());
      break;
    case GeneratorKind::linear_trend:
      for (std::size_t t = 1; t <= T; ++t) {
        double v = start + spec.slope * static_cast<double>(t);
        if (spec.scale != 0.0) v += spec.scale * rng.normal();
        out.push_back(v);
      }
      break;
    case GeneratorKind::regime_switch:
      break;
  }
}

}  // namespace detail

/// Raw values (no length check, so T = 1 recipes are allowed here).
inline std::vector<double> generate_values(const GeneratorSpec& spec) {
  validate(spec);
  Xoshiro256 rng(spec.seed);
  std::vector<double> out;
  if (spec.kind != GeneratorKind::regime_switch) {
    out.reserve(spec.T);
    detail::generate_into(spec, spec.T, spec.start, rng, out);
    return out;
  }
  for (std::size_t s = 0; s < spec.segments.size(); ++s) {
    const auto& seg = spec.segments[s];
    const auto& sub = seg.spec.front();
    const double start = s == 0 ? sub.start : out.back();
    detail::generate_into(sub, seg.length, start, rng, out);
  }
  return out;
}

inline TimeSeries generate(const GeneratorSpec& spec) { return TimeSeries(generate_values(spec)); }

inline GeneratorSpec generator_from_json(const nlohmann::json& j) {
  try {
    GeneratorSpec spec;
    spec.kind = parse_generator_kind(j.at("kind").get<std::string>());
    spec.T = j.value("T", std::size_t{0});
    spec.seed = j.value("seed", std::uint64_t{0});
    spec.phi = j.value("phi", 0.0);
    spec.scale = j.value("scale", 1.0);
    spec.slope = j.value("slope", 0.0);
    spec.start = j.value("start", 0.0);
    if (j.contains("segments")) {
      for (const auto& s : j.at("segments")) {
        Segment seg;
        seg.length = s.at("length").get<std::size_t>();
        seg.spec.push_back(generator_from_json(s.at("spec")));
        spec.segments.push_back(std::move(seg));
      }
      if (spec.kind == GeneratorKind::regime_switch) {
        spec.T = 0;
        for (const auto& seg : spec.segments) spec.T += seg.length;
      }
    }
    return spec;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_params, std::string("generator config: ") + e.what());
  }
}

inline nlohmann::json to_json(const GeneratorSpec& spec) {
  nlohmann::json j{{"kind", to_string(spec.kind)}, {"T", spec.T},         {"seed", spec.seed},
                   {"phi", spec.phi},              {"scale", spec.scale}, {"slope", spec.slope},
                   {"start", spec.start}};
  if (spec.kind == GeneratorKind::regime_switch) {
    j["segments"] = nlohmann::json::array();
    for (const auto& seg : spec.segments)
      j["segments"].push_back({{"length", seg.length}, {"spec", to_json(seg.spec.front())}});
  }
  return j;
}

}  // namespace tmtf
