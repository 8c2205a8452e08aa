#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <map>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tmtf/diagnostics.hpp"
#include "tmtf/field.hpp"
#include "tmtf/io.hpp"
#include "tmtf/synth.hpp"

namespace tmtf::cli {

enum ExitCode : int { ok = 0, usage_error = 1, data_error = 2 };

enum class Mode { temporal, global };
enum class Format { npy, pgm, csv };

/// Generator flags as given on the command line.
struct GeneratorArgs {
  std::string kind;
  std::string config;
  std::size_t length = 400;
  double phi = 0.5;
  double scale = 1.0;
  double slope = 1.0;
  double start = 0.0;
  std::optional<std::uint64_t> seed;

  bool requested() const { return !kind.empty() || !config.empty(); }

  GeneratorSpec resolve() const {
    GeneratorSpec spec;
    if (!config.empty()) {
      std::ifstream in(config);
      if (!in) throw Error(ErrorCode::io_error, "cannot open generator config '" + config + "'");
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::invalid_input, "generator config '" + config + "': " + e.what());
      }
      spec = generator_from_json(j);
    } else {
      spec.kind = parse_generator_kind(kind);
      if (spec.kind == GeneratorKind::regime_switch)
        throw Error(ErrorCode::invalid_params, "regime_switch needs --generator-config");
      spec.T = length;
      spec.phi = phi;
      spec.scale = scale;
      spec.slope = slope;
      spec.start = start;
    }
    if (seed) spec.seed = *seed;
    return spec;
  }
};

/// Effective configuration of an encode/diagnose run.
struct RunConfig {
  std::string input;
  std::string column;
  GeneratorArgs generator;
  std::vector<std::size_t> Q_list{6};
  std::size_t K = 4;
  ChunkPolicy chunk_policy = ChunkPolicy::strict;
  FallbackPolicy fallback = FallbackPolicy::global;
  Mode mode = Mode::temporal;
  std::size_t pool = 0;  // 0: no pooling
  Format format = Format::npy;
  std::string output;
};

inline const char* to_string(ChunkPolicy p) { return p == ChunkPolicy::strict ? "strict" : "near_equal"; }
inline const char* to_string(FallbackPolicy p) {
  switch (p) {
    case FallbackPolicy::error: return "error";
    case FallbackPolicy::uniform: return "uniform";
    case FallbackPolicy::global: return "global";
  }
  return "unknown";
}
inline const char* to_string(Mode m) { return m == Mode::temporal ? "temporal" : "global"; }
inline const char* to_string(Format f) {
  switch (f) {
    case Format::npy: return "npy";
    case Format::pgm: return "pgm";
    case Format::csv: return "csv";
  }
  return "unknown";
}

inline nlohmann::json parameters_json(const RunConfig& c, std::optional<GeneratorSpec> gen,
                                      std::size_t T) {
  nlohmann::json j{{"input", c.input.empty() ? nlohmann::json(nullptr) : nlohmann::json(c.input)},
                   {"column", c.column},
                   {"T", T},
                   {"bins", c.Q_list},
                   {"chunks", c.mode == Mode::global ? 1 : c.K},
                   {"chunk_policy", to_string(c.chunk_policy)},
                   {"fallback", to_string(c.fallback)},
                   {"mode", to_string(c.mode)},
                   {"pool", c.pool == 0 ? nlohmann::json(nullptr) : nlohmann::json(c.pool)},
                   {"format", to_string(c.format)},
                   {"output", c.output}};
  j["generator"] = gen ? to_json(*gen) : nlohmann::json(nullptr);
  return j;
}

namespace detail {

inline void add_generator_options(CLI::App& app, GeneratorArgs& g) {
  app.add_option("--generator", g.kind,
                 "synthesize the series: ar1, random_walk, white_noise, linear_trend");
  app.add_option("--generator-config", g.config, "JSON generator spec");
  app.add_option("--length", g.length, "generated series length")->capture_default_str();
  app.add_option("--phi", g.phi, "AR(1) coefficient")->capture_default_str();
  app.add_option("--scale", g.scale, "innovation scale")->capture_default_str();
  app.add_option("--slope", g.slope, "linear_trend slope")->capture_default_str();
  app.add_option("--start", g.start, "initial level")->capture_default_str();
  app.add_option("--seed", g.seed, "generator seed");
}

inline void add_input_options(CLI::App& app, RunConfig& c) {
  app.add_option("--input", c.input, "CSV file holding the series");
  app.add_option("--column", c.column, "CSV column name or 0-based index");
  add_generator_options(app, c.generator);
}

inline void add_pipeline_options(CLI::App& app, RunConfig& c) {
  app.add_option("--bins", c.Q_list, "quantile bin count; repeat for channels")->capture_default_str();
  app.add_option("--chunks", c.K, "temporal chunk count K")->capture_default_str();
  app.add_option("--chunk-policy", c.chunk_policy, "strict or near_equal")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, ChunkPolicy>{{"strict", ChunkPolicy::strict},
                                             {"near_equal", ChunkPolicy::near_equal}}));
  app.add_option("--fallback", c.fallback, "unsampled-row policy: global, uniform, error")
      ->transform(CLI::CheckedTransformer(std::map<std::string, FallbackPolicy>{
          {"global", FallbackPolicy::global},
          {"uniform", FallbackPolicy::uniform},
          {"error", FallbackPolicy::error}}));
}

struct LoadedSeries {
  TimeSeries series;
  std::optional<GeneratorSpec> generator;
};

inline LoadedSeries load_series(const RunConfig& c) {
  if (!c.input.empty() && c.generator.requested())
    throw Error(ErrorCode::invalid_params, "--input and --generator are mutually exclusive");
  if (!c.input.empty()) return {io::read_csv(c.input, c.column), std::nullopt};
  if (c.generator.requested()) {
    auto spec = c.generator.resolve();
    return {generate(spec), spec};
  }
  throw Error(ErrorCode::invalid_params, "one of --input or --generator is required");
}

inline void check_bins(const RunConfig& c, std::size_t T) {
  if (c.Q_list.empty()) throw Error(ErrorCode::invalid_params, "at least one --bins is required");
  for (std::size_t Q : c.Q_list)
    if (Q < 2 || Q > T)
      throw Error(ErrorCode::invalid_bin_count, "bin count Q=" + std::to_string(Q) +
                                                    " must satisfy 2 <= Q <= T=" + std::to_string(T));
}

inline void warn_plan(const RunConfig& c, std::size_t T, std::ostream& err, nlohmann::json& record) {
  record["plan_checks"] = nlohmann::json::array();
  for (std::size_t Q : c.Q_list) {
    const auto report = check_plan(T, Q, c.K);
    record["plan_checks"].push_back(to_json(report));
    if (report.status == PlanStatus::warn)
      err << "warning: Q=" << Q << ", K=" << c.K << ": " << report.per_chunk_transitions
          << " transitions per chunk, fewer than the recommended " << report.required_min
          << " (max advisable K is " << max_chunks(T, Q) << ")\n";
  }
}

inline std::filesystem::path channel_path(const std::filesystem::path& base, std::size_t r,
                                          std::size_t Q) {
  auto p = base;
  p.replace_filename(base.stem().string() + "_ch" + std::to_string(r) + "_q" + std::to_string(Q) +
                     base.extension().string());
  return p;
}

inline nlohmann::json matrix_json(const TransitionMatrix& W) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t k = 0; k < W.Q(); ++k) {
    auto r = W.probs.row(k);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return rows;
}

inline int run_encode(const RunConfig& c, std::ostream& out, std::ostream& err) {
  auto [x, gen] = load_series(c);
  const std::size_t T = x.size();
  check_bins(c, T);
  if (c.pool > T)
    throw Error(ErrorCode::invalid_params,
                "pool size " + std::to_string(c.pool) + " exceeds T=" + std::to_string(T));

  nlohmann::json record{{"command", "encode"}, {"parameters", parameters_json(c, gen, T)}};

  ChannelStack stack;
  if (c.mode == Mode::temporal) {
    make_chunks(T, c.K, c.chunk_policy);  // validate before any work
    warn_plan(c, T, err, record);
    stack = multi_resolution(x, c.Q_list, {c.K, c.fallback, c.chunk_policy});
  } else {
    stack.K = 1;
    stack.Q_list = c.Q_list;
    for (std::size_t Q : c.Q_list) stack.channels.push_back(encode_global_mtf(x, Q));
  }
  if (c.pool > 0)
    for (auto& ch : stack.channels) ch = pool(ch, c.pool);

  const std::filesystem::path base(c.output);
  std::vector<std::string> written;
  if (c.format == Format::npy) {
    if (stack.channels.size() == 1)
      io::write_npy(stack.channels.front(), base);
    else
      io::write_npy(stack, base);
    written.push_back(base.string());
  } else {
    for (std::size_t r = 0; r < stack.channels.size(); ++r) {
      const auto path =
          stack.channels.size() == 1 ? base : channel_path(base, r, stack.Q_list[r]);
      if (c.format == Format::pgm)
        io::write_pgm(stack.channels[r], path);
      else
        io::write_image_csv(stack.channels[r], path);
      written.push_back(path.string());
    }
  }
  record["outputs"] = written;
  out << record.dump() << "\n";
  return ok;
}

inline int run_diagnose(const RunConfig& c, const std::string& output, std::ostream& out,
                        std::ostream& err) {
  auto [x, gen] = load_series(c);
  const std::size_t T = x.size();
  check_bins(c, T);
  const auto plan = make_chunks(T, c.K, c.chunk_policy);
  const RegimeThresholds thresholds;

  nlohmann::json doc{{"command", "diagnose"},
                     {"parameters", parameters_json(c, gen, T)},
                     {"thresholds", to_json(thresholds)},
                     {"max_chunks", nlohmann::json::object()}};
  warn_plan(c, T, err, doc);

  doc["channels"] = nlohmann::json::array();
  for (std::size_t Q : c.Q_list) {
    doc["max_chunks"][std::to_string(Q)] = max_chunks(T, Q);
    const auto b = assign_states(x, Q);
    const auto W = global_matrix(b, FallbackPolicy::uniform);
    const auto locals = local_matrices(b, plan, c.fallback, &W);

    nlohmann::json channel{{"Q", Q},
                           {"global",
                            {{"matrix", matrix_json(W)}, {"summary", to_json(summarize(W, thresholds))}}},
                           {"plan_check", to_json(check_plan(T, Q, c.K))}};
    channel["chunks"] = nlohmann::json::array();
    for (std::size_t k = 0; k < plan.K(); ++k) {
      std::vector<std::string> prov;
      for (auto p : locals[k].row_provenance) prov.emplace_back(tmtf::to_string(p));
      const auto summary = summarize(locals[k], thresholds);
      if (summary.fallback_rows > 0)
        err << "note: Q=" << Q << " chunk " << k + 1 << " has " << summary.fallback_rows
            << " fallback row(s)\n";
      channel["chunks"].push_back({{"chunk", k + 1},
                                   {"range", {plan.range(k).begin + 1, plan.range(k).end}},
                                   {"matrix", matrix_json(locals[k])},
                                   {"row_provenance", prov},
                                   {"summary", to_json(summary)}});
    }
    doc["channels"].push_back(std::move(channel));
  }

  const std::string text = doc.dump(2) + "\n";
  if (output.empty())
    out << text;
  else
    io::detail::write_file(output, text);
  return ok;
}

inline int run_synth(const GeneratorArgs& g, const std::string& output, std::ostream& out,
                     std::ostream& err) {
  if (!g.requested()) throw Error(ErrorCode::invalid_params, "--generator or --generator-config is required");
  const auto spec = g.resolve();
  const auto values = generate_values(spec);
  nlohmann::json record{{"command", "synth"},
                        {"parameters", {{"generator", to_json(spec)}, {"output", output}}}};
  if (output.empty()) {
    out << io::series_csv(values);
    err << record.dump() << "\n";
  } else {
    io::write_series_csv(values, output);
    out << record.dump() << "\n";
  }
  return ok;
}

}  // namespace detail

/// Entry point shared by the executable and the tests. args[0] is the
/// program name.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Markov transition field encoder for univariate time series", "tmtf"};
  app.require_subcommand(1);

  RunConfig enc;
  auto* encode = app.add_subcommand("encode", "encode a series as MTF/TMTF image(s)");
  detail::add_input_options(*encode, enc);
  detail::add_pipeline_options(*encode, enc);
  encode->add_option("--mode", enc.mode, "temporal (TMTF) or global (MTF)")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, Mode>{{"temporal", Mode::temporal}, {"global", Mode::global}}));
  encode->add_option("--pool", enc.pool, "average-pool each image to S x S");
  encode->add_option("--format", enc.format, "npy, pgm or csv")
      ->transform(CLI::CheckedTransformer(std::map<std::string, Format>{
          {"npy", Format::npy}, {"pgm", Format::pgm}, {"csv", Format::csv}}));
  encode->add_option("--output", enc.output, "output path")->required();

  RunConfig diag;
  std::string diag_output;
  auto* diagnose = app.add_subcommand("diagnose", "regime summaries and chunk-count advice (JSON)");
  detail::add_input_options(*diagnose, diag);
  detail::add_pipeline_options(*diagnose, diag);
  diagnose->add_option("--output", diag_output, "write JSON here instead of stdout");

  GeneratorArgs syn;
  std::string syn_output;
  auto* synth = app.add_subcommand("synth", "write a synthetic series as CSV");
  detail::add_generator_options(*synth, syn);
  synth->add_option("--output", syn_output, "CSV path (stdout if omitted)");

  // CLI11 takes the arguments without the program name, reversed
  std::vector<std::string> rest(args.begin() + (args.empty() ? 0 : 1), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) return ok;
    return usage_error;
  }

  try {
    if (encode->parsed()) return detail::run_encode(enc, out, err);
    if (diagnose->parsed()) return detail::run_diagnose(diag, diag_output, out, err);
    if (synth->parsed()) return detail::run_synth(syn, syn_output, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return is_configuration_error(e.code()) ? usage_error : data_error;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return data_error;
  }
  return usage_error;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  return run(std::vector<std::string>(argv, argv + argc), out, err);
}

}  // namespace tmtf::cli
