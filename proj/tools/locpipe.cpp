// locpipe: command-line front end for indexing, localization runs, the
// synthetic evaluation harness and navigation requests.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "wayloc/error.hpp"
#include "wayloc/evaluation.hpp"
#include "wayloc/flat_index.hpp"
#include "wayloc/kernels.hpp"
#include "wayloc/nav/gateway.hpp"
#include "wayloc/nav/prompt.hpp"
#include "wayloc/nav/request.hpp"
#include "wayloc/nav/tally.hpp"
#include "wayloc/pipeline.hpp"
#include "wayloc/simulator.hpp"
#include "wayloc/store.hpp"

namespace {

using wayloc::Errc;
using wayloc::Error;

constexpr int kExitNoPrediction = 3;

void add_pipeline_flags(CLI::App* cmd, wayloc::PipelineConfig& cfg) {
  cmd->add_option("--scale", cfg.scoring.sigma, "confidence decay scale sigma")->capture_default_str();
  cmd->add_option("--k", cfg.scoring.k, "neighbours per frame")->capture_default_str();
  cmd->add_option("--window", cfg.smoothing.window, "smoothing window size")->capture_default_str();
  cmd->add_option("--threshold", cfg.smoothing.threshold, "admission threshold")->capture_default_str();
  cmd->add_option("--stride", cfg.stride, "process every n-th frame")->capture_default_str();
}

std::unique_ptr<std::ofstream> open_out(const std::string& path) {
  auto out = std::make_unique<std::ofstream>(path, std::ios::trunc);
  if (!*out) throw Error(Errc::IoFailure, "cannot open " + path + " for writing");
  return out;
}

void emit(const nlohmann::json& j, const std::string& path) {
  if (path.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    *open_out(path) << j.dump(2) << '\n';
  }
}

/// Runs one localization session, streaming the trace if asked.
wayloc::QueryOutcome localize(const std::string& index_path, const std::string& stream_path,
                              const wayloc::PipelineConfig& cfg, const std::string& trace_path) {
  const auto index = wayloc::load_index(index_path);
  const auto stream = wayloc::read_store(stream_path);
  std::unique_ptr<std::ofstream> trace;
  if (!trace_path.empty()) trace = open_out(trace_path);
  const auto sink = [&](const wayloc::FrameTrace& f) {
    if (trace) wayloc::write_jsonl(*trace, f);
  };
  return wayloc::run_query(index, stream, cfg, sink);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Waypoint localization pipeline"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "locpipe 1.0");

  // build-index
  std::string store_path, index_out;
  auto* build = app.add_subcommand("build-index", "Build and persist a flat index from a store file");
  build->add_option("store", store_path, "embedding store file")->required()->check(CLI::ExistingFile);
  build->add_option("out", index_out, "index output path (manifest written to <out>.manifest)")->required();

  // query
  std::string index_path, stream_path, trace_path;
  wayloc::PipelineConfig qcfg;
  auto* query = app.add_subcommand("query", "Localize one query stream");
  query->add_option("index", index_path, "saved index")->required();
  query->add_option("stream", stream_path, "query stream store file")->required();
  query->add_option("--trace", trace_path, "write per-frame JSON Lines trace here");
  add_pipeline_flags(query, qcfg);

  // simulate
  std::string env_path, waypoint, sim_out;
  double seconds = 1.0;
  std::uint64_t seed = 1;
  int span = 0;
  std::size_t sim_stride = 1;
  auto* sim = app.add_subcommand("simulate", "Generate a synthetic query stream");
  sim->add_option("env-config", env_path, "environment config JSON")->required()->check(CLI::ExistingFile);
  sim->add_option("--waypoint", waypoint, "true waypoint label")->required();
  sim->add_option("--seconds", seconds, "stream duration")->capture_default_str();
  sim->add_option("--seed", seed, "stream seed")->capture_default_str();
  sim->add_option("--span", span, "pan span in degrees (default: config)");
  sim->add_option("--stride", sim_stride, "keep every n-th frame")->capture_default_str();
  sim->add_option("--out", sim_out, "output stream file")->required();

  // references
  std::string refs_out;
  auto* refs = app.add_subcommand("references", "Write the reference store of a synthetic environment");
  refs->add_option("env-config", env_path, "environment config JSON")->required()->check(CLI::ExistingFile);
  refs->add_option("out", refs_out, "output store file")->required();

  // eval
  std::size_t trials = 5;
  std::vector<int> spans;
  std::string report_out;
  wayloc::PipelineConfig ecfg;
  std::uint64_t eval_seed = 7;
  auto* eval = app.add_subcommand("eval", "Accuracy over seeded synthetic trials");
  eval->add_option("env-config", env_path, "environment config JSON")->required()->check(CLI::ExistingFile);
  eval->add_option("--trials", trials, "trials per waypoint and span")->capture_default_str();
  eval->add_option("--seconds", seconds, "query duration")->capture_default_str();
  eval->add_option("--spans", spans, "pan spans in degrees (default: config)")->delimiter(',');
  eval->add_option("--seed", eval_seed, "base seed")->capture_default_str();
  eval->add_option("--out", report_out, "write the JSON report here instead of stdout");
  add_pipeline_flags(eval, ecfg);

  // trace
  std::string truth;
  wayloc::PipelineConfig tcfg;
  auto* trace = app.add_subcommand("trace", "Per-frame confidence of the true waypoint");
  trace->add_option("env-config", env_path, "environment config JSON (simulated stream)");
  trace->add_option("--index", index_path, "saved index (recorded stream)");
  trace->add_option("--stream", stream_path, "recorded stream file");
  trace->add_option("--truth", truth, "true waypoint of a recorded stream");
  trace->add_option("--waypoint", waypoint, "true waypoint of a simulated stream");
  trace->add_option("--seconds", seconds, "simulated duration")->capture_default_str();
  trace->add_option("--seed", seed, "simulated stream seed")->capture_default_str();
  trace->add_option("--span", span, "pan span in degrees (default: config)");
  add_pipeline_flags(trace, tcfg);

  // calibrate
  wayloc::CalibrationPlan cal;
  wayloc::PipelineConfig ccfg;
  bool write_back = false;
  auto* calib = app.add_subcommand("calibrate", "Find the largest noise level meeting the accuracy target");
  calib->add_option("env-config", env_path, "environment config JSON")->required()->check(CLI::ExistingFile);
  calib->add_option("--start", cal.start)->capture_default_str();
  calib->add_option("--stop", cal.stop)->capture_default_str();
  calib->add_option("--step", cal.step)->capture_default_str();
  calib->add_option("--target", cal.target_accuracy)->capture_default_str();
  calib->add_option("--trials", cal.eval.trials_per_waypoint)->capture_default_str();
  calib->add_option("--seconds", cal.eval.seconds)->capture_default_str();
  calib->add_option("--spans", cal.eval.pan_spans)->delimiter(',')->capture_default_str();
  calib->add_option("--seed", cal.eval.seed)->capture_default_str();
  calib->add_flag("--write", write_back, "store the chosen noise level back into the config");
  add_pipeline_flags(calib, ccfg);

  // navigate
  std::string destination, map_path, prompt_path, mock_dir, endpoint, model = wayloc::nav::kDefaultModel,
                                                                      archive_dir;
  long timeout_s = wayloc::nav::kDefaultTimeout.count();
  wayloc::PipelineConfig ncfg;
  auto* nav = app.add_subcommand("navigate", "Localize, then ask the navigation model for directions");
  nav->add_option("--index", index_path, "saved index")->required();
  nav->add_option("--stream", stream_path, "query stream store file")->required();
  nav->add_option("--destination", destination, "point of interest to reach")->required();
  nav->add_option("--map", map_path, "preprocessed floor-plan image")->required();
  nav->add_option("--prompt-spec", prompt_path, "three-section system prompt file")->required();
  nav->add_option("--mock", mock_dir, "answer from a canned response directory instead of the network");
  nav->add_option("--endpoint", endpoint, "chat-completion URL (key read from NAV_LLM_API_KEY)");
  nav->add_option("--model", model)->capture_default_str();
  nav->add_option("--timeout", timeout_s, "seconds to wait for the model")->capture_default_str();
  nav->add_option("--archive", archive_dir, "directory for raw response, steps and request");
  add_pipeline_flags(nav, ncfg);

  // tally
  std::string judgments_path, reported_path;
  bool tally_json = false;
  auto* tal = app.add_subcommand("tally", "Count recorded correctness judgments");
  tal->add_option("judgments", judgments_path, "JSON Lines judgment file")->required()->check(CLI::ExistingFile);
  tal->add_option("--reported", reported_path, "published table to cross-check");
  tal->add_flag("--json", tally_json, "emit JSON instead of a table");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*build) {
      auto index = wayloc::FlatIndex::build(wayloc::read_store(store_path));
      wayloc::save_index(index, index_out);
      std::cout << nlohmann::json{{"index", index_out},
                                  {"manifest", wayloc::manifest_path(index_out).string()},
                                  {"count", index.size()},
                                  {"dim", index.dim()},
                                  {"kernel", wayloc::kernels::active().name}}
                       .dump(2)
                << '\n';
    } else if (*query) {
      try {
        const auto outcome = localize(index_path, stream_path, qcfg, trace_path);
        std::cout << wayloc::to_json(outcome.prediction).dump(2) << '\n';
      } catch (const Error& e) {
        if (e.code() != Errc::NoConfidentPrediction) throw;
        std::cout << nlohmann::json{{"error", "NoConfidentPrediction"}}.dump(2) << '\n';
        return kExitNoPrediction;
      }
    } else if (*sim) {
      const wayloc::SyntheticEnvironment base(wayloc::load_env_config(env_path));
      const auto env = span != 0 ? base.with_pan_span(span) : base;
      const auto stream = wayloc::simulate(env, wayloc::WaypointLabel(waypoint), seconds, seed, sim_stride);
      const auto bytes = wayloc::write_store(stream, sim_out);
      std::cout << nlohmann::json{{"out", sim_out}, {"frames", stream.size()}, {"bytes", bytes}}.dump(2) << '\n';
    } else if (*refs) {
      const wayloc::SyntheticEnvironment env(wayloc::load_env_config(env_path));
      const auto store = wayloc::reference_store(env);
      const auto bytes = wayloc::write_store(store, refs_out);
      std::cout << nlohmann::json{{"out", refs_out}, {"records", store.size()}, {"bytes", bytes}}.dump(2) << '\n';
    } else if (*eval) {
      const wayloc::SyntheticEnvironment env(wayloc::load_env_config(env_path));
      wayloc::EvalPlan plan{trials, seconds, spans.empty() ? std::vector<int>{env.config().pan_span} : spans,
                            eval_seed, true};
      emit(wayloc::to_json(wayloc::eval_accuracy(env, plan, ecfg)), report_out);
    } else if (*trace) {
      if (!env_path.empty()) {
        const wayloc::SyntheticEnvironment base(wayloc::load_env_config(env_path));
        const auto env = span != 0 ? base.with_pan_span(span) : base;
        if (waypoint.empty()) throw Error(Errc::InvalidArgument, "--waypoint is required with an env config");
        const wayloc::WaypointLabel label(waypoint);
        const auto index = wayloc::FlatIndex::build(wayloc::reference_store(env));
        const auto stream = wayloc::simulate(env, label, seconds, seed);
        emit(wayloc::to_json(wayloc::confidence_trace(index, stream, label, tcfg)), "");
      } else {
        if (index_path.empty() || stream_path.empty() || truth.empty()) {
          throw Error(Errc::InvalidArgument, "give an env config, or --index, --stream and --truth");
        }
        const auto index = wayloc::load_index(index_path);
        const auto stream = wayloc::read_store(stream_path);
        emit(wayloc::to_json(wayloc::confidence_trace(index, stream, wayloc::WaypointLabel(truth), tcfg)), "");
      }
    } else if (*calib) {
      std::ifstream in(env_path);
      auto raw = nlohmann::json::parse(in);
      const wayloc::SyntheticEnvironment env(wayloc::env_config_from_json(raw));
      const auto result = wayloc::calibrate(env, cal, ccfg);
      auto out = wayloc::to_json(result);
      std::cout << out.dump(2) << '\n';
      if (!result.chosen_noise) throw Error(Errc::InvalidConfig, "no grid noise level met the target");
      if (write_back) {
        raw["noise_level"] = *result.chosen_noise;
        raw["calibration"] = {{"target_accuracy", cal.target_accuracy},
                              {"trials_per_waypoint", cal.eval.trials_per_waypoint},
                              {"seconds", cal.eval.seconds},
                              {"pan_spans", cal.eval.pan_spans},
                              {"seed", cal.eval.seed},
                              {"grid", {cal.start, cal.stop, cal.step}},
                              {"points", out["points"]}};
        *open_out(env_path) << raw.dump(2) << '\n';
      }
    } else if (*nav) {
      const auto outcome = localize(index_path, stream_path, ncfg, "");
      const auto spec = wayloc::nav::load_prompt_spec(prompt_path);
      const auto request = wayloc::nav::build_nav_request(outcome.prediction.label, destination, map_path, spec);
      std::unique_ptr<wayloc::nav::NavGateway> gateway;
      if (!mock_dir.empty()) {
        gateway = std::make_unique<wayloc::nav::MockGateway>(mock_dir);
      } else if (!endpoint.empty()) {
        const char* key = std::getenv(wayloc::nav::kApiKeyEnv);
        gateway = std::make_unique<wayloc::nav::HttpGateway>(endpoint, key ? key : "");
      } else {
        throw Error(Errc::InvalidArgument, "navigate needs --mock <dir> or --endpoint <url>");
      }
      const auto set =
          wayloc::nav::request_instructions(*gateway, request, std::chrono::seconds(timeout_s), model);
      if (!archive_dir.empty()) wayloc::nav::archive_instructions(set, archive_dir);
      std::cout << nlohmann::json{{"origin", wayloc::to_json(outcome.prediction)},
                                  {"destination", destination},
                                  {"steps", set.steps}}
                       .dump(2)
                << '\n';
    } else if (*tal) {
      const auto judgments = wayloc::nav::load_judgments(judgments_path);
      std::vector<wayloc::nav::ReportedRow> reported;
      if (!reported_path.empty()) reported = wayloc::nav::load_reported(reported_path);
      const auto report = wayloc::nav::tally(judgments, reported);
      if (tally_json) {
        std::cout << wayloc::nav::to_json(report).dump(2) << '\n';
      } else {
        std::cout << wayloc::nav::format_table(report);
      }
    }
  } catch (const Error& e) {
    std::cerr << "locpipe: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "locpipe: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
