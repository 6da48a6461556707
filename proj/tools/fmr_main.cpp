//===- fmr_main.cpp - Command line front end ------------------------------===//
//
// Part of the fmr project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//
//
// Thin front end over the fmr C API. Subcommands:
//
//   fmr analyze PROGRAM --target VAR=MODE     backward failure analysis
//   fmr explain PROGRAM --target VAR=MODE     same, with derivation traces
//   fmr quantify PROGRAM --target ... --data  analysis plus probabilities
//   fmr verify-fmb [KIND]                     check tables against simulation
//
// Exit codes: 0 success, 1 operational failure (analysis error, failed
// verification), 2 usage or input format error.
//
//===----------------------------------------------------------------------===//

#include "fmr/fmr.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

using Json = nlohmann::ordered_json;

using CatalogPtr = std::unique_ptr<fmr_catalog, decltype(&fmr_catalog_free)>;
using ProgramPtr = std::unique_ptr<fmr_program, decltype(&fmr_program_free)>;
using ResultPtr = std::unique_ptr<fmr_result, decltype(&fmr_result_free)>;

// 0 success, 1 operational failure, 2 bad usage/input.
int exit_code_for(fmr_status status) {
  switch (status) {
  case FMR_OK:
    return 0;
  case FMR_ERR_PARSE:
  case FMR_ERR_INVALID_ARG:
    return 2;
  default:
    return 1;
  }
}

std::string read_input(const std::string &path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct TargetSpec {
  std::string var;
  char mode = '?';
  std::string label;
};

TargetSpec parse_target(const std::string &spec) {
  auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 2 != spec.size())
    throw std::runtime_error("target must be VAR=MODE with a single mode "
                             "letter, got '" +
                             spec + "'");
  return {spec.substr(0, eq), spec[eq + 1], ""};
}

std::vector<TargetSpec> parse_manifest(const std::string &text) {
  Json doc = Json::parse(text);
  const Json *targets = &doc;
  if (doc.is_object()) {
    if (!doc.contains("targets"))
      throw std::runtime_error("manifest object must contain \"targets\"");
    targets = &doc["targets"];
  }
  if (!targets->is_array() || targets->empty())
    throw std::runtime_error("manifest \"targets\" must be a nonempty array");
  std::vector<TargetSpec> out;
  for (const Json &t : *targets) {
    if (!t.is_object() || !t.contains("var") || !t.contains("mode"))
      throw std::runtime_error(
          "each manifest target needs \"var\" and \"mode\"");
    std::string mode = t["mode"].get<std::string>();
    if (mode.size() != 1)
      throw std::runtime_error("manifest target mode must be one letter");
    TargetSpec spec;
    spec.var = t["var"].get<std::string>();
    spec.mode = mode[0];
    if (t.contains("label"))
      spec.label = t["label"].get<std::string>();
    out.push_back(std::move(spec));
  }
  return out;
}

struct AnalyzeArgs {
  std::string program_path;
  std::string target;
  std::string manifest_path;
  std::vector<std::string> fmb_files;
  std::string variant = "practical";
  bool no_prune_match = false;
  bool include_uncertain = false;
  std::string data_path;
  std::string method = "exact";
  std::string format = "text";
  std::string label;
};

void add_analyze_flags(CLI::App *cmd, AnalyzeArgs &args, bool data_required) {
  cmd->add_option("program", args.program_path,
                  "program file (fmrprog v1), or - for stdin")
      ->required();
  cmd->add_option("--target", args.target, "target as VAR=MODE, e.g. o=f");
  cmd->add_option("--manifest", args.manifest_path,
                  "JSON file with a \"targets\" array of {var, mode, label}");
  cmd->add_option("--fmb", args.fmb_files,
                  "additional block kind tables (fmb v1); repeatable");
  cmd->add_option("--variant", args.variant, "fault table variant")
      ->check(CLI::IsMember({"practical", "theoretical"}))
      ->capture_default_str();
  cmd->add_flag("--no-prune-match", args.no_prune_match,
                "track match-mode literals instead of dropping them");
  cmd->add_flag("--include-uncertain", args.include_uncertain,
                "use uncertain table rows (theoretical variant)");
  auto *data = cmd->add_option("--data", args.data_path,
                               "failure data JSON (per-variable mode "
                               "probabilities)");
  if (data_required)
    data->required();
  cmd->add_option("--method", args.method, "probability aggregation")
      ->check(CLI::IsMember({"exact", "inclusion-exclusion", "rare",
                             "rare-event"}))
      ->capture_default_str();
  cmd->add_option("--format", args.format, "output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
  cmd->add_option("--label", args.label, "free-form label echoed in reports");
}

Json envelope(const char *command, const std::string &program_path) {
  Json env;
  env["fmr_report"] = 1;
  env["tool_version"] = fmr_version();
  env["command"] = command;
  if (!program_path.empty())
    env["program"] = program_path;
  return env;
}

int run_analyze(const char *command, const AnalyzeArgs &args,
                bool with_provenance) {
  if (args.target.empty() == args.manifest_path.empty()) {
    std::cerr << "fmr: exactly one of --target and --manifest is required\n";
    return 2;
  }

  fmr_catalog *cat_raw = nullptr;
  if (fmr_status s = fmr_catalog_create(&cat_raw); s != FMR_OK) {
    std::cerr << "fmr: " << fmr_last_error() << '\n';
    return exit_code_for(s);
  }
  CatalogPtr catalog(cat_raw, fmr_catalog_free);
  for (const std::string &path : args.fmb_files) {
    std::string text = read_input(path);
    if (fmr_status s = fmr_catalog_load_fmb(catalog.get(), text.c_str());
        s != FMR_OK) {
      std::cerr << "fmr: " << path << ": " << fmr_last_error() << '\n';
      return exit_code_for(s);
    }
  }

  std::string program_text = read_input(args.program_path);
  fmr_program *prog_raw = nullptr;
  if (fmr_status s =
          fmr_program_parse(catalog.get(), program_text.c_str(), &prog_raw);
      s != FMR_OK) {
    std::cerr << "fmr: " << args.program_path << ": " << fmr_last_error()
              << '\n';
    return exit_code_for(s);
  }
  ProgramPtr program(prog_raw, fmr_program_free);

  std::vector<TargetSpec> targets;
  if (!args.manifest_path.empty())
    targets = parse_manifest(read_input(args.manifest_path));
  else
    targets.push_back(parse_target(args.target));
  if (!args.label.empty() && targets.size() == 1)
    targets[0].label = args.label;

  std::optional<std::string> data_text;
  if (!args.data_path.empty())
    data_text = read_input(args.data_path);

  fmr_analysis_options opts;
  fmr_analysis_options_init(&opts);
  opts.practical = args.variant == "practical" ? 1 : 0;
  opts.prune_match = args.no_prune_match ? 0 : 1;
  opts.include_uncertain = args.include_uncertain ? 1 : 0;
  opts.with_provenance = with_provenance ? 1 : 0;

  Json env = envelope(command, args.program_path);
  Json runs = Json::array();
  std::string text_out;

  for (const TargetSpec &target : targets) {
    fmr_result *res_raw = nullptr;
    fmr_status s = fmr_analyze(catalog.get(), program.get(),
                               target.var.c_str(), target.mode, &opts,
                               data_text ? data_text->c_str() : nullptr,
                               data_text ? args.method.c_str() : nullptr,
                               &res_raw);
    if (s != FMR_OK) {
      std::cerr << "fmr: target " << target.var << '=' << target.mode << ": "
                << fmr_last_error() << '\n';
      return exit_code_for(s);
    }
    ResultPtr res(res_raw, fmr_result_free);

    Json run = Json::parse(fmr_result_json(res.get()));
    if (!target.label.empty()) {
      Json labeled;
      labeled["label"] = target.label;
      labeled.update(run);
      run = std::move(labeled);
    }
    runs.push_back(std::move(run));

    if (!target.label.empty())
      text_out += "[" + target.label + "]\n";
    text_out += fmr_result_text(res.get());
  }

  if (targets.size() == 1)
    env.update(runs[0]);
  else
    env["runs"] = std::move(runs);

  if (args.format == "json")
    std::cout << env.dump(2) << '\n';
  else
    std::cout << text_out;
  return 0;
}

int run_verify(const std::string &kind, double delta, double threshold,
               const std::vector<std::string> &fmb_files,
               const std::string &format) {
  fmr_catalog *cat_raw = nullptr;
  if (fmr_status s = fmr_catalog_create(&cat_raw); s != FMR_OK) {
    std::cerr << "fmr: " << fmr_last_error() << '\n';
    return exit_code_for(s);
  }
  CatalogPtr catalog(cat_raw, fmr_catalog_free);
  for (const std::string &path : fmb_files) {
    std::string text = read_input(path);
    if (fmr_status s = fmr_catalog_load_fmb(catalog.get(), text.c_str());
        s != FMR_OK) {
      std::cerr << "fmr: " << path << ": " << fmr_last_error() << '\n';
      return exit_code_for(s);
    }
  }

  fmr_result *res_raw = nullptr;
  fmr_status s = fmr_verify_fmb(catalog.get(),
                                kind.empty() ? nullptr : kind.c_str(), delta,
                                threshold, &res_raw);
  if (s != FMR_OK) {
    std::cerr << "fmr: " << fmr_last_error() << '\n';
    return exit_code_for(s);
  }
  ResultPtr res(res_raw, fmr_result_free);

  if (format == "json") {
    Json env = envelope("verify-fmb", "");
    env.update(Json::parse(fmr_result_json(res.get())));
    std::cout << env.dump(2) << '\n';
  } else {
    std::cout << fmr_result_text(res.get());
  }
  return fmr_result_passed(res.get()) ? 0 : 1;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"failure mode reasoning for function block programs"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(fmr_version()));

  AnalyzeArgs analyze_args;
  CLI::App *analyze = app.add_subcommand(
      "analyze", "derive input failure scenarios for an output failure");
  add_analyze_flags(analyze, analyze_args, /*data_required=*/false);

  AnalyzeArgs explain_args;
  CLI::App *explain = app.add_subcommand(
      "explain", "analyze and show per-scenario derivations");
  add_analyze_flags(explain, explain_args, /*data_required=*/false);

  AnalyzeArgs quantify_args;
  CLI::App *quantify = app.add_subcommand(
      "quantify", "analyze and aggregate scenario probabilities");
  add_analyze_flags(quantify, quantify_args, /*data_required=*/true);

  std::string verify_kind;
  double verify_delta = 0.5;
  double verify_threshold = 1.0;
  std::vector<std::string> verify_fmb_files;
  std::string verify_format = "text";
  CLI::App *verify = app.add_subcommand(
      "verify-fmb", "check block mode tables against exhaustive simulation");
  verify->add_option("kind", verify_kind,
                     "block kind to check (default: all built-in kinds)");
  verify->add_option("--delta", verify_delta,
                     "witness grid spacing around thresholds")
      ->envname("FMR_GRID_DELTA")
      ->capture_default_str();
  verify->add_option("--threshold", verify_threshold,
                     "comparator constant used during verification")
      ->capture_default_str();
  verify->add_option("--fmb", verify_fmb_files,
                     "additional block kind tables (fmb v1); repeatable");
  verify->add_option("--format", verify_format, "output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    // Fold CLI11's assorted nonzero codes into the documented usage code.
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (analyze->parsed())
      return run_analyze("analyze", analyze_args, false);
    if (explain->parsed())
      return run_analyze("explain", explain_args, true);
    if (quantify->parsed())
      return run_analyze("quantify", quantify_args, false);
    if (verify->parsed())
      return run_verify(verify_kind, verify_delta, verify_threshold,
                        verify_fmb_files, verify_format);
  } catch (const nlohmann::json::exception &e) {
    std::cerr << "fmr: " << e.what() << '\n';
    return 2;
  } catch (const std::exception &e) {
    std::cerr << "fmr: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
