//===- capi.cpp - Failure mode reasoning C API ----------------------------===//
//
// Part of the fmr project, under the Apache License v2.0.
// SPDX-License-Identifier: Apache-2.0
//
//===----------------------------------------------------------------------===//

#include "fmr/fmr.h"

#include "core/engine.hpp"
#include "core/errors.hpp"
#include "core/oracle.hpp"
#include "core/program.hpp"
#include "core/quant.hpp"
#include "core/report.hpp"
#include "core/version.hpp"

#include <exception>
#include <string>

struct fmr_catalog {
  fmr::Catalog impl;
};

struct fmr_program {
  fmr::ProgramGraph impl;
};

struct fmr_result {
  std::string json;
  std::string text;
  int passed = 1;
};

namespace {

thread_local std::string t_last_error;

// Runs the body, translating exceptions into status codes. `fallback` is
// the code for fmr::Error; ParseError always maps to FMR_ERR_PARSE.
template <typename Fn>
fmr_status guarded(fmr_status fallback, Fn &&body) {
  try {
    body();
    t_last_error.clear();
    return FMR_OK;
  } catch (const fmr::ParseError &e) {
    t_last_error = e.what();
    return FMR_ERR_PARSE;
  } catch (const fmr::Error &e) {
    t_last_error = e.what();
    return fallback;
  } catch (const std::exception &e) {
    t_last_error = e.what();
    return FMR_ERR_INTERNAL;
  }
}

fmr_status invalid_arg(const char *msg) {
  t_last_error = msg;
  return FMR_ERR_INVALID_ARG;
}

} // namespace

extern "C" {

const char *fmr_version(void) { return fmr::kVersion; }

const char *fmr_last_error(void) { return t_last_error.c_str(); }

fmr_status fmr_catalog_create(fmr_catalog **out) {
  if (!out)
    return invalid_arg("fmr_catalog_create: out is null");
  *out = nullptr;
  return guarded(FMR_ERR_INTERNAL,
                 [&] { *out = new fmr_catalog{fmr::Catalog::builtins()}; });
}

fmr_status fmr_catalog_load_fmb(fmr_catalog *catalog, const char *table_text) {
  if (!catalog || !table_text)
    return invalid_arg("fmr_catalog_load_fmb: null argument");
  return guarded(FMR_ERR_PARSE,
                 [&] { catalog->impl.load_table(table_text); });
}

void fmr_catalog_free(fmr_catalog *catalog) { delete catalog; }

fmr_status fmr_program_parse(const fmr_catalog *catalog,
                             const char *program_text, fmr_program **out) {
  if (!catalog || !program_text || !out)
    return invalid_arg("fmr_program_parse: null argument");
  *out = nullptr;
  return guarded(FMR_ERR_PARSE, [&] {
    *out = new fmr_program{fmr::parse_program(program_text, catalog->impl)};
  });
}

void fmr_program_free(fmr_program *program) { delete program; }

void fmr_analysis_options_init(fmr_analysis_options *opts) {
  if (!opts)
    return;
  opts->practical = 1;
  opts->prune_match = 1;
  opts->include_uncertain = 0;
  opts->with_provenance = 0;
}

fmr_status fmr_analyze(const fmr_catalog *catalog, const fmr_program *program,
                       const char *target_var, char target_mode,
                       const fmr_analysis_options *opts,
                       const char *failure_data_json,
                       const char *aggregate_method, fmr_result **out) {
  if (!catalog || !program || !target_var || !out)
    return invalid_arg("fmr_analyze: null argument");
  *out = nullptr;

  auto mode = fmr::mode_from_letter(target_mode);
  if (!mode) {
    t_last_error = std::string("fmr_analyze: '") + target_mode +
                   "' is not a failure mode letter (l, m, h, f, t)";
    return FMR_ERR_INVALID_ARG;
  }

  fmr::AnalysisOptions aopts;
  if (opts) {
    aopts.variant = opts->practical ? fmr::FmbVariant::Practical
                                    : fmr::FmbVariant::Theoretical;
    aopts.prune_match = opts->prune_match != 0;
    aopts.include_uncertain = opts->include_uncertain != 0;
    aopts.with_provenance = opts->with_provenance != 0;
  }

  std::optional<fmr::AggregateMethod> method;
  if (failure_data_json) {
    std::string name =
        aggregate_method ? aggregate_method : "inclusion-exclusion";
    method = fmr::aggregate_method_from_string(name);
    if (!method) {
      t_last_error = "fmr_analyze: unknown aggregate method '" + name + "'";
      return FMR_ERR_INVALID_ARG;
    }
  }

  try {
    const fmr::ProgramGraph &g = program->impl;
    int var = g.var_index(target_var);
    if (var < 0)
      throw fmr::Error("unknown target variable '" + std::string(target_var) +
                       "'");
    fmr::ScenarioFormula formula =
        fmr::backward_analyze(g, catalog->impl, var, *mode, aopts);

    std::optional<fmr::AggregateResult> quant;
    if (failure_data_json) {
      fmr::FailureData data = fmr::FailureData::parse(failure_data_json);
      try {
        quant = fmr::aggregate(formula, g, data, *method);
      } catch (const fmr::Error &e) {
        t_last_error = e.what();
        return FMR_ERR_DATA;
      }
    }

    auto result = std::make_unique<fmr_result>();
    result->json =
        fmr::analysis_json(g, formula, aopts, quant ? &*quant : nullptr)
            .dump(2);
    result->text =
        fmr::analysis_text(g, formula, aopts, quant ? &*quant : nullptr);
    result->passed = 1;
    *out = result.release();
    t_last_error.clear();
    return FMR_OK;
  } catch (const fmr::ParseError &e) {
    t_last_error = e.what();
    return FMR_ERR_PARSE;
  } catch (const fmr::Error &e) {
    t_last_error = e.what();
    return FMR_ERR_ANALYSIS;
  } catch (const std::exception &e) {
    t_last_error = e.what();
    return FMR_ERR_INTERNAL;
  }
}

fmr_status fmr_verify_fmb(const fmr_catalog *catalog, const char *kind,
                          double grid_delta, double threshold,
                          fmr_result **out) {
  if (!catalog || !out)
    return invalid_arg("fmr_verify_fmb: null argument");
  *out = nullptr;
  double delta = grid_delta > 0 ? grid_delta : 0.5;

  return guarded(FMR_ERR_ANALYSIS, [&] {
    std::vector<std::string> kinds;
    if (kind) {
      kinds.push_back(kind);
    } else {
      for (const std::string &name : catalog->impl.names())
        if (catalog->impl.at(name).builtin)
          kinds.push_back(name);
    }

    fmr::Json j;
    j["grid_delta"] = delta;
    j["threshold"] = threshold;
    fmr::Json arr = fmr::Json::array();
    std::string text;
    bool all_ok = true;
    for (const std::string &name : kinds) {
      const fmr::BlockType &type = catalog->impl.at(name);
      fmr::WitnessGrid grid =
          fmr::WitnessGrid::for_block(type, threshold, delta);
      fmr::ConformanceReport report = fmr::verify_fmb(type, grid, threshold);
      all_ok = all_ok && report.sound && report.complete && report.matches_rows;
      arr.push_back(fmr::conformance_json(report));
      text += fmr::conformance_text(type, report);
    }
    j["kinds"] = std::move(arr);
    j["passed"] = all_ok;

    auto result = std::make_unique<fmr_result>();
    result->json = j.dump(2);
    result->text = std::move(text);
    result->passed = all_ok ? 1 : 0;
    *out = result.release();
  });
}

const char *fmr_result_json(const fmr_result *result) {
  return result ? result->json.c_str() : "";
}

const char *fmr_result_text(const fmr_result *result) {
  return result ? result->text.c_str() : "";
}

int fmr_result_passed(const fmr_result *result) {
  return result ? result->passed : 0;
}

void fmr_result_free(fmr_result *result) { delete result; }

} // extern "C"
