// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dei/cli.h"

#include <fmt/format.h>
#include <openssl/evp.h>

#include <CLI11.hpp>
#include <fstream>
#include <system_error>

#include "cli/commands.h"
#include "dei/errors.h"
#include "dei/text_format.h"

namespace dei {
namespace cli {

void OutputSet::add(std::filesystem::path path, std::string contents) {
  if (path.empty()) {
    stdout_ += contents;
    return;
  }
  for (const auto& [p, _] : files_) {
    if (p == path) {
      throw ConfigError(
          fmt::format("output path {} given more than once", path.string()));
    }
  }
  files_.emplace_back(std::move(path), std::move(contents));
}

void OutputSet::commit(std::ostream& out) {
  std::vector<std::filesystem::path> staged;
  auto discard = [&] {
    std::error_code ec;
    for (const auto& tmp : staged) std::filesystem::remove(tmp, ec);
  };
  for (const auto& [path, contents] : files_) {
    auto tmp = path;
    tmp += ".tmp";
    std::ofstream stream(tmp, std::ios::binary | std::ios::trunc);
    if (!stream) {
      discard();
      throw DataError(fmt::format("cannot write {}", path.string()));
    }
    staged.push_back(tmp);
    stream << contents;
    stream.close();
    if (!stream) {
      discard();
      throw DataError(fmt::format("cannot write {}", path.string()));
    }
  }
  for (std::size_t i = 0; i < files_.size(); ++i) {
    std::error_code ec;
    std::filesystem::rename(staged[i], files_[i].first, ec);
    if (ec) {
      discard();
      throw DataError(fmt::format("cannot write {}: {}",
                                  files_[i].first.string(), ec.message()));
    }
  }
  out << stdout_;
}

std::vector<std::string> parse_list(const std::string& text,
                                    std::string_view flag) {
  std::vector<std::string> items = split(text, ',');
  for (const auto& item : items) {
    if (item.empty()) {
      throw ConfigError(fmt::format("{}: empty item in '{}'", flag, text));
    }
  }
  return items;
}

std::string sha256_hex(std::string_view bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw ComputationError("SHA-256 failed");
  }
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

}  // namespace cli

int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err) {
  using namespace cli;
  CLI::App app{"Diversity, equity and inclusion metrics for multilingual "
               "models.",
               "dei"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  MetricsArgs metrics;
  auto* m = app.add_subcommand("metrics", "M_tau and Gini scorecard");
  m->add_option("--perf", metrics.perf, "performance CSV")->required();
  m->add_option("--speakers", metrics.speakers,
                "speakers CSV (required when tau > 0)");
  m->add_option("--tasks", metrics.tasks, "task maxima CSV")->required();
  m->add_option("--universe", metrics.universe,
                "language list (default: 22 scheduled languages + en)");
  m->add_option("--tau", metrics.tau, "demand exponent")->capture_default_str();
  m->add_flag("--tested-only", metrics.tested_only,
              "restrict each row to its tested languages");
  m->add_option("--scale", metrics.scale, "M_tau display: percent|unit")
      ->capture_default_str();
  m->add_option("--input-scale", metrics.input_scale,
                "scale of the score column: percent|unit")
      ->capture_default_str();
  m->add_option("--out", metrics.out, "scorecard CSV (default stdout)");
  m->add_option("--lorenz-out", metrics.lorenz_out, "Lorenz points CSV");

  EfficiencyArgs eff;
  auto* e = app.add_subcommand("efficiency", "AMRS and efficiency scores");
  e->add_option("--goods", eff.goods, "goods CSV")->required();
  e->add_option("--perf-override", eff.perf_override,
                "model,task,perf CSV replacing the perf column for scoring");
  e->add_option("--amrs-override", eff.amrs_override,
                "group,task,metric,amrs CSV replacing computed AMRS");
  e->add_option("--weights", eff.weights, "w_perf,w_throughput,w_memory")
      ->capture_default_str();
  e->add_option("--max-memory", eff.max_memory, "memory ceiling in GB")
      ->capture_default_str();
  e->add_option("--out", eff.out, "efficiency CSV (default stdout)");
  e->add_option("--amrs-out", eff.amrs_out, "AMRS CSV actually used");

  FitArgs fit;
  auto* f = app.add_subcommand("fit", "fit power-law learning curves");
  f->add_option("--trajectories", fit.trajectories, "trajectory CSV")
      ->required();
  f->add_option("--c-range", fit.c_range, "exponent search range lo:hi")
      ->capture_default_str();
  f->add_option("--input-scale", fit.input_scale,
                "override the file's score scale: percent|unit");
  f->add_option("--out", fit.out, "curve registry (default stdout)");
  f->add_option("--samples-out", fit.samples_out,
                "predicted scores on --x-grid as CSV");
  f->add_option("--x-grid", fit.x_grid, "sample counts for --samples-out")
      ->capture_default_str();

  AllocateArgs alloc;
  auto* a = app.add_subcommand("allocate", "distribute an annotation budget");
  a->add_option("--curves", alloc.curves, "curve registry")->required();
  a->add_option("--speakers", alloc.speakers,
                "speakers CSV (required when tau > 0)");
  a->add_option("--sources", alloc.sources, "source languages")
      ->capture_default_str();
  a->add_option("--targets", alloc.targets,
                "target languages (default: every target in the registry)");
  a->add_option("--budget", alloc.budget, "number of instances")->required();
  a->add_option("--strategy", alloc.strategy,
                "greedy|egalitarian|single:<lang>")
      ->capture_default_str();
  a->add_option("--tau", alloc.tau, "demand exponent")->capture_default_str();
  a->add_option("--alpha", alloc.alpha, "weight of the M_tau gain")
      ->capture_default_str();
  a->add_option("--beta", alloc.beta, "weight of the Gini reduction")
      ->capture_default_str();
  a->add_option("--missing", alloc.missing, "strict|permissive")
      ->capture_default_str();
  a->add_option("--composition", alloc.composition, "best-source|mean")
      ->capture_default_str();
  a->add_flag("--clamp", alloc.clamp,
              "clamp composed utilities to [0, 1] in the evaluation");
  a->add_option("--plan-out", alloc.plan_out, "plan file (default stdout)");
  a->add_option("--trace-out", alloc.trace_out, "greedy trace CSV");
  a->add_option("--eval-out", alloc.eval_out, "surrogate evaluation file");

  ReportArgs rep;
  auto* r = app.add_subcommand("report", "combine outputs into markdown");
  r->add_option("--scorecard", rep.scorecard, "metrics scorecard CSV");
  r->add_option("--lorenz", rep.lorenz, "Lorenz points CSV");
  r->add_option("--efficiency", rep.efficiency, "efficiency CSV");
  r->add_option("--amrs", rep.amrs, "AMRS CSV");
  r->add_option("--curves", rep.curves, "curve registry");
  r->add_option("--plan", rep.plan, "plan file");
  r->add_option("--trace", rep.trace, "trace CSV");
  r->add_option("--evaluation", rep.evaluation, "surrogate evaluation file");
  r->add_option("--out", rep.out, "report (default stdout)");

  std::vector<std::string> argv_storage;
  argv_storage.reserve(args.size() + 1);
  argv_storage.emplace_back("dei");
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_storage) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    OutputSet outputs;
    if (m->parsed()) cmd_metrics(metrics, outputs, err);
    if (e->parsed()) cmd_efficiency(eff, outputs, err);
    if (f->parsed()) cmd_fit(fit, outputs, err);
    if (a->parsed()) cmd_allocate(alloc, outputs, err);
    if (r->parsed()) cmd_report(rep, outputs, err);
    outputs.commit(out);
    return 0;
  } catch (const ConfigError& ex) {
    err << "dei: error: " << ex.what() << "\n";
    return 2;
  } catch (const DataError& ex) {
    err << "dei: error: " << ex.what() << "\n";
    return 2;
  } catch (const ComputationError& ex) {
    err << "dei: computation error: " << ex.what() << "\n";
    return 1;
  } catch (const std::exception& ex) {
    err << "dei: internal error: " << ex.what() << "\n";
    return 1;
  }
}

}  // namespace dei
