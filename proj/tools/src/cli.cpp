// Copyright 2026 The convdist Authors
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

#include "convdist_cli/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>

#include "convdist/error.hpp"
#include "convdist/experiments.hpp"
#include "convdist/io.hpp"

namespace convdist::cli {
namespace {

namespace fs = std::filesystem;
using harness::ExperimentReport;

struct Options {
  std::string measure = "rademacher";
  std::string grid;
  double p = 0.5;
  double q = 0.5;
  double radius = 1.0;
  std::uint64_t seed = 0;
  int samples = 16;
  std::size_t budget = kDefaultCellBudget;
  std::size_t point_budget = 4000;
  double prune = 1e-12;
  std::string out;
  std::string format;
};

harness::RunConfig make_config(const Options& o) {
  harness::RunConfig cfg;
  if (!o.grid.empty()) cfg.n_grid = harness::parse_grid(o.grid);
  cfg.seed = o.seed;
  cfg.samples = o.samples;
  cfg.cell_budget = o.budget;
  cfg.point_budget = o.point_budget;
  cfg.prune = o.prune;
  return cfg;
}

std::string resolve_format(const Options& o) {
  if (!o.format.empty()) return o.format;
  if (!o.out.empty() && fs::path(o.out).extension() == ".json") return "json";
  return "csv";
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw InvalidInput("failed writing " + path.string());
}

std::string render(const ExperimentReport& r, const std::string& format) {
  if (format == "json") return harness::to_json(r).dump(2) + "\n";
  std::ostringstream s;
  harness::write_csv(r, s);
  return s.str();
}

// The chosen format goes to --out; the other one to the same stem beside it.
void emit(const ExperimentReport& r, const Options& o, std::ostream& out) {
  const auto format = resolve_format(o);
  if (o.out.empty()) {
    out << render(r, format);
    return;
  }
  const fs::path path(o.out);
  write_text(path, render(r, format));
  const auto other = format == "json" ? "csv" : "json";
  write_text(fs::path(path).replace_extension(other), render(r, other));
}

void add_common(CLI::App* sub, Options& o, bool with_measure) {
  if (with_measure) {
    sub->add_option("--measure", o.measure,
                    "builtin (rademacher, uniform3, bernoulli(p), point(a), rademacher2d) "
                    "or measure JSON file")
        ->capture_default_str();
  }
  sub->add_option("--n", o.grid, "n grid: a:b[:step] or n1,n2,... (default: powers of two)");
  sub->add_option("--seed", o.seed, "random seed")->capture_default_str();
  sub->add_option("--samples", o.samples, "random direction sets for plane lower bounds")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  sub->add_option("--budget", o.budget, "grid cell budget")->capture_default_str();
  sub->add_option("--point-budget", o.point_budget, "support point budget for the exact solver")
      ->capture_default_str();
  sub->add_option("--prune", o.prune, "drop atoms with mass at or below this")
      ->capture_default_str();
  sub->add_option("--out", o.out, "output file (.csv or .json); stdout when absent");
  sub->add_option("--format", o.format, "csv or json (default: from --out extension)")
      ->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Distances between successive convolution powers", "convdist"};
  app.require_subcommand(1);
  Options o;
  std::function<ExperimentReport()> job;
  bool dump_measure = false;

  auto measure_cfg = [&] { return harness::resolve_measure(o.measure, o.budget); };

  struct Spec {
    const char* name;
    const char* help;
    bool measure;
    std::function<ExperimentReport()> run;
  };
  const std::vector<Spec> specs = {
      {"theorem1", "convex-set distance between F^n and F^(n+1), scaled by sqrt(n)", true,
       [&] { return harness::convex_rate(measure_cfg(), make_config(o)); }},
      {"prokhorov-rate", "exact Prokhorov distance between rescaled powers", true,
       [&] { return harness::prokhorov_rate(measure_cfg(), make_config(o)); }},
      {"skip-two", "Kolmogorov distance between F^n and F^(n+2), scaled by n", true,
       [&] { return harness::skip_two(measure_cfg(), make_config(o)); }},
      {"quantile-bound", "Kolmogorov distance against the quantile bound", true,
       [&] { return harness::quantile_bound(measure_cfg(), o.q, make_config(o)); }},
      {"decomposition", "binomial-mixture path through the interpolant G_n", true,
       [&] { return harness::decomposition_path(measure_cfg(), o.radius, make_config(o)); }},
      {"coupling", "couplings of F^(n+1) and F^n at the exact Prokhorov level", true,
       [&] { return harness::coupling_demo(measure_cfg(), make_config(o)); }},
      {"binom-tv", "three evaluations of the distance between B(n,p) and B(n+1,p)", false,
       [&] { return harness::binom_tv(o.p, make_config(o)); }},
      {"bernstein", "binomial upper tail against exp(-np(1-p)/4)", false,
       [&] { return harness::bernstein(o.p, make_config(o)); }},
      {"gaussian-bound", "closed-form Gaussian TV bound against the general formula", true,
       [&] { return harness::gaussian_bound(measure_cfg(), make_config(o)); }},
  };
  for (const auto& spec : specs) {
    auto* sub = app.add_subcommand(spec.name, spec.help);
    add_common(sub, o, spec.measure);
    if (std::string(spec.name) == "quantile-bound") {
      sub->add_option("--q", o.q, "quantile level of 0")->capture_default_str();
    }
    if (std::string(spec.name) == "decomposition") {
      sub->add_option("--T", o.radius, "truncation radius")->capture_default_str();
    }
    if (!spec.measure) sub->add_option("--p", o.p, "success probability")->capture_default_str();
    sub->callback([&job, run = spec.run] { job = run; });
  }
  auto* gen = app.add_subcommand("measure", "write a builtin measure as a JSON file");
  gen->add_option("--measure", o.measure, "builtin name or file")->capture_default_str();
  gen->add_option("--out", o.out, "output file; stdout when absent");
  gen->callback([&] { dump_measure = true; });

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (dump_measure) {
      const auto text = to_json(harness::resolve_measure(o.measure, o.budget).measure).dump(2) + "\n";
      if (o.out.empty()) {
        out << text;
      } else {
        write_text(o.out, text);
      }
      return kExitPass;
    }
    const auto report = job();
    emit(report, o, out);
    for (const auto& row : report.rows) {
      if (!row.error.empty()) err << "n = " << row.n << ": " << row.error << "\n";
    }
    return report.all_pass() ? kExitPass : kExitFail;
  } catch (const InvalidInput& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ResourceError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace convdist::cli
