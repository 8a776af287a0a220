// Copyright 2026 The SPEED Simulator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// speed: command-line front end. Subcommands: accountant, simulate, sweep,
// dist-check, attack-demo, argmax-bench. Exit codes: 0 ok, 2 usage,
// 3 domain error, 4 I/O error.
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "speed/accountant.hpp"
#include "speed/io.hpp"
#include "speed/protocol.hpp"

namespace {

using nlohmann::json;
using namespace speed;

struct CliOptions {
  std::string votes_path;
  std::string config_path;
  std::string out_path = "speed_out";
  double gamma = 0.1;
  double tau = 1.0;
  double delta = kDefaultDelta;
  int lmax = kDefaultLmax;
  int teachers = 250;
  int classes = 10;
  long queries = 100;
  std::string mode = "distributed";
  std::string he = "off";
  std::uint64_t seed = 1;
  long trials = 10000;
  long samples = 1000000;
  std::string param = "gamma";
  double from = 0.05;
  double to = 0.5;
  int points = 10;
  double var_tol = 0.02;
  double ks_tol = 0.005;
  int nu0 = 10;
  int nu1 = 5;
  double sigma_c = -1.0;  // negative means calibrate
  double offset_a = 900.0;
};

NoiseMode parse_mode(const std::string& s) {
  if (s == "none" || s == "no-noise") return NoiseMode::kNone;
  if (s == "distributed") return NoiseMode::kDistributed;
  if (s == "centralised" || s == "centralized") return NoiseMode::kCentralised;
  throw DomainError("unknown mode '" + s + "'");
}

HeMode parse_he(const std::string& s) {
  if (s == "off") return HeMode::kOff;
  if (s == "ideal") return HeMode::kIdeal;
  if (s == "noisy") return HeMode::kNoisy;
  throw DomainError("unknown he backend '" + s + "'");
}

// Config file values fill in any option the user did not pass explicitly.
void apply_config(const std::map<std::string, std::string>& cfg,
                  const CLI::App& app, CliOptions& opt) {
  auto use = [&](const char* flag, const char* key, auto& field) {
    const CLI::Option* o = app.get_option_no_throw(flag);
    auto it = cfg.find(key);
    if (it == cfg.end() || (o != nullptr && o->count() > 0)) return;
    std::istringstream in(it->second);
    in >> field;
    if (in.fail()) throw ParseError(std::string("bad config value for ") + key);
  };
  use("--gamma", "gamma", opt.gamma);
  use("--tau", "tau", opt.tau);
  use("--delta", "delta", opt.delta);
  use("--lmax", "lmax", opt.lmax);
  use("--teachers", "teachers", opt.teachers);
  use("--classes", "classes", opt.classes);
  use("--queries", "queries", opt.queries);
  use("--mode", "mode", opt.mode);
  use("--he", "he", opt.he);
  use("--seed", "seed", opt.seed);
  use("--trials", "trials", opt.trials);
  use("--sigma-c", "heargmax.sigma_c", opt.sigma_c);
  use("--offset-a", "heargmax.offset_a", opt.offset_a);
}

std::map<std::string, std::string> resolved_config(const CliOptions& opt) {
  return {{"gamma", std::to_string(opt.gamma)},
          {"tau", std::to_string(opt.tau)},
          {"delta", std::to_string(opt.delta)},
          {"lmax", std::to_string(opt.lmax)},
          {"teachers", std::to_string(opt.teachers)},
          {"classes", std::to_string(opt.classes)},
          {"queries", std::to_string(opt.queries)},
          {"mode", opt.mode},
          {"he", opt.he},
          {"seed", std::to_string(opt.seed)}};
}

VoteHistogram load_votes(const std::string& path) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
    return load_votes_csv(path);
  }
  return load_votes_json(path);
}

int cmd_accountant(const CliOptions& opt) {
  VoteHistogram votes = load_votes(opt.votes_path);
  NoiseParams params{opt.gamma, opt.tau, votes.n};
  PrivacyReport report = analyze(votes, params, opt.delta, opt.lmax);
  save_report_json(report, resolved_config(opt), opt.out_path);
  std::cout << "epsilon = " << report.epsilon << " at delta = " << report.delta
            << " over " << votes.query_count() << " queries\n";
  return 0;
}

std::vector<TeacherOracle> make_teachers(const CliOptions& opt) {
  std::vector<TeacherOracle> teachers;
  teachers.reserve(opt.teachers);
  for (int i = 0; i < opt.teachers; ++i) {
    teachers.push_back(
        TeacherOracle::uniform_random(i, opt.classes, opt.seed));
  }
  return teachers;
}

int cmd_simulate(const CliOptions& opt) {
  SessionConfig config;
  config.num_classes = opt.classes;
  config.queries = static_cast<std::size_t>(opt.queries);
  config.params = NoiseParams{opt.gamma, opt.tau, opt.teachers};
  config.mode = parse_mode(opt.mode);
  config.he = parse_he(opt.he);
  config.offset_a = opt.offset_a;
  config.sigma_c = std::max(opt.sigma_c, 0.0);
  config.seed = opt.seed;

  SessionResult result = run_session(make_teachers(opt), config);
  save_votes_json(result.votes, opt.out_path + ".votes.json");

  json labels;
  labels["schema"] = "speed.labels.v1";
  labels["labels"] = result.labels;
  labels["config"] = resolved_config(opt);
  write_text_file(opt.out_path + ".labels.json", labels.dump(2) + "\n");

  PrivacyReport report =
      analyze(result.votes, config.params, opt.delta, opt.lmax);
  save_report_json(report, resolved_config(opt),
                   opt.out_path + ".report.json");
  std::cout << "simulated " << opt.queries << " queries; epsilon = "
            << report.epsilon << "\n";
  return 0;
}

int cmd_sweep(const CliOptions& opt) {
  if (opt.points < 2) throw DomainError("sweep needs at least 2 points");
  if (!(opt.from > 0.0) || !(opt.to > 0.0) || !(opt.from < opt.to)) {
    throw DomainError("sweep range must be positive and increasing");
  }
  if (opt.param != "gamma" && opt.param != "tau") {
    throw DomainError("sweep parameter must be gamma or tau");
  }

  VoteHistogram votes;
  if (!opt.votes_path.empty()) {
    votes = load_votes(opt.votes_path);
  } else {
    // Unanimous synthetic votes.
    votes.n = opt.teachers;
    votes.k = opt.classes;
    std::vector<int> row(opt.classes, 0);
    row[0] = opt.teachers;
    votes.queries.assign(static_cast<std::size_t>(opt.queries), row);
  }

  std::ostringstream csv;
  csv << "# schema=" << kSweepSchema << "\n" << opt.param << ",epsilon\n";
  for (int i = 0; i < opt.points; ++i) {
    const double v =
        opt.from + (opt.to - opt.from) * i / (opt.points - 1);
    NoiseParams params{opt.param == "gamma" ? v : opt.gamma,
                       opt.param == "tau" ? v : opt.tau, votes.n};
    PrivacyReport report = analyze(votes, params, opt.delta, opt.lmax);
    csv << v << "," << report.epsilon << "\n";
  }
  write_text_file(opt.out_path, csv.str());
  std::cout << "wrote " << opt.points << " sweep rows to " << opt.out_path
            << "\n";
  return 0;
}

int cmd_dist_check(const CliOptions& opt) {
  if (opt.samples < 10000) throw DomainError("dist-check needs >= 1e4 samples");
  NoiseParams params{opt.gamma, 1.0, opt.teachers};
  std::vector<double> draws = sample_aggregates(
      params, static_cast<std::size_t>(opt.samples), opt.seed);

  double mean = 0.0;
  for (double d : draws) mean += d;
  mean /= draws.size();
  double var = 0.0;
  for (double d : draws) var += (d - mean) * (d - mean);
  var /= (draws.size() - 1);

  std::sort(draws.begin(), draws.end());
  const double scale = 1.0 / opt.gamma;
  double ks = 0.0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const double f = laplace_cdf(draws[i], scale);
    const double lo = static_cast<double>(i) / draws.size();
    const double hi = static_cast<double>(i + 1) / draws.size();
    ks = std::max({ks, std::abs(f - lo), std::abs(f - hi)});
  }

  const double target_var = 2.0 * scale * scale;
  const bool var_ok = std::abs(var - target_var) / target_var < opt.var_tol;
  const bool ks_ok = ks < opt.ks_tol;

  json doc;
  doc["schema"] = kDistCheckSchema;
  doc["n"] = opt.teachers;
  doc["gamma"] = opt.gamma;
  doc["samples"] = opt.samples;
  doc["mean"] = mean;
  doc["variance"] = var;
  doc["target_variance"] = target_var;
  doc["ks_distance"] = ks;
  doc["variance_pass"] = var_ok;
  doc["ks_pass"] = ks_ok;
  doc["pass"] = var_ok && ks_ok;
  write_text_file(opt.out_path, doc.dump(2) + "\n");
  std::cout << (var_ok && ks_ok ? "PASS" : "FAIL") << ": variance = " << var
            << " (target " << target_var << "), KS = " << ks << "\n";
  return 0;
}

int cmd_attack_demo(const CliOptions& opt) {
  AttackScenario scenario;
  scenario.num_classes = opt.classes;
  scenario.nu0 = opt.nu0;
  scenario.nu1 = opt.nu1;
  scenario.other_counts.assign(
      static_cast<std::size_t>(std::max(opt.classes - 2, 0)),
      std::max(opt.nu1 - 1, 0));
  NoiseParams params{opt.gamma, opt.tau, opt.teachers};
  AttackResult result = attack_demo(scenario, params,
                                    static_cast<std::size_t>(opt.trials),
                                    opt.seed);

  json doc;
  doc["schema"] = "speed.attack.v1";
  doc["centralised_chi0_correct"] = result.centralised_chi0_correct;
  doc["centralised_chi1_correct"] = result.centralised_chi1_correct;
  doc["distributed_accuracy"] = result.distributed_accuracy;
  doc["epsilon_refined"] = result.epsilon_refined;
  doc["accuracy_bound"] = result.accuracy_bound;
  doc["trials"] = result.trials;
  doc["config"] = resolved_config(opt);
  write_text_file(opt.out_path, doc.dump(2) + "\n");
  std::cout << "known-noise inference: "
            << (result.centralised_chi0_correct &&
                        result.centralised_chi1_correct
                    ? "exact"
                    : "failed")
            << "; distributed accuracy = " << result.distributed_accuracy
            << " (bound " << result.accuracy_bound << ")\n";
  return 0;
}

int cmd_argmax_bench(const CliOptions& opt) {
  ArgmaxCircuitConfig config;
  config.n = opt.teachers;
  config.offset_a = opt.offset_a;
  double sigma = opt.sigma_c;
  if (sigma < 0.0) {
    sigma = calibrate_sigma_c(config, opt.classes, 0.90, 2000, opt.seed);
  }
  const double accuracy =
      circuit_accuracy(config, opt.classes, sigma,
                       static_cast<std::size_t>(opt.trials), opt.seed + 1);

  json doc;
  doc["schema"] = "speed.argmax_bench.v1";
  doc["classes"] = opt.classes;
  doc["teachers"] = opt.teachers;
  doc["sigma_c"] = sigma;
  doc["trials"] = opt.trials;
  doc["accuracy"] = accuracy;
  doc["bootstraps_per_call"] = opt.classes * opt.classes;
  write_text_file(opt.out_path, doc.dump(2) + "\n");
  std::cout << "sigma_c = " << sigma << ", accuracy = " << accuracy << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Private collaborative labeling simulator"};
  app.require_subcommand(1);
  CliOptions opt;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "config file");
    sub->add_option("--out", opt.out_path, "output path or prefix");
    sub->add_option("--gamma", opt.gamma, "inverse noise scale");
    sub->add_option("--tau", opt.tau, "secret-noise ratio");
    sub->add_option("--delta", opt.delta, "DP failure probability");
    sub->add_option("--lmax", opt.lmax, "max moment order");
    sub->add_option("--teachers", opt.teachers, "teacher count");
    sub->add_option("--classes", opt.classes, "class count");
    sub->add_option("--queries", opt.queries, "query count");
    sub->add_option("--mode", opt.mode, "none|distributed|centralised");
    sub->add_option("--he", opt.he, "off|ideal|noisy");
    sub->add_option("--seed", opt.seed, "RNG seed");
    sub->add_option("--trials", opt.trials, "Monte-Carlo trials");
    sub->add_option("--sigma-c", opt.sigma_c,
                    "circuit noise std (negative: calibrate)");
    sub->add_option("--offset-a", opt.offset_a, "circuit offset A");
  };

  CLI::App* acc = app.add_subcommand("accountant", "privacy analysis of votes");
  acc->add_option("--votes", opt.votes_path, "votes file")->required();
  add_common(acc);

  CLI::App* sim = app.add_subcommand("simulate", "run a labeling session");
  add_common(sim);

  CLI::App* swp = app.add_subcommand("sweep", "epsilon over a parameter grid");
  swp->add_option("--votes", opt.votes_path, "votes file (else synthetic)");
  swp->add_option("--param", opt.param, "gamma or tau");
  swp->add_option("--from", opt.from, "range start");
  swp->add_option("--to", opt.to, "range end");
  swp->add_option("--points", opt.points, "grid size");
  add_common(swp);

  CLI::App* dc = app.add_subcommand("dist-check",
                                    "aggregate noise vs Laplace reference");
  dc->add_option("--samples", opt.samples, "sample count");
  dc->add_option("--var-tol", opt.var_tol, "relative variance tolerance");
  dc->add_option("--ks-tol", opt.ks_tol, "KS distance threshold");
  add_common(dc);

  CLI::App* atk = app.add_subcommand("attack-demo",
                                     "malicious-aggregator inference demo");
  atk->add_option("--nu0", opt.nu0, "victim-class votes under chi0");
  atk->add_option("--nu1", opt.nu1, "alternate-class votes under chi0");
  add_common(atk);

  CLI::App* amb = app.add_subcommand("argmax-bench",
                                     "noisy circuit accuracy measurement");
  add_common(amb);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (!opt.config_path.empty()) {
      const auto cfg = load_config(opt.config_path);
      const CLI::App* sub = app.get_subcommands().front();
      apply_config(cfg, *sub, opt);
    }
    if (acc->parsed()) return cmd_accountant(opt);
    if (sim->parsed()) return cmd_simulate(opt);
    if (swp->parsed()) return cmd_sweep(opt);
    if (dc->parsed()) return cmd_dist_check(opt);
    if (atk->parsed()) return cmd_attack_demo(opt);
    if (amb->parsed()) return cmd_argmax_bench(opt);
  } catch (const DomainError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return 3;
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 4;
  }
  return 2;
}
