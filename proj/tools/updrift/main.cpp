// updrift: simulate multiplicative up-drift processes, evaluate the matching
// hitting-time bounds, and check them against Monte Carlo estimates.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "updrift/bounds.hpp"
#include "updrift/ea.hpp"
#include "updrift/kv.hpp"
#include "updrift/process.hpp"
#include "updrift/rng.hpp"
#include "updrift/verify.hpp"

namespace {

using namespace updrift;

constexpr int kExitOk = 0;
constexpr int kExitInconsistent = 1;
constexpr int kExitUsage = 2;
constexpr int kExitWithheld = 3;

struct OutputOptions {
  std::string out_path;
  std::string format = "kv";
};

void add_output_options(CLI::App* cmd, OutputOptions& opts) {
  cmd->add_option("--out", opts.out_path, "Also write the structured output to this file");
  cmd->add_option("--format", opts.format, "Output format")
      ->check(CLI::IsMember({"kv", "csv"}));
}

// Results go to stdout; --out duplicates the same bytes to a file. Nothing
// is written before the computation succeeds.
void emit(const std::string& content, const OutputOptions& opts) {
  std::cout << content;
  if (!opts.out_path.empty()) {
    std::ofstream f(opts.out_path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file " + opts.out_path);
    f << content;
  }
}

std::string render_single(const KvDoc& doc, const OutputOptions& opts) {
  if (opts.format == "kv") return doc.serialize();
  std::vector<std::string> header;
  std::vector<KvValue> row;
  for (const auto& [k, v] : doc.entries()) {
    header.push_back(k);
    row.push_back(v);
  }
  CsvTable table(header);
  table.add_row(row);
  return table.serialize();
}

std::vector<double> parse_double_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
  return out;
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
  std::vector<std::int64_t> out;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(std::stoll(cell));
  return out;
}

// Grid syntax lo:hi:steps (inclusive endpoints, linear spacing).
std::vector<double> parse_grid(const std::string& text) {
  auto a = text.find(':');
  auto b = text.rfind(':');
  if (a == std::string::npos || b == a)
    throw std::runtime_error("grid must be lo:hi:steps, got " + text);
  double lo = std::stod(text.substr(0, a));
  double hi = std::stod(text.substr(a + 1, b - a - 1));
  int steps = std::stoi(text.substr(b + 1));
  if (steps < 1) throw std::runtime_error("grid needs at least one step");
  std::vector<double> out;
  for (int i = 0; i < steps; ++i)
    out.push_back(steps == 1 ? lo : lo + (hi - lo) * i / (steps - 1));
  return out;
}

ZeroLaw parse_zero_law(const std::string& text) {
  auto colon = text.find(':');
  std::string kind = text.substr(0, colon);
  std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "point") return ZeroLaw::point_mass(std::stoll(rest));
  if (kind == "binom") {
    auto comma = rest.find(',');
    if (comma == std::string::npos)
      throw std::runtime_error("zero-law binom needs trials,p");
    return ZeroLaw::binomial(std::stoll(rest.substr(0, comma)),
                             std::stod(rest.substr(comma + 1)));
  }
  if (kind == "table") {
    std::vector<std::int64_t> values;
    std::vector<double> weights;
    std::stringstream ss(rest);
    std::string pair;
    while (std::getline(ss, pair, ',')) {
      auto sep = pair.find(':');
      if (sep == std::string::npos)
        throw std::runtime_error("zero-law table entries are value:weight");
      values.push_back(std::stoll(pair.substr(0, sep)));
      weights.push_back(std::stod(pair.substr(sep + 1)));
    }
    return ZeroLaw::tabulated(std::move(values), std::move(weights));
  }
  throw std::runtime_error("unknown zero-law kind " + kind +
                           " (expected point:V, binom:K,P or table:v:w,...)");
}

struct ProcessOptions {
  std::string process = "binomial-clamped";
  double delta = 1.0;
  std::int64_t k = 1;
  std::int64_t n = 1;
  double gamma0 = 0.5;
  std::int64_t x0 = 1;
  std::string zero_law;
  std::int64_t xmin = 0;
  double p_fresh = 0.0;
};

void add_process_options(CLI::App* cmd, ProcessOptions& p, bool require_core = true) {
  auto* proc = cmd->add_option("--process", p.process, "Process kind")
                   ->check(CLI::IsMember({"deterministic", "jackpot", "binomial-clamped",
                                          "binomial-zero", "binomial-fresh", "unbiased"}));
  auto* delta = cmd->add_option("--delta", p.delta, "Relative drift delta");
  auto* n = cmd->add_option("--n", p.n, "Hitting target n");
  if (require_core) {
    proc->required();
    delta->required();
    n->required();
  }
  cmd->add_option("--k", p.k, "Binomial trial count k");
  cmd->add_option("--gamma0", p.gamma0, "Slack parameter gamma0 in (0,1)");
  cmd->add_option("--x0", p.x0, "Initial state");
  cmd->add_option("--zero-law", p.zero_law,
                  "State-0 exit law: point:V, binom:K,P or table:v:w,...");
  cmd->add_option("--xmin", p.xmin, "Fresh-start minimum state");
  cmd->add_option("--p-fresh", p.p_fresh, "Fresh-start probability");
}

ProcessSpec build_spec(const ProcessOptions& p) {
  ProcessSpec spec;
  auto kind = process_kind_from_string(p.process);
  if (!kind) throw std::runtime_error("unknown process kind " + p.process);
  spec.kind = *kind;
  spec.delta = p.delta;
  spec.k = p.k;
  spec.target_n = p.n;
  spec.gamma0 = p.gamma0;
  spec.x0 = p.x0;
  if (!p.zero_law.empty()) spec.zero_law = parse_zero_law(p.zero_law);
  if (spec.kind == ProcessKind::BinomialWithZero && !spec.zero_law)
    throw std::runtime_error("binomial-zero needs --zero-law");
  if (spec.kind == ProcessKind::BinomialFreshStart) {
    if (p.xmin < 1 || p.p_fresh <= 0.0)
      throw std::runtime_error("binomial-fresh needs --xmin and --p-fresh");
    spec.fresh_start = FreshStart{p.xmin, p.p_fresh};
  }
  validate(spec);
  return spec;
}

void echo_process(KvDoc& doc, const ProcessSpec& spec) {
  doc.set_string("process", to_string(spec.kind));
  doc.set_double("delta", spec.delta);
  doc.set_int("k", spec.k);
  doc.set_int("n", spec.target_n);
  doc.set_double("gamma0", spec.gamma0);
  doc.set_int("x0", spec.x0);
  if (spec.fresh_start) {
    doc.set_int("xmin", spec.fresh_start->xmin);
    doc.set_double("p_fresh", spec.fresh_start->p);
  }
  for (const auto& violation : precondition_violations(spec))
    doc.set_bool("precondition_flag." + violation, true);
}

void put_report(KvDoc& doc, const BoundReport& rep) {
  doc.set_string("theorem", to_string(rep.theorem));
  doc.set_string("unit", to_string(rep.unit));
  for (const auto& [k, v] : rep.inputs) doc.set_double("inputs." + k, v);
  doc.set_double("bound", rep.bound);
  doc.set_bool("valid", rep.valid);
  for (const auto& [k, v] : rep.auxiliary) doc.set_double("auxiliary." + k, v);
  for (std::size_t i = 0; i < rep.violated_preconditions.size(); ++i)
    doc.set_string("violated." + std::to_string(i), rep.violated_preconditions[i]);
}

void put_summary(KvDoc& doc, const MonteCarloSummary& s, const std::string& prefix) {
  doc.set_int(prefix + "trials", s.trials);
  doc.set_double(prefix + "mean", s.mean);
  doc.set_double(prefix + "stderr", s.stderr_mean);
  doc.set_double(prefix + "ci95_lo", s.ci95.lo);
  doc.set_double(prefix + "ci95_hi", s.ci95.hi);
  doc.set_int(prefix + "censored", s.censored);
  doc.set_int(prefix + "seed", static_cast<std::int64_t>(s.seed));
}

int put_verdict(KvDoc& doc, const Verdict& v) {
  doc.set_double("bound", v.bound);
  put_summary(doc, v.empirical, "empirical.");
  doc.set_bool("withheld", v.withheld);
  doc.set_bool("consistent", v.consistent);
  doc.set_double("margin", v.margin);
  if (!v.reason.empty()) doc.set_string("reason", v.reason);
  if (v.withheld) return kExitWithheld;
  return v.consistent ? kExitOk : kExitInconsistent;
}

// ---------------------------------------------------------------------------
// bound

struct BoundArgs {
  std::string theorem;
  double delta = 1.0;
  std::int64_t n = 1;
  double gamma0 = 0.5;
  std::int64_t k = 1;
  double d0 = 1.0;
  double e0 = 1.0;
  std::int64_t xmin = 1;
  double p = 0.25;
  std::int64_t m = 2;
  std::string z_list;
  double z_fill = -1.0;
  std::int64_t lambda = 1;
  OutputOptions out;
};

LevelModel build_level_model(const BoundArgs& a) {
  LevelModel model;
  model.m = a.m;
  model.delta = a.delta;
  model.gamma0 = a.gamma0;
  model.lambda = a.lambda;
  if (!a.z_list.empty())
    model.z = parse_double_list(a.z_list);
  else if (a.z_fill > 0.0)
    model.z.assign(static_cast<std::size_t>(a.m - 1), a.z_fill);
  return model;
}

int run_bound(const BoundArgs& a) {
  auto id = theorem_id_from_string(a.theorem);
  if (!id) throw std::runtime_error("unknown theorem id " + a.theorem);
  BoundReport rep;
  switch (*id) {
    case TheoremId::UpDrift1: rep = thm1_bound(a.delta, a.n, a.gamma0, a.k); break;
    case TheoremId::NoDrift: rep = nodrift_bound(a.d0, a.gamma0, a.k); break;
    case TheoremId::UpDrift2: rep = thm2_bound(a.delta, a.n, a.gamma0, a.k, a.e0); break;
    case TheoremId::UpDrift3: rep = thm3_bound(a.delta, a.n, a.k, a.xmin, a.p); break;
    case TheoremId::LevelNew: rep = level_new_bound(build_level_model(a)); break;
    case TheoremId::LevelLargeDelta:
      rep = level_large_delta_bound(build_level_model(a));
      break;
    case TheoremId::LevelOld: rep = level_old_bound(build_level_model(a)); break;
  }
  KvDoc doc;
  doc.set_string("command", "bound");
  put_report(doc, rep);
  emit(render_single(doc, a.out), a.out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  ProcessOptions process;
  std::int64_t trials = 1000;
  std::int64_t cap = kDefaultStepCap;
  std::uint64_t seed = kDefaultMasterSeed;
  OutputOptions out;
};

int run_simulate(const SimulateArgs& a) {
  ProcessSpec spec = build_spec(a.process);
  MonteCarloSummary s = estimate_hitting_time(spec, a.trials, a.cap, a.seed);
  KvDoc doc;
  doc.set_string("command", "simulate");
  echo_process(doc, spec);
  doc.set_int("cap", a.cap);
  put_summary(doc, s, "");
  emit(render_single(doc, a.out), a.out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// verify

struct VerifyArgs {
  std::string check;
  ProcessOptions process;
  std::int64_t trials = 1000;
  std::int64_t cap = kDefaultStepCap;
  std::uint64_t seed = kDefaultMasterSeed;
  std::int64_t d = 0;
  double bound_override = -1.0;
  OutputOptions out;
};

int run_verify(const VerifyArgs& a) {
  ProcessSpec spec = build_spec(a.process);
  KvDoc doc;
  doc.set_string("command", "verify");
  doc.set_string("check", a.check);
  echo_process(doc, spec);
  doc.set_int("trials", a.trials);
  doc.set_int("cap", a.cap);

  Verdict verdict;
  if (a.check == "thm1" || a.check == "thm2" || a.check == "thm3") {
    BoundReport rep;
    if (a.check == "thm1") {
      rep = thm1_bound(spec.delta, spec.target_n, spec.gamma0, spec.k);
    } else if (a.check == "thm2") {
      if (!spec.zero_law) throw std::runtime_error("thm2 check needs --zero-law");
      double d0 = d0_threshold(spec.delta, static_cast<double>(spec.target_n));
      double e0 = spec.zero_law->expected_min(d0);
      rep = thm2_bound(spec.delta, spec.target_n, spec.gamma0, spec.k, e0);
      doc.set_double("e0_exact", e0);
    } else {
      if (!spec.fresh_start) throw std::runtime_error("thm3 check needs fresh-start");
      rep = thm3_bound(spec.delta, spec.target_n, spec.k, spec.fresh_start->xmin,
                       spec.fresh_start->p);
    }
    MonteCarloSummary s = estimate_hitting_time(spec, a.trials, a.cap, a.seed);
    verdict = a.bound_override > 0.0
                  ? check_value(a.bound_override, s, Direction::UpperBoundsMean)
                  : check_theorem(rep, s, Direction::UpperBoundsMean);
    doc.set_double("theorem_bound", rep.bound);
    doc.set_bool("bound_valid", rep.valid);
  } else if (a.check == "return") {
    verdict = return_probability_check(spec, a.trials, a.seed, a.cap);
    if (a.bound_override > 0.0)
      verdict = check_value(a.bound_override, verdict.empirical, Direction::UpperBoundsProb);
  } else if (a.check == "dip") {
    if (a.d < 1) throw std::runtime_error("dip check needs --d");
    doc.set_int("d", a.d);
    verdict = dip_probability_check(spec, a.d, a.trials, a.seed);
    if (a.bound_override > 0.0)
      verdict = check_value(a.bound_override, verdict.empirical, Direction::UpperBoundsProb);
  } else if (a.check == "climb") {
    if (a.d < 1) throw std::runtime_error("climb check needs --d");
    doc.set_int("d", a.d);
    verdict = climb_success_check(spec, a.d, a.trials, a.seed);
    if (a.bound_override > 0.0)
      verdict = check_value(a.bound_override, verdict.empirical, Direction::LowerBoundsProb);
  } else {
    throw std::runtime_error("unknown check " + a.check);
  }
  int code = put_verdict(doc, verdict);
  emit(render_single(doc, a.out), a.out);
  return code;
}

// ---------------------------------------------------------------------------
// ea

struct EaArgs {
  std::string fitness = "onemax";
  double c = 0.0;
  std::string selection = "tournament2";
  std::int64_t mu = 0;
  std::int64_t lambda = 1;
  double pmut = 0.0;
  std::int64_t n = 1;
  std::int64_t runs = 10;
  std::int64_t cap_gens = 100000;
  std::uint64_t seed = kDefaultMasterSeed;
  OutputOptions out;
};

EaConfig build_ea_config(const EaArgs& a) {
  EaConfig config;
  auto fit = fitness_kind_from_string(a.fitness);
  auto sel = selection_kind_from_string(a.selection);
  if (!fit) throw std::runtime_error("unknown fitness " + a.fitness);
  if (!sel) throw std::runtime_error("unknown selection " + a.selection);
  config.fitness = *fit;
  config.selection = *sel;
  config.partial_c = a.c;
  config.n = a.n;
  config.lambda = a.lambda;
  config.pmut = a.pmut;
  if (a.mu > 0) config.mu = a.mu;
  config.seed = a.seed;
  validate(config);
  return config;
}

// Advisory population-size check against the matching level model, when one
// of the built-in mappings applies.
std::optional<BoundReport> g3_advisory(const EaConfig& config) {
  try {
    LevelModel model;
    if (config.selection == SelectionKind::FitnessProportionate &&
        config.fitness == FitnessKind::OneMax)
      model = level_model_fps_onemax(config.n, config.lambda, config.pmut, 0.5);
    else if (config.selection == SelectionKind::FitnessProportionate &&
             config.fitness == FitnessKind::LeadingOnes)
      model = level_model_fps_leadingones(config.n, config.lambda, config.pmut, 0.5);
    else if (config.selection == SelectionKind::Tournament2 &&
             config.fitness == FitnessKind::OneMax)
      model = level_model_tournament_onemax(config.n, config.lambda, config.pmut, 0.5);
    else if (config.selection == SelectionKind::RankingMuComma &&
             config.fitness == FitnessKind::LeadingOnes && config.mu)
      model = level_model_ranking_leadingones(config.n, *config.mu, config.lambda,
                                              config.pmut);
    else
      return std::nullopt;
    return model.delta > 1.0 ? level_large_delta_bound(model) : level_new_bound(model);
  } catch (const std::exception&) {
    return std::nullopt;  // no positive-drift mapping for these parameters
  }
}

int run_ea(const EaArgs& a) {
  EaConfig config = build_ea_config(a);
  if (a.runs < 1) throw std::runtime_error("ea needs --runs >= 1");
  RunningStat gens;
  RunningStat evals;
  std::int64_t hits = 0;
  std::int64_t censored = 0;
  CsvTable per_run({"run", "generations", "evaluations", "hit"});
  for (std::int64_t r = 0; r < a.runs; ++r) {
    RngStream rng = RngStream::substream(a.seed, static_cast<std::uint64_t>(r));
    RunRecord rec = ea_run(config, a.cap_gens, rng);
    per_run.add_row({r, rec.generations, rec.evaluations, rec.hit});
    if (rec.hit) {
      ++hits;
      gens.add(static_cast<double>(rec.generations));
      evals.add(static_cast<double>(rec.evaluations));
    } else {
      ++censored;
    }
  }
  if (a.out.format == "csv") {
    emit(per_run.serialize(), a.out);
    return kExitOk;
  }
  KvDoc doc;
  doc.set_string("command", "ea");
  doc.set_string("fitness", to_string(config.fitness));
  if (config.fitness == FitnessKind::OneMaxPartial) doc.set_double("c", config.partial_c);
  doc.set_string("selection", to_string(config.selection));
  if (config.mu) doc.set_int("mu", *config.mu);
  doc.set_int("lambda", config.lambda);
  doc.set_double("pmut", config.pmut);
  doc.set_int("n", config.n);
  doc.set_int("runs", a.runs);
  doc.set_int("cap_generations", a.cap_gens);
  doc.set_int("seed", static_cast<std::int64_t>(a.seed));
  doc.set_int("hits", hits);
  doc.set_int("censored_runs", censored);
  if (gens.count() > 0) {
    doc.set_double("mean_generations", gens.mean());
    doc.set_double("mean_evaluations", evals.mean());
    doc.set_double("stderr_evaluations", evals.stderr_mean());
  }
  if (auto advisory = g3_advisory(config)) {
    doc.set_double("lambda_min", advisory->aux("lambda_min"));
    bool below = static_cast<double>(config.lambda) < advisory->aux("lambda_min");
    doc.set_bool("warning_g3", below);
  }
  emit(render_single(doc, a.out), a.out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// levels

struct LevelsArgs {
  EaArgs ea;
  std::int64_t j = 0;
  std::string construct = "optimal";
  std::int64_t samples = 10000;
  OutputOptions out;
};

Population construct_population(const EaConfig& config, const std::string& construct) {
  auto n = static_cast<std::size_t>(config.n);
  auto lam = static_cast<std::size_t>(config.lambda);
  auto at_fitness = [&](std::int64_t f) {
    Bitstring x(n);
    for (std::int64_t i = 0; i < f; ++i) x.set(static_cast<std::size_t>(i), true);
    return x;
  };
  Population pop;
  pop.reserve(lam);
  if (construct == "optimal") {
    pop.assign(lam, at_fitness(config.n));
    return pop;
  }
  auto colon = construct.find(':');
  std::string kind = construct.substr(0, colon);
  if (kind == "all-at") {
    pop.assign(lam, at_fitness(std::stoll(construct.substr(colon + 1))));
    return pop;
  }
  if (kind == "split") {
    auto parts = parse_int_list(construct.substr(colon + 1));
    if (parts.size() != 3) throw std::runtime_error("split needs f_lo,f_hi,count_hi");
    auto count_hi = static_cast<std::size_t>(parts[2]);
    if (count_hi > lam) throw std::runtime_error("split count_hi exceeds lambda");
    pop.assign(lam - count_hi, at_fitness(parts[0]));
    pop.insert(pop.end(), count_hi, at_fitness(parts[1]));
    return pop;
  }
  throw std::runtime_error("unknown construct " + construct +
                           " (expected optimal, all-at:F or split:f_lo,f_hi,count_hi)");
}

int run_levels(const LevelsArgs& a) {
  EaConfig config = build_ea_config(a.ea);
  Population pop = construct_population(config, a.construct);
  RngStream rng(a.ea.seed);
  ProportionEstimate est = estimate_level_params(config, pop, a.j, a.samples, rng);
  KvDoc doc;
  doc.set_string("command", "levels");
  doc.set_string("fitness", to_string(config.fitness));
  doc.set_string("selection", to_string(config.selection));
  doc.set_int("n", config.n);
  doc.set_int("lambda", config.lambda);
  doc.set_double("pmut", config.pmut);
  doc.set_int("j", a.j);
  doc.set_string("construct", a.construct);
  doc.set_int("samples", a.samples);
  doc.set_int("seed", static_cast<std::int64_t>(a.ea.seed));
  doc.set_double("estimate", est.p_hat);
  doc.set_double("wilson_lo", est.wilson95.lo);
  doc.set_double("wilson_hi", est.wilson95.hi);
  double nd = static_cast<double>(config.n);
  doc.set_double("copy_probability", std::pow(1.0 - config.pmut, nd));
  // Reference upgrade floor (n-j) gamma0 pmut / 4 with gamma0 = 1/2, the
  // asymptotic factor dropped.
  doc.set_double("reference_z",
                 (nd - static_cast<double>(a.j)) * 0.5 * config.pmut / 4.0);
  emit(render_single(doc, a.out), a.out);
  return kExitOk;
}

// ---------------------------------------------------------------------------
// sweep

struct SweepBoundArgs {
  std::string theorem = "thm1";
  std::string delta_grid = "0.1:1:10";
  std::string n_list = "100";
  double gamma0 = 0.5;
  std::int64_t k = 1;
  OutputOptions out;
};

int run_sweep_bound(const SweepBoundArgs& a) {
  auto id = theorem_id_from_string(a.theorem);
  if (!id || (*id != TheoremId::UpDrift1))
    throw std::runtime_error("sweep bound supports theorem thm1");
  CsvTable table({"delta", "n", "gamma0", "k", "bound", "valid"});
  for (double delta : parse_grid(a.delta_grid)) {
    for (std::int64_t n : parse_int_list(a.n_list)) {
      BoundReport rep = thm1_bound(delta, n, a.gamma0, a.k);
      table.add_row({delta, n, a.gamma0, a.k, rep.bound, rep.valid});
    }
  }
  emit(table.serialize(), a.out);
  return kExitOk;
}

struct SweepEaArgs {
  std::string fitness = "onemax";
  std::string selection = "fps";
  std::string n_list = "16,32,64";
  std::int64_t runs = 30;
  std::int64_t cap_gens = 1000000;
  std::uint64_t seed = kDefaultMasterSeed;
  OutputOptions out;
};

int run_sweep_ea(const SweepEaArgs& a) {
  CsvTable table({"n", "lambda", "pmut", "runs", "hits", "censored", "mean_generations",
                  "mean_evaluations", "stderr_evaluations"});
  for (std::int64_t n : parse_int_list(a.n_list)) {
    EaArgs ea;
    ea.fitness = a.fitness;
    ea.selection = a.selection;
    ea.n = n;
    double nd = static_cast<double>(n);
    ea.lambda = static_cast<std::int64_t>(std::ceil(nd * std::log(nd)));
    ea.pmut = 1.0 / (6.0 * nd * nd);
    EaConfig config = build_ea_config(ea);
    RunningStat gens;
    RunningStat evals;
    std::int64_t hits = 0;
    for (std::int64_t r = 0; r < a.runs; ++r) {
      RngStream rng = RngStream::substream(
          a.seed, static_cast<std::uint64_t>(n) * 1000003ULL + static_cast<std::uint64_t>(r));
      RunRecord rec = ea_run(config, a.cap_gens, rng);
      if (rec.hit) {
        ++hits;
        gens.add(static_cast<double>(rec.generations));
        evals.add(static_cast<double>(rec.evaluations));
      }
    }
    table.add_row({n, config.lambda, config.pmut, a.runs, hits, a.runs - hits,
                   hits ? gens.mean() : 0.0, hits ? evals.mean() : 0.0,
                   hits ? evals.stderr_mean() : 0.0});
  }
  emit(table.serialize(), a.out);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulation, bound calculation and statistical verification for "
               "multiplicative up-drift processes and non-elitist population EAs"};
  app.require_subcommand(1);
  std::function<int()> runner;

  auto bound_args = std::make_shared<BoundArgs>();
  auto* bound = app.add_subcommand("bound", "Evaluate a closed-form hitting-time bound");
  bound->add_option("theorem", bound_args->theorem,
                    "thm1|nodrift|thm2|thm3|level-new|level-large-delta|level-old")
      ->required();
  bound->add_option("--delta", bound_args->delta, "Relative drift");
  bound->add_option("--n", bound_args->n, "Hitting target");
  bound->add_option("--gamma0", bound_args->gamma0, "Slack parameter");
  bound->add_option("--k", bound_args->k, "Binomial trial count");
  bound->add_option("--d0", bound_args->d0, "Phase threshold D0 (nodrift)");
  bound->add_option("--e0", bound_args->e0, "Zero-state exit expectation E0 (thm2)");
  bound->add_option("--xmin", bound_args->xmin, "Fresh-start minimum (thm3)");
  bound->add_option("--p", bound_args->p, "Fresh-start probability (thm3)");
  bound->add_option("--m", bound_args->m, "Level count (level-*)");
  bound->add_option("--z", bound_args->z_list, "Comma-separated z_1..z_{m-1}");
  bound->add_option("--z-fill", bound_args->z_fill, "Uniform z_j value");
  bound->add_option("--lambda", bound_args->lambda, "Population size (level-*)");
  add_output_options(bound, bound_args->out);
  bound->callback([bound_args, &runner] { runner = [bound_args] { return run_bound(*bound_args); }; });

  auto sim_args = std::make_shared<SimulateArgs>();
  auto* sim = app.add_subcommand("simulate", "Monte Carlo hitting-time estimate");
  add_process_options(sim, sim_args->process);
  sim->add_option("--trials", sim_args->trials, "Trial count");
  sim->add_option("--cap", sim_args->cap, "Per-trial step cap");
  sim->add_option("--seed", sim_args->seed, "Master seed");
  add_output_options(sim, sim_args->out);
  sim->callback([sim_args, &runner] { runner = [sim_args] { return run_simulate(*sim_args); }; });

  auto verify_args = std::make_shared<VerifyArgs>();
  auto* verify = app.add_subcommand("verify", "Check a theorem claim against simulation");
  verify->add_option("check", verify_args->check, "thm1|thm2|thm3|return|dip|climb")
      ->required();
  add_process_options(verify, verify_args->process);
  verify->add_option("--trials", verify_args->trials, "Trial count");
  verify->add_option("--cap", verify_args->cap, "Per-trial step cap");
  verify->add_option("--seed", verify_args->seed, "Master seed");
  verify->add_option("--d", verify_args->d, "Start state for dip/climb checks");
  verify->add_option("--bound-override", verify_args->bound_override,
                     "Compare against this value instead of the theorem bound");
  add_output_options(verify, verify_args->out);
  verify->callback(
      [verify_args, &runner] { runner = [verify_args] { return run_verify(*verify_args); }; });

  auto ea_args = std::make_shared<EaArgs>();
  auto* ea = app.add_subcommand("ea", "Run a batch of population EA optimizations");
  ea->add_option("--fitness", ea_args->fitness, "onemax|leadingones|onemax-partial");
  ea->add_option("--c", ea_args->c, "Partial-evaluation rate c");
  ea->add_option("--selection", ea_args->selection, "fps|tournament2|ranking");
  ea->add_option("--mu", ea_args->mu, "Parent pool size (ranking)");
  ea->add_option("--lambda", ea_args->lambda, "Offspring count")->required();
  ea->add_option("--pmut", ea_args->pmut, "Per-bit mutation rate")->required();
  ea->add_option("--n", ea_args->n, "Problem size")->required();
  ea->add_option("--runs", ea_args->runs, "Independent runs");
  ea->add_option("--cap-gens", ea_args->cap_gens, "Generation cap per run");
  ea->add_option("--seed", ea_args->seed, "Master seed");
  add_output_options(ea, ea_args->out);
  ea->callback([ea_args, &runner] { runner = [ea_args] { return run_ea(*ea_args); }; });

  auto levels_args = std::make_shared<LevelsArgs>();
  auto* levels = app.add_subcommand("levels", "Estimate level-upgrade probabilities");
  levels->add_option("--fitness", levels_args->ea.fitness, "onemax|leadingones|onemax-partial");
  levels->add_option("--c", levels_args->ea.c, "Partial-evaluation rate c");
  levels->add_option("--selection", levels_args->ea.selection, "fps|tournament2|ranking");
  levels->add_option("--mu", levels_args->ea.mu, "Parent pool size (ranking)");
  levels->add_option("--lambda", levels_args->ea.lambda, "Population size")->required();
  levels->add_option("--pmut", levels_args->ea.pmut, "Per-bit mutation rate")->required();
  levels->add_option("--n", levels_args->ea.n, "Problem size")->required();
  levels->add_option("--j", levels_args->j, "Level index j (estimates Pr[f >= j])")
      ->required();
  levels->add_option("--construct", levels_args->construct,
                     "optimal | all-at:F | split:f_lo,f_hi,count_hi");
  levels->add_option("--samples", levels_args->samples, "Offspring samples");
  levels->add_option("--seed", levels_args->ea.seed, "Seed");
  add_output_options(levels, levels_args->out);
  levels->callback(
      [levels_args, &runner] { runner = [levels_args] { return run_levels(*levels_args); }; });

  auto* sweep = app.add_subcommand("sweep", "Parameter sweeps emitting CSV tables");
  sweep->require_subcommand(1);

  auto sweep_bound_args = std::make_shared<SweepBoundArgs>();
  auto* sweep_bound = sweep->add_subcommand("bound", "Bound validity-region sweep");
  sweep_bound->add_option("theorem", sweep_bound_args->theorem, "thm1");
  sweep_bound->add_option("--delta-grid", sweep_bound_args->delta_grid, "lo:hi:steps");
  sweep_bound->add_option("--n-list", sweep_bound_args->n_list, "Comma-separated n values");
  sweep_bound->add_option("--gamma0", sweep_bound_args->gamma0, "Slack parameter");
  sweep_bound->add_option("--k", sweep_bound_args->k, "Binomial trial count")->required();
  add_output_options(sweep_bound, sweep_bound_args->out);
  sweep_bound->callback([sweep_bound_args, &runner] {
    runner = [sweep_bound_args] { return run_sweep_bound(*sweep_bound_args); };
  });

  auto sweep_ea_args = std::make_shared<SweepEaArgs>();
  auto* sweep_ea = sweep->add_subcommand(
      "ea", "Scaling sweep with lambda = ceil(n ln n), pmut = 1/(6 n^2)");
  sweep_ea->add_option("--fitness", sweep_ea_args->fitness, "onemax|leadingones");
  sweep_ea->add_option("--selection", sweep_ea_args->selection, "fps|tournament2");
  sweep_ea->add_option("--n-list", sweep_ea_args->n_list, "Comma-separated n values");
  sweep_ea->add_option("--runs", sweep_ea_args->runs, "Runs per n");
  sweep_ea->add_option("--cap-gens", sweep_ea_args->cap_gens, "Generation cap per run");
  sweep_ea->add_option("--seed", sweep_ea_args->seed, "Master seed");
  add_output_options(sweep_ea, sweep_ea_args->out);
  sweep_ea->callback([sweep_ea_args, &runner] {
    runner = [sweep_ea_args] { return run_sweep_ea(*sweep_ea_args); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }
  try {
    return runner();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
