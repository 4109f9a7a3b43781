#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "updrift/bounds.hpp"
#include "updrift/rng.hpp"
#include "updrift/stats.hpp"

namespace updrift {

/// Fixed-length bit string, packed into 64-bit words.
class Bitstring {
 public:
  Bitstring() = default;
  explicit Bitstring(std::size_t n);  // all zeros
  static Bitstring random(std::size_t n, RngStream& rng);

  std::size_t size() const { return size_; }
  bool get(std::size_t i) const;
  void set(std::size_t i, bool v);
  void flip(std::size_t i);

  std::size_t count_ones() const;
  std::size_t leading_ones() const;
  bool all_ones() const { return leading_ones() == size_; }

  bool operator==(const Bitstring&) const = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

enum class SelectionKind { FitnessProportionate, Tournament2, RankingMuComma };
enum class FitnessKind { OneMax, LeadingOnes, OneMaxPartial };

std::string to_string(SelectionKind kind);
std::optional<SelectionKind> selection_kind_from_string(const std::string& name);
std::string to_string(FitnessKind kind);
std::optional<FitnessKind> fitness_kind_from_string(const std::string& name);

/// Population process parameterization.
struct EaConfig {
  std::int64_t n = 1;
  std::int64_t lambda = 1;
  std::optional<std::int64_t> mu;  // RankingMuComma only
  SelectionKind selection = SelectionKind::Tournament2;
  double pmut = 0.0;
  FitnessKind fitness = FitnessKind::OneMax;
  double partial_c = 0.0;  // OneMaxPartial mask rate, in (1/n, 1)
  std::uint64_t seed = kDefaultMasterSeed;
};

void validate(const EaConfig& config);

std::int64_t onemax(const Bitstring& x);
std::int64_t leadingones(const Bitstring& x);

/// Randomized fitness sum R_i x_i with a fresh i.i.d. Bernoulli(c) mask per
/// evaluation; the masked count of a string with o ones is exactly Bin(o, c).
std::int64_t onemax_partial(const Bitstring& x, double c, RngStream& rng);

/// Index proportional to fitness; uniform when all fitnesses are zero.
std::size_t select_fitness_proportionate(std::span<const double> fitnesses,
                                         RngStream& rng);

/// Two independent uniform picks (with replacement), fitter one wins, ties
/// broken uniformly.
std::size_t select_tournament2(std::span<const double> fitnesses, RngStream& rng);

/// Uniform over the mu best; ties at the cut are resolved by randomizing the
/// order among equal-fitness individuals before truncation.
std::size_t select_ranking_mu_comma(std::span<const double> fitnesses, std::int64_t mu,
                                    RngStream& rng);

/// Each bit flipped independently with probability pmut.
Bitstring mutate_standard(const Bitstring& x, double pmut, RngStream& rng);

using Population = std::vector<Bitstring>;

/// One generation: evaluate parents once (fresh masks under partial
/// evaluation), then create lambda offspring by independent select+mutate.
Population ea_generation(const EaConfig& config, const Population& parents,
                         RngStream& rng);

struct RunRecord {
  std::int64_t generations = 0;
  std::int64_t evaluations = 0;  // lambda * generations
  bool hit = false;
  std::vector<std::int64_t> best_fitness_trace;           // optional
  std::vector<std::vector<std::int64_t>> level_trace;     // optional
};

struct RunOptions {
  bool record_best_trace = false;
  bool record_level_trace = false;
};

/// Runs from a uniform random population until some individual reaches the
/// true optimum (the unmasked value under partial evaluation) or the
/// generation cap.
RunRecord ea_run(const EaConfig& config, std::int64_t cap_generations, RngStream& rng,
                 const RunOptions& options = {});

/// Cumulative-from-above level occupancy: entry j-1 counts individuals with
/// fitness >= j-1, for j = 1..m (levels A_j = {f = j-1}).
std::vector<std::int64_t> level_occupancy(std::span<const std::int64_t> fitness_values,
                                          std::int64_t m);

/// Monte Carlo estimate of Pr[y ~ D(P) lands in A_{>= j+1}], i.e. true
/// fitness >= j, with a Wilson interval.
ProportionEstimate estimate_level_params(const EaConfig& config,
                                         const Population& population, std::int64_t j,
                                         std::int64_t samples, RngStream& rng);

/// Level-model instantiations of the population processes this engine
/// implements, with finite-n floors in place of asymptotic o(1) factors.
LevelModel level_model_fps_onemax(std::int64_t n, std::int64_t lambda, double pmut,
                                  double gamma0);
LevelModel level_model_fps_leadingones(std::int64_t n, std::int64_t lambda, double pmut,
                                       double gamma0);
LevelModel level_model_tournament_onemax(std::int64_t n, std::int64_t lambda,
                                         double pmut, double gamma0);
LevelModel level_model_ranking_leadingones(std::int64_t n, std::int64_t mu,
                                           std::int64_t lambda, double pmut);

}  // namespace updrift
