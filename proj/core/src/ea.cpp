#include "updrift/ea.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace updrift {

Bitstring::Bitstring(std::size_t n) : size_(n), words_((n + 63) / 64, 0) {}

Bitstring Bitstring::random(std::size_t n, RngStream& rng) {
  Bitstring x(n);
  for (auto& w : x.words_) w = rng.next_u64();
  if (n % 64 != 0 && !x.words_.empty())
    x.words_.back() &= (std::uint64_t{1} << (n % 64)) - 1;
  return x;
}

bool Bitstring::get(std::size_t i) const {
  return (words_[i / 64] >> (i % 64)) & 1u;
}

void Bitstring::set(std::size_t i, bool v) {
  std::uint64_t mask = std::uint64_t{1} << (i % 64);
  if (v)
    words_[i / 64] |= mask;
  else
    words_[i / 64] &= ~mask;
}

void Bitstring::flip(std::size_t i) { words_[i / 64] ^= std::uint64_t{1} << (i % 64); }

std::size_t Bitstring::count_ones() const {
  std::size_t total = 0;
  for (auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

std::size_t Bitstring::leading_ones() const {
  std::size_t run = 0;
  for (std::size_t wi = 0; wi < words_.size(); ++wi) {
    int ones = std::countr_one(words_[wi]);
    run += static_cast<std::size_t>(ones);
    if (ones < 64) break;
  }
  return std::min(run, size_);
}

std::string to_string(SelectionKind kind) {
  switch (kind) {
    case SelectionKind::FitnessProportionate: return "fps";
    case SelectionKind::Tournament2: return "tournament2";
    case SelectionKind::RankingMuComma: return "ranking";
  }
  return "unknown";
}

std::optional<SelectionKind> selection_kind_from_string(const std::string& name) {
  if (name == "fps") return SelectionKind::FitnessProportionate;
  if (name == "tournament2") return SelectionKind::Tournament2;
  if (name == "ranking") return SelectionKind::RankingMuComma;
  return std::nullopt;
}

std::string to_string(FitnessKind kind) {
  switch (kind) {
    case FitnessKind::OneMax: return "onemax";
    case FitnessKind::LeadingOnes: return "leadingones";
    case FitnessKind::OneMaxPartial: return "onemax-partial";
  }
  return "unknown";
}

std::optional<FitnessKind> fitness_kind_from_string(const std::string& name) {
  if (name == "onemax") return FitnessKind::OneMax;
  if (name == "leadingones") return FitnessKind::LeadingOnes;
  if (name == "onemax-partial") return FitnessKind::OneMaxPartial;
  return std::nullopt;
}

void validate(const EaConfig& config) {
  if (config.n < 1) throw std::invalid_argument("EaConfig: n must be >= 1");
  if (config.lambda < 1) throw std::invalid_argument("EaConfig: lambda must be >= 1");
  if (!(config.pmut >= 0.0 && config.pmut <= 1.0))
    throw std::invalid_argument("EaConfig: pmut must lie in [0,1]");
  if (config.selection == SelectionKind::RankingMuComma) {
    if (!config.mu) throw std::invalid_argument("EaConfig: ranking selection needs mu");
    if (*config.mu < 1 || *config.mu > config.lambda)
      throw std::invalid_argument("EaConfig: need 1 <= mu <= lambda");
  }
  if (config.fitness == FitnessKind::OneMaxPartial) {
    double low = 1.0 / static_cast<double>(config.n);
    if (!(config.partial_c > low && config.partial_c <= 1.0))
      throw std::domain_error("EaConfig: partial_c must lie in (1/n, 1]");
  }
}

std::int64_t onemax(const Bitstring& x) {
  return static_cast<std::int64_t>(x.count_ones());
}

std::int64_t leadingones(const Bitstring& x) {
  return static_cast<std::int64_t>(x.leading_ones());
}

std::int64_t onemax_partial(const Bitstring& x, double c, RngStream& rng) {
  double low = x.size() > 0 ? 1.0 / static_cast<double>(x.size()) : 0.0;
  if (!(c > low && c <= 1.0))
    throw std::domain_error("onemax_partial: c must lie in (1/n, 1]");
  return rng.binomial(static_cast<std::int64_t>(x.count_ones()), c);
}

std::size_t select_fitness_proportionate(std::span<const double> fitnesses,
                                         RngStream& rng) {
  if (fitnesses.empty())
    throw std::invalid_argument("select_fitness_proportionate: empty fitness vector");
  double total = 0.0;
  for (double f : fitnesses) {
    if (f < 0.0)
      throw std::domain_error("select_fitness_proportionate: negative fitness");
    total += f;
  }
  if (total == 0.0)
    return static_cast<std::size_t>(
        rng.uniform_int(0, static_cast<std::int64_t>(fitnesses.size()) - 1));
  double u = rng.next_unit() * total;
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < fitnesses.size(); ++i) {
    acc += fitnesses[i];
    if (u < acc) return i;
  }
  return fitnesses.size() - 1;
}

std::size_t select_tournament2(std::span<const double> fitnesses, RngStream& rng) {
  if (fitnesses.empty())
    throw std::invalid_argument("select_tournament2: empty fitness vector");
  auto last = static_cast<std::int64_t>(fitnesses.size()) - 1;
  auto i = static_cast<std::size_t>(rng.uniform_int(0, last));
  auto j = static_cast<std::size_t>(rng.uniform_int(0, last));
  if (fitnesses[i] > fitnesses[j]) return i;
  if (fitnesses[j] > fitnesses[i]) return j;
  return rng.bernoulli(0.5) ? i : j;
}

std::size_t select_ranking_mu_comma(std::span<const double> fitnesses, std::int64_t mu,
                                    RngStream& rng) {
  if (fitnesses.empty())
    throw std::invalid_argument("select_ranking_mu_comma: empty fitness vector");
  if (mu < 1 || mu > static_cast<std::int64_t>(fitnesses.size()))
    throw std::invalid_argument("select_ranking_mu_comma: mu out of range");
  std::vector<std::size_t> order(fitnesses.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Random tie order, then stable sort by fitness: equal-fitness individuals
  // end up in uniformly random relative order at the cut.
  for (std::size_t i = order.size(); i > 1; --i)
    std::swap(order[i - 1],
              order[static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return fitnesses[a] > fitnesses[b]; });
  return order[static_cast<std::size_t>(rng.uniform_int(0, mu - 1))];
}

Bitstring mutate_standard(const Bitstring& x, double pmut, RngStream& rng) {
  if (!(pmut >= 0.0 && pmut <= 1.0))
    throw std::domain_error("mutate_standard: pmut must lie in [0,1]");
  Bitstring y = x;
  auto n = static_cast<std::int64_t>(x.size());
  if (n == 0) return y;
  // Flip count is Bin(n, pmut); positions a uniform subset of that size.
  // Jointly identical to flipping each bit independently.
  std::int64_t m = rng.binomial(n, pmut);
  if (m == 0) return y;
  if (m * m <= 4 * n) {
    // Floyd's subset sampling; membership scan is cheap for small m.
    std::vector<std::int64_t> chosen;
    chosen.reserve(static_cast<std::size_t>(m));
    for (std::int64_t j = n - m; j < n; ++j) {
      std::int64_t t = rng.uniform_int(0, j);
      bool dup = std::find(chosen.begin(), chosen.end(), t) != chosen.end();
      chosen.push_back(dup ? j : t);
    }
    for (auto pos : chosen) y.flip(static_cast<std::size_t>(pos));
  } else {
    std::vector<std::int64_t> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), std::int64_t{0});
    for (std::int64_t i = 0; i < m; ++i) {
      std::int64_t j = rng.uniform_int(i, n - 1);
      std::swap(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);
      y.flip(static_cast<std::size_t>(idx[static_cast<std::size_t>(i)]));
    }
  }
  return y;
}

namespace {

std::int64_t true_fitness(const EaConfig& config, const Bitstring& x) {
  return config.fitness == FitnessKind::LeadingOnes ? leadingones(x) : onemax(x);
}

double selection_fitness(const EaConfig& config, const Bitstring& x, RngStream& rng) {
  switch (config.fitness) {
    case FitnessKind::OneMax: return static_cast<double>(onemax(x));
    case FitnessKind::LeadingOnes: return static_cast<double>(leadingones(x));
    case FitnessKind::OneMaxPartial:
      return static_cast<double>(onemax_partial(x, config.partial_c, rng));
  }
  throw std::logic_error("selection_fitness: bad fitness kind");
}

// Per-generation selector over one evaluated parent population.
class Selector {
 public:
  Selector(const EaConfig& config, std::span<const double> fitnesses)
      : config_(config), fitnesses_(fitnesses) {
    switch (config.selection) {
      case SelectionKind::FitnessProportionate: {
        cumulative_.reserve(fitnesses.size());
        double acc = 0.0;
        for (double f : fitnesses) {
          if (f < 0.0) throw std::domain_error("fitness-proportionate: negative fitness");
          acc += f;
          cumulative_.push_back(acc);
        }
        break;
      }
      case SelectionKind::Tournament2:
        break;
      case SelectionKind::RankingMuComma: {
        // Individuals strictly above the cut fitness are always in the
        // parent pool; the class tied at the cut shares the remaining slots
        // uniformly. Drawing from that mixture per pick reproduces
        // uniform-over-mu-best with per-pick randomized tie order, keeping
        // offspring i.i.d. given the population.
        order_.resize(fitnesses.size());
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
          return fitnesses_[a] > fitnesses_[b];
        });
        auto mu = static_cast<std::size_t>(*config.mu);
        double cut = fitnesses_[order_[mu - 1]];
        above_cut_ = 0;
        while (above_cut_ < mu && fitnesses_[order_[above_cut_]] > cut) ++above_cut_;
        tied_begin_ = above_cut_;
        tied_end_ = tied_begin_;
        while (tied_end_ < order_.size() && fitnesses_[order_[tied_end_]] == cut)
          ++tied_end_;
        break;
      }
    }
  }

  std::size_t pick(RngStream& rng) const {
    switch (config_.selection) {
      case SelectionKind::FitnessProportionate: {
        double total = cumulative_.back();
        if (total == 0.0)
          return static_cast<std::size_t>(
              rng.uniform_int(0, static_cast<std::int64_t>(cumulative_.size()) - 1));
        double u = rng.next_unit() * total;
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        if (it == cumulative_.end()) --it;
        return static_cast<std::size_t>(it - cumulative_.begin());
      }
      case SelectionKind::Tournament2:
        return select_tournament2(fitnesses_, rng);
      case SelectionKind::RankingMuComma: {
        auto slot = static_cast<std::size_t>(rng.uniform_int(0, *config_.mu - 1));
        if (slot < above_cut_) return order_[slot];
        return order_[static_cast<std::size_t>(
            rng.uniform_int(static_cast<std::int64_t>(tied_begin_),
                            static_cast<std::int64_t>(tied_end_) - 1))];
      }
    }
    throw std::logic_error("Selector::pick: bad selection kind");
  }

 private:
  const EaConfig& config_;
  std::span<const double> fitnesses_;
  std::vector<double> cumulative_;
  std::vector<std::size_t> order_;
  std::size_t above_cut_ = 0;
  std::size_t tied_begin_ = 0;
  std::size_t tied_end_ = 0;
};

}  // namespace

Population ea_generation(const EaConfig& config, const Population& parents,
                         RngStream& rng) {
  validate(config);
  if (static_cast<std::int64_t>(parents.size()) != config.lambda)
    throw std::invalid_argument("ea_generation: population size must equal lambda");
  std::vector<double> fitnesses(parents.size());
  for (std::size_t i = 0; i < parents.size(); ++i)
    fitnesses[i] = selection_fitness(config, parents[i], rng);
  Selector selector(config, fitnesses);
  Population children;
  children.reserve(parents.size());
  for (std::int64_t i = 0; i < config.lambda; ++i) {
    std::size_t parent = selector.pick(rng);
    children.push_back(mutate_standard(parents[parent], config.pmut, rng));
  }
  return children;
}

RunRecord ea_run(const EaConfig& config, std::int64_t cap_generations, RngStream& rng,
                 const RunOptions& options) {
  validate(config);
  if (cap_generations < 1) throw std::invalid_argument("ea_run: cap must be >= 1");
  Population pop;
  pop.reserve(static_cast<std::size_t>(config.lambda));
  for (std::int64_t i = 0; i < config.lambda; ++i)
    pop.push_back(Bitstring::random(static_cast<std::size_t>(config.n), rng));

  RunRecord rec;
  std::vector<std::int64_t> fits(pop.size());
  for (std::int64_t gen = 0;; ++gen) {
    std::int64_t best = 0;
    for (std::size_t i = 0; i < pop.size(); ++i) {
      fits[i] = true_fitness(config, pop[i]);
      best = std::max(best, fits[i]);
    }
    if (options.record_best_trace) rec.best_fitness_trace.push_back(best);
    if (options.record_level_trace)
      rec.level_trace.push_back(level_occupancy(fits, config.n + 1));
    if (best >= config.n) {
      rec.generations = gen;
      rec.hit = true;
      break;
    }
    if (gen >= cap_generations) {
      rec.generations = gen;
      rec.hit = false;
      break;
    }
    pop = ea_generation(config, pop, rng);
  }
  rec.evaluations = rec.generations * config.lambda;
  return rec;
}

std::vector<std::int64_t> level_occupancy(std::span<const std::int64_t> fitness_values,
                                          std::int64_t m) {
  if (m < 1) throw std::invalid_argument("level_occupancy: m must be >= 1");
  std::vector<std::int64_t> hist(static_cast<std::size_t>(m), 0);
  for (auto f : fitness_values) {
    if (f < 0 || f > m - 1)
      throw std::invalid_argument("level_occupancy: fitness outside [0, m-1]");
    ++hist[static_cast<std::size_t>(f)];
  }
  std::vector<std::int64_t> counts(static_cast<std::size_t>(m), 0);
  std::int64_t acc = 0;
  for (std::int64_t j = m - 1; j >= 0; --j) {
    acc += hist[static_cast<std::size_t>(j)];
    counts[static_cast<std::size_t>(j)] = acc;
  }
  return counts;
}

ProportionEstimate estimate_level_params(const EaConfig& config,
                                         const Population& population, std::int64_t j,
                                         std::int64_t samples, RngStream& rng) {
  validate(config);
  if (population.empty())
    throw std::invalid_argument("estimate_level_params: empty population");
  if (samples < 1) throw std::invalid_argument("estimate_level_params: samples must be >= 1");

  const bool randomized_fitness = config.fitness == FitnessKind::OneMaxPartial;
  std::vector<double> fitnesses(population.size());
  if (!randomized_fitness)
    for (std::size_t i = 0; i < population.size(); ++i)
      fitnesses[i] = selection_fitness(config, population[i], rng);

  std::int64_t successes = 0;
  for (std::int64_t s = 0; s < samples; ++s) {
    if (randomized_fitness)
      for (std::size_t i = 0; i < population.size(); ++i)
        fitnesses[i] = selection_fitness(config, population[i], rng);
    std::size_t parent;
    switch (config.selection) {
      case SelectionKind::FitnessProportionate:
        parent = select_fitness_proportionate(fitnesses, rng);
        break;
      case SelectionKind::Tournament2:
        parent = select_tournament2(fitnesses, rng);
        break;
      case SelectionKind::RankingMuComma:
        parent = select_ranking_mu_comma(fitnesses, *config.mu, rng);
        break;
      default:
        throw std::logic_error("estimate_level_params: bad selection kind");
    }
    Bitstring child = mutate_standard(population[parent], config.pmut, rng);
    if (true_fitness(config, child) >= j) ++successes;
  }
  return make_proportion(successes, samples);
}

namespace {

void check_model_inputs(std::int64_t n, std::int64_t lambda, double pmut, double gamma0) {
  if (n < 1) throw std::invalid_argument("level model: n must be >= 1");
  if (lambda < 1) throw std::invalid_argument("level model: lambda must be >= 1");
  if (!(pmut > 0.0 && pmut < 1.0))
    throw std::invalid_argument("level model: pmut must lie in (0,1)");
  if (!(gamma0 > 0.0 && gamma0 < 1.0))
    throw std::invalid_argument("level model: gamma0 must lie in (0,1)");
}

}  // namespace

LevelModel level_model_fps_onemax(std::int64_t n, std::int64_t lambda, double pmut,
                                  double gamma0) {
  check_model_inputs(n, lambda, pmut, gamma0);
  double nd = static_cast<double>(n);
  double keep = std::pow(1.0 - pmut, nd - 1.0);
  double copy = std::pow(1.0 - pmut, nd);
  double delta = (1.0 + 1.0 / (2.0 * nd)) * copy - 1.0;
  if (!(delta > 0.0))
    throw std::invalid_argument("level_model_fps_onemax: pmut too large for positive drift");
  LevelModel model;
  model.m = n + 1;
  model.delta = delta;
  model.gamma0 = gamma0;
  model.lambda = lambda;
  model.z.reserve(static_cast<std::size_t>(n));
  for (std::int64_t j = 1; j <= n; ++j) {
    double zj = (gamma0 / 4.0) * static_cast<double>(n - j + 1) * pmut * keep;
    model.z.push_back(std::min(zj, 1.0));
  }
  return model;
}

LevelModel level_model_fps_leadingones(std::int64_t n, std::int64_t lambda, double pmut,
                                       double gamma0) {
  check_model_inputs(n, lambda, pmut, gamma0);
  double nd = static_cast<double>(n);
  double keep = std::pow(1.0 - pmut, nd - 1.0);
  double copy = std::pow(1.0 - pmut, nd);
  double delta = (1.0 + 1.0 / (2.0 * nd)) * copy - 1.0;
  if (!(delta > 0.0))
    throw std::invalid_argument(
        "level_model_fps_leadingones: pmut too large for positive drift");
  LevelModel model;
  model.m = n + 1;
  model.delta = delta;
  model.gamma0 = gamma0;
  model.lambda = lambda;
  model.z.assign(static_cast<std::size_t>(n), std::min((gamma0 / 4.0) * pmut * keep, 1.0));
  return model;
}

LevelModel level_model_tournament_onemax(std::int64_t n, std::int64_t lambda,
                                         double pmut, double gamma0) {
  check_model_inputs(n, lambda, pmut, gamma0);
  double nd = static_cast<double>(n);
  double keep = std::pow(1.0 - pmut, nd - 1.0);
  double copy = std::pow(1.0 - pmut, nd);
  // A tournament lands in an upper set of measure q with probability 1-(1-q)^2.
  double q = gamma0 / 4.0;
  double hit_top = 1.0 - (1.0 - q) * (1.0 - q);
  double delta = (2.0 - gamma0) * copy - 1.0;
  if (!(delta > 0.0))
    throw std::invalid_argument(
        "level_model_tournament_onemax: pmut too large for positive drift");
  LevelModel model;
  model.m = n + 1;
  model.delta = delta;
  model.gamma0 = gamma0;
  model.lambda = lambda;
  model.z.reserve(static_cast<std::size_t>(n));
  for (std::int64_t j = 1; j <= n; ++j) {
    double zj = hit_top * static_cast<double>(n - j + 1) * pmut * keep;
    model.z.push_back(std::min(zj, 1.0));
  }
  return model;
}

LevelModel level_model_ranking_leadingones(std::int64_t n, std::int64_t mu,
                                           std::int64_t lambda, double pmut) {
  if (mu < 1 || mu >= lambda)
    throw std::invalid_argument("level_model_ranking_leadingones: need 1 <= mu < lambda");
  double gamma0 = static_cast<double>(mu) / static_cast<double>(lambda);
  check_model_inputs(n, lambda, pmut, gamma0);
  double nd = static_cast<double>(n);
  double keep = std::pow(1.0 - pmut, nd - 1.0);
  double copy = std::pow(1.0 - pmut, nd);
  double delta = static_cast<double>(lambda) / static_cast<double>(mu) * copy - 1.0;
  if (!(delta > 0.0))
    throw std::invalid_argument(
        "level_model_ranking_leadingones: lambda/mu too small for positive drift");
  LevelModel model;
  model.m = n + 1;
  model.delta = delta;
  model.gamma0 = gamma0;
  model.lambda = lambda;
  model.z.assign(static_cast<std::size_t>(n), std::min(pmut * keep, 1.0));
  return model;
}

}  // namespace updrift
