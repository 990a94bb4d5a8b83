#include "plahx/meta_search.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <thread>

#include "json.hpp"

namespace plahx {

ConflictRecorder::ConflictRecorder(double w_init, double tau, double floor)
    : w_init_(w_init), tau_(tau), floor_(floor) {}

std::uint64_t ConflictRecorder::key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

double ConflictRecorder::weight(int a, int b) const {
  auto it = entries_.find(key(a, b));
  return it == entries_.end() ? w_init_ : it->second.weight;
}

long ConflictRecorder::conflict_count(int a, int b) const {
  auto it = entries_.find(key(a, b));
  return it == entries_.end() ? 0 : it->second.conflicts;
}

void ConflictRecorder::penalize(int a, int b, int iteration) {
  Entry& entry = entries_.try_emplace(key(a, b), Entry{w_init_, 0}).first->second;
  entry.conflicts += 1;
  double clamped = std::min(static_cast<double>(entry.conflicts), tau_ - 1.0);
  double penalty = rho_schedule(iteration) * tau_ / (tau_ - clamped);
  entry.weight = std::max(entry.weight - penalty, floor_);
}

std::vector<ConflictRecorder::PairRecord> ConflictRecorder::records() const {
  std::vector<PairRecord> out;
  out.reserve(entries_.size());
  for (const auto& [k, e] : entries_)
    out.push_back({static_cast<int>(k >> 32), static_cast<int>(k & 0xffffffffu),
                   e.weight, e.conflicts});
  return out;
}

double rho_schedule(int iteration) {
  return 0.1 * std::exp(-0.025 * iteration);
}

double mutation_rate(int iteration, int max_iterations) {
  return 0.05 + static_cast<double>(max_iterations - iteration) /
                    (10.0 * max_iterations);
}

double compatibility_weight(int action, std::span<const int> pool,
                            const ConflictRecorder& recorder) {
  double total = 0.0;
  for (int other : pool)
    if (other != action) total += recorder.weight(action, other);
  return total;
}

std::vector<double> sampling_distribution(std::span<const int> pool,
                                          const ConflictRecorder& recorder) {
  std::vector<double> probs(pool.size());
  double total = 0.0;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    probs[i] = compatibility_weight(pool[i], pool, recorder);
    total += probs[i];
  }
  if (total <= 0.0) {
    std::fill(probs.begin(), probs.end(), 1.0 / static_cast<double>(pool.size()));
    return probs;
  }
  for (double& p : probs) p /= total;
  return probs;
}

MetaContext make_meta_context(const GroundedTask& task) {
  MetaContext ctx;
  ctx.action_count = static_cast<int>(task.actions.size());
  ctx.min_length = std::min(3, ctx.action_count);
  ctx.max_length = std::max(ctx.min_length, ctx.action_count / 2);
  ctx.is_critical.assign(task.actions.size(), 0);
  for (const GroundedAction& action : task.actions) {
    if (is_critical(action, task)) {
      ctx.is_critical[action.id] = 1;
      ctx.critical.push_back(action.id);
    }
  }
  return ctx;
}

std::vector<Individual> init_population(const MetaContext& ctx,
                                        const SearchConfig& config, Rng& rng) {
  const int n_critical = static_cast<int>(ctx.critical.size());
  std::vector<int> fillers;
  for (int id = 0; id < ctx.action_count; ++id)
    if (!ctx.is_critical[id]) fillers.push_back(id);

  std::vector<Individual> population(config.population);
  for (Individual& individual : population) {
    int lo = std::max(ctx.min_length, n_critical);
    int hi = std::max(ctx.max_length, n_critical);
    int target = rng.range(lo, hi);
    individual.genes = ctx.critical;
    // partial Fisher-Yates over the non-critical pool
    std::vector<int> pool = fillers;
    while (individual.length() < target && !pool.empty()) {
      std::size_t pick = rng.index(pool.size());
      individual.genes.push_back(pool[pick]);
      pool[pick] = pool.back();
      pool.pop_back();
    }
  }
  return population;
}

namespace {

// k sequential draws without replacement; remaining weights renormalize
// implicitly. Falls back to uniform when all remaining weights are zero.
std::vector<int> weighted_sample(std::vector<int> pool, std::vector<double> w,
                                 int k, Rng& rng) {
  std::vector<int> out;
  out.reserve(k);
  while (static_cast<int>(out.size()) < k && !pool.empty()) {
    double total = 0.0;
    for (double x : w) total += x;
    std::size_t pick;
    if (total <= 0.0) {
      pick = rng.index(pool.size());
    } else {
      pick = rng.weighted(w);
    }
    out.push_back(pool[pick]);
    pool[pick] = pool.back();
    pool.pop_back();
    w[pick] = w.back();
    w.pop_back();
  }
  return out;
}

}  // namespace

Individual crossover(const Individual& a, const Individual& b,
                     const ConflictRecorder& recorder, const MetaContext& ctx,
                     Rng& rng, std::vector<int>* union_out) {
  std::vector<int> pool = a.genes;
  pool.insert(pool.end(), b.genes.begin(), b.genes.end());
  std::sort(pool.begin(), pool.end());
  pool.erase(std::unique(pool.begin(), pool.end()), pool.end());
  if (union_out != nullptr) *union_out = pool;

  int lo = std::min(a.length(), b.length());
  int hi = std::max(a.length(), b.length());
  int k = std::min(rng.range(lo, hi), static_cast<int>(pool.size()));

  std::vector<double> weights(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i)
    weights[i] = compatibility_weight(pool[i], pool, recorder);

  Individual child;
  child.genes = weighted_sample(pool, std::move(weights), k, rng);

  // preservation: every critical action stays in every subspace
  std::vector<char> present(ctx.action_count, 0);
  for (int g : child.genes) present[g] = 1;
  for (int c : ctx.critical) {
    if (!present[c]) {
      child.genes.push_back(c);
      present[c] = 1;
    }
  }
  if (child.length() > ctx.max_length) {
    // drop the most recently sampled non-critical genes first
    for (int i = child.length() - 1;
         i >= 0 && child.length() > ctx.max_length; --i) {
      if (!ctx.is_critical[child.genes[i]])
        child.genes.erase(child.genes.begin() + i);
    }
  }
  return child;
}

void mutate(Individual& individual, const MetaContext& ctx,
            std::span<const int> union_set, const ConflictRecorder& recorder,
            double p_mut, Rng& rng) {
  if (individual.length() >= ctx.max_length) return;
  if (p_mut <= 0.0 || rng.uniform01() >= p_mut) return;

  std::vector<char> in_union(ctx.action_count, 0);
  for (int id : union_set) in_union[id] = 1;
  std::vector<int> candidates;
  for (int id = 0; id < ctx.action_count; ++id)
    if (!in_union[id]) candidates.push_back(id);
  if (candidates.empty()) return;

  // ω(a_new) against the genes the candidate would join
  std::vector<double> weights(candidates.size());
  double total = 0.0;
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    double w = 0.0;
    for (int g : individual.genes) w += recorder.weight(candidates[i], g);
    weights[i] = w;
    total += w;
  }
  std::size_t pick = total > 0.0 ? rng.weighted(weights)
                                 : rng.index(candidates.size());
  individual.genes.push_back(candidates[pick]);
}

bool PlanArchive::insert(std::vector<int> plan, Cost f, int generation) {
  for (const ArchiveEntry& e : entries_)
    if (e.plan == plan) return false;
  entries_.push_back({std::move(plan), f, generation});
  return true;
}

const ArchiveEntry* PlanArchive::best() const {
  const ArchiveEntry* best = nullptr;
  for (const ArchiveEntry& e : entries_)
    if (best == nullptr || e.f < best->f) best = &e;
  return best;
}

namespace {

void log_generation(std::ostream& log, int m, Cost f_global,
                    std::size_t archive_size,
                    const std::vector<Individual>& population,
                    const std::vector<LocalResult>& results) {
  nlohmann::ordered_json line;
  line["m"] = m;
  if (f_global == kInfiniteCost)
    line["f_global"] = nullptr;
  else
    line["f_global"] = f_global;
  line["archive"] = archive_size;
  auto individuals = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < population.size(); ++i) {
    individuals.push_back({{"len", population[i].length()},
                           {"expanded", results[i].nodes_expanded}});
  }
  line["individuals"] = std::move(individuals);
  log << line.dump() << '\n';
}

void local_phase(const GroundedTask& task,
                 const std::vector<Individual>& population, Cost snapshot,
                 long budget, int threads, std::vector<LocalResult>& results) {
  results.assign(population.size(), LocalResult{});
  auto search_one = [&](std::size_t i) {
    results[i] = astar_subspace(task, population[i].genes, snapshot, budget);
  };
  if (threads == 1 || population.size() <= 1) {
    for (std::size_t i = 0; i < population.size(); ++i) search_one(i);
    return;
  }
  unsigned workers = threads > 0 ? static_cast<unsigned>(threads)
                                 : std::thread::hardware_concurrency();
  workers = std::max(1u, std::min<unsigned>(workers, population.size()));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> crew;
  crew.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    crew.emplace_back([&] {
      for (;;) {
        std::size_t i = next.fetch_add(1);
        if (i >= population.size()) return;
        search_one(i);
      }
    });
  }
  for (std::thread& t : crew) t.join();
}

}  // namespace

PlanResult run(const GroundedTask& task, const SearchConfig& config,
               std::ostream* log, const GenerationObserver& observer) {
  MetaContext ctx = make_meta_context(task);
  Rng rng(config.seed);

  std::vector<Individual> population = init_population(ctx, config, rng);
  ConflictRecorder recorder(config.weight_init, config.tau, config.weight_floor);
  PlanArchive archive;
  GlobalBound bound;

  PlanResult result;
  long length_sum = 0;
  long length_samples = 0;

  std::vector<LocalResult> locals;
  for (int m = 0; m < config.max_iterations; ++m) {
    for (const Individual& individual : population) {
      length_sum += individual.length();
      ++length_samples;
      result.metrics.max_subspace_size =
          std::max(result.metrics.max_subspace_size, individual.length());
    }

    Cost snapshot = bound.snapshot();
    local_phase(task, population, snapshot, config.budget, config.threads,
                locals);

    // barrier merge, individual order then discovery order
    for (const LocalResult& local : locals) {
      result.metrics.total_expansions += local.nodes_expanded;
      for (const std::vector<int>& plan : local.plans) {
        ValidationOutcome outcome = validate_plan(task, plan);
        switch (outcome.kind) {
          case ValidationOutcome::Kind::Success:
            bound.publish(static_cast<Cost>(plan.size()));
            archive.insert(plan, static_cast<Cost>(plan.size()), m);
            break;
          case ValidationOutcome::Kind::PreconditionConflict:
            recorder.penalize(plan[outcome.step], plan[outcome.culprit], m);
            break;
          default:
            break;  // goal misses carry no pair to blame
        }
      }
    }
    result.metrics.generations = m + 1;

    if (log != nullptr)
      log_generation(*log, m, bound.snapshot(), archive.size(), population,
                     locals);
    if (observer) {
      GenerationState state{m, bound.snapshot(), &population, &recorder,
                            &archive};
      observer(state);
    }

    if (static_cast<int>(archive.size()) >= config.archive_threshold) break;
    if (m + 1 == config.max_iterations) break;

    // global phase: offspring built from the old generation, then swapped in
    double p_mut = mutation_rate(m, config.max_iterations);
    std::vector<Individual> offspring(population.size());
    for (std::size_t i = 0; i < population.size(); ++i) {
      std::size_t partner = i;
      if (population.size() > 1) {
        partner = rng.index(population.size() - 1);
        if (partner >= i) ++partner;
      }
      std::vector<int> union_set;
      offspring[i] = crossover(population[i], population[partner], recorder,
                               ctx, rng, &union_set);
      mutate(offspring[i], ctx, union_set, recorder, p_mut, rng);
    }
    population = std::move(offspring);
  }

  result.metrics.mean_subspace_size =
      length_samples > 0
          ? static_cast<double>(length_sum) / static_cast<double>(length_samples)
          : 0.0;
  result.archive = archive.entries();
  if (const ArchiveEntry* best = archive.best(); best != nullptr) {
    result.found = true;
    result.best_plan = best->plan;
    result.best_f = best->f;
  }
  return result;
}

}  // namespace plahx
