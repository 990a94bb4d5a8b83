#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "plahx/heuristic.hpp"
#include "plahx/rng.hpp"

namespace plahx {

// Variable-length sequence of distinct action ids; defines the action
// subspace searched by one population member.
struct Individual {
  std::vector<int> genes;

  int length() const { return static_cast<int>(genes.size()); }
};

// Symmetric pairwise compatibility weights with conflict counts. Weights
// start at w_init and only decrease, never below the floor.
class ConflictRecorder {
 public:
  ConflictRecorder(double w_init = 1.0, double tau = 200.0, double floor = 0.1);

  double weight(int a, int b) const;
  long conflict_count(int a, int b) const;

  // Increments ε(a,b), then w(a,b) ← max(w − ρ(m)·τ/(τ−ε), floor) with ε
  // clamped to τ−1 inside the denominator.
  void penalize(int a, int b, int iteration);

  double w_init() const { return w_init_; }
  double tau() const { return tau_; }
  double floor() const { return floor_; }

  struct PairRecord {
    int a, b;
    double weight;
    long conflicts;
  };
  std::vector<PairRecord> records() const;

 private:
  struct Entry {
    double weight;
    long conflicts;
  };
  static std::uint64_t key(int a, int b);

  std::unordered_map<std::uint64_t, Entry> entries_;
  double w_init_, tau_, floor_;
};

// ρ(m) = 0.1 · exp(−0.025·m)
double rho_schedule(int iteration);

// p_mut(m) = 0.05 + (M − m) / (10·M)
double mutation_rate(int iteration, int max_iterations);

// ω(a) = Σ_{a' ∈ C \ {a}} w(a, a')
double compatibility_weight(int action, std::span<const int> pool,
                            const ConflictRecorder& recorder);

// p(a) = ω(a)/Σω, uniform over the pool when every ω is zero; aligned with
// pool order.
std::vector<double> sampling_distribution(std::span<const int> pool,
                                          const ConflictRecorder& recorder);

struct SearchConfig {
  int population = 20;        // N_pop
  int max_iterations = 100;   // M
  int archive_threshold = 2;  // N_stop
  double tau = 200.0;
  double weight_floor = 0.1;  // ℓ_b
  double weight_init = 1.0;
  long budget = 10000;        // expansions per individual per generation
  std::uint64_t seed = 0;
  int threads = 0;            // 0 = hardware concurrency, 1 = single-threaded
};

// Derived per-task constants: clamped encoding bounds and the critical set.
struct MetaContext {
  int action_count = 0;
  int min_length = 0;  // min(3, |A|)
  int max_length = 0;  // max(min_length, ⌊|A|/2⌋); criticals may exceed it
  std::vector<int> critical;  // ascending ids
  std::vector<char> is_critical;
};

MetaContext make_meta_context(const GroundedTask& task);

std::vector<Individual> init_population(const MetaContext& ctx,
                                        const SearchConfig& config, Rng& rng);

// Union-and-sample crossover. Offspring length k is uniform over the
// parents' length interval; actions are drawn without replacement from the
// compatibility distribution over the union, renormalizing after each draw.
// Dropped critical actions are re-inserted, then non-critical genes are
// trimmed from the tail if the cap is exceeded. `union_out`, when given,
// receives the union set C.
Individual crossover(const Individual& a, const Individual& b,
                     const ConflictRecorder& recorder, const MetaContext& ctx,
                     Rng& rng, std::vector<int>* union_out = nullptr);

// With probability p_mut appends one action from A \ C, drawn proportionally
// to its compatibility with the current genes. Skipped at the length cap or
// when no candidate exists.
void mutate(Individual& individual, const MetaContext& ctx,
            std::span<const int> union_set, const ConflictRecorder& recorder,
            double p_mut, Rng& rng);

struct ArchiveEntry {
  std::vector<int> plan;
  Cost f;
  int generation;
};

// Validated plans, deduplicated by exact id sequence, insertion-ordered.
class PlanArchive {
 public:
  bool insert(std::vector<int> plan, Cost f, int generation);
  std::size_t size() const { return entries_.size(); }
  const std::vector<ArchiveEntry>& entries() const { return entries_; }
  // min f, ties by earliest archival; nullptr when empty
  const ArchiveEntry* best() const;

 private:
  std::vector<ArchiveEntry> entries_;
};

// Observer view of one generation, after the local phase merged.
struct GenerationState {
  int iteration;
  Cost f_global;
  const std::vector<Individual>* population;
  const ConflictRecorder* recorder;
  const PlanArchive* archive;
};
using GenerationObserver = std::function<void(const GenerationState&)>;

struct PlanResult {
  bool found = false;
  std::vector<int> best_plan;
  Cost best_f = kInfiniteCost;
  std::vector<ArchiveEntry> archive;

  struct Metrics {
    int generations = 0;
    long total_expansions = 0;
    double mean_subspace_size = 0.0;  // mean individual length over the run
    int max_subspace_size = 0;        // max |A^(j)| observed
  } metrics;
};

// Alternates a local phase (bounded subspace A* per individual against the
// generation-start bound snapshot; candidates validated, successes archived,
// precondition conflicts penalized, bound lowered) with a global phase
// (crossover + mutation replacing every individual) until the archive
// reaches the threshold or the iteration cap. Deterministic for a fixed
// seed; the thread count does not change the result because every worker
// prunes against the same generation-start snapshot.
PlanResult run(const GroundedTask& task, const SearchConfig& config,
               std::ostream* log = nullptr,
               const GenerationObserver& observer = {});

}  // namespace plahx
