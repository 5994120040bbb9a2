#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "thematic/matrix.hpp"
#include "thematic/preprocess.hpp"
#include "thematic/rng.hpp"

namespace thematic {

using TopicId = std::uint32_t;

enum class EstimateMode {
  average,  // mean of per-sweep estimates over the post-burn-in sweeps
  last,     // estimates from the final sample only
};

std::string to_string(EstimateMode mode);
EstimateMode parse_estimate_mode(const std::string& name);

struct Hyperparams {
  int topics = 1;  // K
  double alpha = 50.0;
  double beta = 0.01;
  int iterations = 1000;  // total sweeps
  int burn_in = 200;      // sweeps discarded before averaging
  std::uint64_t seed = 0;
  EstimateMode estimate = EstimateMode::average;
  int workers = 1;  // > 1 selects the non-deterministic parallel sweep
};

// Defaults for K topics: alpha = 50 / K, beta = 0.01, 1000 sweeps, 200 burn-in.
Hyperparams default_hyperparams(int topics);
// Throws UsageError unless K >= 1, alpha > 0, beta > 0, 0 <= burn_in < iterations, workers >= 1.
void validate(const Hyperparams& hp);

/// Sampler state: per-token topic assignments plus the three count tables.
/// The word-topic table is stored word-major so a token's K counts are
/// contiguous; use n_kw() for (topic, word) access.
struct ModelState {
  std::size_t num_topics = 0;
  std::size_t vocab_size = 0;
  std::vector<std::vector<TopicId>> z;  // z[d][i]
  std::vector<std::int32_t> doc_topic;  // D x K
  std::vector<std::int32_t> word_topic;  // V x K
  std::vector<std::int32_t> topic_total;  // K
  int sweep_count = 0;
  std::vector<Rng> rngs;  // stream 0 for single-worker sweeps, w + 1 for worker w

  std::size_t num_docs() const { return z.size(); }
  std::int32_t n_dk(std::size_t d, std::size_t k) const { return doc_topic[d * num_topics + k]; }
  std::int32_t n_kw(std::size_t k, std::size_t w) const { return word_topic[w * num_topics + k]; }
  std::int32_t n_k(std::size_t k) const { return topic_total[k]; }
};

/// Assigns every token a uniformly drawn topic from the seeded stream.
ModelState init(const EncodedCorpus& corpus, const Hyperparams& hp);

/// One collapsed Gibbs sweep over all tokens in document and position order.
/// Each token is removed from the counts and redrawn with probability
/// proportional to (n_dk + alpha) (n_kw + beta) / (n_k + V beta).
/// Throws InvariantError on a count underflow.
void sweep(ModelState& state, const EncodedCorpus& corpus, const Hyperparams& hp);

/// Throws InvariantError unless every count table agrees with z.
void check_invariants(const ModelState& state, const EncodedCorpus& corpus);

struct TopicModel {
  Matrix phi;    // K x V, rows sum to 1
  Matrix theta;  // D x K, rows sum to 1
  std::vector<std::string> terms;
  std::vector<std::string> doc_ids;
  Hyperparams hyperparams;
  std::string corpus_digest;
  int sweeps = 0;
  int samples = 0;  // sweeps averaged into the estimates

  std::size_t num_topics() const { return phi.rows; }
  std::size_t vocab_size() const { return phi.cols; }
  std::size_t num_docs() const { return theta.rows; }
};

struct Checkpoint {
  Hyperparams hyperparams;
  std::string corpus_digest;
  ModelState state;
  int samples = 0;
  Matrix phi_sum;    // K x V
  Matrix theta_sum;  // D x K
};

struct SweepReport {
  int sweep = 0;
  double log_likelihood = 0.0;  // per token, from the current sample
};

using ProgressFn = std::function<void(const SweepReport&)>;

/// Drives init + sweeps + estimate accumulation. Holds a reference to the
/// corpus, which must outlive the trainer.
class Trainer {
 public:
  Trainer(const EncodedCorpus& corpus, const Hyperparams& hp);
  // Resumes from a checkpoint; the corpus digest must match.
  Trainer(const EncodedCorpus& corpus, Checkpoint checkpoint);

  // Runs until hp.iterations sweeps have been made, or at most max_sweeps more.
  // progress is invoked every `report_every` sweeps (0 disables it).
  void run(std::optional<int> max_sweeps = std::nullopt, const ProgressFn& progress = {}, int report_every = 1);

  bool done() const { return state_.sweep_count >= hp_.iterations; }
  const ModelState& state() const { return state_; }
  const Hyperparams& hyperparams() const { return hp_; }
  Checkpoint checkpoint() const;
  // Requires done().
  TopicModel model() const;

 private:
  void accumulate();

  const EncodedCorpus& corpus_;
  Hyperparams hp_;
  std::string corpus_digest_;
  ModelState state_;
  int samples_ = 0;
  Matrix phi_sum_;
  Matrix theta_sum_;
};

TopicModel train(const EncodedCorpus& corpus, const Hyperparams& hp, const ProgressFn& progress = {});

/// Mean per-token log-likelihood (nats) of the corpus under the point
/// estimates: mean over tokens of log sum_k theta[d,k] phi[k,w].
double log_likelihood(const TopicModel& model, const EncodedCorpus& corpus);
// Same quantity for the estimates implied by the current sample.
double log_likelihood(const ModelState& state, const EncodedCorpus& corpus, const Hyperparams& hp);

struct RankedTerm {
  TermId id = 0;
  std::string term;
  double weight = 0.0;
};

/// k highest-phi terms per topic, descending; ties go to the lower term id.
std::vector<std::vector<RankedTerm>> top_words(const TopicModel& model, std::size_t k);

// argmax of the theta row; ties go to the lower topic index.
TopicId primary_topic(const TopicModel& model, std::size_t doc);
std::vector<std::size_t> primary_topic_counts(const TopicModel& model);

void save_model(const TopicModel& model, const std::filesystem::path& path);
TopicModel load_model(const std::filesystem::path& path);
void save_checkpoint(const Checkpoint& checkpoint, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace thematic
