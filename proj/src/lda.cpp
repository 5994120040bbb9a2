#include "thematic/lda.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <fstream>
#include <iostream>
#include <numeric>
#include <thread>

#include "json.hpp"
#include "thematic/error.hpp"

namespace thematic {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::string to_string(EstimateMode mode) { return mode == EstimateMode::average ? "average" : "last"; }

EstimateMode parse_estimate_mode(const std::string& name) {
  if (name == "average") return EstimateMode::average;
  if (name == "last") return EstimateMode::last;
  throw UsageError("unknown estimate mode '" + name + "' (expected average or last)");
}

Hyperparams default_hyperparams(int topics) {
  Hyperparams hp;
  hp.topics = topics;
  hp.alpha = topics > 0 ? 50.0 / topics : 50.0;
  return hp;
}

void validate(const Hyperparams& hp) {
  if (hp.topics < 1) throw UsageError("number of topics must be at least 1");
  if (!(hp.alpha > 0.0) || !std::isfinite(hp.alpha)) throw UsageError("alpha must be positive");
  if (!(hp.beta > 0.0) || !std::isfinite(hp.beta)) throw UsageError("beta must be positive");
  if (hp.iterations < 1) throw UsageError("iterations must be at least 1");
  if (hp.burn_in < 0 || hp.burn_in >= hp.iterations) throw UsageError("burn_in must lie in [0, iterations)");
  if (hp.workers < 1) throw UsageError("workers must be at least 1");
}

namespace {

void check_corpus(const EncodedCorpus& corpus) {
  if (corpus.docs.empty() || corpus.total_tokens == 0) throw DataError("cannot train on an empty corpus");
}

// Samples documents [begin, end) against the given word-topic and topic-total
// tables. doc_topic and z rows are owned by exactly one caller at a time.
void sample_range(std::size_t begin, std::size_t end, ModelState& s, std::int32_t* word_topic,
                  std::int32_t* topic_total, Rng& rng, const EncodedCorpus& corpus, const Hyperparams& hp) {
  const std::size_t K = s.num_topics;
  const double alpha = hp.alpha;
  const double beta = hp.beta;
  const double vbeta = static_cast<double>(s.vocab_size) * beta;
  std::vector<double> inv_denom(K);
  for (std::size_t k = 0; k < K; ++k) inv_denom[k] = 1.0 / (topic_total[k] + vbeta);
  std::vector<double> cumulative(K);

  for (std::size_t d = begin; d < end; ++d) {
    const auto& tokens = corpus.docs[d].tokens;
    auto& zd = s.z[d];
    std::int32_t* ndk = s.doc_topic.data() + d * K;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      std::int32_t* nwk = word_topic + static_cast<std::size_t>(tokens[i]) * K;
      TopicId k = zd[i];
      if (--ndk[k] < 0 || --nwk[k] < 0 || --topic_total[k] < 0) {
        throw InvariantError("count underflow in document " + std::to_string(d));
      }
      inv_denom[k] = 1.0 / (topic_total[k] + vbeta);

      double total = 0.0;
      for (std::size_t t = 0; t < K; ++t) {
        total += (ndk[t] + alpha) * (nwk[t] + beta) * inv_denom[t];
        cumulative[t] = total;
      }
      const double u = rng.uniform() * total;
      k = static_cast<TopicId>(K - 1);
      for (std::size_t t = 0; t + 1 < K; ++t) {
        if (u < cumulative[t]) {
          k = static_cast<TopicId>(t);
          break;
        }
      }

      zd[i] = k;
      ++ndk[k];
      ++nwk[k];
      ++topic_total[k];
      inv_denom[k] = 1.0 / (topic_total[k] + vbeta);
    }
  }
}

// Contiguous document blocks with roughly equal token counts.
std::vector<std::size_t> partition_docs(const EncodedCorpus& corpus, std::size_t parts) {
  std::vector<std::size_t> bounds{0};
  const double per_part = static_cast<double>(corpus.total_tokens) / static_cast<double>(parts);
  std::size_t seen = 0;
  for (std::size_t d = 0; d < corpus.docs.size() && bounds.size() < parts; ++d) {
    seen += corpus.docs[d].tokens.size();
    if (static_cast<double>(seen) >= per_part * static_cast<double>(bounds.size())) bounds.push_back(d + 1);
  }
  while (bounds.size() < parts) bounds.push_back(corpus.docs.size());
  bounds.push_back(corpus.docs.size());
  return bounds;
}

void parallel_sweep(ModelState& s, const EncodedCorpus& corpus, const Hyperparams& hp) {
  const auto workers = static_cast<std::size_t>(hp.workers);
  const auto bounds = partition_docs(corpus, workers);
  const auto snapshot_words = s.word_topic;
  const auto snapshot_totals = s.topic_total;
  std::vector<std::vector<std::int32_t>> local_words(workers, snapshot_words);
  std::vector<std::vector<std::int32_t>> local_totals(workers, snapshot_totals);
  std::vector<std::exception_ptr> errors(workers);
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&, w] {
      try {
        sample_range(bounds[w], bounds[w + 1], s, local_words[w].data(), local_totals[w].data(), s.rngs[w + 1],
                     corpus, hp);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  for (std::size_t w = 0; w < workers; ++w) {
    for (std::size_t i = 0; i < s.word_topic.size(); ++i) s.word_topic[i] += local_words[w][i] - snapshot_words[i];
    for (std::size_t k = 0; k < s.topic_total.size(); ++k) {
      s.topic_total[k] += local_totals[w][k] - snapshot_totals[k];
    }
  }
}

}  // namespace

ModelState init(const EncodedCorpus& corpus, const Hyperparams& hp) {
  validate(hp);
  check_corpus(corpus);
  const auto K = static_cast<std::size_t>(hp.topics);
  if (K > corpus.total_tokens) {
    std::clog << "warning: " << K << " topics for " << corpus.total_tokens << " tokens; some topics stay empty\n";
  }
  ModelState s;
  s.num_topics = K;
  s.vocab_size = corpus.vocab_size();
  s.doc_topic.assign(corpus.num_docs() * K, 0);
  s.word_topic.assign(s.vocab_size * K, 0);
  s.topic_total.assign(K, 0);
  for (int w = 0; w <= (hp.workers > 1 ? hp.workers : 0); ++w) {
    s.rngs.emplace_back(hp.seed, static_cast<std::uint64_t>(w));
  }
  Rng& rng = s.rngs.front();
  s.z.resize(corpus.num_docs());
  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    const auto& tokens = corpus.docs[d].tokens;
    auto& zd = s.z[d];
    zd.resize(tokens.size());
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const TopicId k = rng.below(static_cast<std::uint32_t>(K));
      zd[i] = k;
      ++s.doc_topic[d * K + k];
      ++s.word_topic[tokens[i] * K + k];
      ++s.topic_total[k];
    }
  }
  return s;
}

void sweep(ModelState& state, const EncodedCorpus& corpus, const Hyperparams& hp) {
  if (state.num_docs() != corpus.num_docs() || state.vocab_size != corpus.vocab_size()) {
    throw InvariantError("model state does not match the corpus");
  }
  const std::size_t streams = hp.workers > 1 ? static_cast<std::size_t>(hp.workers) + 1 : 1;
  if (state.rngs.size() != streams) throw UsageError("model state was initialised for a different worker count");
  if (hp.workers > 1) {
    parallel_sweep(state, corpus, hp);
  } else {
    sample_range(0, corpus.num_docs(), state, state.word_topic.data(), state.topic_total.data(), state.rngs.front(),
                 corpus, hp);
  }
  ++state.sweep_count;
}

void check_invariants(const ModelState& s, const EncodedCorpus& corpus) {
  const std::size_t K = s.num_topics;
  if (s.num_docs() != corpus.num_docs() || s.vocab_size != corpus.vocab_size() ||
      s.doc_topic.size() != corpus.num_docs() * K || s.word_topic.size() != s.vocab_size * K ||
      s.topic_total.size() != K) {
    throw InvariantError("count tables have the wrong shape");
  }
  std::vector<std::int32_t> doc_topic(s.doc_topic.size(), 0);
  std::vector<std::int32_t> word_topic(s.word_topic.size(), 0);
  std::vector<std::int32_t> topic_total(K, 0);
  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    const auto& tokens = corpus.docs[d].tokens;
    if (s.z[d].size() != tokens.size()) throw InvariantError("assignment length differs from document length");
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      const TopicId k = s.z[d][i];
      if (k >= K) throw InvariantError("topic assignment out of range");
      ++doc_topic[d * K + k];
      ++word_topic[tokens[i] * K + k];
      ++topic_total[k];
    }
  }
  if (doc_topic != s.doc_topic) throw InvariantError("topic-document counts disagree with assignments");
  if (word_topic != s.word_topic) throw InvariantError("word-topic counts disagree with assignments");
  if (topic_total != s.topic_total) throw InvariantError("topic totals disagree with assignments");
  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    std::int64_t sum = 0;
    for (std::size_t k = 0; k < K; ++k) sum += s.n_dk(d, k);
    if (sum != static_cast<std::int64_t>(corpus.docs[d].tokens.size())) {
      throw InvariantError("document row sum differs from its length");
    }
  }
  for (std::size_t k = 0; k < K; ++k) {
    std::int64_t sum = 0;
    for (std::size_t w = 0; w < s.vocab_size; ++w) sum += s.n_kw(k, w);
    if (sum != s.n_k(k)) throw InvariantError("word-topic row sum differs from topic total");
  }
  const auto total = std::accumulate(s.topic_total.begin(), s.topic_total.end(), std::int64_t{0});
  if (total != static_cast<std::int64_t>(corpus.total_tokens)) throw InvariantError("topic totals do not sum to N");
}

namespace {

// Per-sample point estimates from counts.
void sample_estimates(const ModelState& s, const EncodedCorpus& corpus, const Hyperparams& hp, Matrix& phi,
                      Matrix& theta, bool add) {
  const std::size_t K = s.num_topics;
  const std::size_t V = s.vocab_size;
  const double vbeta = static_cast<double>(V) * hp.beta;
  const double kalpha = static_cast<double>(K) * hp.alpha;
  std::vector<double> inv(K);
  for (std::size_t k = 0; k < K; ++k) inv[k] = 1.0 / (s.n_k(k) + vbeta);
  for (std::size_t w = 0; w < V; ++w) {
    for (std::size_t k = 0; k < K; ++k) {
      const double v = (s.word_topic[w * K + k] + hp.beta) * inv[k];
      if (add) {
        phi(k, w) += v;
      } else {
        phi(k, w) = v;
      }
    }
  }
  for (std::size_t d = 0; d < s.num_docs(); ++d) {
    const double denom = static_cast<double>(corpus.docs[d].tokens.size()) + kalpha;
    for (std::size_t k = 0; k < K; ++k) {
      const double v = (s.n_dk(d, k) + hp.alpha) / denom;
      if (add) {
        theta(d, k) += v;
      } else {
        theta(d, k) = v;
      }
    }
  }
}

}  // namespace

Trainer::Trainer(const EncodedCorpus& corpus, const Hyperparams& hp)
    : corpus_(corpus),
      hp_(hp),
      corpus_digest_(encoded_corpus_digest(corpus)),
      state_(init(corpus, hp)),
      phi_sum_(static_cast<std::size_t>(hp.topics), corpus.vocab_size()),
      theta_sum_(corpus.num_docs(), static_cast<std::size_t>(hp.topics)) {}

Trainer::Trainer(const EncodedCorpus& corpus, Checkpoint checkpoint)
    : corpus_(corpus),
      hp_(checkpoint.hyperparams),
      corpus_digest_(encoded_corpus_digest(corpus)),
      state_(std::move(checkpoint.state)),
      samples_(checkpoint.samples),
      phi_sum_(std::move(checkpoint.phi_sum)),
      theta_sum_(std::move(checkpoint.theta_sum)) {
  validate(hp_);
  if (checkpoint.corpus_digest != corpus_digest_) throw DataError("checkpoint was written for a different corpus");
  try {
    check_invariants(state_, corpus_);
  } catch (const InvariantError& e) {
    throw DataError(std::string("inconsistent checkpoint: ") + e.what());
  }
  const auto K = static_cast<std::size_t>(hp_.topics);
  if (state_.num_topics != K || phi_sum_.rows != K || phi_sum_.cols != corpus.vocab_size() ||
      theta_sum_.rows != corpus.num_docs() || theta_sum_.cols != K || state_.rngs.empty()) {
    throw DataError("checkpoint tables have the wrong shape");
  }
}

void Trainer::accumulate() {
  if (hp_.estimate != EstimateMode::average || state_.sweep_count <= hp_.burn_in) return;
  sample_estimates(state_, corpus_, hp_, phi_sum_, theta_sum_, true);
  ++samples_;
}

void Trainer::run(std::optional<int> max_sweeps, const ProgressFn& progress, int report_every) {
  int budget = max_sweeps.value_or(hp_.iterations);
  while (!done() && budget-- > 0) {
    sweep(state_, corpus_, hp_);
    accumulate();
    if (progress && report_every > 0 && (state_.sweep_count % report_every == 0 || done())) {
      progress({state_.sweep_count, log_likelihood(state_, corpus_, hp_)});
    }
  }
}

Checkpoint Trainer::checkpoint() const { return {hp_, corpus_digest_, state_, samples_, phi_sum_, theta_sum_}; }

TopicModel Trainer::model() const {
  if (!done()) throw UsageError("training has not finished");
  TopicModel m;
  const auto K = static_cast<std::size_t>(hp_.topics);
  m.phi = Matrix(K, corpus_.vocab_size());
  m.theta = Matrix(corpus_.num_docs(), K);
  if (hp_.estimate == EstimateMode::average) {
    if (samples_ == 0) throw InvariantError("no post-burn-in samples were accumulated");
    const double scale = 1.0 / samples_;
    for (std::size_t i = 0; i < m.phi.data.size(); ++i) m.phi.data[i] = phi_sum_.data[i] * scale;
    for (std::size_t i = 0; i < m.theta.data.size(); ++i) m.theta.data[i] = theta_sum_.data[i] * scale;
    m.samples = samples_;
  } else {
    sample_estimates(state_, corpus_, hp_, m.phi, m.theta, false);
    m.samples = 1;
  }
  m.terms = corpus_.vocabulary.terms();
  m.doc_ids.reserve(corpus_.num_docs());
  for (const auto& d : corpus_.docs) m.doc_ids.push_back(d.id);
  m.hyperparams = hp_;
  m.corpus_digest = corpus_digest_;
  m.sweeps = state_.sweep_count;
  return m;
}

TopicModel train(const EncodedCorpus& corpus, const Hyperparams& hp, const ProgressFn& progress) {
  Trainer trainer(corpus, hp);
  trainer.run(std::nullopt, progress);
  return trainer.model();
}

double log_likelihood(const TopicModel& model, const EncodedCorpus& corpus) {
  if (model.num_docs() != corpus.num_docs() || model.vocab_size() != corpus.vocab_size()) {
    throw DataError("model dimensions do not match the corpus");
  }
  if (corpus.total_tokens == 0) throw DataError("corpus has no tokens");
  const std::size_t K = model.num_topics();
  double sum = 0.0;
  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    const auto theta = model.theta.row(d);
    for (auto w : corpus.docs[d].tokens) {
      double p = 0.0;
      for (std::size_t k = 0; k < K; ++k) p += theta[k] * model.phi(k, w);
      sum += std::log(p);
    }
  }
  return sum / static_cast<double>(corpus.total_tokens);
}

double log_likelihood(const ModelState& s, const EncodedCorpus& corpus, const Hyperparams& hp) {
  const std::size_t K = s.num_topics;
  const double vbeta = static_cast<double>(s.vocab_size) * hp.beta;
  const double kalpha = static_cast<double>(K) * hp.alpha;
  std::vector<double> inv(K);
  for (std::size_t k = 0; k < K; ++k) inv[k] = 1.0 / (s.n_k(k) + vbeta);
  double sum = 0.0;
  for (std::size_t d = 0; d < corpus.num_docs(); ++d) {
    const auto& tokens = corpus.docs[d].tokens;
    const double doc_denom = static_cast<double>(tokens.size()) + kalpha;
    for (auto w : tokens) {
      double p = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        p += (s.n_dk(d, k) + hp.alpha) / doc_denom * (s.word_topic[w * K + k] + hp.beta) * inv[k];
      }
      sum += std::log(p);
    }
  }
  return sum / static_cast<double>(corpus.total_tokens);
}

std::vector<std::vector<RankedTerm>> top_words(const TopicModel& model, std::size_t k) {
  const std::size_t V = model.vocab_size();
  if (k < 1 || k > V) throw UsageError("top-word count must lie in [1, " + std::to_string(V) + "]");
  std::vector<std::vector<RankedTerm>> out(model.num_topics());
  std::vector<TermId> order(V);
  for (std::size_t t = 0; t < model.num_topics(); ++t) {
    const auto row = model.phi.row(t);
    std::iota(order.begin(), order.end(), TermId{0});
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&](TermId a, TermId b) { return row[a] != row[b] ? row[a] > row[b] : a < b; });
    auto& ranked = out[t];
    ranked.reserve(k);
    for (std::size_t r = 0; r < k; ++r) {
      const TermId id = order[r];
      ranked.push_back({id, id < model.terms.size() ? model.terms[id] : std::to_string(id), row[id]});
    }
  }
  return out;
}

TopicId primary_topic(const TopicModel& model, std::size_t doc) {
  const auto row = model.theta.row(doc);
  // max_element keeps the first of equal maxima.
  return static_cast<TopicId>(std::max_element(row.begin(), row.end()) - row.begin());
}

std::vector<std::size_t> primary_topic_counts(const TopicModel& model) {
  std::vector<std::size_t> counts(model.num_topics(), 0);
  for (std::size_t d = 0; d < model.num_docs(); ++d) ++counts[primary_topic(model, d)];
  return counts;
}

// --- persistence -----------------------------------------------------------

namespace {

constexpr std::string_view kModelFormat = "thematic.topic_model";
constexpr std::string_view kCheckpointFormat = "thematic.checkpoint";
constexpr int kFileVersion = 1;

ordered_json to_json(const Hyperparams& hp) {
  return {{"topics", hp.topics},     {"alpha", hp.alpha},
          {"beta", hp.beta},         {"iterations", hp.iterations},
          {"burn_in", hp.burn_in},   {"seed", hp.seed},
          {"estimate", to_string(hp.estimate)}, {"workers", hp.workers}};
}

Hyperparams hyperparams_from_json(const ordered_json& j) {
  Hyperparams hp;
  hp.topics = j.at("topics").get<int>();
  hp.alpha = j.at("alpha").get<double>();
  hp.beta = j.at("beta").get<double>();
  hp.iterations = j.at("iterations").get<int>();
  hp.burn_in = j.at("burn_in").get<int>();
  hp.seed = j.at("seed").get<std::uint64_t>();
  hp.estimate = parse_estimate_mode(j.at("estimate").get<std::string>());
  hp.workers = j.at("workers").get<int>();
  return hp;
}

ordered_json matrix_rows(const Matrix& m) {
  auto rows = ordered_json::array();
  for (std::size_t r = 0; r < m.rows; ++r) {
    const auto row = m.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  return rows;
}

Matrix matrix_from_rows(const ordered_json& j, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  if (j.size() != rows) throw DataError("matrix has the wrong number of rows");
  for (std::size_t r = 0; r < rows; ++r) {
    const auto row = j[r].get<std::vector<double>>();
    if (row.size() != cols) throw DataError("matrix row has the wrong length");
    std::copy(row.begin(), row.end(), m.row(r).begin());
  }
  return m;
}

void write_json(const ordered_json& j, const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << j.dump() << '\n';
  if (!out) throw DataError("error while writing '" + path.string() + "'");
}

ordered_json read_json(const fs::path& path, std::string_view format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path.string() + "'");
  ordered_json j;
  try {
    j = ordered_json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed JSON in '" + path.string() + "': " + e.what());
  }
  if (!j.is_object() || j.value("format", "") != format) {
    throw DataError("'" + path.string() + "' is not a " + std::string(format) + " file");
  }
  if (j.value("version", 0) != kFileVersion) throw DataError("unsupported version in '" + path.string() + "'");
  return j;
}

}  // namespace

void save_model(const TopicModel& m, const fs::path& path) {
  ordered_json j;
  j["format"] = kModelFormat;
  j["version"] = kFileVersion;
  j["hyperparams"] = to_json(m.hyperparams);
  j["corpus_digest"] = m.corpus_digest;
  j["sweeps"] = m.sweeps;
  j["samples"] = m.samples;
  j["terms"] = m.terms;
  j["doc_ids"] = m.doc_ids;
  j["phi"] = matrix_rows(m.phi);
  j["theta"] = matrix_rows(m.theta);
  write_json(j, path);
}

TopicModel load_model(const fs::path& path) {
  const auto j = read_json(path, kModelFormat);
  try {
    TopicModel m;
    m.hyperparams = hyperparams_from_json(j.at("hyperparams"));
    m.corpus_digest = j.at("corpus_digest").get<std::string>();
    m.sweeps = j.at("sweeps").get<int>();
    m.samples = j.at("samples").get<int>();
    m.terms = j.at("terms").get<std::vector<std::string>>();
    m.doc_ids = j.at("doc_ids").get<std::vector<std::string>>();
    const auto K = static_cast<std::size_t>(m.hyperparams.topics);
    m.phi = matrix_from_rows(j.at("phi"), K, m.terms.size());
    m.theta = matrix_from_rows(j.at("theta"), m.doc_ids.size(), K);
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed model file '" + path.string() + "': " + e.what());
  }
}

void save_checkpoint(const Checkpoint& c, const fs::path& path) {
  const auto& s = c.state;
  const std::size_t K = s.num_topics;
  ordered_json j;
  j["format"] = kCheckpointFormat;
  j["version"] = kFileVersion;
  j["hyperparams"] = to_json(c.hyperparams);
  j["corpus_digest"] = c.corpus_digest;
  j["sweep_count"] = s.sweep_count;
  j["vocab_size"] = s.vocab_size;
  auto states = ordered_json::array();
  for (const auto& r : s.rngs) states.push_back(r.state());
  j["rng_states"] = std::move(states);
  j["z"] = s.z;
  j["n_dk"] = s.doc_topic;
  // Topic-major on disk (K x V), word-major in memory.
  std::vector<std::int32_t> n_kw(s.word_topic.size());
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t w = 0; w < s.vocab_size; ++w) n_kw[k * s.vocab_size + w] = s.n_kw(k, w);
  }
  j["n_kw"] = std::move(n_kw);
  j["n_k"] = s.topic_total;
  j["samples"] = c.samples;
  j["phi_sum"] = c.phi_sum.data;
  j["theta_sum"] = c.theta_sum.data;
  write_json(j, path);
}

Checkpoint load_checkpoint(const fs::path& path) {
  const auto j = read_json(path, kCheckpointFormat);
  try {
    Checkpoint c;
    c.hyperparams = hyperparams_from_json(j.at("hyperparams"));
    c.corpus_digest = j.at("corpus_digest").get<std::string>();
    auto& s = c.state;
    s.num_topics = static_cast<std::size_t>(c.hyperparams.topics);
    s.vocab_size = j.at("vocab_size").get<std::size_t>();
    s.sweep_count = j.at("sweep_count").get<int>();
    for (const auto& r : j.at("rng_states")) s.rngs.push_back(Rng::from_state(r.get<std::string>()));
    s.z = j.at("z").get<std::vector<std::vector<TopicId>>>();
    s.doc_topic = j.at("n_dk").get<std::vector<std::int32_t>>();
    const auto n_kw = j.at("n_kw").get<std::vector<std::int32_t>>();
    s.topic_total = j.at("n_k").get<std::vector<std::int32_t>>();
    const std::size_t K = s.num_topics;
    if (n_kw.size() != K * s.vocab_size) throw DataError("checkpoint word-topic table has the wrong size");
    s.word_topic.assign(n_kw.size(), 0);
    for (std::size_t k = 0; k < K; ++k) {
      for (std::size_t w = 0; w < s.vocab_size; ++w) s.word_topic[w * K + k] = n_kw[k * s.vocab_size + w];
    }
    c.samples = j.at("samples").get<int>();
    c.phi_sum = Matrix(K, s.vocab_size);
    c.phi_sum.data = j.at("phi_sum").get<std::vector<double>>();
    c.theta_sum = Matrix(s.z.size(), K);
    c.theta_sum.data = j.at("theta_sum").get<std::vector<double>>();
    if (c.phi_sum.data.size() != K * s.vocab_size || c.theta_sum.data.size() != s.z.size() * K) {
      throw DataError("checkpoint accumulators have the wrong size");
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed checkpoint '" + path.string() + "': " + e.what());
  }
}

}  // namespace thematic
