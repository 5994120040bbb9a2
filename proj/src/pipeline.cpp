#include "thematic/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "json.hpp"
#include "thematic/community.hpp"
#include "thematic/digest.hpp"
#include "thematic/error.hpp"
#include "thematic/format.hpp"
#include "thematic/report.hpp"

namespace thematic {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;
using ordered_json = nlohmann::ordered_json;

Hyperparams RunConfig::hyperparams(int topics) const {
  Hyperparams hp = default_hyperparams(topics);
  if (alpha) hp.alpha = *alpha;
  hp.beta = beta;
  hp.iterations = iterations;
  hp.burn_in = burn_in;
  hp.seed = seed;
  hp.workers = workers;
  hp.estimate = estimate;
  return hp;
}

namespace {

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  return s.substr(first, s.find_last_not_of(" \t") - first + 1);
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "yes" || value == "on" || value == "1") return true;
  if (value == "false" || value == "no" || value == "off" || value == "0") return false;
  throw UsageError(key + ": expected true or false, got '" + value + "'");
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  in.imbue(std::locale::classic());
  T v{};
  in >> v;
  if (!in || !in.eof() || (std::is_unsigned_v<T> && value.find('-') != std::string::npos)) {
    throw UsageError(key + ": cannot parse '" + value + "'");
  }
  return v;
}

double parse_real(const std::string& key, const std::string& value) {
  try {
    return parse_double(value);
  } catch (const DataError&) {
    throw UsageError(key + ": expected a number, got '" + value + "'");
  }
}

std::vector<int> parse_topic_list(const std::string& key, const std::string& value) {
  std::vector<int> out;
  std::stringstream in(value);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(parse_number<int>(key, trim(item)));
  return out;
}

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"thematic", {"format_version"}},
      {"ingest", {"path", "format"}},
      {"filter", {"english", "ratio"}},
      {"preprocess", {"stopwords", "min_token_length", "keep_numerals"}},
      {"train", {"topics", "alpha", "beta", "iterations", "burn_in", "seed", "workers", "estimate"}},
      {"report", {"top_words", "threshold", "similarity", "resolution"}},
      {"labels", {}},
      {"output", {"dir"}},
  };
  return keys;
}

fs::path resolve(const fs::path& base, const std::string& value) {
  const fs::path p(value);
  return p.is_absolute() ? p : (base / p).lexically_normal();
}

}  // namespace

RunConfig load_run_config(const fs::path& path) {
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw UsageError("config: " + std::string(e.what()));
  }
  const fs::path base = fs::absolute(path).parent_path();

  RunConfig c;
  bool saw_version = false;
  for (const auto& [section, entries] : tree) {
    const auto known = known_keys().find(section);
    if (known == known_keys().end()) throw UsageError("config: unknown section [" + section + "]");
    for (const auto& [key, node] : entries) {
      const std::string name = section + "." + key;
      const std::string value = trim(node.get_value<std::string>());
      if (section == "labels") {
        c.labels[parse_number<int>(name, key)] = resolve(base, value);
        continue;
      }
      if (!known->second.count(key)) throw UsageError("config: unknown key '" + name + "'");
      if (name == "thematic.format_version") {
        if (parse_number<int>(name, value) != kRunConfigVersion) {
          throw UsageError("config: unsupported format_version " + value);
        }
        saw_version = true;
      } else if (name == "ingest.path") {
        c.corpus_path = resolve(base, value);
      } else if (name == "ingest.format") {
        c.format = parse_source_format(value);
      } else if (name == "filter.english") {
        c.filter_english = parse_bool(name, value);
      } else if (name == "filter.ratio") {
        c.english_ratio = parse_real(name, value);
      } else if (name == "preprocess.stopwords") {
        c.preprocess.stopword_list_id = value;
      } else if (name == "preprocess.min_token_length") {
        c.preprocess.min_token_length = parse_number<int>(name, value);
      } else if (name == "preprocess.keep_numerals") {
        c.preprocess.keep_numerals = parse_bool(name, value);
      } else if (name == "train.topics") {
        c.topic_counts = parse_topic_list(name, value);
      } else if (name == "train.alpha") {
        if (value == "auto") {
          c.alpha.reset();
        } else {
          c.alpha = parse_real(name, value);
        }
      } else if (name == "train.beta") {
        c.beta = parse_real(name, value);
      } else if (name == "train.iterations") {
        c.iterations = parse_number<int>(name, value);
      } else if (name == "train.burn_in") {
        c.burn_in = parse_number<int>(name, value);
      } else if (name == "train.seed") {
        c.seed = parse_number<std::uint64_t>(name, value);
      } else if (name == "train.workers") {
        c.workers = parse_number<int>(name, value);
      } else if (name == "train.estimate") {
        c.estimate = parse_estimate_mode(value);
      } else if (name == "report.top_words") {
        c.top_words = parse_number<std::size_t>(name, value);
      } else if (name == "report.threshold") {
        c.threshold = parse_real(name, value);
      } else if (name == "report.similarity") {
        if (value == "auto") {
          c.similarity.reset();
        } else {
          c.similarity = parse_similarity_mode(value);
        }
      } else if (name == "report.resolution") {
        c.resolution = parse_real(name, value);
      } else if (name == "output.dir") {
        c.output_dir = resolve(base, value);
      }
    }
  }
  if (!saw_version) throw UsageError("config: missing [thematic] format_version");
  if (c.corpus_path.empty()) throw UsageError("config: missing [ingest] path");
  if (!tree.get_child_optional("output.dir")) c.output_dir = resolve(base, "out");
  validate(c);
  return c;
}

void validate(const RunConfig& c) {
  if (c.topic_counts.empty()) throw UsageError("config: train.topics is empty");
  std::set<int> seen;
  for (int k : c.topic_counts) {
    validate(c.hyperparams(k));
    if (!seen.insert(k).second) throw UsageError("config: topic count " + std::to_string(k) + " listed twice");
  }
  for (const auto& [k, _] : c.labels) {
    if (!seen.count(k)) throw UsageError("config: labels given for K=" + std::to_string(k) + " which is not trained");
  }
  if (c.english_ratio < 0.0 || c.english_ratio > 1.0) throw UsageError("config: filter.ratio must be in [0, 1]");
  if (c.preprocess.min_token_length < 1) throw UsageError("config: preprocess.min_token_length must be >= 1");
  if (c.top_words < 1) throw UsageError("config: report.top_words must be >= 1");
  if (c.threshold < 0.0 || c.threshold > 1.0) throw UsageError("config: report.threshold must be in [0, 1]");
  if (!(c.resolution > 0.0)) throw UsageError("config: report.resolution must be > 0");
}

std::string to_ini(const RunConfig& c) {
  std::ostringstream out;
  out << "[thematic]\nformat_version = " << kRunConfigVersion << "\n\n"
      << "[ingest]\npath = " << c.corpus_path.string() << "\nformat = " << to_string(c.format) << "\n\n"
      << "[filter]\nenglish = " << (c.filter_english ? "true" : "false") << "\nratio = " << shortest(c.english_ratio)
      << "\n\n"
      << "[preprocess]\nstopwords = " << c.preprocess.stopword_list_id
      << "\nmin_token_length = " << c.preprocess.min_token_length
      << "\nkeep_numerals = " << (c.preprocess.keep_numerals ? "true" : "false") << "\n\n"
      << "[train]\ntopics = ";
  for (std::size_t i = 0; i < c.topic_counts.size(); ++i) out << (i ? ", " : "") << c.topic_counts[i];
  out << "\nalpha = " << (c.alpha ? shortest(*c.alpha) : "auto") << "\nbeta = " << shortest(c.beta)
      << "\niterations = " << c.iterations << "\nburn_in = " << c.burn_in << "\nseed = " << c.seed
      << "\nworkers = " << c.workers << "\nestimate = " << to_string(c.estimate) << "\n\n"
      << "[report]\ntop_words = " << c.top_words << "\nthreshold = " << shortest(c.threshold)
      << "\nsimilarity = " << (c.similarity ? to_string(*c.similarity) : "auto")
      << "\nresolution = " << shortest(c.resolution) << "\n\n[labels]\n";
  for (const auto& [k, p] : c.labels) out << k << " = " << p.string() << "\n";
  out << "\n[output]\ndir = " << c.output_dir.string() << "\n";
  return out.str();
}

namespace {

ordered_json hyperparams_json(const Hyperparams& hp) {
  return {{"topics", hp.topics},     {"alpha", hp.alpha},
          {"beta", hp.beta},         {"iterations", hp.iterations},
          {"burn_in", hp.burn_in},   {"seed", hp.seed},
          {"estimate", to_string(hp.estimate)}, {"workers", hp.workers}};
}

// Settings that determine the outputs; the output directory is excluded.
std::string run_config_digest(const RunConfig& c) {
  RunConfig copy = c;
  copy.output_dir.clear();
  return sha256_hex(to_ini(copy));
}

class Run {
 public:
  Run(const RunConfig& config, const LogFn& log) : config_(config), log_(log) {}

  RunManifest execute();

 private:
  template <class F>
  auto stage(const std::string& name, F&& body) {
    if (log_) log_("[" + name + "]");
    const auto start = std::chrono::steady_clock::now();
    try {
      if constexpr (std::is_void_v<decltype(body())>) {
        body();
        record_timing(name, start);
      } else {
        auto result = body();
        record_timing(name, start);
        return result;
      }
    } catch (const StageError&) {
      throw;
    } catch (const Error& e) {
      throw StageError(name, e);
    } catch (const fs::filesystem_error& e) {
      throw StageError(name, DataError(e.what()));
    } catch (const std::bad_alloc&) {
      throw StageError(name, DataError("out of memory"));
    }
  }

  void record_timing(const std::string& name, std::chrono::steady_clock::time_point start) {
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
    manifest_.timings.push_back({name, elapsed.count()});
  }

  fs::path output(const fs::path& relative) {
    const auto full = config_.output_dir / relative;
    fs::create_directories(full.parent_path());
    written_.push_back(full);
    return full;
  }

  void run_topic_count(const EncodedCorpus& encoded, int topics);
  void cleanup() noexcept;

  const RunConfig& config_;
  const LogFn& log_;
  RunManifest manifest_;
  std::vector<fs::path> written_;
};

void Run::run_topic_count(const EncodedCorpus& encoded, int topics) {
  const std::string tag = "K=" + std::to_string(topics);
  const fs::path dir = "k" + std::to_string(topics);
  const Hyperparams hp = config_.hyperparams(topics);
  manifest_.hyperparams.push_back(hp);

  const TopicModel model = stage("train " + tag, [&] {
    Trainer trainer(encoded, hp);
    const int every = std::max(1, hp.iterations / 10);
    trainer.run(std::nullopt, [&](const SweepReport& r) {
      if (log_) log_("  sweep " + std::to_string(r.sweep) + " loglik/token " + fixed6(r.log_likelihood));
    }, every);
    save_checkpoint(trainer.checkpoint(), output(dir / "checkpoint.json"));
    auto m = trainer.model();
    save_model(m, output(dir / "model.json"));
    return m;
  });

  const std::vector<std::string> labels = stage("labels " + tag, [&] {
    const auto it = config_.labels.find(topics);
    return it == config_.labels.end() ? std::vector<std::string>()
                                      : load_annotations(it->second, static_cast<std::size_t>(topics));
  });

  stage("topics " + tag, [&] {
    const std::size_t k = std::min(config_.top_words, model.vocab_size());
    if (k < config_.top_words) {
      manifest_.notes.push_back(tag + ": top_words capped at vocabulary size " + std::to_string(k));
    }
    export_topic_table(model, k, labels, output(dir / "topics.tsv"));
  });

  stage("histogram " + tag, [&] {
    export_histogram(primary_topic_counts(model), labels, output(dir / "histogram.tsv"),
                     output(dir / "histogram.svg"));
  });

  const SimilarityMatrix sim = stage("similarity " + tag, [&] {
    const auto mode = config_.similarity.value_or(default_similarity_mode(model.num_topics()));
    auto s = topic_similarity(model, mode);
    write_similarity_tsv(s, output(dir / "similarity.tsv"));
    return s;
  });

  const TopicGraph graph = stage("graph " + tag, [&] { return build_graph(sim, config_.threshold, labels); });

  stage("communities " + tag, [&] {
    std::optional<Partition> partition;
    if (graph.edges.empty()) {
      manifest_.notes.push_back(tag + ": no edges at threshold " + shortest(config_.threshold) +
                                ", community detection skipped");
    } else {
      partition = louvain(graph, {config_.resolution}, config_.seed);
      save_partition(*partition, output(dir / "partition.json"));
    }
    export_graph(graph, partition, output(dir / "graph.gexf"), GraphFormat::gexf);
    export_graph(graph, partition, output(dir / "graph.json"), GraphFormat::json);
  });
}

RunManifest Run::execute() {
  manifest_.tool_version = THEMATIC_VERSION;
  manifest_.config_digest = run_config_digest(config_);
  manifest_.seed = config_.seed;
  try {
    validate(config_);
    Corpus corpus = stage("ingest", [&] { return ingest(config_.corpus_path, config_.format); });
    manifest_.corpus_digest = corpus_digest(corpus);
    if (config_.filter_english) {
      corpus = stage("filter", [&] { return filter_english(corpus, config_.english_ratio); });
    }
    const EncodedCorpus encoded = stage("preprocess", [&] {
      const auto s = stats(corpus);
      ordered_json j{{"input_count", corpus.provenance.input_count},
                     {"doc_count", s.doc_count},
                     {"token_count", s.token_count},
                     {"dropped_count", s.dropped_count}};
      if (corpus.provenance.english_ratio) j["english_ratio"] = *corpus.provenance.english_ratio;
      auto e = preprocess_corpus(corpus, config_.preprocess);
      j["encoded"] = {{"doc_count", e.num_docs()},
                      {"vocab_size", e.vocab_size()},
                      {"total_tokens", e.total_tokens},
                      {"dropped_count", e.dropped_count}};
      const auto stats_path = output("corpus_stats.json");
      std::ofstream(stats_path, std::ios::binary) << j.dump(2) << '\n';
      save_encoded_corpus(e, output("encoded_corpus.json"));
      return e;
    });
    for (int k : config_.topic_counts) run_topic_count(encoded, k);

    stage("manifest", [&] {
      for (const auto& p : written_) {
        manifest_.outputs.push_back(
            {p.lexically_relative(config_.output_dir).generic_string(), sha256_file(p), fs::file_size(p)});
      }
      save_manifest(manifest_, output("manifest.json"));
    });
  } catch (const StageError&) {
    cleanup();
    throw;
  } catch (const Error& e) {
    cleanup();
    throw StageError("config", e);
  }
  return manifest_;
}

void Run::cleanup() noexcept {
  std::error_code ec;
  std::set<fs::path> dirs;
  for (const auto& p : written_) {
    fs::remove(p, ec);
    for (auto d = p.parent_path(); d != config_.output_dir && d.has_relative_path(); d = d.parent_path()) {
      dirs.insert(d);
    }
  }
  // Deepest first; only directories left empty are removed.
  for (auto it = dirs.rbegin(); it != dirs.rend(); ++it) {
    if (fs::is_empty(*it, ec)) fs::remove(*it, ec);
  }
  if (fs::exists(config_.output_dir, ec) && fs::is_empty(config_.output_dir, ec)) fs::remove(config_.output_dir, ec);
}

}  // namespace

RunManifest run_pipeline(const RunConfig& config, const LogFn& log) { return Run(config, log).execute(); }

void save_manifest(const RunManifest& m, const fs::path& path) {
  ordered_json j;
  j["format"] = "thematic.manifest";
  j["version"] = 1;
  j["tool_version"] = m.tool_version;
  j["config_digest"] = m.config_digest;
  j["corpus_digest"] = m.corpus_digest;
  j["seed"] = m.seed;
  auto& hps = j["hyperparams"] = ordered_json::array();
  for (const auto& hp : m.hyperparams) hps.push_back(hyperparams_json(hp));
  auto& timings = j["timings"] = ordered_json::array();
  for (const auto& t : m.timings) timings.push_back({{"stage", t.stage}, {"seconds", t.seconds}});
  auto& outputs = j["outputs"] = ordered_json::array();
  for (const auto& o : m.outputs) outputs.push_back({{"path", o.path}, {"sha256", o.sha256}, {"bytes", o.bytes}});
  j["notes"] = m.notes;
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << j.dump(2) << '\n';
}

RunManifest load_manifest(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path.string() + "'");
  try {
    const auto j = ordered_json::parse(in);
    if (j.at("format") != "thematic.manifest" || j.at("version") != 1) {
      throw DataError("'" + path.string() + "' is not a version 1 manifest");
    }
    RunManifest m;
    m.tool_version = j.at("tool_version").get<std::string>();
    m.config_digest = j.at("config_digest").get<std::string>();
    m.corpus_digest = j.at("corpus_digest").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& h : j.at("hyperparams")) {
      Hyperparams hp;
      hp.topics = h.at("topics").get<int>();
      hp.alpha = h.at("alpha").get<double>();
      hp.beta = h.at("beta").get<double>();
      hp.iterations = h.at("iterations").get<int>();
      hp.burn_in = h.at("burn_in").get<int>();
      hp.seed = h.at("seed").get<std::uint64_t>();
      hp.estimate = parse_estimate_mode(h.at("estimate").get<std::string>());
      hp.workers = h.at("workers").get<int>();
      m.hyperparams.push_back(hp);
    }
    for (const auto& t : j.at("timings")) m.timings.push_back({t.at("stage"), t.at("seconds")});
    for (const auto& o : j.at("outputs")) m.outputs.push_back({o.at("path"), o.at("sha256"), o.at("bytes")});
    m.notes = j.at("notes").get<std::vector<std::string>>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed manifest '" + path.string() + "': " + e.what());
  }
}

}  // namespace thematic
