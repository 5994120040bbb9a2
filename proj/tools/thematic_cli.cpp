// thematic: command line front end for the topic analysis pipeline.

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "thematic/community.hpp"
#include "thematic/corpus.hpp"
#include "thematic/error.hpp"
#include "thematic/format.hpp"
#include "thematic/lda.hpp"
#include "thematic/pipeline.hpp"
#include "thematic/preprocess.hpp"
#include "thematic/report.hpp"
#include "thematic/topicnet.hpp"

namespace fs = std::filesystem;
using namespace thematic;

namespace {

struct Globals {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> config_path;
  std::optional<std::string> out_dir;
};

// Values from --config serve as defaults for the single-stage commands.
RunConfig defaults(const Globals& g) {
  RunConfig c;
  if (g.config_path) c = load_run_config(*g.config_path);
  if (g.seed) c.seed = *g.seed;
  return c;
}

fs::path output_path(const Globals& g, const std::optional<std::string>& explicit_path, const char* default_name) {
  if (explicit_path) return *explicit_path;
  const fs::path dir = g.out_dir ? fs::path(*g.out_dir) : fs::path(".");
  fs::create_directories(dir);
  return dir / default_name;
}

std::vector<std::string> labels_for(const std::optional<std::string>& path, const RunConfig& c, std::size_t topics) {
  if (path) return load_annotations(*path, topics);
  const auto it = c.labels.find(static_cast<int>(topics));
  if (it != c.labels.end()) return load_annotations(it->second, topics);
  return {};
}

GraphFormat format_from(const std::optional<std::string>& name, const fs::path& path) {
  if (name) return parse_graph_format(*name);
  return path.extension() == ".json" ? GraphFormat::json : GraphFormat::gexf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Topic modelling, topic networks and community detection for text corpora", "thematic"};
  app.set_version_flag("--version", std::string(THEMATIC_VERSION));
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--seed", g.seed, "RNG seed");
  app.add_option("--config", g.config_path, "run configuration file")->check(CLI::ExistingFile);
  app.add_option("--out", g.out_dir, "output directory");

  // ingest
  auto* ingest_cmd = app.add_subcommand("ingest", "read a corpus, optionally filter to English, write canonical JSONL");
  std::string ingest_input;
  std::string ingest_format = "jsonl";
  bool ingest_filter = false;
  std::optional<double> ingest_ratio;
  std::optional<std::string> ingest_output;
  ingest_cmd->add_option("input", ingest_input, "JSONL file or directory of text files")->required();
  ingest_cmd->add_option("--format", ingest_format, "jsonl or plaintext_dir")->capture_default_str();
  ingest_cmd->add_flag("--filter-english", ingest_filter, "drop documents with a low stopword ratio");
  ingest_cmd->add_option("--ratio", ingest_ratio, "minimum stopword ratio for --filter-english");
  ingest_cmd->add_option("-o,--output", ingest_output, "output JSONL (default <out>/corpus.jsonl)");

  // preprocess
  auto* prep_cmd = app.add_subcommand("preprocess", "normalize, remove stopwords, stem and encode a corpus");
  std::string prep_input;
  std::string prep_format = "jsonl";
  std::optional<int> prep_min_length;
  bool prep_numerals = false;
  std::optional<std::string> prep_output;
  prep_cmd->add_option("input", prep_input, "corpus (JSONL or directory)")->required();
  prep_cmd->add_option("--format", prep_format, "jsonl or plaintext_dir")->capture_default_str();
  prep_cmd->add_option("--min-token-length", prep_min_length, "shortest token kept");
  prep_cmd->add_flag("--keep-numerals", prep_numerals, "keep digit tokens");
  prep_cmd->add_option("-o,--output", prep_output, "encoded corpus (default <out>/encoded_corpus.json)");

  // train
  auto* train_cmd = app.add_subcommand("train", "fit an LDA model by collapsed Gibbs sampling");
  std::string train_corpus;
  std::optional<int> train_topics;
  std::optional<double> train_alpha, train_beta;
  std::optional<int> train_iterations, train_burn_in, train_workers;
  std::optional<std::string> train_estimate, train_output, train_checkpoint, train_resume;
  std::optional<int> train_stop_after;
  int train_report_every = 1;
  bool train_quiet = false;
  train_cmd->add_option("corpus", train_corpus, "encoded corpus file")->required();
  train_cmd->add_option("-k,--topics", train_topics, "number of topics");
  train_cmd->add_option("--alpha", train_alpha, "document-topic prior (default 50/K)");
  train_cmd->add_option("--beta", train_beta, "topic-word prior");
  train_cmd->add_option("--iterations", train_iterations, "total sweeps");
  train_cmd->add_option("--burn-in", train_burn_in, "sweeps before averaging");
  train_cmd->add_option("--workers", train_workers, "parallel workers (>1 is not bitwise reproducible)");
  train_cmd->add_option("--estimate", train_estimate, "average or last");
  train_cmd->add_option("-o,--output", train_output, "model file (default <out>/model.json)");
  train_cmd->add_option("--checkpoint", train_checkpoint, "also write a resumable checkpoint here");
  train_cmd->add_option("--resume", train_resume, "continue from this checkpoint")->check(CLI::ExistingFile);
  train_cmd->add_option("--stop-after", train_stop_after, "run at most this many sweeps, then checkpoint")
      ->check(CLI::PositiveNumber);
  train_cmd->add_option("--report-every", train_report_every, "progress interval in sweeps (0 = silent)")
      ->capture_default_str();
  train_cmd->add_flag("-q,--quiet", train_quiet, "no progress output");

  // topics
  auto* topics_cmd = app.add_subcommand("topics", "export the top words of every topic as TSV");
  std::string topics_model;
  std::optional<std::size_t> topics_k;
  std::optional<std::string> topics_labels, topics_output;
  topics_cmd->add_option("model", topics_model, "model file")->required();
  topics_cmd->add_option("-n,--top", topics_k, "words per topic (default 50, capped at V)");
  topics_cmd->add_option("--labels", topics_labels, "annotation file: topic_id<TAB>label");
  topics_cmd->add_option("-o,--output", topics_output, "TSV (default <out>/topics.tsv)");

  // histogram
  auto* hist_cmd = app.add_subcommand("histogram", "count documents per primary topic");
  std::string hist_model;
  std::optional<std::string> hist_labels, hist_output, hist_svg;
  hist_cmd->add_option("model", hist_model, "model file")->required();
  hist_cmd->add_option("--labels", hist_labels, "annotation file");
  hist_cmd->add_option("-o,--output", hist_output, "TSV (default <out>/histogram.tsv)");
  hist_cmd->add_option("--svg", hist_svg, "bar chart (default: TSV path with .svg)");

  // graph
  auto* graph_cmd = app.add_subcommand("graph", "build the thresholded topic similarity graph");
  std::string graph_model;
  std::optional<std::string> graph_mode, graph_labels, graph_output, graph_format, graph_partition, graph_matrix;
  std::optional<double> graph_threshold;
  graph_cmd->add_option("model", graph_model, "model file")->required();
  graph_cmd->add_option("--mode", graph_mode, "word or document (default: word for K <= 10)");
  graph_cmd->add_option("--threshold", graph_threshold, "minimum cosine similarity kept (default 0.2)");
  graph_cmd->add_option("--labels", graph_labels, "annotation file");
  graph_cmd->add_option("--partition", graph_partition, "partition JSON to attach as node communities");
  graph_cmd->add_option("--similarity", graph_matrix, "also write the similarity matrix TSV here");
  graph_cmd->add_option("--format", graph_format, "gexf or json (default from extension)");
  graph_cmd->add_option("-o,--output", graph_output, "graph file (default <out>/graph.gexf)");

  // communities
  auto* comm_cmd = app.add_subcommand("communities", "Louvain community detection on a topic graph");
  std::string comm_graph;
  std::optional<std::string> comm_format, comm_output, comm_annotated;
  std::optional<double> comm_resolution;
  comm_cmd->add_option("graph", comm_graph, "graph file (GEXF or JSON)")->required();
  comm_cmd->add_option("--format", comm_format, "gexf or json (default from extension)");
  comm_cmd->add_option("--resolution", comm_resolution, "modularity resolution (default 1.0)");
  comm_cmd->add_option("-o,--output", comm_output, "partition JSON (default <out>/partition.json)");
  comm_cmd->add_option("--graph-out", comm_annotated, "rewrite the graph with community attributes here");

  // run
  auto* run_cmd = app.add_subcommand("run", "execute the full pipeline described by --config");
  bool run_quiet = false;
  run_cmd->add_flag("-q,--quiet", run_quiet, "no progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*ingest_cmd) {
      const RunConfig c = defaults(g);
      Corpus corpus = ingest(ingest_input, parse_source_format(ingest_format));
      if (ingest_filter) corpus = filter_english(corpus, ingest_ratio.value_or(c.english_ratio));
      const auto path = output_path(g, ingest_output, "corpus.jsonl");
      write_jsonl(corpus, path);
      const auto s = stats(corpus);
      std::cout << "documents " << s.doc_count << "\ntokens " << s.token_count << "\ndropped " << s.dropped_count
                << "\nwrote " << path.string() << "\n";
    } else if (*prep_cmd) {
      RunConfig c = defaults(g);
      if (prep_min_length) c.preprocess.min_token_length = *prep_min_length;
      if (prep_numerals) c.preprocess.keep_numerals = true;
      if (c.preprocess.min_token_length < 1) throw UsageError("--min-token-length must be >= 1");
      const auto encoded = preprocess_corpus(ingest(prep_input, parse_source_format(prep_format)), c.preprocess);
      const auto path = output_path(g, prep_output, "encoded_corpus.json");
      save_encoded_corpus(encoded, path);
      std::cout << "documents " << encoded.num_docs() << "\nvocabulary " << encoded.vocab_size() << "\ntokens "
                << encoded.total_tokens << "\ndropped " << encoded.dropped_count << "\nwrote " << path.string()
                << "\n";
    } else if (*train_cmd) {
      const RunConfig c = defaults(g);
      const auto corpus = load_encoded_corpus(train_corpus);
      std::optional<Trainer> trainer;
      if (train_resume) {
        if (train_topics || train_alpha || train_beta || train_burn_in || train_estimate) {
          throw UsageError("--resume takes its hyperparameters from the checkpoint");
        }
        auto checkpoint = load_checkpoint(*train_resume);
        if (train_iterations) checkpoint.hyperparams.iterations = *train_iterations;
        if (g.seed && *g.seed != checkpoint.hyperparams.seed) {
          throw UsageError("--seed differs from the checkpoint's seed");
        }
        trainer.emplace(corpus, std::move(checkpoint));
      } else {
        if (!train_topics && c.topic_counts.size() != 1) throw UsageError("--topics is required");
        Hyperparams hp = c.hyperparams(train_topics.value_or(c.topic_counts.front()));
        if (train_alpha) hp.alpha = *train_alpha;
        if (train_beta) hp.beta = *train_beta;
        if (train_iterations) hp.iterations = *train_iterations;
        if (train_burn_in) hp.burn_in = *train_burn_in;
        if (train_workers) hp.workers = *train_workers;
        if (train_estimate) hp.estimate = parse_estimate_mode(*train_estimate);
        validate(hp);
        trainer.emplace(corpus, hp);
      }
      const int total = trainer->hyperparams().iterations;
      trainer->run(train_stop_after, [&](const SweepReport& r) {
        std::cerr << "sweep " << r.sweep << "/" << total << " loglik/token " << fixed6(r.log_likelihood) << "\n";
      }, train_quiet ? 0 : train_report_every);
      if (train_checkpoint || !trainer->done()) {
        const auto path = output_path(g, train_checkpoint, "checkpoint.json");
        save_checkpoint(trainer->checkpoint(), path);
        std::cout << "checkpoint " << path.string() << " at sweep " << trainer->state().sweep_count << "\n";
      }
      if (trainer->done()) {
        const auto model = trainer->model();
        const auto path = output_path(g, train_output, "model.json");
        save_model(model, path);
        std::cout << "loglik/token " << fixed6(log_likelihood(model, corpus)) << "\nwrote " << path.string() << "\n";
      }
    } else if (*topics_cmd) {
      const RunConfig c = defaults(g);
      const auto model = load_model(topics_model);
      const auto k = std::min(topics_k.value_or(c.top_words), model.vocab_size());
      const auto path = output_path(g, topics_output, "topics.tsv");
      export_topic_table(model, k, labels_for(topics_labels, c, model.num_topics()), path);
      std::cout << "wrote " << path.string() << "\n";
    } else if (*hist_cmd) {
      const RunConfig c = defaults(g);
      const auto model = load_model(hist_model);
      const auto tsv = output_path(g, hist_output, "histogram.tsv");
      const fs::path svg = hist_svg ? fs::path(*hist_svg) : fs::path(tsv).replace_extension(".svg");
      const auto counts = primary_topic_counts(model);
      export_histogram(counts, labels_for(hist_labels, c, model.num_topics()), tsv, svg);
      for (std::size_t t = 0; t < counts.size(); ++t) std::cout << t << '\t' << counts[t] << '\n';
      std::cout << "wrote " << tsv.string() << " and " << svg.string() << "\n";
    } else if (*graph_cmd) {
      const RunConfig c = defaults(g);
      const auto model = load_model(graph_model);
      const auto mode = graph_mode ? parse_similarity_mode(*graph_mode)
                                   : c.similarity.value_or(default_similarity_mode(model.num_topics()));
      const auto sim = topic_similarity(model, mode);
      if (graph_matrix) write_similarity_tsv(sim, *graph_matrix);
      const auto graph = build_graph(sim, graph_threshold.value_or(c.threshold),
                                     labels_for(graph_labels, c, model.num_topics()));
      std::optional<Partition> partition;
      if (graph_partition) partition = load_partition(*graph_partition, graph.num_nodes);
      const auto path = output_path(g, graph_output, "graph.gexf");
      export_graph(graph, partition, path, format_from(graph_format, path));
      std::cout << "mode " << to_string(mode) << "\nnodes " << graph.num_nodes << "\nedges " << graph.edges.size()
                << "\nwrote " << path.string() << "\n";
    } else if (*comm_cmd) {
      const RunConfig c = defaults(g);
      const auto format = format_from(comm_format, comm_graph);
      const auto loaded = read_graph(comm_graph, format);
      const double resolution = comm_resolution.value_or(c.resolution);
      if (!(resolution > 0.0)) throw UsageError("--resolution must be > 0");
      const auto partition = louvain(loaded.graph, {resolution}, c.seed);
      const auto path = output_path(g, comm_output, "partition.json");
      save_partition(partition, path);
      if (comm_annotated) export_graph(loaded.graph, partition, *comm_annotated, format_from(std::nullopt, *comm_annotated));
      std::cout << "communities " << partition.num_communities() << "\nmodularity " << shortest(partition.modularity)
                << "\nwrote " << path.string() << "\n";
    } else if (*run_cmd) {
      if (!g.config_path) throw UsageError("run requires --config");
      RunConfig c = load_run_config(*g.config_path);
      if (g.seed) c.seed = *g.seed;
      if (g.out_dir) c.output_dir = *g.out_dir;
      const auto manifest = run_pipeline(c, [&](const std::string& line) {
        if (!run_quiet) std::cerr << line << "\n";
      });
      for (const auto& note : manifest.notes) std::cout << "note: " << note << "\n";
      std::cout << "wrote " << manifest.outputs.size() << " files and manifest.json to " << c.output_dir.string()
                << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "thematic: " << e.what() << "\n";
    return e.exit_code();
  } catch (const fs::filesystem_error& e) {
    std::cerr << "thematic: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::data);
  } catch (const std::exception& e) {
    std::cerr << "thematic: internal error: " << e.what() << "\n";
    return static_cast<int>(ErrorKind::invariant);
  }
  return 0;
}
