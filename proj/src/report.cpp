#include "thematic/report.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>

#include "json.hpp"
#include "thematic/error.hpp"
#include "thematic/format.hpp"

namespace thematic {

namespace fs = std::filesystem;

namespace {

std::ofstream open_for_write(const fs::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  return out;
}

void finish(std::ofstream& out, const fs::path& path) {
  out.flush();
  if (!out) throw DataError("error while writing '" + path.string() + "'");
}

std::vector<std::string> split_tabs(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab - start));
    if (tab == std::string::npos) break;
    start = tab + 1;
  }
  return fields;
}

std::size_t parse_index(const std::string& text, const std::string& where) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || pos != text.size() || text.front() == '-') {
    throw DataError(where + ": expected a non-negative integer, got '" + text + "'");
  }
  return static_cast<std::size_t>(v);
}

// Labels must not break the TSV layout.
std::string tsv_safe(std::string s) {
  std::replace_if(s.begin(), s.end(), [](char c) { return c == '\t' || c == '\n' || c == '\r'; }, ' ');
  return s;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string xml_unescape(std::string_view s) {
  static const std::pair<std::string_view, char> kEntities[] = {
      {"&amp;", '&'}, {"&lt;", '<'}, {"&gt;", '>'}, {"&quot;", '"'}, {"&apos;", '\''}};
  std::string out;
  for (std::size_t i = 0; i < s.size();) {
    bool replaced = false;
    if (s[i] == '&') {
      for (const auto& [entity, c] : kEntities) {
        if (s.substr(i, entity.size()) == entity) {
          out += c;
          i += entity.size();
          replaced = true;
          break;
        }
      }
    }
    if (!replaced) out += s[i++];
  }
  return out;
}

std::string node_label(const TopicGraph& g, std::size_t v) {
  return g.labels.empty() || g.labels[v].empty() ? "topic " + std::to_string(v) : g.labels[v];
}

}  // namespace

std::vector<std::string> load_annotations(const fs::path& path, std::size_t topics) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read annotation file '" + path.string() + "'");
  std::vector<std::string> labels(topics);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto where = path.string() + ":" + std::to_string(line_no);
    const auto tab = line.find('\t');
    if (tab == std::string::npos) throw DataError(where + ": expected 'topic_id<TAB>label'");
    const auto id = parse_index(line.substr(0, tab), where);
    if (id >= topics) {
      throw DataError(where + ": topic " + std::to_string(id) + " does not exist (model has " +
                      std::to_string(topics) + " topics)");
    }
    labels[id] = tsv_safe(line.substr(tab + 1));
  }
  return labels;
}

void export_topic_table(const TopicModel& model, std::size_t k, const std::vector<std::string>& labels,
                        const fs::path& path) {
  if (!labels.empty() && labels.size() != model.num_topics()) throw UsageError("need one label per topic");
  const auto ranked = top_words(model, k);
  auto out = open_for_write(path);
  out << "topic_id\tlabel\trank\tterm\tweight\n";
  for (std::size_t t = 0; t < ranked.size(); ++t) {
    const std::string label = labels.empty() ? "" : tsv_safe(labels[t]);
    for (std::size_t r = 0; r < ranked[t].size(); ++r) {
      out << t << '\t' << label << '\t' << (r + 1) << '\t' << tsv_safe(ranked[t][r].term) << '\t'
          << fixed6(ranked[t][r].weight) << '\n';
    }
  }
  finish(out, path);
}

std::vector<TopicTableRow> read_topic_table(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path.string() + "'");
  std::vector<TopicTableRow> rows;
  std::string line;
  std::getline(in, line);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto where = path.string() + ":" + std::to_string(line_no);
    const auto f = split_tabs(line);
    if (f.size() != 5) throw DataError(where + ": expected 5 fields");
    rows.push_back({parse_index(f[0], where), f[1], parse_index(f[2], where), f[3], parse_double(f[4])});
  }
  return rows;
}

void export_histogram(const std::vector<std::size_t>& counts, const std::vector<std::string>& labels,
                      const fs::path& tsv_path, const fs::path& svg_path) {
  if (!labels.empty() && labels.size() != counts.size()) throw UsageError("need one label per topic");
  auto label = [&](std::size_t t) { return labels.empty() ? std::string() : tsv_safe(labels[t]); };
  {
    auto out = open_for_write(tsv_path);
    out << "topic_id\tlabel\tcount\n";
    for (std::size_t t = 0; t < counts.size(); ++t) out << t << '\t' << label(t) << '\t' << counts[t] << '\n';
    finish(out, tsv_path);
  }

  constexpr double kBar = 40.0;
  constexpr double kGap = 10.0;
  constexpr double kPlotHeight = 300.0;
  constexpr double kMargin = 50.0;
  const std::size_t tallest = counts.empty() ? 0 : *std::max_element(counts.begin(), counts.end());
  const double width = 2 * kMargin + static_cast<double>(counts.size()) * (kBar + kGap);
  const double height = kPlotHeight + 2 * kMargin;
  const double base = kMargin + kPlotHeight;
  auto out = open_for_write(svg_path);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed6(width) << "\" height=\"" << fixed6(height)
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
      << "<title>Documents per primary topic</title>\n"
      << "<line x1=\"" << fixed6(kMargin) << "\" y1=\"" << fixed6(base) << "\" x2=\"" << fixed6(width - kMargin)
      << "\" y2=\"" << fixed6(base) << "\" stroke=\"black\"/>\n";
  for (std::size_t t = 0; t < counts.size(); ++t) {
    const double h = tallest == 0 ? 0.0 : kPlotHeight * static_cast<double>(counts[t]) / static_cast<double>(tallest);
    const double x = kMargin + static_cast<double>(t) * (kBar + kGap) + kGap / 2;
    out << "<g><title>" << xml_escape(label(t).empty() ? "topic " + std::to_string(t) : label(t)) << ": "
        << counts[t] << "</title>"
        << "<rect x=\"" << fixed6(x) << "\" y=\"" << fixed6(base - h) << "\" width=\"" << fixed6(kBar)
        << "\" height=\"" << fixed6(h) << "\" fill=\"steelblue\" data-count=\"" << counts[t] << "\"/>"
        << "<text x=\"" << fixed6(x + kBar / 2) << "\" y=\"" << fixed6(base + 15) << "\" text-anchor=\"middle\">"
        << t << "</text>"
        << "<text x=\"" << fixed6(x + kBar / 2) << "\" y=\"" << fixed6(base - h - 4)
        << "\" text-anchor=\"middle\">" << counts[t] << "</text></g>\n";
  }
  out << "</svg>\n";
  finish(out, svg_path);
}

std::vector<std::size_t> read_histogram(const fs::path& tsv_path) {
  std::ifstream in(tsv_path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + tsv_path.string() + "'");
  std::vector<std::size_t> counts;
  std::string line;
  std::getline(in, line);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto where = tsv_path.string() + ":" + std::to_string(line_no);
    const auto f = split_tabs(line);
    if (f.size() != 3 || parse_index(f[0], where) != counts.size()) throw DataError(where + ": malformed row");
    counts.push_back(parse_index(f[2], where));
  }
  return counts;
}

GraphFormat parse_graph_format(const std::string& name) {
  if (name == "gexf") return GraphFormat::gexf;
  if (name == "json") return GraphFormat::json;
  throw UsageError("unknown graph format '" + name + "' (expected gexf or json)");
}

void export_graph(const TopicGraph& graph, const std::optional<Partition>& partition, const fs::path& path,
                  GraphFormat format) {
  if (partition && partition->assignment.size() != graph.num_nodes) {
    throw UsageError("partition does not match the graph");
  }
  auto out = open_for_write(path);
  if (format == GraphFormat::json) {
    nlohmann::ordered_json j;
    j["threshold"] = graph.threshold;
    auto& nodes = j["nodes"] = nlohmann::ordered_json::array();
    for (std::size_t v = 0; v < graph.num_nodes; ++v) {
      nlohmann::ordered_json node{{"id", v}, {"label", node_label(graph, v)}};
      node["community"] = partition ? nlohmann::ordered_json(partition->assignment[v]) : nullptr;
      nodes.push_back(std::move(node));
    }
    auto& edges = j["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : graph.edges) edges.push_back({{"source", e.source}, {"target", e.target}, {"weight", e.weight}});
    out << j.dump(2) << '\n';
    finish(out, path);
    return;
  }

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<gexf xmlns=\"http://www.gexf.net/1.2draft\" version=\"1.2\">\n"
      << "  <meta>\n    <creator>thematic " << THEMATIC_VERSION << "</creator>\n"
      << "    <description>topic similarity graph, threshold " << shortest(graph.threshold) << "</description>\n"
      << "  </meta>\n"
      << "  <graph mode=\"static\" defaultedgetype=\"undirected\">\n";
  if (partition) {
    out << "    <attributes class=\"node\">\n"
        << "      <attribute id=\"community\" title=\"community\" type=\"integer\"/>\n"
        << "    </attributes>\n";
  }
  out << "    <nodes>\n";
  for (std::size_t v = 0; v < graph.num_nodes; ++v) {
    out << "      <node id=\"" << v << "\" label=\"" << xml_escape(node_label(graph, v)) << "\"";
    if (partition) {
      out << ">\n        <attvalues><attvalue for=\"community\" value=\"" << partition->assignment[v]
          << "\"/></attvalues>\n      </node>\n";
    } else {
      out << "/>\n";
    }
  }
  out << "    </nodes>\n    <edges>\n";
  for (std::size_t i = 0; i < graph.edges.size(); ++i) {
    const auto& e = graph.edges[i];
    out << "      <edge id=\"" << i << "\" source=\"" << e.source << "\" target=\"" << e.target << "\" weight=\""
        << shortest(e.weight) << "\"/>\n";
  }
  out << "    </edges>\n  </graph>\n</gexf>\n";
  finish(out, path);
}

namespace {

std::string attribute(const std::string& tag, const std::string& name) {
  const std::regex re("\\s" + name + "=\"([^\"]*)\"");
  std::smatch m;
  if (!std::regex_search(tag, m, re)) return {};
  return xml_unescape(m[1].str());
}

LoadedGraph read_gexf(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path.string() + "'");
  const std::string doc((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (doc.find("<gexf") == std::string::npos) throw DataError("'" + path.string() + "' is not a GEXF file");

  LoadedGraph out;
  const std::regex node_re(R"(<node\s[^>]*?(/>|>[\s\S]*?</node>))");
  const std::regex community_re(R"re(<attvalue\s+for="community"\s+value="(\d+)")re");
  for (auto it = std::sregex_iterator(doc.begin(), doc.end(), node_re); it != std::sregex_iterator(); ++it) {
    const auto tag = it->str();
    const auto id = parse_index(attribute(tag, "id"), path.string());
    if (id != out.graph.num_nodes) throw DataError("GEXF nodes must be numbered 0..n-1 in order");
    ++out.graph.num_nodes;
    out.graph.labels.push_back(attribute(tag, "label"));
    std::smatch m;
    if (std::regex_search(tag, m, community_re)) {
      out.community.emplace_back(parse_index(m[1].str(), path.string()));
    } else {
      out.community.emplace_back(std::nullopt);
    }
  }
  const std::regex edge_re(R"(<edge\s[^>]*>)");
  for (auto it = std::sregex_iterator(doc.begin(), doc.end(), edge_re); it != std::sregex_iterator(); ++it) {
    const auto tag = it->str();
    const auto source = parse_index(attribute(tag, "source"), path.string());
    const auto target = parse_index(attribute(tag, "target"), path.string());
    const auto weight = attribute(tag, "weight");
    out.graph.edges.push_back({std::min(source, target), std::max(source, target),
                               weight.empty() ? 1.0 : parse_double(weight)});
  }
  return out;
}

LoadedGraph read_graph_json(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read '" + path.string() + "'");
  try {
    const auto j = nlohmann::json::parse(in);
    LoadedGraph out;
    out.graph.threshold = j.value("threshold", 0.0);
    for (const auto& node : j.at("nodes")) {
      if (node.at("id").get<std::size_t>() != out.graph.num_nodes) {
        throw DataError("graph nodes must be numbered 0..n-1 in order");
      }
      ++out.graph.num_nodes;
      out.graph.labels.push_back(node.value("label", ""));
      const auto c = node.find("community");
      if (c != node.end() && !c->is_null()) {
        out.community.emplace_back(c->get<std::size_t>());
      } else {
        out.community.emplace_back(std::nullopt);
      }
    }
    for (const auto& e : j.at("edges")) {
      const auto s = e.at("source").get<std::size_t>();
      const auto t = e.at("target").get<std::size_t>();
      if (s >= out.graph.num_nodes || t >= out.graph.num_nodes) throw DataError("edge endpoint out of range");
      out.graph.edges.push_back({std::min(s, t), std::max(s, t), e.at("weight").get<double>()});
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw DataError("malformed graph file '" + path.string() + "': " + e.what());
  }
}

}  // namespace

LoadedGraph read_graph(const fs::path& path, GraphFormat format) {
  auto loaded = format == GraphFormat::gexf ? read_gexf(path) : read_graph_json(path);
  std::sort(loaded.graph.edges.begin(), loaded.graph.edges.end(),
            [](const TopicEdge& a, const TopicEdge& b) { return std::tie(a.source, a.target) < std::tie(b.source, b.target); });
  return loaded;
}

}  // namespace thematic
