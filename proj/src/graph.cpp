#include "lscr/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "lscr/errors.hpp"

namespace lscr {

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string format_label_set(LabelSet l, std::span<const std::string> label_names) {
    std::vector<std::string> names;
    for (LabelId id : l.labels())
        names.push_back(id < label_names.size() ? label_names[id] : "#" + std::to_string(id));
    std::sort(names.begin(), names.end());
    std::string out = "{";
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i) out += ',';
        out += names[i];
    }
    out += '}';
    return out;
}

std::vector<LabelSet> LabelSetFamily::sorted_sets() const {
    std::vector<LabelSet> out = sets_;
    std::sort(out.begin(), out.end());
    return out;
}

bool SchemaInfo::is_class(VertexId v) const {
    return std::binary_search(classes.begin(), classes.end(), v);
}

std::size_t KnowledgeGraph::Builder::EdgeKeyHash::operator()(const Edge& e) const {
    std::uint64_t k = (std::uint64_t(e.source) << 32) | e.target;
    k ^= std::uint64_t(e.label) * 0x9e3779b97f4a7c15ull;
    k ^= k >> 33;
    k *= 0xff51afd7ed558ccdull;
    k ^= k >> 33;
    return static_cast<std::size_t>(k);
}

VertexId KnowledgeGraph::Builder::intern_vertex(std::string_view name) {
    auto it = vertex_ids_.find(std::string(name));
    if (it != vertex_ids_.end()) return it->second;
    VertexId id = static_cast<VertexId>(vertex_names_.size());
    vertex_names_.emplace_back(name);
    vertex_ids_.emplace(vertex_names_.back(), id);
    return id;
}

LabelId KnowledgeGraph::Builder::intern_label(std::string_view name) {
    auto it = label_ids_.find(std::string(name));
    if (it != label_ids_.end()) return it->second;
    if (label_names_.size() >= LabelSet::kMaxLabels)
        throw TooManyLabels(label_names_.size() + 1);
    LabelId id = static_cast<LabelId>(label_names_.size());
    label_names_.emplace_back(name);
    label_ids_.emplace(label_names_.back(), id);
    return id;
}

void KnowledgeGraph::Builder::add_triple(std::string_view subject, std::string_view predicate,
                                         std::string_view object) {
    VertexId s = intern_vertex(subject);
    LabelId l = intern_label(predicate);
    VertexId t = intern_vertex(object);
    Edge e{s, l, t};
    if (!seen_.emplace(e, true).second) return; // exact duplicate
    edges_.push_back(e);
}

KnowledgeGraph KnowledgeGraph::Builder::finish() {
    if (edges_.empty()) throw EmptyGraph();

    KnowledgeGraph g;
    g.vertex_names_ = std::move(vertex_names_);
    g.label_names_ = std::move(label_names_);
    g.vertex_ids_ = std::move(vertex_ids_);
    g.label_ids_ = std::move(label_ids_);
    g.edges_ = std::move(edges_);

    g.out_adjacency_.resize(g.vertex_names_.size());
    g.in_adjacency_.resize(g.vertex_names_.size());
    for (const Edge& e : g.edges_) {
        g.out_adjacency_[e.source].push_back({e.label, e.target});
        g.in_adjacency_[e.target].push_back({e.label, e.source});
    }

    // Schema extraction: schema triples stay ordinary edges as well.
    auto type_id = g.label_ids_.find(options_.type_predicate);
    auto sub_id = g.label_ids_.find(options_.subclass_predicate);
    std::vector<VertexId> classes;
    for (const Edge& e : g.edges_) {
        if (type_id != g.label_ids_.end() && e.label == type_id->second) {
            g.schema_.instance_of[e.source].push_back(e.target);
            classes.push_back(e.target);
        }
        if (sub_id != g.label_ids_.end() && e.label == sub_id->second) {
            g.schema_.subclass_of[e.source].push_back(e.target);
            classes.push_back(e.source);
            classes.push_back(e.target);
        }
    }
    std::sort(classes.begin(), classes.end());
    classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
    g.schema_.classes = std::move(classes);
    for (auto& [v, cs] : g.schema_.instance_of) {
        std::sort(cs.begin(), cs.end());
        cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    }
    for (auto& [v, cs] : g.schema_.subclass_of) {
        std::sort(cs.begin(), cs.end());
        cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
    }

    g.fingerprint_ = fnv1a64(g.serialize_triples());
    return g;
}

KnowledgeGraph KnowledgeGraph::from_stream(std::istream& in, IngestOptions options) {
    Builder b(std::move(options));
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty() && line.front() == '#') continue;
        std::size_t tab1 = line.find('\t');
        std::size_t tab2 = tab1 == std::string::npos ? std::string::npos : line.find('\t', tab1 + 1);
        if (tab1 == std::string::npos || tab2 == std::string::npos ||
            line.find('\t', tab2 + 1) != std::string::npos)
            throw MalformedLine(line_number);
        std::string_view sv(line);
        std::string_view subject = sv.substr(0, tab1);
        std::string_view predicate = sv.substr(tab1 + 1, tab2 - tab1 - 1);
        std::string_view object = sv.substr(tab2 + 1);
        if (subject.empty() || predicate.empty() || object.empty())
            throw MalformedLine(line_number);
        b.add_triple(subject, predicate, object);
    }
    return b.finish();
}

KnowledgeGraph KnowledgeGraph::from_string(std::string_view text, IngestOptions options) {
    std::istringstream in{std::string(text)};
    return from_stream(in, std::move(options));
}

KnowledgeGraph KnowledgeGraph::load(const std::filesystem::path& path, IngestOptions options) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open graph file: " + path.string());
    return from_stream(in, std::move(options));
}

std::vector<Arc> KnowledgeGraph::out_edges(VertexId v, LabelSet mask) const {
    std::vector<Arc> out;
    for (const Arc& a : out_adjacency_[v])
        if (mask.contains(a.label)) out.push_back(a);
    return out;
}

bool KnowledgeGraph::has_edge(VertexId s, LabelId l, VertexId t) const {
    for (const Arc& a : out_adjacency_[s])
        if (a.label == l && a.other == t) return true;
    return false;
}

std::optional<VertexId> KnowledgeGraph::vertex_id(std::string_view name) const {
    auto it = vertex_ids_.find(std::string(name));
    if (it == vertex_ids_.end()) return std::nullopt;
    return it->second;
}

std::optional<LabelId> KnowledgeGraph::label_id(std::string_view name) const {
    auto it = label_ids_.find(std::string(name));
    if (it == label_ids_.end()) return std::nullopt;
    return it->second;
}

std::vector<VertexId> KnowledgeGraph::instances_of_class(VertexId c) const {
    if (!schema_.is_class(c))
        throw UnknownClass("vertex " + (c < vertex_count() ? vertex_name(c) : std::to_string(c)) +
                           " is not a known class");
    std::vector<VertexId> out;
    for (const auto& [v, cs] : schema_.instance_of)
        if (std::binary_search(cs.begin(), cs.end(), c)) out.push_back(v);
    std::sort(out.begin(), out.end());
    return out;
}

std::string KnowledgeGraph::serialize_triples() const {
    std::string out;
    out.reserve(edges_.size() * 24);
    for (const Edge& e : edges_) {
        out += vertex_names_[e.source];
        out += '\t';
        out += label_names_[e.label];
        out += '\t';
        out += vertex_names_[e.target];
        out += '\n';
    }
    return out;
}

void KnowledgeGraph::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write graph file: " + path.string());
    out << serialize_triples();
}

} // namespace lscr
