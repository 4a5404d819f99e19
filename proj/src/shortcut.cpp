#include "applink/shortcut.hpp"

#include <algorithm>

#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace applink {

using nlohmann::json;

std::optional<std::string> AbstractPath::endpoint() const {
    if (transitions.empty()) return std::nullopt;
    return transitions.back().to;
}

std::string AbstractPath::canonical_key() const {
    std::string key;
    for (std::size_t i = 0; i < transitions.size(); ++i) {
        if (i > 0) key += '|';
        key += transitions[i].from + ">" + transitions[i].to + "[";
        bool first = true;
        for (const auto& label : transitions[i].labels) {
            if (!first) key += ',';
            key += label;
            first = false;
        }
        key += ']';
    }
    return key;
}

LabelSet path_labels(const AbstractPath& path) {
    LabelSet labels;
    for (const auto& t : path.transitions) labels.insert(t.labels.begin(), t.labels.end());
    return labels;
}

bool can_replace(const AbstractPath& p1, const AbstractPath& p2) {
    // A vertex-simple path never returns to its root, so an empty path (the
    // root itself) only shares an endpoint with another empty path.
    if (p1.transitions.empty() != p2.transitions.empty())
        throw Error(ErrorKind::EndpointMismatch, "paths end at different activities");
    if (!p1.transitions.empty() && p1.transitions.back().to != p2.transitions.back().to)
        throw Error(ErrorKind::EndpointMismatch,
                    "paths end at '" + p1.transitions.back().to + "' and '" +
                        p2.transitions.back().to + "'");
    const auto needed = path_labels(p1);
    const auto available = path_labels(p2);
    return std::includes(available.begin(), available.end(), needed.begin(), needed.end());
}

namespace {

using PathBuckets = std::map<std::string, std::vector<AbstractPath>>;

// Depth-first enumeration of all vertex-simple paths from the root, bucketed
// by endpoint in discovery order. The empty path is recorded for the root.
PathBuckets bucket_simple_paths(const NavigationGraph& graph, int max_len) {
    std::map<std::string, std::vector<const TransitionEdge*>> out_edges;
    for (const auto& edge : graph.edges) out_edges[edge.from].push_back(&edge);

    PathBuckets buckets;
    for (const auto& v : graph.vertices) buckets[v];
    buckets[graph.root].push_back(AbstractPath{});

    std::vector<AbstractTransition> stack;
    std::set<std::string> visited{graph.root};

    auto dfs = [&](auto&& self, const std::string& at) -> void {
        if (static_cast<int>(stack.size()) >= max_len) return;
        auto it = out_edges.find(at);
        if (it == out_edges.end()) return;
        for (const auto* edge : it->second) {
            if (visited.count(edge->to)) continue;
            stack.push_back(AbstractTransition{edge->from, edge->to, edge->labels});
            visited.insert(edge->to);
            buckets[edge->to].push_back(AbstractPath{stack});
            self(self, edge->to);
            visited.erase(edge->to);
            stack.pop_back();
        }
    };
    dfs(dfs, graph.root);
    return buckets;
}

// (length, canonical key) ascending, with the keys computed once.
std::vector<std::size_t> sort_order(const std::vector<AbstractPath>& paths,
                                    const std::vector<std::string>& keys) {
    std::vector<std::size_t> order(paths.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (paths[a].length() != paths[b].length()) return paths[a].length() < paths[b].length();
        return keys[a] < keys[b];
    });
    return order;
}

std::vector<std::string> canonical_keys(const std::vector<AbstractPath>& paths) {
    std::vector<std::string> keys(paths.size());
    for (std::size_t i = 0; i < paths.size(); ++i) keys[i] = paths[i].canonical_key();
    return keys;
}

using VertexEntries = std::vector<std::pair<std::string, AbstractPath>>;  // key -> shortcut

// Algorithm core for one vertex: sort ascending, seed each path with itself,
// take the first earlier path whose labels are contained.
VertexEntries shortcuts_for_vertex(const std::vector<AbstractPath>& paths) {
    const auto keys = canonical_keys(paths);
    const auto order = sort_order(paths, keys);

    std::vector<LabelSet> labels(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) labels[i] = path_labels(paths[order[i]]);

    VertexEntries entries;
    entries.reserve(order.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        const AbstractPath* shortcut = &paths[order[i]];
        for (std::size_t j = 0; j < i; ++j) {
            if (std::includes(labels[i].begin(), labels[i].end(), labels[j].begin(),
                              labels[j].end())) {
                shortcut = &paths[order[j]];
                break;
            }
        }
        entries.emplace_back(keys[order[i]], *shortcut);
    }
    return entries;
}

} // namespace

std::vector<AbstractPath> enumerate_paths(const NavigationGraph& graph, const std::string& v,
                                          int max_len) {
    if (!graph.vertices.count(v))
        throw Error(ErrorKind::UnknownActivity, "'" + v + "' is not a graph vertex");
    auto bucket = bucket_simple_paths(graph, max_len)[v];
    const auto keys = canonical_keys(bucket);
    std::vector<AbstractPath> sorted;
    sorted.reserve(bucket.size());
    for (auto index : sort_order(bucket, keys)) sorted.push_back(std::move(bucket[index]));
    return sorted;
}

ShortcutTable compute_shortcuts_serial(const NavigationGraph& graph, int max_len) {
    auto buckets = bucket_simple_paths(graph, max_len);

    ShortcutTable table;
    for (const auto& [vertex, paths] : buckets)
        for (auto& [key, shortcut] : shortcuts_for_vertex(paths))
            table.entries.emplace(std::make_pair(vertex, key), std::move(shortcut));
    return table;
}

ShortcutTable compute_shortcuts_parallel(const NavigationGraph& graph, int max_len) {
    auto buckets = bucket_simple_paths(graph, max_len);

    std::vector<const std::string*> vertices;
    std::vector<const std::vector<AbstractPath>*> paths;
    vertices.reserve(buckets.size());
    for (const auto& [vertex, bucket] : buckets) {
        vertices.push_back(&vertex);
        paths.push_back(&bucket);
    }

    std::vector<VertexEntries> partial(vertices.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (std::size_t i = 0; i < vertices.size(); ++i)
        partial[i] = shortcuts_for_vertex(*paths[i]);

    // Deterministic merge in vertex order regardless of thread scheduling.
    ShortcutTable table;
    for (std::size_t i = 0; i < vertices.size(); ++i)
        for (auto& [key, shortcut] : partial[i])
            table.entries.emplace(std::make_pair(*vertices[i], key), std::move(shortcut));
    return table;
}

ShortcutTable compute_shortcuts(const NavigationGraph& graph, int max_len) {
#ifdef _OPENMP
    return compute_shortcuts_parallel(graph, max_len);
#else
    return compute_shortcuts_serial(graph, max_len);
#endif
}

AbstractPath lookup_shortcut(const ShortcutTable& table, const AbstractPath& p) {
    auto endpoint = p.endpoint();
    if (!endpoint) return p;  // the root's empty path is its own shortcut
    auto it = table.entries.find(std::make_pair(*endpoint, p.canonical_key()));
    return it == table.entries.end() ? p : it->second;
}

namespace {

json path_to_json(const AbstractPath& path) {
    json transitions = json::array();
    for (const auto& t : path.transitions)
        transitions.push_back({{"from", t.from}, {"to", t.to}, {"labels", t.labels}});
    return transitions;
}

AbstractPath path_from_json(const json& doc) {
    AbstractPath path;
    for (const auto& t : doc.at("transitions")) {
        AbstractTransition out;
        out.from = t.at("from").get<std::string>();
        out.to = t.at("to").get<std::string>();
        for (const auto& label : t.at("labels")) out.labels.insert(label.get<std::string>());
        path.transitions.push_back(std::move(out));
    }
    return path;
}

} // namespace

std::string export_shortcuts(const ShortcutTable& table) {
    json doc = json::object();
    for (const auto& [key, shortcut] : table.entries) {
        doc[key.second] = {{"target", key.first}, {"transitions", path_to_json(shortcut)}};
    }
    return doc.dump(2) + "\n";
}

ShortcutTable import_shortcuts(const std::string& document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::MalformedTable, e.what());
    }

    ShortcutTable table;
    try {
        for (const auto& [key, value] : doc.items()) {
            auto target = value.at("target").get<std::string>();
            table.entries.emplace(std::make_pair(std::move(target), key), path_from_json(value));
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::MalformedTable, e.what());
    }

    for (const auto& [key, shortcut] : table.entries) {
        auto endpoint = shortcut.endpoint();
        if (endpoint && *endpoint != key.first)
            throw Error(ErrorKind::MalformedTable,
                        "shortcut for '" + key.first + "' ends at '" + *endpoint + "'");
    }
    return table;
}

} // namespace applink
