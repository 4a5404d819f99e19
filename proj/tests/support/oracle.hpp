#ifndef APPLINK_TESTS_ORACLE_HPP
#define APPLINK_TESTS_ORACLE_HPP

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "applink/shortcut.hpp"

// Brute-force reference for shortcut computation, written independently of
// the library's enumeration and kernel: recursive path listing over an
// adjacency map, then a full scan for the minimum-length replacing path.

namespace applink::testing {

namespace oracle_detail {

inline void list_paths(const std::map<std::string, std::vector<const TransitionEdge*>>& adjacency,
                       const std::string& at, int remaining,
                       std::vector<const TransitionEdge*>& stack,
                       std::vector<std::string>& on_path,
                       std::map<std::string, std::vector<AbstractPath>>& out) {
    if (remaining == 0) return;
    auto it = adjacency.find(at);
    if (it == adjacency.end()) return;
    for (const auto* edge : it->second) {
        if (std::find(on_path.begin(), on_path.end(), edge->to) != on_path.end()) continue;
        stack.push_back(edge);
        on_path.push_back(edge->to);

        AbstractPath path;
        for (const auto* e : stack)
            path.transitions.push_back(AbstractTransition{e->from, e->to, e->labels});
        out[edge->to].push_back(path);

        list_paths(adjacency, edge->to, remaining - 1, stack, on_path, out);
        on_path.pop_back();
        stack.pop_back();
    }
}

inline bool subset(const LabelSet& small, const LabelSet& large) {
    for (const auto& label : small)
        if (!large.count(label)) return false;
    return true;
}

} // namespace oracle_detail

// All simple paths from the root, grouped by endpoint, in no particular order.
inline std::map<std::string, std::vector<AbstractPath>> oracle_paths(const NavigationGraph& graph,
                                                                     int max_len) {
    std::map<std::string, std::vector<const TransitionEdge*>> adjacency;
    for (const auto& edge : graph.edges) adjacency[edge.from].push_back(&edge);

    std::map<std::string, std::vector<AbstractPath>> out;
    for (const auto& v : graph.vertices) out[v];
    out[graph.root].push_back(AbstractPath{});

    std::vector<const TransitionEdge*> stack;
    std::vector<std::string> on_path{graph.root};
    oracle_detail::list_paths(adjacency, graph.root, max_len, stack, on_path, out);
    return out;
}

// For every enumerated path: the minimum-length path to the same endpoint
// whose labels are contained in it, ties broken by canonical key.
inline ShortcutTable oracle_shortcuts(const NavigationGraph& graph, int max_len) {
    auto buckets = oracle_paths(graph, max_len);

    ShortcutTable table;
    for (const auto& [vertex, paths] : buckets) {
        for (const auto& path : paths) {
            const auto path_set = path_labels(path);
            const AbstractPath* best = &path;
            for (const auto& candidate : paths) {
                if (!oracle_detail::subset(path_labels(candidate), path_set)) continue;
                if (candidate.length() < best->length() ||
                    (candidate.length() == best->length() &&
                     candidate.canonical_key() < best->canonical_key()))
                    best = &candidate;
            }
            table.entries.emplace(std::make_pair(vertex, path.canonical_key()), *best);
        }
    }
    return table;
}

} // namespace applink::testing

#endif
