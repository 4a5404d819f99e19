#ifndef APPLINK_EXPLORER_HPP
#define APPLINK_EXPLORER_HPP

#include <string>
#include <utility>
#include <vector>
#include <set>

#include "applink/app_model.hpp"

namespace applink {

struct TransitionEdge {
    std::string from;
    std::string to;
    LabelSet labels;          // always label_set(sample_intent)
    IntentRecord sample_intent;

    bool operator==(const TransitionEdge&) const = default;
};

// Directed multigraph of activities rooted at the main activity. Every
// vertex is reachable from the root; parallel edges must differ in labels.
struct NavigationGraph {
    std::string root;
    std::set<std::string> vertices;
    std::vector<TransitionEdge> edges;
};

bool operator==(const NavigationGraph& a, const NavigationGraph& b);

// Exercises the activity's default instance breadth-first across its in-page
// states, spending at most op_budget operations, and returns the observed
// transitions deduplicated by (target, label set).
std::vector<std::pair<std::string, IntentRecord>> get_transitions(const AppSpec& spec,
                                                                  const std::string& activity,
                                                                  int op_budget);

// Depth-bounded frontier exploration: round d exercises the activities first
// discovered at distance d; `depth` is the number of rounds, so depth 0
// yields the main activity alone. Activities already in the graph are not
// re-exercised.
NavigationGraph build_navigation_graph(const AppSpec& spec, int depth, int op_budget);

std::string export_graph(const NavigationGraph& graph);
NavigationGraph import_graph(const std::string& document);

} // namespace applink

#endif // APPLINK_EXPLORER_HPP
