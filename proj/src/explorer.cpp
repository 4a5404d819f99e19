#include "applink/explorer.hpp"

#include <algorithm>
#include <deque>

#include "applink/codec.hpp"
#include "applink/crawler.hpp"

namespace applink {

using nlohmann::json;

namespace {

std::string edge_sort_key(const TransitionEdge& e) {
    std::string key = e.from + ">" + e.to + "[";
    for (const auto& label : e.labels) key += label + ",";
    return key + "]" + canonical_intent_record(e.sample_intent);
}

std::vector<TransitionEdge> sorted_edges(const NavigationGraph& g) {
    auto edges = g.edges;
    std::sort(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
        return edge_sort_key(a) < edge_sort_key(b);
    });
    return edges;
}

} // namespace

bool operator==(const NavigationGraph& a, const NavigationGraph& b) {
    return a.root == b.root && a.vertices == b.vertices && sorted_edges(a) == sorted_edges(b);
}

std::vector<std::pair<std::string, IntentRecord>> get_transitions(const AppSpec& spec,
                                                                  const std::string& activity,
                                                                  int op_budget) {
    // Jump intent that parks a fresh session on the activity's default
    // instance; recovery is replay from launch.
    IntentRecord entry;
    entry.component = ComponentRef{spec.package_name, activity};

    auto fresh = [&] {
        auto session = launch(spec);
        session.send_intent(entry);
        return session;
    };

    std::vector<std::pair<std::string, IntentRecord>> transitions;
    std::set<std::pair<std::string, LabelSet>> seen;

    // Breadth-first over the page's in-page states, identified by content.
    std::deque<StateKey> queue;
    std::map<StateKey, std::vector<UserOperation>> prefixes;

    {
        auto session = fresh();
        auto key = state_key(session.content());
        prefixes.emplace(key, std::vector<UserOperation>{});
        queue.push_back(key);
    }

    int spent = 0;
    while (!queue.empty() && spent < op_budget) {
        auto key = queue.front();
        queue.pop_front();
        const auto prefix = prefixes.at(key);

        std::vector<UserOperation> ops;
        {
            auto session = fresh();
            for (const auto& op : prefix) session.perform(op);
            ops = session.operations();
        }

        for (const auto& op : ops) {
            if (spent >= op_budget) break;
            auto session = fresh();
            for (const auto& p : prefix) session.perform(p);
            auto event = session.perform(op);
            ++spent;

            if (event.type == ObservedEvent::Type::Transitioned) {
                auto dedupe = std::make_pair(event.to_activity, label_set(event.intent));
                if (seen.insert(dedupe).second)
                    transitions.emplace_back(event.to_activity, event.intent);
            } else if (event.type == ObservedEvent::Type::ContentChanged) {
                auto next = state_key(event.content);
                if (!prefixes.count(next)) {
                    auto next_prefix = prefix;
                    next_prefix.push_back(op);
                    prefixes.emplace(next, std::move(next_prefix));
                    queue.push_back(next);
                }
            }
        }
    }
    return transitions;
}

NavigationGraph build_navigation_graph(const AppSpec& spec, int depth, int op_budget) {
    NavigationGraph graph;
    graph.root = spec.main_activity;
    graph.vertices.insert(graph.root);

    std::vector<std::string> frontier{graph.root};
    for (int d = 0; d < depth && !frontier.empty(); ++d) {
        std::vector<std::string> next;
        for (const auto& origin : frontier) {
            for (const auto& [target, intent] : get_transitions(spec, origin, op_budget)) {
                if (!graph.vertices.count(target)) {
                    graph.vertices.insert(target);
                    next.push_back(target);
                }
                graph.edges.push_back(TransitionEdge{origin, target, label_set(intent), intent});
            }
        }
        frontier = std::move(next);
    }
    return graph;
}

std::string export_graph(const NavigationGraph& graph) {
    json doc;
    doc["root"] = graph.root;
    doc["vertices"] = graph.vertices;
    json edges = json::array();
    for (const auto& edge : graph.edges) {
        edges.push_back({{"from", edge.from},
                         {"to", edge.to},
                         {"labels", edge.labels},
                         {"intent", intent_to_json(edge.sample_intent)}});
    }
    doc["edges"] = std::move(edges);
    return doc.dump(2) + "\n";
}

NavigationGraph import_graph(const std::string& document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::MalformedGraph, e.what());
    }

    NavigationGraph graph;
    try {
        graph.root = doc.at("root").get<std::string>();
        for (const auto& v : doc.at("vertices")) graph.vertices.insert(v.get<std::string>());
        for (const auto& e : doc.at("edges")) {
            TransitionEdge edge;
            edge.from = e.at("from").get<std::string>();
            edge.to = e.at("to").get<std::string>();
            for (const auto& label : e.at("labels")) edge.labels.insert(label.get<std::string>());
            edge.sample_intent = intent_from_json(e.at("intent"));
            graph.edges.push_back(std::move(edge));
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::MalformedGraph, e.what());
    }

    if (!graph.vertices.count(graph.root))
        throw Error(ErrorKind::MalformedGraph, "root '" + graph.root + "' is not a vertex");
    for (const auto& edge : graph.edges) {
        if (!graph.vertices.count(edge.from) || !graph.vertices.count(edge.to))
            throw Error(ErrorKind::MalformedGraph,
                        "edge " + edge.from + " -> " + edge.to + " references an unknown vertex");
        if (edge.labels != label_set(edge.sample_intent))
            throw Error(ErrorKind::MalformedGraph,
                        "edge " + edge.from + " -> " + edge.to + " labels do not match its intent");
    }

    // every vertex must be reachable from the root
    std::set<std::string> reached{graph.root};
    std::deque<std::string> queue{graph.root};
    while (!queue.empty()) {
        auto v = queue.front();
        queue.pop_front();
        for (const auto& edge : graph.edges)
            if (edge.from == v && reached.insert(edge.to).second) queue.push_back(edge.to);
    }
    if (reached != graph.vertices)
        throw Error(ErrorKind::MalformedGraph, "graph has vertices unreachable from the root");

    return graph;
}

} // namespace applink
