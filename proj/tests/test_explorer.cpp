#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "applink/explorer.hpp"
#include "support/fixtures.hpp"

using namespace applink;
using applink::testing::load_fixture;

namespace {

// Independent reachability oracle: transitive closure over the transition
// targets declared in default instances, read straight off the spec.
std::set<std::string> declared_reachable(const AppSpec& spec) {
    std::set<std::string> reached{spec.main_activity};
    bool grew = true;
    while (grew) {
        grew = false;
        for (const auto& activity : spec.activities) {
            if (!reached.count(activity.class_name)) continue;
            for (const auto& state : activity.default_instance().states)
                for (const auto& op : state.operations)
                    if (op.effect.type == Effect::Type::Transition &&
                        reached.insert(op.effect.intent.activity).second)
                        grew = true;
        }
    }
    return reached;
}

std::multiset<std::string> edge_keys(const NavigationGraph& g) {
    std::multiset<std::string> keys;
    for (const auto& e : g.edges) {
        std::string key = e.from + ">" + e.to + "[";
        for (const auto& l : e.labels) key += l + ";";
        keys.insert(key + "]");
    }
    return keys;
}

bool subset(const std::multiset<std::string>& small, const std::multiset<std::string>& large) {
    return std::includes(large.begin(), large.end(), small.begin(), small.end());
}

} // namespace

TEST_CASE("build: chain depth semantics") {
    auto spec = load_fixture("linear3.json");

    auto g0 = build_navigation_graph(spec, 0, 64);
    CHECK(g0.vertices == std::set<std::string>{"com.linear.app.PageAActivity"});
    CHECK(g0.edges.empty());

    auto g1 = build_navigation_graph(spec, 1, 64);
    CHECK(g1.vertices ==
          std::set<std::string>{"com.linear.app.PageAActivity", "com.linear.app.PageBActivity"});
    CHECK(g1.edges.size() == 1);

    auto g2 = build_navigation_graph(spec, 2, 64);
    CHECK(g2.vertices.size() == 3);
    CHECK(g2.edges.size() == 2);
    CHECK(g2.root == "com.linear.app.PageAActivity");
}

TEST_CASE("get_transitions: single declared link") {
    auto spec = load_fixture("linear3.json");
    auto transitions = get_transitions(spec, "com.linear.app.PageAActivity", 64);
    REQUIRE(transitions.size() == 1);
    CHECK(transitions[0].first == "com.linear.app.PageBActivity");
    CHECK(std::get<std::string>(transitions[0].second.extras.at("step")) == "b");
}

TEST_CASE("get_transitions: link behind a second tab needs budget for both operations") {
    auto spec = load_fixture("tabs.json");
    CHECK(get_transitions(spec, "com.tabs.app.TabsActivity", 1).empty());
    auto transitions = get_transitions(spec, "com.tabs.app.TabsActivity", 2);
    REQUIRE(transitions.size() == 1);
    CHECK(transitions[0].first == "com.tabs.app.ItemActivity");
}

TEST_CASE("get_transitions: no outgoing transitions, and stability") {
    auto spec = load_fixture("tabs.json");
    CHECK(get_transitions(spec, "com.tabs.app.StaticActivity", 64).empty());
    // cyclic in-page machine terminates under the budget
    CHECK(get_transitions(spec, "com.tabs.app.ToggleActivity", 64).empty());
    auto a = get_transitions(spec, "com.tabs.app.HomeActivity", 64);
    auto b = get_transitions(spec, "com.tabs.app.HomeActivity", 64);
    CHECK(a == b);
    CHECK(a.size() == 3);
}

TEST_CASE("get_transitions: dedupe by target and label set") {
    auto spec = load_fixture("reddit.json");
    auto transitions =
        get_transitions(spec, "com.reddit.frontpage.FrontpageListingActivity", 64);
    // two Detail posts share (target, {extra:arg.link}); the first sample wins
    int detail_entries = 0;
    for (const auto& [target, intent] : transitions)
        if (target == "com.reddit.frontpage.DetailActivity") ++detail_entries;
    CHECK(detail_entries == 1);
    CHECK(transitions.size() == 6);
}

TEST_CASE("build: reddit converges to 12 activities at depth 4") {
    auto spec = load_fixture("reddit.json");
    auto g4 = build_navigation_graph(spec, 4, 64);
    CHECK(g4.vertices.size() == 12);
    auto g5 = build_navigation_graph(spec, 5, 64);
    CHECK(g5.vertices == g4.vertices);
    CHECK(edge_keys(g5) == edge_keys(g4));
}

TEST_CASE("property: vertex and edge sets grow monotonically with depth") {
    for (const auto* fixture : {"reddit.json", "cityguide.json", "shopmart.json"}) {
        auto spec = load_fixture(fixture);
        NavigationGraph prev;
        for (int depth = 0; depth <= 6; ++depth) {
            auto g = build_navigation_graph(spec, depth, 64);
            if (depth > 0) {
                CHECK(std::includes(g.vertices.begin(), g.vertices.end(), prev.vertices.begin(),
                                    prev.vertices.end()));
                CHECK(subset(edge_keys(prev), edge_keys(g)));
            }
            prev = std::move(g);
        }
    }
}

TEST_CASE("property: converged graph covers exactly the declared reachable set") {
    for (const auto* fixture :
         {"reddit.json", "wallstreet.json", "shopmart.json", "quickbid.json", "newsdaily.json",
          "cityguide.json", "tabs.json", "linear3.json", "minimal.json"}) {
        auto spec = load_fixture(fixture);
        auto graph = build_navigation_graph(spec, 8, 64);
        CHECK(graph.vertices == declared_reachable(spec));
    }
}

TEST_CASE("property: every edge's sample intent replays to its target") {
    auto spec = load_fixture("reddit.json");
    auto graph = build_navigation_graph(spec, 6, 64);
    for (const auto& edge : graph.edges) {
        auto session = launch(spec);
        IntentRecord entry;
        entry.component = ComponentRef{spec.package_name, edge.from};
        session.send_intent(entry);
        auto event = session.send_intent(edge.sample_intent);
        CHECK(event.type == ObservedEvent::Type::Transitioned);
        CHECK(event.to_activity == edge.to);
        CHECK(edge.labels == label_set(edge.sample_intent));
    }
}

TEST_CASE("export/import: lossless round trip") {
    auto spec = load_fixture("reddit.json");
    auto graph = build_navigation_graph(spec, 6, 64);
    CHECK(import_graph(export_graph(graph)) == graph);

    NavigationGraph lonely;
    lonely.root = "A";
    lonely.vertices.insert("A");
    CHECK(import_graph(export_graph(lonely)) == lonely);
}

TEST_CASE("import: malformed documents") {
    try {
        import_graph("{broken");
        FAIL("expected MalformedGraph");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MalformedGraph);
    }

    // edge referencing an unknown vertex
    std::string unknown_vertex = R"({
      "root": "A", "vertices": ["A"],
      "edges": [{"from": "A", "to": "B", "labels": [],
                 "intent": {"component": {"package": "p", "class": "B"}}}]})";
    try {
        import_graph(unknown_vertex);
        FAIL("expected MalformedGraph");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MalformedGraph);
    }

    // labels that disagree with the sample intent
    std::string bad_labels = R"({
      "root": "A", "vertices": ["A", "B"],
      "edges": [{"from": "A", "to": "B", "labels": ["extra:nope"],
                 "intent": {"component": {"package": "p", "class": "B"}}}]})";
    try {
        import_graph(bad_labels);
        FAIL("expected MalformedGraph");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MalformedGraph);
    }

    // vertex unreachable from the root
    std::string unreachable = R"({"root": "A", "vertices": ["A", "B"], "edges": []})";
    try {
        import_graph(unreachable);
        FAIL("expected MalformedGraph");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::MalformedGraph);
    }
}
