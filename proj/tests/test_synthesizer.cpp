#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <set>

#include "applink/crawler.hpp"
#include "applink/repository.hpp"
#include "applink/synthesizer.hpp"
#include "support/fixtures.hpp"
#include "support/reddit_table.hpp"

using namespace applink;
using applink::testing::load_fixture;

namespace {

namespace fs = std::filesystem;

IntentRecord intent(const std::string& pkg, const std::string& cls,
                    std::map<std::string, ExtraValue> extras = {}) {
    IntentRecord out;
    out.component = ComponentRef{pkg, cls};
    out.extras = std::move(extras);
    return out;
}

} // namespace

TEST_CASE("serialize_path: canonical, value-sensitive, map-order-insensitive") {
    ConcretePath a{{intent("p", "Main"), intent("p", "A", {{"x", std::string("1")}, {"y", std::string("2")}})}};
    ConcretePath b{{intent("p", "Main"), intent("p", "A", {{"y", std::string("2")}, {"x", std::string("1")}})}};
    CHECK(serialize_path(a) == serialize_path(b));

    ConcretePath c{{intent("p", "Main"), intent("p", "A", {{"x", std::string("1")}, {"y", std::string("3")}})}};
    CHECK(serialize_path(a) != serialize_path(c));

    CHECK_THROWS_AS(serialize_path(ConcretePath{}), Error);
}

TEST_CASE("serialize_path: separator characters cannot forge a record") {
    ConcretePath tricky1{{intent("p", "A", {{"k", std::string("v|w")}})}};
    ConcretePath tricky2{{intent("p", "A", {{"k|w", std::string("v")}})}};
    CHECK(serialize_path(tricky1) != serialize_path(tricky2));
    ConcretePath newline{{intent("p", "A", {{"k", std::string("v\nB|||")}})}};
    CHECK(serialize_path(newline).find("\\\n") != std::string::npos);
}

TEST_CASE("hash_path: the fixed 64-bit function") {
    // FNV-1a reference vectors
    CHECK(hash_path("") == 14695981039346656037ULL);
    CHECK(hash_path("a") == 12638187200555641996ULL);
    CHECK(hash_path("hello") == hash_path("hello"));
    CHECK(std::to_string(hash_path("anything")).size() <= 20);
    // the published example's magnitude fits the same width
    CHECK(5515207922751745125ULL <= UINT64_MAX);
}

TEST_CASE("hash_path: no collisions across ten thousand distinct paths") {
    std::set<std::uint64_t> hashes;
    std::set<std::string> bytes;
    for (int i = 0; i < 10000; ++i) {
        ConcretePath path{{intent("com.corpus.app", "com.corpus.app.Main"),
                           intent("com.corpus.app", "com.corpus.app.Item",
                                  {{"id", std::string("item-") + std::to_string(i)}})}};
        auto serialized = serialize_path(path);
        bytes.insert(serialized);
        hashes.insert(hash_path(serialized));
    }
    CHECK(bytes.size() == 10000);
    CHECK(hashes.size() == 10000);
}

TEST_CASE("make_app_url: dot-segment reversal and rendering") {
    auto pets = make_app_url("com.example.pets", "com.example.pets.ItemActivity", 42);
    CHECK(pets.rendered() == "http://pets.example.com/com.example.pets.ItemActivity?42");

    auto reddit = make_app_url("com.reddit.frontpage", "com.reddit.frontpage.DetailActivity",
                               5515207922751745125ULL);
    CHECK(reddit.host == "frontpage.reddit.com");
    CHECK(reddit.rendered() ==
          "http://frontpage.reddit.com/com.reddit.frontpage.DetailActivity?5515207922751745125");

    CHECK(make_app_url("app", "app.Main", 1).host == "app");
}

TEST_CASE("parse_app_url: grammar round trip and rejects") {
    auto url = make_app_url("com.example.pets", "com.example.pets.ItemActivity", 42);
    CHECK(parse_app_url(url.rendered()) == url);

    for (const auto* bad :
         {"http://h/t",                         // no '?'
          "ftp://h/t?1",                        // wrong scheme
          "http://host?1",                      // no target
          "http://h/t?",                        // empty hash
          "http://h/t?12x3",                    // non-decimal
          "http://h/t?184467440737095516151",   // 21 digits
          "http://h/t?99999999999999999999"}) { // overflows 64 bits
        try {
            parse_app_url(bad);
            FAIL("expected MalformedUrl for: ", bad);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::MalformedUrl);
        }
    }
}

TEST_CASE("shorten: the search detour collapses to the direct detail jump") {
    auto spec = load_fixture("reddit.json");
    auto table = compute_shortcuts(build_navigation_graph(spec, 4, 64), 6);

    // three-intent recording: launch, search screen, detail with the link extra
    ConcretePath recorded{{make_launch_intent(spec),
                           intent("com.reddit.frontpage", "com.reddit.frontpage.SearchActivity"),
                           intent("com.reddit.frontpage", "com.reddit.frontpage.DetailActivity",
                                  {{"arg.link", std::string("L42")}})}};
    auto outcome = shorten(recorded, table);
    CHECK_FALSE(outcome.fell_back);
    REQUIRE(outcome.path.intents.size() == 2);  // launch + one transition
    CHECK(outcome.path.intents[0] == recorded.intents[0]);
    CHECK(outcome.path.target() == "com.reddit.frontpage.DetailActivity");
    CHECK(std::get<std::string>(outcome.path.intents[1].extras.at("arg.link")) == "L42");

    // same jump over the subreddit route binds the value seen on that route
    ConcretePath via_subreddit{{make_launch_intent(spec),
                                intent("com.reddit.frontpage",
                                       "com.reddit.frontpage.SubredditListingActivity",
                                       {{"subreddit_name", std::string("pics")}}),
                                intent("com.reddit.frontpage", "com.reddit.frontpage.DetailActivity",
                                       {{"arg.link", std::string("L77")}})}};
    auto other = shorten(via_subreddit, table);
    REQUIRE(other.path.intents.size() == 2);
    CHECK(std::get<std::string>(other.path.intents[1].extras.at("arg.link")) == "L77");
}

TEST_CASE("shorten: a path that is already minimal is unchanged") {
    auto table = compute_shortcuts(applink::testing::reddit_table_graph(), 4);
    auto spec = load_fixture("reddit.json");
    ConcretePath direct{{make_launch_intent(spec),
                         intent("com.reddit.frontpage", "com.reddit.frontpage.DetailActivity",
                                {{"arg.link", std::string("L42")}})}};
    auto outcome = shorten(direct, table);
    CHECK_FALSE(outcome.fell_back);
    CHECK(outcome.path == direct);

    // unknown projections fall back to identity via lookup
    ConcretePath foreign{{intent("q", "q.Main"), intent("q", "q.Other", {{"z", std::string("1")}})}};
    CHECK(shorten(foreign, table).path == foreign);
}

TEST_CASE("shorten: a corrupt table entry falls back to the original, flagged") {
    auto spec = load_fixture("reddit.json");
    ConcretePath direct{{make_launch_intent(spec),
                         intent("com.reddit.frontpage", "com.reddit.frontpage.DetailActivity",
                                {{"arg.link", std::string("L42")}})}};
    auto abstract = to_abstract(direct);

    ShortcutTable corrupt;
    AbstractPath ghost{{AbstractTransition{"com.reddit.frontpage.FrontpageListingActivity",
                                           "com.reddit.frontpage.DetailActivity",
                                           {"extra:ghost"}}}};
    corrupt.entries.emplace(
        std::make_pair(std::string("com.reddit.frontpage.DetailActivity"), abstract.canonical_key()),
        ghost);
    auto outcome = shorten(direct, corrupt);
    CHECK(outcome.fell_back);
    CHECK(outcome.path == direct);
}

TEST_CASE("property: shortened fixture paths replay to the same final content") {
    auto spec = load_fixture("reddit.json");
    auto graph = build_navigation_graph(spec, 4, 64);
    auto table = compute_shortcuts(graph, 6);

    // harvest concrete paths by crawling two hops deep
    std::vector<ConcretePath> paths;
    ConcretePath home{{make_launch_intent(spec)}};
    auto first = crawl_page(spec, home, 128);
    for (const auto& p : first.new_paths) {
        paths.push_back(p);
        for (const auto& q : crawl_page(spec, p, 128).new_paths) paths.push_back(q);
    }
    REQUIRE(paths.size() > 10);

    for (const auto& path : paths) {
        auto outcome = shorten(path, table);
        CHECK_FALSE(outcome.fell_back);
        CHECK(outcome.path.intents.size() <= path.intents.size());
        auto original = replay(spec, path);
        auto shortened = replay(spec, outcome.path);
        CHECK(original.current_activity() == shortened.current_activity());
        CHECK(original.content() == shortened.content());
    }
}

TEST_CASE("extract_index: biggest node titles the page, next three tell the story") {
    Pstg pstg;
    Content page;
    page.nodes = {ContentNode{"nav", 10}, ContentNode{"The Big Headline", 32},
                  ContentNode{"first para", 14}, ContentNode{"second para", 14},
                  ContentNode{"third para", 14}, ContentNode{"fourth para", 14}};
    pstg.start = state_key(page);
    pstg.states.emplace(pstg.start, page);

    auto url = make_app_url("com.x.app", "com.x.app.Main", 1);
    auto index = extract_index(pstg, url);
    CHECK(index.title == "The Big Headline");
    CHECK(index.abstract == "first para second para third para");
    CHECK(index.activity == "com.x.app.Main");
}

TEST_CASE("extract_index: earliest node wins a size tie") {
    Pstg pstg;
    Content page;
    page.nodes = {ContentNode{"left title", 20}, ContentNode{"right title", 20}};
    pstg.start = state_key(page);
    pstg.states.emplace(pstg.start, page);
    auto index = extract_index(pstg, make_app_url("com.x.app", "com.x.app.Main", 1));
    CHECK(index.title == "left title");
    CHECK(index.abstract == "right title");
}

TEST_CASE("extract_index: text-free page and the 280-char cap") {
    Pstg pstg;
    Content empty;
    empty.nodes = {ContentNode{"   ", 20}};
    pstg.start = state_key(empty);
    pstg.states.emplace(pstg.start, empty);
    auto index = extract_index(pstg, make_app_url("com.x.app", "com.x.app.Main", 1));
    CHECK(index.title.empty());
    CHECK(index.abstract.empty());

    Pstg longpage;
    Content essay;
    essay.nodes = {ContentNode{"T", 20}, ContentNode{std::string(300, 'a'), 10},
                   ContentNode{std::string(300, 'b'), 10}};
    longpage.start = state_key(essay);
    longpage.states.emplace(longpage.start, essay);
    auto capped = extract_index(longpage, make_app_url("com.x.app", "com.x.app.Main", 1));
    CHECK(capped.abstract.size() == 280);
}

TEST_CASE("register: pending insert, idempotent duplicate, shared prefix") {
    auto store = fs::temp_directory_path() / "applink_test_register.jsonl";
    fs::remove(store);
    auto repo = Repository::open(store);

    auto spec = load_fixture("reddit.json");
    ShortcutTable empty_table;
    ConcretePath l42{{make_launch_intent(spec),
                      intent("com.reddit.frontpage", "com.reddit.frontpage.DetailActivity",
                             {{"arg.link", std::string("L42")}})}};
    ConcretePath l99{{make_launch_intent(spec),
                      intent("com.reddit.frontpage", "com.reddit.frontpage.DetailActivity",
                             {{"arg.link", std::string("L99")}})}};

    auto link42 = synthesize_link(spec, l42, empty_table);
    auto link99 = synthesize_link(spec, l99, empty_table);
    CHECK(register_link(repo, link42) == RegisterOutcome::Registered);
    CHECK(register_link(repo, link42) == RegisterOutcome::Duplicate);
    CHECK(register_link(repo, link99) == RegisterOutcome::Registered);
    CHECK(repo.list().size() == 2);
    CHECK(repo.list()[0].status == RecordStatus::Pending);

    // instances of one activity share the prefix before '?'
    auto prefix = [](const std::string& url) { return url.substr(0, url.find('?')); };
    CHECK(prefix(link42.url.rendered()) == prefix(link99.url.rendered()));
    CHECK(link42.url.rendered() != link99.url.rendered());

    // deep link internal consistency
    CHECK(link42.url.hash == hash_path(serialize_path(link42.path)));
    CHECK(link42.url.target == link42.path.target());
    fs::remove(store);
}
