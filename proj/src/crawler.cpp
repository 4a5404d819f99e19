#include "applink/crawler.hpp"

#include <algorithm>
#include <deque>

#include <json.hpp>

#include "applink/repository.hpp"
#include "applink/synthesizer.hpp"

namespace applink {

using nlohmann::json;

namespace {

constexpr std::uint64_t kFnvOffsetBasis = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void fnv1a_mix(std::uint64_t& hash, std::string_view bytes) {
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= kFnvPrime;
    }
}

} // namespace

StateKey state_key(const Content& content) {
    std::uint64_t hash = kFnvOffsetBasis;
    for (const auto& [text, kind] : content.identity()) {
        fnv1a_mix(hash, node_kind_name(kind));
        hash ^= 0x1f;
        hash *= kFnvPrime;
        fnv1a_mix(hash, text);
        hash ^= 0x1e;
        hash *= kFnvPrime;
    }
    return hash;
}

const std::string& ConcretePath::target() const {
    if (intents.empty() || !intents.back().component)
        throw Error(ErrorKind::EmptyPath, "path has no final component");
    return intents.back().component->class_name;
}

AbstractPath to_abstract(const ConcretePath& path) {
    AbstractPath abstract;
    for (std::size_t i = 1; i < path.intents.size(); ++i) {
        const auto& from = path.intents[i - 1].component;
        const auto& to = path.intents[i].component;
        if (!from || !to)
            throw Error(ErrorKind::EmptyPath, "path intent has no component");
        abstract.transitions.push_back(
            AbstractTransition{from->class_name, to->class_name, label_set(path.intents[i])});
    }
    return abstract;
}

DriverSession replay(const AppSpec& spec, const ConcretePath& path) {
    auto session = launch(spec);
    for (const auto& intent : path.intents) {
        try {
            session.send_intent(intent);
        } catch (const Error& e) {
            throw Error(ErrorKind::PathReplayFailed, e.what());
        }
    }
    return session;
}

DriverSession recover_state(const AppSpec& spec, const ConcretePath& path,
                            const std::vector<UserOperation>& op_prefix,
                            std::optional<StateKey> expected) {
    auto session = replay(spec, path);
    for (const auto& op : op_prefix) {
        try {
            session.perform(op);
        } catch (const Error& e) {
            throw Error(ErrorKind::RecoveryDiverged, e.what());
        }
    }
    if (expected && state_key(session.content()) != *expected)
        throw Error(ErrorKind::RecoveryDiverged,
                    "replay landed on a different state than the recording");
    return session;
}

CrawlResult crawl_page(const AppSpec& spec, const ConcretePath& path, int op_budget) {
    CrawlResult result;

    std::map<StateKey, std::vector<UserOperation>> prefixes;
    std::deque<StateKey> queue;
    std::set<std::string> seen_paths;

    {
        auto session = replay(spec, path);
        auto content = session.content();
        auto key = state_key(content);
        result.pstg.start = key;
        result.pstg.states.emplace(key, content);
        result.contents.push_back(std::move(content));
        prefixes.emplace(key, std::vector<UserOperation>{});
        queue.push_back(key);
    }

    int spent = 0;
    while (!queue.empty()) {
        auto key = queue.front();
        queue.pop_front();
        const auto prefix = prefixes.at(key);

        auto ops = recover_state(spec, path, prefix, key).operations();
        for (const auto& op : ops) {
            if (spent >= op_budget) {
                result.truncated = true;
                return result;
            }
            auto session = recover_state(spec, path, prefix, key);
            auto event = session.perform(op);
            ++spent;

            if (event.type == ObservedEvent::Type::Transitioned) {
                ConcretePath discovered{path.intents};
                discovered.intents.push_back(event.intent);
                if (seen_paths.insert(serialize_path(discovered)).second)
                    result.new_paths.push_back(std::move(discovered));
            } else if (event.type == ObservedEvent::Type::ContentChanged) {
                auto next = state_key(event.content);
                auto existing = result.pstg.states.find(next);
                if (existing == result.pstg.states.end()) {
                    result.pstg.states.emplace(next, event.content);
                    result.contents.push_back(event.content);
                    auto next_prefix = prefix;
                    next_prefix.push_back(op);
                    prefixes.emplace(next, std::move(next_prefix));
                    queue.push_back(next);
                    result.pstg.edges.push_back(PstgEdge{key, next, op});
                } else {
                    if (!(existing->second == event.content))
                        throw Error(ErrorKind::RecoveryDiverged,
                                    "state key collision between distinct contents");
                    PstgEdge edge{key, next, op};
                    if (std::find(result.pstg.edges.begin(), result.pstg.edges.end(), edge) ==
                        result.pstg.edges.end())
                        result.pstg.edges.push_back(edge);
                }
            }
        }
    }
    return result;
}

std::string CrawlReport::to_json() const {
    json doc;
    doc["pages"] = pages;
    doc["states"] = states;
    doc["new_links"] = new_links;
    doc["truncated_pages"] = truncated_pages;
    return doc.dump();
}

CrawlReport run_crawl(const AppSpec& spec, const ShortcutTable& shortcuts, Repository& repo,
                      CrawlBudget budget) {
    CrawlReport report;

    // Seed: the launch path, unless a previous run already registered it.
    {
        ConcretePath launch_path{{make_launch_intent(spec)}};
        auto seed = synthesize_link(spec, launch_path, shortcuts);
        register_link(repo, seed);
    }

    while (report.pages < budget.max_pages) {
        auto record = repo.next_pending();
        if (!record) break;

        auto url = parse_app_url(record->url);
        auto result = crawl_page(spec, record->path, budget.op_budget);

        auto published = *record;
        published.index = extract_index(result.pstg, url);
        published.status = RecordStatus::Published;
        repo.put(published);

        report.pages += 1;
        report.states += static_cast<int>(result.pstg.states.size());
        if (result.truncated) report.truncated_pages.push_back(record->url);
        report.page_contents.emplace(record->url, result.pstg.states.at(result.pstg.start));

        for (const auto& discovered : result.new_paths) {
            auto link = synthesize_link(spec, discovered, shortcuts);
            if (register_link(repo, link) == RegisterOutcome::Registered) report.new_links += 1;
        }
    }
    return report;
}

} // namespace applink
