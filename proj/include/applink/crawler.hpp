#ifndef APPLINK_CRAWLER_HPP
#define APPLINK_CRAWLER_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "applink/app_model.hpp"
#include "applink/shortcut.hpp"

namespace applink {

class Repository;

// 64-bit digest of a content's identity sequence.
using StateKey = std::uint64_t;

StateKey state_key(const Content& content);

// Ordered intents that reach a deep page from a fresh session; the first
// element is always the launch intent.
struct ConcretePath {
    std::vector<IntentRecord> intents;

    bool operator==(const ConcretePath&) const = default;

    // Class name of the final intent's component.
    const std::string& target() const;
};

// Projects the concrete path onto its abstract transitions; the launch
// intent positions the path at the root and is not itself a transition.
AbstractPath to_abstract(const ConcretePath& path);

// Fresh session with every intent of the path re-sent; wraps driver errors
// as PathReplayFailed.
DriverSession replay(const AppSpec& spec, const ConcretePath& path);

struct PstgEdge {
    StateKey from;
    StateKey to;
    UserOperation op;

    bool operator==(const PstgEdge&) const = default;
};

// Page state transition graph: states identified by content, edges by the
// user operation that caused the change.
struct Pstg {
    std::map<StateKey, Content> states;
    std::vector<PstgEdge> edges;
    StateKey start = 0;
};

struct CrawlResult {
    Pstg pstg;
    std::vector<ConcretePath> new_paths;
    std::vector<Content> contents;  // discovery order
    bool truncated = false;         // op_budget exhausted before exhaustion
};

// Algorithm: replay the path, seed the PSTG with the original state, then
// execute every operation of every known state (recovering the state before
// each one). Transitions yield new concrete paths; content changes to unseen
// contents insert new states.
CrawlResult crawl_page(const AppSpec& spec, const ConcretePath& path, int op_budget);

// Fresh session with the path replayed and op_prefix performed. When
// `expected` is given and the session lands on a different state key, the
// spec no longer matches the recording and RecoveryDiverged is thrown.
DriverSession recover_state(const AppSpec& spec, const ConcretePath& path,
                            const std::vector<UserOperation>& op_prefix,
                            std::optional<StateKey> expected = std::nullopt);

struct CrawlBudget {
    int max_pages = 100;
    int op_budget = 128;
};

struct CrawlReport {
    int pages = 0;
    int states = 0;
    int new_links = 0;
    std::vector<std::string> truncated_pages;

    // crawl-time start-state content per published URL (not part of the
    // JSON report; used by round-trip checks)
    std::map<std::string, Content> page_contents;

    std::string to_json() const;
};

// Drains the repository's pending queue page by page, registering new links
// through the synthesizer. Seeds the queue with the launch path when the
// repository does not hold it yet.
CrawlReport run_crawl(const AppSpec& spec, const ShortcutTable& shortcuts, Repository& repo,
                      CrawlBudget budget);

} // namespace applink

#endif // APPLINK_CRAWLER_HPP
