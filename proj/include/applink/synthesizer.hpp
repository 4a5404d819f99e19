#ifndef APPLINK_SYNTHESIZER_HPP
#define APPLINK_SYNTHESIZER_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include "applink/crawler.hpp"

namespace applink {

class Repository;

// Canonical byte form of a path: one intent record per line. Injective on
// distinct paths.
std::string serialize_path(const ConcretePath& path);

// FNV-1a 64. Fixed for the project so rendered URLs are stable across runs
// and machines.
std::uint64_t hash_path(std::string_view bytes);

// Dot-segment reversal of the package name: com.example.pets -> pets.example.com.
std::string reversed_host(const std::string& package);

struct AppUrl {
    std::string host;
    std::string target;
    std::uint64_t hash = 0;

    // `http://{host}/{target}?{hash}` with a decimal hash; bit-exact grammar.
    std::string rendered() const;

    bool operator==(const AppUrl&) const = default;
};

AppUrl make_app_url(const std::string& package, const std::string& activity, std::uint64_t hash);
AppUrl parse_app_url(const std::string& url);  // throws MalformedUrl

struct Index {
    std::string title;
    std::string abstract;  // <= 280 chars
    std::string activity;
    AppUrl url;

    bool operator==(const Index&) const = default;
};

struct DeepLink {
    ConcretePath path;
    AppUrl url;
    Index index;
};

struct ShortenOutcome {
    ConcretePath path;
    bool fell_back = false;  // UnboundLabel: original path kept
};

// Projects the path onto its abstract transitions, looks up the shortcut and
// re-materializes it as concrete intents. Extra labels are bound to the value
// observed for that key anywhere in the original path, last occurrence wins;
// the launch intent is preserved as the first element.
ShortenOutcome shorten(const ConcretePath& path, const ShortcutTable& shortcuts);

// Title: text of the max-size node of the start state (earliest wins a tie).
// Abstract: the next three text-bearing nodes in document order, truncated
// to 280 characters.
Index extract_index(const Pstg& pstg, const AppUrl& url);

enum class RegisterOutcome { Registered, Duplicate };

// Idempotent upsert keyed by the rendered URL; new records enter the pending
// crawl queue.
RegisterOutcome register_link(Repository& repo, const DeepLink& link);

// Shorten + mint the URL for a crawled path. The index is left empty until
// the page itself is crawled.
DeepLink synthesize_link(const AppSpec& spec, const ConcretePath& path,
                         const ShortcutTable& shortcuts);

} // namespace applink

#endif // APPLINK_SYNTHESIZER_HPP
