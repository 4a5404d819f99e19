#ifndef APPLINK_EXECUTOR_HPP
#define APPLINK_EXECUTOR_HPP

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "applink/repository.hpp"

namespace applink {

// URL prefix shared by all instances of one activity.
struct UrlSchema {
    std::string host;
    std::string target;

    bool operator==(const UrlSchema&) const = default;
};

// One schema per selected activity; selection lets developers restrict which
// activities accept deep links (default in the CLI: all of them).
std::vector<UrlSchema> generate_schemas(const AppSpec& spec, const std::set<std::string>& selected);

// Target activity of the unique schema matching the URL's prefix before '?',
// or nullopt. Throws MalformedUrl on syntactically invalid URLs.
std::optional<std::string> match_schema(const std::string& url, const std::vector<UrlSchema>& schemas);

// Where the controller obtains concrete paths for a hash key.
class PathResolver {
public:
    virtual ~PathResolver() = default;
    virtual std::optional<ConcretePath> resolve(std::uint64_t hash) = 0;
};

// Published records of a local repository.
class RepositoryResolver : public PathResolver {
public:
    explicit RepositoryResolver(const Repository& repo) : repo_(&repo) {}
    std::optional<ConcretePath> resolve(std::uint64_t hash) override;

private:
    const Repository* repo_;
};

// GET {base_url}/resolve/{hash} against a running service.
class ServiceResolver : public PathResolver {
public:
    explicit ServiceResolver(std::string base_url) : base_url_(std::move(base_url)) {}
    std::optional<ConcretePath> resolve(std::uint64_t hash) override;

private:
    std::string base_url_;
};

// Local repository first, service fallback; either side may be absent.
class ChainResolver : public PathResolver {
public:
    void add(PathResolver& resolver) { resolvers_.push_back(&resolver); }
    std::optional<ConcretePath> resolve(std::uint64_t hash) override;

private:
    std::vector<PathResolver*> resolvers_;
};

// Resolves the hash, replays the path on a fresh session and returns the
// final page content. NotFound when the hash is not published,
// TargetMismatch when the replay ends on a different activity.
Content execute_deep_link(const AppSpec& spec, PathResolver& resolver, const AppUrl& url);

// Unmatched URLs fall through to a plain app launch.
Content default_forward(const AppSpec& spec, const std::string& url);

struct OpenResult {
    bool deep_linked = false;
    std::string activity;
    Content content;
};

// Dispatch: every syntactically valid URL goes to exactly one of
// execute_deep_link or default_forward.
OpenResult open_url(const AppSpec& spec, const std::vector<UrlSchema>& schemas,
                    PathResolver& resolver, const std::string& url);

} // namespace applink

#endif // APPLINK_EXECUTOR_HPP
