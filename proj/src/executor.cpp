#include "applink/executor.hpp"

#include <httplib.h>
#include <json.hpp>

#include "applink/codec.hpp"

namespace applink {

using nlohmann::json;

std::vector<UrlSchema> generate_schemas(const AppSpec& spec, const std::set<std::string>& selected) {
    auto host = reversed_host(spec.package_name);
    std::vector<UrlSchema> schemas;
    for (const auto& activity : selected) {
        if (!spec.find_activity(activity))
            throw Error(ErrorKind::UnknownActivity, "'" + activity + "' is not declared");
        schemas.push_back(UrlSchema{host, activity});
    }
    return schemas;
}

std::optional<std::string> match_schema(const std::string& url, const std::vector<UrlSchema>& schemas) {
    auto parsed = parse_app_url(url);
    for (const auto& schema : schemas)
        if (schema.host == parsed.host && schema.target == parsed.target) return schema.target;
    return std::nullopt;
}

std::optional<ConcretePath> RepositoryResolver::resolve(std::uint64_t hash) {
    auto record = repo_->get_by_hash(hash);
    if (!record || record->status != RecordStatus::Published) return std::nullopt;
    return record->path;
}

std::optional<ConcretePath> ServiceResolver::resolve(std::uint64_t hash) {
    auto slash = base_url_.find('/', 7);  // past "http://"
    auto origin = slash == std::string::npos ? base_url_ : base_url_.substr(0, slash);
    httplib::Client client(origin);
    auto res = client.Get("/resolve/" + std::to_string(hash));
    if (!res || res->status != 200) return std::nullopt;
    try {
        auto doc = json::parse(res->body);
        ConcretePath path;
        for (const auto& intent : doc.at("path")) path.intents.push_back(intent_from_json(intent));
        return path;
    } catch (const json::exception&) {
        return std::nullopt;
    }
}

std::optional<ConcretePath> ChainResolver::resolve(std::uint64_t hash) {
    for (auto* resolver : resolvers_) {
        auto path = resolver->resolve(hash);
        if (path) return path;
    }
    return std::nullopt;
}

Content execute_deep_link(const AppSpec& spec, PathResolver& resolver, const AppUrl& url) {
    auto path = resolver.resolve(url.hash);
    if (!path)
        throw Error(ErrorKind::NotFound, "no published deep link for hash " + std::to_string(url.hash));

    auto session = replay(spec, *path);
    if (session.current_activity() != url.target)
        throw Error(ErrorKind::TargetMismatch,
                    "replay ended at '" + session.current_activity() + "', URL targets '" +
                        url.target + "'");
    return session.content();
}

Content default_forward(const AppSpec& spec, const std::string&) {
    return launch(spec).content();
}

OpenResult open_url(const AppSpec& spec, const std::vector<UrlSchema>& schemas,
                    PathResolver& resolver, const std::string& url) {
    OpenResult result;
    auto target = match_schema(url, schemas);
    if (target) {
        result.deep_linked = true;
        result.activity = *target;
        result.content = execute_deep_link(spec, resolver, parse_app_url(url));
    } else {
        result.deep_linked = false;
        result.activity = spec.main_activity;
        result.content = default_forward(spec, url);
    }
    return result;
}

} // namespace applink
