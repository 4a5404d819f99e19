#include "applink/synthesizer.hpp"

#include <algorithm>

#include "applink/repository.hpp"

namespace applink {

namespace {

constexpr std::uint64_t kFnvOffsetBasis = 14695981039346656037ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

} // namespace

std::string serialize_path(const ConcretePath& path) {
    if (path.intents.empty())
        throw Error(ErrorKind::EmptyPath, "cannot serialize an empty path");
    std::string out;
    for (std::size_t i = 0; i < path.intents.size(); ++i) {
        if (i > 0) out += '\n';
        out += canonical_intent_record(path.intents[i]);
    }
    return out;
}

std::uint64_t hash_path(std::string_view bytes) {
    std::uint64_t hash = kFnvOffsetBasis;
    for (unsigned char c : bytes) {
        hash ^= c;
        hash *= kFnvPrime;
    }
    return hash;
}

std::string reversed_host(const std::string& package) {
    std::vector<std::string> segments;
    std::size_t start = 0;
    while (true) {
        auto dot = package.find('.', start);
        segments.push_back(package.substr(start, dot == std::string::npos ? dot : dot - start));
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    std::string host;
    for (auto it = segments.rbegin(); it != segments.rend(); ++it) {
        if (!host.empty()) host += '.';
        host += *it;
    }
    return host;
}

std::string AppUrl::rendered() const {
    return "http://" + host + "/" + target + "?" + std::to_string(hash);
}

AppUrl make_app_url(const std::string& package, const std::string& activity, std::uint64_t hash) {
    return AppUrl{reversed_host(package), activity, hash};
}

AppUrl parse_app_url(const std::string& url) {
    constexpr std::string_view scheme = "http://";
    if (url.rfind(scheme, 0) != 0)
        throw Error(ErrorKind::MalformedUrl, "'" + url + "' does not start with http://");
    auto slash = url.find('/', scheme.size());
    if (slash == std::string::npos)
        throw Error(ErrorKind::MalformedUrl, "'" + url + "' has no target segment");
    auto question = url.find('?', slash + 1);
    if (question == std::string::npos)
        throw Error(ErrorKind::MalformedUrl, "'" + url + "' has no hash key");

    AppUrl out;
    out.host = url.substr(scheme.size(), slash - scheme.size());
    out.target = url.substr(slash + 1, question - slash - 1);
    auto digits = url.substr(question + 1);
    if (out.host.empty() || out.target.empty() || digits.empty() || digits.size() > 20 ||
        !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
        throw Error(ErrorKind::MalformedUrl, "'" + url + "' has a malformed hash key");
    errno = 0;
    out.hash = std::strtoull(digits.c_str(), nullptr, 10);
    if (errno == ERANGE)
        throw Error(ErrorKind::MalformedUrl, "'" + url + "' hash exceeds 64 bits");
    return out;
}

namespace {

// Last observed value per extras key across the whole path.
std::map<std::string, ExtraValue> observed_extras(const ConcretePath& path) {
    std::map<std::string, ExtraValue> values;
    for (const auto& intent : path.intents)
        for (const auto& [key, value] : intent.extras) values[key] = value;
    return values;
}

IntentRecord materialize_transition(const AbstractTransition& transition,
                                    const std::string& package,
                                    const std::map<std::string, ExtraValue>& bound) {
    IntentRecord intent;
    intent.component = ComponentRef{package, transition.to};
    for (const auto& label : transition.labels) {
        if (label.rfind("action:", 0) == 0) {
            intent.action = label.substr(7);
        } else if (label.rfind("category:", 0) == 0) {
            intent.categories.insert(label.substr(9));
        } else if (label.rfind("data:", 0) == 0) {
            intent.data = label.substr(5);
        } else if (label.rfind("extra:", 0) == 0) {
            auto key = label.substr(6);
            auto it = bound.find(key);
            if (it == bound.end())
                throw Error(ErrorKind::UnboundLabel,
                            "no value for extra '" + key + "' in the original path");
            intent.extras.emplace(key, it->second);
        }
    }
    return intent;
}

} // namespace

ShortenOutcome shorten(const ConcretePath& path, const ShortcutTable& shortcuts) {
    if (path.intents.empty())
        throw Error(ErrorKind::EmptyPath, "cannot shorten an empty path");
    if (!path.intents.front().component)
        throw Error(ErrorKind::EmptyPath, "launch intent has no component");

    auto shortcut = lookup_shortcut(shortcuts, to_abstract(path));

    ConcretePath shortened{{path.intents.front()}};  // launch preserved as t1
    const auto& package = path.intents.front().component->package;
    const auto bound = observed_extras(path);
    try {
        for (const auto& transition : shortcut.transitions)
            shortened.intents.push_back(materialize_transition(transition, package, bound));
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::UnboundLabel) throw;
        return ShortenOutcome{path, true};
    }
    return ShortenOutcome{shortened, false};
}

Index extract_index(const Pstg& pstg, const AppUrl& url) {
    Index index;
    index.activity = url.target;
    index.url = url;

    const auto& nodes = pstg.states.at(pstg.start).nodes;
    std::size_t title_at = nodes.size();
    int best_size = 0;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (normalize_text(nodes[i].text).empty()) continue;
        if (nodes[i].size > best_size) {
            best_size = nodes[i].size;
            title_at = i;
        }
    }
    if (title_at == nodes.size()) return index;  // text-free page

    index.title = normalize_text(nodes[title_at].text);
    int taken = 0;
    for (std::size_t i = title_at + 1; i < nodes.size() && taken < 3; ++i) {
        auto text = normalize_text(nodes[i].text);
        if (text.empty()) continue;
        if (!index.abstract.empty()) index.abstract += ' ';
        index.abstract += text;
        ++taken;
    }
    if (index.abstract.size() > 280) {
        index.abstract.resize(280);
        // don't leave a dangling UTF-8 tail
        while (!index.abstract.empty() &&
               (static_cast<unsigned char>(index.abstract.back()) & 0xC0) == 0x80)
            index.abstract.pop_back();
    }
    return index;
}

RegisterOutcome register_link(Repository& repo, const DeepLink& link) {
    auto rendered = link.url.rendered();
    if (repo.get_by_url(rendered)) return RegisterOutcome::Duplicate;

    RepoRecord record;
    record.url = rendered;
    record.host = link.url.host;
    record.target = link.url.target;
    record.hash = link.url.hash;
    record.path = link.path;
    record.index = link.index;
    record.created_at = Repository::now_utc();
    record.status = RecordStatus::Pending;
    repo.put(record);
    return RegisterOutcome::Registered;
}

DeepLink synthesize_link(const AppSpec& spec, const ConcretePath& path,
                         const ShortcutTable& shortcuts) {
    DeepLink link;
    link.path = shorten(path, shortcuts).path;
    link.url = make_app_url(spec.package_name, link.path.target(),
                            hash_path(serialize_path(link.path)));
    link.index.activity = link.url.target;
    link.index.url = link.url;
    return link;
}

} // namespace applink
