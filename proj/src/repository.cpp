#include "applink/repository.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "applink/codec.hpp"

namespace applink {

using nlohmann::json;

namespace {

const char* status_name(RecordStatus status) {
    return status == RecordStatus::Pending ? "pending" : "published";
}

RecordStatus status_from_name(const std::string& name) {
    if (name == "pending") return RecordStatus::Pending;
    if (name == "published") return RecordStatus::Published;
    throw json::other_error::create(501, "unknown status '" + name + "'", nullptr);
}

} // namespace

std::string RepoRecord::to_json_line() const {
    json doc;
    doc["url"] = url;
    doc["host"] = host;
    doc["target"] = target;
    doc["hash"] = hash;
    json intents = json::array();
    for (const auto& intent : path.intents) intents.push_back(intent_to_json(intent));
    doc["path"] = std::move(intents);
    doc["index"] = {{"title", index.title}, {"abstract", index.abstract}, {"activity", index.activity}};
    doc["created_at"] = created_at;
    doc["status"] = status_name(status);
    return doc.dump();
}

RepoRecord RepoRecord::from_json_line(const std::string& line) {
    auto doc = json::parse(line);
    RepoRecord record;
    record.url = doc.at("url").get<std::string>();
    record.host = doc.at("host").get<std::string>();
    record.target = doc.at("target").get<std::string>();
    record.hash = doc.at("hash").get<std::uint64_t>();
    for (const auto& intent : doc.at("path")) record.path.intents.push_back(intent_from_json(intent));
    record.index.title = doc.at("index").at("title").get<std::string>();
    record.index.abstract = doc.at("index").at("abstract").get<std::string>();
    record.index.activity = doc.at("index").at("activity").get<std::string>();
    record.index.url = AppUrl{record.host, record.target, record.hash};
    record.created_at = doc.at("created_at").get<std::string>();
    record.status = status_from_name(doc.at("status").get<std::string>());
    return record;
}

Repository Repository::open(const std::filesystem::path& location) {
    Repository repo;
    repo.location_ = location;

    std::ifstream in(location);
    if (!in) return repo;  // absent store: start empty

    std::map<std::string, std::size_t> by_url;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        RepoRecord record;
        try {
            record = RepoRecord::from_json_line(line);
        } catch (const json::exception& e) {
            throw Error(ErrorKind::CorruptStore,
                        location.string() + ":" + std::to_string(line_no) + ": " + e.what());
        }
        // later lines win: the file is an upsert log
        auto it = by_url.find(record.url);
        if (it == by_url.end()) {
            by_url.emplace(record.url, repo.records_.size());
            repo.records_.push_back(std::move(record));
        } else {
            repo.records_[it->second] = std::move(record);
        }
    }
    repo.file_lines_ = line_no;
    return repo;
}

void Repository::append_line(const std::string& line) {
    std::ofstream out(location_, std::ios::app);
    if (!out)
        throw Error(ErrorKind::CorruptStore, "cannot write store '" + location_.string() + "'");
    out << line << '\n';
    if (!out)
        throw Error(ErrorKind::CorruptStore, "write failed on '" + location_.string() + "'");
    ++file_lines_;
}

PutOutcome Repository::put(const RepoRecord& record) {
    for (auto& existing : records_) {
        if (existing.url != record.url) continue;
        if (existing.status == RecordStatus::Published) return PutOutcome::IgnoredPublished;
        existing = record;
        append_line(record.to_json_line());
        if (file_lines_ > 2 * records_.size()) compact();
        return PutOutcome::Replaced;
    }
    records_.push_back(record);
    append_line(record.to_json_line());
    return PutOutcome::Inserted;
}

std::optional<RepoRecord> Repository::get_by_hash(std::uint64_t hash) const {
    for (const auto& record : records_)
        if (record.hash == hash) return record;
    return std::nullopt;
}

std::optional<RepoRecord> Repository::get_by_url(const std::string& url) const {
    for (const auto& record : records_)
        if (record.url == url) return record;
    return std::nullopt;
}

std::optional<RepoRecord> Repository::next_pending() {
    for (const auto& record : records_) {
        if (record.status != RecordStatus::Pending) continue;
        if (in_progress_.count(record.url)) continue;
        in_progress_.insert(record.url);
        return record;
    }
    return std::nullopt;
}

void Repository::compact() {
    auto tmp = location_;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out)
            throw Error(ErrorKind::CorruptStore, "cannot write '" + tmp.string() + "'");
        for (const auto& record : records_) out << record.to_json_line() << '\n';
    }
    std::filesystem::rename(tmp, location_);
    file_lines_ = records_.size();
}

std::string Repository::now_utc() {
    auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

struct ServiceHandle::Impl {
    httplib::Server server;
    std::thread worker;
    std::string host;
    int port = 0;
    std::vector<RepoRecord> snapshot;  // published records only
    bool stopped = false;
};

ServiceHandle::ServiceHandle() : impl_(std::make_unique<Impl>()) {}
ServiceHandle::ServiceHandle(ServiceHandle&&) noexcept = default;
ServiceHandle& ServiceHandle::operator=(ServiceHandle&&) noexcept = default;

ServiceHandle::~ServiceHandle() {
    if (impl_) stop();
}

const std::string& ServiceHandle::host() const { return impl_->host; }
int ServiceHandle::port() const { return impl_->port; }

std::string ServiceHandle::base_url() const {
    return "http://" + impl_->host + ":" + std::to_string(impl_->port);
}

void ServiceHandle::stop() {
    if (impl_->stopped) return;
    impl_->stopped = true;
    impl_->server.stop();
    if (impl_->worker.joinable()) impl_->worker.join();
}

namespace {

std::optional<std::uint64_t> parse_hash_segment(const std::string& digits) {
    if (digits.empty() || digits.size() > 20) return std::nullopt;
    std::uint64_t value = 0;
    for (char c : digits) {
        if (c < '0' || c > '9') return std::nullopt;
        if (value > (UINT64_MAX - (c - '0')) / 10) return std::nullopt;
        value = value * 10 + (c - '0');
    }
    return value;
}

const RepoRecord* find_published(const std::vector<RepoRecord>& snapshot, std::uint64_t hash) {
    for (const auto& record : snapshot)
        if (record.hash == hash) return &record;
    return nullptr;
}

std::string descriptor_html(const RepoRecord& record) {
    auto escape = [](const std::string& text) {
        std::string out;
        for (char c : text) {
            switch (c) {
                case '&': out += "&amp;"; break;
                case '<': out += "&lt;"; break;
                case '>': out += "&gt;"; break;
                default: out += c;
            }
        }
        return out;
    };
    return "<!DOCTYPE html>\n<html><head><title>" + escape(record.index.title) +
           "</title></head>\n<body>\n<h1>" + escape(record.index.title) + "</h1>\n<p>" +
           escape(record.index.abstract) + "</p>\n<a href=\"" + escape(record.url) + "\">" +
           escape(record.url) + "</a>\n</body></html>\n";
}

} // namespace

ServiceHandle serve(const Repository& repo, const std::string& address) {
    auto colon = address.rfind(':');
    if (colon == std::string::npos)
        throw Error(ErrorKind::BindFailure, "address '" + address + "' is not host:port");
    auto host = address.substr(0, colon);
    int port;
    try {
        port = std::stoi(address.substr(colon + 1));
    } catch (const std::exception&) {
        throw Error(ErrorKind::BindFailure, "address '" + address + "' has a malformed port");
    }

    ServiceHandle handle;
    auto* impl = handle.impl_.get();
    impl->host = host;
    for (const auto& record : repo.list())
        if (record.status == RecordStatus::Published) impl->snapshot.push_back(record);

    auto& server = impl->server;
    const auto& snapshot = impl->snapshot;

    server.Get("/links", [&snapshot](const httplib::Request&, httplib::Response& res) {
        json urls = json::array();
        for (const auto& record : snapshot) urls.push_back(record.url);
        res.set_content(urls.dump(), "application/json");
    });

    server.Get(R"(/links/(.+))", [&snapshot](const httplib::Request& req, httplib::Response& res) {
        auto hash = parse_hash_segment(req.matches[1]);
        if (!hash) {
            res.status = 400;
            res.set_content("malformed hash\n", "text/plain");
            return;
        }
        const auto* record = find_published(snapshot, *hash);
        if (!record) {
            res.status = 404;
            res.set_content("unknown deep link\n", "text/plain");
            return;
        }
        if (req.get_header_value("Accept").find("text/html") != std::string::npos) {
            res.set_content(descriptor_html(*record), "text/html");
        } else {
            json doc = {{"title", record->index.title},
                        {"abstract", record->index.abstract},
                        {"activity", record->index.activity},
                        {"url", record->url}};
            res.set_content(doc.dump(), "application/json");
        }
    });

    server.Get(R"(/resolve/(.+))", [&snapshot](const httplib::Request& req, httplib::Response& res) {
        auto hash = parse_hash_segment(req.matches[1]);
        if (!hash) {
            res.status = 400;
            res.set_content("malformed hash\n", "text/plain");
            return;
        }
        const auto* record = find_published(snapshot, *hash);
        if (!record) {
            res.status = 404;
            res.set_content("unknown deep link\n", "text/plain");
            return;
        }
        json intents = json::array();
        for (const auto& intent : record->path.intents) intents.push_back(intent_to_json(intent));
        json doc = {{"url", record->url}, {"path", std::move(intents)}};
        res.set_content(doc.dump(), "application/json");
    });

    int bound = port == 0 ? server.bind_to_any_port(host.c_str())
                          : (server.bind_to_port(host.c_str(), port) ? port : -1);
    if (bound <= 0)
        throw Error(ErrorKind::BindFailure, "cannot bind '" + address + "'");
    impl->port = bound;

    impl->worker = std::thread([impl] { impl->server.listen_after_bind(); });
    server.wait_until_ready();
    return handle;
}

} // namespace applink
