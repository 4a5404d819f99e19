#ifndef APPLINK_REPOSITORY_HPP
#define APPLINK_REPOSITORY_HPP

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "applink/synthesizer.hpp"

namespace applink {

enum class RecordStatus { Pending, Published };

struct RepoRecord {
    std::string url;  // rendered App URL, unique within a repository
    std::string host;
    std::string target;
    std::uint64_t hash = 0;
    ConcretePath path;
    Index index;
    std::string created_at;  // UTC, RFC 3339
    RecordStatus status = RecordStatus::Pending;

    std::string to_json_line() const;
    static RepoRecord from_json_line(const std::string& line);
};

enum class PutOutcome { Inserted, Replaced, IgnoredPublished };

// Append-oriented line-delimited JSON store. Single writer; published
// records are immutable.
class Repository {
public:
    // Loads all records; a missing file yields an empty repository.
    // Unparseable lines raise CorruptStore with the line number.
    static Repository open(const std::filesystem::path& location);

    PutOutcome put(const RepoRecord& record);
    std::optional<RepoRecord> get_by_hash(std::uint64_t hash) const;
    std::optional<RepoRecord> get_by_url(const std::string& url) const;
    const std::vector<RepoRecord>& list() const { return records_; }

    // Oldest pending record not yet handed out; marks it in-progress for the
    // lifetime of this handle.
    std::optional<RepoRecord> next_pending();

    // Rewrites the store with one line per live record.
    void compact();

    const std::filesystem::path& location() const { return location_; }

    static std::string now_utc();

private:
    Repository() = default;

    void append_line(const std::string& line);

    std::filesystem::path location_;
    std::vector<RepoRecord> records_;            // insertion order
    std::set<std::string> in_progress_;          // urls handed out by next_pending
    std::size_t file_lines_ = 0;
};

// Running HTTP view over an immutable snapshot of the published records.
class ServiceHandle {
public:
    ~ServiceHandle();
    ServiceHandle(ServiceHandle&&) noexcept;
    ServiceHandle& operator=(ServiceHandle&&) noexcept;

    const std::string& host() const;
    int port() const;
    std::string base_url() const;

    void stop();

private:
    friend ServiceHandle serve(const Repository& repo, const std::string& address);
    ServiceHandle();

    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Binds `host:port` (port 0 picks a free port) and serves:
//   GET /links           -> JSON array of published URLs
//   GET /links/{hash}    -> descriptor, JSON or HTML per the Accept header
//   GET /resolve/{hash}  -> concrete path document for executors
// Unknown hashes give 404, malformed hashes 400. Throws BindFailure.
ServiceHandle serve(const Repository& repo, const std::string& address);

} // namespace applink

#endif // APPLINK_REPOSITORY_HPP
