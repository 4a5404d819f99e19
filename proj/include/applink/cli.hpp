#ifndef APPLINK_CLI_HPP
#define APPLINK_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace applink::cli {

// Stable exit codes for scripting.
constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kUsage = 2;
constexpr int kNotFound = 3;
constexpr int kTargetMismatch = 4;

struct ExploreOptions {
    std::string app;
    std::string out;
    int depth = 4;
    int op_budget = 64;
};

struct ShortcutOptions {
    std::string graph;
    std::string out;
    int max_len = 6;
};

struct CrawlOptions {
    std::string app;
    std::string graph;      // optional: recomputed when empty
    std::string shortcuts;  // optional: recomputed when empty
    std::string repo;
    int max_pages = 100;
    int op_budget = 128;
    int depth = 4;          // for on-the-fly graph construction
    int max_len = 6;        // for on-the-fly shortcut computation
};

struct ServeOptions {
    std::string repo;
    std::string addr = "127.0.0.1:8321";
};

struct ExecOptions {
    std::string app;
    std::string repo;       // optional
    std::string service;    // optional base URL
    std::string url;
    std::vector<std::string> select;  // activity allowlist; empty = all
};

int cmd_explore(const ExploreOptions& options, std::ostream& out, std::ostream& err);
int cmd_shortcut(const ShortcutOptions& options, std::ostream& out, std::ostream& err);
int cmd_crawl(const CrawlOptions& options, std::ostream& out, std::ostream& err);
int cmd_serve(const ServeOptions& options, std::ostream& out, std::ostream& err);
int cmd_exec(const ExecOptions& options, std::ostream& out, std::ostream& err);

int run(int argc, char** argv);

} // namespace applink::cli

#endif // APPLINK_CLI_HPP
