#include "applink/cli.hpp"

#include <atomic>
#include <chrono>
#include <csignal>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "applink/executor.hpp"

namespace applink::cli {

namespace {

std::string slurp(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::MalformedSpec, std::string("cannot open ") + what + " '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw Error(ErrorKind::CorruptStore, "cannot write '" + path + "'");
    out << text;
}

int exit_code_for(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::NotFound:
            return kNotFound;
        case ErrorKind::TargetMismatch:
            return kTargetMismatch;
        case ErrorKind::MalformedSpec:
        case ErrorKind::DanglingReference:
        case ErrorKind::MissingMain:
        case ErrorKind::MalformedGraph:
        case ErrorKind::MalformedTable:
        case ErrorKind::MalformedUrl:
            return kUsage;
        default:
            return kError;
    }
}

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kError;
    }
}

std::atomic<bool> g_interrupted{false};

void handle_signal(int) { g_interrupted.store(true); }

} // namespace

int cmd_explore(const ExploreOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        auto spec = load_app_spec(slurp(options.app, "app spec"));
        auto graph = build_navigation_graph(spec, options.depth, options.op_budget);
        write_file(options.out, export_graph(graph));
        out << "explored " << graph.vertices.size() << " activities, " << graph.edges.size()
            << " edges (depth " << options.depth << ") -> " << options.out << "\n";
        return kOk;
    });
}

int cmd_shortcut(const ShortcutOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        auto graph = import_graph(slurp(options.graph, "graph"));
        auto table = compute_shortcuts(graph, options.max_len);
        write_file(options.out, export_shortcuts(table));
        out << "computed " << table.entries.size() << " shortcut entries (max path length "
            << options.max_len << ") -> " << options.out << "\n";
        return kOk;
    });
}

int cmd_crawl(const CrawlOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        auto spec = load_app_spec(slurp(options.app, "app spec"));

        NavigationGraph graph;
        if (options.graph.empty())
            graph = build_navigation_graph(spec, options.depth, 64);
        else
            graph = import_graph(slurp(options.graph, "graph"));

        ShortcutTable table;
        if (options.shortcuts.empty())
            table = compute_shortcuts(graph, options.max_len);
        else
            table = import_shortcuts(slurp(options.shortcuts, "shortcut table"));

        auto repo = Repository::open(options.repo);
        auto report = run_crawl(spec, table, repo,
                                CrawlBudget{options.max_pages, options.op_budget});
        out << report.to_json() << "\n";
        return kOk;
    });
}

int cmd_serve(const ServeOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        auto repo = Repository::open(options.repo);
        auto handle = serve(repo, options.addr);
        out << "serving " << repo.list().size() << " records on http://" << handle.host() << ":"
            << handle.port() << "\n";
        out.flush();

        std::signal(SIGINT, handle_signal);
        std::signal(SIGTERM, handle_signal);
        while (!g_interrupted.load())
            std::this_thread::sleep_for(std::chrono::milliseconds(50));
        handle.stop();
        out << "shut down\n";
        return kOk;
    });
}

int cmd_exec(const ExecOptions& options, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        auto spec = load_app_spec(slurp(options.app, "app spec"));

        std::set<std::string> selected(options.select.begin(), options.select.end());
        if (selected.empty())
            for (const auto& activity : spec.activities) selected.insert(activity.class_name);
        auto schemas = generate_schemas(spec, selected);

        std::optional<Repository> repo;
        std::optional<RepositoryResolver> local;
        std::optional<ServiceResolver> remote;
        ChainResolver resolver;
        if (!options.repo.empty()) {
            repo = Repository::open(options.repo);
            local.emplace(*repo);
            resolver.add(*local);
        }
        if (!options.service.empty()) {
            remote.emplace(options.service);
            resolver.add(*remote);
        }

        auto result = open_url(spec, schemas, resolver, options.url);
        out << (result.deep_linked ? "deep-linked" : "forwarded") << " -> " << result.activity
            << "\n";
        for (const auto& node : result.content.nodes) {
            auto text = normalize_text(node.text);
            if (!text.empty()) out << text << "\n";
        }
        return kOk;
    });
}

int run(int argc, char** argv) {
    CLI::App app{"deep link toolchain: explore apps, mint deep links, serve and replay them"};
    app.require_subcommand(1);

    ExploreOptions explore;
    auto* explore_cmd = app.add_subcommand("explore", "build the navigation graph of an app");
    explore_cmd->add_option("--app", explore.app, "app spec file")->required();
    explore_cmd->add_option("--depth", explore.depth, "exploration rounds")->check(CLI::NonNegativeNumber);
    explore_cmd->add_option("--op-budget", explore.op_budget, "operations per activity")
        ->check(CLI::PositiveNumber);
    explore_cmd->add_option("--out", explore.out, "graph document to write")->required();

    ShortcutOptions shortcut;
    auto* shortcut_cmd = app.add_subcommand("shortcut", "compute shortest replacing paths");
    shortcut_cmd->add_option("--graph", shortcut.graph, "graph document")->required();
    shortcut_cmd->add_option("--max-len", shortcut.max_len, "path length bound")->check(CLI::PositiveNumber);
    shortcut_cmd->add_option("--out", shortcut.out, "shortcut table to write")->required();

    CrawlOptions crawl;
    auto* crawl_cmd = app.add_subcommand("crawl", "crawl pages and publish deep links");
    crawl_cmd->add_option("--app", crawl.app, "app spec file")->required();
    crawl_cmd->add_option("--graph", crawl.graph, "graph document (computed when omitted)");
    crawl_cmd->add_option("--shortcuts", crawl.shortcuts, "shortcut table (computed when omitted)");
    crawl_cmd->add_option("--repo", crawl.repo, "repository store")->required();
    crawl_cmd->add_option("--max-pages", crawl.max_pages, "page budget")->check(CLI::PositiveNumber);
    crawl_cmd->add_option("--op-budget", crawl.op_budget, "operations per page")->check(CLI::PositiveNumber);
    crawl_cmd->add_option("--depth", crawl.depth, "exploration rounds when --graph is omitted")
        ->check(CLI::NonNegativeNumber);
    crawl_cmd->add_option("--max-len", crawl.max_len, "path length bound when --shortcuts is omitted")
        ->check(CLI::PositiveNumber);

    ServeOptions serve_opts;
    auto* serve_cmd = app.add_subcommand("serve", "publish the repository over HTTP");
    serve_cmd->add_option("--repo", serve_opts.repo, "repository store")->required();
    serve_cmd->add_option("--addr", serve_opts.addr, "host:port to bind");

    ExecOptions exec;
    auto* exec_cmd = app.add_subcommand("exec", "resolve an App URL and open its page");
    exec_cmd->add_option("--app", exec.app, "app spec file")->required();
    exec_cmd->add_option("--repo", exec.repo, "repository store");
    exec_cmd->add_option("--service", exec.service, "service base URL, e.g. http://127.0.0.1:8321");
    exec_cmd->add_option("--select", exec.select, "activity allowlist for deep linking");
    exec_cmd->add_option("url", exec.url, "App URL to open")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsage;
    }

    if (explore_cmd->parsed()) return cmd_explore(explore, std::cout, std::cerr);
    if (shortcut_cmd->parsed()) return cmd_shortcut(shortcut, std::cout, std::cerr);
    if (crawl_cmd->parsed()) return cmd_crawl(crawl, std::cout, std::cerr);
    if (serve_cmd->parsed()) return cmd_serve(serve_opts, std::cout, std::cerr);
    if (exec_cmd->parsed()) return cmd_exec(exec, std::cout, std::cerr);
    return kUsage;
}

} // namespace applink::cli
