#ifndef APPLINK_SHORTCUT_HPP
#define APPLINK_SHORTCUT_HPP

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "applink/explorer.hpp"

namespace applink {

struct AbstractTransition {
    std::string from;
    std::string to;
    LabelSet labels;

    auto operator<=>(const AbstractTransition&) const = default;
};

// Label-level view of a path: the ordered activity transitions from the
// graph root to a target. The empty path denotes the root itself.
struct AbstractPath {
    std::vector<AbstractTransition> transitions;

    std::size_t length() const { return transitions.size(); }
    std::optional<std::string> endpoint() const;
    std::string canonical_key() const;  // `from>to[label,...]|...`, labels sorted

    bool operator==(const AbstractPath&) const = default;
};

LabelSet path_labels(const AbstractPath& path);

// True iff p1 and p2 end at the same activity and p1's labels are contained
// in p2's (non-strict, so every path can replace itself).
bool can_replace(const AbstractPath& p1, const AbstractPath& p2);

// All vertex-simple paths from the root to v with length <= max_len, ordered
// by length then by canonical key.
std::vector<AbstractPath> enumerate_paths(const NavigationGraph& graph, const std::string& v,
                                          int max_len);

struct ShortcutTable {
    // (target activity, canonical path key) -> shortest replacing path
    std::map<std::pair<std::string, std::string>, AbstractPath> entries;

    bool operator==(const ShortcutTable&) const = default;
};

// Per vertex: sort the enumerated paths ascending (length, then canonical
// key), seed each path's shortcut with itself, then take the first earlier
// path whose labels are contained. The two variants compute identical
// tables; the parallel one distributes vertices across OpenMP threads.
ShortcutTable compute_shortcuts_serial(const NavigationGraph& graph, int max_len);
ShortcutTable compute_shortcuts_parallel(const NavigationGraph& graph, int max_len);
ShortcutTable compute_shortcuts(const NavigationGraph& graph, int max_len);

// Stored shortcut when the key exists, otherwise p itself.
AbstractPath lookup_shortcut(const ShortcutTable& table, const AbstractPath& p);

std::string export_shortcuts(const ShortcutTable& table);
ShortcutTable import_shortcuts(const std::string& document);

} // namespace applink

#endif // APPLINK_SHORTCUT_HPP
