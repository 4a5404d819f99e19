#ifndef APPLINK_APP_MODEL_HPP
#define APPLINK_APP_MODEL_HPP

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "applink/errors.hpp"

namespace applink {

// Scalar payload of an intent extra. Object-valued extras are modeled as
// opaque string tokens.
using ExtraValue = std::variant<std::string, std::int64_t, bool>;

std::string extra_value_to_string(const ExtraValue& value);

struct ComponentRef {
    std::string package;
    std::string class_name;

    auto operator<=>(const ComponentRef&) const = default;
};

struct IntentRecord {
    std::optional<ComponentRef> component;
    std::optional<std::string> action;
    std::set<std::string> categories;
    std::optional<std::string> data;
    std::map<std::string, ExtraValue> extras;

    bool operator==(const IntentRecord&) const = default;
};

// Canonical label projection of an intent: `action:<v>`, `category:<v>`,
// `data:<scheme>://<host>` and `extra:<key>` strings. Extras contribute key
// names only, so intents that differ in extra values share a label set.
using LabelSet = std::set<std::string>;

LabelSet label_set(const IntentRecord& intent);

// Single canonical record line for one intent:
// `component|action|categories|data|extras` with sorted categories and
// extras and separator characters escaped. Injective on distinct intents.
std::string canonical_intent_record(const IntentRecord& intent);

enum class NodeKind { Text, Button, ListItem, ImageCaption };

const char* node_kind_name(NodeKind kind);
NodeKind node_kind_from_name(std::string_view name);

struct ContentNode {
    std::string text;
    int size = 1;
    std::string color = "#000000";
    int x = 0;
    int y = 0;
    NodeKind kind = NodeKind::Text;
};

// Collapses whitespace runs to single spaces and trims the ends.
std::string normalize_text(std::string_view text);

struct Content {
    std::vector<ContentNode> nodes;

    // State identity is the ordered (normalized-text, kind) sequence of the
    // nodes with non-empty normalized text; style attributes are ignored.
    std::vector<std::pair<std::string, NodeKind>> identity() const;

    friend bool operator==(const Content& a, const Content& b) {
        return a.identity() == b.identity();
    }
};

struct UserOperation {
    enum class Kind { Click, Scroll };
    enum class ScrollDir { Up, Down };

    Kind kind = Kind::Click;
    int target = 0;                             // click: node index
    ScrollDir direction = ScrollDir::Down;      // scroll

    std::string to_string() const;

    friend bool operator==(const UserOperation& a, const UserOperation& b) {
        if (a.kind != b.kind) return false;
        return a.kind == Kind::Click ? a.target == b.target
                                     : a.direction == b.direction;
    }
    friend bool operator<(const UserOperation& a, const UserOperation& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        return a.kind == Kind::Click ? a.target < b.target
                                     : a.direction < b.direction;
    }
};

// Declared effect of a user operation. Transition templates may reference a
// value carried by the enclosing instance with the string form
// `$match.<key>`.
struct TransitionTemplate {
    std::string activity;
    std::optional<std::string> action;
    std::set<std::string> categories;
    std::optional<std::string> data;
    std::map<std::string, ExtraValue> extras;
};

struct Effect {
    enum class Type { Transition, GoToState, NoOp };

    Type type = Type::NoOp;
    TransitionTemplate intent;  // Transition
    std::string state_id;       // GoToState
};

struct OperationSpec {
    UserOperation op;
    Effect effect;
};

struct PageStateSpec {
    std::string state_id;
    Content content;
    std::vector<OperationSpec> operations;
};

struct InstanceSpec {
    std::map<std::string, ExtraValue> match;  // empty == default instance
    std::string initial_state;
    std::vector<PageStateSpec> states;

    bool is_default() const { return match.empty(); }
    const PageStateSpec* find_state(const std::string& id) const;
};

struct ActivitySpec {
    std::string class_name;
    std::vector<InstanceSpec> instances;

    const InstanceSpec& default_instance() const;
};

struct AppSpec {
    std::string package_name;
    std::string main_activity;
    std::vector<ActivitySpec> activities;

    const ActivitySpec* find_activity(const std::string& class_name) const;
};

AppSpec load_app_spec(std::string_view document);
AppSpec load_app_spec_file(const std::filesystem::path& path);

struct ObservedEvent {
    enum class Type { Transitioned, ContentChanged, NoChange };

    Type type = Type::NoChange;
    std::string to_activity;  // Transitioned
    IntentRecord intent;      // Transitioned
    Content content;          // ContentChanged
};

// The launch intent: component (package, main activity), no extras.
IntentRecord make_launch_intent(const AppSpec& spec);

// Deterministic stand-in for an instrumented app run. Single-threaded, not
// shareable; independent sessions on the same immutable spec are safe.
class DriverSession {
public:
    const std::string& current_activity() const { return activity_->class_name; }
    std::vector<UserOperation> operations() const;
    Content content() const { return state_->content; }
    const std::vector<IntentRecord>& history() const { return history_; }

    ObservedEvent perform(const UserOperation& op);
    ObservedEvent send_intent(const IntentRecord& intent);

private:
    friend DriverSession launch(const AppSpec& spec);
    explicit DriverSession(const AppSpec& spec);

    void jump(const ActivitySpec& activity, const IntentRecord& intent);
    IntentRecord instantiate(const TransitionTemplate& tpl) const;

    const AppSpec* spec_;
    const ActivitySpec* activity_ = nullptr;
    const InstanceSpec* instance_ = nullptr;
    const PageStateSpec* state_ = nullptr;
    std::vector<IntentRecord> history_;
};

// Starts a session at the default instance's initial state of the main
// activity; the history holds exactly the launch intent. The session keeps a
// reference to the AppSpec, so temporaries are rejected.
DriverSession launch(const AppSpec& spec);
DriverSession launch(AppSpec&&) = delete;

} // namespace applink

#endif // APPLINK_APP_MODEL_HPP
