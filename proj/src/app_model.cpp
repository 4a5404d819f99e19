#include "applink/app_model.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace applink {

using nlohmann::json;

const char* error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::MalformedSpec: return "MalformedSpec";
        case ErrorKind::DanglingReference: return "DanglingReference";
        case ErrorKind::MissingMain: return "MissingMain";
        case ErrorKind::UnknownOperation: return "UnknownOperation";
        case ErrorKind::NoHandler: return "NoHandler";
        case ErrorKind::AmbiguousInstance: return "AmbiguousInstance";
        case ErrorKind::MalformedGraph: return "MalformedGraph";
        case ErrorKind::MalformedTable: return "MalformedTable";
        case ErrorKind::EndpointMismatch: return "EndpointMismatch";
        case ErrorKind::EmptyPath: return "EmptyPath";
        case ErrorKind::UnboundLabel: return "UnboundLabel";
        case ErrorKind::MalformedUrl: return "MalformedUrl";
        case ErrorKind::PathReplayFailed: return "PathReplayFailed";
        case ErrorKind::RecoveryDiverged: return "RecoveryDiverged";
        case ErrorKind::UnknownActivity: return "UnknownActivity";
        case ErrorKind::NotFound: return "NotFound";
        case ErrorKind::TargetMismatch: return "TargetMismatch";
        case ErrorKind::CorruptStore: return "CorruptStore";
        case ErrorKind::BindFailure: return "BindFailure";
    }
    return "Error";
}

std::string extra_value_to_string(const ExtraValue& value) {
    if (const auto* s = std::get_if<std::string>(&value)) return *s;
    if (const auto* i = std::get_if<std::int64_t>(&value)) return std::to_string(*i);
    return std::get<bool>(value) ? "true" : "false";
}

namespace {

// scheme://host prefix of a URI; the path and query do not participate in
// the label projection.
std::string data_label_value(const std::string& uri) {
    auto pos = uri.find("://");
    if (pos == std::string::npos) return uri;
    auto host_end = uri.find_first_of("/?#", pos + 3);
    return uri.substr(0, host_end == std::string::npos ? uri.size() : host_end);
}

std::string escape_field(std::string_view field) {
    std::string out;
    out.reserve(field.size());
    for (char c : field) {
        if (c == '\\' || c == '|' || c == ',' || c == '=' || c == '\n') out.push_back('\\');
        out.push_back(c);
    }
    return out;
}

// Type tag keeps e.g. the string "1" distinct from the integer 1.
std::string escape_extra_value(const ExtraValue& value) {
    if (const auto* s = std::get_if<std::string>(&value)) return "s:" + escape_field(*s);
    if (const auto* i = std::get_if<std::int64_t>(&value)) return "i:" + std::to_string(*i);
    return std::get<bool>(value) ? "b:true" : "b:false";
}

} // namespace

LabelSet label_set(const IntentRecord& intent) {
    LabelSet labels;
    if (intent.action) labels.insert("action:" + *intent.action);
    for (const auto& c : intent.categories) labels.insert("category:" + c);
    if (intent.data) labels.insert("data:" + data_label_value(*intent.data));
    for (const auto& [key, value] : intent.extras) labels.insert("extra:" + key);
    return labels;
}

std::string canonical_intent_record(const IntentRecord& intent) {
    std::string out;
    if (intent.component)
        out += escape_field(intent.component->package) + "/" + escape_field(intent.component->class_name);
    out += '|';
    if (intent.action) out += escape_field(*intent.action);
    out += '|';
    bool first = true;
    for (const auto& c : intent.categories) {
        if (!first) out += ',';
        out += escape_field(c);
        first = false;
    }
    out += '|';
    if (intent.data) out += escape_field(*intent.data);
    out += '|';
    first = true;
    for (const auto& [key, value] : intent.extras) {
        if (!first) out += ',';
        out += escape_field(key) + "=" + escape_extra_value(value);
        first = false;
    }
    return out;
}

const char* node_kind_name(NodeKind kind) {
    switch (kind) {
        case NodeKind::Text: return "text";
        case NodeKind::Button: return "button";
        case NodeKind::ListItem: return "list-item";
        case NodeKind::ImageCaption: return "image-caption";
    }
    return "text";
}

NodeKind node_kind_from_name(std::string_view name) {
    if (name == "text") return NodeKind::Text;
    if (name == "button") return NodeKind::Button;
    if (name == "list-item") return NodeKind::ListItem;
    if (name == "image-caption") return NodeKind::ImageCaption;
    throw Error(ErrorKind::MalformedSpec, "unknown node kind '" + std::string(name) + "'");
}

std::string normalize_text(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool in_space = true;  // leading whitespace is dropped
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            in_space = true;
            continue;
        }
        if (in_space && !out.empty()) out.push_back(' ');
        in_space = false;
        out.push_back(c);
    }
    return out;
}

std::vector<std::pair<std::string, NodeKind>> Content::identity() const {
    std::vector<std::pair<std::string, NodeKind>> seq;
    seq.reserve(nodes.size());
    for (const auto& node : nodes) {
        auto text = normalize_text(node.text);
        if (!text.empty()) seq.emplace_back(std::move(text), node.kind);
    }
    return seq;
}

std::string UserOperation::to_string() const {
    if (kind == Kind::Click) return "click:" + std::to_string(target);
    return direction == ScrollDir::Up ? "scroll:up" : "scroll:down";
}

const PageStateSpec* InstanceSpec::find_state(const std::string& id) const {
    for (const auto& state : states)
        if (state.state_id == id) return &state;
    return nullptr;
}

const InstanceSpec& ActivitySpec::default_instance() const {
    for (const auto& inst : instances)
        if (inst.is_default()) return inst;
    throw Error(ErrorKind::MalformedSpec, class_name + " has no default instance");
}

const ActivitySpec* AppSpec::find_activity(const std::string& class_name) const {
    for (const auto& activity : activities)
        if (activity.class_name == class_name) return &activity;
    return nullptr;
}

namespace {

ExtraValue parse_extra_value(const json& value, const std::string& where) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_boolean()) return value.get<bool>();
    if (value.is_number_integer()) return value.get<std::int64_t>();
    throw Error(ErrorKind::MalformedSpec, where + ": extras values must be string, integer or boolean");
}

std::map<std::string, ExtraValue> parse_extras(const json& obj, const std::string& where) {
    std::map<std::string, ExtraValue> extras;
    for (const auto& [key, value] : obj.items()) {
        if (key.empty())
            throw Error(ErrorKind::MalformedSpec, where + ": empty extras key");
        extras.emplace(key, parse_extra_value(value, where));
    }
    return extras;
}

ContentNode parse_content_node(const json& node, const std::string& where) {
    ContentNode out;
    out.text = node.at("text").get<std::string>();
    out.size = node.value("size", 1);
    if (out.size <= 0)
        throw Error(ErrorKind::MalformedSpec, where + ": node size must be positive");
    out.color = node.value("color", "#000000");
    if (node.contains("pos")) {
        out.x = node.at("pos").at(0).get<int>();
        out.y = node.at("pos").at(1).get<int>();
    }
    out.kind = node_kind_from_name(node.value("kind", "text"));
    return out;
}

OperationSpec parse_operation(const json& op, const std::string& where, std::size_t node_count) {
    OperationSpec out;
    auto kind = op.at("kind").get<std::string>();
    if (kind == "click") {
        out.op.kind = UserOperation::Kind::Click;
        out.op.target = op.at("target").get<int>();
        if (out.op.target < 0 || static_cast<std::size_t>(out.op.target) >= node_count)
            throw Error(ErrorKind::MalformedSpec,
                        where + ": click target " + std::to_string(out.op.target) + " out of range");
    } else if (kind == "scroll") {
        out.op.kind = UserOperation::Kind::Scroll;
        auto dir = op.at("target").get<std::string>();
        if (dir == "up") out.op.direction = UserOperation::ScrollDir::Up;
        else if (dir == "down") out.op.direction = UserOperation::ScrollDir::Down;
        else throw Error(ErrorKind::MalformedSpec, where + ": scroll direction must be up or down");
    } else {
        throw Error(ErrorKind::MalformedSpec, where + ": unknown operation kind '" + kind + "'");
    }

    const auto& effect = op.at("effect");
    auto type = effect.at("type").get<std::string>();
    if (type == "noop") {
        out.effect.type = Effect::Type::NoOp;
    } else if (type == "goto") {
        out.effect.type = Effect::Type::GoToState;
        out.effect.state_id = effect.at("state").get<std::string>();
    } else if (type == "transition") {
        out.effect.type = Effect::Type::Transition;
        const auto& intent = effect.at("intent");
        out.effect.intent.activity = intent.at("activity").get<std::string>();
        if (intent.contains("action")) out.effect.intent.action = intent.at("action").get<std::string>();
        if (intent.contains("categories"))
            for (const auto& c : intent.at("categories")) out.effect.intent.categories.insert(c.get<std::string>());
        if (intent.contains("data")) out.effect.intent.data = intent.at("data").get<std::string>();
        if (intent.contains("extras")) out.effect.intent.extras = parse_extras(intent.at("extras"), where);
    } else {
        throw Error(ErrorKind::MalformedSpec, where + ": unknown effect type '" + type + "'");
    }
    return out;
}

void validate_spec(const AppSpec& spec) {
    if (!spec.find_activity(spec.main_activity))
        throw Error(ErrorKind::MissingMain, "main activity '" + spec.main_activity + "' is not declared");

    for (const auto& activity : spec.activities) {
        int defaults = 0;
        for (const auto& inst : activity.instances)
            if (inst.is_default()) ++defaults;
        if (defaults != 1)
            throw Error(ErrorKind::MalformedSpec,
                        activity.class_name + " must declare exactly one default instance, has " +
                            std::to_string(defaults));

        for (const auto& inst : activity.instances) {
            std::set<std::string> ids;
            for (const auto& state : inst.states)
                if (!ids.insert(state.state_id).second)
                    throw Error(ErrorKind::MalformedSpec,
                                activity.class_name + ": duplicate state id '" + state.state_id + "'");
            if (!inst.find_state(inst.initial_state))
                throw Error(ErrorKind::DanglingReference,
                            activity.class_name + ": initial state '" + inst.initial_state + "' not declared");

            for (const auto& state : inst.states) {
                for (const auto& op : state.operations) {
                    const auto& effect = op.effect;
                    if (effect.type == Effect::Type::GoToState && !inst.find_state(effect.state_id))
                        throw Error(ErrorKind::DanglingReference,
                                    activity.class_name + "/" + state.state_id + ": unknown state '" +
                                        effect.state_id + "'");
                    if (effect.type == Effect::Type::Transition) {
                        if (!spec.find_activity(effect.intent.activity))
                            throw Error(ErrorKind::DanglingReference,
                                        activity.class_name + "/" + state.state_id + ": unknown activity '" +
                                            effect.intent.activity + "'");
                        for (const auto& [key, value] : effect.intent.extras) {
                            const auto* s = std::get_if<std::string>(&value);
                            if (s && s->rfind("$match.", 0) == 0 && !inst.match.count(s->substr(7)))
                                throw Error(ErrorKind::MalformedSpec,
                                            activity.class_name + "/" + state.state_id + ": template value '" +
                                                *s + "' references a key the instance does not carry");
                        }
                    }
                }
            }
        }
    }
}

} // namespace

AppSpec load_app_spec(std::string_view document) {
    json doc;
    try {
        doc = json::parse(document);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::MalformedSpec, e.what());
    }

    AppSpec spec;
    try {
        spec.package_name = doc.at("package").get<std::string>();
        spec.main_activity = doc.at("main").get<std::string>();
        for (const auto& act : doc.at("activities")) {
            ActivitySpec activity;
            activity.class_name = act.at("class").get<std::string>();
            for (const auto& inst : act.at("instances")) {
                InstanceSpec instance;
                instance.match = parse_extras(inst.value("match", json::object()), activity.class_name);
                instance.initial_state = inst.at("initial").get<std::string>();
                for (const auto& st : inst.at("states")) {
                    PageStateSpec state;
                    state.state_id = st.at("id").get<std::string>();
                    const auto where = activity.class_name + "/" + state.state_id;
                    for (const auto& node : st.value("content", json::array()))
                        state.content.nodes.push_back(parse_content_node(node, where));
                    for (const auto& op : st.value("ops", json::array()))
                        state.operations.push_back(parse_operation(op, where, state.content.nodes.size()));
                    instance.states.push_back(std::move(state));
                }
                activity.instances.push_back(std::move(instance));
            }
            spec.activities.push_back(std::move(activity));
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::MalformedSpec, e.what());
    }

    validate_spec(spec);
    return spec;
}

AppSpec load_app_spec_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::MalformedSpec, "cannot open spec file '" + path.string() + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    return load_app_spec(buffer.str());
}

IntentRecord make_launch_intent(const AppSpec& spec) {
    IntentRecord intent;
    intent.component = ComponentRef{spec.package_name, spec.main_activity};
    return intent;
}

DriverSession launch(const AppSpec& spec) {
    return DriverSession(spec);
}

DriverSession::DriverSession(const AppSpec& spec) : spec_(&spec) {
    auto intent = make_launch_intent(spec);
    jump(*spec.find_activity(spec.main_activity), intent);
    history_.push_back(std::move(intent));
}

std::vector<UserOperation> DriverSession::operations() const {
    std::vector<UserOperation> ops;
    ops.reserve(state_->operations.size());
    for (const auto& op : state_->operations) ops.push_back(op.op);
    return ops;
}

void DriverSession::jump(const ActivitySpec& activity, const IntentRecord& intent) {
    // Instance selection: the unique non-default instance whose match pattern
    // is a sub-map of the intent's extras, else the default.
    const InstanceSpec* selected = nullptr;
    for (const auto& inst : activity.instances) {
        if (inst.is_default()) continue;
        bool matches = true;
        for (const auto& [key, value] : inst.match) {
            auto it = intent.extras.find(key);
            if (it == intent.extras.end() || it->second != value) {
                matches = false;
                break;
            }
        }
        if (!matches) continue;
        if (selected)
            throw Error(ErrorKind::AmbiguousInstance,
                        activity.class_name + ": more than one instance pattern matches the intent");
        selected = &inst;
    }
    if (!selected) selected = &activity.default_instance();

    activity_ = &activity;
    instance_ = selected;
    state_ = selected->find_state(selected->initial_state);
}

IntentRecord DriverSession::instantiate(const TransitionTemplate& tpl) const {
    IntentRecord intent;
    intent.component = ComponentRef{spec_->package_name, tpl.activity};
    intent.action = tpl.action;
    intent.categories = tpl.categories;
    intent.data = tpl.data;
    for (const auto& [key, value] : tpl.extras) {
        const auto* s = std::get_if<std::string>(&value);
        if (s && s->rfind("$match.", 0) == 0)
            intent.extras.emplace(key, instance_->match.at(s->substr(7)));
        else
            intent.extras.emplace(key, value);
    }
    return intent;
}

ObservedEvent DriverSession::perform(const UserOperation& op) {
    const OperationSpec* declared = nullptr;
    for (const auto& candidate : state_->operations) {
        if (candidate.op == op) {
            declared = &candidate;
            break;
        }
    }
    if (!declared)
        throw Error(ErrorKind::UnknownOperation,
                    op.to_string() + " is not declared on " + activity_->class_name + "/" + state_->state_id);

    ObservedEvent event;
    switch (declared->effect.type) {
        case Effect::Type::NoOp:
            event.type = ObservedEvent::Type::NoChange;
            break;
        case Effect::Type::GoToState: {
            if (declared->effect.state_id == state_->state_id) {
                event.type = ObservedEvent::Type::NoChange;
                break;
            }
            state_ = instance_->find_state(declared->effect.state_id);
            event.type = ObservedEvent::Type::ContentChanged;
            event.content = state_->content;
            break;
        }
        case Effect::Type::Transition: {
            auto intent = instantiate(declared->effect.intent);
            jump(*spec_->find_activity(declared->effect.intent.activity), intent);
            history_.push_back(intent);
            event.type = ObservedEvent::Type::Transitioned;
            event.to_activity = declared->effect.intent.activity;
            event.intent = std::move(intent);
            break;
        }
    }
    return event;
}

ObservedEvent DriverSession::send_intent(const IntentRecord& intent) {
    if (!intent.component)
        throw Error(ErrorKind::NoHandler, "intent has no component");
    if (intent.component->package != spec_->package_name)
        throw Error(ErrorKind::NoHandler, "no handler for package '" + intent.component->package + "'");
    const auto* activity = spec_->find_activity(intent.component->class_name);
    if (!activity)
        throw Error(ErrorKind::NoHandler, "no activity '" + intent.component->class_name + "'");

    jump(*activity, intent);
    history_.push_back(intent);

    ObservedEvent event;
    event.type = ObservedEvent::Type::Transitioned;
    event.to_activity = activity->class_name;
    event.intent = intent;
    return event;
}

} // namespace applink
