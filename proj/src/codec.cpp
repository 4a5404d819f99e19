#include "applink/codec.hpp"

namespace applink {

using nlohmann::json;

namespace {

json extra_value_to_json(const ExtraValue& value) {
    if (const auto* s = std::get_if<std::string>(&value)) return *s;
    if (const auto* i = std::get_if<std::int64_t>(&value)) return *i;
    return std::get<bool>(value);
}

ExtraValue extra_value_from_json(const json& value) {
    if (value.is_string()) return value.get<std::string>();
    if (value.is_boolean()) return value.get<bool>();
    if (value.is_number_integer()) return value.get<std::int64_t>();
    throw json::type_error::create(302, "extras value must be string, integer or boolean", &value);
}

} // namespace

json intent_to_json(const IntentRecord& intent) {
    json doc = json::object();
    if (intent.component)
        doc["component"] = {{"package", intent.component->package},
                            {"class", intent.component->class_name}};
    if (intent.action) doc["action"] = *intent.action;
    if (!intent.categories.empty()) doc["categories"] = intent.categories;
    if (intent.data) doc["data"] = *intent.data;
    if (!intent.extras.empty()) {
        json extras = json::object();
        for (const auto& [key, value] : intent.extras) extras[key] = extra_value_to_json(value);
        doc["extras"] = std::move(extras);
    }
    return doc;
}

IntentRecord intent_from_json(const json& doc) {
    IntentRecord intent;
    if (doc.contains("component"))
        intent.component = ComponentRef{doc.at("component").at("package").get<std::string>(),
                                        doc.at("component").at("class").get<std::string>()};
    if (doc.contains("action")) intent.action = doc.at("action").get<std::string>();
    if (doc.contains("categories"))
        for (const auto& c : doc.at("categories")) intent.categories.insert(c.get<std::string>());
    if (doc.contains("data")) intent.data = doc.at("data").get<std::string>();
    if (doc.contains("extras"))
        for (const auto& [key, value] : doc.at("extras").items())
            intent.extras.emplace(key, extra_value_from_json(value));
    return intent;
}

json content_to_json(const Content& content) {
    json nodes = json::array();
    for (const auto& node : content.nodes) {
        nodes.push_back({{"text", node.text},
                         {"size", node.size},
                         {"color", node.color},
                         {"pos", {node.x, node.y}},
                         {"kind", node_kind_name(node.kind)}});
    }
    return nodes;
}

Content content_from_json(const json& doc) {
    Content content;
    for (const auto& node : doc) {
        ContentNode out;
        out.text = node.at("text").get<std::string>();
        out.size = node.value("size", 1);
        out.color = node.value("color", "#000000");
        if (node.contains("pos")) {
            out.x = node.at("pos").at(0).get<int>();
            out.y = node.at("pos").at(1).get<int>();
        }
        out.kind = node_kind_from_name(node.value("kind", "text"));
        content.nodes.push_back(std::move(out));
    }
    return content;
}

} // namespace applink
