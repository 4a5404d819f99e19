#ifndef APPLINK_CODEC_HPP
#define APPLINK_CODEC_HPP

#include <json.hpp>

#include "applink/app_model.hpp"

namespace applink {

// JSON forms shared by the graph document, the repository store and the
// HTTP path endpoint. Empty optional fields are omitted.

nlohmann::json intent_to_json(const IntentRecord& intent);
IntentRecord intent_from_json(const nlohmann::json& doc);

nlohmann::json content_to_json(const Content& content);
Content content_from_json(const nlohmann::json& doc);

} // namespace applink

#endif // APPLINK_CODEC_HPP
