#ifndef APPLINK_TESTS_FIXTURES_HPP
#define APPLINK_TESTS_FIXTURES_HPP

#include <string>

#include "applink/app_model.hpp"

namespace applink::testing {

inline std::string fixture_path(const std::string& name) {
    return std::string(APPLINK_FIXTURES_DIR) + "/" + name;
}

inline AppSpec load_fixture(const std::string& name) {
    return load_app_spec_file(fixture_path(name));
}

} // namespace applink::testing

#endif
