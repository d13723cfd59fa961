#pragma once

#include <initializer_list>
#include <string>

#include <json.hpp>

#include "radarmap/errors.hpp"

namespace radarmap {

// Ordered JSON keeps key order stable so serialized artifacts are
// byte-reproducible across runs.
using Json = nlohmann::ordered_json;

namespace jsonutil {

// Rejects keys outside `allowed`. Configs are strict: a typo should fail
// loudly instead of silently falling back to a default.
inline void require_keys_subset(const Json& obj, std::initializer_list<const char*> allowed,
                                const std::string& context) {
    if (!obj.is_object()) {
        throw ConfigError(context + ": expected a JSON object");
    }
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw ConfigError(context + ": unknown key \"" + item.key() + "\"");
        }
    }
}

inline const Json& require(const Json& obj, const std::string& key, const std::string& context) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ConfigError(context + ": missing key \"" + key + "\"");
    }
    return *it;
}

template <typename T>
T get_or(const Json& obj, const std::string& key, T fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    return it->get<T>();
}

}  // namespace jsonutil
}  // namespace radarmap
