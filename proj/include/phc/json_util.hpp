#pragma once

#include <initializer_list>
#include <string>
#include <string_view>

#include <json.hpp>

namespace phc {

using Json = nlohmann::json;

[[noreturn]] void throw_field_error(std::string_view context, std::string_view key);
[[noreturn]] void throw_missing_field(std::string_view context, std::string_view key);

/// Throws ConfigError if obj is not an object or carries a key outside `allowed`.
void require_known_keys(const Json& obj, std::initializer_list<std::string_view> allowed,
                        std::string_view context);

/// Reads obj[key] as T, or returns fallback when absent. Type mismatches throw ConfigError
/// naming the field.
template <typename T>
T get_or(const Json& obj, const char* key, T fallback, std::string_view context) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  try {
    return it->template get<T>();
  } catch (const nlohmann::json::exception&) {
    throw_field_error(context, key);
  }
}

template <typename T>
T get_required(const Json& obj, const char* key, std::string_view context) {
  const auto it = obj.find(key);
  if (it == obj.end()) throw_missing_field(context, key);
  try {
    return it->template get<T>();
  } catch (const nlohmann::json::exception&) {
    throw_field_error(context, key);
  }
}


}  // namespace phc
