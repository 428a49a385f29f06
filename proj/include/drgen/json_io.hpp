#pragma once

#include <string>

#include "json.hpp"

#include "drgen/math.hpp"

namespace drgen {

using Json = nlohmann::json;

/// Field accessors that raise ConfigError with a dotted field path.
namespace json_field {

const Json& require(const Json& obj, const std::string& key, const std::string& path);
bool has(const Json& obj, const std::string& key);

double number(const Json& obj, const std::string& key, const std::string& path);
double number_or(const Json& obj, const std::string& key, const std::string& path, double fallback);
std::int64_t integer(const Json& obj, const std::string& key, const std::string& path);
std::int64_t integer_or(const Json& obj, const std::string& key, const std::string& path, std::int64_t fallback);
std::uint64_t uint64_or(const Json& obj, const std::string& key, const std::string& path, std::uint64_t fallback);
std::string string(const Json& obj, const std::string& key, const std::string& path);
std::string string_or(const Json& obj, const std::string& key, const std::string& path, const std::string& fallback);
bool boolean_or(const Json& obj, const std::string& key, const std::string& path, bool fallback);
Vec3 vec3(const Json& obj, const std::string& key, const std::string& path);
Vec3 vec3_of(const Json& value, const std::string& path);
Quat quat(const Json& obj, const std::string& key, const std::string& path);

}  // namespace json_field

Json to_json(const Vec3& v);
Json to_json(const Quat& q);
Json to_json(const Transform& t);
Transform transform_from_json(const Json& obj, const std::string& path);

/// Canonical serialization used for digests and on-disk artifacts:
/// sorted keys, two-space indent, trailing newline.
std::string dump_canonical(const Json& j);

}  // namespace drgen
