#include "drgen/json_io.hpp"

#include "drgen/error.hpp"

namespace drgen {

namespace json_field {

namespace {
std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
}  // namespace

bool has(const Json& obj, const std::string& key) {
    return obj.is_object() && obj.contains(key) && !obj.at(key).is_null();
}

const Json& require(const Json& obj, const std::string& key, const std::string& path) {
    if (!obj.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
    if (!has(obj, key)) throw ConfigError(join(path, key), "missing required field");
    return obj.at(key);
}

double number(const Json& obj, const std::string& key, const std::string& path) {
    const Json& v = require(obj, key, path);
    if (!v.is_number()) throw ConfigError(join(path, key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(join(path, key), "must be finite");
    return d;
}

double number_or(const Json& obj, const std::string& key, const std::string& path, double fallback) {
    return has(obj, key) ? number(obj, key, path) : fallback;
}

std::int64_t integer(const Json& obj, const std::string& key, const std::string& path) {
    const Json& v = require(obj, key, path);
    if (!v.is_number_integer()) throw ConfigError(join(path, key), "expected an integer");
    return v.get<std::int64_t>();
}

std::int64_t integer_or(const Json& obj, const std::string& key, const std::string& path, std::int64_t fallback) {
    return has(obj, key) ? integer(obj, key, path) : fallback;
}

std::uint64_t uint64_or(const Json& obj, const std::string& key, const std::string& path, std::uint64_t fallback) {
    if (!has(obj, key)) return fallback;
    const Json& v = obj.at(key);
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
    throw ConfigError(join(path, key), "expected a non-negative integer");
}

std::string string(const Json& obj, const std::string& key, const std::string& path) {
    const Json& v = require(obj, key, path);
    if (!v.is_string()) throw ConfigError(join(path, key), "expected a string");
    return v.get<std::string>();
}

std::string string_or(const Json& obj, const std::string& key, const std::string& path, const std::string& fallback) {
    return has(obj, key) ? string(obj, key, path) : fallback;
}

bool boolean_or(const Json& obj, const std::string& key, const std::string& path, bool fallback) {
    if (!has(obj, key)) return fallback;
    const Json& v = obj.at(key);
    if (!v.is_boolean()) throw ConfigError(join(path, key), "expected true or false");
    return v.get<bool>();
}

Vec3 vec3_of(const Json& v, const std::string& path) {
    if (!v.is_array() || v.size() != 3) throw ConfigError(path, "expected an array of three numbers");
    Vec3 out;
    for (int k = 0; k < 3; ++k) {
        const Json& e = v.at(static_cast<std::size_t>(k));
        if (!e.is_number() || !std::isfinite(e.get<double>())) throw ConfigError(path, "expected finite numbers");
        out[k] = e.get<double>();
    }
    return out;
}

Vec3 vec3(const Json& obj, const std::string& key, const std::string& path) {
    return vec3_of(require(obj, key, path), join(path, key));
}

Quat quat(const Json& obj, const std::string& key, const std::string& path) {
    const Json& v = require(obj, key, path);
    const std::string where = join(path, key);
    if (!v.is_array() || v.size() != 4) throw ConfigError(where, "expected a quaternion [w, x, y, z]");
    Quat q{v[0].get<double>(), v[1].get<double>(), v[2].get<double>(), v[3].get<double>()};
    const double n = q.norm();
    if (!std::isfinite(n) || std::abs(n - 1.0) > 1e-6) throw ConfigError(where, "quaternion must have unit norm");
    return q;
}

}  // namespace json_field

Json to_json(const Vec3& v) { return Json::array({v.x, v.y, v.z}); }
Json to_json(const Quat& q) { return Json::array({q.w, q.x, q.y, q.z}); }

Json to_json(const Transform& t) {
    return Json{{"translation", to_json(t.translation)}, {"rotation", to_json(t.rotation)}, {"scale", t.scale}};
}

Transform transform_from_json(const Json& obj, const std::string& path) {
    using namespace json_field;
    Transform t;
    t.translation = has(obj, "translation") ? vec3(obj, "translation", path) : Vec3{};
    t.rotation = has(obj, "rotation") ? quat(obj, "rotation", path) : Quat{};
    t.scale = number_or(obj, "scale", path, 1.0);
    if (!(t.scale > 0.0)) throw ConfigError(path.empty() ? "scale" : path + ".scale", "must be > 0");
    return t;
}

std::string dump_canonical(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace drgen
