#pragma once

// JSON encoding for every domain type. Field names are the snake_case names of
// the struct members; timestamps are integer milliseconds since the Unix epoch;
// enums are lowercase strings; absent optionals are omitted.
//
// Decoding failures throw Error{schema_violation} whose subject is the field
// path, e.g. "offered_recipes[1].nutrition.calories".

#include "souschef/core/model.hpp"
#include "souschef/error.hpp"

#include "json.hpp"

#include <optional>
#include <type_traits>
#include <string>
#include <vector>

namespace souschef {

using Json = nlohmann::json;

namespace json_detail {

std::string join_path(const std::string& head, const std::string& tail);

template <class T>
struct is_vector : std::false_type {};
template <class T, class A>
struct is_vector<std::vector<T, A>> : std::true_type {};

template <class T>
T convert(const Json& value, const std::string& path) {
    if constexpr (is_vector<T>::value) {
        if (!value.is_array()) throw Error(ErrorKind::schema_violation, "expected an array", path);
        T out;
        out.reserve(value.size());
        for (std::size_t i = 0; i < value.size(); ++i) {
            out.push_back(convert<typename T::value_type>(value[i],
                                                          path + "[" + std::to_string(i) + "]"));
        }
        return out;
    } else {
        try {
            return value.get<T>();
        } catch (const Error& e) {
            throw Error(e.kind(), e.what(), join_path(path, e.subject()));
        } catch (const Json::exception& e) {
            throw Error(ErrorKind::schema_violation, std::string("wrong type: ") + e.what(), path);
        }
    }
}

} // namespace json_detail

template <class T>
T required_field(const Json& obj, const char* key) {
    if (!obj.is_object()) throw Error(ErrorKind::schema_violation, "expected an object", "");
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) {
        throw Error(ErrorKind::schema_violation, std::string("missing field ") + key, key);
    }
    return json_detail::convert<T>(*it, key);
}

template <class T>
std::optional<T> optional_field(const Json& obj, const char* key) {
    if (!obj.is_object()) throw Error(ErrorKind::schema_violation, "expected an object", "");
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return std::nullopt;
    return json_detail::convert<T>(*it, key);
}

template <class T>
T field_or(const Json& obj, const char* key, T fallback) {
    auto value = optional_field<T>(obj, key);
    return value ? std::move(*value) : std::move(fallback);
}

void to_json(Json& j, const Ingredient& v);
void to_json(Json& j, const NormBox& v);
void from_json(const Json& j, NormBox& v);
void to_json(Json& j, const DetectionLabel& v);
void from_json(const Json& j, DetectionLabel& v);
void to_json(Json& j, const NutritionFacts& v);
void from_json(const Json& j, NutritionFacts& v);
void to_json(Json& j, const RequiredIngredient& v);
void from_json(const Json& j, RequiredIngredient& v);
void to_json(Json& j, const Recipe& v);
void from_json(const Json& j, Recipe& v);
void to_json(Json& j, const UserProfile& v);
void from_json(const Json& j, UserProfile& v);
void to_json(Json& j, const ChatTurn& v);
void from_json(const Json& j, ChatTurn& v);
void to_json(Json& j, const PantrySession& v);
void from_json(const Json& j, PantrySession& v);
void to_json(Json& j, const StepFeedback& v);
void from_json(const Json& j, StepFeedback& v);
void to_json(Json& j, const LikertResponse& v);
void from_json(const Json& j, LikertResponse& v);

Ingredient ingredient_from_json(const Json& j);

} // namespace souschef

namespace nlohmann {

template <>
struct adl_serializer<souschef::Ingredient> {
    static souschef::Ingredient from_json(const json& j) { return souschef::ingredient_from_json(j); }
    static void to_json(json& j, const souschef::Ingredient& v) { souschef::to_json(j, v); }
};

} // namespace nlohmann
