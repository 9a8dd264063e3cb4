#include "pbs/detail/strict_json.hpp"

#include <cmath>

namespace pbs::detail {

json parse_json(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::Syntax, e.what());
    }
}

std::string json_type_name(const json& value) {
    return value.type_name();
}

StrictObject::StrictObject(const json& value, std::string path) : value_(value), path_(std::move(path)) {
    if (!value_.is_object()) {
        throw Error(ErrorCode::TypeMismatch, "expected object, found " + json_type_name(value_),
                    path_.empty() ? "$" : path_);
    }
}

std::string StrictObject::path_of(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
}

const json& StrictObject::required(const std::string& key) {
    auto it = value_.find(key);
    if (it == value_.end()) {
        throw Error(ErrorCode::MissingField, "required field is absent", path_of(key));
    }
    seen_.insert(key);
    return *it;
}

const json* StrictObject::optional(const std::string& key) {
    auto it = value_.find(key);
    if (it == value_.end()) {
        return nullptr;
    }
    seen_.insert(key);
    return &*it;
}

double StrictObject::number(const std::string& key) {
    return as_number(required(key), path_of(key));
}

std::string StrictObject::string(const std::string& key) {
    return as_string(required(key), path_of(key));
}

long long StrictObject::integer(const std::string& key) {
    const json& v = required(key);
    if (v.is_number_integer()) {
        return v.get<long long>();
    }
    if (v.is_number_float()) {
        double d = v.get<double>();
        if (std::floor(d) == d) {
            return static_cast<long long>(d);
        }
    }
    throw Error(ErrorCode::TypeMismatch, "expected integer, found " + json_type_name(v), path_of(key));
}

const json& StrictObject::array(const std::string& key) {
    return as_array(required(key), path_of(key));
}

void StrictObject::finish() const {
    for (auto it = value_.begin(); it != value_.end(); ++it) {
        if (!seen_.count(it.key())) {
            throw Error(ErrorCode::UnknownField, "field is not part of the schema", path_of(it.key()));
        }
    }
}

double as_number(const json& value, const std::string& path) {
    if (!value.is_number()) {
        throw Error(ErrorCode::TypeMismatch, "expected number, found " + json_type_name(value), path);
    }
    return value.get<double>();
}

std::string as_string(const json& value, const std::string& path) {
    if (!value.is_string()) {
        throw Error(ErrorCode::TypeMismatch, "expected string, found " + json_type_name(value), path);
    }
    return value.get<std::string>();
}

const json& as_array(const json& value, const std::string& path) {
    if (!value.is_array()) {
        throw Error(ErrorCode::TypeMismatch, "expected array, found " + json_type_name(value), path);
    }
    return value;
}

}  // namespace pbs::detail
