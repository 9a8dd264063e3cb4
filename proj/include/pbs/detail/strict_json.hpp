#pragma once

#include <set>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "pbs/error.hpp"

namespace pbs::detail {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

// Parses text as JSON, mapping parser failures to ErrorCode::Syntax.
json parse_json(std::string_view text);

std::string json_type_name(const json& value);

// Field reader that remembers which keys were consumed so that finish() can
// reject everything else. Every accessor reports the full field path.
class StrictObject {
public:
    StrictObject(const json& value, std::string path);

    const json& required(const std::string& key);
    const json* optional(const std::string& key);

    double number(const std::string& key);
    std::string string(const std::string& key);
    long long integer(const std::string& key);
    const json& array(const std::string& key);

    std::string path_of(const std::string& key) const;
    void finish() const;

private:
    const json& value_;
    std::string path_;
    std::set<std::string> seen_;
};

double as_number(const json& value, const std::string& path);
std::string as_string(const json& value, const std::string& path);
const json& as_array(const json& value, const std::string& path);

}  // namespace pbs::detail
