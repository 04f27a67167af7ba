#pragma once

#include <string>

#include "json.hpp"
#include "structures/structure.hpp"

namespace ppw {

using json = nlohmann::json;

// Universe entries are labels. A universe made only of decimal numerals keeps
// those numbers as ids; anything else is numbered 0..n-1 in listed order.
json structure_to_json(const Structure& s);
Structure structure_from_json(const json& j);

std::string tuple_to_string(const Structure& s, const Tuple& t);
std::string map_to_string(const Structure& a, const Structure& b, const ElementMap& f);

json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace ppw
