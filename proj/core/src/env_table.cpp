// Copyright 2026 The gplan Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "gplan/env_table.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <unordered_set>

#include "gplan/error.hpp"
#include "gplan/tokenize.hpp"

namespace gplan {

using nlohmann::json;

double normalize_degrees(double deg) noexcept {
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r -= 360.0;  // fmod of tiny negatives can round up to 360
  return r == 0.0 ? 0.0 : r;   // folds -0.0
}

ObjectTable::ObjectTable(std::vector<ObjectRow> rows) : rows_(std::move(rows)) {
  std::unordered_set<std::string> ids;
  std::size_t agents = 0;
  for (auto& row : rows_) {
    if (row.object_id.empty()) throw Error(ErrorCode::SchemaError, "empty object id");
    if (row.object_type.empty())
      throw Error(ErrorCode::SchemaError, "empty object type for '" + row.object_id + "'");
    if (!ids.insert(row.object_id).second)
      throw Error(ErrorCode::DuplicateId, "object id '" + row.object_id + "' appears twice");
    if (row.object_type == kAgentType) ++agents;
    row.rotation = {normalize_degrees(row.rotation.x), normalize_degrees(row.rotation.y),
                    normalize_degrees(row.rotation.z)};
  }
  if (agents > 1) throw Error(ErrorCode::SchemaError, "more than one Agent row");
  for (const auto& row : rows_) {
    if (!row.parent_receptacle) continue;
    const auto& parent = *row.parent_receptacle;
    if (parent == row.object_id)
      throw Error(ErrorCode::DanglingReceptacle, "'" + parent + "' is its own receptacle");
    if (!ids.count(parent))
      throw Error(ErrorCode::DanglingReceptacle,
                  "'" + row.object_id + "' refers to unknown receptacle '" + parent + "'");
  }
}

const ObjectRow* ObjectTable::find(std::string_view id) const {
  for (const auto& row : rows_)
    if (row.object_id == id) return &row;
  return nullptr;
}

namespace {

const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw Error(ErrorCode::SchemaError, where + ": missing field '" + key + "'");
  return *it;
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) throw Error(ErrorCode::SchemaError, where + ": expected a number");
  return v.get<double>();
}

Vec3 read_vec3(const json& v, const std::string& where) {
  if (!v.is_object()) throw Error(ErrorCode::SchemaError, where + ": expected {x,y,z}");
  for (const auto& [key, _] : v.items())
    if (key != "x" && key != "y" && key != "z")
      throw Error(ErrorCode::SchemaError, where + ": unexpected field '" + key + "'");
  return {number(require(v, "x", where), where + ".x"), number(require(v, "y", where), where + ".y"),
          number(require(v, "z", where), where + ".z")};
}

ObjectRow read_row(const json& v, std::size_t index) {
  std::string where = "objects[" + std::to_string(index) + "]";
  if (!v.is_object()) throw Error(ErrorCode::SchemaError, where + ": expected an object");
  static const std::set<std::string> known{"id",        "type", "position", "rotation",
                                           "parent_receptacle", "properties"};
  for (const auto& [key, _] : v.items())
    if (!known.count(key))
      throw Error(ErrorCode::SchemaError, where + ": unexpected field '" + key + "'");

  ObjectRow row;
  const auto& id = require(v, "id", where);
  const auto& type = require(v, "type", where);
  if (!id.is_string() || !type.is_string())
    throw Error(ErrorCode::SchemaError, where + ": id and type must be strings");
  row.object_id = id.get<std::string>();
  row.object_type = type.get<std::string>();
  row.position = read_vec3(require(v, "position", where), where + ".position");
  row.rotation = read_vec3(require(v, "rotation", where), where + ".rotation");
  if (auto it = v.find("parent_receptacle"); it != v.end() && !it->is_null()) {
    if (!it->is_string())
      throw Error(ErrorCode::SchemaError, where + ": parent_receptacle must be a string or null");
    row.parent_receptacle = it->get<std::string>();
  }
  if (auto it = v.find("properties"); it != v.end()) {
    if (!it->is_object())
      throw Error(ErrorCode::SchemaError, where + ": properties must be an object");
    for (const auto& [key, val] : it->items()) {
      if (!val.is_boolean())
        throw Error(ErrorCode::SchemaError, where + ": property '" + key + "' must be boolean");
      row.properties[key] = val.get<bool>();
    }
  }
  return row;
}

}  // namespace

ObjectTable load_table(const json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::SchemaError, "environment must be an object");
  for (const auto& [key, _] : doc.items())
    if (key != "objects")
      throw Error(ErrorCode::SchemaError, "environment: unexpected field '" + key + "'");
  const auto& objects = require(doc, "objects", "environment");
  if (!objects.is_array()) throw Error(ErrorCode::SchemaError, "objects must be an array");
  std::vector<ObjectRow> rows;
  rows.reserve(objects.size());
  for (std::size_t i = 0; i < objects.size(); ++i) rows.push_back(read_row(objects[i], i));
  return ObjectTable(std::move(rows));
}

ObjectTable load_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
  return load_table(doc);
}

json table_to_json(const ObjectTable& table) {
  json objects = json::array();
  for (const auto& row : table.rows()) {
    json r;
    r["id"] = row.object_id;
    r["type"] = row.object_type;
    r["position"] = {{"x", row.position.x}, {"y", row.position.y}, {"z", row.position.z}};
    r["rotation"] = {{"x", row.rotation.x}, {"y", row.rotation.y}, {"z", row.rotation.z}};
    r["parent_receptacle"] = row.parent_receptacle ? json(*row.parent_receptacle) : json(nullptr);
    r["properties"] = json::object();
    for (const auto& [k, v] : row.properties) r["properties"][k] = v;
    objects.push_back(std::move(r));
  }
  return json{{"objects", std::move(objects)}};
}

std::string_view to_string(Column c) noexcept {
  switch (c) {
    case Column::Id: return "id";
    case Column::Type: return "type";
    case Column::Position: return "position";
    case Column::Rotation: return "rotation";
    case Column::Receptacle: return "receptacle";
  }
  return "?";
}

std::optional<Column> parse_column(std::string_view name) noexcept {
  for (auto c : {Column::Id, Column::Type, Column::Position, Column::Rotation, Column::Receptacle})
    if (to_string(c) == name) return c;
  return std::nullopt;
}

void FlattenConfig::validate() const {
  if (included_columns.empty())
    throw Error(ErrorCode::InvalidConfig, "flatten needs at least one column");
  if (precision < 0) throw Error(ErrorCode::InvalidConfig, "precision must be >= 0");
  if (trim(separator).empty() || count_whitespace_tokens(separator) != 1)
    throw Error(ErrorCode::InvalidConfig, "separator must be a single non-blank token");
}

namespace {

std::string fixed(double v, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  std::string s = buf;
  // "-0.00" and "0.00" must render identically
  if (s.front() == '-' && s.find_first_not_of("-0.") == std::string::npos) s.erase(0, 1);
  return s;
}

std::string triple(const Vec3& v, int precision) {
  return fixed(v.x, precision) + "," + fixed(v.y, precision) + "," + fixed(v.z, precision);
}

}  // namespace

std::string render_row(const ObjectRow& row, const FlattenConfig& config) {
  std::vector<std::string> fields;
  for (auto col : config.included_columns) {
    switch (col) {
      case Column::Id: fields.push_back("id=" + row.object_id); break;
      case Column::Type: fields.push_back("type=" + row.object_type); break;
      case Column::Position: fields.push_back("pos=" + triple(row.position, config.precision)); break;
      case Column::Rotation: fields.push_back("rot=" + triple(row.rotation, config.precision)); break;
      case Column::Receptacle:
        fields.push_back("on=" + row.parent_receptacle.value_or("none"));
        break;
    }
  }
  return join(fields, " ");
}

Encoding::Encoding(std::string goal, std::vector<std::string> rows, std::string separator)
    : goal_(std::move(goal)), rows_(std::move(rows)), separator_(std::move(separator)) {}

std::string Encoding::env_text() const {
  std::string out = "Env:";
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    out += i ? " " + separator_ + " " : " ";
    out += rows_[i];
  }
  return out;
}

std::string Encoding::text() const {
  return goal_.empty() ? env_text() : goal_ + " " + env_text();
}

std::size_t Encoding::prefix_token_count() const { return count_whitespace_tokens(goal_) + 1; }

std::size_t Encoding::token_count() const { return count_whitespace_tokens(text()); }

Encoding Encoding::prefix(std::size_t n) const {
  n = std::min(n, rows_.size());
  return Encoding(goal_, std::vector<std::string>(rows_.begin(), rows_.begin() + n), separator_);
}

FlattenResult flatten(std::string_view goal, const ObjectTable& table, const FlattenConfig& config) {
  config.validate();
  std::vector<std::string> rows;
  rows.reserve(table.size());
  for (const auto& row : table.rows()) rows.push_back(render_row(row, config));
  FlattenResult result{Encoding(std::string(trim(goal)), std::move(rows), config.separator), {}};
  if (table.empty()) result.warnings.push_back("environment table is empty");
  return result;
}

TruncatedEncoding truncate_encoding(const Encoding& encoding, std::size_t max_tokens) {
  if (encoding.prefix_token_count() > max_tokens)
    throw Error(ErrorCode::BudgetTooSmall, "goal prefix needs " +
                                               std::to_string(encoding.prefix_token_count()) +
                                               " tokens, budget is " + std::to_string(max_tokens));
  // Running count: row i adds its own tokens plus one separator (except the first).
  std::size_t used = encoding.prefix_token_count();
  std::size_t kept = 0;
  for (const auto& row : encoding.rows()) {
    std::size_t cost = count_whitespace_tokens(row) + (kept ? 1 : 0);
    if (used + cost > max_tokens) break;
    used += cost;
    ++kept;
  }
  return {encoding.prefix(kept), kept, encoding.rows().size() - kept};
}

}  // namespace gplan
