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

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace gplan {

struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
  friend bool operator==(const Vec3&, const Vec3&) = default;
};

// One object of the environment. Position is in meters, rotation in
// degrees and always normalized into [0, 360).
struct ObjectRow {
  std::string object_id;
  std::string object_type;
  Vec3 position;
  Vec3 rotation;
  std::optional<std::string> parent_receptacle;
  std::map<std::string, bool> properties;

  friend bool operator==(const ObjectRow&, const ObjectRow&) = default;
};

inline constexpr std::string_view kAgentType = "Agent";

double normalize_degrees(double deg) noexcept;

// Validated, immutable object table. Row order is the source order.
class ObjectTable {
 public:
  ObjectTable() = default;
  // Throws DuplicateId, DanglingReceptacle or SchemaError.
  explicit ObjectTable(std::vector<ObjectRow> rows);

  const std::vector<ObjectRow>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }
  const ObjectRow* find(std::string_view id) const;

  friend bool operator==(const ObjectTable&, const ObjectTable&) = default;

 private:
  std::vector<ObjectRow> rows_;
};

ObjectTable load_table(const nlohmann::json& doc);
ObjectTable load_table_file(const std::string& path);
nlohmann::json table_to_json(const ObjectTable& table);

enum class Column { Id, Type, Position, Rotation, Receptacle };

std::string_view to_string(Column c) noexcept;
std::optional<Column> parse_column(std::string_view name) noexcept;

struct FlattenConfig {
  std::vector<Column> included_columns{Column::Id, Column::Type, Column::Position,
                                       Column::Rotation, Column::Receptacle};
  int precision = 2;
  std::string separator = "[SEP]";

  void validate() const;  // throws InvalidConfig
};

// A flattened environment: "<goal> Env: <row1> [SEP] <row2> ...".
class Encoding {
 public:
  Encoding(std::string goal, std::vector<std::string> rows, std::string separator);

  const std::string& goal() const noexcept { return goal_; }
  const std::vector<std::string>& rows() const noexcept { return rows_; }
  const std::string& separator() const noexcept { return separator_; }

  // Goal, "Env:" and every row.
  std::string text() const;
  // "Env: <row1> [SEP] ..." without the goal; what the decode harness
  // places after the goal and step history.
  std::string env_text() const;
  std::size_t token_count() const;
  std::size_t prefix_token_count() const;  // goal + "Env:"

  // Keeps only the first `n` rows.
  Encoding prefix(std::size_t n) const;

 private:
  std::string goal_;
  std::vector<std::string> rows_;
  std::string separator_;
};

std::string render_row(const ObjectRow& row, const FlattenConfig& config);

struct FlattenResult {
  Encoding encoding;
  std::vector<std::string> warnings;
};

FlattenResult flatten(std::string_view goal, const ObjectTable& table,
                      const FlattenConfig& config = {});

struct TruncatedEncoding {
  Encoding encoding;
  std::size_t rows_kept = 0;
  std::size_t rows_dropped = 0;
};

// Drops whole trailing rows until the whitespace-token count fits in
// `max_tokens`. Throws BudgetTooSmall if the goal prefix alone does not fit.
TruncatedEncoding truncate_encoding(const Encoding& encoding, std::size_t max_tokens);

}  // namespace gplan
