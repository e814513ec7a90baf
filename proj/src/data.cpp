// Copyright 2026 The JPT Authors. All Rights Reserved.
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "jpt/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>

#include "jpt/error.hpp"

namespace jpt {

Variable Variable::numeric(std::string name) {
  return Variable(std::move(name), VariableKind::Numeric, {});
}

Variable Variable::symbolic(std::string name, std::vector<std::string> domain) {
  if (domain.empty()) throw DataError("symbolic variable '" + name + "' has an empty domain");
  std::set<std::string> seen;
  for (const auto& label : domain) {
    if (!seen.insert(label).second) {
      throw DataError("symbolic variable '" + name + "' has duplicate label '" + label + "'");
    }
  }
  return Variable(std::move(name), VariableKind::Symbolic, std::move(domain));
}

std::optional<std::size_t> Variable::index_of(std::string_view label) const {
  const auto it = std::find(domain_.begin(), domain_.end(), label);
  if (it == domain_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - domain_.begin());
}

std::optional<std::size_t> find_variable(const Schema& schema, std::string_view name) {
  for (std::size_t i = 0; i < schema.size(); ++i) {
    if (schema[i].name() == name) return i;
  }
  return std::nullopt;
}

double Dataset::total_weight() const {
  double total = 0.0;
  for (double w : weights_) total += w;
  return total;
}

void Dataset::add_row(std::span<const double> values, double weight) {
  if (values.size() != schema_.size()) {
    throw DataError("row has " + std::to_string(values.size()) + " cells, schema has " +
                    std::to_string(schema_.size()) + " variables");
  }
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw DataError("row weight must be a finite positive number");
  }
  for (std::size_t v = 0; v < values.size(); ++v) {
    const double cell = values[v];
    if (!std::isfinite(cell)) {
      throw DataError("non-finite value for variable '" + schema_[v].name() + "'");
    }
    if (schema_[v].is_symbolic()) {
      if (cell < 0 || cell != std::floor(cell) || cell >= static_cast<double>(schema_[v].domain_size())) {
        throw DataError("value index out of domain for variable '" + schema_[v].name() + "'");
      }
    }
  }
  cells_.insert(cells_.end(), values.begin(), values.end());
  weights_.push_back(weight);
}

Dataset Dataset::subset(std::span<const std::size_t> indices) const {
  Dataset out(schema_);
  out.cells_.reserve(indices.size() * schema_.size());
  out.weights_.reserve(indices.size());
  for (std::size_t r : indices) {
    const auto values = row(r);
    out.cells_.insert(out.cells_.end(), values.begin(), values.end());
    out.weights_.push_back(weights_[r]);
  }
  return out;
}

bool ValueSet::contains(std::size_t v) const {
  return std::binary_search(values.begin(), values.end(), v);
}

void Assignment::set(std::size_t variable, Constraint constraint) {
  if (auto* set = std::get_if<ValueSet>(&constraint)) {
    std::sort(set->values.begin(), set->values.end());
    set->values.erase(std::unique(set->values.begin(), set->values.end()), set->values.end());
  }
  constraints_.insert_or_assign(variable, std::move(constraint));
}

const Constraint* Assignment::find(std::size_t variable) const {
  const auto it = constraints_.find(variable);
  return it == constraints_.end() ? nullptr : &it->second;
}

bool Assignment::satisfied_by(std::span<const double> row) const {
  for (const auto& [variable, constraint] : constraints_) {
    const double value = row[variable];
    if (const auto* interval = std::get_if<Interval>(&constraint)) {
      if (!interval->contains(value)) return false;
    } else if (!std::get<ValueSet>(constraint).contains(static_cast<std::size_t>(value))) {
      return false;
    }
  }
  return true;
}

std::string format_number(double value) {
  char buffer[64];
  const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

std::optional<double> parse_number(std::string_view text) {
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (*first == '+') ++first;
  const auto result = std::from_chars(first, last, value);
  if (result.ec != std::errc() || result.ptr != last || !std::isfinite(value)) return std::nullopt;
  return value;
}

namespace {

enum class TokenKind { Word, Quoted, Equals, Semicolon, Comma, LBracket, RBracket, LBrace, RBrace, End };

struct Token {
  TokenKind kind;
  std::string text;
  std::size_t position;
};

bool is_delimiter(char c) {
  return c == ';' || c == ',' || c == '=' || c == '[' || c == ']' || c == '{' || c == '}' ||
         c == '"' || c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    const char c = text[i];
    if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    auto punct = [&](TokenKind kind) {
      tokens.push_back({kind, std::string(1, c), start});
      ++i;
    };
    switch (c) {
      case '=': punct(TokenKind::Equals); continue;
      case ';': punct(TokenKind::Semicolon); continue;
      case ',': punct(TokenKind::Comma); continue;
      case '[': punct(TokenKind::LBracket); continue;
      case ']': punct(TokenKind::RBracket); continue;
      case '{': punct(TokenKind::LBrace); continue;
      case '}': punct(TokenKind::RBrace); continue;
      default: break;
    }
    if (c == '"') {
      std::string value;
      ++i;
      while (i < text.size() && text[i] != '"') {
        if (text[i] == '\\' && i + 1 < text.size()) ++i;
        value.push_back(text[i++]);
      }
      if (i >= text.size()) {
        throw DataError("unterminated quoted string starting at position " + std::to_string(start));
      }
      ++i;
      tokens.push_back({TokenKind::Quoted, std::move(value), start});
      continue;
    }
    while (i < text.size() && !is_delimiter(text[i])) ++i;
    tokens.push_back({TokenKind::Word, std::string(text.substr(start, i - start)), start});
  }
  tokens.push_back({TokenKind::End, "<end of input>", text.size()});
  return tokens;
}

class AssignmentParser {
 public:
  AssignmentParser(std::string_view text, const Schema& schema)
      : tokens_(tokenize(text)), schema_(schema) {}

  Assignment parse() {
    Assignment result;
    if (peek().kind == TokenKind::End) return result;
    statement(result);
    while (peek().kind == TokenKind::Semicolon) {
      ++pos_;
      statement(result);
    }
    if (peek().kind != TokenKind::End) fail("expected ';' or end of input", peek());
    return result;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  const Token& next() { return tokens_[pos_++]; }

  [[noreturn]] static void fail(const std::string& message, const Token& token) {
    throw DataError(message + ", got '" + token.text + "' at position " + std::to_string(token.position));
  }

  const Token& expect(TokenKind kind, const char* what) {
    const Token& token = next();
    if (token.kind != kind) fail(std::string("expected ") + what, token);
    return token;
  }

  const Token& value_token() {
    const Token& token = next();
    if (token.kind != TokenKind::Word && token.kind != TokenKind::Quoted) fail("expected a value", token);
    return token;
  }

  double number(const Token& token) {
    if (token.kind != TokenKind::Word) fail("expected a number", token);
    const auto value = parse_number(token.text);
    if (!value) fail("expected a finite number", token);
    return *value;
  }

  std::size_t label(const Variable& variable, const Token& token) {
    const auto index = variable.index_of(token.text);
    if (!index) fail("value not in the domain of '" + variable.name() + "'", token);
    return *index;
  }

  void statement(Assignment& result) {
    const Token& name = next();
    if (name.kind != TokenKind::Word && name.kind != TokenKind::Quoted) fail("expected a variable name", name);
    const auto index = find_variable(schema_, name.text);
    if (!index) fail("unknown variable", name);
    if (result.contains(*index)) fail("duplicate constraint for variable", name);
    const Variable& variable = schema_[*index];

    const Token& op = next();
    if (op.kind == TokenKind::Equals) {
      const Token& value = value_token();
      if (variable.is_numeric()) {
        const double x = number(value);
        result.set(*index, Interval{x, x});
      } else {
        result.set(*index, ValueSet{{label(variable, value)}});
      }
      return;
    }
    if (op.kind != TokenKind::Word || op.text != "in") fail("expected '=' or 'in'", op);

    const Token& open = next();
    if (open.kind == TokenKind::LBracket) {
      if (!variable.is_numeric()) fail("interval constraint on symbolic variable '" + variable.name() + "'", open);
      const Token& lo_token = next();
      const double lo = number(lo_token);
      expect(TokenKind::Comma, "','");
      const Token& hi_token = next();
      const double hi = number(hi_token);
      expect(TokenKind::RBracket, "']'");
      if (lo > hi) fail("inverted interval, lower bound exceeds upper bound", hi_token);
      result.set(*index, Interval{lo, hi});
    } else if (open.kind == TokenKind::LBrace) {
      if (!variable.is_symbolic()) fail("set constraint on numeric variable '" + variable.name() + "'", open);
      ValueSet set;
      set.values.push_back(label(variable, value_token()));
      while (peek().kind == TokenKind::Comma) {
        ++pos_;
        set.values.push_back(label(variable, value_token()));
      }
      expect(TokenKind::RBrace, "'}'");
      result.set(*index, std::move(set));
    } else {
      fail("expected '[' or '{'", open);
    }
  }

  std::vector<Token> tokens_;
  const Schema& schema_;
  std::size_t pos_ = 0;
};

std::string quote_if_needed(const std::string& text) {
  const bool plain = !text.empty() && text != "in" &&
                     std::none_of(text.begin(), text.end(), [](char c) { return is_delimiter(c); });
  if (plain) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

Assignment parse_assignment(std::string_view text, const Schema& schema) {
  return AssignmentParser(text, schema).parse();
}

std::string format_assignment(const Assignment& assignment, const Schema& schema) {
  std::string out;
  for (const auto& [index, constraint] : assignment) {
    if (!out.empty()) out += "; ";
    const Variable& variable = schema.at(index);
    out += quote_if_needed(variable.name());
    if (const auto* interval = std::get_if<Interval>(&constraint)) {
      if (interval->is_point()) {
        out += " = " + format_number(interval->lower);
      } else {
        out += " in [" + format_number(interval->lower) + ", " + format_number(interval->upper) + "]";
      }
    } else {
      const auto& values = std::get<ValueSet>(constraint).values;
      if (values.size() == 1) {
        out += " = " + quote_if_needed(variable.domain()[values[0]]);
      } else {
        out += " in {";
        for (std::size_t i = 0; i < values.size(); ++i) {
          if (i) out += ", ";
          out += quote_if_needed(variable.domain()[values[i]]);
        }
        out += "}";
      }
    }
  }
  return out;
}

}  // namespace jpt
