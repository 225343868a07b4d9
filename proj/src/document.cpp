// Copyright 2026 The Reroute Authors
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

#include "reroute/document.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"
#include "reroute/error.hpp"

namespace reroute {
namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kParse, where + ": " + what);
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    // Translate the byte offset into a line number for the message.
    std::size_t line = 1;
    for (std::size_t i = 0; i < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') ++line;
    }
    throw Error(ErrorCode::kParse,
                "line " + std::to_string(line) + ": malformed JSON (" +
                    e.what() + ")");
  }
}

const json& field(const json& object, const char* key, const std::string& where) {
  if (!object.is_object()) parse_fail(where, "expected an object");
  auto it = object.find(key);
  if (it == object.end()) parse_fail(where, std::string("missing field '") + key + "'");
  return *it;
}

std::string as_string(const json& value, const std::string& where) {
  if (!value.is_string()) parse_fail(where, "expected a string");
  return value.get<std::string>();
}

std::int64_t as_integer(const json& value, const std::string& where) {
  if (!value.is_number_integer()) parse_fail(where, "expected an integer");
  return value.get<std::int64_t>();
}

std::vector<std::string> as_string_list(const json& value,
                                        const std::string& where) {
  if (!value.is_array()) parse_fail(where, "expected an array of strings");
  std::vector<std::string> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(as_string(value[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

std::string pair_id(const json& value, const std::string& where) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer()) return std::to_string(value.get<std::int64_t>());
  parse_fail(where, "expected a string or integer pair id");
}

}  // namespace

InstanceDocument parse_instance_document(std::string_view text) {
  const json root = parse_json(text);
  if (!root.is_object()) parse_fail("document", "expected a JSON object");
  InstanceDocument doc;
  doc.vertices = as_string_list(field(root, "vertices", "document"), "vertices");

  const json& edges = field(root, "edges", "document");
  if (!edges.is_array()) parse_fail("edges", "expected an array");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string where = "edges[" + std::to_string(i) + "]";
    doc.edges.push_back(
        {as_string(field(edges[i], "tail", where), where + ".tail"),
         as_string(field(edges[i], "head", where), where + ".head"),
         as_integer(field(edges[i], "capacity", where), where + ".capacity")});
  }

  doc.source = as_string(field(root, "source", "document"), "source");
  doc.terminal = as_string(field(root, "terminal", "document"), "terminal");

  const json& pairs = field(root, "pairs", "document");
  if (!pairs.is_array()) parse_fail("pairs", "expected an array");
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const std::string where = "pairs[" + std::to_string(i) + "]";
    InstanceDocument::PairEntry entry;
    entry.id = pair_id(field(pairs[i], "id", where), where + ".id");
    entry.old_path = as_string_list(field(pairs[i], "old_path", where),
                                    where + ".old_path");
    entry.new_path = as_string_list(field(pairs[i], "new_path", where),
                                    where + ".new_path");
    entry.demand =
        as_integer(field(pairs[i], "demand", where), where + ".demand");
    doc.pairs.push_back(std::move(entry));
  }
  return doc;
}

UpdateFlowNetwork load_instance(std::string_view text) {
  return UpdateFlowNetwork::from_document(parse_instance_document(text));
}

std::string serialize_instance(const UpdateFlowNetwork& net) {
  const InstanceDocument doc = net.to_document();
  json root;
  root["vertices"] = doc.vertices;
  json edges = json::array();
  for (const auto& e : doc.edges) {
    edges.push_back({{"tail", e.tail}, {"head", e.head}, {"capacity", e.capacity}});
  }
  root["edges"] = std::move(edges);
  root["source"] = doc.source;
  root["terminal"] = doc.terminal;
  json pairs = json::array();
  for (const auto& p : doc.pairs) {
    pairs.push_back({{"id", p.id},
                     {"old_path", p.old_path},
                     {"new_path", p.new_path},
                     {"demand", p.demand}});
  }
  root["pairs"] = std::move(pairs);
  return root.dump(2) + "\n";
}

UpdateSequence load_schedule(const UpdateFlowNetwork& net,
                             std::string_view text) {
  const json root = parse_json(text);
  const json& rounds = field(root, "rounds", "document");
  if (!rounds.is_array()) parse_fail("rounds", "expected an array");
  UpdateSequence seq;
  for (std::size_t r = 0; r < rounds.size(); ++r) {
    const std::string where = "rounds[" + std::to_string(r) + "]";
    if (!rounds[r].is_array()) parse_fail(where, "expected an array");
    std::vector<Update> round;
    for (std::size_t k = 0; k < rounds[r].size(); ++k) {
      const std::string at = where + "[" + std::to_string(k) + "]";
      const std::string vertex =
          as_string(field(rounds[r][k], "vertex", at), at + ".vertex");
      const std::string pair =
          pair_id(field(rounds[r][k], "pair", at), at + ".pair");
      auto v = net.find_vertex(vertex);
      auto p = net.find_pair(pair);
      if (!v) {
        throw Error(ErrorCode::kMalformedSchedule,
                    at + ": unknown vertex '" + vertex + "'");
      }
      if (!p) {
        throw Error(ErrorCode::kMalformedSchedule,
                    at + ": unknown pair '" + pair + "'");
      }
      if (!net.on_pair(*p, *v)) {
        throw Error(ErrorCode::kMalformedSchedule,
                    at + ": vertex '" + vertex + "' is not on pair '" + pair + "'");
      }
      Update u{*v, *p};
      if (!is_empty_update(net, u)) round.push_back(u);
    }
    seq.rounds.push_back(std::move(round));
  }
  normalize(seq);
  check_well_formed(net, seq);
  return seq;
}

std::string serialize_schedule(const UpdateFlowNetwork& net,
                               const UpdateSequence& seq) {
  json rounds = json::array();
  for (const auto& round : seq.rounds) {
    json entries = json::array();
    for (Update u : round) {
      entries.push_back(
          {{"vertex", net.vertex_name(u.vertex)}, {"pair", net.pair(u.pair).id}});
    }
    rounds.push_back(std::move(entries));
  }
  json root;
  root["rounds"] = std::move(rounds);
  return root.dump(2) + "\n";
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kParse, "cannot open '" + path.string() + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace reroute
