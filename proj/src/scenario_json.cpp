// Copyright 2026 The Erasable Ledger Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <map>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "erasable/cli.hpp"

namespace erasable::cli {

namespace {

using nlohmann::json;
using simnet::Behavior;

[[noreturn]] void reject(const std::string& field, const std::string& what) {
  throw LedgerError(Errc::invalid_argument, field + ": " + what);
}

std::string at(const std::string& base, std::size_t i) {
  return base + "[" + std::to_string(i) + "]";
}

std::string join(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

void check_fields(const json& obj, const std::string& field,
                  std::initializer_list<std::string_view> required,
                  std::initializer_list<std::string_view> optional = {}) {
  if (!obj.is_object()) reject(field.empty() ? "<root>" : field, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto k : required) known = known || key == k;
    for (auto k : optional) known = known || key == k;
    if (!known) reject(join(field, key), "unknown field");
  }
  for (auto k : required) {
    if (!obj.contains(k)) reject(join(field, std::string(k)), "missing field");
  }
}

std::string get_string(const json& obj, const std::string& field,
                       const std::string& key) {
  const auto& v = obj.at(key);
  if (!v.is_string()) reject(join(field, key), "expected a string");
  return v.get<std::string>();
}

std::uint64_t get_u64(const json& obj, const std::string& field,
                      const std::string& key) {
  const auto& v = obj.at(key);
  if (!v.is_number_unsigned()) {
    reject(join(field, key), "expected a non-negative integer");
  }
  return v.get<std::uint64_t>();
}

const json& get_array(const json& obj, const std::string& field,
                      const std::string& key) {
  const auto& v = obj.at(key);
  if (!v.is_array()) reject(join(field, key), "expected an array");
  return v;
}

template <typename Fn>
auto parse_enum(const std::string& field, Fn&& fn) {
  try {
    return fn();
  } catch (const LedgerError& e) {
    reject(field, e.what());
  }
}

consensus::VoteChoice parse_choice(const std::string& text,
                                   const std::string& field) {
  if (text == "approve") return consensus::VoteChoice::approve;
  if (text == "veto") return consensus::VoteChoice::veto;
  reject(field, "expected approve or veto, got '" + text + "'");
}

class Resolver {
 public:
  void declare(const core::Identity& who) { ids_.emplace(who.id, who); }

  core::Identity resolve(const std::string& id, const std::string& field) const {
    auto it = ids_.find(id);
    if (it == ids_.end()) reject(field, "undeclared identity '" + id + "'");
    return it->second;
  }

 private:
  std::map<std::string, core::Identity> ids_;
};

std::vector<core::Identity> parse_identities(const json& arr,
                                             const std::string& field,
                                             core::IdentityKind kind) {
  std::vector<core::Identity> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_string()) reject(at(field, i), "expected a string");
    const auto id = arr[i].get<std::string>();
    if (!core::is_valid_did(id)) {
      reject(at(field, i), "malformed identifier '" + id + "'");
    }
    out.push_back(core::Identity{kind, id});
  }
  return out;
}

void parse_drop(const json& v, const std::string& field,
                simnet::NetworkConfig& net) {
  if (v.is_number_unsigned() && v.get<std::uint64_t>() <= 1) {
    net.drop_numerator = v.get<std::uint64_t>();
    net.drop_denominator = 1;
    return;
  }
  if (!v.is_string()) reject(field, "expected \"n/d\" or 0");
  const auto text = v.get<std::string>();
  std::istringstream in(text);
  std::uint64_t num = 0;
  std::uint64_t den = 0;
  char slash = 0;
  if (!(in >> num >> slash >> den) || slash != '/' || !in.eof()) {
    reject(field, "expected \"n/d\", got '" + text + "'");
  }
  net.drop_numerator = num;
  net.drop_denominator = den;
}

simnet::Directive parse_event(const json& e, const std::string& field,
                              const Resolver& ids) {
  if (!e.is_object()) reject(field, "expected an object");
  if (!e.contains("type") || !e["type"].is_string()) {
    reject(join(field, "type"), "missing or not a string");
  }
  const auto type = e["type"].get<std::string>();
  simnet::Directive d;

  if (type == "submit_tx") {
    check_fields(e, field, {"at", "type", "tx_id", "payload", "scope"});
    simnet::SubmitTx tx;
    tx.tx_id = get_string(e, field, "tx_id");
    tx.payload = get_string(e, field, "payload");
    const auto& scope = get_array(e, field, "scope");
    for (std::size_t i = 0; i < scope.size(); ++i) {
      const auto f = at(join(field, "scope"), i);
      if (!scope[i].is_string()) reject(f, "expected a string");
      tx.scope.push_back(ids.resolve(scope[i].get<std::string>(), f));
    }
    d.action = std::move(tx);
  } else if (type == "erase") {
    check_fields(e, field,
                 {"at", "type", "id", "subject", "mode", "strategy", "policy",
                  "timeout"});
    simnet::Erase erase;
    erase.id = get_string(e, field, "id");
    erase.subject =
        ids.resolve(get_string(e, field, "subject"), join(field, "subject"));
    erase.mode = parse_enum(join(field, "mode"), [&] {
      return consensus::parse_erasure_mode(get_string(e, field, "mode"));
    });
    erase.strategy = parse_enum(join(field, "strategy"), [&] {
      return consensus::parse_strategy(get_string(e, field, "strategy"));
    });
    erase.policy.mode = parse_enum(join(field, "policy"), [&] {
      return consensus::parse_silence_mode(get_string(e, field, "policy"));
    });
    erase.policy.timeout = get_u64(e, field, "timeout");
    d.action = std::move(erase);
  } else if (type == "membership_change") {
    check_fields(e, field, {"at", "type", "org", "action"});
    simnet::MembershipChange change;
    change.org = ids.resolve(get_string(e, field, "org"), join(field, "org"));
    const auto action = get_string(e, field, "action");
    if (action != "join" && action != "leave") {
      reject(join(field, "action"), "expected join or leave");
    }
    change.join = action == "join";
    d.action = std::move(change);
  } else if (type == "cast_vote") {
    check_fields(e, field, {"at", "type", "voter", "request", "decision"});
    simnet::CastVote vote;
    vote.voter = ids.resolve(get_string(e, field, "voter"), join(field, "voter"));
    vote.request = get_string(e, field, "request");
    vote.decision = parse_choice(get_string(e, field, "decision"),
                                 join(field, "decision"));
    d.action = std::move(vote);
  } else {
    reject(join(field, "type"), "unknown event type '" + type + "'");
  }
  d.at = get_u64(e, field, "at");
  return d;
}

simnet::NodeSpec parse_node(const json& n, const std::string& field,
                            const Resolver& ids) {
  check_fields(n, field, {"id", "operator", "behavior"}, {"script"});
  simnet::NodeSpec node;
  node.node_id = get_string(n, field, "id");
  node.operator_org =
      ids.resolve(get_string(n, field, "operator"), join(field, "operator"));
  const auto behavior = get_string(n, field, "behavior");
  if (behavior == "approve_all") {
    node.behavior.kind = Behavior::Kind::approve_all;
  } else if (behavior == "veto_all") {
    node.behavior.kind = Behavior::Kind::veto_all;
  } else if (behavior == "silent") {
    node.behavior.kind = Behavior::Kind::silent;
  } else if (behavior == "scripted") {
    node.behavior.kind = Behavior::Kind::scripted;
  } else {
    reject(join(field, "behavior"), "unknown behavior '" + behavior + "'");
  }
  if (n.contains("script")) {
    const auto& script = get_array(n, field, "script");
    for (std::size_t i = 0; i < script.size(); ++i) {
      const auto f = at(join(field, "script"), i);
      check_fields(script[i], f, {"request", "decision"});
      simnet::ScriptedVote sv;
      sv.request = get_string(script[i], f, "request");
      sv.decision =
          parse_choice(get_string(script[i], f, "decision"), join(f, "decision"));
      node.behavior.script.push_back(std::move(sv));
    }
  }
  return node;
}

}  // namespace

simnet::Scenario parse_scenario(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw LedgerError(Errc::invalid_argument, std::string("parse error: ") + e.what());
  }

  check_fields(root, "",
               {"network_id", "seed", "organizations", "persons", "nodes",
                "network", "events"},
               {"guardians"});
  simnet::Scenario s;
  s.network_id = get_string(root, "", "network_id");
  s.network.seed = get_u64(root, "", "seed");
  s.organizations = parse_identities(get_array(root, "", "organizations"),
                                     "organizations",
                                     core::IdentityKind::organization);
  s.persons = parse_identities(get_array(root, "", "persons"), "persons",
                               core::IdentityKind::person);

  Resolver ids;
  for (const auto& o : s.organizations) ids.declare(o);
  for (const auto& p : s.persons) ids.declare(p);

  if (root.contains("guardians")) {
    const auto& g = root["guardians"];
    if (!g.is_object()) reject("guardians", "expected an object");
    for (const auto& [person_id, orgs] : g.items()) {
      const auto f = join("guardians", person_id);
      auto person = ids.resolve(person_id, f);
      if (!orgs.is_array()) reject(f, "expected an array");
      for (std::size_t i = 0; i < orgs.size(); ++i) {
        if (!orgs[i].is_string()) reject(at(f, i), "expected a string");
        s.guardians.emplace_back(person,
                                 ids.resolve(orgs[i].get<std::string>(), at(f, i)));
      }
    }
  }

  const auto& nodes = get_array(root, "", "nodes");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    s.nodes.push_back(parse_node(nodes[i], at("nodes", i), ids));
  }

  const auto& net = root["network"];
  check_fields(net, "network", {"delay_min", "delay_max"}, {"drop_probability"});
  s.network.delay_min = get_u64(net, "network", "delay_min");
  s.network.delay_max = get_u64(net, "network", "delay_max");
  if (net.contains("drop_probability")) {
    parse_drop(net["drop_probability"], "network.drop_probability", s.network);
  }

  const auto& events = get_array(root, "", "events");
  for (std::size_t i = 0; i < events.size(); ++i) {
    s.events.push_back(parse_event(events[i], at("events", i), ids));
  }

  simnet::validate_scenario(s);
  return s;
}

simnet::Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw LedgerError(Errc::invalid_argument,
                      path.string() + ": cannot open scenario file");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_scenario(ss.str());
  } catch (const LedgerError& e) {
    throw LedgerError(e.code(), path.string() + ": " + e.what());
  }
}

}  // namespace erasable::cli
