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

#include "erasable/simnet.hpp"

#include <algorithm>
#include <nlohmann/json.hpp>
#include <optional>

#include "erasable/placement.hpp"

namespace erasable::simnet {

Rng::Rng(std::uint64_t seed) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  z ^= z >> 31;
  state_ = z == 0 ? 0x9E3779B97F4A7C15ULL : z;
}

std::uint64_t Rng::next() {
  state_ ^= state_ >> 12;
  state_ ^= state_ << 25;
  state_ ^= state_ >> 27;
  return state_ * 0x2545F4914F6CDD1DULL;
}

std::string trace_to_jsonl(const Trace& trace) {
  std::string out;
  for (const auto& r : trace) {
    nlohmann::ordered_json j;
    j["tick"] = r.tick;
    j["node"] = r.node_id;
    j["action"] = r.action;
    j["detail"] = r.detail;
    out += j.dump();
    out += "\n";
  }
  return out;
}

bool check_convergence(std::span<const NodeState> nodes) {
  if (nodes.empty()) return true;
  const std::string reference = core::serialize_tree(nodes.front().replica);
  return std::all_of(nodes.begin(), nodes.end(), [&](const NodeState& n) {
    return core::verify_tree(n.replica).ok &&
           core::serialize_tree(n.replica) == reference;
  });
}

namespace {

using consensus::ConsensusRound;
using consensus::VoteChoice;

std::string short_hex(const core::Digest& d) {
  return core::to_hex(d).substr(0, 16);
}

std::string_view to_string(VoteChoice c) {
  return c == VoteChoice::approve ? "approve" : "veto";
}

enum class OpKind { append, deletion };

struct ReplicatedOp {
  std::uint64_t seq = 0;
  OpKind kind = OpKind::append;
  core::Transaction tx;
  Tick placed_at = 0;
  core::Digest block_hash{};
  consensus::DeletionRecord deletion;
};

enum class MessageKind { op, ack, vote_request, vote };

std::string_view to_string(MessageKind k) {
  switch (k) {
    case MessageKind::op: return "op";
    case MessageKind::ack: return "ack";
    case MessageKind::vote_request: return "vote_request";
    case MessageKind::vote: return "vote";
  }
  return "unknown";
}

struct Message {
  MessageKind kind = MessageKind::op;
  std::size_t from = 0;
  std::size_t to = 0;
  ReplicatedOp op;
  core::ScopeKey chain{};
  std::string request_id;
  VoteChoice choice = VoteChoice::approve;
};

struct Event {
  enum class Kind {
    submit_tx,
    open_deletion,
    deliver_message,
    cast_vote,
    deadline,
    membership_change,
  };
  Kind kind = Kind::submit_tx;
  std::size_t directive = 0;
  Message message;
  std::string request_id;
};

struct NodeRuntime {
  NodeState state;
  std::uint64_t next_seq = 1;
  std::map<std::uint64_t, ReplicatedOp> pending;
};

std::optional<VoteChoice> choose(const Behavior& b,
                                 const std::string& request_id) {
  switch (b.kind) {
    case Behavior::Kind::approve_all: return VoteChoice::approve;
    case Behavior::Kind::veto_all: return VoteChoice::veto;
    case Behavior::Kind::silent: return std::nullopt;
    case Behavior::Kind::scripted:
      for (const auto& s : b.script) {
        if (request_id.starts_with(s.request)) return s.decision;
      }
      return std::nullopt;
  }
  return std::nullopt;
}

class Simulator {
 public:
  Simulator(const Scenario& scenario, const SimulationOptions& options)
      : scenario_(scenario), options_(options), rng_(scenario.network.seed) {
    std::vector<NodeSpec> specs = scenario.nodes;
    std::sort(specs.begin(), specs.end(),
              [](const NodeSpec& a, const NodeSpec& b) {
                return a.node_id < b.node_id;
              });
    const auto genesis = core::make_genesis(scenario.network_id, 0);
    for (auto& spec : specs) {
      NodeRuntime rt;
      rt.state.node_id = spec.node_id;
      rt.state.operator_org = spec.operator_org;
      rt.state.behavior = spec.behavior;
      rt.state.replica = genesis;
      nodes_.push_back(std::move(rt));
    }
    for (const auto& org : scenario.organizations) membership_.join(org);
    for (const auto& [person, org] : scenario.guardians) {
      guardians_.assign(person, org);
    }
    for (std::size_t i = 0; i < scenario.events.size(); ++i) {
      Event e;
      e.directive = i;
      std::visit(
          [&](const auto& a) {
            using T = std::decay_t<decltype(a)>;
            if constexpr (std::is_same_v<T, SubmitTx>) {
              e.kind = Event::Kind::submit_tx;
            } else if constexpr (std::is_same_v<T, Erase>) {
              e.kind = Event::Kind::open_deletion;
            } else if constexpr (std::is_same_v<T, MembershipChange>) {
              e.kind = Event::Kind::membership_change;
            } else {
              e.kind = Event::Kind::cast_vote;
            }
          },
          scenario.events[i].action);
      schedule(scenario.events[i].at, std::move(e));
    }
  }

  SimulationResult run() {
    while (!queue_.empty()) {
      auto it = queue_.begin();
      const Tick now = it->first.first;
      Event event = std::move(it->second);
      queue_.erase(it);
      handle(now, event);
      if (options_.verify_each_event) sweep(now);
    }
    SimulationResult result;
    result.trace = std::move(trace_);
    result.verify_failures = verify_failures_;
    result.rounds = std::move(rounds_);
    for (auto& rt : nodes_) result.nodes.push_back(std::move(rt.state));
    return result;
  }

 private:
  NodeRuntime& coordinator() { return nodes_.front(); }

  void record(Tick now, std::size_t node, std::string action,
              std::string detail) {
    trace_.push_back(
        {now, nodes_[node].state.node_id, std::move(action), std::move(detail)});
  }

  void schedule(Tick at, Event e) {
    queue_.emplace(std::make_pair(at, next_event_seq_++), std::move(e));
  }

  void send(Tick now, Message m) {
    const auto& net = scenario_.network;
    const std::uint64_t drop_draw = rng_.next();
    const std::uint64_t delay_draw = rng_.next();
    if (drop_draw % net.drop_denominator < net.drop_numerator) {
      std::string detail = std::string(to_string(m.kind)) +
                           " to=" + nodes_[m.to].state.node_id;
      if (m.kind == MessageKind::op) detail += " seq=" + std::to_string(m.op.seq);
      if (!m.request_id.empty()) detail += " request=" + m.request_id;
      record(now, m.from, "message_dropped", detail);
      return;
    }
    const Tick delay =
        net.delay_min + delay_draw % (net.delay_max - net.delay_min + 1);
    Event e;
    e.kind = Event::Kind::deliver_message;
    e.message = std::move(m);
    schedule(now + delay, std::move(e));
  }

  void broadcast(Tick now, const ReplicatedOp& op) {
    for (std::size_t i = 1; i < nodes_.size(); ++i) {
      Message m;
      m.kind = MessageKind::op;
      m.from = 0;
      m.to = i;
      m.op = op;
      send(now, std::move(m));
    }
  }

  std::optional<std::size_t> voting_node(const Identity& org) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].state.operator_org == org) return i;
    }
    return std::nullopt;
  }

  void handle(Tick now, const Event& e) {
    switch (e.kind) {
      case Event::Kind::submit_tx:
        on_submit(now, std::get<SubmitTx>(scenario_.events[e.directive].action));
        break;
      case Event::Kind::open_deletion:
        on_erase(now, std::get<Erase>(scenario_.events[e.directive].action));
        break;
      case Event::Kind::membership_change:
        on_membership(
            now, std::get<MembershipChange>(scenario_.events[e.directive].action));
        break;
      case Event::Kind::cast_vote:
        on_cast_vote(now,
                     std::get<CastVote>(scenario_.events[e.directive].action));
        break;
      case Event::Kind::deadline:
        on_deadline(now, e.request_id);
        break;
      case Event::Kind::deliver_message:
        on_message(now, e.message);
        break;
    }
  }

  void on_submit(Tick now, const SubmitTx& submit) {
    NodeRuntime& coord = coordinator();
    core::Transaction tx;
    tx.tx_id = submit.tx_id;
    tx.payload = submit.payload;
    tx.declared_scope = placement::canonicalize_scope(submit.scope);
    tx.submitted_at = now;

    core::LedgerTree next;
    placement::PlacementResult placed;
    try {
      std::tie(next, placed) =
          placement::place_transaction(coord.state.replica, tx, now);
    } catch (const LedgerError& err) {
      record(now, 0, "tx_rejected", tx.tx_id + ": " + err.what());
      return;
    }
    coord.state.replica = std::move(next);

    ReplicatedOp op;
    op.seq = next_op_seq_++;
    op.kind = OpKind::append;
    op.tx = tx;
    op.placed_at = now;
    op.block_hash = placed.block.block_hash;
    coord.next_seq = op.seq + 1;

    record(now, 0, "append",
           "seq=" + std::to_string(op.seq) + " tx=" + tx.tx_id + " chain=" +
               tx.declared_scope.label() +
               " height=" + std::to_string(placed.block.height) +
               (placed.created_chain ? " new_chain" : "") +
               " block=" + short_hex(op.block_hash));
    membership_.record_endorsement(placed.chain_key, coord.state.operator_org);
    broadcast(now, op);
  }

  void on_erase(Tick now, const Erase& erase) {
    NodeRuntime& coord = coordinator();
    auto plan = consensus::plan_erasure(
        coord.state.replica, erase.subject, erase.mode, erase.strategy,
        erase.policy, membership_, guardians_, now, erase.id);
    record(now, 0, "erasure_planned",
           "id=" + erase.id + " subject=" + erase.subject.id +
               " mode=" + std::string(consensus::to_string(erase.mode)) +
               " strategy=" + std::string(consensus::to_string(erase.strategy)) +
               " policy=" + std::string(consensus::to_string(erase.policy.mode)) +
               " chains=" + std::to_string(plan.per_chain.size()));

    for (const auto& entry : plan.per_chain) {
      const std::string cls(consensus::to_string(entry.classification));
      if (entry.error) {
        record(now, 0, "request_rejected",
               "chain=" + short_hex(entry.chain_key) + " class=" + cls + " " +
                   *entry.error);
        continue;
      }
      const auto& req = *entry.request;
      if (rounds_.contains(req.request_id)) {
        record(now, 0, "request_rejected",
               "request=" + req.request_id + " duplicate request id");
        continue;
      }
      std::string endorsers;
      for (const auto& e : req.endorsers) {
        if (!endorsers.empty()) endorsers += ",";
        endorsers += e.id;
      }
      record(now, 0, "request_opened",
             "request=" + req.request_id + " chain=" +
                 coord.state.replica.chains.at(req.target_chain).scope.label() +
                 " class=" + cls + " endorsers={" + endorsers +
                 "} deadline=" + std::to_string(req.deadline()));

      auto [it, inserted] = rounds_.emplace(req.request_id, ConsensusRound(req));
      if (it->second.decision().terminal()) {
        finalize(now, it->second);
        continue;
      }
      Event deadline;
      deadline.kind = Event::Kind::deadline;
      deadline.request_id = req.request_id;
      schedule(req.deadline() + 1, std::move(deadline));

      for (const auto& org : req.endorsers) {
        auto node = voting_node(org);
        if (!node) {
          record(now, 0, "endorser_unreachable",
                 "request=" + req.request_id + " org=" + org.id);
        } else if (*node == 0) {
          answer_vote_request(now, 0, req.request_id);
        } else {
          Message m;
          m.kind = MessageKind::vote_request;
          m.from = 0;
          m.to = *node;
          m.request_id = req.request_id;
          send(now, std::move(m));
        }
      }
    }
  }

  void answer_vote_request(Tick now, std::size_t node,
                           const std::string& request_id) {
    const auto& state = nodes_[node].state;
    auto choice = choose(state.behavior, request_id);
    if (!choice) {
      record(now, node, "vote_withheld", "request=" + request_id);
      return;
    }
    record(now, node, "vote_cast",
           "request=" + request_id + " decision=" +
               std::string(to_string(*choice)));
    if (node == 0) {
      on_vote(now, state.operator_org, request_id, *choice);
      return;
    }
    Message m;
    m.kind = MessageKind::vote;
    m.from = node;
    m.to = 0;
    m.request_id = request_id;
    m.choice = *choice;
    send(now, std::move(m));
  }

  void on_vote(Tick now, const Identity& voter, const std::string& request_id,
               VoteChoice choice) {
    auto it = rounds_.find(request_id);
    if (it == rounds_.end()) {
      record(now, 0, "vote_ignored",
             "request=" + request_id + " voter=" + voter.id + " unknown request");
      return;
    }
    bool accepted = false;
    try {
      accepted = it->second.record_vote(
          consensus::Vote{voter, request_id, choice, now}, now);
    } catch (const LedgerError& err) {
      record(now, 0, "vote_rejected",
             "request=" + request_id + " voter=" + voter.id + " " +
                 std::string(to_string(err.code())));
      return;
    }
    if (!accepted) {
      record(now, 0, "late_vote",
             "request=" + request_id + " voter=" + voter.id);
      return;
    }
    record(now, 0, "vote_recorded",
           "request=" + request_id + " voter=" + voter.id +
               " decision=" + std::string(to_string(choice)));
    if (it->second.decision().terminal()) finalize(now, it->second);
  }

  void on_cast_vote(Tick now, const CastVote& cast) {
    std::vector<std::string> targets;
    for (const auto& [id, round] : rounds_) {
      if (id.starts_with(cast.request) && !round.decision().terminal()) {
        targets.push_back(id);
      }
    }
    if (targets.empty()) {
      record(now, 0, "vote_ignored",
             "request=" + cast.request + " voter=" + cast.voter.id +
                 " no open request");
    }
    for (const auto& id : targets) on_vote(now, cast.voter, id, cast.decision);
  }

  void on_deadline(Tick now, const std::string& request_id) {
    auto& round = rounds_.at(request_id);
    if (round.decision().terminal()) return;
    if (round.advance(now).terminal()) finalize(now, round);
  }

  void on_membership(Tick now, const MembershipChange& change) {
    if (change.join) {
      membership_.join(change.org);
    } else {
      membership_.leave(change.org);
    }
    record(now, 0, "membership",
           std::string(change.join ? "join " : "leave ") + change.org.id);
  }

  void finalize(Tick now, const ConsensusRound& round) {
    const auto& req = round.request();
    const auto& decision = round.decision();
    record(now, 0, "decision",
           "request=" + req.request_id + " chain=" + short_hex(req.target_chain) +
               " state=" + std::string(consensus::to_string(decision.state)) +
               " reason=" + decision.reason);
    if (decision.state != consensus::DecisionState::approved) return;

    NodeRuntime& coord = coordinator();
    if (!coord.state.replica.chains.contains(req.target_chain)) {
      record(now, 0, "apply_failed",
             "request=" + req.request_id + " chain already removed");
      return;
    }
    ReplicatedOp op;
    op.seq = next_op_seq_++;
    op.kind = OpKind::deletion;
    op.deletion = {req.request_id, req.target_chain, req.keep_subroot, now};
    coord.next_seq = op.seq + 1;
    apply_deletion_op(now, 0, op);
    membership_.endorsement_history.erase(req.target_chain);
    broadcast(now, op);
  }

  void apply_deletion_op(Tick now, std::size_t node, const ReplicatedOp& op) {
    auto& state = nodes_[node].state;
    state.replica = consensus::apply_deletion(
        state.replica, op.deletion.chain_key, op.deletion.keep_subroot);
    state.journal.push_back(op.deletion);
    record(now, node, "apply_deletion",
           "seq=" + std::to_string(op.seq) + " request=" + op.deletion.request_id +
               " chain=" + short_hex(op.deletion.chain_key) +
               (op.deletion.keep_subroot ? " keep_subroot" : " remove_subroot"));
  }

  void on_message(Tick now, const Message& m) {
    switch (m.kind) {
      case MessageKind::op: {
        auto& rt = nodes_[m.to];
        if (m.op.seq < rt.next_seq) return;
        rt.pending.emplace(m.op.seq, m.op);
        if (m.op.seq != rt.next_seq) {
          record(now, m.to, "op_buffered",
                 "seq=" + std::to_string(m.op.seq) +
                     " waiting_for=" + std::to_string(rt.next_seq));
        }
        for (auto it = rt.pending.find(rt.next_seq); it != rt.pending.end();
             it = rt.pending.find(rt.next_seq)) {
          ReplicatedOp op = std::move(it->second);
          rt.pending.erase(it);
          ++rt.next_seq;
          apply_op(now, m.to, op);
        }
        break;
      }
      case MessageKind::ack: {
        const auto& org = nodes_[m.from].state.operator_org;
        if (coordinator().state.replica.chains.contains(m.chain)) {
          membership_.record_endorsement(m.chain, org);
        }
        break;
      }
      case MessageKind::vote_request:
        answer_vote_request(now, m.to, m.request_id);
        break;
      case MessageKind::vote:
        on_vote(now, nodes_[m.from].state.operator_org, m.request_id, m.choice);
        break;
    }
  }

  void apply_op(Tick now, std::size_t node, const ReplicatedOp& op) {
    auto& state = nodes_[node].state;
    try {
      if (op.kind == OpKind::deletion) {
        apply_deletion_op(now, node, op);
        return;
      }
      auto [next, placed] =
          placement::place_transaction(state.replica, op.tx, op.placed_at);
      if (placed.block.block_hash != op.block_hash) {
        record(now, node, "append_mismatch",
               "seq=" + std::to_string(op.seq) + " tx=" + op.tx.tx_id +
                   " expected=" + short_hex(op.block_hash) +
                   " got=" + short_hex(placed.block.block_hash));
      }
      state.replica = std::move(next);
      record(now, node, "append",
             "seq=" + std::to_string(op.seq) + " tx=" + op.tx.tx_id +
                 " height=" + std::to_string(placed.block.height) +
                 " block=" + short_hex(placed.block.block_hash));
      Message ack;
      ack.kind = MessageKind::ack;
      ack.from = node;
      ack.to = 0;
      ack.chain = placed.chain_key;
      send(now, std::move(ack));
    } catch (const LedgerError& err) {
      record(now, node, "apply_failed",
             "seq=" + std::to_string(op.seq) + " " + err.what());
    }
  }

  void sweep(Tick now) {
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      auto report = core::verify_tree(nodes_[i].state.replica);
      if (!report.ok) {
        ++verify_failures_;
        record(now, i, "verify_failed", report.describe());
      }
    }
  }

  const Scenario& scenario_;
  SimulationOptions options_;
  Rng rng_;
  std::vector<NodeRuntime> nodes_;
  consensus::Membership membership_;
  consensus::GuardianRegistry guardians_;
  std::map<std::string, ConsensusRound> rounds_;
  std::map<std::pair<Tick, std::uint64_t>, Event> queue_;
  std::uint64_t next_event_seq_ = 0;
  std::uint64_t next_op_seq_ = 1;
  std::size_t verify_failures_ = 0;
  Trace trace_;
};

}  // namespace

SimulationResult run_scenario(const Scenario& scenario,
                              const SimulationOptions& options) {
  validate_scenario(scenario);
  return Simulator(scenario, options).run();
}

}  // namespace erasable::simnet
