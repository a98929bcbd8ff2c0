#include "lfc/lincheck.hpp"

#include <algorithm>
#include <cassert>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_set>

namespace lfc::lincheck {

bool operator==(const Event& a, const Event& b) {
  return a.seq == b.seq && a.thread == b.thread &&
         a.is_response == b.is_response && a.op == b.op && a.obj == b.obj &&
         a.obj2 == b.obj2 && a.arg == b.arg && a.ok == b.ok &&
         a.value == b.value;
}

Recorder::Recorder(unsigned max_threads, std::size_t capacity_per_thread)
    : buffers_(max_threads), capacity_(capacity_per_thread) {
  for (auto& b : buffers_) b.events.reserve(capacity_);
}

unsigned Recorder::register_thread() {
  unsigned t = next_thread_.fetch_add(1);
  if (t >= buffers_.size())
    throw std::logic_error("recorder: more threads than buffers");
  return t;
}

void Recorder::invoke(unsigned thread, OpCode op, unsigned obj, unsigned obj2,
                      word arg) {
  auto& buf = buffers_[thread].events;
  if (buf.size() >= capacity_)
    throw std::runtime_error("recorder: history buffer overflow");
  Event e;
  e.thread = thread;
  e.is_response = false;
  e.op = op;
  e.obj = static_cast<unsigned char>(obj);
  e.obj2 = static_cast<unsigned char>(obj2);
  e.arg = arg;
  e.seq = next_seq_.fetch_add(1);
  buf.push_back(e);
}

void Recorder::respond(unsigned thread, OpCode op, unsigned obj, unsigned obj2,
                       bool ok, word value) {
  auto& buf = buffers_[thread].events;
  if (buf.size() >= capacity_)
    throw std::runtime_error("recorder: history buffer overflow");
  assert(!buf.empty() && !buf.back().is_response &&
         "response without open invocation");
  Event e;
  e.thread = thread;
  e.is_response = true;
  e.op = op;
  e.obj = static_cast<unsigned char>(obj);
  e.obj2 = static_cast<unsigned char>(obj2);
  e.ok = ok;
  e.value = value;
  e.seq = next_seq_.fetch_add(1);
  buf.push_back(e);
}

std::vector<Event> Recorder::merged() const {
  std::vector<Event> all;
  for (const auto& b : buffers_)
    all.insert(all.end(), b.events.begin(), b.events.end());
  std::sort(all.begin(), all.end(),
            [](const Event& a, const Event& b) { return a.seq < b.seq; });
  return all;
}

std::vector<Operation> Recorder::pair(const std::vector<Event>& events) {
  // Per thread, invocations and responses strictly alternate.
  struct Open {
    bool active = false;
    Event inv;
  };
  std::vector<Open> open;
  std::vector<Operation> ops;
  for (const Event& e : events) {
    if (e.thread >= open.size()) open.resize(e.thread + 1);
    Open& o = open[e.thread];
    if (!e.is_response) {
      if (o.active)
        throw std::logic_error("history: invocation while one is open");
      o.active = true;
      o.inv = e;
    } else {
      if (!o.active) throw std::logic_error("history: orphan response");
      if (o.inv.op != e.op || o.inv.obj != e.obj || o.inv.obj2 != e.obj2)
        throw std::logic_error("history: response does not match invocation");
      Operation op;
      op.op = e.op;
      op.obj = e.obj;
      op.obj2 = e.obj2;
      op.arg = o.inv.arg;
      op.ok = e.ok;
      op.value = e.value;
      op.inv_seq = o.inv.seq;
      op.resp_seq = e.seq;
      op.thread = e.thread;
      ops.push_back(op);
      o.active = false;
    }
  }
  for (const Open& o : open)
    if (o.active) throw std::logic_error("history: pending operation at end");
  return ops;
}

namespace {

const char* op_name(OpCode op) {
  switch (op) {
    case OpCode::kInsert: return "ins";
    case OpCode::kRemove: return "rem";
    case OpCode::kMove: return "mov";
  }
  return "?";
}

std::string op_token(const Event& e) {
  std::string t = op_name(e.op);
  t += static_cast<char>('0' + e.obj);
  if (e.op == OpCode::kMove) t += static_cast<char>('0' + e.obj2);
  return t;
}

}  // namespace

void Recorder::write(std::ostream& out, const std::vector<Event>& events) {
  for (const Event& e : events) {
    out << e.seq << ' ' << e.thread << ' ' << (e.is_response ? "res" : "inv")
        << ' ' << op_token(e) << ' ';
    if (!e.is_response && e.op == OpCode::kInsert)
      out << e.arg;
    else
      out << '-';
    out << ' ';
    if (!e.is_response) {
      out << '-';
    } else if (e.op == OpCode::kRemove && e.ok) {
      out << "t:" << e.value;
    } else {
      out << (e.ok ? "t" : "f");
    }
    out << '\n';
  }
}

std::vector<Event> Recorder::parse(std::istream& in) {
  std::vector<Event> events;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    Event e;
    std::string kind, op, arg, result;
    ls >> e.seq >> e.thread >> kind >> op >> arg >> result;
    if (!ls && ls.fail() && !ls.eof())
      throw std::runtime_error("history: malformed line: " + line);
    e.is_response = (kind == "res");
    if (op.size() < 4) throw std::runtime_error("history: bad op: " + op);
    std::string name = op.substr(0, 3);
    if (name == "ins")
      e.op = OpCode::kInsert;
    else if (name == "rem")
      e.op = OpCode::kRemove;
    else if (name == "mov")
      e.op = OpCode::kMove;
    else
      throw std::runtime_error("history: bad op: " + op);
    e.obj = static_cast<unsigned char>(op[3] - '0');
    if (e.op == OpCode::kMove) {
      if (op.size() < 5) throw std::runtime_error("history: bad op: " + op);
      e.obj2 = static_cast<unsigned char>(op[4] - '0');
    }
    if (arg != "-") e.arg = std::stoull(arg);
    if (e.is_response) {
      if (result.empty()) throw std::runtime_error("history: bad result");
      e.ok = result[0] == 't';
      if (result.size() > 2 && result[1] == ':')
        e.value = std::stoull(result.substr(2));
    }
    events.push_back(e);
  }
  return events;
}

bool ProductSpec::apply(State& state, const Operation& op) const {
  auto push = [&](unsigned obj, word v) { state[obj].push_back(v); };
  auto peek = [&](unsigned obj) {
    return kind[obj] == ContainerKind::kFifo ? state[obj].front()
                                             : state[obj].back();
  };
  auto pop = [&](unsigned obj) {
    if (kind[obj] == ContainerKind::kFifo)
      state[obj].erase(state[obj].begin());
    else
      state[obj].pop_back();
  };

  switch (op.op) {
    case OpCode::kInsert:
      if (!op.ok) return false;  // inserts on these containers cannot fail
      push(op.obj, op.arg);
      return true;
    case OpCode::kRemove: {
      if (state[op.obj].empty()) return !op.ok;
      if (!op.ok) return false;
      if (peek(op.obj) != op.value) return false;
      pop(op.obj);
      return true;
    }
    case OpCode::kMove: {
      if (state[op.obj].empty()) return !op.ok;
      if (!op.ok) return false;
      word v = peek(op.obj);
      pop(op.obj);
      push(op.obj2, v);
      return true;
    }
  }
  return false;
}

namespace {

struct BudgetExceeded {};

std::string state_key(std::uint32_t mask, const ProductSpec::State& s) {
  std::string key;
  key.reserve(16 + 8 * (s[0].size() + s[1].size()));
  key.append(reinterpret_cast<const char*>(&mask), sizeof(mask));
  for (const auto& side : s) {
    std::uint32_t n = static_cast<std::uint32_t>(side.size());
    key.append(reinterpret_cast<const char*>(&n), sizeof(n));
    key.append(reinterpret_cast<const char*>(side.data()),
               side.size() * sizeof(word));
  }
  return key;
}

struct Search {
  const std::vector<Operation>& ops;
  const ProductSpec& spec;
  std::size_t budget;
  std::size_t nodes = 0;
  std::unordered_set<std::string> dead;

  bool dfs(std::uint32_t mask, ProductSpec::State& state) {
    if (mask == (std::uint32_t{1} << ops.size()) - 1) return true;
    if (++nodes > budget) throw BudgetExceeded{};
    std::string key = state_key(mask, state);
    if (dead.contains(key)) return false;
    for (std::size_t i = 0; i < ops.size(); ++i) {
      if (mask & (std::uint32_t{1} << i)) continue;
      // Real-time precedence: i is eligible only if every operation that
      // completed before i was invoked is already linearized.
      bool blocked = false;
      for (std::size_t j = 0; j < ops.size(); ++j) {
        if (j == i || (mask & (std::uint32_t{1} << j))) continue;
        if (ops[j].resp_seq < ops[i].inv_seq) {
          blocked = true;
          break;
        }
      }
      if (blocked) continue;
      ProductSpec::State next = state;
      if (!spec.apply(next, ops[i])) continue;
      if (dfs(mask | (std::uint32_t{1} << i), next)) return true;
    }
    dead.insert(std::move(key));
    return false;
  }
};

}  // namespace

CheckOutcome check(const std::vector<Operation>& ops, const ProductSpec& spec,
                   std::size_t max_ops, std::size_t node_budget) {
  if (ops.size() > max_ops || ops.size() > 31) return CheckOutcome::kTooLarge;
  Search s{ops, spec, node_budget, 0, {}};
  ProductSpec::State state;
  try {
    return s.dfs(0, state) ? CheckOutcome::kLinearizable
                           : CheckOutcome::kNotLinearizable;
  } catch (const BudgetExceeded&) {
    return CheckOutcome::kTooLarge;
  }
}

}  // namespace lfc::lincheck
