#ifndef NVGEN_TRACE_HPP
#define NVGEN_TRACE_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "nvgen/ast.hpp"

namespace nvgen {

using ordered_json = nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Probe events
// ---------------------------------------------------------------------------

enum class ProbeKind { Call, Return, Branch, LoopIndex };

inline const char* probeKindName(ProbeKind k) {
  switch (k) {
    case ProbeKind::Call: return "call";
    case ProbeKind::Return: return "return";
    case ProbeKind::Branch: return "branch";
    case ProbeKind::LoopIndex: return "loopIndex";
  }
  return "?";
}

// One probe event. Field use per kind:
//   call/return  caller, callee
//   branch       stmtId, index = 1 for the then arm, 0 for the else arm
//   loopIndex    stmtId, index = counter value; no index marks a loop entry
struct ProbeEvent {
  ProbeKind kind = ProbeKind::Call;
  std::string caller;
  std::string callee;
  std::string stmtId;
  std::optional<long long> index;

  friend bool operator==(const ProbeEvent& a, const ProbeEvent& b) {
    return a.kind == b.kind && a.caller == b.caller && a.callee == b.callee &&
           a.stmtId == b.stmtId && a.index == b.index;
  }
  friend bool operator!=(const ProbeEvent& a, const ProbeEvent& b) { return !(a == b); }

  // JSON-lines field order: kind, caller, callee, stmtId, index
  ordered_json toJson() const {
    ordered_json j;
    j["kind"] = probeKindName(kind);
    switch (kind) {
      case ProbeKind::Call:
      case ProbeKind::Return:
        j["caller"] = caller;
        j["callee"] = callee;
        break;
      case ProbeKind::Branch:
      case ProbeKind::LoopIndex:
        j["stmtId"] = stmtId;
        if (index) j["index"] = *index;
        else j["index"] = nullptr;
        break;
    }
    return j;
  }

  static ProbeEvent fromJson(const ordered_json& j) {
    ProbeEvent e;
    std::string k = j.at("kind").get<std::string>();
    if (k == "call") e.kind = ProbeKind::Call;
    else if (k == "return") e.kind = ProbeKind::Return;
    else if (k == "branch") e.kind = ProbeKind::Branch;
    else if (k == "loopIndex") e.kind = ProbeKind::LoopIndex;
    else throw std::runtime_error("bad probe kind: " + k);
    if (j.contains("caller")) e.caller = j["caller"].get<std::string>();
    if (j.contains("callee")) e.callee = j["callee"].get<std::string>();
    if (j.contains("stmtId")) e.stmtId = j["stmtId"].get<std::string>();
    if (j.contains("index") && !j["index"].is_null()) e.index = j["index"].get<long long>();
    return e;
  }
};

struct ProbeConfig {
  bool calls = false;
  bool builtinCalls = false;  // collection method entries count as calls
  bool branches = false;
  bool allLoopIndexes = false;
  std::set<std::string> loopStmtIds;

  bool any() const { return calls || builtinCalls || branches || allLoopIndexes || !loopStmtIds.empty(); }

  bool wantsLoop(const std::string& id) const {
    return allLoopIndexes || loopStmtIds.count(id) > 0;
  }

  std::string key() const {
    std::string k = "c";
    k += calls ? '1' : '0';
    k += builtinCalls ? '1' : '0';
    k += branches ? '1' : '0';
    k += allLoopIndexes ? '1' : '0';
    for (const auto& s : loopStmtIds) k += ":" + s;
    return k;
  }

  static ProbeConfig callsOnly() {
    ProbeConfig c;
    c.calls = true;
    return c;
  }
  static ProbeConfig callsWithBuiltins() {
    ProbeConfig c;
    c.calls = true;
    c.builtinCalls = true;
    return c;
  }
  static ProbeConfig callsAndBranches() {
    ProbeConfig c;
    c.calls = true;
    c.branches = true;
    return c;
  }
  static ProbeConfig loopIndexAt(const std::string& stmtId) {
    ProbeConfig c;
    c.loopStmtIds.insert(stmtId);
    return c;
  }
};

struct ExecutionTrace {
  std::string probeKey;
  std::vector<ProbeEvent> events;

  std::string toJsonl() const {
    std::string out;
    ordered_json head;
    head["probeKey"] = probeKey;
    out += head.dump();
    out += '\n';
    for (const auto& e : events) {
      out += e.toJson().dump();
      out += '\n';
    }
    return out;
  }

  static ExecutionTrace fromJsonl(const std::string& text) {
    ExecutionTrace t;
    size_t pos = 0;
    bool first = true;
    while (pos < text.size()) {
      size_t nl = text.find('\n', pos);
      if (nl == std::string::npos) nl = text.size();
      std::string line = text.substr(pos, nl - pos);
      pos = nl + 1;
      if (line.empty()) continue;
      ordered_json j = ordered_json::parse(line);
      if (first) {
        t.probeKey = j.at("probeKey").get<std::string>();
        first = false;
      } else {
        t.events.push_back(ProbeEvent::fromJson(j));
      }
    }
    return t;
  }
};

// ---------------------------------------------------------------------------
// Probe sinks
// ---------------------------------------------------------------------------

struct ProbeSink {
  virtual ~ProbeSink() = default;
  virtual void onEvent(const ProbeEvent& e) = 0;
};

struct TraceRecorder : ProbeSink {
  ExecutionTrace trace;
  void onEvent(const ProbeEvent& e) override { trace.events.push_back(e); }
};

struct DivergenceResult {
  bool diverged = false;
  long long firstDivergenceIndex = -1;
  std::string summary;

  ordered_json toJson() const {
    ordered_json j;
    j["diverged"] = diverged;
    if (diverged) j["firstDivergenceIndex"] = firstDivergenceIndex;
    j["summary"] = summary;
    return j;
  }
};

// Streaming comparison against a stored original trace: variant events are
// matched by position and never stored. After the run, finish() flags a
// variant stream that ended early.
class StreamingComparator : public ProbeSink {
 public:
  explicit StreamingComparator(const ExecutionTrace& original) : original_(&original) {}

  void onEvent(const ProbeEvent& e) override {
    if (result_.diverged) return;
    if (cursor_ >= original_->events.size()) {
      result_.diverged = true;
      result_.firstDivergenceIndex = static_cast<long long>(cursor_);
      result_.summary = "added event: " + e.toJson().dump();
      return;
    }
    if (!(original_->events[cursor_] == e)) {
      result_.diverged = true;
      result_.firstDivergenceIndex = static_cast<long long>(cursor_);
      result_.summary = "changed event: original " +
                        original_->events[cursor_].toJson().dump() + " vs variant " +
                        e.toJson().dump();
      return;
    }
    ++cursor_;
  }

  DivergenceResult finish() {
    if (!result_.diverged && cursor_ < original_->events.size()) {
      result_.diverged = true;
      result_.firstDivergenceIndex = static_cast<long long>(cursor_);
      result_.summary =
          "removed event: " + original_->events[cursor_].toJson().dump();
    }
    if (!result_.diverged) result_.summary = "traces identical (" +
                                             std::to_string(cursor_) + " events)";
    return result_;
  }

 private:
  const ExecutionTrace* original_;
  size_t cursor_ = 0;
  DivergenceResult result_;
};

struct ProbeConfigMismatch : std::runtime_error {
  ProbeConfigMismatch(const std::string& a, const std::string& b)
      : std::runtime_error("probe configs differ: '" + a + "' vs '" + b + "'") {}
};

inline DivergenceResult detectDivergence(const ExecutionTrace& original,
                                         const ExecutionTrace& variant) {
  if (original.probeKey != variant.probeKey)
    throw ProbeConfigMismatch(original.probeKey, variant.probeKey);
  StreamingComparator cmp(original);
  for (const auto& e : variant.events) cmp.onEvent(e);
  return cmp.finish();
}

// ---------------------------------------------------------------------------
// Call matrix
// ---------------------------------------------------------------------------

struct UnbalancedTrace : std::runtime_error {
  UnbalancedTrace() : std::runtime_error("call/return events are not balanced") {}
};

struct CallMatrix {
  std::vector<std::string> methods;  // sorted
  std::vector<std::vector<long long>> counts;

  int indexOf(const std::string& m) const {
    auto it = std::lower_bound(methods.begin(), methods.end(), m);
    if (it == methods.end() || *it != m) return -1;
    return static_cast<int>(it - methods.begin());
  }

  long long at(const std::string& caller, const std::string& callee) const {
    int a = indexOf(caller), b = indexOf(callee);
    if (a < 0 || b < 0) return 0;
    return counts[a][b];
  }
};

inline CallMatrix buildCallMatrix(const ExecutionTrace& trace) {
  std::set<std::string> names;
  long long depth = 0;
  for (const auto& e : trace.events) {
    if (e.kind == ProbeKind::Call) {
      names.insert(e.caller);
      names.insert(e.callee);
      ++depth;
    } else if (e.kind == ProbeKind::Return) {
      --depth;
      if (depth < 0) throw UnbalancedTrace();
    }
  }
  if (depth != 0) throw UnbalancedTrace();

  CallMatrix m;
  m.methods.assign(names.begin(), names.end());
  m.counts.assign(m.methods.size(), std::vector<long long>(m.methods.size(), 0));
  for (const auto& e : trace.events) {
    if (e.kind != ProbeKind::Call) continue;
    ++m.counts[m.indexOf(e.caller)][m.indexOf(e.callee)];
  }
  return m;
}

// Nonzero (caller, callee) -> variant - original, over the unioned method set.
inline std::map<std::pair<std::string, std::string>, long long> diffCallMatrices(
    const CallMatrix& original, const CallMatrix& variant) {
  std::map<std::pair<std::string, std::string>, long long> delta;
  std::set<std::string> all(original.methods.begin(), original.methods.end());
  all.insert(variant.methods.begin(), variant.methods.end());
  for (const auto& a : all)
    for (const auto& b : all) {
      long long d = variant.at(a, b) - original.at(a, b);
      if (d != 0) delta[{a, b}] = d;
    }
  return delta;
}

// ---------------------------------------------------------------------------
// Call tree
// ---------------------------------------------------------------------------

struct CallTree {
  std::string label;       // method name or branch marker
  bool isBranch = false;
  std::vector<CallTree> children;
};

inline CallTree buildCallTree(const ExecutionTrace& trace, const std::string& rootLabel) {
  CallTree root;
  root.label = rootLabel;
  std::vector<CallTree*> stack{&root};
  for (const auto& e : trace.events) {
    switch (e.kind) {
      case ProbeKind::Call: {
        stack.back()->children.push_back(CallTree{e.callee, false, {}});
        stack.push_back(&stack.back()->children.back());
        break;
      }
      case ProbeKind::Return:
        if (stack.size() <= 1) throw UnbalancedTrace();
        stack.pop_back();
        break;
      case ProbeKind::Branch: {
        std::string marker = e.stmtId + (e.index && *e.index == 1 ? ":then" : ":else");
        stack.back()->children.push_back(CallTree{marker, true, {}});
        break;
      }
      case ProbeKind::LoopIndex:
        break;
    }
  }
  if (stack.size() != 1) throw UnbalancedTrace();
  return root;
}

// Edge-count projection of a call tree; equals buildCallMatrix on the same
// event stream when branch probes are ignored.
inline std::map<std::pair<std::string, std::string>, long long> callEdgeCounts(
    const CallTree& tree) {
  std::map<std::pair<std::string, std::string>, long long> out;
  std::function<void(const CallTree&)> rec = [&](const CallTree& n) {
    for (const auto& c : n.children) {
      if (!c.isBranch) {
        ++out[{n.label, c.label}];
        rec(c);
      }
    }
  };
  rec(tree);
  return out;
}

inline std::string callTreeToDot(const CallTree& tree) {
  std::string out = "digraph calltree {\n  node [shape=ellipse];\n";
  int next = 0;
  std::function<int(const CallTree&)> rec = [&](const CallTree& n) -> int {
    int id = next++;
    std::string shape = n.isBranch ? " shape=box" : "";
    out += "  n" + std::to_string(id) + " [label=\"" + n.label + "\"" + shape + "];\n";
    for (const auto& c : n.children) {
      int cid = rec(c);
      out += "  n" + std::to_string(id) + " -> n" + std::to_string(cid) + ";\n";
    }
    return id;
  };
  rec(tree);
  out += "}\n";
  return out;
}

// ---------------------------------------------------------------------------
// Loop index traces
// ---------------------------------------------------------------------------

struct MissingProbe : std::runtime_error {
  explicit MissingProbe(const std::string& id)
      : std::runtime_error("no loopIndex events for " + id) {}
};

struct IndexTraceComparison {
  bool reversedPerEntry = false;
  int entryCount = 0;
  int firstMismatchEntry = -1;
  std::string details;
};

inline std::vector<std::vector<long long>> splitIndexSegments(const ExecutionTrace& t,
                                                              const std::string& loopStmtId) {
  std::vector<std::vector<long long>> segments;
  bool sawAny = false;
  for (const auto& e : t.events) {
    if (e.kind != ProbeKind::LoopIndex || e.stmtId != loopStmtId) continue;
    sawAny = true;
    if (!e.index) {
      segments.emplace_back();  // entry marker
    } else {
      if (segments.empty()) segments.emplace_back();
      segments.back().push_back(*e.index);
    }
  }
  if (!sawAny) throw MissingProbe(loopStmtId);
  return segments;
}

// Per loop entry, the variant must visit exactly the original's index values
// in reverse order.
inline IndexTraceComparison compareIndexTraces(const ExecutionTrace& original,
                                               const ExecutionTrace& variant,
                                               const std::string& loopStmtId) {
  auto a = splitIndexSegments(original, loopStmtId);
  auto b = splitIndexSegments(variant, loopStmtId);
  IndexTraceComparison r;
  r.entryCount = static_cast<int>(a.size());
  if (a.size() != b.size()) {
    r.details = "entry counts differ: " + std::to_string(a.size()) + " vs " +
                std::to_string(b.size());
    return r;
  }
  for (size_t i = 0; i < a.size(); ++i) {
    std::vector<long long> rev(b[i].rbegin(), b[i].rend());
    if (rev != a[i]) {
      r.firstMismatchEntry = static_cast<int>(i);
      r.details = "entry " + std::to_string(i) + " is not a reversal";
      return r;
    }
  }
  r.reversedPerEntry = true;
  r.details = "all " + std::to_string(a.size()) + " entries reversed";
  return r;
}

}  // namespace nvgen

#endif  // NVGEN_TRACE_HPP
