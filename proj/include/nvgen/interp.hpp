#ifndef NVGEN_INTERP_HPP
#define NVGEN_INTERP_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "nvgen/analysis.hpp"
#include "nvgen/ast.hpp"
#include "nvgen/symbols.hpp"
#include "nvgen/trace.hpp"

namespace nvgen {

// ---------------------------------------------------------------------------
// Runtime values
// ---------------------------------------------------------------------------

struct ObjRef {
  int id = -1;
  friend bool operator==(const ObjRef& a, const ObjRef& b) { return a.id == b.id; }
};

// monostate is null
using Value = std::variant<std::monostate, long long, bool, std::string, ObjRef>;

inline bool valueEquals(const Value& a, const Value& b) { return a == b; }

inline bool isNullValue(const Value& v) { return std::holds_alternative<std::monostate>(v); }

// Documented element hash: ints (and bools as 0/1) multiply by 2654435761
// and truncate to 32 bits; strings use the base-31 polynomial mod 2^32.
inline std::uint32_t elementHash(const Value& v) {
  if (const auto* i = std::get_if<long long>(&v))
    return static_cast<std::uint32_t>(static_cast<std::uint64_t>(*i) * 2654435761ULL);
  if (const auto* b = std::get_if<bool>(&v))
    return static_cast<std::uint32_t>((*b ? 1ULL : 0ULL) * 2654435761ULL);
  if (const auto* s = std::get_if<std::string>(&v)) {
    std::uint32_t h = 0;
    for (unsigned char c : *s) h = h * 31u + c;
    return h;
  }
  return 0;
}

// tag-major ordering: ints, then bools, then strings
inline int elementTag(const Value& v) {
  if (std::holds_alternative<long long>(v)) return 0;
  if (std::holds_alternative<bool>(v)) return 1;
  if (std::holds_alternative<std::string>(v)) return 2;
  return 3;
}

inline bool elementLess(const Value& a, const Value& b) {
  int ta = elementTag(a), tb = elementTag(b);
  if (ta != tb) return ta < tb;
  switch (ta) {
    case 0: return std::get<long long>(a) < std::get<long long>(b);
    case 1: return std::get<bool>(a) < std::get<bool>(b);
    case 2: return std::get<std::string>(a) < std::get<std::string>(b);
    default: return false;
  }
}

inline bool hashLess(const Value& a, const Value& b) {
  std::uint32_t ha = elementHash(a), hb = elementHash(b);
  if (ha != hb) return ha < hb;
  return elementLess(a, b);
}

enum class BuiltinKind { None, ArrayList, LinkedList, HashSet, TreeSet, HashMap, LinkedMap, TreeMap };

inline BuiltinKind builtinKindOf(const std::string& cls) {
  if (cls == "ArrayListImpl") return BuiltinKind::ArrayList;
  if (cls == "LinkedListImpl") return BuiltinKind::LinkedList;
  if (cls == "HashSetImpl") return BuiltinKind::HashSet;
  if (cls == "TreeSetImpl") return BuiltinKind::TreeSet;
  if (cls == "HashMapImpl") return BuiltinKind::HashMap;
  if (cls == "LinkedMapImpl") return BuiltinKind::LinkedMap;
  if (cls == "TreeMapImpl") return BuiltinKind::TreeMap;
  return BuiltinKind::None;
}

struct Obj {
  std::string className;
  BuiltinKind builtin = BuiltinKind::None;
  std::vector<Value> elems;                      // lists and sets, insertion order
  std::vector<std::pair<Value, Value>> entries;  // maps, insertion order
  std::map<std::string, Value> fields;           // user objects
};

// ---------------------------------------------------------------------------
// Test outcomes
// ---------------------------------------------------------------------------

enum class TestStatus { Pass, Fail, Error, FuelExhausted };

inline const char* testStatusName(TestStatus s) {
  switch (s) {
    case TestStatus::Pass: return "Pass";
    case TestStatus::Fail: return "Fail";
    case TestStatus::Error: return "Error";
    case TestStatus::FuelExhausted: return "FuelExhausted";
  }
  return "?";
}

struct TestOutcome {
  std::string testName;
  TestStatus status = TestStatus::Pass;
  std::string detail;
  long long stepsUsed = 0;
  ExecutionTrace trace;  // populated when probes were enabled
};

struct RunLimits {
  long long fuel = 1000000;
  int maxDepth = 200;
};

struct UnknownTest : std::runtime_error {
  explicit UnknownTest(const std::string& n) : std::runtime_error("no test named " + n) {}
};

struct CoverageMap {
  std::map<StmtId, std::vector<std::string>> perStatement;  // sorted test names

  bool covered(const StmtId& id) const { return perStatement.count(id) > 0; }

  int tcOf(const StmtId& id) const {
    auto it = perStatement.find(id);
    return it == perStatement.end() ? 0 : static_cast<int>(it->second.size());
  }

  std::vector<StmtId> coveredIds() const {
    std::vector<StmtId> out;
    for (const auto& [id, _] : perStatement) out.push_back(id);
    return out;
  }
};

// ---------------------------------------------------------------------------
// Interpreter
// ---------------------------------------------------------------------------

// Big-step evaluator. One instance per test execution; all state is reset in
// runTest, so sharing the (immutable) program across threads is safe as long
// as each worker owns its interpreter.
class Interpreter {
 public:
  Interpreter(const Program& p, const ProgramInfo& info) : p_(p), info_(info) {
    forEachStmt(p, [&](const StmtId& id, const Stmt& s) { ids_[&s] = id; });
    buildProbeLabels(p, labels_);
  }

  // Branch and loop probes are addressed by kind-ordinal labels like
  // "c0.m1.if2" / "c0.m1.for0" (k-th if/for of the method in pre-order), so
  // single-statement edits elsewhere in a method do not relabel them.
  static void buildProbeLabels(const Program& p, std::map<const Stmt*, std::string>& out) {
    for (int ci = 0; ci < static_cast<int>(p.classes.size()); ++ci) {
      const ClassDecl& cls = p.classes[ci];
      for (int mi = 0; mi < static_cast<int>(cls.methods.size()); ++mi) {
        int ifOrd = 0, forOrd = 0;
        std::string prefix = "c" + std::to_string(ci) + ".m" + std::to_string(mi) + ".";
        forEachStmtInBody(cls.methods[mi].body, [&](int, const Stmt& s) {
          if (s.kind == StmtKind::If) out[&s] = prefix + "if" + std::to_string(ifOrd++);
          else if (s.kind == StmtKind::ForCounted)
            out[&s] = prefix + "for" + std::to_string(forOrd++);
        });
      }
    }
  }

  // Coverage collection target; when set, executed statement ids are added.
  std::set<StmtId>* coverageOut = nullptr;

  TestOutcome runTest(const std::string& testName, const ProbeConfig& cfg, RunLimits limits,
                      ProbeSink* externalSink = nullptr) {
    const TestDecl* test = nullptr;
    for (const auto& t : p_.tests)
      if (t.name == testName) test = &t;
    if (!test) throw UnknownTest(testName);

    cfg_ = cfg;
    limits_ = limits;
    used_ = 0;
    depth_ = 0;
    heap_.clear();
    statics_.clear();
    recorder_.trace = ExecutionTrace{};
    recorder_.trace.probeKey = cfg.key();
    sink_ = externalSink ? externalSink : static_cast<ProbeSink*>(&recorder_);

    TestOutcome out;
    out.testName = testName;
    try {
      initStatics();
      Frame frame;
      frame.callableName = "test:" + testName;
      frame.blocks.emplace_back();
      execBody(test->body, frame);
      out.status = TestStatus::Pass;
    } catch (const AssertFail& a) {
      out.status = TestStatus::Fail;
      out.detail = a.message;
    } catch (const SubjectThrow& t) {
      out.status = TestStatus::Fail;
      out.detail = "uncaught exception: " + t.message;
    } catch (const FuelOut&) {
      out.status = TestStatus::FuelExhausted;
      out.detail = "fuel budget exhausted";
    } catch (const DepthOut&) {
      out.status = TestStatus::Error;
      out.detail = "call depth limit exceeded";
    }
    out.stepsUsed = used_;
    if (!externalSink && cfg.any()) out.trace = std::move(recorder_.trace);
    return out;
  }

 private:
  // control-flow signals
  struct AssertFail {
    std::string message;
  };
  struct SubjectThrow {
    std::string message;
  };
  struct FuelOut {};
  struct DepthOut {};
  struct BreakSignal {};
  struct ContinueSignal {};
  struct ReturnSignal {
    Value value;
  };

  struct Frame {
    std::vector<std::map<std::string, Value>> blocks;
    Value self;  // monostate in static and test contexts
    const ClassDecl* cls = nullptr;
    const MethodDecl* method = nullptr;
    std::string callableName;

    Value* findLocal(const std::string& n) {
      for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
        auto f = it->find(n);
        if (f != it->end()) return &f->second;
      }
      return nullptr;
    }
  };

  const Program& p_;
  const ProgramInfo& info_;
  std::map<const Stmt*, StmtId> ids_;
  std::map<const Stmt*, std::string> labels_;
  ProbeConfig cfg_;
  RunLimits limits_;
  long long used_ = 0;
  int depth_ = 0;
  std::vector<Obj> heap_;
  std::map<std::pair<std::string, std::string>, Value> statics_;
  TraceRecorder recorder_;
  ProbeSink* sink_ = nullptr;

  void charge() {
    if (used_ >= limits_.fuel) throw FuelOut{};
    ++used_;
  }

  void emit(const ProbeEvent& e) { sink_->onEvent(e); }

  // ---- construction ----

  static Value defaultValue(const TypeRef& t) {
    switch (t.kind) {
      case TypeKind::Int: return Value{static_cast<long long>(0)};
      case TypeKind::Bool: return Value{false};
      case TypeKind::String: return Value{std::string()};
      default: return Value{std::monostate{}};
    }
  }

  void initStatics() {
    for (const auto& cls : p_.classes) {
      for (const auto& f : cls.fields) {
        if (!f.isStatic) continue;
        Frame frame;
        frame.cls = &cls;
        frame.callableName = cls.name + ".<static-init>";
        frame.blocks.emplace_back();
        Value v = f.init ? evalExpr(*f.init, frame) : defaultValue(f.type);
        storeChecked(v, f.type, "static field " + cls.name + "." + f.name);
        statics_[{cls.name, f.name}] = v;
      }
    }
  }

  Value instantiate(const std::string& className) {
    BuiltinKind bk = builtinKindOf(className);
    Obj obj;
    obj.className = className;
    obj.builtin = bk;
    heap_.push_back(std::move(obj));
    ObjRef ref{static_cast<int>(heap_.size()) - 1};
    if (bk == BuiltinKind::None) {
      const ClassDecl* cls = info_.findClass(className);
      for (const auto& f : cls->fields) {
        if (f.isStatic) continue;
        Frame frame;
        frame.cls = cls;
        frame.self = ref;
        frame.callableName = className + ".<init>";
        frame.blocks.emplace_back();
        Value v = f.init ? evalExpr(*f.init, frame) : defaultValue(f.type);
        storeChecked(v, f.type, "field " + className + "." + f.name);
        heap_[ref.id].fields[f.name] = v;
      }
    }
    return ref;
  }

  // Runtime tag check on writes into declared slots; only collection
  // elements can actually mismatch in checked programs.
  void storeChecked(const Value& v, const TypeRef& target, const std::string& what) {
    if (isNullValue(v)) {
      if (target.isReference()) return;
      throw SubjectThrow{"TypeError: null into " + target.str() + " (" + what + ")"};
    }
    switch (target.kind) {
      case TypeKind::Int:
        if (!std::holds_alternative<long long>(v))
          throw SubjectThrow{"TypeError: element is not int (" + what + ")"};
        return;
      case TypeKind::Bool:
        if (!std::holds_alternative<bool>(v))
          throw SubjectThrow{"TypeError: element is not bool (" + what + ")"};
        return;
      case TypeKind::String:
        if (!std::holds_alternative<std::string>(v))
          throw SubjectThrow{"TypeError: element is not string (" + what + ")"};
        return;
      default:
        if (!std::holds_alternative<ObjRef>(v))
          throw SubjectThrow{"TypeError: not an object (" + what + ")"};
        return;
    }
  }

  // ---- statements ----

  void execBody(const std::vector<Stmt>& body, Frame& f) {
    for (const Stmt& s : body) execStmt(s, f);
  }

  void execScopedBody(const std::vector<Stmt>& body, Frame& f) {
    f.blocks.emplace_back();
    struct Pop {
      Frame& fr;
      ~Pop() { fr.blocks.pop_back(); }
    } pop{f};
    execBody(body, f);
  }

  void execStmt(const Stmt& s, Frame& f) {
    charge();
    if (coverageOut) {
      auto it = ids_.find(&s);
      if (it != ids_.end()) coverageOut->insert(it->second);
    }
    switch (s.kind) {
      case StmtKind::VarDecl: {
        Value v = s.exprs.empty() ? defaultValue(s.declType) : evalExpr(s.exprs[0], f);
        storeChecked(v, s.declType, "variable " + s.name);
        f.blocks.back()[s.name] = v;
        return;
      }
      case StmtKind::Assignment: {
        Value v = evalExpr(s.exprs[1], f);
        assignTo(s.exprs[0], v, f);
        return;
      }
      case StmtKind::Invocation: {
        const Expr& call = s.exprs[0];
        if (call.recv == RecvKind::Bare && call.name == "assert") {
          Value v = evalExpr(call.kids[0], f);
          if (!std::get<bool>(v))
            throw AssertFail{"assertion failed at " + std::to_string(s.span.begin.line) + ":" +
                             std::to_string(s.span.begin.col)};
          return;
        }
        evalExpr(call, f);
        return;
      }
      case StmtKind::ConstructorCall:
        evalExpr(s.exprs[0], f);
        return;
      case StmtKind::Return:
        throw ReturnSignal{s.exprs.empty() ? Value{std::monostate{}} : evalExpr(s.exprs[0], f)};
      case StmtKind::Throw: {
        Value v = evalExpr(s.exprs[0], f);
        throw SubjectThrow{std::get<std::string>(v)};
      }
      case StmtKind::Break:
        throw BreakSignal{};
      case StmtKind::Continue:
        throw ContinueSignal{};
      case StmtKind::Block:
        execScopedBody(s.body, f);
        return;
      case StmtKind::If: {
        bool cond = std::get<bool>(evalExpr(s.exprs[0], f));
        if (cfg_.branches) {
          auto it = labels_.find(&s);
          if (it != labels_.end()) {
            ProbeEvent e;
            e.kind = ProbeKind::Branch;
            e.stmtId = it->second;
            e.index = cond ? 1 : 0;
            emit(e);
          }
        }
        execScopedBody(cond ? s.body : s.elseBody, f);
        return;
      }
      case StmtKind::While: {
        for (;;) {
          charge();
          if (!std::get<bool>(evalExpr(s.exprs[0], f))) break;
          try {
            execScopedBody(s.body, f);
          } catch (const BreakSignal&) {
            break;
          } catch (const ContinueSignal&) {
          }
        }
        return;
      }
      case StmtKind::ForCounted:
        execForCounted(s, f);
        return;
      case StmtKind::ForEach:
        execForEach(s, f);
        return;
      case StmtKind::Try: {
        try {
          execScopedBody(s.body, f);
        } catch (const SubjectThrow& t) {
          f.blocks.emplace_back();
          struct Pop {
            Frame& fr;
            ~Pop() { fr.blocks.pop_back(); }
          } pop{f};
          f.blocks.back()[s.name] = Value{t.message};
          execBody(s.elseBody, f);
        }
        return;
      }
    }
  }

  void execForCounted(const Stmt& s, Frame& f) {
    std::string stmtIdStr;
    bool probeLoop = false;
    {
      auto it = labels_.find(&s);
      if (it != labels_.end()) {
        stmtIdStr = it->second;
        probeLoop = cfg_.wantsLoop(stmtIdStr);
      }
    }

    f.blocks.emplace_back();
    struct Pop {
      Frame& fr;
      ~Pop() { fr.blocks.pop_back(); }
    } pop{f};

    Value init = evalExpr(s.exprs[0], f);
    if (s.declaresCounter) f.blocks.back()[s.name] = init;
    else assignTo(Expr::varRef(s.name), init, f);

    if (probeLoop) {
      ProbeEvent e;
      e.kind = ProbeKind::LoopIndex;
      e.stmtId = stmtIdStr;
      emit(e);  // entry marker: no index
    }

    for (;;) {
      charge();
      if (!std::get<bool>(evalExpr(s.exprs[1], f))) break;
      if (probeLoop) {
        ProbeEvent e;
        e.kind = ProbeKind::LoopIndex;
        e.stmtId = stmtIdStr;
        e.index = std::get<long long>(readVar(s.name, f));
        emit(e);
      }
      bool broke = false;
      try {
        execScopedBody(s.body, f);
      } catch (const BreakSignal&) {
        broke = true;
      } catch (const ContinueSignal&) {
      }
      if (broke) break;
      Value next = evalExpr(s.exprs[2], f);
      if (s.declaresCounter) *f.findLocal(s.name) = next;
      else assignTo(Expr::varRef(s.name), next, f);
    }
  }

  void execForEach(const Stmt& s, Frame& f) {
    Value coll = evalExpr(s.exprs[0], f);
    if (isNullValue(coll)) throw SubjectThrow{"NullError: for-each over null"};
    std::vector<Value> items = iterationOrder(std::get<ObjRef>(coll));
    for (const Value& item : items) {
      charge();
      storeChecked(item, s.declType, "for-each variable " + s.name);
      f.blocks.emplace_back();
      struct Pop {
        Frame& fr;
        ~Pop() { fr.blocks.pop_back(); }
      } pop{f};
      f.blocks.back()[s.name] = item;
      try {
        execBody(s.body, f);
      } catch (const BreakSignal&) {
        break;
      } catch (const ContinueSignal&) {
      }
    }
  }

  std::vector<Value> iterationOrder(const ObjRef& ref) {
    const Obj& obj = heap_[ref.id];
    std::vector<Value> items;
    switch (obj.builtin) {
      case BuiltinKind::ArrayList:
      case BuiltinKind::LinkedList:
        return obj.elems;
      case BuiltinKind::HashSet:
        items = obj.elems;
        std::sort(items.begin(), items.end(), hashLess);
        return items;
      case BuiltinKind::TreeSet:
        items = obj.elems;
        std::sort(items.begin(), items.end(), elementLess);
        return items;
      case BuiltinKind::HashMap:
      case BuiltinKind::LinkedMap:
      case BuiltinKind::TreeMap: {
        for (const auto& [k, v] : obj.entries) items.push_back(k);
        if (obj.builtin == BuiltinKind::HashMap)
          std::sort(items.begin(), items.end(), hashLess);
        else if (obj.builtin == BuiltinKind::TreeMap)
          std::sort(items.begin(), items.end(), elementLess);
        return items;
      }
      default:
        throw SubjectThrow{"TypeError: not a collection"};
    }
  }

  // ---- variable access ----

  Value readVar(const std::string& name, Frame& f) {
    if (Value* v = f.findLocal(name)) return *v;
    if (f.cls) {
      const FieldDecl* fd = info_.findField(*f.cls, name);
      if (fd) {
        if (fd->isStatic) return statics_[{f.cls->name, name}];
        const ObjRef& self = std::get<ObjRef>(f.self);
        return heap_[self.id].fields[name];
      }
    }
    throw SubjectThrow{"InternalError: unbound variable " + name};
  }

  void assignTo(const Expr& lhs, const Value& v, Frame& f) {
    switch (lhs.kind) {
      case ExprKind::VarRef: {
        if (Value* slot = f.findLocal(lhs.name)) {
          *slot = v;  // tag stability is guaranteed by the checker + storeChecked at decl
          return;
        }
        if (f.cls) {
          const FieldDecl* fd = info_.findField(*f.cls, lhs.name);
          if (fd) {
            storeChecked(v, fd->type, "field " + f.cls->name + "." + lhs.name);
            if (fd->isStatic) {
              statics_[{f.cls->name, lhs.name}] = v;
            } else {
              heap_[std::get<ObjRef>(f.self).id].fields[lhs.name] = v;
            }
            return;
          }
        }
        throw SubjectThrow{"InternalError: unbound variable " + lhs.name};
      }
      case ExprKind::FieldRef: {
        const FieldDecl* fd = info_.findField(*f.cls, lhs.name);
        storeChecked(v, fd->type, "field " + f.cls->name + "." + lhs.name);
        if (fd->isStatic) statics_[{f.cls->name, lhs.name}] = v;
        else heap_[std::get<ObjRef>(f.self).id].fields[lhs.name] = v;
        return;
      }
      case ExprKind::StaticRef: {
        const ClassDecl* cls = info_.findClass(lhs.qualifier);
        const FieldDecl* fd = info_.findField(*cls, lhs.name);
        storeChecked(v, fd->type, "static field " + lhs.qualifier + "." + lhs.name);
        statics_[{lhs.qualifier, lhs.name}] = v;
        return;
      }
      default:
        throw SubjectThrow{"InternalError: bad assignment target"};
    }
  }

  // ---- expressions ----

  Value evalExpr(const Expr& e, Frame& f) {
    charge();
    switch (e.kind) {
      case ExprKind::IntLit: return Value{e.intValue};
      case ExprKind::BoolLit: return Value{e.boolValue};
      case ExprKind::StringLit: return Value{e.strValue};
      case ExprKind::NullLit: return Value{std::monostate{}};
      case ExprKind::VarRef: return readVar(e.name, f);
      case ExprKind::ThisRef: return f.self;
      case ExprKind::FieldRef: {
        const FieldDecl* fd = info_.findField(*f.cls, e.name);
        if (fd->isStatic) return statics_[{f.cls->name, e.name}];
        return heap_[std::get<ObjRef>(f.self).id].fields[e.name];
      }
      case ExprKind::StaticRef:
        return statics_[{e.qualifier, e.name}];
      case ExprKind::New:
        return instantiate(e.name);
      case ExprKind::Unary: {
        Value v = evalExpr(e.kids[0], f);
        if (e.unOp == UnaryOp::Not) return Value{!std::get<bool>(v)};
        return Value{static_cast<long long>(
            -static_cast<unsigned long long>(std::get<long long>(v)))};
      }
      case ExprKind::Binary:
        return evalBinary(e, f);
      case ExprKind::Ternary: {
        bool c = std::get<bool>(evalExpr(e.kids[0], f));
        return evalExpr(e.kids[c ? 1 : 2], f);
      }
      case ExprKind::Call:
        return evalCall(e, f);
    }
    return Value{std::monostate{}};
  }

  Value evalBinary(const Expr& e, Frame& f) {
    // short-circuit forms first
    if (e.binOp == BinaryOp::And) {
      if (!std::get<bool>(evalExpr(e.kids[0], f))) return Value{false};
      return Value{std::get<bool>(evalExpr(e.kids[1], f))};
    }
    if (e.binOp == BinaryOp::Or) {
      if (std::get<bool>(evalExpr(e.kids[0], f))) return Value{true};
      return Value{std::get<bool>(evalExpr(e.kids[1], f))};
    }

    Value a = evalExpr(e.kids[0], f);
    Value b = evalExpr(e.kids[1], f);
    switch (e.binOp) {
      case BinaryOp::Add:
        if (std::holds_alternative<std::string>(a))
          return Value{std::get<std::string>(a) + std::get<std::string>(b)};
        return Value{wrapAdd(std::get<long long>(a), std::get<long long>(b))};
      case BinaryOp::Sub:
        return Value{wrapSub(std::get<long long>(a), std::get<long long>(b))};
      case BinaryOp::Mul:
        return Value{wrapMul(std::get<long long>(a), std::get<long long>(b))};
      case BinaryOp::Div: {
        long long d = std::get<long long>(b);
        if (d == 0) throw SubjectThrow{"DivByZero"};
        long long n = std::get<long long>(a);
        if (n == INT64_MIN && d == -1) return Value{n};  // wraps
        return Value{n / d};
      }
      case BinaryOp::Mod: {
        long long d = std::get<long long>(b);
        if (d == 0) throw SubjectThrow{"DivByZero"};
        long long n = std::get<long long>(a);
        if (n == INT64_MIN && d == -1) return Value{static_cast<long long>(0)};
        return Value{n % d};
      }
      case BinaryOp::Lt: return Value{std::get<long long>(a) < std::get<long long>(b)};
      case BinaryOp::Le: return Value{std::get<long long>(a) <= std::get<long long>(b)};
      case BinaryOp::Gt: return Value{std::get<long long>(a) > std::get<long long>(b)};
      case BinaryOp::Ge: return Value{std::get<long long>(a) >= std::get<long long>(b)};
      case BinaryOp::Eq: return Value{valueEquals(a, b)};
      case BinaryOp::Ne: return Value{!valueEquals(a, b)};
      default: return Value{std::monostate{}};
    }
  }

  static long long wrapAdd(long long a, long long b) {
    return static_cast<long long>(static_cast<unsigned long long>(a) +
                                  static_cast<unsigned long long>(b));
  }
  static long long wrapSub(long long a, long long b) {
    return static_cast<long long>(static_cast<unsigned long long>(a) -
                                  static_cast<unsigned long long>(b));
  }
  static long long wrapMul(long long a, long long b) {
    return static_cast<long long>(static_cast<unsigned long long>(a) *
                                  static_cast<unsigned long long>(b));
  }

  // ---- calls ----

  Value evalCall(const Expr& e, Frame& f) {
    // resolve receiver
    if (e.recv == RecvKind::Bare) {
      const MethodDecl* m = f.cls ? info_.findMethod(*f.cls, e.name) : nullptr;
      if (!m) throw SubjectThrow{"InternalError: unresolved call " + e.name};
      return invokeUser(*f.cls, *m, m->isStatic ? Value{std::monostate{}} : f.self, e, f);
    }
    if (e.recv == RecvKind::This) {
      const MethodDecl* m = f.cls ? info_.findMethod(*f.cls, e.name) : nullptr;
      if (!m) throw SubjectThrow{"InternalError: unresolved call " + e.name};
      return invokeUser(*f.cls, *m, f.self, e, f);
    }
    // Name receiver: local/field variable wins, then class name
    Value recv;
    bool haveVar = false;
    if (Value* v = f.findLocal(e.qualifier)) {
      recv = *v;
      haveVar = true;
    } else if (f.cls) {
      const FieldDecl* fd = info_.findField(*f.cls, e.qualifier);
      if (fd && (fd->isStatic || std::holds_alternative<ObjRef>(f.self))) {
        recv = fd->isStatic ? statics_[{f.cls->name, e.qualifier}]
                            : heap_[std::get<ObjRef>(f.self).id].fields[e.qualifier];
        haveVar = true;
      }
    }
    if (haveVar) {
      if (isNullValue(recv)) throw SubjectThrow{"NullError: call on null"};
      const ObjRef& ref = std::get<ObjRef>(recv);
      if (heap_[ref.id].builtin != BuiltinKind::None) return invokeBuiltin(ref, e, f);
      const ClassDecl* cls = info_.findClass(heap_[ref.id].className);
      const MethodDecl* m = cls ? info_.findMethod(*cls, e.name) : nullptr;
      if (!m) throw SubjectThrow{"InternalError: unresolved call " + e.name};
      return invokeUser(*cls, *m, recv, e, f);
    }
    const ClassDecl* cls = info_.findClass(e.qualifier);
    const MethodDecl* m = cls ? info_.findMethod(*cls, e.name) : nullptr;
    if (!m) throw SubjectThrow{"InternalError: unresolved call " + e.qualifier + "." + e.name};
    return invokeUser(*cls, *m, Value{std::monostate{}}, e, f);
  }

  Value invokeUser(const ClassDecl& cls, const MethodDecl& m, Value self, const Expr& e,
                   Frame& caller) {
    if (depth_ >= limits_.maxDepth) throw DepthOut{};
    std::vector<Value> args;
    args.reserve(e.kids.size());
    for (const Expr& a : e.kids) args.push_back(evalExpr(a, caller));

    std::string calleeName = cls.name + "." + m.name;
    if (cfg_.calls) {
      ProbeEvent ev;
      ev.kind = ProbeKind::Call;
      ev.caller = caller.callableName;
      ev.callee = calleeName;
      emit(ev);
    }
    struct ReturnProbe {
      Interpreter& in;
      std::string caller, callee;
      bool active;
      ~ReturnProbe() {
        if (!active) return;
        ProbeEvent ev;
        ev.kind = ProbeKind::Return;
        ev.caller = caller;
        ev.callee = callee;
        in.emit(ev);
      }
    } retProbe{*this, caller.callableName, calleeName, cfg_.calls};

    Frame frame;
    frame.cls = &cls;
    frame.method = &m;
    frame.self = m.isStatic ? Value{std::monostate{}} : self;
    frame.callableName = calleeName;
    frame.blocks.emplace_back();
    for (size_t i = 0; i < m.params.size(); ++i) {
      storeChecked(args[i], m.params[i].type, "parameter " + m.params[i].name);
      frame.blocks.back()[m.params[i].name] = args[i];
    }

    ++depth_;
    struct DepthGuard {
      int& d;
      ~DepthGuard() { --d; }
    } dg{depth_};

    Value result{std::monostate{}};
    try {
      execBody(m.body, frame);
    } catch (const ReturnSignal& r) {
      result = r.value;
    }
    if (!m.returnType.isVoid())
      storeChecked(result, m.returnType, "return of " + calleeName);
    return result;
  }

  Value invokeBuiltin(const ObjRef& ref, const Expr& e, Frame& caller) {
    std::vector<Value> args;
    args.reserve(e.kids.size());
    for (const Expr& a : e.kids) args.push_back(evalExpr(a, caller));
    for (const Value& a : args)
      if (std::holds_alternative<ObjRef>(a))
        throw SubjectThrow{"TypeError: collections hold int, bool or string"};

    std::string calleeName = heap_[ref.id].className + "." + e.name;
    bool probed = cfg_.calls && cfg_.builtinCalls;
    if (probed) {
      ProbeEvent ev;
      ev.kind = ProbeKind::Call;
      ev.caller = caller.callableName;
      ev.callee = calleeName;
      emit(ev);
      charge();
      Value r = builtinOp(ref, e.name, args);
      ProbeEvent rv;
      rv.kind = ProbeKind::Return;
      rv.caller = caller.callableName;
      rv.callee = calleeName;
      emit(rv);
      return r;
    }
    charge();
    return builtinOp(ref, e.name, args);
  }

  Value builtinOp(const ObjRef& ref, const std::string& name, const std::vector<Value>& args) {
    Obj& obj = heap_[ref.id];
    bool isList = obj.builtin == BuiltinKind::ArrayList || obj.builtin == BuiltinKind::LinkedList;
    bool isSet = obj.builtin == BuiltinKind::HashSet || obj.builtin == BuiltinKind::TreeSet;

    if (isList) {
      if (name == "add") {
        obj.elems.push_back(args[0]);
        return Value{std::monostate{}};
      }
      if (name == "get") {
        long long i = std::get<long long>(args[0]);
        if (i < 0 || i >= static_cast<long long>(obj.elems.size()))
          throw SubjectThrow{"IndexOutOfBounds: " + std::to_string(i)};
        return obj.elems[static_cast<size_t>(i)];
      }
      if (name == "set") {
        long long i = std::get<long long>(args[0]);
        if (i < 0 || i >= static_cast<long long>(obj.elems.size()))
          throw SubjectThrow{"IndexOutOfBounds: " + std::to_string(i)};
        obj.elems[static_cast<size_t>(i)] = args[1];
        return Value{std::monostate{}};
      }
      if (name == "size") return Value{static_cast<long long>(obj.elems.size())};
      if (name == "contains") {
        for (const Value& v : obj.elems)
          if (valueEquals(v, args[0])) return Value{true};
        return Value{false};
      }
      if (name == "remove") {
        for (size_t i = 0; i < obj.elems.size(); ++i)
          if (valueEquals(obj.elems[i], args[0])) {
            obj.elems.erase(obj.elems.begin() + static_cast<long>(i));
            return Value{true};
          }
        return Value{false};
      }
      if (name == "clear") {
        obj.elems.clear();
        return Value{std::monostate{}};
      }
    } else if (isSet) {
      if (name == "add") {
        for (const Value& v : obj.elems)
          if (valueEquals(v, args[0])) return Value{false};
        obj.elems.push_back(args[0]);
        return Value{true};
      }
      if (name == "contains") {
        for (const Value& v : obj.elems)
          if (valueEquals(v, args[0])) return Value{true};
        return Value{false};
      }
      if (name == "remove") {
        for (size_t i = 0; i < obj.elems.size(); ++i)
          if (valueEquals(obj.elems[i], args[0])) {
            obj.elems.erase(obj.elems.begin() + static_cast<long>(i));
            return Value{true};
          }
        return Value{false};
      }
      if (name == "size") return Value{static_cast<long long>(obj.elems.size())};
      if (name == "clear") {
        obj.elems.clear();
        return Value{std::monostate{}};
      }
    } else {
      if (name == "put") {
        for (auto& [k, v] : obj.entries)
          if (valueEquals(k, args[0])) {
            v = args[1];  // keeps insertion position
            return Value{std::monostate{}};
          }
        obj.entries.emplace_back(args[0], args[1]);
        return Value{std::monostate{}};
      }
      if (name == "get") {
        for (const auto& [k, v] : obj.entries)
          if (valueEquals(k, args[0])) return v;
        throw SubjectThrow{"MissingKey"};
      }
      if (name == "containsKey") {
        for (const auto& [k, v] : obj.entries)
          if (valueEquals(k, args[0])) return Value{true};
        return Value{false};
      }
      if (name == "remove") {
        for (size_t i = 0; i < obj.entries.size(); ++i)
          if (valueEquals(obj.entries[i].first, args[0])) {
            obj.entries.erase(obj.entries.begin() + static_cast<long>(i));
            return Value{true};
          }
        return Value{false};
      }
      if (name == "size") return Value{static_cast<long long>(obj.entries.size())};
      if (name == "clear") {
        obj.entries.clear();
        return Value{std::monostate{}};
      }
    }
    throw SubjectThrow{"InternalError: unknown builtin method " + name};
  }
};

// ---------------------------------------------------------------------------
// Suite helpers
// ---------------------------------------------------------------------------

struct SuiteResult {
  std::vector<TestOutcome> outcomes;
  bool degenerate = false;  // empty suite: vacuously passing

  bool allPass() const {
    for (const auto& o : outcomes)
      if (o.status != TestStatus::Pass) return false;
    return true;
  }
};

inline TestOutcome runTest(const Program& p, const ProgramInfo& info, const std::string& name,
                           const ProbeConfig& cfg = {}, RunLimits limits = {},
                           ProbeSink* sink = nullptr) {
  Interpreter in(p, info);
  return in.runTest(name, cfg, limits, sink);
}

inline SuiteResult runSuite(const Program& p, const ProgramInfo& info,
                            const ProbeConfig& cfg = {}, RunLimits limits = {}) {
  SuiteResult r;
  r.degenerate = p.tests.empty();
  Interpreter in(p, info);
  for (const auto& t : p.tests) r.outcomes.push_back(in.runTest(t.name, cfg, limits));
  return r;
}

// Probe label ("c0.m1.for0" style) for a statement, or "" when it has none.
inline std::string probeLabelOf(const Program& p, const StmtId& id) {
  const Stmt* s = findStmt(p, id);
  if (!s) return "";
  std::map<const Stmt*, std::string> labels;
  Interpreter::buildProbeLabels(p, labels);
  auto it = labels.find(s);
  return it == labels.end() ? "" : it->second;
}

inline CoverageMap computeCoverage(const Program& p, const ProgramInfo& info,
                                   RunLimits limits = {}) {
  CoverageMap cov;
  Interpreter in(p, info);
  for (const auto& t : p.tests) {
    std::set<StmtId> executed;
    in.coverageOut = &executed;
    in.runTest(t.name, ProbeConfig{}, limits);
    in.coverageOut = nullptr;
    for (const auto& id : executed) cov.perStatement[id].push_back(t.name);
  }
  return cov;
}

}  // namespace nvgen

#endif  // NVGEN_INTERP_HPP
