#ifndef NVGEN_ANALYSIS_HPP
#define NVGEN_ANALYSIS_HPP

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "nvgen/ast.hpp"
#include "nvgen/symbols.hpp"

namespace nvgen {

struct UnknownStatement : std::runtime_error {
  explicit UnknownStatement(const StmtId& id)
      : std::runtime_error("no statement " + id.str()) {}
};

// ---------------------------------------------------------------------------
// Statement enumeration
// ---------------------------------------------------------------------------

struct StmtEntry {
  StmtId id;
  StmtKind kind;
};

inline std::vector<StmtEntry> enumerateStatements(const Program& p) {
  std::vector<StmtEntry> out;
  forEachStmt(p, [&](const StmtId& id, const Stmt& s) { out.push_back({id, s.kind}); });
  return out;
}

inline std::map<StmtKind, double> nodeTypeHistogram(const Program& p) {
  std::map<StmtKind, long long> counts;
  long long total = 0;
  forEachStmt(p, [&](const StmtId&, const Stmt& s) {
    ++counts[s.kind];
    ++total;
  });
  std::map<StmtKind, double> out;
  if (total == 0) return out;
  for (const auto& [k, n] : counts) out[k] = static_cast<double>(n) / static_cast<double>(total);
  return out;
}

// ---------------------------------------------------------------------------
// Scope
// ---------------------------------------------------------------------------

enum class BindingOrigin { Local, Param, Field, StaticField, This };

inline const char* originName(BindingOrigin o) {
  switch (o) {
    case BindingOrigin::Local: return "local";
    case BindingOrigin::Param: return "param";
    case BindingOrigin::Field: return "field";
    case BindingOrigin::StaticField: return "staticField";
    case BindingOrigin::This: return "this";
  }
  return "?";
}

struct ScopeBinding {
  std::string name;
  TypeRef type;
  BindingOrigin origin = BindingOrigin::Local;
};

struct Scope {
  std::vector<ScopeBinding> bindings;

  const ScopeBinding* find(const std::string& n) const {
    for (const auto& b : bindings)
      if (b.name == n) return &b;
    return nullptr;
  }

  std::vector<const ScopeBinding*> ofType(const TypeRef& t) const {
    std::vector<const ScopeBinding*> out;
    for (const auto& b : bindings)
      if (b.type == t) out.push_back(&b);
    return out;
  }

  bool hasType(const TypeRef& t) const {
    for (const auto& b : bindings)
      if (b.type == t) return true;
    return false;
  }
};

struct StmtContext {
  const ClassDecl* hostClass = nullptr;
  const MethodDecl* hostMethod = nullptr;
  int classIdx = -1;
  int methodIdx = -1;
  bool staticContext = false;
};

inline StmtContext stmtContext(const Program& p, const StmtId& id) {
  if (id.classIdx < 0 || id.classIdx >= static_cast<int>(p.classes.size()))
    throw UnknownStatement(id);
  const ClassDecl& cls = p.classes[id.classIdx];
  if (id.methodIdx < 0 || id.methodIdx >= static_cast<int>(cls.methods.size()))
    throw UnknownStatement(id);
  const MethodDecl& m = cls.methods[id.methodIdx];
  return {&cls, &m, id.classIdx, id.methodIdx, m.isStatic};
}

namespace detail {

struct LocalWalk {
  std::vector<std::vector<std::pair<std::string, TypeRef>>> blocks;

  void push() { blocks.emplace_back(); }
  void pop() { blocks.pop_back(); }
  void declare(const std::string& n, const TypeRef& t) { blocks.back().emplace_back(n, t); }

  std::vector<std::pair<std::string, TypeRef>> flatten() const {
    std::vector<std::pair<std::string, TypeRef>> out;
    for (const auto& b : blocks) out.insert(out.end(), b.begin(), b.end());
    return out;
  }
};

// Walks to the statement at `target` maintaining locals-before-point.
inline bool scopeWalk(const std::vector<Stmt>& list, int& counter, int target, LocalWalk& locals,
                      std::vector<std::pair<std::string, TypeRef>>& out) {
  for (const Stmt& s : list) {
    if (counter == target) {
      out = locals.flatten();
      return true;
    }
    ++counter;
    switch (s.kind) {
      case StmtKind::If:
      case StmtKind::Block:
      case StmtKind::While:
        locals.push();
        if (scopeWalk(s.body, counter, target, locals, out)) return true;
        locals.pop();
        if (s.kind == StmtKind::If) {
          locals.push();
          if (scopeWalk(s.elseBody, counter, target, locals, out)) return true;
          locals.pop();
        }
        break;
      case StmtKind::ForCounted:
        locals.push();
        if (s.declaresCounter) locals.declare(s.name, TypeRef::intType());
        if (scopeWalk(s.body, counter, target, locals, out)) return true;
        locals.pop();
        break;
      case StmtKind::ForEach:
        locals.push();
        locals.declare(s.name, s.declType);
        if (scopeWalk(s.body, counter, target, locals, out)) return true;
        locals.pop();
        break;
      case StmtKind::Try:
        locals.push();
        if (scopeWalk(s.body, counter, target, locals, out)) return true;
        locals.pop();
        locals.push();
        locals.declare(s.name, TypeRef::stringType());
        if (scopeWalk(s.elseBody, counter, target, locals, out)) return true;
        locals.pop();
        break;
      case StmtKind::VarDecl:
        locals.declare(s.name, s.declType);
        break;
      default:
        break;
    }
  }
  return false;
}

}  // namespace detail

// Names visible at (strictly before) the statement: params, locals declared
// before the point, fields of the host class, and this. A static host method
// sees only static fields and no this. Shadowed fields are not listed.
inline Scope scopeAt(const Program& p, const StmtId& id) {
  StmtContext ctx = stmtContext(p, id);
  detail::LocalWalk walk;
  walk.push();
  std::vector<std::pair<std::string, TypeRef>> locals;
  int counter = 0;
  if (!detail::scopeWalk(ctx.hostMethod->body, counter, id.pre, walk, locals))
    throw UnknownStatement(id);

  Scope scope;
  std::set<std::string> taken;
  for (const auto& pr : ctx.hostMethod->params) {
    scope.bindings.push_back({pr.name, pr.type, BindingOrigin::Param});
    taken.insert(pr.name);
  }
  for (const auto& [n, t] : locals) {
    scope.bindings.push_back({n, t, BindingOrigin::Local});
    taken.insert(n);
  }
  for (const auto& f : ctx.hostClass->fields) {
    if (taken.count(f.name)) continue;  // shadowed by a param or local
    if (ctx.staticContext && !f.isStatic) continue;
    scope.bindings.push_back(
        {f.name, f.type, f.isStatic ? BindingOrigin::StaticField : BindingOrigin::Field});
  }
  if (!ctx.staticContext)
    scope.bindings.push_back({"this", TypeRef::classType(ctx.hostClass->name), BindingOrigin::This});
  return scope;
}

// ---------------------------------------------------------------------------
// Free variables and reference-site rewriting
// ---------------------------------------------------------------------------

struct FreeVar {
  std::string key;  // "var:x" or "this"
  std::string display;
  TypeRef type;
  bool usedAsLvalue = false;
};

// A reference site inside a statement subtree. Qualified statics (C.f) and
// bare calls resolve against the program globally, so they are not sites.
struct RefSite {
  enum class Kind { Var, This, CallReceiver, CounterName } kind = Kind::Var;
  Expr* expr = nullptr;   // Var/This/CallReceiver
  Stmt* stmt = nullptr;   // CounterName (assign-form loop counter slot)
  std::string key;
  TypeRef type;
  bool lvalue = false;  // written to; such sites cannot be bound to 'this'
};

namespace detail {

class RefWalker {
 public:
  RefWalker(const Scope& outer, const std::string& hostClassName)
      : outer_(outer), hostClassName_(hostClassName) {}

  // Collect reference sites; declared-name slots are reported through declFn.
  void walk(Stmt& s, const std::function<void(RefSite)>& siteFn,
            const std::function<void(std::string&)>& declFn) {
    siteFn_ = siteFn;
    declFn_ = declFn;
    declared_.clear();
    declared_.emplace_back();
    walkStmt(s);
  }

 private:
  const Scope& outer_;
  std::string hostClassName_;
  std::function<void(RefSite)> siteFn_;
  std::function<void(std::string&)> declFn_;
  std::vector<std::set<std::string>> declared_;
  bool lvalueMode_ = false;

  bool isDeclared(const std::string& n) const {
    for (const auto& b : declared_)
      if (b.count(n)) return true;
    return false;
  }

  void declare(const std::string& n) { declared_.back().insert(n); }

  void emitVar(Expr& e, const std::string& name) {
    if (isDeclared(name)) {
      RefSite site;
      site.kind = RefSite::Kind::Var;
      site.expr = &e;
      site.key = "";  // declared within the subtree; renamed, not bound
      site.lvalue = lvalueMode_;
      siteFn_(site);
      return;
    }
    const ScopeBinding* b = outer_.find(name);
    RefSite site;
    site.kind = RefSite::Kind::Var;
    site.expr = &e;
    site.lvalue = lvalueMode_;
    if (b) {
      site.key = "var:" + name;
      site.type = b->type;
    } else {
      site.key = "?:" + name;  // unresolvable here; statement is not bindable
    }
    siteFn_(site);
  }

  void walkExpr(Expr& e) {
    switch (e.kind) {
      case ExprKind::VarRef:
        emitVar(e, e.name);
        return;
      case ExprKind::ThisRef: {
        RefSite site;
        site.kind = RefSite::Kind::This;
        site.expr = &e;
        site.key = "this";
        site.type = TypeRef::classType(hostClassName_);
        siteFn_(site);
        return;
      }
      case ExprKind::FieldRef: {
        // this.f counts as one variable of the field's type
        RefSite site;
        site.kind = RefSite::Kind::Var;
        site.expr = &e;
        site.lvalue = lvalueMode_;
        const ScopeBinding* b = outer_.find(e.name);
        if (b && (b->origin == BindingOrigin::Field || b->origin == BindingOrigin::StaticField)) {
          site.key = "var:" + e.name;
          site.type = b->type;
        } else {
          site.key = "?:this." + e.name;
        }
        siteFn_(site);
        return;
      }
      case ExprKind::StaticRef:
        return;  // globally valid, kept verbatim
      case ExprKind::Call: {
        if (e.recv == RecvKind::This) {
          RefSite site;
          site.kind = RefSite::Kind::CallReceiver;
          site.expr = &e;
          site.key = "this";
          site.type = TypeRef::classType(hostClassName_);
          siteFn_(site);
        } else if (e.recv == RecvKind::Name) {
          if (isDeclared(e.qualifier)) {
            RefSite site;
            site.kind = RefSite::Kind::CallReceiver;
            site.expr = &e;
            site.key = "";
            siteFn_(site);
          } else if (const ScopeBinding* b = outer_.find(e.qualifier)) {
            RefSite site;
            site.kind = RefSite::Kind::CallReceiver;
            site.expr = &e;
            site.key = "var:" + e.qualifier;
            site.type = b->type;
            siteFn_(site);
          }
          // otherwise a class name: kept verbatim
        }
        for (Expr& k : e.kids) walkExpr(k);
        return;
      }
      default:
        for (Expr& k : e.kids) walkExpr(k);
        return;
    }
  }

  void walkStmt(Stmt& s) {
    switch (s.kind) {
      case StmtKind::VarDecl:
        for (Expr& e : s.exprs) walkExpr(e);
        declare(s.name);
        declFn_(s.name);
        return;
      case StmtKind::Assignment:
        lvalueMode_ = true;
        walkExpr(s.exprs[0]);
        lvalueMode_ = false;
        walkExpr(s.exprs[1]);
        return;
      case StmtKind::ForCounted: {
        walkExpr(s.exprs[0]);  // init value: counter not yet visible
        if (s.declaresCounter) {
          declared_.emplace_back();
          declare(s.name);
          declFn_(s.name);
        } else {
          // assign-form counter: the name slot plus every VarRef below
          if (!isDeclared(s.name)) {
            RefSite site;
            site.kind = RefSite::Kind::CounterName;
            site.stmt = &s;
            const ScopeBinding* b = outer_.find(s.name);
            site.key = b ? "var:" + s.name : "?:" + s.name;
            if (b) site.type = b->type;
            siteFn_(site);
          } else {
            RefSite site;
            site.kind = RefSite::Kind::CounterName;
            site.stmt = &s;
            site.key = "";
            siteFn_(site);
          }
          declared_.emplace_back();
        }
        walkExpr(s.exprs[1]);
        walkExpr(s.exprs[2]);
        for (Stmt& c : s.body) walkStmt(c);
        declared_.pop_back();
        return;
      }
      case StmtKind::ForEach:
        walkExpr(s.exprs[0]);
        declared_.emplace_back();
        declare(s.name);
        declFn_(s.name);
        for (Stmt& c : s.body) walkStmt(c);
        declared_.pop_back();
        return;
      case StmtKind::Try:
        declared_.emplace_back();
        for (Stmt& c : s.body) walkStmt(c);
        declared_.pop_back();
        declared_.emplace_back();
        declare(s.name);
        declFn_(s.name);
        for (Stmt& c : s.elseBody) walkStmt(c);
        declared_.pop_back();
        return;
      case StmtKind::If:
        walkExpr(s.exprs[0]);
        declared_.emplace_back();
        for (Stmt& c : s.body) walkStmt(c);
        declared_.pop_back();
        declared_.emplace_back();
        for (Stmt& c : s.elseBody) walkStmt(c);
        declared_.pop_back();
        return;
      case StmtKind::While:
      case StmtKind::Block:
        for (Expr& e : s.exprs) walkExpr(e);
        declared_.emplace_back();
        for (Stmt& c : s.body) walkStmt(c);
        declared_.pop_back();
        return;
      default:
        for (Expr& e : s.exprs) walkExpr(e);
        return;
    }
  }
};

}  // namespace detail

// Free variables of a statement in its own context, in first-use order.
// Statements using names that do not resolve (should not happen on checked
// programs) yield a FreeVar with key starting "?:".
inline std::vector<FreeVar> collectFreeVars(const Program& p, const StmtId& id) {
  const Stmt* s = findStmt(p, id);
  if (!s) throw UnknownStatement(id);
  StmtContext ctx = stmtContext(p, id);
  Scope outer = scopeAt(p, id);

  std::vector<FreeVar> out;
  std::map<std::string, size_t> seen;
  detail::RefWalker walker(outer, ctx.hostClass->name);
  walker.walk(const_cast<Stmt&>(*s),
              [&](RefSite site) {
                if (site.key.empty()) return;
                auto it = seen.find(site.key);
                if (it == seen.end()) {
                  std::string display = site.key == "this" ? "this" : site.key.substr(4);
                  seen[site.key] = out.size();
                  out.push_back({site.key, display, site.type, site.lvalue});
                } else if (site.lvalue) {
                  out[it->second].usedAsLvalue = true;
                }
              },
              [](std::string&) {});
  return out;
}

// ---------------------------------------------------------------------------
// Type signatures
// ---------------------------------------------------------------------------

struct TypeSignature {
  std::vector<TypeRef> usedVarTypes;  // multiset, sorted
  TypeRef returnType = TypeRef::voidType();
};

// Lightweight expression typing for already-checked programs.
inline TypeRef exprTypeInScope(const ProgramInfo& info, const StmtContext& ctx,
                               const Scope& scope, const Expr& e) {
  switch (e.kind) {
    case ExprKind::IntLit: return TypeRef::intType();
    case ExprKind::BoolLit: return TypeRef::boolType();
    case ExprKind::StringLit: return TypeRef::stringType();
    case ExprKind::NullLit: return TypeRef::nullType();
    case ExprKind::VarRef: {
      const ScopeBinding* b = scope.find(e.name);
      return b ? b->type : TypeRef::voidType();
    }
    case ExprKind::ThisRef:
      return ctx.hostClass ? TypeRef::classType(ctx.hostClass->name) : TypeRef::voidType();
    case ExprKind::FieldRef: {
      if (!ctx.hostClass) return TypeRef::voidType();
      const FieldDecl* f = info.findField(*ctx.hostClass, e.name);
      return f ? f->type : TypeRef::voidType();
    }
    case ExprKind::StaticRef: {
      const ClassDecl* c = info.findClass(e.qualifier);
      const FieldDecl* f = c ? info.findField(*c, e.name) : nullptr;
      return f ? f->type : TypeRef::voidType();
    }
    case ExprKind::New:
      return TypeRef::classType(e.name);
    case ExprKind::Unary:
      return e.unOp == UnaryOp::Not ? TypeRef::boolType() : TypeRef::intType();
    case ExprKind::Binary:
      switch (e.binOp) {
        case BinaryOp::Add:
          return exprTypeInScope(info, ctx, scope, e.kids[0]) == TypeRef::stringType()
                     ? TypeRef::stringType()
                     : TypeRef::intType();
        case BinaryOp::Sub:
        case BinaryOp::Mul:
        case BinaryOp::Div:
        case BinaryOp::Mod:
          return TypeRef::intType();
        default:
          return TypeRef::boolType();
      }
    case ExprKind::Ternary: {
      TypeRef a = exprTypeInScope(info, ctx, scope, e.kids[1]);
      if (a.kind == TypeKind::Null) return exprTypeInScope(info, ctx, scope, e.kids[2]);
      return a;
    }
    case ExprKind::Call: {
      if (e.recv == RecvKind::Bare || e.recv == RecvKind::This) {
        if (!ctx.hostClass) return TypeRef::voidType();
        const MethodDecl* m = info.findMethod(*ctx.hostClass, e.name);
        return m ? m->returnType : TypeRef::voidType();
      }
      if (const ScopeBinding* b = scope.find(e.qualifier)) {
        std::string iface = info.builtinIfaceOf(b->type);
        if (!iface.empty()) {
          const BuiltinMethod* bm = findBuiltinMethod(iface, e.name);
          return bm ? bm->returnType : TypeRef::voidType();
        }
        if (b->type.kind == TypeKind::Interface) {
          const InterfaceDecl* i = info.findInterface(b->type.name);
          const MethodSig* sig = i ? info.findInterfaceMethod(*i, e.name) : nullptr;
          return sig ? sig->returnType : TypeRef::voidType();
        }
        if (b->type.kind == TypeKind::Class) {
          const ClassDecl* c = info.findClass(b->type.name);
          const MethodDecl* m = c ? info.findMethod(*c, e.name) : nullptr;
          return m ? m->returnType : TypeRef::voidType();
        }
        return TypeRef::voidType();
      }
      const ClassDecl* c = info.findClass(e.qualifier);
      const MethodDecl* m = c ? info.findMethod(*c, e.name) : nullptr;
      return m ? m->returnType : TypeRef::voidType();
    }
  }
  return TypeRef::voidType();
}

// Free-variable type multiset plus the statement's return type (the host
// method's return type when the returned expression is a collection element).
inline TypeSignature signatureOf(const Program& p, const ProgramInfo& info, const StmtId& id) {
  const Stmt* s = findStmt(p, id);
  if (!s) throw UnknownStatement(id);
  TypeSignature sig;
  for (const FreeVar& fv : collectFreeVars(p, id)) sig.usedVarTypes.push_back(fv.type);
  std::sort(sig.usedVarTypes.begin(), sig.usedVarTypes.end());
  if (s->kind == StmtKind::Return && !s->exprs.empty()) {
    StmtContext ctx = stmtContext(p, id);
    Scope scope = scopeAt(p, id);
    TypeRef t = exprTypeInScope(info, ctx, scope, s->exprs[0]);
    sig.returnType = t.kind == TypeKind::Elem ? ctx.hostMethod->returnType : t;
  }
  return sig;
}

inline TypeSignature signatureOf(const Program& p, const StmtId& id) {
  ProgramInfo info(p);
  return signatureOf(p, info, id);
}

// Names declared anywhere within a statement subtree.
inline std::set<std::string> declaredNamesIn(const Stmt& s) {
  std::set<std::string> out;
  std::function<void(const Stmt&)> rec = [&](const Stmt& st) {
    switch (st.kind) {
      case StmtKind::VarDecl:
      case StmtKind::ForEach:
      case StmtKind::Try:
        out.insert(st.name);
        break;
      case StmtKind::ForCounted:
        if (st.declaresCounter) out.insert(st.name);
        break;
      default:
        break;
    }
    for (const auto* list : childLists(st))
      for (const Stmt& c : *list) rec(c);
  };
  rec(s);
  return out;
}

}  // namespace nvgen

#endif  // NVGEN_ANALYSIS_HPP
