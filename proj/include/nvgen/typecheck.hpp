#ifndef NVGEN_TYPECHECK_HPP
#define NVGEN_TYPECHECK_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "nvgen/ast.hpp"
#include "nvgen/symbols.hpp"

namespace nvgen {

struct TypeError {
  std::string code;
  std::string message;
  SourcePos pos;
};

struct CheckResult {
  std::vector<TypeError> errors;
  bool ok() const { return errors.empty(); }
};

// Static checker. "Compiles" for this language means this returns no errors.
// There is no reachability analysis; a non-void method needs its body's last
// statement (recursively through if/try) to return.
class TypeChecker {
 public:
  explicit TypeChecker(const Program& p) : p_(p), info_(p) {}

  CheckResult run() {
    checkTopLevelNames();
    for (const auto& cls : p_.classes) checkClass(cls);
    std::set<std::string> testNames;
    for (const auto& t : p_.tests) {
      if (!testNames.insert(t.name).second)
        err("DuplicateName", "duplicate test '" + t.name + "'", {});
      Ctx ctx;
      ctx.inTest = true;
      ctx.isStatic = true;
      ctx.returnType = TypeRef::voidType();
      Locals locals;
      locals.push();
      checkBody(t.body, ctx, locals);
    }
    return CheckResult{errors_};
  }

 private:
  const Program& p_;
  ProgramInfo info_;
  std::vector<TypeError> errors_;

  struct Ctx {
    const ClassDecl* hostClass = nullptr;
    const MethodDecl* hostMethod = nullptr;
    bool isStatic = false;
    bool inTest = false;
    int loopDepth = 0;
    TypeRef returnType;
  };

  struct Locals {
    std::vector<std::map<std::string, TypeRef>> blocks;
    void push() { blocks.emplace_back(); }
    void pop() { blocks.pop_back(); }
    const TypeRef* find(const std::string& n) const {
      for (auto it = blocks.rbegin(); it != blocks.rend(); ++it) {
        auto f = it->find(n);
        if (f != it->end()) return &f->second;
      }
      return nullptr;
    }
    bool declare(const std::string& n, const TypeRef& t) {
      if (find(n)) return false;
      blocks.back()[n] = t;
      return true;
    }
  };

  void err(const std::string& code, const std::string& msg, SourcePos pos) {
    errors_.push_back({code, msg, pos});
  }

  // ---- declarations ----

  void checkTopLevelNames() {
    std::set<std::string> names;
    for (const auto& i : p_.interfaces) {
      if (isBuiltinInterface(i.name) || isBuiltinImpl(i.name))
        err("DuplicateName", "'" + i.name + "' is a builtin name", {});
      if (!names.insert(i.name).second)
        err("DuplicateName", "duplicate type '" + i.name + "'", {});
      std::set<std::string> ms;
      for (const auto& m : i.methods) {
        if (!ms.insert(m.name).second)
          err("DuplicateName", "duplicate method '" + m.name + "' in interface " + i.name, {});
        checkTypeDefined(m.returnType, {});
        for (const auto& pr : m.params) checkTypeDefined(pr.type, {});
      }
    }
    for (const auto& c : p_.classes) {
      if (isBuiltinInterface(c.name) || isBuiltinImpl(c.name))
        err("DuplicateName", "'" + c.name + "' is a builtin name", {});
      if (!names.insert(c.name).second)
        err("DuplicateName", "duplicate type '" + c.name + "'", {});
    }
  }

  void checkTypeDefined(const TypeRef& t, SourcePos pos) {
    if (t.kind == TypeKind::Class || t.kind == TypeKind::Interface) {
      if (!info_.isTypeName(t.name))
        err("UnknownType", "unknown type '" + t.name + "'", pos);
    }
  }

  void checkClass(const ClassDecl& cls) {
    for (const auto& ifaceName : cls.interfaces) {
      if (isBuiltinInterface(ifaceName)) {
        err("SealedInterface",
            "builtin interface '" + ifaceName + "' cannot be implemented by user classes", {});
        continue;
      }
      const InterfaceDecl* iface = info_.findInterface(ifaceName);
      if (!iface) {
        err("UnknownType", "unknown interface '" + ifaceName + "'", {});
        continue;
      }
      for (const auto& sig : iface->methods) {
        const MethodDecl* impl = info_.findMethod(cls, sig.name);
        bool match = impl && !impl->isStatic && impl->isPublic &&
                     impl->returnType == sig.returnType &&
                     impl->params.size() == sig.params.size();
        if (match) {
          for (size_t i = 0; i < sig.params.size(); ++i)
            if (impl->params[i].type != sig.params[i].type) match = false;
        }
        if (!match)
          err("InterfaceNotSatisfied",
              "class " + cls.name + " does not implement " + ifaceName + "." + sig.name, {});
      }
    }

    std::set<std::string> fieldNames;
    for (size_t fi = 0; fi < cls.fields.size(); ++fi) {
      const FieldDecl& f = cls.fields[fi];
      if (!fieldNames.insert(f.name).second)
        err("DuplicateName", "duplicate field '" + f.name + "' in " + cls.name, {});
      checkTypeDefined(f.type, {});
      if (f.init) {
        Ctx ctx;
        ctx.hostClass = &cls;
        ctx.isStatic = f.isStatic;
        Locals locals;
        locals.push();
        TypeRef t = typeExpr(*f.init, ctx, locals);
        if (t.kind != TypeKind::Elem && !info_.assignableStrict(f.type, t))
          err("TypeMismatch",
              "cannot initialize field " + f.name + " : " + f.type.str() + " with " + t.str(),
              f.init->span.begin);
        if (t.kind == TypeKind::Elem)
          err("ElemContext", "collection element needs a typed variable first", f.init->span.begin);
      }
    }

    std::set<std::string> methodNames;
    for (const auto& m : cls.methods) {
      if (!methodNames.insert(m.name).second)
        err("DuplicateName", "duplicate method '" + m.name + "' in " + cls.name, m.span.begin);
      checkTypeDefined(m.returnType, m.span.begin);
      Ctx ctx;
      ctx.hostClass = &cls;
      ctx.hostMethod = &m;
      ctx.isStatic = m.isStatic;
      ctx.returnType = m.returnType;
      Locals locals;
      locals.push();
      std::set<std::string> paramNames;
      for (const auto& pr : m.params) {
        checkTypeDefined(pr.type, m.span.begin);
        if (!paramNames.insert(pr.name).second)
          err("DuplicateName", "duplicate parameter '" + pr.name + "'", m.span.begin);
        locals.declare(pr.name, pr.type);
      }
      checkBody(m.body, ctx, locals);
      if (!m.returnType.isVoid() && !bodyReturns(m.body))
        err("MissingReturn", "method " + cls.name + "." + m.name + " must return a value",
            m.span.begin);
    }
  }

  static bool stmtReturns(const Stmt& s) {
    switch (s.kind) {
      case StmtKind::Return:
      case StmtKind::Throw:
        return true;
      case StmtKind::If:
        return !s.elseBody.empty() && bodyReturns(s.body) && bodyReturns(s.elseBody);
      case StmtKind::Try:
        return bodyReturns(s.body) && bodyReturns(s.elseBody);
      case StmtKind::Block:
        return bodyReturns(s.body);
      default:
        return false;
    }
  }

  static bool bodyReturns(const std::vector<Stmt>& body) {
    return !body.empty() && stmtReturns(body.back());
  }

  // ---- statements ----

  void checkBody(const std::vector<Stmt>& body, Ctx& ctx, Locals& locals) {
    for (const auto& s : body) checkStmt(s, ctx, locals);
  }

  void checkScopedBody(const std::vector<Stmt>& body, Ctx& ctx, Locals& locals) {
    locals.push();
    checkBody(body, ctx, locals);
    locals.pop();
  }

  void checkStmt(const Stmt& s, Ctx& ctx, Locals& locals) {
    switch (s.kind) {
      case StmtKind::VarDecl: {
        checkTypeDefined(s.declType, s.span.begin);
        if (s.declType.isVoid()) err("TypeMismatch", "variable cannot be void", s.span.begin);
        if (!s.exprs.empty()) {
          TypeRef t = typeExpr(s.exprs[0], ctx, locals);
          if (t.kind == TypeKind::Elem) {
            if (!s.declType.isPrimitive())
              err("ElemContext", "collection element must land in a primitive variable",
                  s.span.begin);
          } else if (!info_.assignableStrict(s.declType, t)) {
            err("TypeMismatch",
                "cannot assign " + t.str() + " to " + s.declType.str() + " " + s.name,
                s.span.begin);
          }
        }
        if (!locals.declare(s.name, s.declType))
          err("DuplicateName", "variable '" + s.name + "' already declared", s.span.begin);
        return;
      }
      case StmtKind::Assignment: {
        TypeRef lhs = typeLvalue(s.exprs[0], ctx, locals);
        TypeRef rhs = typeExpr(s.exprs[1], ctx, locals);
        if (rhs.kind == TypeKind::Elem) {
          if (!lhs.isPrimitive() && lhs.kind != TypeKind::Void)
            err("ElemContext", "collection element must land in a primitive variable",
                s.span.begin);
        } else if (lhs.kind != TypeKind::Void && !info_.assignableStrict(lhs, rhs)) {
          err("TypeMismatch", "cannot assign " + rhs.str() + " to " + lhs.str(), s.span.begin);
        }
        return;
      }
      case StmtKind::Invocation: {
        const Expr& call = s.exprs[0];
        if (call.recv == RecvKind::Bare && call.name == "assert") {
          if (!ctx.inTest) {
            err("AssertOutsideTest", "assert is only allowed in test bodies", s.span.begin);
            return;
          }
          if (call.kids.size() != 1 ||
              typeExpr(call.kids[0], ctx, locals) != TypeRef::boolType())
            err("TypeMismatch", "assert needs one bool argument", s.span.begin);
          return;
        }
        typeExpr(call, ctx, locals);
        return;
      }
      case StmtKind::ConstructorCall:
        typeExpr(s.exprs[0], ctx, locals);
        return;
      case StmtKind::Return: {
        if (ctx.inTest) {
          if (!s.exprs.empty())
            err("BadReturnType", "tests cannot return a value", s.span.begin);
          return;
        }
        if (ctx.returnType.isVoid()) {
          if (!s.exprs.empty())
            err("BadReturnType", "void method cannot return a value", s.span.begin);
          return;
        }
        if (s.exprs.empty()) {
          err("BadReturnType", "method must return " + ctx.returnType.str(), s.span.begin);
          return;
        }
        TypeRef t = typeExpr(s.exprs[0], ctx, locals);
        if (t.kind == TypeKind::Elem) {
          if (!ctx.returnType.isPrimitive())
            err("ElemContext", "collection element must land in a primitive return",
                s.span.begin);
        } else if (!info_.assignableStrict(ctx.returnType, t)) {
          err("BadReturnType", "cannot return " + t.str() + " from a " +
                                   ctx.returnType.str() + " method",
              s.span.begin);
        }
        return;
      }
      case StmtKind::If: {
        requireBool(s.exprs[0], ctx, locals);
        checkScopedBody(s.body, ctx, locals);
        checkScopedBody(s.elseBody, ctx, locals);
        return;
      }
      case StmtKind::While: {
        requireBool(s.exprs[0], ctx, locals);
        ++ctx.loopDepth;
        checkScopedBody(s.body, ctx, locals);
        --ctx.loopDepth;
        return;
      }
      case StmtKind::ForCounted: {
        locals.push();
        if (s.declaresCounter) {
          locals.declare(s.name, TypeRef::intType());
        } else {
          TypeRef t = typeLvalue(Expr::varRef(s.name), ctx, locals);
          if (t.kind != TypeKind::Void && t != TypeRef::intType())
            err("TypeMismatch", "loop counter '" + s.name + "' must be int", s.span.begin);
        }
        requireInt(s.exprs[0], ctx, locals);
        requireBool(s.exprs[1], ctx, locals);
        requireInt(s.exprs[2], ctx, locals);
        ++ctx.loopDepth;
        checkScopedBody(s.body, ctx, locals);
        --ctx.loopDepth;
        locals.pop();
        return;
      }
      case StmtKind::ForEach: {
        TypeRef coll = typeExpr(s.exprs[0], ctx, locals);
        if (info_.builtinIfaceOf(coll).empty())
          err("TypeMismatch", "for-each needs a List, Set or Map", s.span.begin);
        if (!s.declType.isPrimitive())
          err("TypeMismatch", "for-each variable must be int, bool or string", s.span.begin);
        locals.push();
        if (!locals.declare(s.name, s.declType))
          err("DuplicateName", "variable '" + s.name + "' already declared", s.span.begin);
        ++ctx.loopDepth;
        checkScopedBody(s.body, ctx, locals);
        --ctx.loopDepth;
        locals.pop();
        return;
      }
      case StmtKind::Try: {
        checkScopedBody(s.body, ctx, locals);
        locals.push();
        if (!locals.declare(s.name, TypeRef::stringType()))
          err("DuplicateName", "variable '" + s.name + "' already declared", s.span.begin);
        checkBody(s.elseBody, ctx, locals);
        locals.pop();
        return;
      }
      case StmtKind::Throw: {
        TypeRef t = typeExpr(s.exprs[0], ctx, locals);
        if (t != TypeRef::stringType())
          err("TypeMismatch", "throw needs a string", s.span.begin);
        return;
      }
      case StmtKind::Break:
        if (ctx.loopDepth == 0) err("BreakOutsideLoop", "break outside a loop", s.span.begin);
        return;
      case StmtKind::Continue:
        if (ctx.loopDepth == 0) err("BreakOutsideLoop", "continue outside a loop", s.span.begin);
        return;
      case StmtKind::Block:
        checkScopedBody(s.body, ctx, locals);
        return;
    }
  }

  void requireBool(const Expr& e, Ctx& ctx, Locals& locals) {
    TypeRef t = typeExpr(e, ctx, locals);
    if (t != TypeRef::boolType() && t.kind != TypeKind::Void)
      err("TypeMismatch", "expected bool, got " + t.str(), e.span.begin);
  }

  void requireInt(const Expr& e, Ctx& ctx, Locals& locals) {
    TypeRef t = typeExpr(e, ctx, locals);
    if (t != TypeRef::intType() && t.kind != TypeKind::Void)
      err("TypeMismatch", "expected int, got " + t.str(), e.span.begin);
  }

  // Resolves an assignment target. Returns Void when resolution already
  // failed (error emitted) so callers skip the mismatch check.
  TypeRef typeLvalue(const Expr& e, Ctx& ctx, Locals& locals) {
    switch (e.kind) {
      case ExprKind::VarRef: {
        if (const TypeRef* t = locals.find(e.name)) return *t;
        if (ctx.hostClass) {
          if (const FieldDecl* f = info_.findField(*ctx.hostClass, e.name)) {
            if (ctx.isStatic && !f->isStatic) {
              err("StaticContext", "instance field '" + e.name + "' in static context",
                  e.span.begin);
              return TypeRef::voidType();
            }
            return f->type;
          }
        }
        err("UndeclaredName", "undeclared variable '" + e.name + "'", e.span.begin);
        return TypeRef::voidType();
      }
      case ExprKind::FieldRef: {
        if (!ctx.hostClass || ctx.isStatic) {
          err("StaticContext", "'this' is not available here", e.span.begin);
          return TypeRef::voidType();
        }
        if (const FieldDecl* f = info_.findField(*ctx.hostClass, e.name)) return f->type;
        err("UndeclaredName", "no field '" + e.name + "' in " + ctx.hostClass->name,
            e.span.begin);
        return TypeRef::voidType();
      }
      case ExprKind::StaticRef:
        return typeStaticRef(e, ctx);
      default:
        err("TypeMismatch", "not an assignable location", e.span.begin);
        return TypeRef::voidType();
    }
  }

  TypeRef typeStaticRef(const Expr& e, Ctx& ctx) {
    const ClassDecl* cls = info_.findClass(e.qualifier);
    if (!cls) {
      err("UndeclaredName",
          "'" + e.qualifier + "' is not a class (field access through objects is not supported)",
          e.span.begin);
      return TypeRef::voidType();
    }
    const FieldDecl* f = info_.findField(*cls, e.name);
    if (!f || !f->isStatic) {
      err("UndeclaredName", "no static field '" + e.name + "' in " + e.qualifier, e.span.begin);
      return TypeRef::voidType();
    }
    if (!f->isPublic && ctx.hostClass != cls) {
      err("Visibility", e.qualifier + "." + e.name + " is private", e.span.begin);
      return TypeRef::voidType();
    }
    return f->type;
  }

  // ---- expressions ----

  TypeRef typeExpr(const Expr& e, Ctx& ctx, Locals& locals) {
    switch (e.kind) {
      case ExprKind::IntLit: return TypeRef::intType();
      case ExprKind::BoolLit: return TypeRef::boolType();
      case ExprKind::StringLit: return TypeRef::stringType();
      case ExprKind::NullLit: return TypeRef::nullType();
      case ExprKind::VarRef:
        return typeLvalue(e, ctx, locals);
      case ExprKind::ThisRef:
        if (!ctx.hostClass || ctx.isStatic) {
          err("StaticContext", "'this' is not available here", e.span.begin);
          return TypeRef::voidType();
        }
        return TypeRef::classType(ctx.hostClass->name);
      case ExprKind::FieldRef:
        return typeLvalue(e, ctx, locals);
      case ExprKind::StaticRef:
        return typeStaticRef(e, ctx);
      case ExprKind::New: {
        if (info_.findClass(e.name) || isBuiltinImpl(e.name))
          return TypeRef::classType(e.name);
        if (info_.findInterface(e.name) || isBuiltinInterface(e.name))
          err("TypeMismatch", "cannot instantiate interface '" + e.name + "'", e.span.begin);
        else
          err("UnknownType", "unknown class '" + e.name + "'", e.span.begin);
        return TypeRef::voidType();
      }
      case ExprKind::Unary: {
        TypeRef t = typeExpr(e.kids[0], ctx, locals);
        if (t.kind == TypeKind::Void) return t;
        if (e.unOp == UnaryOp::Not) {
          if (t != TypeRef::boolType())
            err("TypeMismatch", "'!' needs bool", e.span.begin);
          return TypeRef::boolType();
        }
        if (t != TypeRef::intType()) err("TypeMismatch", "'-' needs int", e.span.begin);
        return TypeRef::intType();
      }
      case ExprKind::Binary:
        return typeBinary(e, ctx, locals);
      case ExprKind::Ternary: {
        requireBool(e.kids[0], ctx, locals);
        TypeRef a = typeExpr(e.kids[1], ctx, locals);
        TypeRef b = typeExpr(e.kids[2], ctx, locals);
        if (a.kind == TypeKind::Void || b.kind == TypeKind::Void) return a;
        if (a.kind == TypeKind::Elem || b.kind == TypeKind::Elem) {
          err("ElemContext", "collection element needs a typed variable first", e.span.begin);
          return TypeRef::voidType();
        }
        if (a == b) return a;
        if (a.kind == TypeKind::Null && b.isReference()) return b;
        if (b.kind == TypeKind::Null && a.isReference()) return a;
        err("TypeMismatch", "ternary arms differ: " + a.str() + " vs " + b.str(), e.span.begin);
        return a;
      }
      case ExprKind::Call:
        return typeCall(e, ctx, locals);
    }
    return TypeRef::voidType();
  }

  TypeRef typeBinary(const Expr& e, Ctx& ctx, Locals& locals) {
    TypeRef a = typeExpr(e.kids[0], ctx, locals);
    TypeRef b = typeExpr(e.kids[1], ctx, locals);
    if (a.kind == TypeKind::Void || b.kind == TypeKind::Void) return TypeRef::voidType();
    if (a.kind == TypeKind::Elem || b.kind == TypeKind::Elem) {
      err("ElemContext", "collection element needs a typed variable first", e.span.begin);
      return TypeRef::voidType();
    }
    switch (e.binOp) {
      case BinaryOp::Add:
        if (a == TypeRef::intType() && b == TypeRef::intType()) return TypeRef::intType();
        if (a == TypeRef::stringType() && b == TypeRef::stringType())
          return TypeRef::stringType();
        err("TypeMismatch", "'+' needs two ints or two strings", e.span.begin);
        return TypeRef::intType();
      case BinaryOp::Sub:
      case BinaryOp::Mul:
      case BinaryOp::Div:
      case BinaryOp::Mod:
        if (a != TypeRef::intType() || b != TypeRef::intType())
          err("TypeMismatch", "arithmetic needs ints", e.span.begin);
        return TypeRef::intType();
      case BinaryOp::Lt:
      case BinaryOp::Le:
      case BinaryOp::Gt:
      case BinaryOp::Ge:
        if (a != TypeRef::intType() || b != TypeRef::intType())
          err("TypeMismatch", "comparison needs ints", e.span.begin);
        return TypeRef::boolType();
      case BinaryOp::Eq:
      case BinaryOp::Ne: {
        bool ok = (a == b && a.kind != TypeKind::Null) ||
                  (a.kind == TypeKind::Null && (b.isReference() || b.kind == TypeKind::Null)) ||
                  (b.kind == TypeKind::Null && a.isReference()) ||
                  info_.assignableStrict(a, b) || info_.assignableStrict(b, a);
        if (!ok)
          err("TypeMismatch", "cannot compare " + a.str() + " with " + b.str(), e.span.begin);
        return TypeRef::boolType();
      }
      case BinaryOp::And:
      case BinaryOp::Or:
        if (a != TypeRef::boolType() || b != TypeRef::boolType())
          err("TypeMismatch", "'&&'/'||' need bools", e.span.begin);
        return TypeRef::boolType();
    }
    return TypeRef::voidType();
  }

  TypeRef typeCall(const Expr& e, Ctx& ctx, Locals& locals) {
    if (e.recv == RecvKind::Bare) {
      if (e.name == "assert") {
        err("AssertOutsideTest", "assert cannot be used inside expressions", e.span.begin);
        return TypeRef::voidType();
      }
      if (!ctx.hostClass) {
        err("UndeclaredName",
            "bare call '" + e.name + "' outside a class; use Class.method(...)", e.span.begin);
        return TypeRef::voidType();
      }
      const MethodDecl* m = info_.findMethod(*ctx.hostClass, e.name);
      if (!m) {
        err("UndeclaredName", "no method '" + e.name + "' in " + ctx.hostClass->name,
            e.span.begin);
        return TypeRef::voidType();
      }
      if (ctx.isStatic && !m->isStatic) {
        err("StaticContext", "instance method '" + e.name + "' called from static context",
            e.span.begin);
        return TypeRef::voidType();
      }
      return checkUserArgs(e, *m, ctx, locals);
    }

    if (e.recv == RecvKind::This) {
      if (!ctx.hostClass || ctx.isStatic) {
        err("StaticContext", "'this' is not available here", e.span.begin);
        return TypeRef::voidType();
      }
      const MethodDecl* m = info_.findMethod(*ctx.hostClass, e.name);
      if (!m) {
        err("UndeclaredName", "no method '" + e.name + "' in " + ctx.hostClass->name,
            e.span.begin);
        return TypeRef::voidType();
      }
      if (m->isStatic) {
        err("TypeMismatch", "static method '" + e.name + "' called through this", e.span.begin);
        return TypeRef::voidType();
      }
      return checkUserArgs(e, *m, ctx, locals);
    }

    // Name receiver: a variable in scope wins, then a class name.
    TypeRef recvType = TypeRef::voidType();
    bool isVar = false;
    if (const TypeRef* t = locals.find(e.qualifier)) {
      recvType = *t;
      isVar = true;
    } else if (ctx.hostClass) {
      if (const FieldDecl* f = info_.findField(*ctx.hostClass, e.qualifier)) {
        if (!(ctx.isStatic && !f->isStatic)) {
          recvType = f->type;
          isVar = true;
        }
      }
    }

    if (isVar) {
      std::string iface = info_.builtinIfaceOf(recvType);
      if (!iface.empty()) {
        const BuiltinMethod* bm = findBuiltinMethod(iface, e.name);
        if (!bm) {
          err("UndeclaredName", "no method '" + e.name + "' on " + iface, e.span.begin);
          return TypeRef::voidType();
        }
        if (e.kids.size() != bm->params.size()) {
          err("Arity", iface + "." + e.name + " takes " + std::to_string(bm->params.size()) +
                           " arguments",
              e.span.begin);
          return bm->returnType;
        }
        for (size_t i = 0; i < e.kids.size(); ++i) {
          TypeRef at = typeExpr(e.kids[i], ctx, locals);
          if (at.kind == TypeKind::Void) continue;
          if (bm->params[i].kind == TypeKind::Elem) {
            if (!at.isPrimitive() && at.kind != TypeKind::Elem)
              err("TypeMismatch", "collection elements are int, bool or string",
                  e.kids[i].span.begin);
          } else if (at.kind == TypeKind::Elem || !info_.assignableStrict(bm->params[i], at)) {
            err("TypeMismatch", "argument " + std::to_string(i + 1) + " of " + e.name +
                                     " must be " + bm->params[i].str(),
                e.kids[i].span.begin);
          }
        }
        return bm->returnType;
      }
      if (recvType.kind == TypeKind::Interface) {
        const InterfaceDecl* iface2 = info_.findInterface(recvType.name);
        const MethodSig* sig = iface2 ? info_.findInterfaceMethod(*iface2, e.name) : nullptr;
        if (!sig) {
          err("UndeclaredName", "no method '" + e.name + "' on interface " + recvType.name,
              e.span.begin);
          return TypeRef::voidType();
        }
        return checkSigArgs(e, sig->params, sig->returnType, ctx, locals);
      }
      if (recvType.kind == TypeKind::Class) {
        const ClassDecl* cls = info_.findClass(recvType.name);
        const MethodDecl* m = cls ? info_.findMethod(*cls, e.name) : nullptr;
        if (!m) {
          err("UndeclaredName", "no method '" + e.name + "' in " + recvType.name, e.span.begin);
          return TypeRef::voidType();
        }
        if (m->isStatic) {
          err("TypeMismatch", "static method called through an object", e.span.begin);
          return TypeRef::voidType();
        }
        if (!m->isPublic && ctx.hostClass != cls) {
          err("Visibility", recvType.name + "." + e.name + " is private", e.span.begin);
          return TypeRef::voidType();
        }
        return checkUserArgs(e, *m, ctx, locals);
      }
      err("TypeMismatch", "cannot call methods on " + recvType.str(), e.span.begin);
      return TypeRef::voidType();
    }

    const ClassDecl* cls = info_.findClass(e.qualifier);
    if (!cls) {
      err("UndeclaredName", "'" + e.qualifier + "' is neither a variable nor a class",
          e.span.begin);
      return TypeRef::voidType();
    }
    const MethodDecl* m = info_.findMethod(*cls, e.name);
    if (!m || !m->isStatic) {
      err("UndeclaredName", "no static method '" + e.name + "' in " + e.qualifier,
          e.span.begin);
      return TypeRef::voidType();
    }
    if (!m->isPublic && ctx.hostClass != cls) {
      err("Visibility", e.qualifier + "." + e.name + " is private", e.span.begin);
      return TypeRef::voidType();
    }
    return checkUserArgs(e, *m, ctx, locals);
  }

  TypeRef checkUserArgs(const Expr& e, const MethodDecl& m, Ctx& ctx, Locals& locals) {
    std::vector<TypeRef> params;
    for (const auto& pr : m.params) params.push_back(pr.type);
    return checkSigArgs(e, m.params, m.returnType, ctx, locals);
  }

  TypeRef checkSigArgs(const Expr& e, const std::vector<Param>& params, const TypeRef& ret,
                       Ctx& ctx, Locals& locals) {
    if (e.kids.size() != params.size()) {
      err("Arity",
          "method " + e.name + " takes " + std::to_string(params.size()) + " arguments",
          e.span.begin);
      return ret;
    }
    for (size_t i = 0; i < e.kids.size(); ++i) {
      TypeRef at = typeExpr(e.kids[i], ctx, locals);
      if (at.kind == TypeKind::Void) continue;
      if (at.kind == TypeKind::Elem) {
        err("ElemContext", "collection element needs a typed variable first",
            e.kids[i].span.begin);
        continue;
      }
      if (!info_.assignableStrict(params[i].type, at))
        err("TypeMismatch", "argument " + std::to_string(i + 1) + " of " + e.name +
                                 " must be " + params[i].type.str() + ", got " + at.str(),
            e.kids[i].span.begin);
    }
    return ret;
  }
};

inline CheckResult typeCheck(const Program& p) { return TypeChecker(p).run(); }

}  // namespace nvgen

#endif  // NVGEN_TYPECHECK_HPP
