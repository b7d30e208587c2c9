#ifndef NVGEN_AST_HPP
#define NVGEN_AST_HPP

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace nvgen {

struct SourcePos {
  int line = 0;
  int col = 0;
};

struct SourceSpan {
  SourcePos begin;
  SourcePos end;
};

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

enum class TypeKind {
  Int,
  Bool,
  String,
  Void,
  Class,      // user class or builtin collection impl
  Interface,  // user interface or builtin List/Set/Map
  Elem,       // result type of collection getters; only valid in checked sinks
  Null,       // type of the null literal
};

struct TypeRef {
  TypeKind kind = TypeKind::Void;
  std::string name;  // set for Class/Interface

  static TypeRef intType() { return {TypeKind::Int, ""}; }
  static TypeRef boolType() { return {TypeKind::Bool, ""}; }
  static TypeRef stringType() { return {TypeKind::String, ""}; }
  static TypeRef voidType() { return {TypeKind::Void, ""}; }
  static TypeRef elemType() { return {TypeKind::Elem, ""}; }
  static TypeRef nullType() { return {TypeKind::Null, ""}; }
  static TypeRef classType(std::string n) { return {TypeKind::Class, std::move(n)}; }
  static TypeRef interfaceType(std::string n) { return {TypeKind::Interface, std::move(n)}; }

  bool isPrimitive() const {
    return kind == TypeKind::Int || kind == TypeKind::Bool || kind == TypeKind::String;
  }
  bool isReference() const { return kind == TypeKind::Class || kind == TypeKind::Interface; }
  bool isVoid() const { return kind == TypeKind::Void; }

  std::string str() const {
    switch (kind) {
      case TypeKind::Int: return "int";
      case TypeKind::Bool: return "bool";
      case TypeKind::String: return "string";
      case TypeKind::Void: return "void";
      case TypeKind::Elem: return "<elem>";
      case TypeKind::Null: return "<null>";
      default: return name;
    }
  }

  friend bool operator==(const TypeRef& a, const TypeRef& b) {
    return a.kind == b.kind && a.name == b.name;
  }
  friend bool operator!=(const TypeRef& a, const TypeRef& b) { return !(a == b); }
  friend bool operator<(const TypeRef& a, const TypeRef& b) {
    if (a.kind != b.kind) return static_cast<int>(a.kind) < static_cast<int>(b.kind);
    return a.name < b.name;
  }
};

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

enum class ExprKind {
  IntLit,
  BoolLit,
  StringLit,
  NullLit,
  VarRef,     // bare identifier: local, param, or field of the host class
  ThisRef,
  FieldRef,   // this.<name>
  StaticRef,  // <ClassName>.<name>
  Call,       // method call; receiver encoded by recv/qualifier
  New,        // new <ClassName>()
  Unary,
  Binary,
  Ternary,    // cond ? a : b
};

enum class BinaryOp { Add, Sub, Mul, Div, Mod, Lt, Le, Gt, Ge, Eq, Ne, And, Or };
enum class UnaryOp { Not, Neg };

// Receiver form of a Call. Name receivers stay unresolved in the tree;
// the checker decides variable vs class by lookup.
enum class RecvKind { Bare, This, Name };

struct Expr {
  ExprKind kind = ExprKind::IntLit;
  long long intValue = 0;
  bool boolValue = false;
  std::string strValue;   // StringLit payload
  std::string name;       // identifier / field / method / class name
  std::string qualifier;  // Call with recv=Name, StaticRef class name
  RecvKind recv = RecvKind::Bare;
  BinaryOp binOp = BinaryOp::Add;
  UnaryOp unOp = UnaryOp::Not;
  std::vector<Expr> kids;  // operands, call args, ternary parts
  SourceSpan span;

  static Expr intLit(long long v) {
    Expr e;
    e.kind = ExprKind::IntLit;
    e.intValue = v;
    return e;
  }
  static Expr boolLit(bool v) {
    Expr e;
    e.kind = ExprKind::BoolLit;
    e.boolValue = v;
    return e;
  }
  static Expr varRef(std::string n) {
    Expr e;
    e.kind = ExprKind::VarRef;
    e.name = std::move(n);
    return e;
  }
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs) {
    Expr e;
    e.kind = ExprKind::Binary;
    e.binOp = op;
    e.kids.push_back(std::move(lhs));
    e.kids.push_back(std::move(rhs));
    return e;
  }
  static Expr ternary(Expr cond, Expr a, Expr b) {
    Expr e;
    e.kind = ExprKind::Ternary;
    e.kids.push_back(std::move(cond));
    e.kids.push_back(std::move(a));
    e.kids.push_back(std::move(b));
    return e;
  }
};

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

enum class StmtKind {
  Invocation,
  Assignment,
  VarDecl,
  Return,
  If,
  While,
  ForCounted,
  ForEach,
  Try,
  Throw,
  Break,
  Continue,
  Block,
  ConstructorCall,
};

inline const char* stmtKindName(StmtKind k) {
  switch (k) {
    case StmtKind::Invocation: return "Invocation";
    case StmtKind::Assignment: return "Assignment";
    case StmtKind::VarDecl: return "VarDecl";
    case StmtKind::Return: return "Return";
    case StmtKind::If: return "If";
    case StmtKind::While: return "While";
    case StmtKind::ForCounted: return "ForCounted";
    case StmtKind::ForEach: return "ForEach";
    case StmtKind::Try: return "Try";
    case StmtKind::Throw: return "Throw";
    case StmtKind::Break: return "Break";
    case StmtKind::Continue: return "Continue";
    case StmtKind::Block: return "Block";
    case StmtKind::ConstructorCall: return "ConstructorCall";
  }
  return "?";
}

enum class CmpOp { Lt, Le, Gt, Ge };
enum class StepOp { Plus, Minus };

// Canonical counted-loop shape. The expressions live in the statement:
// exprs[0] = init value, exprs[1] = full condition, exprs[2] = update RHS.
struct LoopShape {
  CmpOp cmp = CmpOp::Lt;
  StepOp op = StepOp::Plus;
};

// One struct for all statement kinds; field roles per kind:
//   Invocation      exprs[0]=call
//   ConstructorCall exprs[0]=new
//   Assignment      exprs[0]=lhs, exprs[1]=rhs
//   VarDecl         declType, name, exprs=[init] or []
//   Return          exprs=[value] or []
//   If              exprs[0]=cond, body=then, elseBody=else
//   While           exprs[0]=cond, body
//   ForCounted      name=counter, declaresCounter, exprs[0]=init,
//                   exprs[1]=cond, exprs[2]=update RHS, body
//   ForEach         declType, name, exprs[0]=collection, body
//   Try             body=try block, name=catch var, elseBody=handler
//   Throw           exprs[0]=value
//   Block           body
struct Stmt {
  StmtKind kind = StmtKind::Block;
  TypeRef declType;
  std::string name;
  bool declaresCounter = false;
  std::vector<Expr> exprs;
  std::vector<Stmt> body;
  std::vector<Stmt> elseBody;
  bool canonicalLoop = false;
  LoopShape loop;
  SourceSpan span;
};

// ---------------------------------------------------------------------------
// Declarations
// ---------------------------------------------------------------------------

struct Param {
  std::string name;
  TypeRef type;
};

struct MethodSig {
  std::string name;
  std::vector<Param> params;
  TypeRef returnType;
};

struct MethodDecl {
  std::string name;
  bool isStatic = false;
  bool isPublic = true;
  std::vector<Param> params;
  TypeRef returnType;
  std::vector<Stmt> body;
  SourceSpan span;
};

struct FieldDecl {
  std::string name;
  TypeRef type;
  bool isStatic = false;
  bool isPublic = true;
  std::optional<Expr> init;
};

struct ClassDecl {
  std::string name;
  std::vector<std::string> interfaces;
  std::vector<FieldDecl> fields;
  std::vector<MethodDecl> methods;
};

struct InterfaceDecl {
  std::string name;
  std::vector<MethodSig> methods;
};

struct TestDecl {
  std::string name;
  std::vector<Stmt> body;
};

struct Program {
  std::vector<InterfaceDecl> interfaces;
  std::vector<ClassDecl> classes;
  std::vector<TestDecl> tests;
};

// ---------------------------------------------------------------------------
// Statement identity: structural path, stable under pretty-printing
// ---------------------------------------------------------------------------

struct StmtId {
  int classIdx = -1;
  int methodIdx = -1;
  int pre = -1;  // pre-order position within the method body

  bool valid() const { return classIdx >= 0 && methodIdx >= 0 && pre >= 0; }

  std::string str() const {
    return "c" + std::to_string(classIdx) + ".m" + std::to_string(methodIdx) + ".s" +
           std::to_string(pre);
  }

  static std::optional<StmtId> parse(const std::string& s) {
    StmtId id;
    if (std::sscanf(s.c_str(), "c%d.m%d.s%d", &id.classIdx, &id.methodIdx, &id.pre) != 3)
      return std::nullopt;
    return id;
  }

  friend bool operator==(const StmtId& a, const StmtId& b) {
    return a.classIdx == b.classIdx && a.methodIdx == b.methodIdx && a.pre == b.pre;
  }
  friend bool operator!=(const StmtId& a, const StmtId& b) { return !(a == b); }
  friend bool operator<(const StmtId& a, const StmtId& b) {
    if (a.classIdx != b.classIdx) return a.classIdx < b.classIdx;
    if (a.methodIdx != b.methodIdx) return a.methodIdx < b.methodIdx;
    return a.pre < b.pre;
  }
};

// ---------------------------------------------------------------------------
// Builtin collection surface
// ---------------------------------------------------------------------------

inline bool isBuiltinInterface(const std::string& n) {
  return n == "List" || n == "Set" || n == "Map";
}

inline bool isBuiltinImpl(const std::string& n) {
  return n == "ArrayListImpl" || n == "LinkedListImpl" || n == "HashSetImpl" ||
         n == "TreeSetImpl" || n == "HashMapImpl" || n == "LinkedMapImpl" || n == "TreeMapImpl";
}

inline const std::vector<std::string>& builtinImpls(const std::string& iface) {
  static const std::vector<std::string> list{"ArrayListImpl", "LinkedListImpl"};
  static const std::vector<std::string> set{"HashSetImpl", "TreeSetImpl"};
  static const std::vector<std::string> map{"HashMapImpl", "LinkedMapImpl", "TreeMapImpl"};
  static const std::vector<std::string> none{};
  if (iface == "List") return list;
  if (iface == "Set") return set;
  if (iface == "Map") return map;
  return none;
}

// Interface implemented by a builtin impl class, or "" for user classes.
inline std::string builtinImplInterface(const std::string& cls) {
  if (cls == "ArrayListImpl" || cls == "LinkedListImpl") return "List";
  if (cls == "HashSetImpl" || cls == "TreeSetImpl") return "Set";
  if (cls == "HashMapImpl" || cls == "LinkedMapImpl" || cls == "TreeMapImpl") return "Map";
  return "";
}

struct BuiltinMethod {
  std::string name;
  std::vector<TypeRef> params;  // Elem entries accept any primitive argument
  TypeRef returnType;
};

inline const std::vector<BuiltinMethod>& builtinMethods(const std::string& iface) {
  using T = TypeRef;
  static const std::vector<BuiltinMethod> list{
      {"add", {T::elemType()}, T::voidType()},
      {"get", {T::intType()}, T::elemType()},
      {"set", {T::intType(), T::elemType()}, T::voidType()},
      {"size", {}, T::intType()},
      {"contains", {T::elemType()}, T::boolType()},
      {"remove", {T::elemType()}, T::boolType()},
      {"clear", {}, T::voidType()},
  };
  static const std::vector<BuiltinMethod> set{
      {"add", {T::elemType()}, T::boolType()},
      {"contains", {T::elemType()}, T::boolType()},
      {"remove", {T::elemType()}, T::boolType()},
      {"size", {}, T::intType()},
      {"clear", {}, T::voidType()},
  };
  static const std::vector<BuiltinMethod> map{
      {"put", {T::elemType(), T::elemType()}, T::voidType()},
      {"get", {T::elemType()}, T::elemType()},
      {"containsKey", {T::elemType()}, T::boolType()},
      {"remove", {T::elemType()}, T::boolType()},
      {"size", {}, T::intType()},
      {"clear", {}, T::voidType()},
  };
  static const std::vector<BuiltinMethod> none{};
  if (iface == "List") return list;
  if (iface == "Set") return set;
  if (iface == "Map") return map;
  return none;
}

inline const BuiltinMethod* findBuiltinMethod(const std::string& iface, const std::string& m) {
  for (const auto& bm : builtinMethods(iface))
    if (bm.name == m) return &bm;
  return nullptr;
}

// ---------------------------------------------------------------------------
// Statement walking
// ---------------------------------------------------------------------------

// Child statement lists of a statement, in pre-order position.
inline std::vector<const std::vector<Stmt>*> childLists(const Stmt& s) {
  switch (s.kind) {
    case StmtKind::If:
    case StmtKind::Try:
      return {&s.body, &s.elseBody};
    case StmtKind::While:
    case StmtKind::ForCounted:
    case StmtKind::ForEach:
    case StmtKind::Block:
      return {&s.body};
    default:
      return {};
  }
}

inline std::vector<std::vector<Stmt>*> childLists(Stmt& s) {
  switch (s.kind) {
    case StmtKind::If:
    case StmtKind::Try:
      return {&s.body, &s.elseBody};
    case StmtKind::While:
    case StmtKind::ForCounted:
    case StmtKind::ForEach:
    case StmtKind::Block:
      return {&s.body};
    default:
      return {};
  }
}

namespace detail {
template <typename Fn>
void walkPreOrder(const std::vector<Stmt>& list, int& counter, Fn&& fn) {
  for (const Stmt& s : list) {
    fn(counter, s);
    ++counter;
    for (const auto* child : childLists(s)) walkPreOrder(*child, counter, fn);
  }
}
}  // namespace detail

// Visit every statement of a method body, assigning pre-order positions.
template <typename Fn>
void forEachStmtInBody(const std::vector<Stmt>& body, Fn&& fn) {
  int counter = 0;
  detail::walkPreOrder(body, counter, fn);
}

// Visit every statement of every class method. fn(StmtId, const Stmt&).
template <typename Fn>
void forEachStmt(const Program& p, Fn&& fn) {
  for (int ci = 0; ci < static_cast<int>(p.classes.size()); ++ci) {
    const ClassDecl& cls = p.classes[ci];
    for (int mi = 0; mi < static_cast<int>(cls.methods.size()); ++mi) {
      forEachStmtInBody(cls.methods[mi].body,
                        [&](int pre, const Stmt& s) { fn(StmtId{ci, mi, pre}, s); });
    }
  }
}

// Mutable access to a statement and its enclosing list.
struct StmtSlot {
  Stmt* stmt = nullptr;
  std::vector<Stmt>* list = nullptr;
  int index = -1;
  bool found() const { return stmt != nullptr; }
};

namespace detail {
inline bool locateIn(std::vector<Stmt>& list, int& counter, int target, StmtSlot& out) {
  for (int i = 0; i < static_cast<int>(list.size()); ++i) {
    if (counter == target) {
      out = StmtSlot{&list[i], &list, i};
      return true;
    }
    ++counter;
    for (auto* child : childLists(list[i]))
      if (locateIn(*child, counter, target, out)) return true;
  }
  return false;
}
}  // namespace detail

inline StmtSlot locateStmt(Program& p, const StmtId& id) {
  StmtSlot slot;
  if (id.classIdx < 0 || id.classIdx >= static_cast<int>(p.classes.size())) return slot;
  ClassDecl& cls = p.classes[id.classIdx];
  if (id.methodIdx < 0 || id.methodIdx >= static_cast<int>(cls.methods.size())) return slot;
  int counter = 0;
  detail::locateIn(cls.methods[id.methodIdx].body, counter, id.pre, slot);
  return slot;
}

inline const Stmt* findStmt(const Program& p, const StmtId& id) {
  StmtSlot slot = locateStmt(const_cast<Program&>(p), id);
  return slot.stmt;
}

// Visit every expression in a statement subtree (does not recurse into
// nested statements when recurseStmts is false).
template <typename Fn>
void forEachExpr(const Expr& e, Fn&& fn) {
  fn(e);
  for (const Expr& k : e.kids) forEachExpr(k, fn);
}

template <typename Fn>
void forEachExprInStmt(const Stmt& s, Fn&& fn, bool recurseStmts = true) {
  for (const Expr& e : s.exprs) forEachExpr(e, fn);
  if (recurseStmts) {
    for (const auto* list : childLists(s))
      for (const Stmt& c : *list) forEachExprInStmt(c, fn, true);
  }
}

}  // namespace nvgen

#endif  // NVGEN_AST_HPP
