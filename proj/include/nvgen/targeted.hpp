#ifndef NVGEN_TARGETED_HPP
#define NVGEN_TARGETED_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "nvgen/analysis.hpp"
#include "nvgen/ast.hpp"
#include "nvgen/interp.hpp"
#include "nvgen/rng.hpp"
#include "nvgen/symbols.hpp"
#include "nvgen/transform.hpp"

namespace nvgen {

// ---------------------------------------------------------------------------
// add method invocation
// ---------------------------------------------------------------------------

struct MethodRef {
  std::string className;
  std::string methodName;
  bool isStatic = false;
  std::vector<TypeRef> paramTypes;
  TypeRef returnType;
  bool internal = false;  // declared in the location's class
  std::vector<std::string> receiverOptions;  // instance methods: in-scope names, may be "this"

  std::string qualified() const { return className + "." + methodName; }
};

struct MethodCandidateSet {
  Location location;
  std::vector<MethodRef> candidates;
};

struct NoReceiver : std::runtime_error {
  explicit NoReceiver(const std::string& m) : std::runtime_error("no receiver for " + m) {}
};
struct NoArgBinding : std::runtime_error {
  explicit NoArgBinding(const std::string& m) : std::runtime_error("no argument binding for " + m) {}
};

// Methods callable from the location: public methods anywhere plus private
// methods of the host class, minus the host method itself, with a reachable
// receiver and every parameter type available in scope. A static location
// offers no 'this', which restricts instance candidates to in-scope objects.
inline MethodCandidateSet accessibleMethods(const Program& p, const ProgramInfo& info,
                                            const Location& loc) {
  MethodCandidateSet out;
  out.location = loc;
  for (const auto& cls : p.classes) {
    for (const auto& m : cls.methods) {
      if (cls.name == loc.hostClass && m.name == loc.hostMethod) continue;  // recursion risk
      if (!m.isPublic && cls.name != loc.hostClass) continue;

      MethodRef ref;
      ref.className = cls.name;
      ref.methodName = m.name;
      ref.isStatic = m.isStatic;
      ref.returnType = m.returnType;
      ref.internal = cls.name == loc.hostClass;
      for (const auto& pr : m.params) ref.paramTypes.push_back(pr.type);

      if (!m.isStatic) {
        TypeRef recvType = TypeRef::classType(cls.name);
        for (const auto& b : loc.scope.bindings)
          if (b.type == recvType) ref.receiverOptions.push_back(b.name);
        if (ref.receiverOptions.empty()) continue;
      }

      bool satisfiable = true;
      for (const auto& t : ref.paramTypes)
        if (!loc.scope.hasType(t)) {
          satisfiable = false;
          break;
        }
      if (!satisfiable) continue;

      out.candidates.push_back(std::move(ref));
    }
  }
  return out;
}

// Inserts `try { [__well_k =] recv.m(args...); } catch (__e0) { }` before the
// location. A non-void result lands in a fresh public field of the host
// class (static when the host method is static) so the call stays live.
inline Variant applyAddMethodInvocationExplicit(const Program& p, const ProgramInfo& info,
                                                const Location& loc, const MethodRef& ref,
                                                const std::string& receiver,
                                                const std::vector<std::string>& args) {
  StmtContext ctx = stmtContext(p, loc.id);

  Expr call;
  call.kind = ExprKind::Call;
  call.name = ref.methodName;
  std::string receiverUsed = receiver;
  if (ref.isStatic) {
    call.recv = RecvKind::Name;
    call.qualifier = ref.className;
    receiverUsed = ref.className;
  } else if (receiver == "this") {
    call.recv = RecvKind::This;
  } else {
    call.recv = RecvKind::Name;
    call.qualifier = receiver;
  }

  if (args.size() != ref.paramTypes.size()) throw NoArgBinding(ref.qualified());
  std::vector<std::string> argsUsed;
  for (size_t ai = 0; ai < args.size(); ++ai) {
    const ScopeBinding* b = loc.scope.find(args[ai]);
    if (!b || b->type != ref.paramTypes[ai]) throw NoArgBinding(ref.qualified());
    argsUsed.push_back(b->name);
    if (b->origin == BindingOrigin::This) {
      Expr arg;
      arg.kind = ExprKind::ThisRef;
      call.kids.push_back(std::move(arg));
    } else {
      call.kids.push_back(Expr::varRef(b->name));
    }
  }

  std::set<std::string> taken = namesUsedInMethod(*ctx.hostMethod);
  for (const auto& f : ctx.hostClass->fields) taken.insert(f.name);
  for (const auto& b : loc.scope.bindings) taken.insert(b.name);

  Variant v;
  v.program = p;
  v.kind = TransfoKind::Ami;
  v.locationId = loc.id;
  v.locationKind = loc.nodeKind;
  v.methodRef = ref.qualified();
  v.receiverUsed = receiverUsed;
  v.argsUsed = argsUsed;

  Stmt inner;
  if (ref.returnType.isVoid()) {
    inner.kind = StmtKind::Invocation;
    inner.exprs.push_back(std::move(call));
  } else {
    int wc = 0;
    std::string wellName = freshName("__well_", taken, wc);
    taken.insert(wellName);
    v.wellField = wellName;
    FieldDecl well;
    well.name = wellName;
    well.type = ref.returnType;
    well.isStatic = ctx.hostMethod->isStatic;
    well.isPublic = true;
    v.program.classes[loc.id.classIdx].fields.push_back(std::move(well));

    inner.kind = StmtKind::Assignment;
    inner.exprs.push_back(Expr::varRef(wellName));
    inner.exprs.push_back(std::move(call));
  }

  int ec = 0;
  std::string catchVar = freshName("__e", taken, ec);
  v.catchVar = catchVar;

  Stmt tryStmt;
  tryStmt.kind = StmtKind::Try;
  tryStmt.name = catchVar;
  tryStmt.body.push_back(std::move(inner));

  StmtSlot slot = locateStmt(v.program, loc.id);
  if (!slot.found()) throw UnknownStatement(loc.id);
  slot.list->insert(slot.list->begin() + slot.index, std::move(tryStmt));
  return v;
}

// uniform receiver and argument choices under the campaign seed
inline Variant applyAddMethodInvocation(const Program& p, const ProgramInfo& info,
                                        const Location& loc, const MethodRef& ref, Rng& rng) {
  std::string receiver;
  if (!ref.isStatic) {
    if (ref.receiverOptions.empty()) throw NoReceiver(ref.qualified());
    receiver = ref.receiverOptions[rng.pick(static_cast<int>(ref.receiverOptions.size()))];
  }
  std::vector<std::string> args;
  for (const TypeRef& t : ref.paramTypes) {
    std::vector<const ScopeBinding*> same = loc.scope.ofType(t);
    if (same.empty()) throw NoArgBinding(ref.qualified());
    args.push_back(same[rng.pick(static_cast<int>(same.size()))]->name);
  }
  return applyAddMethodInvocationExplicit(p, info, loc, ref, receiver, args);
}

// ---------------------------------------------------------------------------
// swap subtype
// ---------------------------------------------------------------------------

struct SwapCandidate {
  StmtId id;
  std::string interfaceName;
  std::string currentClass;
};

struct NotInRegistry : std::runtime_error {
  NotInRegistry(const std::string& cls, const std::string& iface)
      : std::runtime_error("'" + cls + "' is not a registered implementation of " + iface) {}
};

// Interface name -> constructible implementations. Builtins first, then user
// interfaces with their implementing classes; a JSON file can append more.
struct SwapRegistry {
  std::map<std::string, std::vector<std::string>> impls;

  static SwapRegistry forProgram(const Program& p) {
    SwapRegistry reg;
    for (const char* iface : {"List", "Set", "Map"}) reg.impls[iface] = builtinImpls(iface);
    for (const auto& iface : p.interfaces) {
      auto& list = reg.impls[iface.name];
      for (const auto& cls : p.classes)
        for (const auto& in : cls.interfaces)
          if (in == iface.name) list.push_back(cls.name);
    }
    return reg;
  }

  void add(const std::string& iface, const std::string& cls) {
    auto& list = impls[iface];
    for (const auto& c : list)
      if (c == cls) return;
    list.push_back(cls);
  }

  bool contains(const std::string& iface, const std::string& cls) const {
    auto it = impls.find(iface);
    if (it == impls.end()) return false;
    for (const auto& c : it->second)
      if (c == cls) return true;
    return false;
  }

  std::vector<std::string> alternatives(const std::string& iface,
                                        const std::string& current) const {
    std::vector<std::string> out;
    auto it = impls.find(iface);
    if (it == impls.end()) return out;
    for (const auto& c : it->second)
      if (c != current) out.push_back(c);
    return out;
  }
};

// Affectations `I x = new C()` / `x = new C()` where the left side's static
// type is an interface.
inline std::vector<SwapCandidate> enumerateSwapCandidates(const Program& p,
                                                          const ProgramInfo& info) {
  std::vector<SwapCandidate> out;
  forEachStmt(p, [&](const StmtId& id, const Stmt& s) {
    if (s.kind == StmtKind::VarDecl) {
      if (s.declType.kind != TypeKind::Interface) return;
      if (s.exprs.empty() || s.exprs[0].kind != ExprKind::New) return;
      out.push_back({id, s.declType.name, s.exprs[0].name});
      return;
    }
    if (s.kind != StmtKind::Assignment) return;
    if (s.exprs[1].kind != ExprKind::New) return;
    const Expr& lhs = s.exprs[0];
    TypeRef lhsType;
    StmtContext ctx = stmtContext(p, id);
    if (lhs.kind == ExprKind::VarRef) {
      Scope scope = scopeAt(p, id);
      const ScopeBinding* b = scope.find(lhs.name);
      if (!b) return;
      lhsType = b->type;
    } else if (lhs.kind == ExprKind::FieldRef) {
      const FieldDecl* f = info.findField(*ctx.hostClass, lhs.name);
      if (!f) return;
      lhsType = f->type;
    } else if (lhs.kind == ExprKind::StaticRef) {
      const ClassDecl* c = info.findClass(lhs.qualifier);
      const FieldDecl* f = c ? info.findField(*c, lhs.name) : nullptr;
      if (!f) return;
      lhsType = f->type;
    } else {
      return;
    }
    if (lhsType.kind != TypeKind::Interface) return;
    out.push_back({id, lhsType.name, s.exprs[1].name});
  });
  return out;
}

inline Variant applySwapSubtype(const Program& p, const ProgramInfo& info,
                                const SwapCandidate& cand, const std::string& targetClass,
                                const SwapRegistry& registry) {
  if (targetClass == cand.currentClass)
    throw PreconditionViolated("SwapToSameClass");
  if (!registry.contains(cand.interfaceName, targetClass))
    throw NotInRegistry(targetClass, cand.interfaceName);
  if (!info.classImplements(targetClass, cand.interfaceName))
    throw NotInRegistry(targetClass, cand.interfaceName);

  Variant v;
  v.program = p;
  v.kind = TransfoKind::SwapSubtype;
  v.locationId = cand.id;
  v.interfaceName = cand.interfaceName;
  v.fromClass = cand.currentClass;
  v.targetClass = targetClass;
  StmtSlot slot = locateStmt(v.program, cand.id);
  if (!slot.found()) throw UnknownStatement(cand.id);
  v.locationKind = slot.stmt->kind;
  Expr& ctor = slot.stmt->kind == StmtKind::VarDecl ? slot.stmt->exprs[0] : slot.stmt->exprs[1];
  ctor.name = targetClass;
  return v;
}

// ---------------------------------------------------------------------------
// loop flip
// ---------------------------------------------------------------------------

struct LoopCandidate {
  StmtId id;
  std::string probeLabel;
  CmpOp cmp = CmpOp::Lt;
  StepOp op = StepOp::Plus;
};

struct NotCounted : std::runtime_error {
  explicit NotCounted(const StmtId& id)
      : std::runtime_error(id.str() + " is not a flippable counted loop") {}
};

namespace detail {

inline void collectAssignedNames(const Stmt& s, std::set<std::string>& out) {
  if (s.kind == StmtKind::Assignment) {
    const Expr& lhs = s.exprs[0];
    if (lhs.kind == ExprKind::VarRef || lhs.kind == ExprKind::FieldRef ||
        lhs.kind == ExprKind::StaticRef)
      out.insert(lhs.name);
  } else if (s.kind == StmtKind::VarDecl || s.kind == StmtKind::ForEach ||
             s.kind == StmtKind::Try) {
    out.insert(s.name);
  } else if (s.kind == StmtKind::ForCounted) {
    out.insert(s.name);
  }
  for (const auto* list : childLists(s))
    for (const Stmt& c : *list) collectAssignedNames(c, out);
}

inline void collectUsedNames(const Expr& e, std::set<std::string>& out) {
  if (e.kind == ExprKind::VarRef || e.kind == ExprKind::FieldRef) out.insert(e.name);
  if (e.kind == ExprKind::Call && e.recv == RecvKind::Name) out.insert(e.qualifier);
  for (const Expr& k : e.kids) collectUsedNames(k, out);
}

}  // namespace detail

// A loop qualifies when its header is canonical, direction-coherent (+ with
// < or <=, - with > or >=), the body never writes the counter, and no name
// assigned in the body appears in the init/bound/step expressions.
inline bool isFlippableLoop(const Stmt& s) {
  if (s.kind != StmtKind::ForCounted || !s.canonicalLoop) return false;
  bool up = s.loop.op == StepOp::Plus;
  bool condUp = s.loop.cmp == CmpOp::Lt || s.loop.cmp == CmpOp::Le;
  if (up != condUp) return false;

  std::set<std::string> assigned;
  for (const Stmt& c : s.body) detail::collectAssignedNames(c, assigned);
  if (assigned.count(s.name)) return false;

  std::set<std::string> headerNames;
  detail::collectUsedNames(s.exprs[0], headerNames);
  detail::collectUsedNames(s.exprs[1].kids[1], headerNames);  // bound
  detail::collectUsedNames(s.exprs[2].kids[1], headerNames);  // step
  for (const auto& n : headerNames)
    if (assigned.count(n)) return false;
  return true;
}

inline std::vector<LoopCandidate> enumerateCountedLoops(const Program& p) {
  std::vector<LoopCandidate> out;
  std::map<const Stmt*, std::string> labels;
  Interpreter::buildProbeLabels(p, labels);
  forEachStmt(p, [&](const StmtId& id, const Stmt& s) {
    if (!isFlippableLoop(s)) return;
    out.push_back({id, labels.at(&s), s.loop.cmp, s.loop.op});
  });
  return out;
}

namespace detail {

inline CmpOp mirrorCmp(CmpOp c) {
  switch (c) {
    case CmpOp::Lt:
    case CmpOp::Le:
      return CmpOp::Ge;
    default:
      return CmpOp::Le;
  }
}

inline BinaryOp cmpToBinOp(CmpOp c) {
  switch (c) {
    case CmpOp::Lt: return BinaryOp::Lt;
    case CmpOp::Le: return BinaryOp::Le;
    case CmpOp::Gt: return BinaryOp::Gt;
    default: return BinaryOp::Ge;
  }
}

inline Expr intLiteral(long long v) {
  if (v < 0) {
    Expr e;
    e.kind = ExprKind::Unary;
    e.unOp = UnaryOp::Neg;
    e.kids.push_back(Expr::intLit(-v));
    return e;
  }
  return Expr::intLit(v);
}

// start index of the reversed iteration
inline Expr flipStartExpr(const Expr& initE, const Expr& boundE, const Expr& stepE, CmpOp cmp,
                          StepOp op) {
  bool up = op == StepOp::Plus;
  bool inclusive = cmp == CmpOp::Le || cmp == CmpOp::Ge;
  BinaryOp adjust = up ? BinaryOp::Sub : BinaryOp::Add;

  if (initE.kind == ExprKind::IntLit && boundE.kind == ExprKind::IntLit &&
      stepE.kind == ExprKind::IntLit) {
    long long i0 = initE.intValue, iend = boundE.intValue, pstep = stepE.intValue;
    long long x = up ? iend - i0 : i0 - iend;
    long long r = (x < 0 ? -x : x) % pstep;
    long long adj = inclusive ? r : (r == 0 ? pstep : r);
    return intLiteral(up ? iend - adj : iend + adj);
  }

  // straightforward strict case with unit step: last = bound -/+ 1
  if (!inclusive && stepE.kind == ExprKind::IntLit && stepE.intValue == 1)
    return Expr::binary(adjust, boundE, Expr::intLit(1));

  // |bound - init| (guarded for runtime-empty header values)
  Expr diff = up ? Expr::binary(BinaryOp::Sub, boundE, initE)
                 : Expr::binary(BinaryOp::Sub, initE, boundE);
  Expr neg = up ? Expr::binary(BinaryOp::Sub, initE, boundE)
                : Expr::binary(BinaryOp::Sub, boundE, initE);
  Expr abs = Expr::ternary(Expr::binary(BinaryOp::Lt, diff, Expr::intLit(0)), neg, diff);
  Expr rem = Expr::binary(BinaryOp::Mod, abs, stepE);

  if (inclusive) return Expr::binary(adjust, boundE, rem);

  Expr residual = Expr::ternary(Expr::binary(BinaryOp::Eq, rem, Expr::intLit(0)), stepE,
                                Expr::binary(BinaryOp::Mod, abs, stepE));
  return Expr::binary(adjust, boundE, residual);
}

}  // namespace detail

// Rewrites the loop header to run the same index set in reverse order; the
// body is untouched. Bounds are folded to a constant when init, bound and
// step are all literals, otherwise the residual arithmetic is inserted as an
// expression into the header.
inline Variant flipLoop(const Program& p, const StmtId& loopId) {
  const Stmt* s = findStmt(p, loopId);
  if (!s || !isFlippableLoop(*s)) throw NotCounted(loopId);

  const Expr initE = s->exprs[0];
  const Expr boundE = s->exprs[1].kids[1];
  const Expr stepE = s->exprs[2].kids[1];
  CmpOp cmp = s->loop.cmp;
  StepOp op = s->loop.op;

  Variant v;
  v.program = p;
  v.kind = TransfoKind::LoopFlip;
  v.locationId = loopId;
  v.locationKind = StmtKind::ForCounted;
  v.loopProbeLabel = probeLabelOf(p, loopId);

  StmtSlot slot = locateStmt(v.program, loopId);
  Stmt& loop = *slot.stmt;
  loop.exprs[0] = detail::flipStartExpr(initE, boundE, stepE, cmp, op);
  loop.exprs[1] = Expr::binary(detail::cmpToBinOp(detail::mirrorCmp(cmp)),
                               Expr::varRef(loop.name), initE);
  loop.exprs[2] = Expr::binary(op == StepOp::Plus ? BinaryOp::Sub : BinaryOp::Add,
                               Expr::varRef(loop.name), stepE);
  loop.loop.cmp = detail::mirrorCmp(cmp);
  loop.loop.op = op == StepOp::Plus ? StepOp::Minus : StepOp::Plus;
  loop.canonicalLoop = true;
  return v;
}

}  // namespace nvgen

#endif  // NVGEN_TARGETED_HPP
