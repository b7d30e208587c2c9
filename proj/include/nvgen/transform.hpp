#ifndef NVGEN_TRANSFORM_HPP
#define NVGEN_TRANSFORM_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "nvgen/analysis.hpp"
#include "nvgen/ast.hpp"
#include "nvgen/interp.hpp"
#include "nvgen/rng.hpp"
#include "nvgen/symbols.hpp"

namespace nvgen {

enum class TransfoKind { Add, Delete, Replace, Ami, SwapSubtype, LoopFlip };

inline const char* transfoKindName(TransfoKind k) {
  switch (k) {
    case TransfoKind::Add: return "add";
    case TransfoKind::Delete: return "delete";
    case TransfoKind::Replace: return "replace";
    case TransfoKind::Ami: return "ami";
    case TransfoKind::SwapSubtype: return "swapSubtype";
    case TransfoKind::LoopFlip: return "loopFlip";
  }
  return "?";
}

enum class Verdict { NonCompiling, TestFailing, Neutral };

inline const char* verdictName(Verdict v) {
  switch (v) {
    case Verdict::NonCompiling: return "NonCompiling";
    case Verdict::TestFailing: return "TestFailing";
    case Verdict::Neutral: return "Neutral";
  }
  return "?";
}

struct NoCoveredStatements : std::runtime_error {
  NoCoveredStatements() : std::runtime_error("no covered statements to transform") {}
};

struct WouldBreakScope : std::runtime_error {
  explicit WouldBreakScope(const std::string& var)
      : std::runtime_error("deleting declaration of '" + var + "' which is used later") {}
};

struct PreconditionViolated : std::runtime_error {
  std::string rule;
  explicit PreconditionViolated(std::string r)
      : std::runtime_error("replace precondition violated: " + r), rule(std::move(r)) {}
};

struct NoBinding : std::runtime_error {
  explicit NoBinding(const std::string& var)
      : std::runtime_error("no in-scope binding for '" + var + "'") {}
};

// ---------------------------------------------------------------------------
// Locations
// ---------------------------------------------------------------------------

struct Location {
  StmtId id;
  StmtKind nodeKind = StmtKind::Block;
  Scope scope;
  std::vector<std::string> coveringTests;  // sorted, nonempty
  std::string hostClass;
  std::string hostMethod;
  bool staticContext = false;
};

inline Location makeLocation(const Program& p, const CoverageMap& coverage, const StmtId& id) {
  const Stmt* s = findStmt(p, id);
  if (!s) throw UnknownStatement(id);
  auto it = coverage.perStatement.find(id);
  if (it == coverage.perStatement.end() || it->second.empty()) throw NoCoveredStatements();
  StmtContext ctx = stmtContext(p, id);
  Location loc;
  loc.id = id;
  loc.nodeKind = s->kind;
  loc.scope = scopeAt(p, id);
  loc.coveringTests = it->second;
  loc.hostClass = ctx.hostClass->name;
  loc.hostMethod = ctx.hostMethod->name;
  loc.staticContext = ctx.staticContext;
  return loc;
}

// Uniform over covered statements; deterministic under the supplied stream.
inline Location selectLocation(const Program& p, const CoverageMap& coverage, Rng& rng) {
  std::vector<StmtId> covered = coverage.coveredIds();
  if (covered.empty()) throw NoCoveredStatements();
  const StmtId& id = covered[rng.pick(static_cast<int>(covered.size()))];
  return makeLocation(p, coverage, id);
}

// ---------------------------------------------------------------------------
// Transplant selection
// ---------------------------------------------------------------------------

struct TransplantCandidate {
  StmtId sourceId;
  StmtKind kind = StmtKind::Block;
  TypeSignature signature;
};

enum class TransplantMode { Add, Replace };

inline bool insideLoop(const Program& p, const StmtId& id) {
  StmtContext ctx = stmtContext(p, id);
  int counter = 0;
  std::optional<bool> result;
  std::function<void(const std::vector<Stmt>&, int)> rec = [&](const std::vector<Stmt>& list,
                                                               int depth) {
    for (const Stmt& s : list) {
      if (result) return;
      if (counter == id.pre) {
        result = depth > 0;
        return;
      }
      ++counter;
      bool loops = s.kind == StmtKind::While || s.kind == StmtKind::ForCounted ||
                   s.kind == StmtKind::ForEach;
      for (const auto* child : childLists(s)) {
        rec(*child, depth + (loops ? 1 : 0));
        if (result) return;
      }
    }
  };
  rec(ctx.hostMethod->body, 0);
  return result.value_or(false);
}

// Signature compatibility: every free variable of the candidate has at least
// one same-typed binding in the location scope (written-to variables need a
// binding other than 'this'). Replace additionally applies the category
// rules for VarDecl/Return/Throw locations and return-type equality.
inline bool isCompatibleTransplant(const Program& p, const ProgramInfo& info,
                                   const Location& loc, const StmtId& candidateId,
                                   StmtKind candidateKind, TransplantMode mode) {
  if (mode == TransplantMode::Replace) {
    if (candidateId == loc.id) return false;
    bool sameKindOnly = loc.nodeKind == StmtKind::VarDecl ||
                        loc.nodeKind == StmtKind::Return || loc.nodeKind == StmtKind::Throw;
    if (sameKindOnly && candidateKind != loc.nodeKind) return false;
    if (loc.nodeKind == StmtKind::Return && candidateKind == StmtKind::Return) {
      TypeSignature a = signatureOf(p, info, loc.id);
      TypeSignature b = signatureOf(p, info, candidateId);
      if (a.returnType != b.returnType) return false;
    }
  } else {
    if ((candidateKind == StmtKind::Break || candidateKind == StmtKind::Continue) &&
        !insideLoop(p, loc.id))
      return false;
  }
  for (const FreeVar& fv : collectFreeVars(p, candidateId)) {
    if (fv.key.rfind("?:", 0) == 0) return false;  // unresolvable reference
    bool any = false;
    for (const auto& b : loc.scope.bindings) {
      if (b.type != fv.type) continue;
      if (fv.usedAsLvalue && b.origin == BindingOrigin::This) continue;
      any = true;
      break;
    }
    if (!any) return false;
  }
  return true;
}

inline std::vector<TransplantCandidate> findCompatibleTransplants(const Program& p,
                                                                  const ProgramInfo& info,
                                                                  const Location& loc,
                                                                  TransplantMode mode) {
  std::vector<TransplantCandidate> out;
  forEachStmt(p, [&](const StmtId& id, const Stmt& s) {
    if (!isCompatibleTransplant(p, info, loc, id, s.kind, mode)) return;
    TransplantCandidate c;
    c.sourceId = id;
    c.kind = s.kind;
    c.signature = signatureOf(p, info, id);
    out.push_back(std::move(c));
  });
  return out;
}

// ---------------------------------------------------------------------------
// Binding
// ---------------------------------------------------------------------------

struct BoundTransplant {
  Stmt statement;
  StmtId sourceId;
  StmtKind kind = StmtKind::Block;
  long long rewritingCount = 1;  // product of per-variable candidate counts
  std::map<std::string, std::string> binding;     // free var key -> chosen name
  std::map<std::string, std::string> freshNames;  // declared name -> fresh name
};

inline std::string freshName(const std::string& prefix, const std::set<std::string>& taken,
                             int& counter) {
  for (;;) {
    std::string candidate = prefix + std::to_string(counter++);
    if (!taken.count(candidate)) return candidate;
  }
}

inline std::set<std::string> namesUsedInMethod(const MethodDecl& m) {
  std::set<std::string> names;
  for (const auto& pr : m.params) names.insert(pr.name);
  forEachStmtInBody(m.body, [&](int, const Stmt& s) {
    switch (s.kind) {
      case StmtKind::VarDecl:
      case StmtKind::ForEach:
      case StmtKind::Try:
        names.insert(s.name);
        break;
      case StmtKind::ForCounted:
        names.insert(s.name);
        break;
      default:
        break;
    }
  });
  return names;
}

// chooser(freeVar, sameTypedCandidates) -> index of the chosen binding
using BindChooser =
    std::function<int(const FreeVar&, const std::vector<const ScopeBinding*>&)>;

// Copies the source statement and renames every free variable reference to a
// chosen same-typed variable of the location scope. Variables the statement
// itself declares are renamed to fresh __v<k> names so an added copy never
// collides with host locals.
inline BoundTransplant bindTransplantWith(const Program& p, const ProgramInfo& info,
                                          const StmtId& sourceId, const Location& loc,
                                          const BindChooser& chooser) {
  const Stmt* src = findStmt(p, sourceId);
  if (!src) throw UnknownStatement(sourceId);
  StmtContext srcCtx = stmtContext(p, sourceId);
  Scope srcScope = scopeAt(p, sourceId);

  BoundTransplant bound;
  bound.sourceId = sourceId;
  bound.kind = src->kind;
  bound.statement = *src;  // deep copy

  // choose a binding per distinct free variable, in first-use order
  std::map<std::string, ScopeBinding> chosen;
  for (const FreeVar& fv : collectFreeVars(p, sourceId)) {
    std::vector<const ScopeBinding*> candidates;
    for (const auto& b : loc.scope.bindings) {
      if (b.type != fv.type) continue;
      if (fv.usedAsLvalue && b.origin == BindingOrigin::This) continue;
      candidates.push_back(&b);
    }
    if (candidates.empty()) throw NoBinding(fv.display);
    const ScopeBinding* pick = candidates[chooser(fv, candidates)];
    chosen[fv.key] = *pick;
    bound.rewritingCount *= static_cast<long long>(candidates.size());
    bound.binding[fv.key] = pick->name;
  }

  // fresh names for declarations inside the transplant
  StmtContext locCtx = stmtContext(p, loc.id);
  std::set<std::string> taken = namesUsedInMethod(*locCtx.hostMethod);
  for (const auto& b : loc.scope.bindings) taken.insert(b.name);
  int counter = 0;
  std::map<std::string, std::string> fresh;
  for (const std::string& name : declaredNamesIn(*src)) {
    fresh[name] = freshName("__v", taken, counter);
    taken.insert(fresh[name]);
  }
  bound.freshNames = fresh;

  detail::RefWalker walker(srcScope, srcCtx.hostClass->name);
  walker.walk(
      bound.statement,
      [&](RefSite site) {
        if (site.key.empty()) {
          // declared within the transplant: rename to the fresh name
          if (site.kind == RefSite::Kind::Var) {
            auto it = fresh.find(site.expr->name);
            if (it != fresh.end()) site.expr->name = it->second;
          } else if (site.kind == RefSite::Kind::CallReceiver) {
            auto it = fresh.find(site.expr->qualifier);
            if (it != fresh.end()) site.expr->qualifier = it->second;
          } else if (site.kind == RefSite::Kind::CounterName) {
            auto it = fresh.find(site.stmt->name);
            if (it != fresh.end()) site.stmt->name = it->second;
          }
          return;
        }
        auto it = chosen.find(site.key);
        if (it == chosen.end()) return;
        const ScopeBinding& b = it->second;
        switch (site.kind) {
          case RefSite::Kind::Var:
          case RefSite::Kind::This: {
            Expr replacement;
            if (b.origin == BindingOrigin::This) {
              replacement.kind = ExprKind::ThisRef;
            } else {
              replacement = Expr::varRef(b.name);
            }
            replacement.span = site.expr->span;
            *site.expr = std::move(replacement);
            break;
          }
          case RefSite::Kind::CallReceiver:
            if (b.origin == BindingOrigin::This) {
              site.expr->recv = RecvKind::This;
              site.expr->qualifier.clear();
            } else {
              site.expr->recv = RecvKind::Name;
              site.expr->qualifier = b.name;
            }
            break;
          case RefSite::Kind::CounterName:
            site.stmt->name = b.name;
            break;
        }
      },
      [&](std::string& declSlot) {
        auto it = fresh.find(declSlot);
        if (it != fresh.end()) declSlot = it->second;
      });

  return bound;
}

// uniform choice at every free point
inline BoundTransplant bindTransplant(const Program& p, const ProgramInfo& info,
                                      const StmtId& sourceId, const Location& loc, Rng& rng) {
  return bindTransplantWith(p, info, sourceId, loc,
                            [&](const FreeVar&, const std::vector<const ScopeBinding*>& c) {
                              return rng.pick(static_cast<int>(c.size()));
                            });
}

// replays a recorded binding (free var key -> chosen name)
inline BoundTransplant bindTransplantExplicit(const Program& p, const ProgramInfo& info,
                                              const StmtId& sourceId, const Location& loc,
                                              const std::map<std::string, std::string>& binding) {
  return bindTransplantWith(
      p, info, sourceId, loc,
      [&](const FreeVar& fv, const std::vector<const ScopeBinding*>& c) {
        auto it = binding.find(fv.key);
        if (it == binding.end()) throw NoBinding(fv.display);
        for (int i = 0; i < static_cast<int>(c.size()); ++i)
          if (c[i]->name == it->second) return i;
        throw NoBinding(fv.display);
      });
}

// ---------------------------------------------------------------------------
// Variants
// ---------------------------------------------------------------------------

struct Variant {
  Program program;
  TransfoKind kind = TransfoKind::Add;
  StmtId locationId;
  StmtKind locationKind = StmtKind::Block;
  std::optional<StmtId> transplantSourceId;
  std::optional<StmtKind> transplantKind;
  std::map<std::string, std::string> binding;
  std::map<std::string, std::string> freshNames;
  long long rewritingCount = 0;
  // targeted provenance
  std::string methodRef;      // ami: "Class.method"
  std::string receiverUsed;   // ami
  std::vector<std::string> argsUsed;  // ami
  std::string wellField;      // ami, "" when void
  std::string catchVar;       // ami
  std::string interfaceName;  // swap
  std::string fromClass;      // swap
  std::string targetClass;    // swap
  std::string loopProbeLabel;  // flip
  std::uint64_t seed = 0;
  // verdict, assigned by the campaign gates
  std::optional<Verdict> verdict;
};

inline Variant applyAdd(const Program& p, const Location& loc, const BoundTransplant& bound) {
  Variant v;
  v.program = p;
  v.kind = TransfoKind::Add;
  v.locationId = loc.id;
  v.locationKind = loc.nodeKind;
  v.transplantSourceId = bound.sourceId;
  v.transplantKind = bound.kind;
  v.binding = bound.binding;
  v.freshNames = bound.freshNames;
  v.rewritingCount = bound.rewritingCount;
  StmtSlot slot = locateStmt(v.program, loc.id);
  if (!slot.found()) throw UnknownStatement(loc.id);
  slot.list->insert(slot.list->begin() + slot.index, bound.statement);
  return v;
}

inline Variant applyDelete(const Program& p, const Location& loc) {
  const Stmt* target = findStmt(p, loc.id);
  if (!target) throw UnknownStatement(loc.id);
  if (target->kind == StmtKind::VarDecl) {
    // fast-fail when the declared variable is referenced by a later sibling
    Program& mp = const_cast<Program&>(p);
    StmtSlot slot = locateStmt(mp, loc.id);
    for (int i = slot.index + 1; i < static_cast<int>(slot.list->size()); ++i) {
      bool used = false;
      forEachExprInStmt((*slot.list)[i], [&](const Expr& e) {
        if ((e.kind == ExprKind::VarRef && e.name == target->name) ||
            (e.kind == ExprKind::Call && e.recv == RecvKind::Name &&
             e.qualifier == target->name))
          used = true;
      });
      if (!used && (*slot.list)[i].kind == StmtKind::ForCounted &&
          !(*slot.list)[i].declaresCounter && (*slot.list)[i].name == target->name)
        used = true;
      if (used) throw WouldBreakScope(target->name);
    }
  }
  Variant v;
  v.program = p;
  v.kind = TransfoKind::Delete;
  v.locationId = loc.id;
  v.locationKind = loc.nodeKind;
  StmtSlot slot = locateStmt(v.program, loc.id);
  slot.list->erase(slot.list->begin() + slot.index);
  return v;
}

inline Variant applyReplace(const Program& p, const ProgramInfo& info, const Location& loc,
                            const BoundTransplant& bound) {
  if (bound.sourceId == loc.id) throw PreconditionViolated("SelfReplace");
  bool sameKindOnly = loc.nodeKind == StmtKind::VarDecl || loc.nodeKind == StmtKind::Return ||
                      loc.nodeKind == StmtKind::Throw;
  if (sameKindOnly && bound.kind != loc.nodeKind)
    throw PreconditionViolated(std::string("SameKindRequired:") + stmtKindName(loc.nodeKind));
  if (loc.nodeKind == StmtKind::Return) {
    TypeSignature a = signatureOf(p, info, loc.id);
    TypeSignature b = signatureOf(p, info, bound.sourceId);
    if (a.returnType != b.returnType) throw PreconditionViolated("ReturnTypeMismatch");
  }
  Variant v;
  v.program = p;
  v.kind = TransfoKind::Replace;
  v.locationId = loc.id;
  v.locationKind = loc.nodeKind;
  v.transplantSourceId = bound.sourceId;
  v.transplantKind = bound.kind;
  v.binding = bound.binding;
  v.freshNames = bound.freshNames;
  v.rewritingCount = bound.rewritingCount;
  StmtSlot slot = locateStmt(v.program, loc.id);
  if (!slot.found()) throw UnknownStatement(loc.id);
  (*slot.list)[slot.index] = bound.statement;
  return v;
}

}  // namespace nvgen

#endif  // NVGEN_TRANSFORM_HPP
