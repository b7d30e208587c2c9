#ifndef NVGEN_PARSER_HPP
#define NVGEN_PARSER_HPP

#include <set>
#include <string>
#include <vector>

#include "nvgen/ast.hpp"
#include "nvgen/lexer.hpp"

namespace nvgen {

// Recursive-descent parser for .mini sources. Shorthand updates (i++, i -= 2,
// x += y) are normalized to plain assignments here, so counted-loop headers
// are always in canonical form when they match the loop grammar.
class Parser {
 public:
  explicit Parser(const std::string& src) : toks_(Lexer(src).tokenize()) {}

  Program parseProgram() {
    Program p;
    while (!at(Tok::Eof)) {
      if (at(Tok::KwInterface)) {
        p.interfaces.push_back(parseInterface());
      } else if (at(Tok::KwClass)) {
        p.classes.push_back(parseClass());
      } else if (at(Tok::KwTest)) {
        p.tests.push_back(parseTest());
      } else {
        throw SyntaxError(cur().pos, "unexpected token '" + cur().text + "'",
                          "'class', 'interface' or 'test'");
      }
    }
    resolveTypeKinds(p);
    return p;
  }

 private:
  std::vector<Token> toks_;
  size_t pos_ = 0;

  const Token& cur() const { return toks_[pos_]; }
  const Token& peek(size_t off = 1) const {
    return toks_[std::min(pos_ + off, toks_.size() - 1)];
  }
  bool at(Tok k) const { return cur().kind == k; }

  Token eat(Tok k, const char* what) {
    if (!at(k)) throw SyntaxError(cur().pos, "unexpected token '" + cur().text + "'", what);
    return toks_[pos_++];
  }

  bool accept(Tok k) {
    if (at(k)) {
      ++pos_;
      return true;
    }
    return false;
  }

  // ---- declarations ----

  InterfaceDecl parseInterface() {
    eat(Tok::KwInterface, "'interface'");
    InterfaceDecl d;
    d.name = eat(Tok::Ident, "interface name").text;
    eat(Tok::LBrace, "'{'");
    while (!accept(Tok::RBrace)) {
      MethodSig sig;
      sig.returnType = parseReturnType();
      sig.name = eat(Tok::Ident, "method name").text;
      eat(Tok::LParen, "'('");
      sig.params = parseParams();
      eat(Tok::Semi, "';'");
      d.methods.push_back(std::move(sig));
    }
    return d;
  }

  ClassDecl parseClass() {
    eat(Tok::KwClass, "'class'");
    ClassDecl d;
    d.name = eat(Tok::Ident, "class name").text;
    if (accept(Tok::KwImplements)) {
      d.interfaces.push_back(eat(Tok::Ident, "interface name").text);
      while (accept(Tok::Comma))
        d.interfaces.push_back(eat(Tok::Ident, "interface name").text);
    }
    eat(Tok::LBrace, "'{'");
    while (!accept(Tok::RBrace)) parseMember(d);
    return d;
  }

  void parseMember(ClassDecl& cls) {
    bool isPublic = true;
    if (accept(Tok::KwPrivate)) isPublic = false;
    else accept(Tok::KwPublic);
    bool isStatic = accept(Tok::KwStatic);

    SourceSpan span{cur().pos, cur().pos};
    TypeRef type = parseReturnType();
    std::string name = eat(Tok::Ident, "member name").text;

    if (at(Tok::LParen)) {
      MethodDecl m;
      m.name = std::move(name);
      m.isStatic = isStatic;
      m.isPublic = isPublic;
      m.returnType = type;
      m.span = span;
      eat(Tok::LParen, "'('");
      m.params = parseParams();
      m.body = parseBlockStmts();
      cls.methods.push_back(std::move(m));
    } else {
      if (type.isVoid()) throw SyntaxError(span.begin, "field cannot have void type");
      FieldDecl f;
      f.name = std::move(name);
      f.type = type;
      f.isStatic = isStatic;
      f.isPublic = isPublic;
      if (accept(Tok::Assign)) f.init = parseExpr();
      eat(Tok::Semi, "';'");
      cls.fields.push_back(std::move(f));
    }
  }

  TestDecl parseTest() {
    eat(Tok::KwTest, "'test'");
    TestDecl t;
    t.name = eat(Tok::Ident, "test name").text;
    t.body = parseBlockStmts();
    return t;
  }

  std::vector<Param> parseParams() {
    std::vector<Param> out;
    if (accept(Tok::RParen)) return out;
    for (;;) {
      Param p;
      p.type = parseType();
      p.name = eat(Tok::Ident, "parameter name").text;
      out.push_back(std::move(p));
      if (accept(Tok::RParen)) return out;
      eat(Tok::Comma, "',' or ')'");
    }
  }

  TypeRef parseType() {
    if (accept(Tok::KwInt)) return TypeRef::intType();
    if (accept(Tok::KwBool)) return TypeRef::boolType();
    if (accept(Tok::KwString)) return TypeRef::stringType();
    if (at(Tok::Ident)) return TypeRef::classType(eat(Tok::Ident, "type").text);
    throw SyntaxError(cur().pos, "unexpected token '" + cur().text + "'", "a type");
  }

  TypeRef parseReturnType() {
    if (accept(Tok::KwVoid)) return TypeRef::voidType();
    return parseType();
  }

  // ---- statements ----

  std::vector<Stmt> parseBlockStmts() {
    eat(Tok::LBrace, "'{'");
    std::vector<Stmt> out;
    while (!accept(Tok::RBrace)) out.push_back(parseStmt());
    return out;
  }

  bool atTypeStart() const {
    if (at(Tok::KwInt) || at(Tok::KwBool) || at(Tok::KwString)) return true;
    return at(Tok::Ident) && peek().kind == Tok::Ident;
  }

  Stmt parseStmt() {
    SourceSpan span{cur().pos, cur().pos};
    Stmt s;
    s.span = span;

    if (at(Tok::LBrace)) {
      s.kind = StmtKind::Block;
      s.body = parseBlockStmts();
      return s;
    }
    if (at(Tok::KwReturn)) return parseReturn();
    if (at(Tok::KwIf)) return parseIf();
    if (at(Tok::KwWhile)) return parseWhile();
    if (at(Tok::KwFor)) return parseFor();
    if (at(Tok::KwTry)) return parseTry();
    if (at(Tok::KwThrow)) {
      ++pos_;
      s.kind = StmtKind::Throw;
      s.exprs.push_back(parseExpr());
      eat(Tok::Semi, "';'");
      return s;
    }
    if (at(Tok::KwBreak)) {
      ++pos_;
      s.kind = StmtKind::Break;
      eat(Tok::Semi, "';'");
      return s;
    }
    if (at(Tok::KwContinue)) {
      ++pos_;
      s.kind = StmtKind::Continue;
      eat(Tok::Semi, "';'");
      return s;
    }
    if (at(Tok::KwAssert)) {
      // assert <expr>; parses as an invocation of the builtin test oracle
      ++pos_;
      Expr call;
      call.kind = ExprKind::Call;
      call.recv = RecvKind::Bare;
      call.name = "assert";
      call.span = span;
      call.kids.push_back(parseExpr());
      eat(Tok::Semi, "';'");
      s.kind = StmtKind::Invocation;
      s.exprs.push_back(std::move(call));
      return s;
    }
    if (atTypeStart()) return parseVarDecl();
    return parseExprStmt();
  }

  Stmt parseVarDecl() {
    Stmt s;
    s.span = {cur().pos, cur().pos};
    s.kind = StmtKind::VarDecl;
    s.declType = parseType();
    s.name = eat(Tok::Ident, "variable name").text;
    if (accept(Tok::Assign)) s.exprs.push_back(parseExpr());
    eat(Tok::Semi, "';'");
    return s;
  }

  Stmt parseReturn() {
    Stmt s;
    s.span = {cur().pos, cur().pos};
    eat(Tok::KwReturn, "'return'");
    s.kind = StmtKind::Return;
    if (!at(Tok::Semi)) s.exprs.push_back(parseExpr());
    eat(Tok::Semi, "';'");
    return s;
  }

  Stmt parseIf() {
    Stmt s;
    s.span = {cur().pos, cur().pos};
    eat(Tok::KwIf, "'if'");
    s.kind = StmtKind::If;
    eat(Tok::LParen, "'('");
    s.exprs.push_back(parseExpr());
    eat(Tok::RParen, "')'");
    s.body = parseBlockStmts();
    if (accept(Tok::KwElse)) {
      if (at(Tok::KwIf)) {
        s.elseBody.push_back(parseIf());
      } else {
        s.elseBody = parseBlockStmts();
      }
    }
    return s;
  }

  Stmt parseWhile() {
    Stmt s;
    s.span = {cur().pos, cur().pos};
    eat(Tok::KwWhile, "'while'");
    s.kind = StmtKind::While;
    eat(Tok::LParen, "'('");
    s.exprs.push_back(parseExpr());
    eat(Tok::RParen, "')'");
    s.body = parseBlockStmts();
    return s;
  }

  Stmt parseTry() {
    Stmt s;
    s.span = {cur().pos, cur().pos};
    eat(Tok::KwTry, "'try'");
    s.kind = StmtKind::Try;
    s.body = parseBlockStmts();
    eat(Tok::KwCatch, "'catch'");
    eat(Tok::LParen, "'('");
    s.name = eat(Tok::Ident, "catch variable").text;
    eat(Tok::RParen, "')'");
    s.elseBody = parseBlockStmts();
    return s;
  }

  // for (int i = e; cond; update) {...}  |  for (i = e; cond; update) {...}
  // for (type x : coll) {...}
  Stmt parseFor() {
    Stmt s;
    s.span = {cur().pos, cur().pos};
    eat(Tok::KwFor, "'for'");
    eat(Tok::LParen, "'('");

    bool declared = false;
    TypeRef declType;
    if (at(Tok::KwInt) || at(Tok::KwBool) || at(Tok::KwString) ||
        (at(Tok::Ident) && peek().kind == Tok::Ident)) {
      declared = true;
      declType = parseType();
    }
    std::string var = eat(Tok::Ident, "loop variable").text;

    if (accept(Tok::Colon)) {
      if (!declared) throw SyntaxError(s.span.begin, "for-each variable needs a type");
      s.kind = StmtKind::ForEach;
      s.declType = declType;
      s.name = var;
      s.exprs.push_back(parseExpr());
      eat(Tok::RParen, "')'");
      s.body = parseBlockStmts();
      return s;
    }

    s.kind = StmtKind::ForCounted;
    s.name = var;
    s.declaresCounter = declared;
    if (declared && declType != TypeRef::intType())
      throw SyntaxError(s.span.begin, "loop counter must be int");
    eat(Tok::Assign, "'='");
    s.exprs.push_back(parseExpr());  // init value
    eat(Tok::Semi, "';'");
    s.exprs.push_back(parseExpr());  // condition
    eat(Tok::Semi, "';'");
    s.exprs.push_back(parseForUpdate(var));  // normalized update RHS
    eat(Tok::RParen, "')'");
    s.body = parseBlockStmts();
    detectCanonicalLoop(s);
    return s;
  }

  // Normalizes i++, i--, i += e, i -= e, i = <expr> to an update RHS.
  Expr parseForUpdate(const std::string& counter) {
    Token t = eat(Tok::Ident, "loop counter");
    if (t.text != counter)
      throw SyntaxError(t.pos, "for-update must assign the loop counter '" + counter + "'");
    Expr counterRef = Expr::varRef(counter);
    counterRef.span = {t.pos, t.pos};
    if (accept(Tok::PlusPlus))
      return Expr::binary(BinaryOp::Add, counterRef, Expr::intLit(1));
    if (accept(Tok::MinusMinus))
      return Expr::binary(BinaryOp::Sub, counterRef, Expr::intLit(1));
    if (accept(Tok::PlusAssign))
      return Expr::binary(BinaryOp::Add, counterRef, parseExpr());
    if (accept(Tok::MinusAssign))
      return Expr::binary(BinaryOp::Sub, counterRef, parseExpr());
    eat(Tok::Assign, "'=', '+=', '-=', '++' or '--'");
    return parseExpr();
  }

  void detectCanonicalLoop(Stmt& s) {
    const Expr& cond = s.exprs[1];
    const Expr& update = s.exprs[2];
    s.canonicalLoop = false;
    if (cond.kind != ExprKind::Binary) return;
    CmpOp cmp;
    switch (cond.binOp) {
      case BinaryOp::Lt: cmp = CmpOp::Lt; break;
      case BinaryOp::Le: cmp = CmpOp::Le; break;
      case BinaryOp::Gt: cmp = CmpOp::Gt; break;
      case BinaryOp::Ge: cmp = CmpOp::Ge; break;
      default: return;
    }
    if (cond.kids[0].kind != ExprKind::VarRef || cond.kids[0].name != s.name) return;
    if (update.kind != ExprKind::Binary) return;
    StepOp op;
    if (update.binOp == BinaryOp::Add) op = StepOp::Plus;
    else if (update.binOp == BinaryOp::Sub) op = StepOp::Minus;
    else return;
    if (update.kids[0].kind != ExprKind::VarRef || update.kids[0].name != s.name) return;
    const Expr& step = update.kids[1];
    if (step.kind == ExprKind::IntLit && step.intValue <= 0) return;
    s.canonicalLoop = true;
    s.loop = LoopShape{cmp, op};
  }

  Stmt parseExprStmt() {
    Stmt s;
    s.span = {cur().pos, cur().pos};
    Expr e = parseExpr();

    auto isLvalue = [](const Expr& x) {
      return x.kind == ExprKind::VarRef || x.kind == ExprKind::FieldRef ||
             x.kind == ExprKind::StaticRef;
    };

    if (at(Tok::Assign) || at(Tok::PlusAssign) || at(Tok::MinusAssign) ||
        at(Tok::PlusPlus) || at(Tok::MinusMinus)) {
      if (!isLvalue(e))
        throw SyntaxError(cur().pos, "left side of assignment is not assignable");
      s.kind = StmtKind::Assignment;
      if (accept(Tok::Assign)) {
        s.exprs.push_back(e);
        s.exprs.push_back(parseExpr());
      } else if (accept(Tok::PlusAssign)) {
        Expr rhs = Expr::binary(BinaryOp::Add, e, parseExpr());
        s.exprs.push_back(e);
        s.exprs.push_back(std::move(rhs));
      } else if (accept(Tok::MinusAssign)) {
        Expr rhs = Expr::binary(BinaryOp::Sub, e, parseExpr());
        s.exprs.push_back(e);
        s.exprs.push_back(std::move(rhs));
      } else if (accept(Tok::PlusPlus)) {
        s.exprs.push_back(e);
        s.exprs.push_back(Expr::binary(BinaryOp::Add, e, Expr::intLit(1)));
      } else {
        eat(Tok::MinusMinus, "'--'");
        s.exprs.push_back(e);
        s.exprs.push_back(Expr::binary(BinaryOp::Sub, e, Expr::intLit(1)));
      }
      eat(Tok::Semi, "';'");
      return s;
    }

    eat(Tok::Semi, "';'");
    if (e.kind == ExprKind::Call) {
      s.kind = StmtKind::Invocation;
    } else if (e.kind == ExprKind::New) {
      s.kind = StmtKind::ConstructorCall;
    } else {
      throw SyntaxError(s.span.begin, "expression statement must be a call or a constructor");
    }
    s.exprs.push_back(std::move(e));
    return s;
  }

  // ---- expressions ----

  Expr parseExpr() { return parseTernary(); }

  Expr parseTernary() {
    Expr cond = parseOr();
    if (accept(Tok::Question)) {
      Expr a = parseExpr();
      eat(Tok::Colon, "':'");
      Expr b = parseTernary();
      Expr t = Expr::ternary(std::move(cond), std::move(a), std::move(b));
      return t;
    }
    return cond;
  }

  Expr parseOr() {
    Expr e = parseAnd();
    while (accept(Tok::OrOr)) e = Expr::binary(BinaryOp::Or, std::move(e), parseAnd());
    return e;
  }

  Expr parseAnd() {
    Expr e = parseEq();
    while (accept(Tok::AndAnd)) e = Expr::binary(BinaryOp::And, std::move(e), parseEq());
    return e;
  }

  Expr parseEq() {
    Expr e = parseRel();
    for (;;) {
      if (accept(Tok::EqEq)) e = Expr::binary(BinaryOp::Eq, std::move(e), parseRel());
      else if (accept(Tok::NotEq)) e = Expr::binary(BinaryOp::Ne, std::move(e), parseRel());
      else return e;
    }
  }

  Expr parseRel() {
    Expr e = parseAdd();
    for (;;) {
      if (accept(Tok::Lt)) e = Expr::binary(BinaryOp::Lt, std::move(e), parseAdd());
      else if (accept(Tok::Le)) e = Expr::binary(BinaryOp::Le, std::move(e), parseAdd());
      else if (accept(Tok::Gt)) e = Expr::binary(BinaryOp::Gt, std::move(e), parseAdd());
      else if (accept(Tok::Ge)) e = Expr::binary(BinaryOp::Ge, std::move(e), parseAdd());
      else return e;
    }
  }

  Expr parseAdd() {
    Expr e = parseMul();
    for (;;) {
      if (accept(Tok::Plus)) e = Expr::binary(BinaryOp::Add, std::move(e), parseMul());
      else if (accept(Tok::Minus)) e = Expr::binary(BinaryOp::Sub, std::move(e), parseMul());
      else return e;
    }
  }

  Expr parseMul() {
    Expr e = parseUnary();
    for (;;) {
      if (accept(Tok::Star)) e = Expr::binary(BinaryOp::Mul, std::move(e), parseUnary());
      else if (accept(Tok::Slash)) e = Expr::binary(BinaryOp::Div, std::move(e), parseUnary());
      else if (accept(Tok::Percent)) e = Expr::binary(BinaryOp::Mod, std::move(e), parseUnary());
      else return e;
    }
  }

  Expr parseUnary() {
    SourcePos pos = cur().pos;
    if (accept(Tok::Bang)) {
      Expr e;
      e.kind = ExprKind::Unary;
      e.unOp = UnaryOp::Not;
      e.span = {pos, pos};
      e.kids.push_back(parseUnary());
      return e;
    }
    if (accept(Tok::Minus)) {
      Expr e;
      e.kind = ExprKind::Unary;
      e.unOp = UnaryOp::Neg;
      e.span = {pos, pos};
      e.kids.push_back(parseUnary());
      return e;
    }
    return parsePrimary();
  }

  std::vector<Expr> parseArgs() {
    std::vector<Expr> args;
    eat(Tok::LParen, "'('");
    if (accept(Tok::RParen)) return args;
    for (;;) {
      args.push_back(parseExpr());
      if (accept(Tok::RParen)) return args;
      eat(Tok::Comma, "',' or ')'");
    }
  }

  Expr parsePrimary() {
    SourcePos pos = cur().pos;
    Expr e;
    e.span = {pos, pos};

    if (at(Tok::IntLit)) {
      e.kind = ExprKind::IntLit;
      e.intValue = cur().intValue;
      ++pos_;
      return e;
    }
    if (at(Tok::StringLit)) {
      e.kind = ExprKind::StringLit;
      e.strValue = cur().text;
      ++pos_;
      return e;
    }
    if (accept(Tok::KwTrue)) {
      e.kind = ExprKind::BoolLit;
      e.boolValue = true;
      return e;
    }
    if (accept(Tok::KwFalse)) {
      e.kind = ExprKind::BoolLit;
      e.boolValue = false;
      return e;
    }
    if (accept(Tok::KwNull)) {
      e.kind = ExprKind::NullLit;
      return e;
    }
    if (accept(Tok::KwNew)) {
      e.kind = ExprKind::New;
      e.name = eat(Tok::Ident, "class name").text;
      eat(Tok::LParen, "'('");
      eat(Tok::RParen, "')'");
      return e;
    }
    if (accept(Tok::KwThis)) {
      if (accept(Tok::Dot)) {
        std::string member = eat(Tok::Ident, "member name").text;
        if (at(Tok::LParen)) {
          e.kind = ExprKind::Call;
          e.recv = RecvKind::This;
          e.name = member;
          e.kids = parseArgs();
          return e;
        }
        e.kind = ExprKind::FieldRef;
        e.name = member;
        return e;
      }
      e.kind = ExprKind::ThisRef;
      return e;
    }
    if (accept(Tok::LParen)) {
      Expr inner = parseExpr();
      eat(Tok::RParen, "')'");
      return inner;
    }
    if (at(Tok::Ident)) {
      std::string first = eat(Tok::Ident, "identifier").text;
      if (at(Tok::LParen)) {
        e.kind = ExprKind::Call;
        e.recv = RecvKind::Bare;
        e.name = first;
        e.kids = parseArgs();
        return e;
      }
      if (accept(Tok::Dot)) {
        std::string member = eat(Tok::Ident, "member name").text;
        if (at(Tok::LParen)) {
          e.kind = ExprKind::Call;
          e.recv = RecvKind::Name;
          e.qualifier = first;
          e.name = member;
          e.kids = parseArgs();
          return e;
        }
        e.kind = ExprKind::StaticRef;
        e.qualifier = first;
        e.name = member;
        return e;
      }
      e.kind = ExprKind::VarRef;
      e.name = first;
      return e;
    }
    throw SyntaxError(pos, "unexpected token '" + cur().text + "'", "an expression");
  }

  // Named types parse as Class; after the whole unit is read, anything that
  // names a declared or builtin interface is rewritten to Interface kind.
  void resolveTypeKinds(Program& p) {
    std::set<std::string> ifaces;
    for (const auto& i : p.interfaces) ifaces.insert(i.name);
    auto fix = [&](TypeRef& t) {
      if (t.kind == TypeKind::Class && (ifaces.count(t.name) || isBuiltinInterface(t.name)))
        t.kind = TypeKind::Interface;
    };
    auto fixStmts = [&](std::vector<Stmt>& body, auto&& self) -> void {
      for (Stmt& s : body) {
        fix(s.declType);
        for (auto* list : childLists(s)) self(*list, self);
      }
    };
    for (auto& i : p.interfaces)
      for (auto& m : i.methods) {
        fix(m.returnType);
        for (auto& pr : m.params) fix(pr.type);
      }
    for (auto& c : p.classes) {
      for (auto& f : c.fields) fix(f.type);
      for (auto& m : c.methods) {
        fix(m.returnType);
        for (auto& pr : m.params) fix(pr.type);
        fixStmts(m.body, fixStmts);
      }
    }
    for (auto& t : p.tests) fixStmts(t.body, fixStmts);
  }
};

inline Program parse(const std::string& source) { return Parser(source).parseProgram(); }

}  // namespace nvgen

#endif  // NVGEN_PARSER_HPP
