#ifndef NVGEN_PRINTER_HPP
#define NVGEN_PRINTER_HPP

#include <string>

#include "nvgen/ast.hpp"

namespace nvgen {

// Deterministic source renderer. parse(prettyPrint(p)) is structurally
// identical to p, which makes the printed form usable as statement identity
// and as the on-disk variant format.
class Printer {
 public:
  std::string print(const Program& p) {
    out_.clear();
    for (const auto& i : p.interfaces) printInterface(i);
    for (const auto& c : p.classes) printClass(c);
    for (const auto& t : p.tests) printTest(t);
    return out_;
  }

  std::string printStmtOneLine(const Stmt& s) {
    out_.clear();
    indent_ = 0;
    printStmt(s);
    // collapse the trailing newline for single-line display
    while (!out_.empty() && out_.back() == '\n') out_.pop_back();
    return out_;
  }

  std::string printExprText(const Expr& e) {
    out_.clear();
    printExpr(e, 0);
    return out_;
  }

 private:
  std::string out_;
  int indent_ = 0;

  void line(const std::string& s) {
    out_.append(indent_ * 2, ' ');
    out_ += s;
    out_ += '\n';
  }

  void printInterface(const InterfaceDecl& d) {
    line("interface " + d.name + " {");
    ++indent_;
    for (const auto& m : d.methods) {
      std::string s = m.returnType.str() + " " + m.name + "(";
      for (size_t i = 0; i < m.params.size(); ++i) {
        if (i) s += ", ";
        s += m.params[i].type.str() + " " + m.params[i].name;
      }
      s += ");";
      line(s);
    }
    --indent_;
    line("}");
  }

  void printClass(const ClassDecl& d) {
    std::string head = "class " + d.name;
    if (!d.interfaces.empty()) {
      head += " implements ";
      for (size_t i = 0; i < d.interfaces.size(); ++i) {
        if (i) head += ", ";
        head += d.interfaces[i];
      }
    }
    line(head + " {");
    ++indent_;
    for (const auto& f : d.fields) {
      std::string s;
      if (!f.isPublic) s += "private ";
      if (f.isStatic) s += "static ";
      s += f.type.str() + " " + f.name;
      if (f.init) s += " = " + exprText(*f.init);
      s += ";";
      line(s);
    }
    for (const auto& m : d.methods) {
      std::string s;
      if (!m.isPublic) s += "private ";
      if (m.isStatic) s += "static ";
      s += m.returnType.str() + " " + m.name + "(";
      for (size_t i = 0; i < m.params.size(); ++i) {
        if (i) s += ", ";
        s += m.params[i].type.str() + " " + m.params[i].name;
      }
      s += ") {";
      line(s);
      ++indent_;
      for (const auto& st : m.body) printStmt(st);
      --indent_;
      line("}");
    }
    --indent_;
    line("}");
  }

  void printTest(const TestDecl& t) {
    line("test " + t.name + " {");
    ++indent_;
    for (const auto& st : t.body) printStmt(st);
    --indent_;
    line("}");
  }

  void printStmt(const Stmt& s) {
    switch (s.kind) {
      case StmtKind::Invocation:
        if (s.exprs[0].kind == ExprKind::Call && s.exprs[0].recv == RecvKind::Bare &&
            s.exprs[0].name == "assert") {
          line("assert " + exprText(s.exprs[0].kids[0]) + ";");
        } else {
          line(exprText(s.exprs[0]) + ";");
        }
        return;
      case StmtKind::ConstructorCall:
        line(exprText(s.exprs[0]) + ";");
        return;
      case StmtKind::Assignment:
        line(exprText(s.exprs[0]) + " = " + exprText(s.exprs[1]) + ";");
        return;
      case StmtKind::VarDecl: {
        std::string t = s.declType.str() + " " + s.name;
        if (!s.exprs.empty()) t += " = " + exprText(s.exprs[0]);
        line(t + ";");
        return;
      }
      case StmtKind::Return:
        line(s.exprs.empty() ? "return;" : "return " + exprText(s.exprs[0]) + ";");
        return;
      case StmtKind::Throw:
        line("throw " + exprText(s.exprs[0]) + ";");
        return;
      case StmtKind::Break:
        line("break;");
        return;
      case StmtKind::Continue:
        line("continue;");
        return;
      case StmtKind::If:
        printIf(s, false);
        return;
      case StmtKind::While:
        line("while (" + exprText(s.exprs[0]) + ") {");
        printBody(s.body);
        line("}");
        return;
      case StmtKind::ForCounted: {
        std::string head = "for (";
        if (s.declaresCounter) head += "int ";
        head += s.name + " = " + exprText(s.exprs[0]) + "; " + exprText(s.exprs[1]) + "; " +
                s.name + " = " + exprText(s.exprs[2]) + ") {";
        line(head);
        printBody(s.body);
        line("}");
        return;
      }
      case StmtKind::ForEach:
        line("for (" + s.declType.str() + " " + s.name + " : " + exprText(s.exprs[0]) + ") {");
        printBody(s.body);
        line("}");
        return;
      case StmtKind::Try:
        line("try {");
        printBody(s.body);
        line("} catch (" + s.name + ") {");
        printBody(s.elseBody);
        line("}");
        return;
      case StmtKind::Block:
        line("{");
        printBody(s.body);
        line("}");
        return;
    }
  }

  void printIf(const Stmt& s, bool asElseIf) {
    std::string head = std::string(asElseIf ? "} else if (" : "if (") + exprText(s.exprs[0]) + ") {";
    if (asElseIf) {
      out_.append(indent_ * 2, ' ');
      out_ += head;
      out_ += '\n';
    } else {
      line(head);
    }
    printBody(s.body);
    if (!s.elseBody.empty()) {
      if (s.elseBody.size() == 1 && s.elseBody[0].kind == StmtKind::If) {
        printIf(s.elseBody[0], true);
        return;  // nested if printed its own closing brace
      }
      line("} else {");
      printBody(s.elseBody);
    }
    line("}");
  }

  void printBody(const std::vector<Stmt>& body) {
    ++indent_;
    for (const auto& st : body) printStmt(st);
    --indent_;
  }

  std::string exprText(const Expr& e) {
    std::string saved;
    saved.swap(out_);
    printExpr(e, 0);
    std::string r;
    r.swap(out_);
    out_.swap(saved);
    return r;
  }

  static int binPrec(BinaryOp op) {
    switch (op) {
      case BinaryOp::Or: return 1;
      case BinaryOp::And: return 2;
      case BinaryOp::Eq:
      case BinaryOp::Ne: return 3;
      case BinaryOp::Lt:
      case BinaryOp::Le:
      case BinaryOp::Gt:
      case BinaryOp::Ge: return 4;
      case BinaryOp::Add:
      case BinaryOp::Sub: return 5;
      default: return 6;
    }
  }

  static const char* binSym(BinaryOp op) {
    switch (op) {
      case BinaryOp::Add: return "+";
      case BinaryOp::Sub: return "-";
      case BinaryOp::Mul: return "*";
      case BinaryOp::Div: return "/";
      case BinaryOp::Mod: return "%";
      case BinaryOp::Lt: return "<";
      case BinaryOp::Le: return "<=";
      case BinaryOp::Gt: return ">";
      case BinaryOp::Ge: return ">=";
      case BinaryOp::Eq: return "==";
      case BinaryOp::Ne: return "!=";
      case BinaryOp::And: return "&&";
      case BinaryOp::Or: return "||";
    }
    return "?";
  }

  int precOf(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Ternary: return 0;
      case ExprKind::Binary: return binPrec(e.binOp);
      case ExprKind::Unary: return 7;
      default: return 8;
    }
  }

  // minPrec: parenthesize when this node binds weaker than the context needs
  void printExpr(const Expr& e, int minPrec) {
    int prec = precOf(e);
    bool parens = prec < minPrec;
    if (parens) out_ += '(';
    switch (e.kind) {
      case ExprKind::IntLit:
        out_ += std::to_string(e.intValue);
        break;
      case ExprKind::BoolLit:
        out_ += e.boolValue ? "true" : "false";
        break;
      case ExprKind::StringLit:
        out_ += '"';
        for (char c : e.strValue) {
          switch (c) {
            case '\n': out_ += "\\n"; break;
            case '\t': out_ += "\\t"; break;
            case '\\': out_ += "\\\\"; break;
            case '"': out_ += "\\\""; break;
            default: out_ += c;
          }
        }
        out_ += '"';
        break;
      case ExprKind::NullLit:
        out_ += "null";
        break;
      case ExprKind::VarRef:
        out_ += e.name;
        break;
      case ExprKind::ThisRef:
        out_ += "this";
        break;
      case ExprKind::FieldRef:
        out_ += "this." + e.name;
        break;
      case ExprKind::StaticRef:
        out_ += e.qualifier + "." + e.name;
        break;
      case ExprKind::New:
        out_ += "new " + e.name + "()";
        break;
      case ExprKind::Call: {
        if (e.recv == RecvKind::This) out_ += "this.";
        else if (e.recv == RecvKind::Name) out_ += e.qualifier + ".";
        out_ += e.name + "(";
        for (size_t i = 0; i < e.kids.size(); ++i) {
          if (i) out_ += ", ";
          printExpr(e.kids[i], 0);
        }
        out_ += ")";
        break;
      }
      case ExprKind::Unary: {
        out_ += e.unOp == UnaryOp::Not ? "!" : "-";
        const Expr& kid = e.kids[0];
        bool wrap = kid.kind == ExprKind::Unary && kid.unOp == e.unOp;
        if (wrap) out_ += '(';
        printExpr(kid, wrap ? 0 : 7);
        if (wrap) out_ += ')';
        break;
      }
      case ExprKind::Binary: {
        printExpr(e.kids[0], prec);
        out_ += ' ';
        out_ += binSym(e.binOp);
        out_ += ' ';
        printExpr(e.kids[1], prec + 1);
        break;
      }
      case ExprKind::Ternary: {
        printExpr(e.kids[0], 1);
        out_ += " ? ";
        printExpr(e.kids[1], 0);
        out_ += " : ";
        printExpr(e.kids[2], 0);
        break;
      }
    }
    if (parens) out_ += ')';
  }
};

inline std::string prettyPrint(const Program& p) { return Printer().print(p); }

inline std::string stmtText(const Stmt& s) { return Printer().printStmtOneLine(s); }

inline std::string exprToText(const Expr& e) { return Printer().printExprText(e); }

// Identity of shape: spans are ignored because the printer never reads them.
inline bool structurallyEqual(const Program& a, const Program& b) {
  return prettyPrint(a) == prettyPrint(b);
}

}  // namespace nvgen

#endif  // NVGEN_PRINTER_HPP
