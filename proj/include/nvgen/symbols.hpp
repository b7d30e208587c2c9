#ifndef NVGEN_SYMBOLS_HPP
#define NVGEN_SYMBOLS_HPP

#include <map>
#include <string>
#include <vector>

#include "nvgen/ast.hpp"

namespace nvgen {

// Name tables over one parsed unit. Assumes checkProgram passed for the
// queries that return raw pointers.
class ProgramInfo {
 public:
  explicit ProgramInfo(const Program& p) : program_(&p) {
    for (int i = 0; i < static_cast<int>(p.interfaces.size()); ++i)
      interfaces_[p.interfaces[i].name] = i;
    for (int i = 0; i < static_cast<int>(p.classes.size()); ++i)
      classes_[p.classes[i].name] = i;
  }

  const Program& program() const { return *program_; }

  const InterfaceDecl* findInterface(const std::string& name) const {
    auto it = interfaces_.find(name);
    return it == interfaces_.end() ? nullptr : &program_->interfaces[it->second];
  }

  const ClassDecl* findClass(const std::string& name) const {
    auto it = classes_.find(name);
    return it == classes_.end() ? nullptr : &program_->classes[it->second];
  }

  int classIndex(const std::string& name) const {
    auto it = classes_.find(name);
    return it == classes_.end() ? -1 : it->second;
  }

  bool isTypeName(const std::string& name) const {
    return classes_.count(name) || interfaces_.count(name) || isBuiltinInterface(name) ||
           isBuiltinImpl(name);
  }

  const FieldDecl* findField(const ClassDecl& cls, const std::string& name) const {
    for (const auto& f : cls.fields)
      if (f.name == name) return &f;
    return nullptr;
  }

  const MethodDecl* findMethod(const ClassDecl& cls, const std::string& name) const {
    for (const auto& m : cls.methods)
      if (m.name == name) return &m;
    return nullptr;
  }

  const MethodSig* findInterfaceMethod(const InterfaceDecl& iface, const std::string& name) const {
    for (const auto& m : iface.methods)
      if (m.name == name) return &m;
    return nullptr;
  }

  // true when a value of type `from` can flow into a slot of type `to`
  // without a runtime check
  bool assignableStrict(const TypeRef& to, const TypeRef& from) const {
    if (to == from && to.kind != TypeKind::Void && to.kind != TypeKind::Elem) return true;
    if (from.kind == TypeKind::Null && to.isReference()) return true;
    if (from.kind == TypeKind::Class && to.kind == TypeKind::Interface)
      return classImplements(from.name, to.name);
    return false;
  }

  bool classImplements(const std::string& cls, const std::string& iface) const {
    if (isBuiltinImpl(cls)) return builtinImplInterface(cls) == iface;
    const ClassDecl* c = findClass(cls);
    if (!c) return false;
    for (const auto& i : c->interfaces)
      if (i == iface) return true;
    return false;
  }

  // Interface through which methods of a reference type are dispatched:
  // builtin impls expose their builtin interface.
  std::string builtinIfaceOf(const TypeRef& t) const {
    if (t.kind == TypeKind::Interface && isBuiltinInterface(t.name)) return t.name;
    if (t.kind == TypeKind::Class && isBuiltinImpl(t.name)) return builtinImplInterface(t.name);
    return "";
  }

 private:
  const Program* program_;
  std::map<std::string, int> interfaces_;
  std::map<std::string, int> classes_;
};

}  // namespace nvgen

#endif  // NVGEN_SYMBOLS_HPP
