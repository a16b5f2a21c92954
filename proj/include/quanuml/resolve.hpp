#pragma once

#include <map>
#include <string>
#include <vector>

#include "quanuml/ast.hpp"
#include "quanuml/source.hpp"

namespace quml {

enum class LifelineKind { Qubit, Cbit };

struct Lifeline {
  LifelineKind kind = LifelineKind::Qubit;
  int index = 0;       // position within its register, declaration order
  bool formal = false; // bound through a formal parameter
  SourceSpan span;
};

struct DiagramSymbols {
  const SeqDiagram* diagram = nullptr;
  std::map<std::string, Lifeline> lifelines;
  int numQubits = 0;
  int numCbits = 0;

  const Lifeline* find(const std::string& name) const {
    auto it = lifelines.find(name);
    return it == lifelines.end() ? nullptr : &it->second;
  }
};

struct UseEdge {
  std::string caller;
  std::string callee;
  SourceSpan span;
};

/// Bindings from names to declarations. Holds pointers into the resolved
/// Model, which must outlive the table.
struct SymbolTable {
  std::map<std::string, const ClassDecl*> classes;
  std::map<std::string, const SeqDiagram*> diagrams;
  std::map<std::string, DiagramSymbols> perDiagram;
  std::vector<UseEdge> useEdges;                       // in declaration/event order
  std::map<std::string, std::vector<std::string>> usedBy;  // callee -> callers
};

namespace detail {

inline void resolve_events(const std::vector<Event>& events, const DiagramSymbols& symbols,
                           const std::string& diagramName, const Model& model,
                           SymbolTable& table) {
  auto requireQubit = [&](const std::string& name, const SourceSpan& span) {
    const Lifeline* l = symbols.find(name);
    if (!l || l->kind != LifelineKind::Qubit) {
      throw Error("UnknownLifeline", span,
                  "'" + name + "' is not a qubit lifeline of diagram '" + diagramName + "'");
    }
  };
  auto requireLifeline = [&](const std::string& name, const SourceSpan& span) {
    if (!symbols.find(name)) {
      throw Error("UnknownLifeline", span,
                  "'" + name + "' is not a lifeline of diagram '" + diagramName + "'");
    }
  };
  auto requireCondLeaves = [&](const CondExpr& cond, const SourceSpan& span, auto&& self) -> void {
    if (cond.kind == CondExpr::Kind::Leaf) {
      const Lifeline* l = symbols.find(cond.cbit);
      if (!l || l->kind != LifelineKind::Cbit) {
        throw Error("UnknownLifeline", cond.span.file.empty() ? span : cond.span,
                    "'" + cond.cbit + "' is not a cbit of diagram '" + diagramName + "'");
      }
      return;
    }
    for (const auto& k : cond.kids) self(k, span, self);
  };

  for (const Event& e : events) {
    if (const auto* g = std::get_if<SingleGate>(&e.body)) {
      requireQubit(g->qubit, e.span);
    } else if (const auto* m = std::get_if<MultiGate>(&e.body)) {
      for (const auto& q : m->controls) requireQubit(q, e.span);
      for (const auto& q : m->targets) requireQubit(q, e.span);
    } else if (const auto* sw = std::get_if<SwapGate>(&e.body)) {
      requireQubit(sw->a, e.span);
      requireQubit(sw->b, e.span);
    } else if (const auto* me = std::get_if<MeasureEvent>(&e.body)) {
      requireQubit(me->qubit, e.span);
      requireLifeline(me->cbit, e.span);  // must exist; cbit-ness is a validator rule (Q002)
    } else if (const auto* alt = std::get_if<AltEvent>(&e.body)) {
      requireCondLeaves(alt->condition, e.span, requireCondLeaves);
      resolve_events(alt->thenEvents, symbols, diagramName, model, table);
      resolve_events(alt->elseEvents, symbols, diagramName, model, table);
    } else if (const auto* u = std::get_if<UseEvent>(&e.body)) {
      if (!model.find_sequence(u->subName)) {
        throw Error("UnknownDiagram", e.span,
                    "no sequence diagram named '" + u->subName + "'");
      }
      for (const auto& q : u->actuals) requireQubit(q, e.span);
      table.useEdges.push_back({diagramName, u->subName, e.span});
      auto& callers = table.usedBy[u->subName];
      if (callers.empty() || callers.back() != diagramName) callers.push_back(diagramName);
    }
  }
}

}  // namespace detail

/// Binds every name to its declaration, or throws the first resolution error
/// (UnknownClass, UnknownDiagram, UnknownLifeline, DuplicateName).
inline SymbolTable resolve(const Model& model) {
  SymbolTable table;

  for (const auto& c : model.classes) {
    if (!table.classes.emplace(c.name, &c).second) {
      throw Error("DuplicateName", c.span, "class '" + c.name + "' is declared twice");
    }
  }
  for (const auto& d : model.sequences) {
    if (table.classes.count(d.name)) {
      throw Error("DuplicateName", d.span,
                  "'" + d.name + "' names both a class and a sequence diagram");
    }
    if (!table.diagrams.emplace(d.name, &d).second) {
      throw Error("DuplicateName", d.span, "sequence diagram '" + d.name + "' is declared twice");
    }
  }

  for (const auto& r : model.relations) {
    for (const std::string* end : {&r.from, &r.to}) {
      if (!table.classes.count(*end)) {
        throw Error("UnknownClass", r.span, "relation endpoint '" + *end + "' is not a declared class");
      }
    }
  }
  for (const auto& c : model.classes) {
    if (c.circuitRef && !table.diagrams.count(*c.circuitRef)) {
      throw Error("UnknownDiagram", c.span,
                  "class '" + c.name + "' references unknown circuit '" + *c.circuitRef + "'");
    }
  }

  for (const auto& d : model.sequences) {
    DiagramSymbols symbols;
    symbols.diagram = &d;
    auto declare = [&](const std::string& name, LifelineKind kind, bool formal, int index,
                       const SourceSpan& span) {
      Lifeline l{kind, index, formal, span};
      if (!symbols.lifelines.emplace(name, l).second) {
        throw Error("DuplicateName", span,
                    "lifeline '" + name + "' is declared twice in diagram '" + d.name + "'");
      }
    };
    for (const auto& f : d.formalQubits) declare(f, LifelineKind::Qubit, true, symbols.numQubits++, d.span);
    for (const auto& q : d.qubitDecls) declare(q.name, LifelineKind::Qubit, false, symbols.numQubits++, q.span);
    for (const auto& c : d.cbitDecls) declare(c.name, LifelineKind::Cbit, false, symbols.numCbits++, c.span);
    table.perDiagram.emplace(d.name, std::move(symbols));
  }

  for (const auto& d : model.sequences) {
    detail::resolve_events(d.events, table.perDiagram.at(d.name), d.name, model, table);
  }
  return table;
}

}  // namespace quml
