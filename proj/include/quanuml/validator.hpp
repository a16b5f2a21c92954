#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "quanuml/ast.hpp"
#include "quanuml/resolve.hpp"

namespace quml {

enum class Severity { Error, Warning };

/// Positioned validation finding with a stable code (Q001..Q010).
struct Diagnostic {
  std::string code;
  Severity severity = Severity::Error;
  std::string message;
  SourceSpan span;

  std::string render() const {
    return span.to_string() + ": " +
           (severity == Severity::Error ? "error[" : "warning[") + code + "]: " + message;
  }
};

namespace detail {

/// Which formal qubits a sub-diagram measures, mapped transitively through
/// nested uses. "All paths" feeds lifeline-end tracking; "some path" feeds
/// observability checks.
struct DiagramSummary {
  std::set<int> formalsMeasuredAllPaths;
  std::set<int> formalsMeasuredSomePath;
};

struct PathState {
  std::set<std::string> endedAll;      // qubits measured on every path so far
  std::set<std::string> measuredSome;  // qubits measured on at least one path
  std::set<std::string> assignedSome;  // cbits assigned on at least one path
};

struct Walker {
  const Model& model;
  const SymbolTable& table;
  const std::map<std::string, DiagramSummary>& summaries;
  const SeqDiagram& diagram;
  const DiagramSymbols& symbols;
  std::vector<Diagnostic>& out;
  std::set<std::string> referencedQubits;

  void error(const char* code, const SourceSpan& span, std::string message) {
    out.push_back({code, Severity::Error, std::move(message), span});
  }

  void check_alive(const std::string& qubit, const PathState& st, int altDepth,
                   const SourceSpan& span) {
    referencedQubits.insert(qubit);
    if (st.endedAll.count(qubit)) {
      const char* code = altDepth > 0 ? "Q010" : "Q001";
      error(code, span, "qubit '" + qubit + "' is used after its lifeline ended at measurement");
    }
  }

  void check_cond_assigned(const CondExpr& cond, const PathState& st, const SourceSpan& span) {
    if (cond.kind == CondExpr::Kind::Leaf) {
      if (!st.assignedSome.count(cond.cbit)) {
        error("Q003", cond.span.file.empty() ? span : cond.span,
              "condition reads cbit '" + cond.cbit + "' before any measurement assigns it");
      }
      return;
    }
    for (const auto& k : cond.kids) check_cond_assigned(k, st, span);
  }

  void walk(const std::vector<Event>& events, PathState& st, int altDepth) {
    for (const Event& e : events) {
      if (const auto* g = std::get_if<SingleGate>(&e.body)) {
        check_alive(g->qubit, st, altDepth, e.span);
      } else if (const auto* m = std::get_if<MultiGate>(&e.body)) {
        std::set<std::string> seenControls, seenTargets;
        for (const auto& q : m->controls) {
          check_alive(q, st, altDepth, e.span);
          if (!seenControls.insert(q).second) {
            error("Q004", e.span, "control qubit '" + q + "' is listed twice");
          }
        }
        for (const auto& q : m->targets) {
          check_alive(q, st, altDepth, e.span);
          if (!seenTargets.insert(q).second) {
            error("Q004", e.span, "target qubit '" + q + "' is listed twice");
          }
          if (seenControls.count(q)) {
            error("Q004", e.span, "qubit '" + q + "' appears as both control and target");
          }
        }
      } else if (const auto* sw = std::get_if<SwapGate>(&e.body)) {
        check_alive(sw->a, st, altDepth, e.span);
        if (sw->b == sw->a) {
          error("Q004", e.span, "swap applies to qubit '" + sw->a + "' twice");
        } else {
          check_alive(sw->b, st, altDepth, e.span);
        }
      } else if (const auto* me = std::get_if<MeasureEvent>(&e.body)) {
        check_alive(me->qubit, st, altDepth, e.span);
        const Lifeline* target = symbols.find(me->cbit);
        if (!target || target->kind != LifelineKind::Cbit) {
          error("Q002", e.span, "measure target '" + me->cbit + "' is not a declared cbit");
        } else if (st.assignedSome.count(me->cbit)) {
          error("Q002", e.span,
                "cbit '" + me->cbit + "' is measured into twice outside distinct alt branches");
        } else {
          st.assignedSome.insert(me->cbit);
        }
        st.endedAll.insert(me->qubit);
        st.measuredSome.insert(me->qubit);
      } else if (const auto* alt = std::get_if<AltEvent>(&e.body)) {
        check_cond_assigned(alt->condition, st, e.span);
        PathState thenState = st;
        PathState elseState = st;
        walk(alt->thenEvents, thenState, altDepth + 1);
        walk(alt->elseEvents, elseState, altDepth + 1);
        PathState merged;
        std::set_intersection(thenState.endedAll.begin(), thenState.endedAll.end(),
                              elseState.endedAll.begin(), elseState.endedAll.end(),
                              std::inserter(merged.endedAll, merged.endedAll.begin()));
        std::set_union(thenState.measuredSome.begin(), thenState.measuredSome.end(),
                       elseState.measuredSome.begin(), elseState.measuredSome.end(),
                       std::inserter(merged.measuredSome, merged.measuredSome.begin()));
        std::set_union(thenState.assignedSome.begin(), thenState.assignedSome.end(),
                       elseState.assignedSome.begin(), elseState.assignedSome.end(),
                       std::inserter(merged.assignedSome, merged.assignedSome.begin()));
        st = std::move(merged);
      } else if (const auto* u = std::get_if<UseEvent>(&e.body)) {
        for (const auto& q : u->actuals) check_alive(q, st, altDepth, e.span);
        std::set<std::string> seen;
        for (const auto& q : u->actuals) {
          if (!seen.insert(q).second) {
            error("Q005", e.span, "use passes qubit '" + q + "' twice");
          }
        }
        const SeqDiagram* callee = model.find_sequence(u->subName);
        if (callee->formalQubits.size() != u->actuals.size()) {
          error("Q005", e.span,
                "use of '" + u->subName + "' passes " + std::to_string(u->actuals.size()) +
                    " qubits, but it declares " + std::to_string(callee->formalQubits.size()) +
                    " formal qubits");
        } else if (auto it = summaries.find(u->subName); it != summaries.end()) {
          for (int idx : it->second.formalsMeasuredAllPaths) st.endedAll.insert(u->actuals[idx]);
          for (int idx : it->second.formalsMeasuredSomePath) st.measuredSome.insert(u->actuals[idx]);
        }
      }
    }
  }
};

/// Topological order of the use DAG, callees before callers; diagrams that sit
/// on a use cycle are excluded (they get a Q006 instead of a path analysis).
inline std::vector<const SeqDiagram*> topo_order(const Model& model, const SymbolTable& table,
                                                 std::set<std::string>& cyclic,
                                                 std::vector<Diagnostic>& out) {
  std::map<std::string, std::vector<std::string>> edges;
  for (const auto& e : table.useEdges) edges[e.caller].push_back(e.callee);

  // Iterative DFS with tri-color marking; a back edge identifies a cycle.
  std::map<std::string, int> color;  // 0 white, 1 gray, 2 black
  std::vector<std::string> reportedCycles;
  for (const auto& d : model.sequences) {
    if (color[d.name]) continue;
    std::vector<std::string> stack = {d.name};
    std::vector<std::string> path;
    while (!stack.empty()) {
      std::string node = stack.back();
      if (color[node] == 0) {
        color[node] = 1;
        path.push_back(node);
        for (auto it = edges[node].rbegin(); it != edges[node].rend(); ++it) {
          if (color[*it] == 0) {
            stack.push_back(*it);
          } else if (color[*it] == 1) {
            // cycle: everything on the path from *it onward
            auto start = std::find(path.begin(), path.end(), *it);
            std::string names;
            for (auto p = start; p != path.end(); ++p) {
              cyclic.insert(*p);
              if (!names.empty()) names += " -> ";
              names += *p;
            }
            names += " -> " + *it;
            if (std::find(reportedCycles.begin(), reportedCycles.end(), *it) ==
                reportedCycles.end()) {
              reportedCycles.push_back(*it);
              const UseEdge* anchor = nullptr;
              for (const auto& ue : table.useEdges) {
                if (ue.caller == node && ue.callee == *it) {
                  anchor = &ue;
                  break;
                }
              }
              out.push_back({"Q006", Severity::Error,
                             "sub-diagram uses form a cycle: " + names,
                             anchor ? anchor->span : table.diagrams.at(*it)->span});
            }
          }
        }
      } else {
        stack.pop_back();
        if (color[node] == 1) {
          color[node] = 2;
          path.pop_back();
        }
      }
    }
  }

  // Kahn ordering over the acyclic part.
  std::map<std::string, int> indegree;
  std::map<std::string, std::vector<std::string>> rev;
  for (const auto& d : model.sequences)
    if (!cyclic.count(d.name)) indegree[d.name] = 0;
  for (const auto& e : table.useEdges) {
    if (cyclic.count(e.caller) || cyclic.count(e.callee)) continue;
    rev[e.callee].push_back(e.caller);
    ++indegree[e.caller];
  }
  std::vector<const SeqDiagram*> order;
  std::vector<std::string> ready;
  for (const auto& d : model.sequences)
    if (!cyclic.count(d.name) && indegree[d.name] == 0) ready.push_back(d.name);
  while (!ready.empty()) {
    std::string n = ready.front();
    ready.erase(ready.begin());
    order.push_back(table.diagrams.at(n));
    for (const auto& caller : rev[n]) {
      if (--indegree[caller] == 0) ready.push_back(caller);
    }
  }
  return order;
}

}  // namespace detail

/// Checks the semantic rules Q001..Q010 on a resolved model. Diagnostics are
/// sorted by (file, line, col, code); an empty result means the model is valid.
inline std::vector<Diagnostic> validate(const Model& model, const SymbolTable& table) {
  std::vector<Diagnostic> out;

  // Q007: a class that carries a circuit must be labeled quantum.
  for (const auto& c : model.classes) {
    if (c.circuitRef && !c.stereotypes.count(Stereotype::Quantum)) {
      out.push_back({"Q007", Severity::Error,
                     "class '" + c.name + "' references circuit '" + *c.circuitRef +
                         "' but lacks the <<Quantum>> stereotype",
                     c.span});
    }
  }

  // Q006 + evaluation order for transitive measurement summaries.
  std::set<std::string> cyclic;
  std::vector<const SeqDiagram*> order = detail::topo_order(model, table, cyclic, out);

  std::map<std::string, detail::DiagramSummary> summaries;
  for (const SeqDiagram* d : order) {
    const DiagramSymbols& symbols = table.perDiagram.at(d->name);
    detail::Walker walker{model, table, summaries, *d, symbols, out, {}};
    detail::PathState st;
    walker.walk(d->events, st, 0);

    if (d->parameterized()) {
      detail::DiagramSummary summary;
      for (size_t i = 0; i < d->formalQubits.size(); ++i) {
        if (st.endedAll.count(d->formalQubits[i])) summary.formalsMeasuredAllPaths.insert(int(i));
        if (st.measuredSome.count(d->formalQubits[i]))
          summary.formalsMeasuredSomePath.insert(int(i));
      }
      summaries.emplace(d->name, std::move(summary));
    }

    // Q008: declared but never referenced by any event.
    auto declaredSpan = [&](const std::string& name) {
      const Lifeline* l = symbols.find(name);
      return l ? l->span : d->span;
    };
    for (const auto& f : d->formalQubits) {
      if (!walker.referencedQubits.count(f)) {
        out.push_back({"Q008", Severity::Warning,
                       "qubit '" + f + "' is declared but never used", declaredSpan(f)});
      }
    }
    for (const auto& q : d->qubitDecls) {
      if (!walker.referencedQubits.count(q.name)) {
        out.push_back({"Q008", Severity::Warning,
                       "qubit '" + q.name + "' is declared but never used", q.span});
      }
    }

    // Q009: unobservable result — never measured, and no caller can measure it.
    bool hasParentUse = table.usedBy.count(d->name) && !table.usedBy.at(d->name).empty();
    if (!hasParentUse) {
      for (const auto& q : d->qubitDecls) {
        if (!st.measuredSome.count(q.name)) {
          out.push_back({"Q009", Severity::Warning,
                         "qubit '" + q.name + "' is never measured and diagram '" + d->name +
                             "' has no parent use; its result is unobservable",
                         q.span});
        }
      }
      for (const auto& f : d->formalQubits) {
        if (!st.measuredSome.count(f)) {
          out.push_back({"Q009", Severity::Warning,
                         "qubit '" + f + "' is never measured and diagram '" + d->name +
                             "' has no parent use; its result is unobservable",
                         declaredSpan(f)});
        }
      }
    }
  }

  std::stable_sort(out.begin(), out.end(), [](const Diagnostic& a, const Diagnostic& b) {
    return std::tie(a.span.file, a.span.startLine, a.span.startCol, a.code) <
           std::tie(b.span.file, b.span.startLine, b.span.startCol, b.code);
  });
  return out;
}

/// Convenience form that resolves first; resolution failures surface as the
/// resolver's exceptions, not as diagnostics.
inline std::vector<Diagnostic> validate(const Model& model) {
  SymbolTable table = resolve(model);
  return validate(model, table);
}

inline bool has_errors(const std::vector<Diagnostic>& diagnostics) {
  for (const auto& d : diagnostics)
    if (d.severity == Severity::Error) return true;
  return false;
}

}  // namespace quml
