#pragma once

#include <string>

#include "quanuml/ast.hpp"
#include "quanuml/printer.hpp"
#include "quanuml/source.hpp"

namespace quml {

namespace detail {

struct DiagramEmitter {
  std::string out;
  int indent = 0;

  void line(const std::string& s) {
    for (int i = 0; i < indent; ++i) out += "  ";
    out += s;
    out += "\n";
  }

  static std::string gate_label(GateKind g, const std::optional<Angle>& angle) {
    std::string s = to_string(g);
    if (angle) s += "(" + format_angle(*angle) + ")";
    return s;
  }

  void emit_event(const Event& e) {
    if (const auto* g = std::get_if<SingleGate>(&e.body)) {
      line(g->qubit + " -> " + g->qubit + " : " + gate_label(g->gate, g->angle));
    } else if (const auto* m = std::get_if<MultiGate>(&e.body)) {
      for (const auto& t : m->targets) {
        for (const auto& c : m->controls) {
          line(c + " -> " + t + " : <<control>> " + gate_label(m->gate, m->angle));
        }
      }
      if (m->kickback) {
        line(m->targets.front() + " --> " + m->controls.front() + " : <<controlled>>");
      }
    } else if (const auto* sw = std::get_if<SwapGate>(&e.body)) {
      line(sw->a + " <-> " + sw->b + " : swap");
    } else if (const auto* me = std::get_if<MeasureEvent>(&e.body)) {
      line(me->qubit + " ->> " + me->cbit + " : measure");
      line("deactivate " + me->qubit);
    } else if (const auto* alt = std::get_if<AltEvent>(&e.body)) {
      line("alt " + format_condition(alt->condition));
      ++indent;
      for (const auto& ev : alt->thenEvents) emit_event(ev);
      --indent;
      if (!alt->elseEvents.empty()) {
        line("else");
        ++indent;
        for (const auto& ev : alt->elseEvents) emit_event(ev);
        --indent;
      }
      line("end");
    } else if (const auto* u = std::get_if<UseEvent>(&e.body)) {
      std::string over;
      for (size_t i = 0; i < u->actuals.size(); ++i) {
        if (i > 0) over += ", ";
        over += u->actuals[i];
      }
      line("ref over " + over + " : " + u->subName);
    }
  }
};

}  // namespace detail

/// Renders one sequence diagram as PlantUML text: participants per lifeline,
/// self-arrows for single-qubit gates, control arrows with optional kickback
/// replies, alt/else/end fragments, and measure arrows that deactivate the
/// measured qubit's lifeline.
inline std::string emit_diagram_text(const Model& model, const std::string& diagramName) {
  const SeqDiagram* d = model.find_sequence(diagramName);
  if (!d) {
    throw Error("UnknownDiagram", model.span, "no sequence diagram named '" + diagramName + "'");
  }
  detail::DiagramEmitter e;
  e.line("@startuml");
  for (const auto& f : d->formalQubits) e.line("participant " + f);
  for (const auto& q : d->qubitDecls) e.line("participant " + q.name + " <<qubit>>");
  for (const auto& c : d->cbitDecls) e.line("participant " + c.name + " <<classicalbit>>");
  for (const auto& f : d->formalQubits) e.line("activate " + f);
  for (const auto& q : d->qubitDecls) e.line("activate " + q.name);
  for (const auto& ev : d->events) e.emit_event(ev);
  e.line("@enduml");
  return e.out;
}

}  // namespace quml
