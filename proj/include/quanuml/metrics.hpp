#pragma once

#include <string>

#include "quanuml/ast.hpp"
#include "quanuml/source.hpp"

namespace quml {

/// Diagram size under one counting rule set.
struct ElementCount {
  int lifelines = 0;
  int messages = 0;
  int fragments = 0;
  int stereotypeLabels = 0;
  int total = 0;

  friend bool operator==(const ElementCount&, const ElementCount&) = default;
};

namespace detail {

inline const SeqDiagram& metrics_diagram(const Model& model, const std::string& diagramName) {
  const SeqDiagram* d = model.find_sequence(diagramName);
  if (!d) {
    throw Error("UnknownDiagram", model.span, "no sequence diagram named '" + diagramName + "'");
  }
  return *d;
}

inline void count_quanuml_events(const std::vector<Event>& events, ElementCount& c) {
  for (const Event& e : events) {
    if (std::holds_alternative<SingleGate>(e.body)) {
      c.messages += 1;  // one self-message
    } else if (const auto* m = std::get_if<MultiGate>(&e.body)) {
      c.messages += static_cast<int>(m->controls.size()) + (m->kickback ? 1 : 0);
    } else if (std::holds_alternative<SwapGate>(e.body)) {
      c.messages += 1;
    } else if (std::holds_alternative<MeasureEvent>(e.body)) {
      c.messages += 1;
    } else if (const auto* alt = std::get_if<AltEvent>(&e.body)) {
      c.fragments += 1 + (alt->elseEvents.empty() ? 0 : 1);
      count_quanuml_events(alt->thenEvents, c);
      count_quanuml_events(alt->elseEvents, c);
    } else if (std::holds_alternative<UseEvent>(e.body)) {
      c.messages += 1;
    }
  }
}

inline void count_baseline_events(const std::vector<Event>& events, ElementCount& c) {
  for (const Event& e : events) {
    if (std::holds_alternative<SingleGate>(e.body)) {
      c.messages += 1 + 1;  // node + one edge
      c.stereotypeLabels += 1;
    } else if (const auto* m = std::get_if<MultiGate>(&e.body)) {
      c.messages += 1 + static_cast<int>(m->controls.size() + m->targets.size());
      c.stereotypeLabels += 1;
    } else if (std::holds_alternative<SwapGate>(e.body)) {
      c.messages += 1 + 2;
      c.stereotypeLabels += 1;
    } else if (std::holds_alternative<MeasureEvent>(e.body)) {
      c.messages += 1 + 2;  // no label: measure nodes are untyped
    } else if (const auto* alt = std::get_if<AltEvent>(&e.body)) {
      c.fragments += 1 + (alt->elseEvents.empty() ? 0 : 1);
      count_baseline_events(alt->thenEvents, c);
      count_baseline_events(alt->elseEvents, c);
    } else if (const auto* u = std::get_if<UseEvent>(&e.body)) {
      c.messages += 1 + static_cast<int>(u->actuals.size());
      c.stereotypeLabels += 1;
    }
  }
}

}  // namespace detail

/// QuanUML rules: a lifeline per declared qubit/cbit/formal; one message per
/// self-gate, |controls| arrows (plus an optional kickback reply) per
/// multi-qubit gate; one stereotype label per declared lifeline (formals are
/// unlabeled parameters).
inline ElementCount count_quanuml(const Model& model, const std::string& diagramName) {
  const SeqDiagram& d = detail::metrics_diagram(model, diagramName);
  ElementCount c;
  c.lifelines = static_cast<int>(d.formalQubits.size() + d.qubitDecls.size() + d.cbitDecls.size());
  c.stereotypeLabels = static_cast<int>(d.qubitDecls.size() + d.cbitDecls.size());
  detail::count_quanuml_events(d.events, c);
  c.total = c.lifelines + c.messages + c.fragments + c.stereotypeLabels;
  return c;
}

/// Reconstruction of the profile-based baseline: one lane per qubit (no
/// classical lanes), each gate of arity k costs one node plus k edges, each
/// measurement one node plus two edges, and every typed element (lane or
/// gate node) carries a stereotype label.
inline ElementCount count_baseline(const Model& model, const std::string& diagramName) {
  const SeqDiagram& d = detail::metrics_diagram(model, diagramName);
  ElementCount c;
  c.lifelines = static_cast<int>(d.formalQubits.size() + d.qubitDecls.size());
  c.stereotypeLabels = c.lifelines;
  detail::count_baseline_events(d.events, c);
  c.total = c.lifelines + c.messages + c.fragments + c.stereotypeLabels;
  return c;
}

struct MetricsComparison {
  ElementCount quanuml;
  ElementCount baseline;
  double ratio = 0.0;
};

inline MetricsComparison compare(const Model& model, const std::string& diagramName) {
  MetricsComparison r;
  r.quanuml = count_quanuml(model, diagramName);
  r.baseline = count_baseline(model, diagramName);
  r.ratio = r.baseline.total == 0
                ? 0.0
                : static_cast<double>(r.quanuml.total) / static_cast<double>(r.baseline.total);
  return r;
}

}  // namespace quml
