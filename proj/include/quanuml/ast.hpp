#pragma once

#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "quanuml/source.hpp"

namespace quml {

// ---------------------------------------------------------------------------
// Stereotypes and gates are closed enumerations; unknown tags are rejected at
// parse time rather than creating new values.
// ---------------------------------------------------------------------------

enum class Stereotype { Quantum, Qubit, ClassicalBit, Control, Controlled };

inline const char* to_string(Stereotype s) {
  switch (s) {
    case Stereotype::Quantum: return "Quantum";
    case Stereotype::Qubit: return "qubit";
    case Stereotype::ClassicalBit: return "classicalbit";
    case Stereotype::Control: return "control";
    case Stereotype::Controlled: return "controlled";
  }
  return "?";
}

inline std::optional<Stereotype> stereotype_from_string(const std::string& tag) {
  if (tag == "Quantum") return Stereotype::Quantum;
  if (tag == "qubit") return Stereotype::Qubit;
  if (tag == "classicalbit") return Stereotype::ClassicalBit;
  if (tag == "control") return Stereotype::Control;
  if (tag == "controlled") return Stereotype::Controlled;
  return std::nullopt;
}

enum class GateKind { H, X, Y, Z, S, Sdg, T, Tdg, RX, RY, RZ, P };

inline const char* to_string(GateKind g) {
  switch (g) {
    case GateKind::H: return "H";
    case GateKind::X: return "X";
    case GateKind::Y: return "Y";
    case GateKind::Z: return "Z";
    case GateKind::S: return "S";
    case GateKind::Sdg: return "Sdg";
    case GateKind::T: return "T";
    case GateKind::Tdg: return "Tdg";
    case GateKind::RX: return "RX";
    case GateKind::RY: return "RY";
    case GateKind::RZ: return "RZ";
    case GateKind::P: return "P";
  }
  return "?";
}

inline std::optional<GateKind> gate_from_string(const std::string& name) {
  static const std::pair<const char*, GateKind> table[] = {
      {"H", GateKind::H},     {"X", GateKind::X},     {"Y", GateKind::Y},
      {"Z", GateKind::Z},     {"S", GateKind::S},     {"Sdg", GateKind::Sdg},
      {"T", GateKind::T},     {"Tdg", GateKind::Tdg}, {"RX", GateKind::RX},
      {"RY", GateKind::RY},   {"RZ", GateKind::RZ},   {"P", GateKind::P},
  };
  for (const auto& [text, kind] : table)
    if (name == text) return kind;
  return std::nullopt;
}

inline bool gate_takes_angle(GateKind g) {
  return g == GateKind::RX || g == GateKind::RY || g == GateKind::RZ || g == GateKind::P;
}

/// Gates admitting the controlled (group-message) form.
inline bool gate_controllable(GateKind g) {
  return g == GateKind::X || g == GateKind::Z || g == GateKind::P;
}

// ---------------------------------------------------------------------------
// Angles: either an exact rational multiple of pi or literal radians.
// ---------------------------------------------------------------------------

struct Angle {
  bool isRational = true;
  long long num = 0;   // rational: num*pi/den
  long long den = 1;   // always > 0 after canonicalization
  double radians = 0;  // literal form

  static Angle rational(long long n, long long d) {
    Angle a;
    a.isRational = true;
    a.num = n;
    a.den = d;
    return a.canonical();
  }

  static Angle from_radians(double r) {
    Angle a;
    a.isRational = false;
    a.radians = r;
    return a;
  }

  Angle canonical() const {
    Angle a = *this;
    if (!a.isRational) return a;
    if (a.den < 0) {
      a.den = -a.den;
      a.num = -a.num;
    }
    long long g = std::gcd(a.num < 0 ? -a.num : a.num, a.den);
    if (g > 1) {
      a.num /= g;
      a.den /= g;
    }
    if (a.num == 0) a.den = 1;
    return a;
  }

  double value() const {
    if (isRational) return 3.14159265358979323846 * static_cast<double>(num) / static_cast<double>(den);
    return radians;
  }

  friend bool operator==(const Angle& a, const Angle& b) {
    if (a.isRational != b.isRational) return false;
    if (a.isRational) return a.num == b.num && a.den == b.den;
    return a.radians == b.radians;
  }
};

// ---------------------------------------------------------------------------
// Classical conditions over measured bits: (cbit == 0|1), xor, and, parens.
// ---------------------------------------------------------------------------

struct CondExpr {
  enum class Kind { Leaf, Xor, And };
  Kind kind = Kind::Leaf;
  std::string cbit;  // Leaf only
  int value = 0;     // Leaf only: 0 or 1
  std::vector<CondExpr> kids;  // Xor/And: exactly two
  SourceSpan span;

  static CondExpr leaf(std::string cbit, int value) {
    CondExpr c;
    c.kind = Kind::Leaf;
    c.cbit = std::move(cbit);
    c.value = value;
    return c;
  }
  static CondExpr binary(Kind k, CondExpr lhs, CondExpr rhs) {
    CondExpr c;
    c.kind = k;
    c.kids.push_back(std::move(lhs));
    c.kids.push_back(std::move(rhs));
    return c;
  }
};

inline bool operator==(const CondExpr& a, const CondExpr& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == CondExpr::Kind::Leaf) return a.cbit == b.cbit && a.value == b.value;
  return a.kids == b.kids;
}

// ---------------------------------------------------------------------------
// Events: the closed sum of things that can happen on a sequence diagram.
// ---------------------------------------------------------------------------

struct SingleGate {
  GateKind gate = GateKind::H;
  std::optional<Angle> angle;
  std::string qubit;

  friend bool operator==(const SingleGate&, const SingleGate&) = default;
};

struct MultiGate {
  GateKind gate = GateKind::X;
  std::optional<Angle> angle;
  std::vector<std::string> controls;
  std::vector<std::string> targets;
  bool kickback = false;

  friend bool operator==(const MultiGate&, const MultiGate&) = default;
};

struct SwapGate {
  std::string a, b;

  friend bool operator==(const SwapGate&, const SwapGate&) = default;
};

struct MeasureEvent {
  std::string qubit, cbit;

  friend bool operator==(const MeasureEvent&, const MeasureEvent&) = default;
};

struct Event;

struct AltEvent {
  CondExpr condition;
  std::vector<Event> thenEvents;
  std::vector<Event> elseEvents;
};
bool operator==(const AltEvent& a, const AltEvent& b);

struct UseEvent {
  std::string subName;
  std::vector<std::string> actuals;

  friend bool operator==(const UseEvent&, const UseEvent&) = default;
};

struct Event {
  std::variant<SingleGate, MultiGate, SwapGate, MeasureEvent, AltEvent, UseEvent> body;
  SourceSpan span;
};

inline bool operator==(const Event& a, const Event& b) { return a.body == b.body; }
inline bool operator==(const AltEvent& a, const AltEvent& b) {
  return a.condition == b.condition && a.thenEvents == b.thenEvents && a.elseEvents == b.elseEvents;
}

// ---------------------------------------------------------------------------
// Lifeline declarations and diagrams.
// ---------------------------------------------------------------------------

struct QubitDecl {
  std::string name;
  std::optional<int> init;  // 1 for |1>, 0 for an explicit |0>, nullopt = default |0>
  SourceSpan span;
};
inline bool operator==(const QubitDecl& a, const QubitDecl& b) {
  return a.name == b.name && a.init == b.init;
}

struct CbitDecl {
  std::string name;
  SourceSpan span;
};
inline bool operator==(const CbitDecl& a, const CbitDecl& b) { return a.name == b.name; }

/// One circuit-level diagram. A reusable sub-diagram is parameterized over
/// formalQubits; a top-level diagram owns its qubit declarations.
struct SeqDiagram {
  std::string name;
  std::set<Stereotype> stereotypes;
  std::vector<std::string> formalQubits;
  std::vector<QubitDecl> qubitDecls;
  std::vector<CbitDecl> cbitDecls;
  std::vector<Event> events;
  SourceSpan span;

  bool parameterized() const { return !formalQubits.empty(); }
};
inline bool operator==(const SeqDiagram& a, const SeqDiagram& b) {
  return a.name == b.name && a.stereotypes == b.stereotypes && a.formalQubits == b.formalQubits &&
         a.qubitDecls == b.qubitDecls && a.cbitDecls == b.cbitDecls && a.events == b.events;
}

// ---------------------------------------------------------------------------
// Class-diagram level.
// ---------------------------------------------------------------------------

struct Param {
  std::string name, type;
  friend bool operator==(const Param&, const Param&) = default;
};

struct OperationDecl {
  std::string name;
  std::vector<Param> params;
  std::optional<std::string> returnType;
  friend bool operator==(const OperationDecl&, const OperationDecl&) = default;
};

struct AttributeDecl {
  std::string name, type;
  friend bool operator==(const AttributeDecl&, const AttributeDecl&) = default;
};

struct ClassDecl {
  std::string name;
  std::set<Stereotype> stereotypes;
  std::vector<AttributeDecl> attributes;
  std::vector<OperationDecl> operations;
  std::optional<std::string> circuitRef;
  SourceSpan span;
};
inline bool operator==(const ClassDecl& a, const ClassDecl& b) {
  return a.name == b.name && a.stereotypes == b.stereotypes && a.attributes == b.attributes &&
         a.operations == b.operations && a.circuitRef == b.circuitRef;
}

enum class RelationKind { Association, Generalization, Composition };

struct Relation {
  RelationKind kind = RelationKind::Association;
  std::string from, to;
  SourceSpan span;
};
inline bool operator==(const Relation& a, const Relation& b) {
  return a.kind == b.kind && a.from == b.from && a.to == b.to;
}

/// Root document: class-diagram declarations plus named sequence diagrams.
struct Model {
  std::string name;
  std::vector<ClassDecl> classes;
  std::vector<Relation> relations;
  std::vector<SeqDiagram> sequences;
  SourceSpan span;

  const SeqDiagram* find_sequence(const std::string& diagramName) const {
    for (const auto& s : sequences)
      if (s.name == diagramName) return &s;
    return nullptr;
  }
};
inline bool operator==(const Model& a, const Model& b) {
  return a.name == b.name && a.classes == b.classes && a.relations == b.relations &&
         a.sequences == b.sequences;
}

// ---------------------------------------------------------------------------
// Canonicalization: angle reduction, |0> init elision, fixed stereotype order
// (the std::set representation already orders stereotype sets). Idempotent.
// ---------------------------------------------------------------------------

namespace detail {

inline void canonicalize_events(std::vector<Event>& events);

inline void canonicalize_event(Event& e) {
  if (auto* g = std::get_if<SingleGate>(&e.body)) {
    if (g->angle) g->angle = g->angle->canonical();
  } else if (auto* m = std::get_if<MultiGate>(&e.body)) {
    if (m->angle) m->angle = m->angle->canonical();
  } else if (auto* a = std::get_if<AltEvent>(&e.body)) {
    canonicalize_events(a->thenEvents);
    canonicalize_events(a->elseEvents);
  }
}

inline void canonicalize_events(std::vector<Event>& events) {
  for (auto& e : events) canonicalize_event(e);
}

}  // namespace detail

inline Model canonicalize(const Model& model) {
  Model m = model;
  for (auto& seq : m.sequences) {
    for (auto& q : seq.qubitDecls)
      if (q.init && *q.init == 0) q.init.reset();
    detail::canonicalize_events(seq.events);
  }
  return m;
}

}  // namespace quml
