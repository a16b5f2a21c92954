#pragma once

#include <charconv>
#include <string>

#include "quanuml/ast.hpp"

namespace quml {

/// Shortest round-trip decimal form of a double (used by the model printer
/// and the JSON emitter; the QASM emitter has its own fixed-width form).
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

/// Canonical `.quml` angle spelling: `pi/4`, `-pi/2`, `3pi/4`, `2pi`, `0.5`.
inline std::string format_angle(const Angle& angle) {
  Angle a = angle.canonical();
  if (!a.isRational) return format_double(a.radians);
  std::string s;
  if (a.num < 0) s += "-";
  long long n = a.num < 0 ? -a.num : a.num;
  if (n != 1) s += std::to_string(n);
  s += "pi";
  if (a.den != 1) s += "/" + std::to_string(a.den);
  return s;
}

namespace detail {

inline std::string render_cond(const CondExpr& c);

inline std::string render_cond_child(const CondExpr& child, CondExpr::Kind parent, bool rightChild) {
  bool paren = false;
  if (child.kind != CondExpr::Kind::Leaf) {
    if (parent == CondExpr::Kind::And) {
      // '&&' binds tighter than '^'; any compound right child needs parens to
      // keep the tree shape through a re-parse.
      paren = child.kind == CondExpr::Kind::Xor || rightChild;
    } else {
      paren = rightChild && child.kind == CondExpr::Kind::Xor;
    }
  }
  std::string s = render_cond(child);
  return paren ? "(" + s + ")" : s;
}

inline std::string render_cond(const CondExpr& c) {
  switch (c.kind) {
    case CondExpr::Kind::Leaf:
      return c.cbit + " == " + std::to_string(c.value);
    case CondExpr::Kind::And:
      return render_cond_child(c.kids[0], c.kind, false) + " && " +
             render_cond_child(c.kids[1], c.kind, true);
    case CondExpr::Kind::Xor:
      return render_cond_child(c.kids[0], c.kind, false) + " ^ " +
             render_cond_child(c.kids[1], c.kind, true);
  }
  return "";
}

}  // namespace detail

inline std::string format_condition(const CondExpr& c) { return detail::render_cond(c); }

namespace detail {

struct ModelPrinter {
  std::string out;
  int indent = 0;

  void line(const std::string& s) {
    for (int i = 0; i < indent; ++i) out += "  ";
    out += s;
    out += "\n";
  }

  static std::string stereo_suffix(const std::set<Stereotype>& stereotypes) {
    std::string s;
    for (Stereotype st : stereotypes) s += std::string(" <<") + to_string(st) + ">>";
    return s;
  }

  static std::string ident_list(const std::vector<std::string>& names) {
    std::string s;
    for (size_t i = 0; i < names.size(); ++i) {
      if (i > 0) s += ", ";
      s += names[i];
    }
    return s;
  }

  void print_event(const Event& e) {
    if (const auto* g = std::get_if<SingleGate>(&e.body)) {
      std::string s = std::string("gate ") + to_string(g->gate);
      if (g->angle) s += "(" + format_angle(*g->angle) + ")";
      s += " on " + g->qubit;
      line(s);
    } else if (const auto* m = std::get_if<MultiGate>(&e.body)) {
      std::string s = std::string("gate ") + to_string(m->gate);
      if (m->angle) s += "(" + format_angle(*m->angle) + ")";
      s += " control " + ident_list(m->controls) + " target " + ident_list(m->targets);
      if (m->kickback) s += " kickback";
      line(s);
    } else if (const auto* sw = std::get_if<SwapGate>(&e.body)) {
      line("swap " + sw->a + ", " + sw->b);
    } else if (const auto* me = std::get_if<MeasureEvent>(&e.body)) {
      line("measure " + me->qubit + " -> " + me->cbit);
    } else if (const auto* alt = std::get_if<AltEvent>(&e.body)) {
      line("alt " + format_condition(alt->condition) + " {");
      ++indent;
      for (const auto& ev : alt->thenEvents) print_event(ev);
      --indent;
      if (alt->elseEvents.empty()) {
        line("}");
      } else {
        line("} else {");
        ++indent;
        for (const auto& ev : alt->elseEvents) print_event(ev);
        --indent;
        line("}");
      }
    } else if (const auto* u = std::get_if<UseEvent>(&e.body)) {
      line("use " + u->subName + " on (" + ident_list(u->actuals) + ")");
    }
  }

  void print_sequence(const SeqDiagram& d) {
    std::string head = "seq " + d.name;
    if (d.parameterized()) head += "(" + ident_list(d.formalQubits) + ")";
    head += stereo_suffix(d.stereotypes) + " {";
    line(head);
    ++indent;
    if (!d.qubitDecls.empty()) {
      std::string s = "qubit ";
      for (size_t i = 0; i < d.qubitDecls.size(); ++i) {
        if (i > 0) s += ", ";
        s += d.qubitDecls[i].name;
        if (d.qubitDecls[i].init && *d.qubitDecls[i].init == 1) s += " = |1>";
        else if (d.qubitDecls[i].init) s += " = |0>";
      }
      line(s);
    }
    if (!d.cbitDecls.empty()) {
      std::string s = "cbit ";
      for (size_t i = 0; i < d.cbitDecls.size(); ++i) {
        if (i > 0) s += ", ";
        s += d.cbitDecls[i].name;
      }
      line(s);
    }
    for (const auto& e : d.events) print_event(e);
    --indent;
    line("}");
  }

  void print_class(const ClassDecl& c) {
    line("class " + c.name + stereo_suffix(c.stereotypes) + " {");
    ++indent;
    for (const auto& a : c.attributes) line("attr " + a.name + " : " + a.type);
    for (const auto& o : c.operations) {
      std::string s = "op " + o.name + "(";
      for (size_t i = 0; i < o.params.size(); ++i) {
        if (i > 0) s += ", ";
        s += o.params[i].name + " : " + o.params[i].type;
      }
      s += ")";
      if (o.returnType) s += " : " + *o.returnType;
      line(s);
    }
    if (c.circuitRef) line("circuit " + *c.circuitRef);
    --indent;
    line("}");
  }

  void print_model(const Model& m) {
    line("model " + m.name + " {");
    ++indent;
    if (!m.classes.empty() || !m.relations.empty()) {
      line("classes {");
      ++indent;
      for (const auto& c : m.classes) print_class(c);
      for (const auto& r : m.relations) {
        const char* arrow = r.kind == RelationKind::Association ? "-->"
                            : r.kind == RelationKind::Generalization ? "--|>"
                                                                     : "*-->";
        line(r.from + " " + arrow + " " + r.to);
      }
      --indent;
      line("}");
    }
    for (const auto& d : m.sequences) print_sequence(d);
    --indent;
    line("}");
  }
};

}  // namespace detail

/// Deterministic canonical text. parse(pretty_print(m)) == canonicalize(m)
/// for every valid model.
inline std::string pretty_print(const Model& model) {
  detail::ModelPrinter p;
  p.print_model(canonicalize(model));
  return p.out;
}

}  // namespace quml
