#pragma once

#include <cctype>
#include <cstdlib>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "quanuml/ast.hpp"
#include "quanuml/source.hpp"

namespace quml {

namespace lex {

enum class TokKind {
  Ident,
  Int,
  Float,
  // keywords
  KwModel, KwClasses, KwClass, KwAttr, KwOp, KwCircuit, KwSeq, KwQubit, KwCbit,
  KwGate, KwSwap, KwMeasure, KwAlt, KwElse, KwUse, KwOn, KwControl, KwTarget,
  KwKickback,
  // punctuation
  LBrace, RBrace, LParen, RParen, Comma, Colon, Assign, EqEq, AndAnd, Caret,
  Slash, Minus, StereoOpen, StereoClose, Arrow, AssocArrow, GenArrow, CompArrow,
  Ket0, Ket1,
  End,
};

struct Token {
  TokKind kind = TokKind::End;
  std::string text;
  int line = 1;
  int col = 1;

  SourceSpan span(const std::string& file) const {
    SourceSpan s;
    s.file = file;
    s.startLine = s.endLine = line;
    s.startCol = col;
    s.endCol = col + static_cast<int>(text.empty() ? 1 : text.size());
    return s;
  }
};

inline std::optional<TokKind> keyword(const std::string& word) {
  static const std::pair<const char*, TokKind> table[] = {
      {"model", TokKind::KwModel},     {"classes", TokKind::KwClasses},
      {"class", TokKind::KwClass},     {"attr", TokKind::KwAttr},
      {"op", TokKind::KwOp},           {"circuit", TokKind::KwCircuit},
      {"seq", TokKind::KwSeq},         {"qubit", TokKind::KwQubit},
      {"cbit", TokKind::KwCbit},       {"gate", TokKind::KwGate},
      {"swap", TokKind::KwSwap},       {"measure", TokKind::KwMeasure},
      {"alt", TokKind::KwAlt},         {"else", TokKind::KwElse},
      {"use", TokKind::KwUse},         {"on", TokKind::KwOn},
      {"control", TokKind::KwControl}, {"target", TokKind::KwTarget},
      {"kickback", TokKind::KwKickback},
  };
  for (const auto& [text, kind] : table)
    if (word == text) return kind;
  return std::nullopt;
}

class Lexer {
public:
  Lexer(std::string_view text, std::string file) : text_(text), file_(std::move(file)) {
    if (text_.size() >= 3 && static_cast<unsigned char>(text_[0]) == 0xEF &&
        static_cast<unsigned char>(text_[1]) == 0xBB && static_cast<unsigned char>(text_[2]) == 0xBF) {
      throw ParseError(here(1), {"UTF-8 text without byte-order mark"}, "BOM");
    }
  }

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      Token t = next();
      bool end = t.kind == TokKind::End;
      out.push_back(std::move(t));
      if (end) return out;
    }
  }

private:
  SourceSpan here(int width) const {
    SourceSpan s;
    s.file = file_;
    s.startLine = s.endLine = line_;
    s.startCol = col_;
    s.endCol = col_ + width;
    return s;
  }

  char peek(size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void advance(size_t n = 1) {
    for (size_t i = 0; i < n && pos_ < text_.size(); ++i) {
      if (text_[pos_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
      ++pos_;
    }
  }

  void skip_trivia() {
    for (;;) {
      char c = peek();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (c == '/' && peek(1) == '/') {
        while (peek() != '\n' && peek() != '\0') advance();
      } else {
        return;
      }
    }
  }

  bool match(const char* lit) const {
    size_t n = std::char_traits<char>::length(lit);
    return text_.compare(pos_, n, lit) == 0;
  }

  Token make(TokKind kind, size_t width) {
    Token t;
    t.kind = kind;
    t.text = std::string(text_.substr(pos_, width));
    t.line = line_;
    t.col = col_;
    advance(width);
    return t;
  }

  Token next() {
    skip_trivia();
    if (pos_ >= text_.size()) {
      Token t;
      t.kind = TokKind::End;
      t.line = line_;
      t.col = col_;
      return t;
    }
    char c = peek();

    // multi-character punctuation, longest first
    if (match("--|>")) return make(TokKind::GenArrow, 4);
    if (match("*-->")) return make(TokKind::CompArrow, 4);
    if (match("-->")) return make(TokKind::AssocArrow, 3);
    if (match("|0>")) return make(TokKind::Ket0, 3);
    if (match("|1>")) return make(TokKind::Ket1, 3);
    if (match("->")) return make(TokKind::Arrow, 2);
    if (match("<<")) return make(TokKind::StereoOpen, 2);
    if (match(">>")) return make(TokKind::StereoClose, 2);
    if (match("==")) return make(TokKind::EqEq, 2);
    if (match("&&")) return make(TokKind::AndAnd, 2);

    switch (c) {
      case '{': return make(TokKind::LBrace, 1);
      case '}': return make(TokKind::RBrace, 1);
      case '(': return make(TokKind::LParen, 1);
      case ')': return make(TokKind::RParen, 1);
      case ',': return make(TokKind::Comma, 1);
      case ':': return make(TokKind::Colon, 1);
      case '=': return make(TokKind::Assign, 1);
      case '^': return make(TokKind::Caret, 1);
      case '/': return make(TokKind::Slash, 1);
      case '-': return make(TokKind::Minus, 1);
      default: break;
    }

    if (std::isdigit(static_cast<unsigned char>(c))) return lex_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return lex_word();

    std::string found(1, c);
    throw ParseError(here(1), {"a token"}, found);
  }

  Token lex_number() {
    size_t n = 0;
    while (std::isdigit(static_cast<unsigned char>(peek(n)))) ++n;
    bool isFloat = false;
    if (peek(n) == '.' && std::isdigit(static_cast<unsigned char>(peek(n + 1)))) {
      isFloat = true;
      ++n;
      while (std::isdigit(static_cast<unsigned char>(peek(n)))) ++n;
    }
    if (peek(n) == 'e' || peek(n) == 'E') {
      size_t m = n + 1;
      if (peek(m) == '+' || peek(m) == '-') ++m;
      if (std::isdigit(static_cast<unsigned char>(peek(m)))) {
        isFloat = true;
        n = m;
        while (std::isdigit(static_cast<unsigned char>(peek(n)))) ++n;
      }
    }
    return make(isFloat ? TokKind::Float : TokKind::Int, n);
  }

  Token lex_word() {
    size_t n = 0;
    while (std::isalnum(static_cast<unsigned char>(peek(n))) || peek(n) == '_') ++n;
    Token t = make(TokKind::Ident, n);
    if (auto kw = keyword(t.text)) t.kind = *kw;
    return t;
  }

  std::string_view text_;
  std::string file_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace lex

// ---------------------------------------------------------------------------
// Recursive-descent parser over the token stream. Reports the first syntax
// violation and stops; there is no error recovery.
// ---------------------------------------------------------------------------

class Parser {
public:
  Parser(std::string_view text, std::string file)
      : file_(std::move(file)), tokens_(lex::Lexer(text, file_).run()) {}

  Model parse_model() {
    Model m;
    lex::Token start = peek();
    expect(lex::TokKind::KwModel, "'model'");
    m.name = expect(lex::TokKind::Ident, "model name").text;
    expect(lex::TokKind::LBrace, "'{'");
    while (!at(lex::TokKind::RBrace)) {
      if (at(lex::TokKind::KwClasses)) {
        parse_classblock(m);
      } else if (at(lex::TokKind::KwSeq)) {
        m.sequences.push_back(parse_seqdiag());
      } else {
        fail({"'classes'", "'seq'", "'}'"});
      }
    }
    expect(lex::TokKind::RBrace, "'}'");
    expect(lex::TokKind::End, "end of input");
    m.span = span_from(start);
    return m;
  }

private:
  using TK = lex::TokKind;

  const lex::Token& peek(size_t ahead = 0) const {
    size_t i = pos_ + ahead;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }

  bool at(TK kind) const { return peek().kind == kind; }

  lex::Token advance() { return tokens_[pos_ < tokens_.size() - 1 ? pos_++ : pos_]; }

  [[noreturn]] void fail(std::vector<std::string> expected) const {
    const lex::Token& t = peek();
    throw ParseError(t.span(file_), std::move(expected),
                     t.kind == TK::End ? std::string() : t.text);
  }

  lex::Token expect(TK kind, const char* what) {
    if (!at(kind)) fail({what});
    return advance();
  }

  bool accept(TK kind) {
    if (!at(kind)) return false;
    advance();
    return true;
  }

  SourceSpan span_from(const lex::Token& start) const {
    const lex::Token& last = tokens_[pos_ > 0 ? pos_ - 1 : 0];
    SourceSpan s;
    s.file = file_;
    s.startLine = start.line;
    s.startCol = start.col;
    s.endLine = last.line;
    s.endCol = last.col + static_cast<int>(last.text.size());
    return s;
  }

  // -- class-diagram level --------------------------------------------------

  void parse_classblock(Model& m) {
    expect(TK::KwClasses, "'classes'");
    expect(TK::LBrace, "'{'");
    while (!at(TK::RBrace)) {
      if (at(TK::KwClass)) {
        m.classes.push_back(parse_classdecl());
      } else if (at(TK::Ident)) {
        m.relations.push_back(parse_reldecl());
      } else {
        fail({"'class'", "relation", "'}'"});
      }
    }
    expect(TK::RBrace, "'}'");
  }

  ClassDecl parse_classdecl() {
    ClassDecl c;
    lex::Token start = peek();
    expect(TK::KwClass, "'class'");
    c.name = expect(TK::Ident, "class name").text;
    if (at(TK::StereoOpen)) c.stereotypes.insert(parse_stereo());
    expect(TK::LBrace, "'{'");
    while (!at(TK::RBrace)) {
      if (accept(TK::KwAttr)) {
        AttributeDecl a;
        a.name = expect(TK::Ident, "attribute name").text;
        expect(TK::Colon, "':'");
        a.type = expect(TK::Ident, "type name").text;
        c.attributes.push_back(std::move(a));
      } else if (accept(TK::KwOp)) {
        OperationDecl o;
        o.name = expect(TK::Ident, "operation name").text;
        expect(TK::LParen, "'('");
        if (!at(TK::RParen)) {
          do {
            Param p;
            p.name = expect(TK::Ident, "parameter name").text;
            expect(TK::Colon, "':'");
            p.type = expect(TK::Ident, "type name").text;
            o.params.push_back(std::move(p));
          } while (accept(TK::Comma));
        }
        expect(TK::RParen, "')'");
        if (accept(TK::Colon)) o.returnType = expect(TK::Ident, "return type name").text;
        c.operations.push_back(std::move(o));
      } else if (accept(TK::KwCircuit)) {
        c.circuitRef = expect(TK::Ident, "sequence-diagram name").text;
      } else {
        fail({"'attr'", "'op'", "'circuit'", "'}'"});
      }
    }
    expect(TK::RBrace, "'}'");
    c.span = span_from(start);
    return c;
  }

  Relation parse_reldecl() {
    Relation r;
    lex::Token start = peek();
    r.from = expect(TK::Ident, "class name").text;
    if (accept(TK::AssocArrow)) {
      r.kind = RelationKind::Association;
    } else if (accept(TK::GenArrow)) {
      r.kind = RelationKind::Generalization;
    } else if (accept(TK::CompArrow)) {
      r.kind = RelationKind::Composition;
    } else {
      fail({"'-->'", "'--|>'", "'*-->'"});
    }
    r.to = expect(TK::Ident, "class name").text;
    r.span = span_from(start);
    return r;
  }

  Stereotype parse_stereo() {
    expect(TK::StereoOpen, "'<<'");
    lex::Token tag = expect(TK::Ident, "stereotype tag");
    expect(TK::StereoClose, "'>>'");
    auto s = stereotype_from_string(tag.text);
    if (!s) {
      throw ParseError(tag.span(file_),
                       {"stereotype tag (Quantum, qubit, classicalbit, control, controlled)"},
                       tag.text);
    }
    return *s;
  }

  // -- sequence-diagram level -----------------------------------------------

  SeqDiagram parse_seqdiag() {
    SeqDiagram d;
    lex::Token start = peek();
    expect(TK::KwSeq, "'seq'");
    d.name = expect(TK::Ident, "diagram name").text;
    if (accept(TK::LParen)) {
      do {
        d.formalQubits.push_back(expect(TK::Ident, "formal qubit name").text);
      } while (accept(TK::Comma));
      expect(TK::RParen, "')'");
    }
    if (at(TK::StereoOpen)) d.stereotypes.insert(parse_stereo());
    expect(TK::LBrace, "'{'");
    while (at(TK::KwQubit) || at(TK::KwCbit)) parse_decl(d);
    while (!at(TK::RBrace)) d.events.push_back(parse_event());
    expect(TK::RBrace, "'}'");
    d.span = span_from(start);
    return d;
  }

  void parse_decl(SeqDiagram& d) {
    if (accept(TK::KwQubit)) {
      if (d.parameterized()) {
        throw ParseError(tokens_[pos_ - 1].span(file_),
                         {"'cbit' or an event (a parameterized diagram binds its qubits through "
                          "formal parameters)"},
                         "qubit");
      }
      do {
        QubitDecl q;
        lex::Token name = expect(TK::Ident, "qubit name");
        q.name = name.text;
        if (accept(TK::Assign)) {
          if (accept(TK::Ket1)) {
            q.init = 1;
          } else if (accept(TK::Ket0)) {
            q.init = 0;
          } else {
            fail({"'|0>'", "'|1>'"});
          }
        }
        q.span = name.span(file_);
        d.qubitDecls.push_back(std::move(q));
      } while (accept(TK::Comma));
    } else {
      expect(TK::KwCbit, "'cbit'");
      do {
        CbitDecl c;
        lex::Token name = expect(TK::Ident, "cbit name");
        c.name = name.text;
        c.span = name.span(file_);
        d.cbitDecls.push_back(std::move(c));
      } while (accept(TK::Comma));
    }
  }

  Event parse_event() {
    lex::Token start = peek();
    Event e;
    if (at(TK::KwGate)) {
      e.body = parse_gate_event();
    } else if (accept(TK::KwSwap)) {
      SwapGate s;
      s.a = expect(TK::Ident, "qubit name").text;
      expect(TK::Comma, "','");
      s.b = expect(TK::Ident, "qubit name").text;
      e.body = std::move(s);
    } else if (accept(TK::KwMeasure)) {
      MeasureEvent m;
      m.qubit = expect(TK::Ident, "qubit name").text;
      expect(TK::Arrow, "'->'");
      m.cbit = expect(TK::Ident, "cbit name").text;
      e.body = std::move(m);
    } else if (accept(TK::KwAlt)) {
      AltEvent a;
      a.condition = parse_cond();
      expect(TK::LBrace, "'{'");
      while (!at(TK::RBrace)) a.thenEvents.push_back(parse_event());
      expect(TK::RBrace, "'}'");
      if (accept(TK::KwElse)) {
        expect(TK::LBrace, "'{'");
        while (!at(TK::RBrace)) a.elseEvents.push_back(parse_event());
        expect(TK::RBrace, "'}'");
      }
      e.body = std::move(a);
    } else if (accept(TK::KwUse)) {
      UseEvent u;
      u.subName = expect(TK::Ident, "sub-diagram name").text;
      expect(TK::KwOn, "'on'");
      expect(TK::LParen, "'('");
      do {
        u.actuals.push_back(expect(TK::Ident, "qubit name").text);
      } while (accept(TK::Comma));
      expect(TK::RParen, "')'");
      e.body = std::move(u);
    } else {
      fail({"'gate'", "'swap'", "'measure'", "'alt'", "'use'", "'}'"});
    }
    e.span = span_from(start);
    return e;
  }

  std::variant<SingleGate, MultiGate, SwapGate, MeasureEvent, AltEvent, UseEvent>
  parse_gate_event() {
    expect(TK::KwGate, "'gate'");
    lex::Token nameTok = expect(TK::Ident, "gate name");
    auto kind = gate_from_string(nameTok.text);
    if (!kind) {
      throw ParseError(nameTok.span(file_),
                       {"gate name (H, X, Y, Z, S, Sdg, T, Tdg, RX, RY, RZ, P)"}, nameTok.text);
    }
    std::optional<Angle> angle;
    if (gate_takes_angle(*kind)) {
      angle = parse_angle();
    }
    if (accept(TK::KwOn)) {
      SingleGate g;
      g.gate = *kind;
      g.angle = angle;
      g.qubit = expect(TK::Ident, "qubit name").text;
      return g;
    }
    if (!at(TK::KwControl)) fail({gate_takes_angle(*kind) ? "'on'" : "'on'", "'control'"});
    if (!gate_controllable(*kind)) {
      throw ParseError(peek().span(file_), {"'on' (only X, Z and P gates take controls)"},
                       peek().text);
    }
    advance();  // control
    MultiGate g;
    g.gate = *kind;
    g.angle = angle;
    do {
      g.controls.push_back(expect(TK::Ident, "qubit name").text);
    } while (accept(TK::Comma));
    expect(TK::KwTarget, "'target'");
    do {
      g.targets.push_back(expect(TK::Ident, "qubit name").text);
    } while (accept(TK::Comma));
    g.kickback = accept(TK::KwKickback);
    return g;
  }

  Angle parse_angle() {
    expect(TK::LParen, "'('");
    bool negative = accept(TK::Minus);
    Angle a;
    if (at(TK::Float)) {
      double v = std::strtod(advance().text.c_str(), nullptr);
      a = Angle::from_radians(negative ? -v : v);
    } else if (at(TK::Int) || (at(TK::Ident) && peek().text == "pi")) {
      long long num = 1;
      if (at(TK::Int)) {
        num = parse_int(advance());
        if (!(at(TK::Ident) && peek().text == "pi")) fail({"'pi'"});
      }
      advance();  // pi
      long long den = 1;
      if (accept(TK::Slash)) den = parse_int(expect(TK::Int, "integer denominator"));
      if (den == 0) {
        throw ParseError(tokens_[pos_ - 1].span(file_), {"nonzero denominator"}, "0");
      }
      a = Angle::rational(negative ? -num : num, den);
    } else {
      fail({"angle (e.g. 'pi/4', '2pi', '0.5')"});
    }
    expect(TK::RParen, "')'");
    return a;
  }

  long long parse_int(const lex::Token& t) {
    errno = 0;
    char* end = nullptr;
    long long v = std::strtoll(t.text.c_str(), &end, 10);
    if (errno == ERANGE) throw ParseError(t.span(file_), {"integer within 64-bit range"}, t.text);
    return v;
  }

  CondExpr parse_cond() {
    lex::Token start = peek();
    CondExpr lhs = parse_and();
    while (accept(TK::Caret)) {
      CondExpr rhs = parse_and();
      lhs = CondExpr::binary(CondExpr::Kind::Xor, std::move(lhs), std::move(rhs));
      lhs.span = span_from(start);
    }
    return lhs;
  }

  CondExpr parse_and() {
    lex::Token start = peek();
    CondExpr lhs = parse_atom();
    while (accept(TK::AndAnd)) {
      CondExpr rhs = parse_atom();
      lhs = CondExpr::binary(CondExpr::Kind::And, std::move(lhs), std::move(rhs));
      lhs.span = span_from(start);
    }
    return lhs;
  }

  CondExpr parse_atom() {
    if (accept(TK::LParen)) {
      CondExpr inner = parse_cond();
      expect(TK::RParen, "')'");
      return inner;
    }
    lex::Token name = expect(TK::Ident, "cbit name");
    expect(TK::EqEq, "'=='");
    lex::Token val = expect(TK::Int, "'0' or '1'");
    if (val.text != "0" && val.text != "1") {
      throw ParseError(val.span(file_), {"'0'", "'1'"}, val.text);
    }
    CondExpr c = CondExpr::leaf(name.text, val.text == "1" ? 1 : 0);
    c.span = name.span(file_);
    return c;
  }

  std::string file_;
  std::vector<lex::Token> tokens_;
  size_t pos_ = 0;
};

/// Parses `.quml` text into a Model. Throws ParseError on the first syntax
/// violation; resolution and semantic validation are separate passes.
inline Model parse(std::string_view text, const std::string& file) {
  return Parser(text, file).parse_model();
}

}  // namespace quml
