#pragma once

#include <cctype>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "modalrisk/modal.hpp"

namespace modalrisk {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t position, std::string expected)
      : std::runtime_error("parse error at offset " + std::to_string(position) +
                           ": expected " + expected),
        position_(position),
        expected_(std::move(expected)) {}

  std::size_t position() const { return position_; }
  const std::string& expected() const { return expected_; }

 private:
  std::size_t position_;
  std::string expected_;
};

// Lets formula evaluation read audit degrees without depending on the
// register type. Keyed by the canonical printed text of the audited formula.
struct AuditLookup {
  virtual ~AuditLookup() = default;
  virtual double audit_degree(const std::string& proposition,
                              const std::string& world) const = 0;
};

inline bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
inline bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

// Immutable formula tree. `&` binds tighter than `|`; `!`, `[M]`, `<M>`,
// `~[M]` and `A(...)` bind tighter still. Atom and standard names are
// identifiers.
class Formula {
 public:
  enum class Kind { Atom, Not, And, Or, Box, Diamond, Dual, Audit };

  static Formula atom(std::string name) {
    require_identifier(name, "atom");
    return Formula(Kind::Atom, std::move(name), nullptr, nullptr);
  }
  static Formula negation(Formula f) {
    return Formula(Kind::Not, "", f.node_, nullptr);
  }
  static Formula conjunction(Formula a, Formula b) {
    return Formula(Kind::And, "", a.node_, b.node_);
  }
  static Formula disjunction(Formula a, Formula b) {
    return Formula(Kind::Or, "", a.node_, b.node_);
  }
  static Formula box(std::string standard, Formula f) {
    require_identifier(standard, "standard");
    return Formula(Kind::Box, std::move(standard), f.node_, nullptr);
  }
  static Formula diamond(std::string standard, Formula f) {
    require_identifier(standard, "standard");
    return Formula(Kind::Diamond, std::move(standard), f.node_, nullptr);
  }
  static Formula dual(std::string standard, Formula f) {
    require_identifier(standard, "standard");
    return Formula(Kind::Dual, std::move(standard), f.node_, nullptr);
  }
  static Formula audit(Formula f) {
    return Formula(Kind::Audit, "", f.node_, nullptr);
  }

  Kind kind() const { return node_->kind; }
  const std::string& atom_name() const { return node_->label; }
  const std::string& standard() const { return node_->label; }
  Formula left() const { return Formula(node_->a); }
  Formula right() const { return Formula(node_->b); }

  bool equals(const Formula& other) const { return equal(node_.get(), other.node_.get()); }

  std::string str() const {
    std::string out;
    print(node_.get(), 0, out);
    return out;
  }

 private:
  struct Node {
    Kind kind;
    std::string label;
    std::shared_ptr<const Node> a, b;
  };

  explicit Formula(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  Formula(Kind kind, std::string label, std::shared_ptr<const Node> a,
          std::shared_ptr<const Node> b)
      : node_(std::make_shared<Node>(Node{kind, std::move(label), std::move(a),
                                          std::move(b)})) {}

  static void require_identifier(const std::string& name, const char* what) {
    if (name.empty() || !is_ident_start(name[0]))
      throw ValueError(std::string(what) + " is not an identifier: " + name);
    for (char c : name)
      if (!is_ident_char(c))
        throw ValueError(std::string(what) + " is not an identifier: " + name);
  }

  static bool equal(const Node* a, const Node* b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind || a->label != b->label) return false;
    return equal(a->a.get(), b->a.get()) && equal(a->b.get(), b->b.get());
  }

  // Precedence: Or 1, And 2, prefixes 3. Parenthesize a child whenever its
  // precedence is at most the context's, which keeps parse(print(f))
  // structurally identical to f under left-associative parsing.
  static int precedence(Kind k) {
    switch (k) {
      case Kind::Or: return 1;
      case Kind::And: return 2;
      default: return 3;
    }
  }

  static void print_child(const Node* n, int context, std::string& out) {
    const bool parens = precedence(n->kind) <= context;
    if (parens) out += '(';
    print(n, 0, out);
    if (parens) out += ')';
  }

  static void print(const Node* n, int, std::string& out) {
    switch (n->kind) {
      case Kind::Atom:
        out += n->label;
        return;
      case Kind::Not:
        out += '!';
        print_child(n->a.get(), 2, out);
        return;
      case Kind::Box:
        out += '[';
        out += n->label;
        out += ']';
        print_child(n->a.get(), 2, out);
        return;
      case Kind::Diamond:
        out += '<';
        out += n->label;
        out += '>';
        print_child(n->a.get(), 2, out);
        return;
      case Kind::Dual:
        out += "~[";
        out += n->label;
        out += ']';
        print_child(n->a.get(), 2, out);
        return;
      case Kind::Audit:
        out += "A(";
        print(n->a.get(), 0, out);
        out += ')';
        return;
      case Kind::And:
        print_child(n->a.get(), 1, out);
        out += " & ";
        print_child(n->b.get(), 2, out);  // right operand of & re-parses left-assoc
        return;
      case Kind::Or:
        print_child(n->a.get(), 0, out);
        out += " | ";
        print_child(n->b.get(), 1, out);
        return;
    }
  }

  std::shared_ptr<const Node> node_;

  friend class FormulaParser;
};

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view src) : src_(src) {}

  Formula parse() {
    Formula f = parse_or();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError(pos_, "end of input");
    return f;
  }

 private:
  Formula parse_or() {
    Formula f = parse_and();
    while (peek() == '|') {
      ++pos_;
      f = Formula::disjunction(f, parse_and());
    }
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (peek() == '&') {
      ++pos_;
      f = Formula::conjunction(f, parse_unary());
    }
    return f;
  }

  Formula parse_unary() {
    switch (peek()) {
      case '!':
        ++pos_;
        return Formula::negation(parse_unary());
      case '[': {
        std::string std_id = parse_standard('[', ']');
        return Formula::box(std::move(std_id), parse_unary());
      }
      case '<': {
        std::string std_id = parse_standard('<', '>');
        return Formula::diamond(std::move(std_id), parse_unary());
      }
      case '~': {
        ++pos_;
        if (peek() != '[') throw ParseError(pos_, "'[' after '~'");
        std::string std_id = parse_standard('[', ']');
        return Formula::dual(std::move(std_id), parse_unary());
      }
      case '(': {
        ++pos_;
        Formula f = parse_or();
        expect(')');
        return f;
      }
      default: {
        const std::string name = parse_identifier();
        if (name == "A" && peek() == '(') {
          ++pos_;
          Formula f = parse_or();
          expect(')');
          return Formula::audit(f);
        }
        return Formula::atom(name);
      }
    }
  }

  std::string parse_standard(char open, char close) {
    ++pos_;  // consume open, caller peeked it
    (void)open;
    const std::string name = parse_identifier();
    expect(close);
    return name;
  }

  std::string parse_identifier() {
    skip_ws();
    if (pos_ >= src_.size() || !is_ident_start(src_[pos_]))
      throw ParseError(pos_, "identifier");
    const std::size_t start = pos_;
    while (pos_ < src_.size() && is_ident_char(src_[pos_])) ++pos_;
    return std::string(src_.substr(start, pos_ - start));
  }

  void expect(char c) {
    skip_ws();
    if (pos_ >= src_.size() || src_[pos_] != c)
      throw ParseError(pos_, std::string("'") + c + "'");
    ++pos_;
  }

  char peek() {
    skip_ws();
    return pos_ < src_.size() ? src_[pos_] : '\0';
  }

  void skip_ws() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

inline Formula parse_formula(std::string_view src) {
  return FormulaParser(src).parse();
}

// Compositional evaluation. Atoms resolve against the frame's registered
// propositions; A(phi) reads the audit lookup (0 everywhere when absent).
inline Proposition evaluate(const Formula& f, const Frame& frame,
                            const AlgebraPackage& pkg,
                            const AuditLookup* audit = nullptr) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      return frame.proposition(f.atom_name());
    case Formula::Kind::Not:
      return negate(evaluate(f.left(), frame, pkg, audit));
    case Formula::Kind::And:
      return meet(evaluate(f.left(), frame, pkg, audit),
                  evaluate(f.right(), frame, pkg, audit));
    case Formula::Kind::Or:
      return join(evaluate(f.left(), frame, pkg, audit),
                  evaluate(f.right(), frame, pkg, audit));
    case Formula::Kind::Box:
      return box(frame, f.standard(), evaluate(f.left(), frame, pkg, audit), pkg);
    case Formula::Kind::Diamond:
      return diamond(frame, f.standard(), evaluate(f.left(), frame, pkg, audit), pkg);
    case Formula::Kind::Dual:
      return dual(frame, f.standard(), evaluate(f.left(), frame, pkg, audit), pkg);
    case Formula::Kind::Audit: {
      const std::string key = f.left().str();
      std::vector<double> out(frame.world_count(), 0.0);
      if (audit)
        for (std::size_t w = 0; w < out.size(); ++w)
          out[w] = audit->audit_degree(key, frame.world_name(w));
      return Proposition(std::move(out));
    }
  }
  throw ValueError("unknown formula node");
}

}  // namespace modalrisk
