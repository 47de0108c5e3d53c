#include "jrefine/java/parser.hpp"

#include <cassert>
#include <utility>

namespace jrefine::java {

namespace {

bool is_primitive_type(std::string_view t) {
  return t == "boolean" || t == "byte" || t == "char" || t == "short" ||
         t == "int" || t == "long" || t == "float" || t == "double" || t == "void";
}

bool is_modifier_word(std::string_view t) {
  return t == "public" || t == "private" || t == "protected" || t == "static" ||
         t == "final" || t == "abstract" || t == "strictfp" || t == "native" ||
         t == "synchronized" || t == "transient" || t == "volatile" || t == "default";
}

bool starts_expression(const Token& t) {
  switch (t.kind) {
    case TokenKind::Identifier:
    case TokenKind::Number:
    case TokenKind::String:
    case TokenKind::Character:
      return true;
    case TokenKind::Keyword:
      return t.text == "new" || t.text == "this" || t.text == "super" ||
             t.text == "true" || t.text == "false" || t.text == "null" ||
             is_primitive_type(t.text);
    case TokenKind::Operator:
      return t.text == "(" || t.text == "!" || t.text == "~" || t.text == "+" ||
             t.text == "-" || t.text == "++" || t.text == "--";
    default:
      return false;
  }
}

class Parser {
 public:
  Parser(const std::string* src, std::vector<Token> code_tokens)
      : src_(src), toks_(std::move(code_tokens)) {}

  std::unique_ptr<AstNode> parse_program() {
    auto root = node(kind::program, pos_);
    while (!at_end()) {
      std::size_t before = pos_;
      if (accept_kw("package") || accept_kw("import")) {
        skip_to_semi();
        continue;
      }
      root->add_child(parse_type_declaration());
      if (pos_ == before) {  // no progress: swallow one token as an error
        error_here("unexpected token at top level");
        std::size_t at = pos_++;
        root->add_child(error_node(at, at + 1));
      }
    }
    root->set_span(Span{0, src_->size()});
    return root;
  }

  std::unique_ptr<AstNode> parse_fragment_block() {
    auto blk = node(kind::block, pos_);
    while (!at_end()) {
      std::size_t before = pos_;
      blk->add_child(parse_statement());
      if (pos_ == before) {
        error_here("unexpected token in fragment");
        std::size_t at = pos_++;
        blk->add_child(error_node(at, at + 1));
      }
    }
    blk->set_span(Span{0, src_->size()});
    return blk;
  }

  std::vector<ParseError> take_errors() { return std::move(errors_); }

 private:
  const std::string* src_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<ParseError> errors_;

  // ---- token plumbing -------------------------------------------------

  bool at_end() const { return pos_ >= toks_.size(); }
  const Token* peek(std::size_t off = 0) const {
    return pos_ + off < toks_.size() ? &toks_[pos_ + off] : nullptr;
  }
  bool is_op(std::string_view text, std::size_t off = 0) const {
    const Token* t = peek(off);
    return t && t->kind == TokenKind::Operator && t->text == text;
  }
  bool is_kw(std::string_view text, std::size_t off = 0) const {
    const Token* t = peek(off);
    return t && t->kind == TokenKind::Keyword && t->text == text;
  }
  bool is_ident(std::size_t off = 0) const {
    const Token* t = peek(off);
    return t && t->kind == TokenKind::Identifier;
  }
  bool accept_op(std::string_view text) {
    if (is_op(text)) { ++pos_; return true; }
    return false;
  }
  bool accept_kw(std::string_view text) {
    if (is_kw(text)) { ++pos_; return true; }
    return false;
  }
  bool expect_op(std::string_view text) {
    if (accept_op(text)) return true;
    error_here(std::string("expected '") + std::string(text) + "'");
    return false;
  }
  void error_here(std::string msg) {
    Span s = at_end() ? Span{src_->size(), src_->size()}
                      : Span{toks_[pos_].begin, toks_[pos_].end};
    errors_.push_back(ParseError{s, std::move(msg)});
  }

  Span span_of(std::size_t from_tok, std::size_t to_tok) const {
    if (from_tok >= to_tok || from_tok >= toks_.size())
      return at_end() && !toks_.empty()
                 ? Span{toks_.back().end, toks_.back().end}
                 : Span{0, 0};
    return Span{toks_[from_tok].begin, toks_[std::min(to_tok, toks_.size()) - 1].end};
  }

  std::unique_ptr<AstNode> node(const char* k, std::size_t from_tok) const {
    return std::make_unique<AstNode>(k, span_of(from_tok, from_tok + 1), src_);
  }
  // Closes a node's span over tokens [from, pos_).
  std::unique_ptr<AstNode> finish(std::unique_ptr<AstNode> n, std::size_t from_tok) {
    n->set_span(span_of(from_tok, pos_));
    return n;
  }
  std::unique_ptr<AstNode> leaf(const char* k, std::size_t from_tok, std::size_t to_tok) {
    return std::make_unique<AstNode>(k, span_of(from_tok, to_tok), src_);
  }
  std::unique_ptr<AstNode> error_node(std::size_t from_tok, std::size_t to_tok) {
    return leaf(kind::error, from_tok, std::max(to_tok, from_tok + 1));
  }

  // Skips past the next ';' at bracket depth 0 (or a closing '}').
  void skip_to_semi() {
    int depth = 0;
    while (!at_end()) {
      const Token& t = toks_[pos_];
      if (t.kind == TokenKind::Operator) {
        if (t.text == "(" || t.text == "[" || t.text == "{") ++depth;
        else if (t.text == ")" || t.text == "]") --depth;
        else if (t.text == "}") {
          if (depth <= 0) return;  // don't eat the enclosing brace
          --depth;
        } else if (t.text == ";" && depth <= 0) {
          ++pos_;
          return;
        }
      }
      ++pos_;
    }
  }

  // ---- silent (backtrackable) helpers ---------------------------------

  // Consumes a type at pos_ without emitting nodes or errors.
  // Returns false (pos_ restored) when nothing type-shaped is present.
  bool consume_type_silent() {
    std::size_t save = pos_;
    while (is_op("@")) {  // type annotations
      ++pos_;
      if (is_ident()) ++pos_; else { pos_ = save; return false; }
      if (is_op("(")) skip_balanced("(", ")");
    }
    if (peek() && peek()->kind == TokenKind::Keyword && is_primitive_type(peek()->text)) {
      ++pos_;
    } else if (is_ident()) {
      ++pos_;
      // qualified name
      while (is_op(".") && is_ident(1)) pos_ += 2;
      if (is_op("<") && !skip_type_arguments()) { pos_ = save; return false; }
      // qualified suffix after generics: Outer<T>.Inner
      while (is_op(".") && is_ident(1)) {
        pos_ += 2;
        if (is_op("<") && !skip_type_arguments()) { pos_ = save; return false; }
      }
    } else {
      pos_ = save;
      return false;
    }
    while (is_op("[") && is_op("]", 1)) pos_ += 2;  // array dims
    return true;
  }

  // At '<': skips a balanced type-argument list. '>' is always a single
  // token (lexer guarantee), so nesting is a simple counter.
  bool skip_type_arguments() {
    std::size_t save = pos_;
    assert(is_op("<"));
    int depth = 0;
    std::size_t guard = 0;
    while (!at_end() && guard++ < 256) {
      const Token& t = toks_[pos_];
      if (t.kind == TokenKind::Operator) {
        if (t.text == "<") ++depth;
        else if (t.text == ">") {
          --depth;
          if (depth == 0) { ++pos_; return true; }
        } else if (t.text != "," && t.text != "." && t.text != "?" &&
                   t.text != "[" && t.text != "]" && t.text != "@") {
          break;  // not a token that can appear in type arguments
        }
      } else if (t.kind != TokenKind::Identifier &&
                 !(t.kind == TokenKind::Keyword &&
                   (t.text == "extends" || t.text == "super" || is_primitive_type(t.text)))) {
        break;
      }
      ++pos_;
    }
    pos_ = save;
    return false;
  }

  void skip_balanced(std::string_view open, std::string_view close) {
    if (!is_op(open)) return;
    int depth = 0;
    while (!at_end()) {
      if (is_op(open)) ++depth;
      else if (is_op(close) && --depth == 0) { ++pos_; return; }
      ++pos_;
    }
  }

  // ---- declarations ----------------------------------------------------

  // Parses annotations and modifier keywords; returns a modifiers node or
  // nullptr if none present.
  std::unique_ptr<AstNode> parse_modifiers() {
    std::size_t start = pos_;
    auto mods = node(kind::modifiers, pos_);
    bool any = false;
    for (;;) {
      if (is_op("@") && is_ident(1) && !is_kw("interface", 1)) {
        std::size_t a = pos_;
        pos_ += 2;
        while (is_op(".") && is_ident(1)) pos_ += 2;
        if (is_op("(")) skip_balanced("(", ")");
        mods->add_child(leaf(kind::annotation, a, pos_));
        any = true;
        continue;
      }
      if (peek() && peek()->kind == TokenKind::Keyword && is_modifier_word(peek()->text)) {
        ++pos_;
        any = true;
        continue;
      }
      break;
    }
    if (!any) return nullptr;
    return finish(std::move(mods), start);
  }

  std::unique_ptr<AstNode> parse_type_declaration() {
    std::size_t start = pos_;
    auto mods = parse_modifiers();
    if (accept_kw("class") || accept_kw("interface") || accept_kw("enum") ||
        (is_kw("interface", 1) && accept_op("@"))) {
      if (peek() && peek()->text == "interface") ++pos_;  // @interface
      auto decl = node(kind::class_declaration, start);
      if (mods) decl->add_child(std::move(mods));
      if (is_ident()) {
        std::size_t n = pos_++;
        decl->add_child(leaf(kind::identifier, n, pos_));
      } else {
        error_here("expected type name");
      }
      if (is_op("<")) {
        if (!skip_type_arguments()) skip_to_body_brace();
      }
      // extends / implements / permits clauses
      while (!at_end() && !is_op("{") && !is_op(";")) ++pos_;
      if (is_op("{")) {
        decl->add_child(parse_class_body());
      } else {
        accept_op(";");
      }
      return finish(std::move(decl), start);
    }
    // Unrecognized top-level construct: error recovery.
    error_here("expected type declaration");
    std::size_t from = pos_;
    skip_to_semi();
    if (pos_ == from && !at_end()) ++pos_;
    return error_node(from, pos_);
  }

  void skip_to_body_brace() {
    while (!at_end() && !is_op("{")) ++pos_;
  }

  std::unique_ptr<AstNode> parse_class_body() {
    std::size_t start = pos_;
    auto body = node(kind::class_body, pos_);
    expect_op("{");
    while (!at_end() && !is_op("}")) {
      std::size_t before = pos_;
      body->add_child(parse_member());
      if (pos_ == before) {
        error_here("unexpected token in class body");
        std::size_t at = pos_++;
        body->add_child(error_node(at, at + 1));
      }
    }
    expect_op("}");
    return finish(std::move(body), start);
  }

  std::unique_ptr<AstNode> parse_member() {
    std::size_t start = pos_;
    if (accept_op(";")) return leaf(kind::empty_statement, start, pos_);
    if (is_op("{")) {  // instance initializer
      return parse_block();
    }
    auto mods = parse_modifiers();
    if (is_op("{")) {  // static initializer: modifiers then block
      auto blk = parse_block();
      return blk;
    }
    if (is_kw("class") || is_kw("interface") || is_kw("enum")) {
      pos_ = start;
      return parse_type_declaration();
    }
    if (is_op("<")) skip_type_arguments();  // method type parameters

    // Constructor: Name ( ... )
    bool ctor = is_ident() && is_op("(", 1);
    std::size_t type_from = pos_;
    if (!ctor) {
      if (!consume_type_silent()) {
        error_here("expected member declaration");
        std::size_t from = pos_;
        skip_to_semi();
        if (pos_ == from && !at_end()) ++pos_;
        auto err = error_node(from, pos_);
        return err;
      }
    }
    std::size_t type_to = pos_;

    if (!is_ident() && !ctor) {
      // Field like `int x;` already consumed name inside type? No: type stops
      // before the declarator name. Anything else is unsupported.
      error_here("expected member name");
      std::size_t from = pos_;
      skip_to_semi();
      if (pos_ == from && !at_end()) ++pos_;
      return error_node(std::min(start, from), pos_);
    }

    std::size_t name_tok = pos_;
    ++pos_;  // member name

    if (is_op("(")) {
      // Method or constructor.
      auto m = node(kind::method_declaration, start);
      if (mods) m->add_child(std::move(mods));
      if (!ctor && type_to > type_from)
        m->add_child(leaf(kind::type_identifier, type_from, type_to));
      m->add_child(leaf(kind::identifier, name_tok, name_tok + 1));
      m->add_child(parse_formal_parameters());
      if (accept_kw("throws")) {
        // exception list: Type (, Type)*
        do {
          consume_type_silent();
        } while (accept_op(","));
      }
      if (is_op("{")) {
        m->add_child(parse_block());
      } else {
        accept_op(";");  // abstract/interface method
      }
      return finish(std::move(m), start);
    }

    // Field declaration: consume declarators through ';'.
    auto f = node("field_declaration", start);
    if (mods) f->add_child(std::move(mods));
    skip_to_semi();
    return finish(std::move(f), start);
  }

  std::unique_ptr<AstNode> parse_formal_parameters() {
    std::size_t start = pos_;
    auto params = node(kind::formal_parameters, pos_);
    expect_op("(");
    while (!at_end() && !is_op(")")) {
      std::size_t p_start = pos_;
      parse_modifiers();
      consume_type_silent();
      accept_op("...");
      if (is_ident()) {
        auto p = node(kind::formal_parameter, p_start);
        p->add_child(leaf(kind::identifier, pos_, pos_ + 1));
        ++pos_;
        while (is_op("[") && is_op("]", 1)) pos_ += 2;
        params->add_child(finish(std::move(p), p_start));
      } else if (!is_op(")")) {
        error_here("expected parameter");
        ++pos_;
      }
      if (!accept_op(",")) break;
    }
    expect_op(")");
    return finish(std::move(params), start);
  }

  // ---- statements -------------------------------------------------------

  std::unique_ptr<AstNode> parse_block() {
    std::size_t start = pos_;
    auto blk = node(kind::block, pos_);
    expect_op("{");
    while (!at_end() && !is_op("}")) {
      std::size_t before = pos_;
      blk->add_child(parse_statement());
      if (pos_ == before) {
        error_here("unexpected token in block");
        std::size_t at = pos_++;
        blk->add_child(error_node(at, at + 1));
      }
    }
    expect_op("}");
    return finish(std::move(blk), start);
  }

  std::unique_ptr<AstNode> parse_statement() {
    std::size_t start = pos_;
    if (is_op("{")) return parse_block();
    if (accept_op(";")) return leaf(kind::empty_statement, start, pos_);
    if (is_kw("if")) return parse_if();
    if (is_kw("for")) return parse_for();
    if (is_kw("while")) return parse_while();
    if (is_kw("do")) return parse_do();
    if (is_kw("switch")) return parse_switch();
    if (is_kw("try")) return parse_try();
    if (is_kw("synchronized") && is_op("(", 1)) return parse_synchronized();
    if (is_kw("return")) {
      ++pos_;
      auto s = node(kind::return_statement, start);
      if (!is_op(";") && !at_end() && starts_expression(*peek()))
        s->add_child(parse_expression());
      expect_op(";");
      return finish(std::move(s), start);
    }
    if (is_kw("throw")) {
      ++pos_;
      auto s = node(kind::throw_statement, start);
      s->add_child(parse_expression());
      expect_op(";");
      return finish(std::move(s), start);
    }
    if (is_kw("break") || is_kw("continue")) {
      const char* k = is_kw("break") ? kind::break_statement : kind::continue_statement;
      ++pos_;
      if (is_ident()) ++pos_;  // label stays inside the leaf's text
      expect_op(";");
      return leaf(k, start, pos_);
    }
    if (is_kw("assert")) {
      ++pos_;
      auto s = node(kind::assert_statement, start);
      s->add_child(parse_expression());
      if (accept_op(":")) s->add_child(parse_expression());
      expect_op(";");
      return finish(std::move(s), start);
    }
    if (is_kw("class") || is_kw("interface") || is_kw("enum") ||
        ((is_kw("final") || is_op("@")) && looks_like_local_class())) {
      return parse_type_declaration();
    }
    // Labeled statement: ident ':' (but not ternary/switch contexts here).
    if (is_ident() && is_op(":", 1)) {
      pos_ += 2;
      auto s = node(kind::labeled_statement, start);
      s->add_child(parse_statement());
      return finish(std::move(s), start);
    }

    // Local variable declaration vs expression statement.
    if (looks_like_declaration()) return parse_local_declaration();

    auto s = node(kind::expression_statement, start);
    s->add_child(parse_expression());
    expect_op(";");
    return finish(std::move(s), start);
  }

  bool looks_like_local_class() {
    std::size_t save = pos_;
    while (is_kw("final") || is_op("@")) {
      if (accept_kw("final")) continue;
      ++pos_;
      if (is_ident()) ++pos_; else { pos_ = save; return false; }
      while (is_op(".") && is_ident(1)) pos_ += 2;
      if (is_op("(")) skip_balanced("(", ")");
    }
    bool yes = is_kw("class") || is_kw("interface") || is_kw("enum");
    pos_ = save;
    return yes;
  }

  bool looks_like_declaration() {
    std::size_t save = pos_;
    parse_modifiers_silent();
    bool var_kw = is_ident() && peek()->text == "var" &&
                  is_ident(1);  // `var x = ...`
    bool ok = false;
    if (var_kw) {
      ok = true;
    } else if (consume_type_silent() && is_ident()) {
      ++pos_;
      while (is_op("[") && is_op("]", 1)) pos_ += 2;
      ok = is_op("=") || is_op(";") || is_op(",");
    }
    pos_ = save;
    return ok;
  }

  void parse_modifiers_silent() {
    for (;;) {
      if (accept_kw("final")) continue;
      if (is_op("@") && is_ident(1)) {
        pos_ += 2;
        while (is_op(".") && is_ident(1)) pos_ += 2;
        if (is_op("(")) skip_balanced("(", ")");
        continue;
      }
      break;
    }
  }

  std::unique_ptr<AstNode> parse_local_declaration() {
    std::size_t start = pos_;
    auto d = node(kind::local_variable_declaration, start);
    auto mods = parse_modifiers();
    if (mods) d->add_child(std::move(mods));
    std::size_t type_from = pos_;
    if (is_ident() && peek()->text == "var") {
      ++pos_;
    } else {
      consume_type_silent();
    }
    d->add_child(leaf(kind::type_identifier, type_from, pos_));
    for (;;) {
      std::size_t v_start = pos_;
      if (!is_ident()) { error_here("expected variable name"); break; }
      auto decl = node(kind::variable_declarator, v_start);
      decl->add_child(leaf(kind::identifier, pos_, pos_ + 1));
      ++pos_;
      while (is_op("[") && is_op("]", 1)) pos_ += 2;
      if (accept_op("=")) {
        if (is_op("{")) decl->add_child(parse_array_initializer());
        else decl->add_child(parse_expression());
      }
      d->add_child(finish(std::move(decl), v_start));
      if (!accept_op(",")) break;
    }
    expect_op(";");
    return finish(std::move(d), start);
  }

  std::unique_ptr<AstNode> parse_paren_condition() {
    std::size_t start = pos_;
    auto p = node(kind::parenthesized_expression, start);
    expect_op("(");
    if (!is_op(")")) p->add_child(parse_expression());
    expect_op(")");
    return finish(std::move(p), start);
  }

  std::unique_ptr<AstNode> parse_if() {
    std::size_t start = pos_;
    accept_kw("if");
    auto s = node(kind::if_statement, start);
    s->add_child(parse_paren_condition());
    s->add_child(parse_statement());
    if (accept_kw("else")) s->add_child(parse_statement());
    return finish(std::move(s), start);
  }

  std::unique_ptr<AstNode> parse_while() {
    std::size_t start = pos_;
    accept_kw("while");
    auto s = node(kind::while_statement, start);
    s->add_child(parse_paren_condition());
    s->add_child(parse_statement());
    return finish(std::move(s), start);
  }

  std::unique_ptr<AstNode> parse_do() {
    std::size_t start = pos_;
    accept_kw("do");
    auto s = node(kind::do_statement, start);
    s->add_child(parse_statement());
    accept_kw("while");
    s->add_child(parse_paren_condition());
    expect_op(";");
    return finish(std::move(s), start);
  }

  std::unique_ptr<AstNode> parse_for() {
    std::size_t start = pos_;
    accept_kw("for");
    // Decide enhanced-for: `( [final] Type name :` pattern.
    std::size_t save = pos_;
    bool enhanced = false;
    if (accept_op("(")) {
      parse_modifiers_silent();
      if ((is_ident() && peek()->text == "var" && is_ident(1) && is_op(":", 2))) {
        enhanced = true;
      } else if (consume_type_silent() && is_ident() && is_op(":", 1)) {
        enhanced = true;
      }
    }
    pos_ = save;

    if (enhanced) {
      auto s = node(kind::enhanced_for_statement, start);
      expect_op("(");
      parse_modifiers();
      std::size_t t_from = pos_;
      if (is_ident() && peek()->text == "var") ++pos_;
      else consume_type_silent();
      s->add_child(leaf(kind::type_identifier, t_from, pos_));
      if (is_ident()) {
        auto v = node(kind::variable_declarator, pos_);
        v->add_child(leaf(kind::identifier, pos_, pos_ + 1));
        ++pos_;
        s->add_child(finish(std::move(v), pos_ - 1));
      }
      expect_op(":");
      s->add_child(parse_expression());
      expect_op(")");
      s->add_child(parse_statement());
      return finish(std::move(s), start);
    }

    auto s = node(kind::for_statement, start);
    expect_op("(");
    if (!accept_op(";")) {
      if (looks_like_declaration()) {
        s->add_child(parse_local_declaration());  // consumes its ';'
      } else {
        do {
          s->add_child(expression_statement_shell(parse_expression()));
        } while (accept_op(","));
        expect_op(";");
      }
    }
    if (!is_op(";")) s->add_child(parse_expression());
    expect_op(";");
    if (!is_op(")")) {
      do {
        s->add_child(expression_statement_shell(parse_expression()));
      } while (accept_op(","));
    }
    expect_op(")");
    s->add_child(parse_statement());
    return finish(std::move(s), start);
  }

  // Wraps a bare expression in an expression_statement shell so for-init and
  // for-update pieces look like statements to R/W analysis.
  std::unique_ptr<AstNode> expression_statement_shell(std::unique_ptr<AstNode> e) {
    auto s = std::make_unique<AstNode>(kind::expression_statement, e->span(), src_);
    s->add_child(std::move(e));
    return s;
  }

  std::unique_ptr<AstNode> parse_switch() {
    std::size_t start = pos_;
    accept_kw("switch");
    auto s = node(kind::switch_statement, start);
    s->add_child(parse_paren_condition());
    std::size_t b_start = pos_;
    auto blk = node(kind::switch_block, pos_);
    expect_op("{");
    while (!at_end() && !is_op("}")) {
      std::size_t before = pos_;
      if (accept_kw("case")) {
        // labels: expressions until ':' or '->'
        while (!at_end() && !is_op(":") && !is_op("->") && !is_op("}")) ++pos_;
        if (accept_op("->")) {
          if (is_op("{")) blk->add_child(parse_block());
          else blk->add_child(parse_statement());
        } else {
          accept_op(":");
        }
        continue;
      }
      if (accept_kw("default")) {
        if (accept_op("->")) {
          if (is_op("{")) blk->add_child(parse_block());
          else blk->add_child(parse_statement());
        } else {
          accept_op(":");
        }
        continue;
      }
      blk->add_child(parse_statement());
      if (pos_ == before) {
        error_here("unexpected token in switch block");
        std::size_t at = pos_++;
        blk->add_child(error_node(at, at + 1));
      }
    }
    expect_op("}");
    s->add_child(finish(std::move(blk), b_start));
    return finish(std::move(s), start);
  }

  std::unique_ptr<AstNode> parse_try() {
    std::size_t start = pos_;
    accept_kw("try");
    auto s = node(kind::try_statement, start);
    if (is_op("(")) {
      // try-with-resources: resource declarations, ';'-separated
      expect_op("(");
      while (!at_end() && !is_op(")")) {
        if (looks_like_declaration_in_resource()) {
          std::size_t r_start = pos_;
          auto d = node(kind::local_variable_declaration, r_start);
          parse_modifiers();
          std::size_t t_from = pos_;
          if (is_ident() && peek()->text == "var") ++pos_;
          else consume_type_silent();
          d->add_child(leaf(kind::type_identifier, t_from, pos_));
          if (is_ident()) {
            auto v = node(kind::variable_declarator, pos_);
            v->add_child(leaf(kind::identifier, pos_, pos_ + 1));
            ++pos_;
            if (accept_op("=")) v->add_child(parse_expression());
            d->add_child(finish(std::move(v), r_start));
          }
          s->add_child(finish(std::move(d), r_start));
        } else {
          s->add_child(expression_statement_shell(parse_expression()));
        }
        if (!accept_op(";")) break;
      }
      expect_op(")");
    }
    s->add_child(parse_block());
    while (is_kw("catch")) {
      std::size_t c_start = pos_;
      ++pos_;
      auto c = node(kind::catch_clause, c_start);
      expect_op("(");
      parse_modifiers();
      consume_type_silent();
      while (accept_op("|")) consume_type_silent();  // multi-catch
      if (is_ident()) {
        auto v = node(kind::variable_declarator, pos_);
        v->add_child(leaf(kind::identifier, pos_, pos_ + 1));
        ++pos_;
        c->add_child(finish(std::move(v), pos_ - 1));
      }
      expect_op(")");
      c->add_child(parse_block());
      s->add_child(finish(std::move(c), c_start));
    }
    if (is_kw("finally")) {
      std::size_t f_start = pos_;
      ++pos_;
      auto f = node(kind::finally_clause, f_start);
      f->add_child(parse_block());
      s->add_child(finish(std::move(f), f_start));
    }
    return finish(std::move(s), start);
  }

  bool looks_like_declaration_in_resource() {
    std::size_t save = pos_;
    parse_modifiers_silent();
    bool ok = false;
    if (is_ident() && peek()->text == "var" && is_ident(1)) ok = true;
    else if (consume_type_silent() && is_ident()) {
      ++pos_;
      ok = is_op("=");
    }
    pos_ = save;
    return ok;
  }

  std::unique_ptr<AstNode> parse_synchronized() {
    std::size_t start = pos_;
    accept_kw("synchronized");
    auto s = node(kind::synchronized_statement, start);
    s->add_child(parse_paren_condition());
    s->add_child(parse_block());
    return finish(std::move(s), start);
  }

  // ---- expressions -------------------------------------------------------

  std::unique_ptr<AstNode> parse_expression() { return parse_assignment(); }

  bool at_assignment_op() const {
    if (!peek() || peek()->kind != TokenKind::Operator) return false;
    const std::string& t = peek()->text;
    return t == "=" || t == "+=" || t == "-=" || t == "*=" || t == "/=" ||
           t == "%=" || t == "&=" || t == "|=" || t == "^=" || t == "<<=";
  }

  std::unique_ptr<AstNode> parse_assignment() {
    std::size_t start = pos_;
    auto lhs = parse_ternary();
    if (at_assignment_op()) {
      ++pos_;
      auto rhs = parse_assignment();
      auto a = node(kind::assignment_expression, start);
      a->add_child(std::move(lhs));
      a->add_child(std::move(rhs));
      return finish(std::move(a), start);
    }
    return lhs;
  }

  std::unique_ptr<AstNode> parse_ternary() {
    std::size_t start = pos_;
    auto cond = parse_binary();
    if (is_op("?")) {
      ++pos_;
      auto t = node(kind::ternary_expression, start);
      t->add_child(std::move(cond));
      t->add_child(parse_expression());
      expect_op(":");
      t->add_child(parse_assignment());
      return finish(std::move(t), start);
    }
    return cond;
  }

  bool at_binary_op() const {
    if (is_kw("instanceof")) return true;
    if (!peek() || peek()->kind != TokenKind::Operator) return false;
    const std::string& t = peek()->text;
    return t == "||" || t == "&&" || t == "|" || t == "^" || t == "&" ||
           t == "==" || t == "!=" || t == "<" || t == ">" || t == "<=" ||
           t == ">=" || t == "+" || t == "-" || t == "*" || t == "/" ||
           t == "%" || t == "<<";
  }

  // Precedence-flat left fold: grouping differs from real Java precedence,
  // but every downstream use (name sets, token streams, kind histograms) is
  // insensitive to grouping as long as it's deterministic.
  std::unique_ptr<AstNode> parse_binary() {
    std::size_t start = pos_;
    auto left = parse_unary();
    while (at_binary_op()) {
      if (accept_kw("instanceof")) {
        auto n = node(kind::instanceof_expression, start);
        n->add_child(std::move(left));
        accept_kw("final");
        consume_type_silent();
        if (is_ident()) {  // pattern binding introduces a name
          auto v = std::make_unique<AstNode>(kind::variable_declarator,
                                             span_of(pos_, pos_ + 1), src_);
          v->add_child(leaf(kind::identifier, pos_, pos_ + 1));
          ++pos_;
          n->add_child(std::move(v));
        }
        left = finish(std::move(n), start);
        continue;
      }
      // `>` followed by `>` is a shift; still two plain binary folds here.
      ++pos_;
      auto n = node(kind::binary_expression, start);
      n->add_child(std::move(left));
      n->add_child(parse_unary());
      left = finish(std::move(n), start);
    }
    return left;
  }

  std::unique_ptr<AstNode> parse_unary() {
    std::size_t start = pos_;
    if (is_op("++") || is_op("--")) {
      ++pos_;
      auto n = node(kind::update_expression, start);
      n->add_child(parse_unary());
      return finish(std::move(n), start);
    }
    if (is_op("+") || is_op("-") || is_op("!") || is_op("~")) {
      ++pos_;
      auto n = node(kind::unary_expression, start);
      n->add_child(parse_unary());
      return finish(std::move(n), start);
    }
    // Cast: '(' Type ')' followed by something expression-like.
    if (is_op("(")) {
      std::size_t save = pos_;
      ++pos_;
      bool is_type = consume_type_silent();
      if (is_type && is_op(")")) {
        std::size_t after = pos_ + 1;
        bool next_ok = after < toks_.size() && starts_expression(toks_[after]) &&
                       !(toks_[after].kind == TokenKind::Operator &&
                         (toks_[after].text == "+" || toks_[after].text == "-"));
        // A parenthesized *qualified/generic/array/primitive* type is a cast;
        // a bare identifier is one only when an operand clearly follows.
        bool shaped_like_type = pos_ - save > 2;
        bool bare_ident = pos_ - save == 2 && toks_[save + 1].kind == TokenKind::Identifier;
        if (next_ok && (shaped_like_type || bare_ident ||
                        (pos_ - save == 2 && toks_[save + 1].kind == TokenKind::Keyword))) {
          ++pos_;  // ')'
          auto n = node(kind::cast_expression, save);
          n->add_child(leaf(kind::type_identifier, save + 1, pos_ - 1));
          n->add_child(parse_unary());
          return finish(std::move(n), save);
        }
      }
      pos_ = save;
    }
    return parse_postfix();
  }

  std::unique_ptr<AstNode> parse_postfix() {
    std::size_t start = pos_;
    auto prim = parse_primary();
    for (;;) {
      if (is_op(".")) {
        // member access / method call / .class / generic method call
        std::size_t dot = pos_;
        ++pos_;
        if (accept_kw("class")) {
          auto n = node("class_literal", start);
          n->add_child(std::move(prim));
          prim = finish(std::move(n), start);
          continue;
        }
        if (accept_kw("this") || accept_kw("super")) {
          auto n = node(kind::field_access, start);
          n->add_child(std::move(prim));
          prim = finish(std::move(n), start);
          continue;
        }
        if (is_op("<")) skip_type_arguments();  // explicit type witness
        if (is_ident()) {
          std::size_t name_tok = pos_;
          ++pos_;
          if (is_op("(")) {
            auto n = node(kind::method_invocation, start);
            n->add_child(std::move(prim));
            n->add_child(leaf(kind::identifier, name_tok, name_tok + 1));
            n->add_child(parse_argument_list());
            prim = finish(std::move(n), start);
          } else {
            auto n = node(kind::field_access, start);
            n->add_child(std::move(prim));
            n->add_child(leaf(kind::identifier, name_tok, name_tok + 1));
            prim = finish(std::move(n), start);
          }
          continue;
        }
        if (accept_kw("new")) {  // qualified inner-class creation: lenient
          if (is_ident()) ++pos_;
          if (is_op("(")) {
            auto n = node(kind::object_creation_expression, start);
            n->add_child(std::move(prim));
            n->add_child(parse_argument_list());
            prim = finish(std::move(n), start);
            continue;
          }
        }
        error_here("expected member name after '.'");
        pos_ = dot;
        break;
      }
      if (is_op("::")) {
        ++pos_;
        accept_kw("new");
        if (is_op("<")) skip_type_arguments();
        if (is_ident()) ++pos_;
        auto n = node(kind::method_reference, start);
        n->add_child(std::move(prim));
        prim = finish(std::move(n), start);
        continue;
      }
      if (is_op("[") && !is_op("]", 1)) {
        ++pos_;
        auto n = node(kind::array_access, start);
        n->add_child(std::move(prim));
        n->add_child(parse_expression());
        expect_op("]");
        prim = finish(std::move(n), start);
        continue;
      }
      if (is_op("++") || is_op("--")) {
        ++pos_;
        auto n = node(kind::update_expression, start);
        n->add_child(std::move(prim));
        prim = finish(std::move(n), start);
        continue;
      }
      break;
    }
    return prim;
  }

  std::unique_ptr<AstNode> parse_argument_list() {
    std::size_t start = pos_;
    auto args = node(kind::argument_list, pos_);
    expect_op("(");
    while (!at_end() && !is_op(")")) {
      args->add_child(parse_expression());
      if (!accept_op(",")) break;
    }
    expect_op(")");
    return finish(std::move(args), start);
  }

  std::unique_ptr<AstNode> parse_array_initializer() {
    std::size_t start = pos_;
    auto init = node(kind::array_initializer, pos_);
    expect_op("{");
    while (!at_end() && !is_op("}")) {
      if (is_op("{")) init->add_child(parse_array_initializer());
      else init->add_child(parse_expression());
      if (!accept_op(",")) break;
    }
    expect_op("}");
    return finish(std::move(init), start);
  }

  // Finds the matching ')' for the '(' at pos_ and reports whether the very
  // next token is '->' (lambda parameter list).
  bool paren_starts_lambda() const {
    assert(is_op("("));
    int depth = 0;
    std::size_t i = pos_;
    while (i < toks_.size()) {
      const Token& t = toks_[i];
      if (t.kind == TokenKind::Operator) {
        if (t.text == "(") ++depth;
        else if (t.text == ")") {
          if (--depth == 0)
            return i + 1 < toks_.size() && toks_[i + 1].kind == TokenKind::Operator &&
                   toks_[i + 1].text == "->";
        }
      }
      ++i;
    }
    return false;
  }

  void parse_lambda_params(AstNode& lambda) {
    // At '(' of a lambda. The *last* identifier of each parameter (before a
    // top-level ',' or ')') is its name; optional types are skipped over.
    expect_op("(");
    while (!at_end() && !is_op(")")) {
      std::size_t name_tok = toks_.size();
      while (!at_end() && !is_op(",") && !is_op(")")) {
        if (is_op("<")) {  // generic type: swallow so its commas don't split
          if (!skip_type_arguments()) ++pos_;
          continue;
        }
        if (is_ident()) name_tok = pos_;
        ++pos_;
      }
      if (name_tok < toks_.size()) {
        auto v = std::make_unique<AstNode>(kind::variable_declarator,
                                           span_of(name_tok, name_tok + 1), src_);
        v->add_child(leaf(kind::identifier, name_tok, name_tok + 1));
        lambda.add_child(std::move(v));
      }
      if (!accept_op(",")) break;
    }
    expect_op(")");
  }

  std::unique_ptr<AstNode> parse_lambda_body_into(std::unique_ptr<AstNode> lambda,
                                                  std::size_t start) {
    expect_op("->");
    if (is_op("{")) lambda->add_child(parse_block());
    else lambda->add_child(parse_expression());
    return finish(std::move(lambda), start);
  }

  std::unique_ptr<AstNode> parse_primary() {
    std::size_t start = pos_;
    const Token* t = peek();
    if (!t) {
      error_here("unexpected end of input in expression");
      return error_node(start, start + 1);
    }

    if (t->kind == TokenKind::Operator && t->text == "(") {
      if (paren_starts_lambda()) {
        auto lam = node(kind::lambda_expression, start);
        parse_lambda_params(*lam);
        return parse_lambda_body_into(std::move(lam), start);
      }
      ++pos_;
      auto p = node(kind::parenthesized_expression, start);
      p->add_child(parse_expression());
      expect_op(")");
      return finish(std::move(p), start);
    }

    if (t->kind == TokenKind::Identifier) {
      if (is_op("->", 1)) {  // single-parameter lambda: x -> ...
        auto lam = node(kind::lambda_expression, start);
        auto v = std::make_unique<AstNode>(kind::variable_declarator,
                                           span_of(pos_, pos_ + 1), src_);
        v->add_child(leaf(kind::identifier, pos_, pos_ + 1));
        lam->add_child(std::move(v));
        ++pos_;
        return parse_lambda_body_into(std::move(lam), start);
      }
      ++pos_;
      // Receiverless call: name(...)
      if (is_op("(")) {
        auto n = node(kind::method_invocation, start);
        n->add_child(leaf(kind::identifier, start, start + 1));
        n->add_child(parse_argument_list());
        // mark arity: receiverless invocations have exactly name + args
        return finish(std::move(n), start);
      }
      return leaf(kind::identifier, start, pos_);
    }

    if (t->kind == TokenKind::Number || t->kind == TokenKind::String ||
        t->kind == TokenKind::Character) {
      ++pos_;
      return leaf(kind::literal, start, pos_);
    }

    if (t->kind == TokenKind::Keyword) {
      if (t->text == "true" || t->text == "false" || t->text == "null") {
        ++pos_;
        return leaf(kind::literal, start, pos_);
      }
      if (t->text == "this") {
        ++pos_;
        return leaf(kind::this_expression, start, pos_);
      }
      if (t->text == "super") {
        ++pos_;
        return leaf(kind::super_expression, start, pos_);
      }
      if (is_primitive_type(t->text)) {  // e.g. int.class, int[]::new
        ++pos_;
        while (is_op("[") && is_op("]", 1)) pos_ += 2;
        return leaf(kind::type_identifier, start, pos_);
      }
      if (t->text == "new") return parse_creation();
      if (t->text == "switch") {
        pos_ = start;
        return parse_switch();
      }
    }

    error_here("unexpected token in expression: '" + t->text + "'");
    ++pos_;
    return error_node(start, pos_);
  }

  std::unique_ptr<AstNode> parse_creation() {
    std::size_t start = pos_;
    accept_kw("new");
    consume_type_silent();  // class or element type (with generics/diamond)
    if (is_op("<")) skip_type_arguments();  // diamond `<>` if not consumed
    if (is_op("<") && is_op(">", 1)) pos_ += 2;
    if (is_op("[")) {
      auto n = node(kind::array_creation_expression, start);
      while (is_op("[")) {
        ++pos_;
        if (!is_op("]")) n->add_child(parse_expression());
        expect_op("]");
      }
      if (is_op("{")) n->add_child(parse_array_initializer());
      return finish(std::move(n), start);
    }
    if (is_op("{")) {
      // `new int[]{...}`: the empty [] pair was consumed as part of the type.
      auto n = node(kind::array_creation_expression, start);
      n->add_child(parse_array_initializer());
      return finish(std::move(n), start);
    }
    auto n = node(kind::object_creation_expression, start);
    if (is_op("(")) n->add_child(parse_argument_list());
    else error_here("expected '(' in object creation");
    if (is_op("{")) n->add_child(parse_class_body());  // anonymous class
    return finish(std::move(n), start);
  }
};

// Attaches each comment token as a node in the deepest block-like container
// whose direct children's spans don't swallow it.
const char* kBlockLike[] = {kind::program, kind::class_body, kind::block,
                            kind::switch_block};

bool is_block_like(const AstNode& n) {
  for (const char* k : kBlockLike)
    if (n.kind() == k) return true;
  return false;
}

void attach_comment(AstNode& node, const Token& comment, const std::string* src) {
  Span cs{comment.begin, comment.end};
  for (const auto& child : node.children()) {
    if (child->is_comment()) continue;
    if (child->span().contains(cs)) {
      attach_comment(*child, comment, src);
      return;
    }
  }
  if (is_block_like(node)) {
    const char* k = comment.kind == TokenKind::LineComment ? kind::line_comment
                                                           : kind::block_comment;
    node.insert_child_sorted(std::make_unique<AstNode>(k, cs, src));
  }
}

std::shared_ptr<SyntaxTree> parse_with(std::string source, Diagnostics& diags,
                                       bool fragment) {
  if (!is_valid_utf8(source)) {
    add_diag(diags, DiagCode::UnreadableInput, "input is not valid UTF-8");
    return nullptr;
  }
  LexResult lx = lex(source);
  auto tree = std::make_shared<SyntaxTree>(std::move(source), std::move(lx.tokens));
  for (const auto& e : lx.errors)
    tree->errors().push_back(ParseError{Span{0, 0}, e});

  std::vector<Token> code;
  code.reserve(tree->tokens().size());
  for (const Token& t : tree->tokens())
    if (!t.is_comment()) code.push_back(t);

  Parser parser(tree->source_ptr(), std::move(code));
  std::unique_ptr<AstNode> root =
      fragment ? parser.parse_fragment_block() : parser.parse_program();
  for (auto& e : parser.take_errors()) tree->errors().push_back(std::move(e));

  if (!root) {
    add_diag(diags, DiagCode::FatalParse, "no syntax tree could be produced");
    return nullptr;
  }
  for (const Token& t : tree->tokens())
    if (t.is_comment()) attach_comment(*root, t, tree->source_ptr());
  tree->set_root(std::move(root));
  return tree;
}

}  // namespace

std::shared_ptr<SyntaxTree> parse_source(std::string source, Diagnostics& diags) {
  return parse_with(std::move(source), diags, /*fragment=*/false);
}

std::shared_ptr<SyntaxTree> parse_statement_fragment(std::string fragment,
                                                     Diagnostics& diags) {
  return parse_with(std::move(fragment), diags, /*fragment=*/true);
}

const AstNode* first_statement(const SyntaxTree& fragment_tree) {
  if (!fragment_tree.has_root()) return nullptr;
  for (const auto& c : fragment_tree.root().children())
    if (!c->is_comment()) return c.get();
  return nullptr;
}

}  // namespace jrefine::java
