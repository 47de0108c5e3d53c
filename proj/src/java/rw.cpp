#include "jrefine/java/rw.hpp"

#include <algorithm>
#include <cctype>
#include <optional>

namespace jrefine::java {

namespace {

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

bool is_statement_kind(const std::string& k) {
  return k == kind::block || k == kind::local_variable_declaration ||
         k == kind::expression_statement || k == kind::if_statement ||
         k == kind::for_statement || k == kind::enhanced_for_statement ||
         k == kind::while_statement || k == kind::do_statement ||
         k == kind::switch_statement || k == kind::switch_block ||
         k == kind::try_statement || k == kind::catch_clause ||
         k == kind::finally_clause || k == kind::return_statement ||
         k == kind::throw_statement || k == kind::break_statement ||
         k == kind::continue_statement || k == kind::assert_statement ||
         k == kind::synchronized_statement || k == kind::labeled_statement ||
         k == kind::empty_statement || k == kind::class_declaration;
}

// Operator text of an assignment_expression ('=', '+=', ...), recovered by
// lexing the slice between the two operand children.
std::string assignment_operator(const AstNode& a) {
  if (a.children().size() < 2) return "=";
  const AstNode& l = *a.children()[0];
  const AstNode& r = *a.children()[1];
  std::string_view t = a.text();
  std::size_t from = l.span().end - a.span().begin;
  std::size_t to = r.span().begin - a.span().begin;
  if (from >= to || to > t.size()) return "=";
  auto toks = token_stream(t.substr(from, to - from), true);
  return toks.empty() ? "=" : toks.front().text;
}

struct Collector {
  explicit Collector(const RwConfig& c) : cfg(c) {}

  const RwConfig& cfg;
  NameSet reads;
  NameSet writes;

  bool is_modifying(std::string_view name) const {
    std::string lower = to_lower(name);
    for (const std::string& kw : cfg.modification_keywords)
      if (lower.rfind(to_lower(kw), 0) == 0) return true;
    return false;
  }

  // Root name of an lvalue-ish chain (a.b[i].c -> "a"); nullopt when the
  // chain is rooted in a call, literal, or `this`.
  std::optional<std::string> base_name(const AstNode& e) const {
    const std::string& k = e.kind();
    if (k == kind::identifier) return std::string(e.text());
    if (k == kind::field_access || k == kind::array_access) {
      if (!e.children().empty()) return base_name(*e.children()[0]);
      return std::nullopt;
    }
    if (k == kind::parenthesized_expression && !e.children().empty())
      return base_name(*e.children()[0]);
    if (k == kind::cast_expression && e.children().size() == 2)
      return base_name(*e.children()[1]);
    return std::nullopt;
  }

  void lambda_like(const AstNode& body) {
    // Everything named inside a deferred body counts as a read of the
    // enclosing statement: the code may run later, so its reads must keep
    // their producers alive, but nothing is written *now*.
    Collector sub(cfg);
    if (is_statement_kind(body.kind())) sub.statement(body);
    else sub.read_expr(body);
    reads.insert(sub.reads.begin(), sub.reads.end());
    reads.insert(sub.writes.begin(), sub.writes.end());
  }

  void conservative_raw(const AstNode& node) {
    for (const Token& t : token_stream(node, true))
      if (t.kind == TokenKind::Identifier) {
        reads.insert(t.text);
        writes.insert(t.text);
      }
  }

  void write_lvalue(const AstNode& e) {
    const std::string& k = e.kind();
    if (k == kind::identifier) {
      writes.insert(std::string(e.text()));
      return;
    }
    if (k == kind::field_access) {
      if (auto base = base_name(e)) writes.insert(*base);
      return;
    }
    if (k == kind::array_access && e.children().size() == 2) {
      if (auto base = base_name(*e.children()[0])) writes.insert(*base);
      read_expr(*e.children()[1]);  // index is evaluated
      return;
    }
    if (k == kind::parenthesized_expression && !e.children().empty()) {
      write_lvalue(*e.children()[0]);
      return;
    }
    if (k == kind::cast_expression && e.children().size() == 2) {
      write_lvalue(*e.children()[1]);
      return;
    }
    read_expr(e);  // unusual target: at least record its reads
  }

  void handle_assignment(const AstNode& a) {
    if (a.children().size() < 2) return;
    const AstNode& lhs = *a.children()[0];
    const AstNode& rhs = *a.children()[1];
    write_lvalue(lhs);
    if (assignment_operator(a) != "=") read_expr(lhs);  // compound also reads
    if (rhs.kind() == kind::assignment_expression) handle_assignment(rhs);
    else read_expr(rhs);
  }

  void read_expr(const AstNode& e) {
    const std::string& k = e.kind();
    if (k == kind::identifier) {
      reads.insert(std::string(e.text()));
      return;
    }
    if (k == kind::type_identifier || k == kind::literal ||
        k == kind::this_expression || k == kind::super_expression ||
        k == "class_literal" || k == kind::modifiers || k == kind::annotation ||
        k == kind::empty_statement) {
      return;  // no data names here (class literals name types, not values)
    }
    if (k == kind::field_access) {
      if (!e.children().empty()) read_expr(*e.children()[0]);
      return;  // member name child carries no free name
    }
    if (k == kind::method_invocation) {
      const auto& ch = e.children();
      if (ch.size() < 2) return;
      const AstNode* object = ch.size() == 3 ? ch[0].get() : nullptr;
      const AstNode& name = *ch[ch.size() - 2];
      const AstNode& args = *ch[ch.size() - 1];
      if (object) read_expr(*object);
      for (const auto& arg : args.children()) read_expr(*arg);
      if (is_modifying(name.text())) {
        if (object) {
          if (auto base = base_name(*object)) writes.insert(*base);
        }
        for (const auto& arg : args.children()) {
          Collector sub(cfg);
          sub.read_expr(*arg);
          writes.insert(sub.reads.begin(), sub.reads.end());
        }
      }
      return;
    }
    if (k == kind::array_access) {
      for (const auto& c : e.children()) read_expr(*c);
      return;
    }
    if (k == kind::assignment_expression) {
      handle_assignment(e);
      return;
    }
    if (k == kind::update_expression) {
      if (!e.children().empty()) {
        const AstNode& operand = *e.children()[0];
        if (auto base = base_name(operand)) {
          writes.insert(*base);
          reads.insert(*base);
        }
        read_expr(operand);
      }
      return;
    }
    if (k == kind::lambda_expression) {
      if (!e.children().empty()) lambda_like(*e.children().back());
      return;
    }
    if (k == kind::method_reference) {
      if (!e.children().empty()) read_expr(*e.children()[0]);
      return;
    }
    if (k == kind::cast_expression) {
      if (e.children().size() == 2) read_expr(*e.children()[1]);
      return;
    }
    if (k == kind::instanceof_expression) {
      if (!e.children().empty()) read_expr(*e.children()[0]);
      return;  // the pattern binding declares, it doesn't read
    }
    if (k == kind::object_creation_expression) {
      for (const auto& c : e.children()) {
        if (c->kind() == kind::argument_list) {
          for (const auto& arg : c->children()) read_expr(*arg);
        } else if (c->kind() == kind::class_body) {
          lambda_like(*c);  // anonymous class body: deferred reads
        } else {
          read_expr(*c);
        }
      }
      return;
    }
    if (k == kind::variable_declarator) {
      return;  // bindings (instanceof patterns) introduce, not read
    }
    if (k == kind::error) {
      conservative_raw(e);
      return;
    }
    // binary/unary/ternary/paren/argument_list/array_initializer/
    // array_creation/switch and anything else expression-shaped: recurse.
    for (const auto& c : e.children()) {
      if (is_statement_kind(c->kind())) statement(*c);
      else read_expr(*c);
    }
  }

  void statement(const AstNode& s) {
    const std::string& k = s.kind();
    if (k == kind::error) {
      conservative_raw(s);
      return;
    }
    if (k == kind::local_variable_declaration) {
      for (const auto& c : s.children()) {
        if (c->kind() != kind::variable_declarator) continue;
        const auto& parts = c->children();
        if (!parts.empty() && parts[0]->kind() == kind::identifier)
          writes.insert(std::string(parts[0]->text()));
        if (parts.size() > 1) read_expr(*parts[1]);
      }
      return;
    }
    if (k == kind::expression_statement) {
      if (!s.children().empty()) read_expr(*s.children()[0]);
      return;
    }
    if (k == kind::enhanced_for_statement) {
      for (const auto& c : s.children()) {
        if (c->kind() == kind::variable_declarator) {
          if (!c->children().empty())
            writes.insert(std::string(c->children()[0]->text()));
        } else if (is_statement_kind(c->kind())) {
          statement(*c);
        } else if (c->kind() != kind::type_identifier) {
          read_expr(*c);
        }
      }
      return;
    }
    if (k == kind::catch_clause) {
      for (const auto& c : s.children()) {
        if (c->kind() == kind::variable_declarator) {
          if (!c->children().empty())
            writes.insert(std::string(c->children()[0]->text()));
        } else {
          statement(*c);
        }
      }
      return;
    }
    if (k == kind::break_statement || k == kind::continue_statement ||
        k == kind::empty_statement || k == kind::class_declaration) {
      return;  // labels and local type declarations carry no tracked names
    }
    if (s.is_comment()) return;
    // Everything else (blocks, if/for/while/do/switch/try/sync/labeled,
    // return/throw/assert): statements recurse, expressions read.
    for (const auto& c : s.children()) {
      if (is_statement_kind(c->kind())) statement(*c);
      else if (c->kind() != kind::type_identifier && c->kind() != kind::modifiers)
        read_expr(*c);
    }
  }
};

}  // namespace

RwSets extract_rw_sets(const AstNode& statement, const RwConfig& cfg) {
  Collector c(cfg);
  c.statement(statement);
  return RwSets{std::move(c.reads), std::move(c.writes)};
}

NameSet collect_declared_names(const AstNode& node) {
  NameSet out;
  std::vector<const AstNode*> declarators;
  node.collect_kind(kind::variable_declarator, declarators);
  for (const AstNode* d : declarators)
    if (!d->children().empty() && d->children()[0]->kind() == kind::identifier)
      out.insert(std::string(d->children()[0]->text()));
  std::vector<const AstNode*> params;
  node.collect_kind(kind::formal_parameter, params);
  for (const AstNode* p : params)
    if (const AstNode* id = p->child_by_kind(kind::identifier))
      out.insert(std::string(id->text()));
  return out;
}

NameSet mentioned_names(const AstNode& node) {
  NameSet out;
  std::vector<const AstNode*> ids;
  node.collect_kind(kind::identifier, ids);
  for (const AstNode* id : ids) out.insert(std::string(id->text()));
  return out;
}

std::string invocation_name(const AstNode& invocation) {
  const auto& ch = invocation.children();
  if (invocation.kind() != kind::method_invocation || ch.size() < 2) return {};
  return std::string(ch[ch.size() - 2]->text());
}

bool is_assertion_statement(const AstNode& statement) {
  if (statement.kind() != kind::expression_statement) return false;
  const AstNode* e = statement.children().empty() ? nullptr : statement.children()[0].get();
  while (e && e->kind() == kind::parenthesized_expression && !e->children().empty())
    e = e->children()[0].get();
  while (e && e->kind() == kind::method_invocation) {
    std::string name = invocation_name(*e);
    if (name.rfind("assert", 0) == 0 || name == "fail" || name == "verify")
      return true;
    // walk down the receiver chain: verify(mock).something()
    e = e->children().size() == 3 ? e->children()[0].get() : nullptr;
    while (e && (e->kind() == kind::field_access || e->kind() == kind::array_access ||
                 e->kind() == kind::parenthesized_expression))
      e = e->children().empty() ? nullptr : e->children()[0].get();
  }
  return false;
}

}  // namespace jrefine::java
