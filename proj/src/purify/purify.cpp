#include "jrefine/purify/purify.hpp"

#include <algorithm>
#include <deque>

#include "jrefine/java/parser.hpp"

namespace jrefine::purify {

using java::AstNode;
using java::SyntaxTree;
using java::Token;

namespace {

bool is_control_kind(const std::string& k) {
  namespace nk = java::kind;
  return k == nk::if_statement || k == nk::for_statement ||
         k == nk::enhanced_for_statement || k == nk::while_statement ||
         k == nk::do_statement || k == nk::switch_statement ||
         k == nk::try_statement || k == nk::synchronized_statement ||
         k == nk::labeled_statement || k == nk::block;
}

bool subtree_contains_assertion(const AstNode& node) {
  if (java::is_assertion_statement(node)) return true;
  for (const auto& c : node.children())
    if (subtree_contains_assertion(*c)) return true;
  return false;
}

bool subtree_contains_try(const AstNode& node) {
  if (node.kind() == java::kind::try_statement) return true;
  for (const auto& c : node.children())
    if (subtree_contains_try(*c)) return true;
  return false;
}

struct Atomizer {
  const java::RwConfig& cfg;
  std::shared_ptr<const SyntaxTree> tree;
  Diagnostics& diags;

  // Builds a synthetic Normal statement from rendered text, parsing it into
  // its own fragment tree for a valid node + R/W sets.
  AtomizedStatement synthesize(std::string text) {
    AtomizedStatement atom;
    atom.type = StatementType::Normal;
    atom.text = text;
    Diagnostics local;
    auto frag = java::parse_statement_fragment(std::move(text), local);
    if (frag && frag->has_root()) {
      atom.owner = frag;
      atom.node = java::first_statement(*frag);
    }
    if (atom.node) {
      auto rw = java::extract_rw_sets(*atom.node, cfg);
      atom.reads = std::move(rw.reads);
      atom.writes = std::move(rw.writes);
    } else {
      add_diag(diags, DiagCode::UnsupportedStatement,
               "could not reparse synthesized statement: " + atom.text);
    }
    return atom;
  }

  AtomizedStatement pass_through(const AstNode& node) {
    AtomizedStatement atom;
    atom.type = StatementType::Normal;
    atom.text = std::string(node.text());
    atom.owner = tree;
    atom.node = &node;
    auto rw = java::extract_rw_sets(node, cfg);
    atom.reads = std::move(rw.reads);
    atom.writes = std::move(rw.writes);
    atom.contains_assertion = java::is_assertion_statement(node);
    return atom;
  }

  void atomize_into(const AstNode& stmt, std::vector<AtomizedStatement>& out) {
    const std::string& k = stmt.kind();
    namespace nk = java::kind;

    if (stmt.is_comment() || k == nk::empty_statement) return;

    if (k == nk::local_variable_declaration) {
      std::vector<const AstNode*> declarators;
      for (const auto& c : stmt.children())
        if (c->kind() == nk::variable_declarator) declarators.push_back(c.get());
      if (declarators.size() > 1) {
        // `final int a = 1, b = 2;` -> `final int a = 1;` + `final int b = 2;`
        std::string_view src = tree->source();
        std::size_t head_begin = stmt.span().begin;
        std::size_t head_end = declarators.front()->span().begin;
        std::string head(src.substr(head_begin, head_end - head_begin));
        for (const AstNode* d : declarators)
          out.push_back(synthesize(head + std::string(d->text()) + ";"));
        return;
      }
      out.push_back(pass_through(stmt));
      return;
    }

    if (k == nk::expression_statement && !stmt.children().empty()) {
      const AstNode* e = stmt.children()[0].get();
      if (e->kind() == nk::assignment_expression) {
        // Collect a chain of *plain* '=' assignments: a = b = c = rhs.
        std::vector<const AstNode*> lvalues;
        const AstNode* cur = e;
        bool all_plain = true;
        while (cur->kind() == nk::assignment_expression && cur->children().size() == 2) {
          if (assignment_is_plain(*cur)) {
            lvalues.push_back(cur->children()[0].get());
            cur = cur->children()[1].get();
          } else {
            all_plain = false;
            break;
          }
        }
        if (all_plain && lvalues.size() > 1) {
          // rightmost first: c = rhs; b = c; a = b;
          out.push_back(synthesize(std::string(lvalues.back()->text()) + " = " +
                                   std::string(cur->text()) + ";"));
          for (std::size_t i = lvalues.size() - 1; i-- > 0;)
            out.push_back(synthesize(std::string(lvalues[i]->text()) + " = " +
                                     std::string(lvalues[i + 1]->text()) + ";"));
          return;
        }
      }
      out.push_back(pass_through(stmt));
      return;
    }

    if (is_control_kind(k)) {
      AtomizedStatement atom;
      atom.type = StatementType::Control;
      atom.control_flag = true;
      atom.text = std::string(stmt.text());
      atom.owner = tree;
      atom.node = &stmt;
      auto rw = java::extract_rw_sets(stmt, cfg);
      atom.reads = std::move(rw.reads);
      atom.writes = std::move(rw.writes);
      atom.contains_assertion = subtree_contains_assertion(stmt);
      atom.body.emplace();
      collect_body(stmt, *atom.body);
      atom.body_empty = atom.body->empty();
      out.push_back(std::move(atom));
      return;
    }

    // return/throw/break/continue/assert/ERROR/local class/...: atomic as-is.
    out.push_back(pass_through(stmt));
  }

  static bool assignment_is_plain(const AstNode& a) {
    // Lex the gap between the operands; the first operator is '=' for plain.
    const AstNode& l = *a.children()[0];
    const AstNode& r = *a.children()[1];
    std::string_view t = a.text();
    std::size_t from = l.span().end - a.span().begin;
    std::size_t to = r.span().begin - a.span().begin;
    if (from >= to || to > t.size()) return false;
    auto toks = java::token_stream(t.substr(from, to - from), true);
    return !toks.empty() && toks.front().text == "=";
  }

  // Gathers the executable statements nested in a control structure, in
  // source order, atomizing them recursively.
  void collect_body(const AstNode& control, std::vector<AtomizedStatement>& out) {
    namespace nk = java::kind;
    const std::string& k = control.kind();
    auto from_block = [&](const AstNode& blk) {
      for (const auto& c : blk.children()) atomize_into(*c, out);
    };

    if (k == nk::block) {
      from_block(control);
      return;
    }
    if (k == nk::if_statement) {
      for (std::size_t i = 1; i < control.children().size(); ++i)
        body_statement(*control.children()[i], out);
      return;
    }
    if (k == nk::while_statement && control.children().size() >= 2) {
      body_statement(*control.children()[1], out);
      return;
    }
    if (k == nk::do_statement && !control.children().empty()) {
      body_statement(*control.children()[0], out);
      return;
    }
    if (k == nk::for_statement || k == nk::enhanced_for_statement) {
      if (!control.children().empty())
        body_statement(*control.children().back(), out);
      return;
    }
    if (k == nk::switch_statement) {
      if (const AstNode* blk = control.child_by_kind(nk::switch_block))
        from_block(*blk);
      return;
    }
    if (k == nk::try_statement) {
      for (const auto& c : control.children()) {
        if (c->kind() == nk::block) from_block(*c);
        else if (c->kind() == nk::catch_clause || c->kind() == nk::finally_clause) {
          if (const AstNode* blk = c->child_by_kind(nk::block)) from_block(*blk);
        }
      }
      return;
    }
    if (k == nk::synchronized_statement || k == nk::labeled_statement) {
      for (const auto& c : control.children())
        if (is_control_kind(c->kind()) || c->kind() == nk::expression_statement ||
            c->kind() == nk::local_variable_declaration)
          body_statement(*c, out);
      return;
    }
  }

  void body_statement(const AstNode& stmt, std::vector<AtomizedStatement>& out) {
    if (stmt.kind() == java::kind::block) {
      for (const auto& c : stmt.children()) atomize_into(*c, out);
    } else {
      atomize_into(stmt, out);
    }
  }
};

bool intersects(const java::NameSet& a, const java::NameSet& b) {
  // both sorted: linear merge walk
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) ++ia;
    else if (*ib < *ia) ++ib;
    else return true;
  }
  return false;
}

}  // namespace

std::vector<AtomizedStatement> atomize_statements(
    const std::shared_ptr<const SyntaxTree>& tree, const AstNode& block,
    const java::RwConfig& cfg, Diagnostics& diags) {
  Atomizer atomizer{cfg, tree, diags};
  std::vector<AtomizedStatement> out;
  for (const auto& c : block.children()) atomizer.atomize_into(*c, out);
  return out;
}

DependencyGraph build_dependency_graph(const TestPrefix& prefix,
                                       const Assertion& assertion) {
  DependencyGraph g;
  auto add_statement = [&g](const AtomizedStatement& s) {
    g.vertices.insert(s.reads.begin(), s.reads.end());
    g.vertices.insert(s.writes.begin(), s.writes.end());
    for (const std::string& w : s.writes)
      for (const std::string& r : s.reads) g.edges[w].insert(r);
  };
  for (const AtomizedStatement& s : prefix.statements) add_statement(s);
  add_statement(assertion.statement);
  return g;
}

TestPrefix slice_for_assertion(const TestPrefix& prefix, const Assertion& assertion,
                               const DependencyGraph& graph) {
  // Dependent set: names reachable from the assertion's reads (inclusive).
  std::set<std::string> depen(assertion.statement.reads.begin(),
                              assertion.statement.reads.end());
  std::deque<std::string> frontier(depen.begin(), depen.end());
  while (!frontier.empty()) {
    std::string v = std::move(frontier.front());
    frontier.pop_front();
    auto it = graph.edges.find(v);
    if (it == graph.edges.end()) continue;
    for (const std::string& next : it->second)
      if (depen.insert(next).second) frontier.push_back(next);
  }

  TestPrefix out;
  for (const AtomizedStatement& s : prefix.statements) {
    if (s.control_flag) {
      if (s.body_empty) continue;  // empty-body controls never survive
      if (s.contains_assertion || intersects(s.writes, depen))
        out.statements.push_back(s);
      continue;
    }
    if (intersects(s.writes, depen)) out.statements.push_back(s);
  }
  return out;
}

std::vector<Token> prefix_token_stream(const TestPrefix& prefix) {
  std::vector<Token> out;
  for (const AtomizedStatement& s : prefix.statements) {
    auto toks = java::token_stream(s.text, /*strip_comments=*/true);
    out.insert(out.end(), std::make_move_iterator(toks.begin()),
               std::make_move_iterator(toks.end()));
  }
  return out;
}

std::vector<PurifiedTest> merge_by_prefix(const std::vector<PurifiedTest>& tests) {
  using Key = std::vector<std::pair<int, std::string>>;
  std::map<Key, std::size_t> group_of;
  std::vector<PurifiedTest> out;
  for (const PurifiedTest& t : tests) {
    Key key;
    for (const Token& tok : prefix_token_stream(t.prefix))
      key.emplace_back(static_cast<int>(tok.kind), tok.text);
    auto [it, inserted] = group_of.emplace(std::move(key), out.size());
    if (inserted) {
      out.push_back(t);
    } else {
      PurifiedTest& g = out[it->second];
      g.assertions.insert(g.assertions.end(), t.assertions.begin(),
                          t.assertions.end());
      g.had_try_catch = g.had_try_catch || t.had_try_catch;
    }
  }
  for (PurifiedTest& g : out)
    std::sort(g.assertions.begin(), g.assertions.end(),
              [](const Assertion& a, const Assertion& b) { return a.ordinal < b.ordinal; });
  return out;
}

std::vector<PurifiedTest> purify(const java::TestMethod& test,
                                 const java::RwConfig& cfg, Diagnostics& diags) {
  auto atoms = atomize_statements(test.tree, *test.body, cfg, diags);

  std::vector<Assertion> assertions;
  TestPrefix full_prefix;
  for (AtomizedStatement& a : atoms) {
    if (!a.control_flag && a.contains_assertion) {
      Assertion as;
      as.ordinal = assertions.size();
      as.statement = std::move(a);
      assertions.push_back(std::move(as));
    } else {
      full_prefix.statements.push_back(std::move(a));
    }
  }
  if (assertions.empty()) {
    add_diag(diags, DiagCode::NoAssertions,
             "test '" + test.name + "' has no assertion statements");
    return {};
  }

  bool had_try = subtree_contains_try(*test.body);

  std::vector<PurifiedTest> singles;
  singles.reserve(assertions.size());
  for (const Assertion& a : assertions) {
    PurifiedTest t;
    t.origin_test = test.name;
    t.origin_class = test.class_name;
    t.had_try_catch = had_try;
    DependencyGraph g = build_dependency_graph(full_prefix, a);
    t.prefix = slice_for_assertion(full_prefix, a, g);
    t.assertions.push_back(a);
    singles.push_back(std::move(t));
  }
  return merge_by_prefix(singles);
}

std::string render_purified(const PurifiedTest& test, const java::TestMethod& original,
                            std::string_view method_name) {
  const std::string& src = original.tree->source();
  std::size_t decl_begin = original.declaration->span().begin;
  const java::Span& name = original.name_node->span();
  std::size_t body_begin = original.body->span().begin;

  // Indentation of the line the declaration starts on.
  std::size_t line_start = src.rfind('\n', decl_begin);
  line_start = line_start == std::string::npos ? 0 : line_start + 1;
  std::string indent;
  for (std::size_t i = line_start; i < decl_begin; ++i)
    indent += (src[i] == '\t') ? '\t' : ' ';

  std::string head = src.substr(decl_begin, name.begin - decl_begin);
  head += method_name;
  head += src.substr(name.end, body_begin - name.end);

  std::string body = "{\n";
  auto emit = [&](const std::string& text) {
    std::size_t pos = 0;
    bool first = true;
    while (pos <= text.size()) {
      std::size_t nl = text.find('\n', pos);
      std::string line = text.substr(pos, nl == std::string::npos ? std::string::npos
                                                                  : nl - pos);
      if (first) {
        body += indent + "    " + line;
        first = false;
      } else {
        body += line;  // continuation lines keep their original indentation
      }
      if (nl == std::string::npos) break;
      body += '\n';
      pos = nl + 1;
    }
    body += '\n';
  };
  for (const AtomizedStatement& s : test.prefix.statements) emit(s.text);
  for (const Assertion& a : test.assertions) emit(a.statement.text);
  body += indent + "}";
  return head + body;
}

}  // namespace jrefine::purify
