#include "jrefine/integrate/integrate.hpp"

#include <algorithm>
#include <map>
#include <nlohmann/json.hpp>

#include "jrefine/java/parser.hpp"
#include "jrefine/java/rw.hpp"
#include "jrefine/java/token.hpp"

namespace jrefine::integrate {

namespace {

constexpr std::string_view kWrapPrefix = "class __Wrapper {\n";
constexpr std::string_view kWrapSuffix = "\n}\n";

// Model replies put the code in the last ``` fence; prose may surround it.
std::string strip_code_fences(const std::string& text) {
  std::size_t start = text.rfind("```java\n");
  std::size_t skip = 8;
  if (start == std::string::npos) {
    start = text.rfind("```\n");
    skip = 4;
    // A reply ending in the closing fence would match it; look further back.
    while (start != std::string::npos && text.find("```", start + 3) == std::string::npos)
      start = start >= 1 ? text.rfind("```\n", start - 1) : std::string::npos;
  }
  if (start == std::string::npos) return text;
  start += skip;
  std::size_t end = text.find("\n```", start);
  if (end == std::string::npos) return text.substr(start);
  return text.substr(start, end - start);
}

bool is_block_like(const java::AstNode& n) {
  return n.kind() == java::kind::block || n.kind() == java::kind::switch_block;
}

// Split into lines with trailing \r removed.
std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty() && cur.back() == '\r') cur.pop_back();
  out.push_back(cur);
  return out;
}

std::string trim_left(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b);
}

// Normalizes a comment for re-insertion: every line left-trimmed, `*`
// continuation lines of block comments given their conventional one-space
// lead-in.
std::vector<std::string> comment_lines(const std::string& raw) {
  std::vector<std::string> lines = split_lines(raw);
  std::vector<std::string> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string line = trim_left(lines[i]);
    if (line.empty() && lines.size() > 1) continue;
    if (i > 0 && !line.empty() && line[0] == '*') line = " " + line;
    out.push_back(line);
  }
  return out;
}

std::size_t line_start(const std::string& text, std::size_t pos) {
  std::size_t nl = text.rfind('\n', pos == 0 ? 0 : pos - 1);
  return nl == std::string::npos ? 0 : nl + 1;
}

std::string line_indent(const std::string& text, std::size_t start) {
  std::size_t i = start;
  while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
  return text.substr(start, i - start);
}

bool ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_' || c == '$';
}

// Maximal identifier-character runs in a piece of mapping-line text.
std::vector<std::string> ident_runs(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text + " ") {
    if (ident_char(c)) {
      cur += c;
    } else if (!cur.empty()) {
      out.push_back(cur);
      cur.clear();
    }
  }
  return out;
}

// Raw old/new pairs from the model's mapping text, before validation.
std::vector<std::pair<std::string, std::string>> parse_mapping_pairs(
    const std::string& body) {
  std::vector<std::pair<std::string, std::string>> pairs;

  // A JSON object {"old": "new", ...} is accepted as-is, in document order.
  std::size_t open = body.find('{');
  std::size_t close = body.rfind('}');
  if (open != std::string::npos && close != std::string::npos && open < close) {
    auto parsed = nlohmann::ordered_json::parse(
        body.substr(open, close - open + 1), nullptr, false);
    if (parsed.is_object()) {
      bool all_strings = true;
      for (const auto& [k, v] : parsed.items())
        if (!v.is_string()) all_strings = false;
      if (all_strings && !parsed.empty()) {
        for (const auto& [k, v] : parsed.items())
          pairs.emplace_back(k, v.get<std::string>());
        return pairs;
      }
    }
  }

  for (std::string& line : split_lines(body)) {
    // Unicode arrow → normalized to ->
    for (std::size_t at; (at = line.find("\xE2\x86\x92")) != std::string::npos;)
      line.replace(at, 3, "->");
    std::size_t arrow = line.find("->");
    if (arrow != std::string::npos) {
      std::vector<std::string> left = ident_runs(line.substr(0, arrow));
      std::vector<std::string> right = ident_runs(line.substr(arrow + 2));
      if (!left.empty() && !right.empty())
        pairs.emplace_back(left.back(), right.front());
    } else if (line.find('|') != std::string::npos) {
      std::vector<std::string> runs = ident_runs(line);
      if (runs.size() == 2) pairs.emplace_back(runs[0], runs[1]);
    }
  }
  return pairs;
}

}  // namespace

ParsedMethod parse_method_source(const std::string& method_source,
                                 Diagnostics& diags) {
  ParsedMethod out;
  std::string wrapped;
  wrapped.reserve(method_source.size() + kWrapPrefix.size() + kWrapSuffix.size());
  wrapped.append(kWrapPrefix).append(method_source).append(kWrapSuffix);
  out.tree = java::parse_source(wrapped, diags);
  out.wrap_offset = kWrapPrefix.size();
  if (!out.tree || !out.tree->has_root()) return out;
  std::vector<const java::AstNode*> methods;
  out.tree->root().collect_kind(java::kind::method_declaration, methods);
  if (!methods.empty()) out.method = methods.front();
  return out;
}

ExtractedComments extract_comments(const std::string& llm_output,
                                   Diagnostics& diags) {
  ExtractedComments out;
  std::string code = strip_code_fences(llm_output);
  Diagnostics parse_diags;
  ParsedMethod parsed = parse_method_source(code, parse_diags);
  if (!parsed.method) {
    add_diag(diags, DiagCode::CommentExtractionFailed,
             "model output contains no parseable test method");
    return out;
  }
  out.tree = parsed.tree;

  // Comments before the method declaration are its block comments. Anything
  // after it at class level has nothing to annotate. The enclosing class body
  // is the smallest one containing the method.
  std::vector<const java::AstNode*> bodies;
  parsed.tree->root().collect_kind(java::kind::class_body, bodies);
  const java::AstNode* class_body = nullptr;
  for (const java::AstNode* b : bodies)
    if (b->span().contains(parsed.method->span()) &&
        (!class_body || class_body->span().contains(b->span())))
      class_body = b;
  if (class_body) {
    for (const auto& child : class_body->children()) {
      if (!child->is_comment()) continue;
      if (child->span().begin < parsed.method->span().begin)
        out.block_comments.emplace_back(child->text());
      else
        out.inline_comments.push_back({std::string(child->text()), nullptr});
    }
  }

  // Inline comments live in blocks; their context is the next statement in
  // the same block. Consecutive comment siblings merge into one.
  struct Walker {
    std::vector<InlineComment>& sink;
    void walk(const java::AstNode& n) {
      if (is_block_like(n)) {
        const auto& kids = n.children();
        for (std::size_t i = 0; i < kids.size(); ++i) {
          if (!kids[i]->is_comment()) continue;
          std::string text(kids[i]->text());
          std::size_t j = i + 1;
          while (j < kids.size() && kids[j]->is_comment()) {
            text += "\n";
            text += kids[j]->text();
            ++j;
          }
          const java::AstNode* context = j < kids.size() ? kids[j].get() : nullptr;
          sink.push_back({std::move(text), context});
          i = j - 1;
        }
      }
      for (const auto& child : n.children()) walk(*child);
    }
  };
  Walker{out.inline_comments}.walk(*parsed.method);
  return out;
}

std::vector<const java::AstNode*> statement_candidates(const java::AstNode& method) {
  std::vector<const java::AstNode*> out;
  struct Walker {
    std::vector<const java::AstNode*>& sink;
    void walk(const java::AstNode& n) {
      bool block = is_block_like(n);
      for (const auto& child : n.children()) {
        if (block && !child->is_comment()) sink.push_back(child.get());
        walk(*child);
      }
    }
  };
  if (const java::AstNode* body = method.child_by_kind(java::kind::block))
    Walker{out}.walk(*body);
  return out;
}

const java::AstNode* match_comment_anchor(
    const InlineComment& comment,
    const std::vector<const java::AstNode*>& candidates,
    const std::set<const java::AstNode*>& claimed,
    const sim::CodeBleuConfig& config, double threshold) {
  if (!comment.context) return nullptr;
  for (const java::AstNode* candidate : candidates) {
    if (claimed.count(candidate)) continue;
    if (sim::node_distance(*candidate, *comment.context, config).value >
        threshold)
      return candidate;
  }
  return nullptr;
}

CommentPlan build_comment_plan(const ExtractedComments& extracted,
                               const ParsedMethod& original,
                               const sim::CodeBleuConfig& config,
                               double threshold, Diagnostics& diags) {
  CommentPlan plan;
  plan.block_comments = extracted.block_comments;
  if (!original.method) return plan;

  std::vector<const java::AstNode*> candidates = statement_candidates(*original.method);
  std::set<const java::AstNode*> claimed;
  for (const InlineComment& comment : extracted.inline_comments) {
    if (!comment.context) {
      plan.dropped.push_back({comment.text, "no context"});
      add_diag(diags, DiagCode::CommentDroppedNoContext,
               "inline comment has no following statement");
      continue;
    }
    const java::AstNode* anchor =
        match_comment_anchor(comment, candidates, claimed, config, threshold);
    if (anchor) {
      claimed.insert(anchor);
      plan.placements.push_back({comment.text, anchor});
    } else {
      plan.dropped.push_back({comment.text, "below threshold"});
      add_diag(diags, DiagCode::CommentDroppedBelowThreshold,
               "no statement matched the comment's context");
    }
  }
  return plan;
}

std::string apply_comment_plan(const std::string& method_source,
                               const ParsedMethod& parsed, const CommentPlan& plan) {
  // (position, text) insertions, applied back to front.
  std::vector<std::pair<std::size_t, std::string>> insertions;

  if (!plan.block_comments.empty()) {
    // The declaration's first line has no indent of its own (the surrounding
    // file supplies it); follow-on lines use the indent of the second line.
    std::string indent;
    std::size_t nl = method_source.find('\n');
    if (nl != std::string::npos) indent = line_indent(method_source, nl + 1);
    std::string text;
    for (const std::string& raw : plan.block_comments)
      for (const std::string& line : comment_lines(raw))
        text += line + "\n" + indent;
    insertions.emplace_back(0, std::move(text));
  }

  for (const CommentPlacement& p : plan.placements) {
    std::size_t pos = p.statement->span().begin - parsed.wrap_offset;
    std::size_t start = line_start(method_source, pos);
    std::string indent = line_indent(method_source, start);
    std::string text;
    for (const std::string& line : comment_lines(p.text))
      text += indent + line + "\n";
    insertions.emplace_back(start, std::move(text));
  }

  std::sort(insertions.begin(), insertions.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });
  std::string out = method_source;
  for (const auto& [pos, text] : insertions) out.insert(pos, text);
  return out;
}

MappingExtraction extract_identifier_mapping(const std::string& llm_output,
                                             const ParsedMethod& original,
                                             const std::string& test_name,
                                             Diagnostics& diags) {
  MappingExtraction out;
  if (!original.method) return out;

  java::NameSet declared = java::collect_declared_names(*original.method);
  std::set<std::string, std::less<>> present;
  for (const java::Token& tok : java::token_stream(*original.method, true))
    if (tok.kind == java::TokenKind::Identifier) present.insert(tok.text);

  std::vector<std::pair<std::string, std::string>> raw =
      parse_mapping_pairs(llm_output);
  if (raw.empty()) {
    add_diag(diags, DiagCode::MappingEntryDiscarded,
             "no old -> new pairs found in model output");
    return out;
  }

  std::set<std::string> olds_seen;
  std::set<std::string> news_seen;
  for (auto& [old_name, new_name] : raw) {
    if (!declared.count(old_name) && old_name != test_name) {
      add_diag(diags, DiagCode::MappingEntryDiscarded,
               "old name not declared in the test: " + old_name);
      continue;
    }
    if (!java::is_valid_identifier(new_name)) {
      add_diag(diags, DiagCode::MappingEntryDiscarded,
               "proposed name is not a valid identifier: " + new_name);
      continue;
    }
    if (present.count(new_name)) {
      add_diag(diags, DiagCode::MappingEntryDiscarded,
               "proposed name already occurs in the test: " + new_name);
      continue;
    }
    if (new_name == old_name || !olds_seen.insert(old_name).second) continue;
    if (!news_seen.insert(new_name).second) {
      out.duplicates_found = true;
      out.duplicated_names.push_back(new_name);
      add_diag(diags, DiagCode::DuplicateNewNames,
               "proposed name repeats in the mapping: " + new_name);
      continue;
    }
    if (old_name == test_name)
      out.mapping.test_name = {old_name, new_name};
    else
      out.mapping.entries.emplace_back(old_name, new_name);
  }
  return out;
}

RenameResult apply_renames(const std::string& method_source,
                           const IdentifierMapping& mapping, Diagnostics& diags) {
  std::map<std::string, std::string> table;
  for (const auto& [old_name, new_name] : mapping.entries) table[old_name] = new_name;
  if (mapping.test_name) table[mapping.test_name->first] = mapping.test_name->second;
  if (table.empty()) return {true, method_source};

  std::vector<java::Token> tokens = java::token_stream(method_source, false);
  struct Splice {
    std::size_t begin, end;
    const std::string* text;
  };
  std::vector<Splice> splices;
  const java::Token* prev = nullptr;  // previous non-comment token
  for (const java::Token& tok : tokens) {
    if (tok.kind == java::TokenKind::LineComment ||
        tok.kind == java::TokenKind::BlockComment)
      continue;
    if (tok.kind == java::TokenKind::Identifier) {
      auto hit = table.find(tok.text);
      bool member_position =
          prev && prev->kind == java::TokenKind::Operator &&
          (prev->text == "." || prev->text == "::" || prev->text == "@");
      bool is_test_name =
          mapping.test_name && tok.text == mapping.test_name->first;
      if (hit != table.end() && (!member_position || is_test_name))
        splices.push_back({tok.begin, tok.end, &hit->second});
    }
    prev = &tok;
  }

  std::string renamed = method_source;
  for (auto it = splices.rbegin(); it != splices.rend(); ++it)
    renamed.replace(it->begin, it->end - it->begin, *it->text);

  Diagnostics reparse_diags;
  ParsedMethod check = parse_method_source(renamed, reparse_diags);
  if (!check.method || !check.tree->errors().empty() ||
      java::SyntaxTree::subtree_has_error(check.tree->root())) {
    add_diag(diags, DiagCode::RenameReparseFailed,
             "renamed test does not reparse cleanly; keeping original names");
    return {false, method_source};
  }
  return {true, renamed};
}

std::string rename_test_method(const std::string& method_source,
                               const std::string& new_name, Diagnostics& diags) {
  Diagnostics parse_diags;
  ParsedMethod parsed = parse_method_source(method_source, parse_diags);
  const java::AstNode* name =
      parsed.method ? parsed.method->child_by_kind(java::kind::identifier) : nullptr;
  if (!name) {
    add_diag(diags, DiagCode::RenameReparseFailed,
             "cannot locate the method name to rename");
    return method_source;
  }
  std::string out = method_source;
  out.replace(name->span().begin - parsed.wrap_offset, name->span().size(), new_name);
  return out;
}

bool verify_preservation(const std::string& purified_source,
                         const std::string& refined_source,
                         const IdentifierMapping& mapping) {
  std::map<std::string, std::string> inverse;
  for (const auto& [old_name, new_name] : mapping.entries) inverse[new_name] = old_name;
  if (mapping.test_name) inverse[mapping.test_name->second] = mapping.test_name->first;

  std::vector<java::Token> refined = java::token_stream(refined_source, true);
  std::vector<java::Token> purified = java::token_stream(purified_source, true);
  if (refined.size() != purified.size()) return false;
  for (std::size_t i = 0; i < refined.size(); ++i) {
    if (refined[i].kind != purified[i].kind) return false;
    std::string text = refined[i].text;
    if (refined[i].kind == java::TokenKind::Identifier) {
      auto hit = inverse.find(text);
      if (hit != inverse.end()) text = hit->second;
    }
    if (text != purified[i].text) return false;
  }
  return true;
}

}  // namespace jrefine::integrate
