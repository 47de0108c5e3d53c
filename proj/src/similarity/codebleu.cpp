#include "jrefine/similarity/codebleu.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>
#include <vector>

#include "jrefine/java/parser.hpp"

namespace jrefine::sim {

namespace {

using java::Token;
using java::TokenKind;

// n-grams keyed as '\x1f'-joined token texts; value pairs are
// (count, contains_keyword).
struct NgramCounts {
  std::unordered_map<std::string, int> counts;
  std::unordered_map<std::string, bool> has_keyword;
  int total = 0;
};

NgramCounts count_ngrams(const std::vector<Token>& toks, int n) {
  NgramCounts out;
  if (static_cast<int>(toks.size()) < n) return out;
  for (std::size_t i = 0; i + n <= toks.size(); ++i) {
    std::string key;
    bool kw = false;
    for (int j = 0; j < n; ++j) {
      if (j) key += '\x1f';
      key += toks[i + j].text;
      kw = kw || toks[i + j].kind == TokenKind::Keyword;
    }
    out.counts[key] += 1;
    out.has_keyword[key] = kw;
    ++out.total;
  }
  return out;
}

// Modified n-gram precision with optional keyword weighting; add-one
// smoothing for n > 1 keeps statement-sized texts from collapsing to zero.
double precision(const std::vector<Token>& cand, const std::vector<Token>& ref,
                 int n, double kw_weight) {
  NgramCounts c = count_ngrams(cand, n);
  NgramCounts r = count_ngrams(ref, n);
  double matched = 0.0;
  double total = 0.0;
  for (const auto& [key, count] : c.counts) {
    double w = (kw_weight > 1.0 && c.has_keyword.at(key)) ? kw_weight : 1.0;
    total += w * count;
    auto it = r.counts.find(key);
    if (it != r.counts.end()) matched += w * std::min(count, it->second);
  }
  if (n > 1) {
    matched += 1.0;
    total += 1.0;
  }
  if (total <= 0.0) return 0.0;
  return matched / total;
}

double bleu(const std::vector<Token>& cand, const std::vector<Token>& ref,
            int max_n, double kw_weight) {
  if (cand.empty() || ref.empty()) return 0.0;
  double log_sum = 0.0;
  for (int n = 1; n <= max_n; ++n) {
    double p = precision(cand, ref, n, kw_weight);
    if (p <= 0.0) return 0.0;  // only possible at n=1 (no smoothing there)
    log_sum += std::log(p);
  }
  double geo = std::exp(log_sum / max_n);
  double bp = cand.size() >= ref.size()
                  ? 1.0
                  : std::exp(1.0 - static_cast<double>(ref.size()) /
                                       static_cast<double>(cand.size()));
  return std::min(1.0, bp * geo);
}

// Serializes every subtree (kind structure only, leaf texts ignored) into a
// multiset; the match ratio is how much of the reference's multiset the
// candidate reproduces.
void collect_subtrees(const java::AstNode& node,
                      std::unordered_map<std::string, int>& out, std::string* repr) {
  std::string mine = node.kind();
  mine += '(';
  bool first = true;
  for (const auto& c : node.children()) {
    if (c->is_comment()) continue;
    std::string child_repr;
    collect_subtrees(*c, out, &child_repr);
    if (!first) mine += ',';
    mine += child_repr;
    first = false;
  }
  mine += ')';
  out[mine] += 1;
  if (repr) *repr = std::move(mine);
}

std::shared_ptr<java::SyntaxTree> parse_fragment(std::string_view text) {
  Diagnostics scratch;
  return java::parse_statement_fragment(std::string(text), scratch);
}

double ast_match(std::string_view cand, std::string_view ref) {
  auto ct = parse_fragment(cand);
  auto rt = parse_fragment(ref);
  if (!ct || !rt || !ct->has_root() || !rt->has_root()) return 0.0;
  std::unordered_map<std::string, int> cs, rs;
  collect_subtrees(ct->root(), cs, nullptr);
  collect_subtrees(rt->root(), rs, nullptr);
  int total = 0, matched = 0;
  for (const auto& [key, count] : rs) {
    total += count;
    auto it = cs.find(key);
    if (it != cs.end()) matched += std::min(count, it->second);
  }
  if (total == 0) return 0.0;
  return static_cast<double>(matched) / total;
}

// Def-use pairs (writer, reader) of each top-level statement, as a multiset.
std::unordered_map<std::string, int> defuse_pairs(const java::SyntaxTree& tree) {
  std::unordered_map<std::string, int> out;
  java::RwConfig cfg;
  for (const auto& stmt : tree.root().children()) {
    if (stmt->is_comment()) continue;
    java::RwSets rw = java::extract_rw_sets(*stmt, cfg);
    for (const auto& w : rw.writes)
      for (const auto& r : rw.reads) out[w + '\x1f' + r] += 1;
  }
  return out;
}

double dataflow_match(std::string_view cand, std::string_view ref) {
  auto ct = parse_fragment(cand);
  auto rt = parse_fragment(ref);
  std::unordered_map<std::string, int> cp, rp;
  if (ct && ct->has_root()) cp = defuse_pairs(*ct);
  if (rt && rt->has_root()) rp = defuse_pairs(*rt);
  int ref_total = 0;
  for (const auto& [k, v] : rp) ref_total += v;
  int cand_total = 0;
  for (const auto& [k, v] : cp) cand_total += v;
  if (ref_total == 0 || cand_total == 0)
    return (ref_total == 0 && cand_total == 0) ? 1.0 : 0.0;
  int matched = 0;
  for (const auto& [key, count] : rp) {
    auto it = cp.find(key);
    if (it != cp.end()) matched += std::min(count, it->second);
  }
  return static_cast<double>(matched) / ref_total;
}

}  // namespace

SimilarityScore codebleu(std::string_view candidate, std::string_view reference,
                         const CodeBleuConfig& config, Diagnostics* diags) {
  auto cand = java::token_stream(candidate, /*strip_comments=*/true);
  auto ref = java::token_stream(reference, /*strip_comments=*/true);
  if (cand.empty() || ref.empty()) {
    if (diags)
      add_diag(*diags, DiagCode::EmptyInput, "codebleu: empty input scores 0");
    return SimilarityScore{0.0};
  }
  if (cand == ref) return SimilarityScore{1.0};

  double b = bleu(cand, ref, config.max_ngram, /*kw_weight=*/1.0);
  double wb = bleu(cand, ref, config.max_ngram, config.keyword_weight);
  double a = ast_match(candidate, reference);
  double d = dataflow_match(candidate, reference);
  double v = config.alpha * b + config.beta * wb + config.gamma * a + config.delta * d;
  return SimilarityScore{std::clamp(v, 0.0, 1.0)};
}

SimilarityScore node_distance(const java::AstNode& v1, const java::AstNode& v2,
                              const CodeBleuConfig& config) {
  if (v1.kind() != v2.kind()) return SimilarityScore{0.0};
  return codebleu(v1.text(), v2.text(), config);
}

}  // namespace jrefine::sim
