#pragma once

#include <string>
#include <string_view>

#include "jrefine/diagnostics.hpp"
#include "jrefine/java/ast.hpp"
#include "jrefine/java/rw.hpp"

namespace jrefine::sim {

struct SimilarityScore {
  double value = 0.0;
};

// Four-component weighted code similarity. Weights must sum to 1 (validated
// where configs are loaded); with that, the score is a convex combination of
// components that each live in [0,1].
struct CodeBleuConfig {
  double alpha = 0.25;          // plain n-gram BLEU
  double beta = 0.25;           // keyword-weighted BLEU
  double gamma = 0.25;          // AST subtree match
  double delta = 0.25;          // dataflow (def-use pair) match
  int max_ngram = 4;
  double keyword_weight = 5.0;  // multiplier for n-grams containing a keyword
};

// candidate/reference are Java fragments (statements or expressions); they
// are lexed with comments stripped. Identical token streams score exactly
// 1.0. Empty input (no tokens on either side) scores 0 with an EmptyInput
// diagnostic when `diags` is given.
SimilarityScore codebleu(std::string_view candidate, std::string_view reference,
                         const CodeBleuConfig& config, Diagnostics* diags = nullptr);

// The comment-anchoring distance: 0 when node kinds differ, else codebleu of
// the node texts.
SimilarityScore node_distance(const java::AstNode& v1, const java::AstNode& v2,
                              const CodeBleuConfig& config);

}  // namespace jrefine::sim
