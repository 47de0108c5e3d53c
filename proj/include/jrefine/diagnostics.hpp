#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace jrefine {

// Machine-readable diagnostic codes. Stable strings: they appear in the JSON
// report and are matched by tests.
enum class DiagCode {
  UnreadableInput,
  FatalParse,
  ParseErrorInTest,
  UnsupportedStatement,
  EmptyInput,
  NoAssertions,
  TryCatchInTest,
  ProviderUnavailable,
  ProviderTimeout,
  ProviderBadResponse,
  CommentExtractionFailed,
  CommentDroppedNoContext,
  CommentDroppedBelowThreshold,
  MappingEntryDiscarded,
  DuplicateNewNames,
  RenameReparseFailed,
  PreservationFailed,
  CompileCommandNotFound,
  CompileCheckFailed,
  ConfigError,
  IoError,
};

const char* diag_code_name(DiagCode code);

struct Diagnostic {
  DiagCode code;
  std::string message;
  // Optional location info; empty/zero when not applicable.
  std::string file;
  std::size_t offset = 0;
};

using Diagnostics = std::vector<Diagnostic>;

inline void add_diag(Diagnostics& out, DiagCode code, std::string message,
                     std::string file = {}, std::size_t offset = 0) {
  out.push_back(Diagnostic{code, std::move(message), std::move(file), offset});
}

}  // namespace jrefine
