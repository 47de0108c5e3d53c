#include "jrefine/diagnostics.hpp"

namespace jrefine {

const char* diag_code_name(DiagCode code) {
  switch (code) {
    case DiagCode::UnreadableInput: return "UnreadableInput";
    case DiagCode::FatalParse: return "FatalParse";
    case DiagCode::ParseErrorInTest: return "ParseErrorInTest";
    case DiagCode::UnsupportedStatement: return "UnsupportedStatement";
    case DiagCode::EmptyInput: return "EmptyInput";
    case DiagCode::NoAssertions: return "NoAssertions";
    case DiagCode::TryCatchInTest: return "TryCatchInTest";
    case DiagCode::ProviderUnavailable: return "ProviderUnavailable";
    case DiagCode::ProviderTimeout: return "ProviderTimeout";
    case DiagCode::ProviderBadResponse: return "ProviderBadResponse";
    case DiagCode::CommentExtractionFailed: return "CommentExtractionFailed";
    case DiagCode::CommentDroppedNoContext: return "CommentDroppedNoContext";
    case DiagCode::CommentDroppedBelowThreshold: return "CommentDroppedBelowThreshold";
    case DiagCode::MappingEntryDiscarded: return "MappingEntryDiscarded";
    case DiagCode::DuplicateNewNames: return "DuplicateNewNames";
    case DiagCode::RenameReparseFailed: return "RenameReparseFailed";
    case DiagCode::PreservationFailed: return "PreservationFailed";
    case DiagCode::CompileCommandNotFound: return "CompileCommandNotFound";
    case DiagCode::CompileCheckFailed: return "CompileCheckFailed";
    case DiagCode::ConfigError: return "ConfigError";
    case DiagCode::IoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace jrefine
