#include "mim/error.hpp"

namespace mim {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidEncoding: return "InvalidEncoding";
    case ErrorCode::DepthExceeded: return "DepthExceeded";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::DuplicateSource: return "DuplicateSource";
    case ErrorCode::SelfMapping: return "SelfMapping";
    case ErrorCode::StaleSwap: return "StaleSwap";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::EmptyGroup: return "EmptyGroup";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::InsufficientData: return "InsufficientData";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::IoError: return "IoError";
  }
  return "Error";
}

}  // namespace mim
