#include "gtr/error.hpp"

namespace gtr {

std::string_view code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::UnknownNode: return "UnknownNode";
    case ErrorCode::UnknownLink: return "UnknownLink";
    case ErrorCode::UnknownInstance: return "UnknownInstance";
    case ErrorCode::UnknownUser: return "UnknownUser";
    case ErrorCode::UnknownItem: return "UnknownItem";
    case ErrorCode::UnknownEntity: return "UnknownEntity";
    case ErrorCode::UnknownRelation: return "UnknownRelation";
    case ErrorCode::UnknownFunction: return "UnknownFunction";
    case ErrorCode::Malformed: return "Malformed";
    case ErrorCode::DuplicateKey: return "DuplicateKey";
    case ErrorCode::ArityError: return "ArityError";
    case ErrorCode::DegenerateGraph: return "DegenerateGraph";
    case ErrorCode::DisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::NoPath: return "NoPath";
    case ErrorCode::EmptyGraph: return "EmptyGraph";
    case ErrorCode::BadK: return "BadK";
    case ErrorCode::NotBipartite: return "NotBipartite";
    case ErrorCode::EmptyTraining: return "EmptyTraining";
    case ErrorCode::MissingRelationLabels: return "MissingRelationLabels";
    case ErrorCode::NoLabeledNodes: return "NoLabeledNodes";
    case ErrorCode::EmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorCode::SlotUnfillable: return "SlotUnfillable";
    case ErrorCode::TemplateParseError: return "TemplateParseError";
    case ErrorCode::TooFewPairs: return "TooFewPairs";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::Timeout: return "Timeout";
    case ErrorCode::EndpointError: return "EndpointError";
    case ErrorCode::Unavailable: return "Unavailable";
    case ErrorCode::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

ErrorCategory category_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::ParseError:
    case ErrorCode::TemplateParseError:
      return ErrorCategory::Parse;
    case ErrorCode::NotFound:
    case ErrorCode::SchemaError:
    case ErrorCode::InvariantViolation:
      return ErrorCategory::Data;
    case ErrorCode::Timeout:
    case ErrorCode::EndpointError:
    case ErrorCode::Unavailable:
      return ErrorCategory::Endpoint;
    case ErrorCode::TooFewPairs:
    case ErrorCode::LengthMismatch:
    case ErrorCode::ConfigError:
      return ErrorCategory::Usage;
    default:
      return ErrorCategory::Execution;
  }
}

}  // namespace gtr
