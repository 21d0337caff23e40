#pragma once

#include <stdexcept>
#include <string>

namespace tantra {

// Every rejection the engine can produce. Findings (validation violations,
// consistency anomalies, intervention deficiencies) are returned as data and
// never throw; throwing is reserved for contract and input errors.
enum class Err {
  InvalidArgument,
  // graph-store
  EmptyLabels,
  DanglingEndpoint,
  UnknownNode,
  UnknownEdge,
  VersionMismatch,
  ParseError,
  IoError,
  // metamodel
  InvalidAspect,
  InvalidPerspective,
  MissingUniqueId,
  AspectMismatch,
  LevelSkip,
  LevelReversal,
  UnknownElement,
  // relators / separations
  TooFewMediated,
  EndpointNotMediated,
  SelfRelationship,
  ScoreOutOfRange,
  NegativeWeight,
  AllWeightsZero,
  UnknownSeparationKind,
  UnknownSubject,
  // normative
  NotWhyAspect,
  UnknownGoal,
  UnknownIntervention,
  UnknownMarker,
  NonMonotonicDate,
  InvalidDimension,
  InvalidComparator,
  // sector-data
  SchemaMismatch,
  DuplicateKey,
  NegativeAmount,
  UnknownYear,
  ConflictingFixture,
  UnknownScheme,
  AmbiguousName,
  // ecosystem-sim
  InvalidProbability,
  AsymmetricAdjacency,
  SelfEdge,
  UnknownActor,
  // scalar parsing
  InvalidDecimal,
  InvalidDate,
};

const char* err_name(Err code);

class TantraError : public std::runtime_error {
 public:
  TantraError(Err code, const std::string& message)
      : std::runtime_error(std::string(err_name(code)) + ": " + message),
        code_(code),
        message_(message) {}

  Err code() const { return code_; }
  const std::string& message() const { return message_; }

 private:
  Err code_;
  std::string message_;
};

[[noreturn]] inline void fail(Err code, const std::string& message) {
  throw TantraError(code, message);
}

}  // namespace tantra
