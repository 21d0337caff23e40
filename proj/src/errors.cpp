#include "tantra/errors.hpp"

namespace tantra {

const char* err_name(Err code) {
  switch (code) {
    case Err::InvalidArgument: return "InvalidArgument";
    case Err::EmptyLabels: return "EmptyLabels";
    case Err::DanglingEndpoint: return "DanglingEndpoint";
    case Err::UnknownNode: return "UnknownNode";
    case Err::UnknownEdge: return "UnknownEdge";
    case Err::VersionMismatch: return "VersionMismatch";
    case Err::ParseError: return "ParseError";
    case Err::IoError: return "IoError";
    case Err::InvalidAspect: return "InvalidAspect";
    case Err::InvalidPerspective: return "InvalidPerspective";
    case Err::MissingUniqueId: return "MissingUniqueId";
    case Err::AspectMismatch: return "AspectMismatch";
    case Err::LevelSkip: return "LevelSkip";
    case Err::LevelReversal: return "LevelReversal";
    case Err::UnknownElement: return "UnknownElement";
    case Err::TooFewMediated: return "TooFewMediated";
    case Err::EndpointNotMediated: return "EndpointNotMediated";
    case Err::SelfRelationship: return "SelfRelationship";
    case Err::ScoreOutOfRange: return "ScoreOutOfRange";
    case Err::NegativeWeight: return "NegativeWeight";
    case Err::AllWeightsZero: return "AllWeightsZero";
    case Err::UnknownSeparationKind: return "UnknownSeparationKind";
    case Err::UnknownSubject: return "UnknownSubject";
    case Err::NotWhyAspect: return "NotWhyAspect";
    case Err::UnknownGoal: return "UnknownGoal";
    case Err::UnknownIntervention: return "UnknownIntervention";
    case Err::UnknownMarker: return "UnknownMarker";
    case Err::NonMonotonicDate: return "NonMonotonicDate";
    case Err::InvalidDimension: return "InvalidDimension";
    case Err::InvalidComparator: return "InvalidComparator";
    case Err::SchemaMismatch: return "SchemaMismatch";
    case Err::DuplicateKey: return "DuplicateKey";
    case Err::NegativeAmount: return "NegativeAmount";
    case Err::UnknownYear: return "UnknownYear";
    case Err::ConflictingFixture: return "ConflictingFixture";
    case Err::UnknownScheme: return "UnknownScheme";
    case Err::AmbiguousName: return "AmbiguousName";
    case Err::InvalidProbability: return "InvalidProbability";
    case Err::AsymmetricAdjacency: return "AsymmetricAdjacency";
    case Err::SelfEdge: return "SelfEdge";
    case Err::UnknownActor: return "UnknownActor";
    case Err::InvalidDecimal: return "InvalidDecimal";
    case Err::InvalidDate: return "InvalidDate";
  }
  return "UnknownError";
}

}  // namespace tantra
