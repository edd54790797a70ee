#pragma once

#include <stdexcept>

namespace gemt {

// Base class for everything the engine throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define GEMT_DECLARE_ERROR(NAME)                                               \
    class NAME : public Error {                                                \
    public:                                                                    \
        using Error::Error;                                                    \
    }

GEMT_DECLARE_ERROR(ConfigError);
GEMT_DECLARE_ERROR(EmptyDescriptor);
GEMT_DECLARE_ERROR(TokenBudgetExceeded);
GEMT_DECLARE_ERROR(OracleFailure);
GEMT_DECLARE_ERROR(MalformedOracleOutput);
GEMT_DECLARE_ERROR(MixedDomainParents);
GEMT_DECLARE_ERROR(SingleDomainParents);
GEMT_DECLARE_ERROR(GenerationFailure);
GEMT_DECLARE_ERROR(DegenerateMesh);
GEMT_DECLARE_ERROR(ZeroAxis);
GEMT_DECLARE_ERROR(AlphaOutOfRange);
GEMT_DECLARE_ERROR(BoundsInvalid);
GEMT_DECLARE_ERROR(MissingFitness);
GEMT_DECLARE_ERROR(MissingObjectives);
GEMT_DECLARE_ERROR(TaskMismatch);
GEMT_DECLARE_ERROR(EmptyInput);
GEMT_DECLARE_ERROR(InsufficientTasks);
GEMT_DECLARE_ERROR(ParseError);
GEMT_DECLARE_ERROR(UnsupportedFormat);
GEMT_DECLARE_ERROR(CorruptCheckpoint);
GEMT_DECLARE_ERROR(IncompleteRun);

#undef GEMT_DECLARE_ERROR

} // namespace gemt
