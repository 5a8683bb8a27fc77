#pragma once

#include <stdexcept>
#include <string>

namespace pa {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// data model
struct EmptyClass : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };

// potential / optimization
struct DegeneratePotential : Error { using Error::Error; };
struct NonFiniteGradient : Error { using Error::Error; };

// resampling
struct EmptySource : Error { using Error::Error; };
struct InvalidRatio : Error { using Error::Error; };
struct TooFewMinority : Error { using Error::Error; };

// complexity
struct TooFewPoints : Error { using Error::Error; };

// evaluation
struct EmptyTrainSet : Error { using Error::Error; };
struct SingleClassTestFold : Error { using Error::Error; };

// file ingestion
struct MalformedHeader : Error { using Error::Error; };
struct RowArityMismatch : Error { using Error::Error; };
struct MissingLabelColumn : Error { using Error::Error; };
struct NonNumericFeature : Error { using Error::Error; };

} // namespace pa
