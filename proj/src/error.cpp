#include "thematic/error.hpp"

namespace thematic {

StageError::StageError(std::string stage, const Error& cause)
    : Error(cause.kind(), "stage '" + stage + "': " + cause.what()), stage_(std::move(stage)) {}

}  // namespace thematic
