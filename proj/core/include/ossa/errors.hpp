#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace ossa {

/// Base of every error raised by the library. `category()` is a stable
/// machine-readable tag; `what()` carries the human-readable message.
class Error : public std::runtime_error {
public:
    Error(std::string category, const std::string& message)
        : std::runtime_error(message), category_(std::move(category)) {}

    const std::string& category() const noexcept { return category_; }

private:
    std::string category_;
};

#define OSSA_DEFINE_ERROR(Name)                                       \
    class Name : public Error {                                       \
    public:                                                           \
        explicit Name(const std::string& message)                     \
            : Error(#Name, message) {}                                \
    }

OSSA_DEFINE_ERROR(DimError);
OSSA_DEFINE_ERROR(NumericError);
OSSA_DEFINE_ERROR(EmptyClassError);
OSSA_DEFINE_ERROR(EmptyDatasetError);
OSSA_DEFINE_ERROR(EmptySetError);
OSSA_DEFINE_ERROR(LabelError);
OSSA_DEFINE_ERROR(StateError);
OSSA_DEFINE_ERROR(CheckpointError);
OSSA_DEFINE_ERROR(InsufficientClassError);
OSSA_DEFINE_ERROR(CurveError);
OSSA_DEFINE_ERROR(ParamError);
OSSA_DEFINE_ERROR(SizeError);
OSSA_DEFINE_ERROR(ProfileError);
OSSA_DEFINE_ERROR(ConfigError);
OSSA_DEFINE_ERROR(IoError);
OSSA_DEFINE_ERROR(ParseError);

#undef OSSA_DEFINE_ERROR

}  // namespace ossa
