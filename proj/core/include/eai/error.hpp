#pragma once

#include <stdexcept>
#include <string>

namespace eai {

// Coarse classification used by the CLI to pick an exit code.
enum class ErrorKind {
    usage = 1,
    data = 2,
    numerical = 3,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

#define EAI_DEFINE_ERROR(Name, Kind)                                         \
    class Name : public Error {                                              \
    public:                                                                  \
        explicit Name(const std::string& what) : Error(ErrorKind::Kind, what) {} \
    }

EAI_DEFINE_ERROR(ShapeMismatch, data);
EAI_DEFINE_ERROR(EmptyInput, data);
EAI_DEFINE_ERROR(IndexError, data);
EAI_DEFINE_ERROR(FormatError, data);
EAI_DEFINE_ERROR(DimensionError, data);
EAI_DEFINE_ERROR(TooShort, data);
EAI_DEFINE_ERROR(DegenerateInput, data);
EAI_DEFINE_ERROR(BatchTooSmall, data);
EAI_DEFINE_ERROR(InvalidTree, data);
EAI_DEFINE_ERROR(FrameOutOfRange, data);
EAI_DEFINE_ERROR(HorizonNotRepresentable, data);
EAI_DEFINE_ERROR(EmptyDataset, data);
EAI_DEFINE_ERROR(IoError, data);
EAI_DEFINE_ERROR(VersionMismatch, data);
EAI_DEFINE_ERROR(ConfigError, usage);
EAI_DEFINE_ERROR(NonFiniteError, numerical);
EAI_DEFINE_ERROR(NonFiniteLoss, numerical);

#undef EAI_DEFINE_ERROR

}  // namespace eai
