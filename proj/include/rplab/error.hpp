#ifndef RPLAB_ERROR_HPP
#define RPLAB_ERROR_HPP

#include <stdexcept>
#include <string>

namespace rplab
{

//
// Error kinds surfaced to the command line as machine-readable JSON.
//
enum class ErrorKind
{
    InvalidConfig,
    InvalidModel,
    NotAnosov,
    StepTooLarge,
    HorizonExceeded,
    NonHyperbolic,
    Io,
};

inline const char* to_string(ErrorKind kind)
{
    switch (kind)
    {
        case ErrorKind::InvalidConfig:
            return "invalid_config";
        case ErrorKind::InvalidModel:
            return "invalid_model";
        case ErrorKind::NotAnosov:
            return "not_anosov";
        case ErrorKind::StepTooLarge:
            return "step_too_large";
        case ErrorKind::HorizonExceeded:
            return "horizon_exceeded";
        case ErrorKind::NonHyperbolic:
            return "non_hyperbolic";
        case ErrorKind::Io:
            return "io";
    }
    return "unknown";
}

class Error : public std::runtime_error
{
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept
    {
        return kind_;
    }

private:
    ErrorKind kind_;
};

} // namespace rplab

#endif // RPLAB_ERROR_HPP
