#ifndef CPNS_ERRORS_HPP
#define CPNS_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace cpns {

// Error taxonomy shared by the library and the CLI exit-code mapping.
struct parse_error : std::runtime_error {
    explicit parse_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct validation_error : std::runtime_error {
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

struct convergence_error : std::runtime_error {
    double residual;
    convergence_error(const std::string& msg, double res)
        : std::runtime_error(msg), residual(res) {}
};

struct io_error : std::runtime_error {
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace cpns

#endif
