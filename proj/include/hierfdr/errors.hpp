#ifndef HIERFDR_ERRORS_HPP
#define HIERFDR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hfdr {

// Malformed or out-of-contract input data (bad p-values, dimension
// mismatches, unreadable files). Mapped to exit code 3 by the CLI.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

// A procedure's realized rejection cutoff exceeded the save-threshold of a
// censored p-value matrix, so the result would not match the uncensored
// computation. Mapped to exit code 4 by the CLI.
class SparseCutoffError : public std::runtime_error {
public:
    SparseCutoffError(double cutoff, double save_threshold)
        : std::runtime_error(make_message(cutoff, save_threshold)),
          cutoff_(cutoff),
          save_threshold_(save_threshold) {}

    double cutoff() const { return cutoff_; }
    double save_threshold() const { return save_threshold_; }

private:
    static std::string make_message(double cutoff, double save_threshold);

    double cutoff_;
    double save_threshold_;
};

} // namespace hfdr

#endif
