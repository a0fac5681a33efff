#pragma once

#include <stdexcept>
#include <string>

namespace kolmo {

/// Thrown when a requested norm triple violates the admissibility inequality.
/// Carries the (negative) signed slack so callers can report by how much.
class infeasible_error : public std::runtime_error {
public:
    infeasible_error(const std::string& what, double slack)
        : std::runtime_error(what), slack_(slack) {}

    double slack() const noexcept { return slack_; }

private:
    double slack_;
};

/// Thrown when a bracketing loop exhausts its expansion cap.  This signals
/// inconsistent inputs or a bug, never an infeasible problem.
class no_convergence_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A computed result failed its own postcondition.
class internal_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace kolmo
