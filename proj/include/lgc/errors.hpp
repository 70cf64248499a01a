#pragma once

#include <stdexcept>
#include <string>

namespace lgc {

/// Violated contract on shapes, centers, indices or input schemas.
struct ShapeError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A mathematically well-formed input that the pipeline cannot analyze
/// (rank jumps, insufficient jet order, degenerate canonical forms, ...).
/// Carries the pipeline stage that gave up.
struct AnalyzabilityError : std::runtime_error {
    AnalyzabilityError(std::string stage_, const std::string& what_)
        : std::runtime_error("[" + stage_ + "] " + what_), stage(std::move(stage_)) {}
    std::string stage;
};

} // namespace lgc
