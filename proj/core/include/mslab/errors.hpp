#pragma once

#include <stdexcept>
#include <string>

namespace mslab {

/// Argument outside the open unit disk (or closed disk where allowed).
class DiskDomainError : public std::domain_error {
public:
    explicit DiskDomainError(const std::string& what) : std::domain_error(what) {}
};

/// Two boundary functions with incompatible circle grids were combined.
class GridMismatchError : public std::invalid_argument {
public:
    explicit GridMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

/// The grid-resolution policy cannot accommodate the request (cap 2^20),
/// or a probe depth exceeds what the current grid resolves.
class ResolutionError : public std::runtime_error {
public:
    explicit ResolutionError(const std::string& what) : std::runtime_error(what) {}
};

/// Evaluation at the location of a singular atom.
class SingularityError : public std::runtime_error {
public:
    explicit SingularityError(const std::string& what) : std::runtime_error(what) {}
};

/// Modulus input below the admissible floor for outer construction.
class DegenerateModulusError : public std::invalid_argument {
public:
    explicit DegenerateModulusError(const std::string& what) : std::invalid_argument(what) {}
};

/// min |1 - I b| fell below the admissible floor while building a space.
class DegenerateDenominatorError : public std::runtime_error {
public:
    explicit DegenerateDenominatorError(const std::string& what) : std::runtime_error(what) {}
};

/// ||g|| deviates from 1 beyond tolerance: the pair does not produce an
/// extremal multiplier at any admissible grid size.
class NonExtremalError : public std::runtime_error {
public:
    explicit NonExtremalError(const std::string& what) : std::runtime_error(what) {}
};

/// Negative-frequency content above the Hardy-space admissibility gate.
class AnalyticityError : public std::runtime_error {
public:
    explicit AnalyticityError(const std::string& what) : std::runtime_error(what) {}
};

/// A structural identity that must hold by construction failed (internal
/// consistency check), e.g. defect rank above 2 or a sample point leaving
/// its Stolz region.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace mslab
