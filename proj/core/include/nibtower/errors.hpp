#pragma once

#include <stdexcept>
#include <string>

namespace nibtower {

/// Base class for all library errors.
struct error : std::runtime_error {
    explicit error(const std::string& what) : std::runtime_error(what) {}
};

/// An operation's stated precondition does not hold for the given input.
struct precondition_error : error {
    explicit precondition_error(const std::string& what) : error(what) {}
};

/// A field triple fails the containment requirements of a tower.
struct not_a_tower_error : precondition_error {
    explicit not_a_tower_error(const std::string& what) : precondition_error(what) {}
};

/// An enumeration exceeded its configured size bound.
struct bound_exceeded_error : error {
    explicit bound_exceeded_error(const std::string& what) : error(what) {}
};

/// A p-adic computation did not resolve within the precision cap.
struct precision_exceeded_error : error {
    explicit precision_exceeded_error(const std::string& what) : error(what) {}
};

/// Valuation of zero requested.
struct zero_element_error : error {
    explicit zero_element_error(const std::string& what) : error(what) {}
};

} // namespace nibtower
