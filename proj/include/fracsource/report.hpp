#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace fracsource {

/// A recovered component together with solver diagnostics.
template <class Component>
struct ReconstructionReport {
    explicit ReconstructionReport(Component v) : value(std::move(v)) {}

    Component value;
    std::size_t iterations = 0;
    bool converged = true;
    /// Distance between successive iterates (iterative solvers).
    std::vector<double> step_history;
    /// Data misfit after each iteration, or a single entry for direct solvers.
    std::vector<double> residual_history;
    /// Relative L^2 error per iteration when the true component was supplied.
    std::vector<double> error_history;
    /// Named scalars such as regularization parameters, in insertion order.
    std::vector<std::pair<std::string, double>> diagnostics;

    std::optional<double> diagnostic(const std::string& name) const {
        for (const auto& [key, v] : diagnostics) {
            if (key == name) return v;
        }
        return std::nullopt;
    }
};

}  // namespace fracsource
