#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>

namespace regs {

// trajectory left the trusted range (max field value over the abort threshold)
struct BlowUpError : std::runtime_error {
    double t;
    double max_value;
    BlowUpError(double t_, double max_value_, const std::string& what)
        : std::runtime_error(what), t(t_), max_value(max_value_) {}
};

// non-finite value produced during a step; node and species identify where
struct StepFailure : std::runtime_error {
    Eigen::Index node;
    int species;
    StepFailure(Eigen::Index node_, int species_, const std::string& what)
        : std::runtime_error(what), node(node_), species(species_) {}
};

} // namespace regs
