#pragma once

namespace adbeam {

/// Material constants: density rho, bending stiffness mu, beam length L.
struct BeamParams {
    double rho = 1.0;
    double mu = 1.0;
    double length = 1.0;

    /// Throws ContractViolation unless all three are finite and positive.
    void validate() const;
};

} // namespace adbeam
