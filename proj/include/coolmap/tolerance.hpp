#pragma once

namespace coolmap {

// One set of numerical tolerances threaded through every operation.
struct ToleranceSet {
    double herm_tol = 1e-10;   // max |M_jk - conj(M_kj)|
    double trace_tol = 1e-10;  // |Tr rho - 1|
    double psd_tol = 1e-9;     // relative to the spectral norm
    double comp_tol = 1e-9;    // Kraus completeness defect
    double unit_tol = 1e-9;    // max |U^dag U - I|
    double gap_tol = 1e-9;     // level and gap degeneracy
    double zero_tol = 1e-12;   // "this matrix element is zero"
    double prob_tol = 1e-10;   // probability vectors and tail sums
    double stoch_tol = 1e-10;  // stochastic-matrix column sums

    // Overrides the tolerances that decide feasibility (PSD and tail sums).
    ToleranceSet with_decision_tol(double tol) const
    {
        ToleranceSet t = *this;
        t.psd_tol = tol;
        t.prob_tol = tol;
        return t;
    }
};

} // namespace coolmap
