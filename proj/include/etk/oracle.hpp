#pragma once

#include <vector>

#include "etk/model.hpp"

namespace etk {

/// Grid of Gaussian widths for the three-boson variational oracle.
///
/// Widths are a_k / L² and b_l / L² with a_k, b_l geometric on [a_min, a_max].
/// With length_scale = 0, 1/L² is the width of the best single symmetric
/// Gaussian, which keeps the oracle independent of the envelope solution.
/// Each refinement inserts the log-midpoints of both grids, so successive bases
/// are nested and the variational energy can only go down.
struct GaussianBasisConfig {
    int n_a = 11;
    int n_b = 11;
    double a_min = 1e-1;
    double a_max = 1e4;
    double tol_rel = 1e-7;
    double cond_cap = 1e8;
    int max_refinements = 2;
    double length_scale = 0.0;
    bool analytic_elements = true;  // use PotentialSpec::pair_mean when present

    void validate() const;
};

struct OracleResult {
    double energy = 0.0;
    int basis_size = 0;
    bool converged = false;
    double delta_last = 0.0;
    bool bound = true;                  // false when no state lies below the continuum
    std::vector<double> history;        // energy after each growth step
};

/// Ground-state energy of three identical bosons (D = 3, non-relativistic)
/// from a permutation-symmetrised expansion in Gaussians of the Jacobi
/// coordinates x = r1 - r2, y = (r1 + r2)/2 - r3.
OracleResult oracle_ground_energy(const SystemSpec& spec, const GaussianBasisConfig& config = {});

/// Average of V over g(r) = 4 c^{3/2}/√π r² exp(-c r²), by quadrature.
double pair_mean_quadrature(const PotentialSpec& potential, double c);

/// Closed form when the family provides one, quadrature otherwise.
double pair_mean(const PotentialSpec& potential, double c);

/// |approx - exact| / |exact|.
double relative_error(double e_approx, double e_exact);

namespace detail {

/// One basis function exp(-½ (a x² + b y²)) before symmetrisation.
struct Width {
    double a = 0.0;
    double b = 0.0;
};

/// Lowest generalised eigenvalue for a candidate list, after greedy pruning of
/// candidates whose Cholesky pivot falls below 1/cond_cap. `start_perm`
/// relabels particles in the construction (0, 1 or 2 cyclic shifts).
struct BasisSolve {
    double energy = 0.0;
    std::vector<Width> kept;
};

BasisSolve solve_basis(const SystemSpec& spec, const std::vector<Width>& candidates, double cond_cap,
                       bool analytic, int start_perm = 0);

}  // namespace detail

}  // namespace etk
