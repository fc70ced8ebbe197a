#pragma once

#include <vector>

#include "etk/model.hpp"

namespace etk {

/// Logarithmic bracket scanned for sign changes of the compact residual.
struct ScanOptions {
    double rho_min = 1e-6;
    double rho_max = 1e6;
    int intervals = 600;
};

struct CompactResidual {
    double rho = 0.0;
    double residual = 0.0;  // N T'(p) p - C_N² V'(ρ) ρ,  p = Q/(√C_N² ρ)
};

/// Relative residuals of the three compact equations for a given solution.
struct CompactResiduals {
    double energy = 0.0;     // E = N T(p0) + C_N² V(ρ0)
    double virial = 0.0;     // N T'(p0) p0 = C_N² V'(ρ0) ρ0
    double quantum = 0.0;    // Q = √C_N² p0 ρ0

    double max() const;
};

CompactResidual compact_residual(const SystemSpec& spec, double Q, double rho);

/// All stationary points ρ of the envelope energy at global quantum number Q,
/// ascending. Empty when no sign change is found on the bracket.
std::vector<double> compact_roots(const SystemSpec& spec, double Q, const ScanOptions& scan = {});

/// Solves the compact equations with Q = global_Q(state, D, φ) by root finding.
/// Among several stationary points the one of lowest energy is returned.
EnvelopeSolution solve_compact(const SystemSpec& spec, double phi, const ScanOptions& scan = {});

/// Same, for an explicit global quantum number.
EnvelopeSolution solve_compact_at(const SystemSpec& spec, double Q, double phi,
                                  const ScanOptions& scan = {});

CompactResiduals compact_residuals(const SystemSpec& spec, const EnvelopeSolution& solution);

/// Closed form for V = -G r^β, -2 < β < 0, non-relativistic kinematics.
EnvelopeSolution solve_power_law(const SystemSpec& spec, double phi);

enum class CubicSign { Plus, Minus };

/// Real root of t³ ± 3t - 2Y = 0: F₊(Y) = 2 sinh(asinh(Y)/3), F₋(Y) = 2 cosh(acosh(Y)/3).
double cubic_F(CubicSign sign, double Y);

struct TruncCoulombAux {
    double A = 0.0;
    double y = 0.0;
};

/// Scaled radius y solving y³ = A (y+1)² through the F₋ closed form.
TruncCoulombAux trunc_coulomb_aux(double A);

/// Closed form for V = -c/(r+d), non-relativistic kinematics. d = 0 falls
/// back to the Coulomb closed form.
EnvelopeSolution solve_trunc_coulomb(const SystemSpec& spec, double phi);

struct TruncCoulombLimits {
    double large_d = 0.0;
    double small_d = 0.0;
};

/// Asymptotic energies of the truncated Coulomb solution for d ≫ ρ0 and d ≪ ρ0.
TruncCoulombLimits trunc_coulomb_limits(const SystemSpec& spec, double phi);

}  // namespace etk
