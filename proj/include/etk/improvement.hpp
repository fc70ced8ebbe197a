#pragma once

#include <optional>

#include "etk/et_core.hpp"
#include "etk/model.hpp"

namespace etk {

/// Dominantly-orbital point and the φ it induces.
struct PhiReport {
    double p_tilde = 0.0;
    double rho_tilde = 0.0;
    double mu = 0.0;
    double k = 0.0;
    double lambda = 0.0;
    double phi = 0.0;
};

struct DosmPoint {
    double p_tilde = 0.0;
    double rho_tilde = 0.0;
};

/// Solves N T'(p̃) p̃ = C_N² V'(ρ̃) ρ̃ with √C_N² p̃ ρ̃ = λ.
DosmPoint solve_dosm_point(const SystemSpec& spec, const ScanOptions& scan = {});

/// μ = p̃/(N T'(p̃)),
/// k = 2N p̃ T'(p̃)/ρ̃² + N p̃² T''(p̃)/ρ̃² + C_N² V''(ρ̃),
/// φ = λ/(N p̃ T'(p̃)) √(k/(C_N² μ)).
PhiReport compute_phi(const SystemSpec& spec, const ScanOptions& scan = {});

/// Classical envelope solve with Q replaced by Q_φ. φ is computed from scratch
/// unless an override (e.g. fitted to a known level) is given.
EnvelopeSolution solve_improved(const SystemSpec& spec, std::optional<double> phi_override = {},
                                const ScanOptions& scan = {});

}  // namespace etk
