#include "etk/improvement.hpp"

#include <cmath>
#include <limits>

#include "etk/error.hpp"

namespace etk {

namespace {

void require_improvable(const SystemSpec& spec) {
    spec.validate();
    if (spec.D < 2) throw Error(ErrorKind::UnsupportedImprovement, "improvement unavailable at D=1");
}

}  // namespace

DosmPoint solve_dosm_point(const SystemSpec& spec, const ScanOptions& scan) {
    require_improvable(spec);
    const double lambda = orbital_lambda(spec.state, spec.D);
    if (!(lambda > 0.0)) {
        throw Error(ErrorKind::ImprovementUndefined,
                    "orbital quantum number vanishes (D=2 with all l=0); no dominantly orbital point");
    }
    const auto roots = compact_roots(spec, lambda, scan);
    if (roots.empty()) {
        throw Error(ErrorKind::NoBoundState, "no dominantly orbital point for potential '" + spec.potential.family + "'");
    }
    const double N = spec.N;
    const double C = pair_count(spec.N);
    DosmPoint best;
    double best_energy = std::numeric_limits<double>::infinity();
    for (double rho : roots) {
        const double p = lambda / (std::sqrt(C) * rho);
        const double E = N * spec.kinematics.eval(p) + C * spec.potential.eval(rho);
        if (E < best_energy) {
            best_energy = E;
            best = {p, rho};
        }
    }
    return best;
}

PhiReport compute_phi(const SystemSpec& spec, const ScanOptions& scan) {
    const DosmPoint point = solve_dosm_point(spec, scan);
    const double N = spec.N;
    const double C = pair_count(spec.N);
    const double p = point.p_tilde;
    const double rho = point.rho_tilde;
    const double dT = spec.kinematics.deriv1(p);
    const double d2T = spec.kinematics.deriv2(p);

    PhiReport report;
    report.p_tilde = p;
    report.rho_tilde = rho;
    report.lambda = orbital_lambda(spec.state, spec.D);
    report.mu = p / (N * dT);
    report.k = 2.0 * N * p * dT / (rho * rho) + N * p * p * d2T / (rho * rho) + C * spec.potential.deriv2(rho);
    if (!(report.k > 0.0)) {
        throw Error(ErrorKind::ImprovementUndefined, "effective spring constant k <= 0 at the orbital point");
    }
    report.phi = report.lambda / (N * p * dT) * std::sqrt(report.k / (C * report.mu));
    return report;
}

EnvelopeSolution solve_improved(const SystemSpec& spec, std::optional<double> phi_override, const ScanOptions& scan) {
    require_improvable(spec);
    const double phi = phi_override ? *phi_override : compute_phi(spec, scan).phi;
    return solve_compact(spec, phi, scan);
}

}  // namespace etk
