#include "etk/et_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <boost/math/tools/toms748_solve.hpp>

#include "etk/error.hpp"

namespace etk {

namespace {

struct Scalars {
    double N;
    double C;
    double sqrtC;
};

Scalars scalars(const SystemSpec& spec) {
    const double C = pair_count(spec.N);
    return {static_cast<double>(spec.N), C, std::sqrt(C)};
}

double residual_at(const SystemSpec& spec, const Scalars& s, double Q, double rho) {
    const double p = Q / (s.sqrtC * rho);
    return s.N * spec.kinematics.deriv1(p) * p - s.C * spec.potential.deriv1(rho) * rho;
}

const SystemSpec& require_nonrel(const SystemSpec& spec, std::string_view family) {
    spec.validate();
    if (spec.kinematics.family != "nonrel") {
        throw Error(ErrorKind::Parameter, "closed form requires non-relativistic kinematics");
    }
    if (spec.potential.family != family) {
        throw Error(ErrorKind::Parameter,
                    "closed form for '" + std::string(family) + "' applied to '" + spec.potential.family + "'");
    }
    return spec;
}

VariationalCharacter character_for(const SystemSpec& spec, double phi) {
    return phi == 2.0 ? classify_character(spec.kinematics, spec.potential) : VariationalCharacter::Undefined;
}

double relative_gap(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

}  // namespace

double CompactResiduals::max() const { return std::max({energy, virial, quantum}); }

CompactResidual compact_residual(const SystemSpec& spec, double Q, double rho) {
    return {rho, residual_at(spec, scalars(spec), Q, rho)};
}

std::vector<double> compact_roots(const SystemSpec& spec, double Q, const ScanOptions& scan) {
    if (!(scan.rho_min > 0.0) || !(scan.rho_max > scan.rho_min) || scan.intervals < 1) {
        throw Error(ErrorKind::Parameter, "invalid scan bracket");
    }
    if (!(Q > 0.0)) throw Error(ErrorKind::Parameter, "global quantum number must be positive");
    const Scalars s = scalars(spec);
    const int n = scan.intervals;
    const double log_span = std::log(scan.rho_max / scan.rho_min);
    std::vector<double> grid(static_cast<std::size_t>(n) + 1);
    std::vector<double> values(grid.size());
    bool any_finite = false;
    for (int i = 0; i <= n; ++i) {
        const double rho = i == n ? scan.rho_max : scan.rho_min * std::exp(log_span * i / n);
        grid[static_cast<std::size_t>(i)] = rho;
        values[static_cast<std::size_t>(i)] = residual_at(spec, s, Q, rho);
        any_finite = any_finite || std::isfinite(values[static_cast<std::size_t>(i)]);
    }
    if (!any_finite) throw Error(ErrorKind::Domain, "compact residual is not finite anywhere on the bracket");

    auto f = [&](double rho) { return residual_at(spec, s, Q, rho); };
    std::vector<double> roots;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double fa = values[i];
        const double fb = values[i + 1];
        if (!std::isfinite(fa) || !std::isfinite(fb)) continue;
        if (fa == 0.0) {
            if (roots.empty() || roots.back() != grid[i]) roots.push_back(grid[i]);
            continue;
        }
        if (fb == 0.0) {
            roots.push_back(grid[i + 1]);
            continue;
        }
        if ((fa < 0.0) == (fb < 0.0)) continue;
        boost::uintmax_t max_iter = 200;
        const auto bracket = boost::math::tools::toms748_solve(f, grid[i], grid[i + 1], fa, fb,
                                                               boost::math::tools::eps_tolerance<double>(52),
                                                               max_iter);
        const double lo = bracket.first;
        const double hi = bracket.second;
        const double flo = f(lo);
        const double fhi = f(hi);
        roots.push_back(std::abs(flo) <= std::abs(fhi) ? lo : hi);
    }
    return roots;
}

EnvelopeSolution solve_compact_at(const SystemSpec& spec, double Q, double phi, const ScanOptions& scan) {
    spec.validate();
    const auto roots = compact_roots(spec, Q, scan);
    if (roots.empty()) {
        throw Error(ErrorKind::NoBoundState,
                    "no stationary point of the envelope energy on [" + std::to_string(scan.rho_min) + ", " +
                        std::to_string(scan.rho_max) + "] for potential '" + spec.potential.family + "'");
    }
    const Scalars s = scalars(spec);
    EnvelopeSolution best;
    best.energy = std::numeric_limits<double>::infinity();
    for (double rho : roots) {
        const double p = Q / (s.sqrtC * rho);
        const double E = s.N * spec.kinematics.eval(p) + s.C * spec.potential.eval(rho);
        if (E < best.energy) {
            best.energy = E;
            best.p0 = p;
            best.rho0 = rho;
        }
    }
    if (!std::isfinite(best.energy)) {
        throw Error(ErrorKind::Domain, "envelope energy is not finite at the stationary points");
    }
    best.Q_used = Q;
    best.phi_used = phi;
    best.character = character_for(spec, phi);
    best.root_count = static_cast<int>(roots.size());
    return best;
}

EnvelopeSolution solve_compact(const SystemSpec& spec, double phi, const ScanOptions& scan) {
    spec.validate();
    return solve_compact_at(spec, global_Q(spec.state, spec.D, phi), phi, scan);
}

CompactResiduals compact_residuals(const SystemSpec& spec, const EnvelopeSolution& sol) {
    const Scalars s = scalars(spec);
    const double kinetic = s.N * spec.kinematics.eval(sol.p0);
    const double potential = s.C * spec.potential.eval(sol.rho0);
    CompactResiduals r;
    const double e_scale = std::max({std::abs(sol.energy), std::abs(kinetic), std::abs(potential)});
    r.energy = e_scale == 0.0 ? 0.0 : std::abs(sol.energy - kinetic - potential) / e_scale;
    r.virial = relative_gap(s.N * spec.kinematics.deriv1(sol.p0) * sol.p0,
                            s.C * spec.potential.deriv1(sol.rho0) * sol.rho0);
    r.quantum = relative_gap(sol.Q_used, s.sqrtC * sol.p0 * sol.rho0);
    return r;
}

EnvelopeSolution solve_power_law(const SystemSpec& spec, double phi) {
    require_nonrel(spec, "power");
    const double G = spec.potential.param("G");
    const double beta = spec.potential.param("beta");
    if (!(beta > -2.0 && beta < 0.0)) {
        throw Error(ErrorKind::Parameter, "power-law closed form needs -2 < beta < 0");
    }
    const Scalars s = scalars(spec);
    const double Q = global_Q(spec.state, spec.D, phi);
    const double m = spec.m;
    const double nb = std::abs(beta);
    const double expo = 1.0 / (2.0 + beta);

    EnvelopeSolution sol;
    sol.rho0 = std::pow(s.N * Q * Q / (m * nb * G * s.C * s.C), expo);
    sol.energy = -(2.0 + beta) * std::pow((G / 2.0) * (G / 2.0) * std::pow(s.C, 2.0 - beta) *
                                              std::pow(s.N * Q * Q / (2.0 * m * nb), beta),
                                          expo);
    sol.p0 = Q / (s.sqrtC * sol.rho0);
    sol.Q_used = Q;
    sol.phi_used = phi;
    sol.character = character_for(spec, phi);
    sol.root_count = 1;
    return sol;
}

double cubic_F(CubicSign sign, double Y) {
    if (sign == CubicSign::Plus) return 2.0 * std::sinh(std::asinh(Y) / 3.0);
    if (!(Y >= 1.0)) throw Error(ErrorKind::Domain, "F-(Y) requires Y >= 1");
    return 2.0 * std::cosh(std::acosh(Y) / 3.0);
}

TruncCoulombAux trunc_coulomb_aux(double A) {
    if (!(A > 0.0) || !std::isfinite(A)) throw Error(ErrorKind::Parameter, "A must be positive");
    const double s = A * (A + 6.0);
    // Y ≥ 1 exactly ((2A²+18A+27)² - 4A(A+6)³ = 108A + 729); clamp rounding.
    const double Y = std::max(1.0, (2.0 * A * A * A + 18.0 * A * A + 27.0 * A) / (2.0 * std::pow(s, 1.5)));
    const double y = std::sqrt(s) / 3.0 * cubic_F(CubicSign::Minus, Y) + A / 3.0;
    return {A, y};
}

EnvelopeSolution solve_trunc_coulomb(const SystemSpec& spec, double phi) {
    require_nonrel(spec, "trunc-coulomb");
    const double c = spec.potential.param("c");
    const double d = spec.potential.param("d");
    if (!(c > 0.0)) throw Error(ErrorKind::Parameter, "trunc-coulomb closed form needs c > 0");
    if (d < 0.0) throw Error(ErrorKind::Parameter, "trunc-coulomb closed form needs d >= 0");
    if (d == 0.0) {
        SystemSpec coulomb = spec;
        coulomb.potential = power_law(c, -1.0);
        auto sol = solve_power_law(coulomb, phi);
        sol.character = character_for(spec, phi);
        return sol;
    }
    const Scalars s = scalars(spec);
    const double Q = global_Q(spec.state, spec.D, phi);
    const auto aux = trunc_coulomb_aux(s.N * Q * Q / (s.C * s.C * spec.m * c * d));
    const double y = aux.y;

    EnvelopeSolution sol;
    sol.rho0 = d * y;
    sol.energy = -s.C * (c / d) * (y + 2.0) / (2.0 * (y + 1.0) * (y + 1.0));
    sol.p0 = Q / (s.sqrtC * sol.rho0);
    sol.Q_used = Q;
    sol.phi_used = phi;
    sol.character = character_for(spec, phi);
    sol.root_count = 1;
    return sol;
}

TruncCoulombLimits trunc_coulomb_limits(const SystemSpec& spec, double phi) {
    require_nonrel(spec, "trunc-coulomb");
    const double c = spec.potential.param("c");
    const double d = spec.potential.param("d");
    if (!(c > 0.0) || d < 0.0) throw Error(ErrorKind::Parameter, "trunc-coulomb limits need c > 0, d >= 0");
    const Scalars s = scalars(spec);
    const double Q = global_Q(spec.state, spec.D, phi);
    const double m = spec.m;

    TruncCoulombLimits out;
    // Linear regime V ≈ -c/d + (c/d²) r.
    out.large_d = d == 0.0 ? -std::numeric_limits<double>::infinity()
                           : -s.C * c / d + 1.5 * std::cbrt(s.N * s.C) * std::cbrt(Q * Q * c * c / (m * d * d * d * d));
    // Coulomb regime with first-order shift C_N² c d / ρ0².
    out.small_d = -std::pow(s.C, 3) * m * c * c / (2.0 * s.N * Q * Q) +
                  std::pow(s.C, 5) * m * m * c * c * c * d / (s.N * s.N * std::pow(Q, 4));
    return out;
}

}  // namespace etk
