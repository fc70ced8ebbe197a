#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "etk/character.hpp"

namespace etk {

using RealFn = std::function<double(double)>;
using ParamMap = std::map<std::string, double, std::less<>>;

/// Kinetic energy T(p) with its first two derivatives.
struct KinematicsSpec {
    std::string family;  // "nonrel" or "custom"
    double mass = 0.0;   // meaningful for "nonrel" only
    RealFn eval;
    RealFn deriv1;
    RealFn deriv2;
    Curvature bT_curvature = Curvature::Indefinite;
};

/// Two-body potential V(r) with analytic V', V'' and concavity metadata of
/// b_V(y) = V(√y).
///
/// `pair_mean`, when set, returns the closed-form average of V over the
/// normalised pair density g(r) = 4 c^{3/2}/√π r² exp(-c r²). The oracle
/// falls back to quadrature when it is empty.
struct PotentialSpec {
    std::string family;
    ParamMap params;
    RealFn eval;
    RealFn deriv1;
    RealFn deriv2;
    Curvature bV_curvature = Curvature::Indefinite;
    RealFn pair_mean;

    double param(std::string_view name) const;
};

KinematicsSpec nonrelativistic(double mass);
KinematicsSpec custom_kinematics(RealFn T, RealFn dT, RealFn d2T, Curvature bT_curvature);

// Built-in families. Sign conventions:
//   power          V = sgn(β) G r^β         (attractive for β < 0)
//   trunc-coulomb  V = -c/(r+d)
//   exciton        V = -c/√(r²+d²)
//   linear         V = β r
//   cubic          V = α r³
//   log            V = β ln r
//   gauss          V = -β exp(-r²)
//   cubic-linear   V = α C r³ + β (1-C) r
//   cubic-log      V = α C r³ + β (1-C) ln r
//   cubic-gauss    V = α C r³ - β (1-C) exp(-r²)
PotentialSpec power_law(double G, double beta);
PotentialSpec truncated_coulomb(double c, double d);
PotentialSpec exciton(double c, double d);
PotentialSpec linear(double beta);
PotentialSpec cubic(double alpha);
PotentialSpec logarithmic(double beta);
PotentialSpec gaussian_well(double beta);
PotentialSpec cubic_linear(double alpha, double beta, double C);
PotentialSpec cubic_log(double alpha, double beta, double C);
PotentialSpec cubic_gauss(double alpha, double beta, double C);

/// Identifiers accepted by make_potential, in catalog order.
std::span<const std::string_view> potential_ids();

/// Parameter names understood by a family together with their defaults.
/// A NaN default marks a required parameter.
ParamMap family_defaults(std::string_view id);

/// Builds a family from its identifier; unknown keys or ids raise a Usage error,
/// invalid values a Parameter error.
PotentialSpec make_potential(std::string_view id, const ParamMap& params);

/// Geometric grid y = r² with r in [1e-3, 1e3], 200 points.
std::vector<double> default_curvature_samples();

/// Sampled sign of d²b_V/dy² = [V''(r) r - V'(r)] / (4 r³), r = √y.
Curvature bV_curvature_sign(const PotentialSpec& potential, std::span<const double> y_samples);

/// Same test for b_T(y) = T(√y).
Curvature bT_curvature_sign(const KinematicsSpec& kinematics, std::span<const double> y_samples);

VariationalCharacter classify_character(Curvature bT, Curvature bV);
VariationalCharacter classify_character(const KinematicsSpec& kin, const PotentialSpec& pot);

}  // namespace etk
